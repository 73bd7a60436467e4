"""
Core Infrastructure for qdesign

This package holds the exception hierarchy, logging configuration and
operation timing shared by every other qdesign package.
"""

__version__ = "1.0.0"

from .error_handling import (
    QDesignError,
    LoggingManager,
    OperationTracker,
)

__all__ = ["QDesignError", "LoggingManager", "OperationTracker"]
