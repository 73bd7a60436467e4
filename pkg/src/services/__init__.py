"""
Service Layer for qdesign

Configuration loading and ordered parallel execution shared by the field,
verification, search and command line layers. The search dispatch lives in
src.services.search_service and is imported from there, since it depends on
the field and search packages that themselves load this package.
"""

__version__ = "1.0.0"

from .config_loader import ToolkitConfig, get_config, use_config
from .task_runner import ParallelRunner

__all__ = ["ToolkitConfig", "get_config", "use_config", "ParallelRunner"]
