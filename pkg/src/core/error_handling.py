"""
Error Handling and Logging for qdesign

Provides the exception hierarchy used by the field, geometry, graph,
verification, admissibility, search and catalog packages, the centralized
logging configuration for the command line, and a timing context manager
whose measurements end up in certificates.

Verification outcomes are never exceptions: a family that fails to cover
the group is a verdict. The classes below are raised only for malformed
input or violated preconditions.
"""

import logging
import sys
import time
from datetime import datetime
from typing import Any, Dict, Iterable, Optional


class QDesignError(Exception):
    """Base exception for qdesign errors"""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.context = context or {}
        self.timestamp = datetime.utcnow()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": str(self),
            "context": {k: _plain(v) for k, v in self.context.items()},
        }


def _plain(value: Any) -> Any:
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_plain(v) for v in value]
    return str(value)


# Field arithmetic


class FieldError(QDesignError):
    """Errors raised while building or using a finite field context"""

    def __init__(self, message: str, field: str = "Unknown", **context):
        super().__init__(message, {"field": field, **context})
        self.field = field


class NotIrreducibleError(FieldError):
    """The modulus is reducible over the base field"""


class NotPrimitiveError(FieldError):
    """The modulus is irreducible but its root does not generate the field"""

    def __init__(self, message: str, field: str = "Unknown", root_order: Optional[int] = None):
        super().__init__(message, field, root_order=root_order)
        self.root_order = root_order


class FieldTooLargeError(FieldError):
    """The multiplicative group exceeds the configured table guard"""


class InvalidModulusError(FieldError):
    """The modulus is not monic of the declared degree"""


class ContextMismatchError(FieldError):
    """Operands belong to different field contexts"""


class DivideByZeroError(FieldError):
    """Inverse of the zero element was requested"""


# Projective geometry


class GeometryError(QDesignError):
    """Errors raised by the Singer-group geometry layer"""


class EqualPointsError(GeometryError):
    """A line was requested through a single point"""


class NotDivisibleError(GeometryError):
    """The spread dimension does not divide the ambient dimension"""


class NotHyperplaneError(GeometryError):
    """The given generators do not span a hyperplane"""


# Graphs and labelings


class GraphError(QDesignError):
    """Errors raised while building graphs or labelings"""

    def __init__(self, message: str, family: str = "custom", **context):
        super().__init__(message, {"family": family, **context})
        self.family = family


class BadParamsError(GraphError):
    """Family parameters are out of range"""


class CollisionError(GraphError):
    """Seed expansion assigned the same label twice or one vertex two labels"""


class SeedIncompleteError(GraphError):
    """Seed does not cover a transversal of the rotation orbits"""


class LogMapError(QDesignError):
    """Errors raised by the logarithmic map onto cyclotomic classes"""


class NotPrimeError(LogMapError):
    """The Singer group order is not prime"""


class NotPrimitiveRootError(LogMapError):
    """The chosen base is not a primitive root of the prime"""


# Verification


class VerificationError(QDesignError):
    """Precondition failures of the verification engine"""


class FamilyNotVerifiedError(VerificationError):
    """Development was requested for a family that does not verify"""


class SemiregularityError(VerificationError):
    """The Frobenius group does not act semiregularly on the target"""


class EvenOrderError(VerificationError):
    """A Hamiltonian cycle system was requested for an even order"""


class BadPrimeError(VerificationError):
    """The Paley construction needs a prime congruent to 3 modulo 4"""


# Admissibility and search


class AdmissibilityError(QDesignError):
    """Errors raised by admissibility and size computations"""

    def __init__(self, message: str, parameters: Optional[Dict[str, Any]] = None):
        super().__init__(message, {"parameters": parameters or {}})
        self.parameters = parameters or {}


class NotAdmissibleError(AdmissibilityError):
    """Size formulas were requested for non-admissible parameters"""


class SearchError(QDesignError):
    """Errors raised before a search starts"""


class InfeasibleCountError(SearchError):
    """The counting condition of the search target cannot hold"""

    def __init__(self, message: str, required: int, available: int):
        super().__init__(message, {"required": required, "available": available})
        self.required = required
        self.available = available


# Catalog and command line


class CatalogError(QDesignError):
    """Errors raised while loading catalog entries"""

    def __init__(self, message: str, entry_id: str = "Unknown", **context):
        super().__init__(message, {"entry_id": entry_id, **context})
        self.entry_id = entry_id


class UnknownEntryError(CatalogError):
    """No catalog entry carries the requested id"""


class CorruptEntryError(CatalogError):
    """A catalog entry violates the schema"""

    def __init__(self, message: str, entry_id: str = "Unknown", errors: Iterable[str] = ()):
        super().__init__(message, entry_id, errors=list(errors))
        self.errors = list(errors)


class UsageError(QDesignError):
    """Invalid command line invocation or input document"""


class LoggingManager:
    """
    Centralized logging configuration and management
    """

    _configured_handlers = []

    @staticmethod
    def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None):
        """
        Setup logging for the command line

        Console output goes to stderr so that JSON written to stdout stays
        machine readable.

        Args:
            log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
            log_file: Optional log file path
        """
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )

        root_logger = logging.getLogger()
        root_logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))

        # Repeated runs in one process (tests) must not stack handlers
        for handler in LoggingManager._configured_handlers:
            root_logger.removeHandler(handler)
        LoggingManager._configured_handlers = []

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)
        LoggingManager._configured_handlers.append(console_handler)

        if log_file:
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)
            LoggingManager._configured_handlers.append(file_handler)

        for logger_name in ("src.field", "src.geometry", "src.verification", "src.search"):
            logging.getLogger(logger_name).setLevel(
                getattr(logging, log_level.upper(), logging.INFO)
            )

    @staticmethod
    def get_logger(name: str) -> logging.Logger:
        """Get a logger under the qdesign namespace"""
        return logging.getLogger(f"qdesign.{name}")


def log_operation(name: str, duration: float, success: bool):
    """Log timing of a verification or search operation"""
    logger = LoggingManager.get_logger("metrics")
    status = "SUCCESS" if success else "FAILED"
    logger.info(f"OP - {name} - {status} - {duration:.3f}s")


class OperationTracker:
    """Context manager to time an operation for certificates and logs"""

    def __init__(self, name: str):
        self.name = name
        self.start_time: Optional[float] = None
        self.duration = 0.0
        self.success = False

    @property
    def elapsed_ms(self) -> int:
        if self.start_time is not None and not self.duration:
            return int(round((time.perf_counter() - self.start_time) * 1000))
        return int(round(self.duration * 1000))

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time is not None:
            self.duration = time.perf_counter() - self.start_time
        self.success = exc_type is None
        log_operation(self.name, self.duration, self.success)
        return False
