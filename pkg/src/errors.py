"""
UVC Voltage Risk - Errors
Typed exceptions shared by every component, each carrying its CLI exit code
"""

from typing import List, Optional


class UvcRiskError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1


class InputError(UvcRiskError):
    """Malformed input files, dimension mismatches or out-of-range parameters."""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class TopologyError(InputError):
    """The branch graph is not a spanning tree rooted at the slack bus."""


class InsufficientDataError(InputError):
    """Not enough historical records to fit or predict."""


class DegenerateConditioningError(UvcRiskError):
    """Every component likelihood of the conditioning value is non-finite."""

    exit_code = 4


class NumericError(UvcRiskError):
    """Numerical breakdown: singular basis, residual violation or root-finding failure."""

    exit_code = 4


class InfeasibleError(UvcRiskError):
    """The management problem has no feasible strategy."""

    exit_code = 3

    def __init__(self, message: str, binding_buses: Optional[List[int]] = None):
        self.binding_buses = list(binding_buses or [])
        if self.binding_buses:
            message = f"{message} (binding buses: {', '.join(str(b) for b in self.binding_buses)})"
        super().__init__(message)


class UnboundedError(UvcRiskError):
    """The management problem objective is unbounded below."""

    exit_code = 4


class ResourceError(UvcRiskError):
    """A solver resource limit (node count) was exceeded."""

    exit_code = 4
