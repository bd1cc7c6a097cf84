"""Finite-mode Ito-Clifford calculus and a Picard solver for nonlocal QSDEs."""

from ._fqsde import *  # noqa: F401,F403
from ._fqsde import (  # noqa: F401
    ConfigError,
    ContractViolation,
    DomainError,
    Error,
    NonConvergence,
    ResourceError,
)

__version__ = "0.1.0"
