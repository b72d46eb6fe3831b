"""Shor's order-finding and factoring algorithm on a dense state-vector simulator."""

from .errors import (
    CapacityError,
    DomainError,
    IntegrityError,
    NoInverseError,
    SharedFactorError,
    ShorsimError,
)
from .postprocess import FactorConfig, factor, find_order, recover_order
from .shor import ShorParameters, choose_parameters, make_parameters, outcome_distribution

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DomainError",
    "IntegrityError",
    "NoInverseError",
    "SharedFactorError",
    "ShorsimError",
    "FactorConfig",
    "factor",
    "find_order",
    "recover_order",
    "ShorParameters",
    "choose_parameters",
    "make_parameters",
    "outcome_distribution",
]
