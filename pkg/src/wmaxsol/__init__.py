"""Weighted maximum-solution CSPs over small domains: algebra, classification,
exact and approximate solvers, and approximation-preserving reductions."""
from .core import (
    DEFAULT_DOMAIN_CAP,
    Assignment,
    Constraint,
    ConstraintLanguage,
    Domain,
    Instance,
    Operation,
    Relation,
    as_assignment,
    equality_relation,
    full_relation,
    is_feasible,
    measure,
)
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
