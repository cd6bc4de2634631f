"""Exact, approximate and reference solvers."""
from .affine import AffineSystem, affine_guarantee, affine_marginals, e_min, solve_affine
from .approx import performance_ratio, trivial_approx
from .consistency import consistent_relations, pairwise_consistency
from .oracle import DEFAULT_BF_BUDGET, EncodedInstance, brute_force, encode_instance, enumerate_solutions
from .result import SolveResult, Status
from .search import DEFAULT_SEARCH_BUDGET, csp_search
from .semilattice import solve_2semilattice
from .tractable import check_injective, solve_genmax, solve_injective

__all__ = [
    "AffineSystem", "affine_guarantee", "affine_marginals", "e_min", "solve_affine",
    "performance_ratio", "trivial_approx", "consistent_relations", "pairwise_consistency",
    "DEFAULT_BF_BUDGET", "EncodedInstance", "brute_force", "encode_instance", "enumerate_solutions",
    "SolveResult", "Status", "DEFAULT_SEARCH_BUDGET", "csp_search", "solve_2semilattice",
    "check_injective", "solve_genmax", "solve_injective",
]
