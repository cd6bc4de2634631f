"""The trivial approximation and the performance-ratio harness."""
from __future__ import annotations

import math
from fractions import Fraction

from ..core import Instance, assignment_values, is_feasible
from ..errors import MalformedAssignment, NotApplicable
from .oracle import DEFAULT_BF_BUDGET, brute_force
from .result import SolveResult, Status
from .search import DEFAULT_SEARCH_BUDGET, csp_search


def trivial_approx(instance: Instance, budget: int | None = DEFAULT_SEARCH_BUDGET) -> SolveResult:
    """Any solution is within max(D)/min(D) of the optimum when 0 is not in D."""
    D = instance.domain
    if 0 in D:
        raise NotApplicable("the trivial bound needs 0 outside the domain")
    a = csp_search(instance, budget)
    if a is None:
        return SolveResult.infeasible("trivial")
    m = sum(w * a[v] for v, w in zip(instance.variables, instance.weights))
    if D.size == 1:
        return SolveResult(Status.OPTIMAL, a, m, Fraction(1), solver="trivial")
    return SolveResult(Status.FEASIBLE, a, m, Fraction(D.min, D.max), solver="trivial")


def performance_ratio(instance: Instance, a, opt: int | None = None, budget: int | None = DEFAULT_BF_BUDGET):
    """``max(opt/m, m/opt)`` as a Fraction; ``math.inf`` if m = 0 < opt."""
    assignment_values(instance, a)
    if not is_feasible(instance, a):
        raise MalformedAssignment("assignment violates a constraint")
    m = sum(w * x for w, x in zip(instance.weights, assignment_values(instance, a)))
    if opt is None:
        opt = brute_force(instance, budget=budget).measure
    if m == 0:
        return Fraction(1) if opt == 0 else math.inf
    if opt == 0:
        return math.inf
    return max(Fraction(opt, m), Fraction(m, opt))
