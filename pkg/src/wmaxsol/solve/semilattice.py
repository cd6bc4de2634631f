"""Approximation for languages with a 2-semilattice polymorphism and a* > 0."""
from __future__ import annotations

from fractions import Fraction

from ..algebra.ops import is_polymorphism, is_two_semilattice
from ..core import Instance, Operation, Relation, as_assignment
from ..errors import InternalError, InvalidCertificate, NotApplicable
from .result import SolveResult, Status
from .search import DEFAULT_SEARCH_BUDGET, csp_search


def solve_2semilattice(instance: Instance, f: Operation, budget: int | None = DEFAULT_SEARCH_BUDGET) -> SolveResult:
    """Find the variables that are 0 in every solution, force the rest above 0.

    ``U = D \\ {0}`` must be closed under f; then any solution of the
    instance with U added on the non-forced variables is within
    ``p / max(D)`` of the optimum, p the second least element.
    """
    D = instance.domain
    if 0 not in D:
        raise NotApplicable("the 2-semilattice algorithm needs 0 in the domain")
    if not is_two_semilattice(f):
        raise InvalidCertificate(f"{f.label} is not a 2-semilattice operation")
    for name, R in instance.language.relations.items():
        if not is_polymorphism(f, R):
            raise InvalidCertificate(f"relation {name!r} is not closed under {f.label}")
    if D.size == 1:
        a = csp_search(instance, budget)
        if a is None:
            return SolveResult.infeasible("2-semilattice")
        return SolveResult(Status.OPTIMAL, a, 0, Fraction(1), solver="2-semilattice")
    U = Relation(1, [(x,) for x in D if x != 0])
    if not is_polymorphism(f, U):
        raise InvalidCertificate(f"D \\ {{0}} is not closed under {f.label}")
    if csp_search(instance, budget) is None:
        return SolveResult.infeasible("2-semilattice")
    uname = instance.language.fresh_name("U")
    lang = instance.language.with_relations({uname: U})
    base = [(c.scope, c.relation) for c in instance.constraints]

    def with_u(vs):
        return Instance(lang, instance.variables, instance.weights, base + [((v,), uname) for v in vs])

    forced_zero = [
        v for v in range(instance.n_vars) if csp_search(with_u([v]), budget) is None
    ]
    rest = [v for v in range(instance.n_vars) if v not in set(forced_zero)]
    a = csp_search(with_u(rest), budget)
    if a is None:
        raise InternalError("augmented instance is unsatisfiable although the original is not")
    vals = [a[v] for v in instance.variables]
    m = sum(w * x for w, x in zip(instance.weights, vals))
    return SolveResult(
        Status.FEASIBLE,
        as_assignment(instance, vals),
        m,
        Fraction(D.elements[1], D.max),
        solver="2-semilattice",
        details={"forced_zero": [instance.variables[v] for v in forced_zero]},
    )
