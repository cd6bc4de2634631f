"""Derandomised approximation for languages closed under ``x - y + z``.

Every constraint relation is a coset, so the whole instance is a linear
system over Z_p (one block of digits per variable).  A uniformly random
solution has uniform marginals on cosets of the projected subspace; the
algorithm fixes variables one at a time to the value that keeps the
expected measure of a random solution as large as possible.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from ..algebra import linalg
from ..algebra.groups import AbelianGroup, coset_to_linear_system
from ..algebra.ops import is_polymorphism
from ..core import Domain, Instance, as_assignment, is_feasible
from ..errors import InternalError, InvalidCertificate, NotACoset
from .result import SolveResult, Status


def e_min(D: Domain) -> Fraction:
    """Least mean over subsets of size at least two: the two smallest elements."""
    if D.size < 2:
        return Fraction(D.min)
    return Fraction(D.elements[0] + D.elements[1], 2)


def affine_guarantee(D: Domain) -> Fraction:
    if D.size < 2:
        return Fraction(1)
    return e_min(D) / D.max


class AffineSystem:
    """The instance as rows over Z_p^(n_vars * width)."""

    def __init__(self, instance: Instance, G: AbelianGroup):
        if G.carrier != instance.domain:
            raise InvalidCertificate("group carrier differs from the instance domain")
        a = G.affine_op()
        for name, R in instance.used_relations().items():
            if not R.is_empty and not is_polymorphism(a, R):
                raise InvalidCertificate(f"relation {name!r} is not closed under x - y + z")
        self.instance = instance
        self.group = G
        lab = G.labeling()
        self.labeling = lab
        self.p, self.w = lab.prime, lab.width
        self.n_cols = instance.n_vars * self.w
        self.rows: list[list[int]] = []
        self.rhs: list[int] = []
        self.empty = False
        for c in instance.constraints:
            R = instance.relation(c)
            if R.is_empty:
                self.empty = True
                continue
            try:
                sys_ = coset_to_linear_system(R, G)
            except NotACoset as e:
                raise InvalidCertificate(str(e)) from None
            for coeffs, b in sys_.rows:
                row = [0] * self.n_cols
                for i, v in enumerate(c.scope):
                    for j in range(self.w):
                        k = v * self.w + j
                        row[k] = (row[k] + coeffs[i * self.w + j]) % self.p
                self.rows.append(row)
                self.rhs.append(b)

    def fix_rows(self, v: int, value: int):
        digits = self.labeling.encode[value]
        rows, rhs = [], []
        for j in range(self.w):
            row = [0] * self.n_cols
            row[v * self.w + j] = 1
            rows.append(row)
            rhs.append(digits[j])
        return rows, rhs

    def solve(self, fixed=()):
        """``(x0, basis)`` for the system plus the fixed values, or None."""
        if self.empty:
            return None
        rows, rhs = list(self.rows), list(self.rhs)
        for v, x in fixed:
            r, b = self.fix_rows(v, x)
            rows += r
            rhs += b
        if not rows:
            return [0] * self.n_cols, linalg.nullspace([], self.n_cols, self.p)
        return linalg.solve(rows, rhs, self.n_cols, self.p)

    def marginal(self, sol, v: int) -> list[int]:
        """Support of variable v under a uniform solution (uniformly distributed)."""
        x0, basis = sol
        p, w = self.p, self.w
        block = slice(v * w, (v + 1) * w)
        gens = [b[block] for b in basis if any(b[block])]
        if gens:
            gens, _ = linalg.rref(gens, w, p)
        dec = self.labeling.decode
        out = set()
        for cs in itertools.product(range(p), repeat=len(gens)):
            d = list(x0[block])
            for c, g in zip(cs, gens):
                d = [(a + c * y) % p for a, y in zip(d, g)]
            out.add(dec[tuple(d)])
        return sorted(out)

    def marginals(self, sol) -> dict[str, dict[int, Fraction]]:
        out = {}
        for v, name in enumerate(self.instance.variables):
            supp = self.marginal(sol, v)
            out[name] = {x: Fraction(1, len(supp)) for x in supp}
        return out

    def expected_measure(self, sol) -> Fraction:
        total = Fraction(0)
        for v, w in enumerate(self.instance.weights):
            if w:
                supp = self.marginal(sol, v)
                total += w * Fraction(sum(supp), len(supp))
        return total


def affine_marginals(instance: Instance, G: AbelianGroup):
    """Exact marginals of a uniformly random solution, or None if infeasible."""
    system = AffineSystem(instance, G)
    sol = system.solve()
    return None if sol is None else system.marginals(sol)


def solve_affine(instance: Instance, G: AbelianGroup) -> SolveResult:
    """Fix variables in input order to the value maximising the expected measure.

    Ties go to the smallest value.  The expected measure never decreases,
    so the result is at least the initial expectation, which is at least
    ``E_min / max(D)`` times the optimum.
    """
    system = AffineSystem(instance, G)
    sol = system.solve()
    if sol is None:
        return SolveResult.infeasible("affine")
    D = instance.domain
    initial = system.expected_measure(sol)
    single_point = not sol[1]
    fixed: list[tuple[int, int]] = []
    current = initial
    trace = []
    for v in range(instance.n_vars):
        best, best_e = None, None
        for x in D.elements:
            s = system.solve(fixed + [(v, x)])
            if s is None:
                continue
            e = system.expected_measure(s)
            if best_e is None or e > best_e:
                best, best_e = x, e
        if best is None or best_e < current:
            raise InternalError(f"expected measure dropped while fixing {instance.variables[v]}")
        fixed.append((v, best))
        current = best_e
        trace.append((instance.variables[v], best, best_e))
    values = [x for _, x in fixed]
    a = as_assignment(instance, values)
    if not is_feasible(instance, a):
        raise InternalError("derandomised assignment is not a solution")
    m = sum(w * x for w, x in zip(instance.weights, values))
    if m != current:
        raise InternalError("final expected measure differs from the measure")
    return SolveResult(
        Status.OPTIMAL if single_point else Status.FEASIBLE,
        a,
        m,
        Fraction(1) if single_point else affine_guarantee(D),
        solver="affine",
        details={
            "initial_expected": initial,
            "trace": trace,
            "marginals": system.marginals(sol),
            "group": G.name,
        },
    )
