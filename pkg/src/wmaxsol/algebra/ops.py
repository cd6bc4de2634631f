"""Polymorphism checks and operation predicates."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .. import kernels
from ..core import ConstraintLanguage, Domain, Operation, Relation
from ..errors import ArityMismatch, DomainMismatch


def apply_componentwise(f: Operation, ts: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """``f`` applied position by position to ``k = arity(f)`` tuples."""
    if len(ts) != f.arity:
        raise ArityMismatch(f"{f.label} has arity {f.arity} but got {len(ts)} tuples")
    lengths = {len(t) for t in ts}
    if len(lengths) > 1:
        raise ArityMismatch(f"tuples of different lengths {sorted(lengths)}")
    return tuple(f(*column) for column in zip(*ts))


def _check_domain(f: Operation, R: Relation) -> None:
    bad = R.elements() - set(f.domain.elements)
    if bad:
        raise DomainMismatch(f"relation uses {sorted(bad)} outside the domain of {f.label}")


def is_polymorphism(f: Operation, R: Relation, backend=None) -> bool:
    """True iff R is closed under f (every k-selection of tuples, with repetition)."""
    _check_domain(f, R)
    D = f.domain
    return kernels.first_violation(
        f.index_table, f.arity, D.size, R.index_matrix(D), R.codes(D), backend=backend
    ) < 0


def polymorphism_counterexample(f: Operation, R: Relation):
    """A selection of tuples whose image leaves R, or None."""
    _check_domain(f, R)
    D = f.domain
    s = kernels.first_violation(f.index_table, f.arity, D.size, R.index_matrix(D), R.codes(D))
    if s < 0:
        return None
    sel = kernels.decode(s, f.arity, len(R))
    return tuple(R.tuples[i] for i in sel)


def is_polymorphism_lang(f: Operation, language, backend=None) -> bool:
    """Conjunction over all relations; accepts a language or any iterable of relations."""
    if isinstance(language, ConstraintLanguage):
        if language.domain != f.domain:
            # a language over a subset of f's domain is still checkable
            if not set(language.domain.elements) <= set(f.domain.elements):
                raise DomainMismatch("language and operation domains differ")
    return all(is_polymorphism(f, R, backend=backend) for R in language)


def closure(f: Operation, seeds, arity: int | None = None) -> Relation:
    """Smallest relation containing ``seeds`` and closed under ``f``."""
    current = {tuple(t) for t in seeds}
    if arity is None:
        arity = len(next(iter(current)))
    frontier = set(current)
    while frontier:
        new = set()
        pool = list(current)
        for sel in itertools.product(pool, repeat=f.arity):
            if not any(t in frontier for t in sel):
                continue
            img = apply_componentwise(f, sel)
            if img not in current:
                new.add(img)
        current |= new
        frontier = new
    return Relation(arity, current)


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------
def is_constant(f: Operation) -> bool:
    return len(set(f.values)) == 1


def is_idempotent(f: Operation) -> bool:
    return all(f(*([a] * f.arity)) == a for a in f.domain)


def is_commutative(f: Operation) -> bool:
    if f.arity != 2:
        return False
    return all(f(a, b) == f(b, a) for a in f.domain for b in f.domain)


def is_majority(f: Operation) -> bool:
    if f.arity != 3:
        return False
    for a in f.domain:
        for b in f.domain:
            if not (f(a, a, b) == f(a, b, a) == f(b, a, a) == a):
                return False
    return True


def is_maltsev(f: Operation) -> bool:
    if f.arity != 3:
        return False
    return all(f(x, y, y) == x and f(y, y, x) == x for x in f.domain for y in f.domain)


def is_two_semilattice(f: Operation) -> bool:
    if f.arity != 2 or not (is_idempotent(f) and is_commutative(f)):
        return False
    return all(f(x, f(x, y)) == f(x, y) for x in f.domain for y in f.domain)


def is_generalised_max(f: Operation) -> bool:
    """Both conditions of the generalised-max definition.

    For ``a != b``: ``f(a,b) <= min(a,b)`` forces ``f(b,a) > max(a,b)``;
    and ``f(a,a) >= a`` everywhere.
    """
    if f.arity != 2:
        return False
    D = f.domain.elements
    for a in D:
        if f(a, a) < a:
            return False
        for b in D:
            if a != b and f(a, b) <= min(a, b) and not f(b, a) > max(a, b):
                return False
    return True


def is_affine_for(f: Operation, group) -> bool:
    """``f(x,y,z) == x - y + z`` in ``group``."""
    if f.arity != 3 or f.domain != group.carrier:
        return False
    return f == group.affine_op()


@dataclass(frozen=True)
class OpPredicates:
    is_constant: bool
    is_majority: bool
    is_commutative: bool
    is_idempotent: bool
    is_two_semilattice: bool
    is_generalised_max: bool
    is_maltsev: bool
    affine_for: tuple = ()

    def is_affine_for(self, group) -> bool:
        return group in self.affine_for


def op_predicates(f: Operation, groups=()) -> OpPredicates:
    """Evaluate every predicate; ``groups`` lists candidate abelian groups."""
    return OpPredicates(
        is_constant=is_constant(f),
        is_majority=is_majority(f),
        is_commutative=is_commutative(f),
        is_idempotent=is_idempotent(f),
        is_two_semilattice=is_two_semilattice(f),
        is_generalised_max=is_generalised_max(f),
        is_maltsev=is_maltsev(f),
        affine_for=tuple(G for G in groups if is_affine_for(f, G)),
    )


# ---------------------------------------------------------------------------
# small constructors used throughout
# ---------------------------------------------------------------------------
def constant_op(D: Domain, c: int) -> Operation:
    return Operation(D, 1, [c] * D.size, name=f"const{c}")


def identity_op(D: Domain) -> Operation:
    return Operation(D, 1, list(D.elements), name="id")


def projection(D: Domain, arity: int, i: int) -> Operation:
    return Operation.from_function(D, arity, lambda *a: a[i], name=f"pr{i}_{arity}")


def max_op(D: Domain) -> Operation:
    return Operation.from_function(D, 2, max, name="max")


def min_op(D: Domain) -> Operation:
    return Operation.from_function(D, 2, min, name="min")


def cayley(D: Domain, rows: Sequence[Sequence[int]], name: str | None = None) -> Operation:
    """Binary operation from a Cayley table; ``rows[i][j] = D[i] o D[j]``."""
    vals = [v for row in rows for v in row]
    return Operation(D, 2, vals, name=name)
