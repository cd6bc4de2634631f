"""Binary operations: iterates, fixity, the digraph G_f and the class A."""
from __future__ import annotations

from dataclasses import dataclass

from ..core import Domain, Operation
from ..errors import ArityMismatch, InvalidArgument
from .groups import enumerate_abelian_groups, _is_prime


def _need_binary(f: Operation) -> None:
    if f.arity != 2:
        raise ArityMismatch(f"{f.label} is not binary")


def iterate(f: Operation, n: int) -> Operation:
    """``f_1 = f`` and ``f_{n+1}(x, y) = f(x, f_n(x, y))``."""
    _need_binary(f)
    if n < 1:
        raise InvalidArgument(f"iterate needs n >= 1, got {n}")
    D = f.domain

    def fn(x, y):
        v = f(x, y)
        for _ in range(n - 1):
            v = f(x, v)
        return v

    name = f.name if n == 1 else f"{f.label}_{n}"
    return Operation.from_function(D, 2, fn, name=name)


@dataclass(frozen=True)
class FixitySet:
    pairs: frozenset

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __le__(self, other: "FixitySet") -> bool:
        return self.pairs <= other.pairs


def fixity(f: Operation) -> FixitySet:
    """All ``(a, b)`` with ``f(a, b)`` in ``{a, b}``."""
    _need_binary(f)
    return FixitySet(frozenset((a, b) for (a, b), v in f.items() if v in (a, b)))


@dataclass(frozen=True)
class GfDigraph:
    """Functional digraph on D x D with ``succ((a, b)) = (a, f(a, b))``."""

    op: Operation
    succ: dict

    @property
    def vertices(self) -> list:
        return sorted(self.succ)

    def out_degree(self, v) -> int:
        return 1 if tuple(v) in self.succ else 0

    def is_reflexive(self, v) -> bool:
        v = tuple(v)
        return self.succ[v] == v

    def walk(self, v, n: int):
        v = tuple(v)
        for _ in range(n):
            v = self.succ[v]
        return v

    def cycles(self) -> list[list]:
        """All cycles of length >= 2 (self-loops excluded), each from its least vertex."""
        found, done = [], set()
        for start in self.vertices:
            if start in done:
                continue
            path, pos = [], {}
            v = start
            while v not in done and v not in pos:
                pos[v] = len(path)
                path.append(v)
                v = self.succ[v]
            if v in pos:
                cyc = path[pos[v]:]
                if len(cyc) >= 2:
                    k = cyc.index(min(cyc))
                    found.append(cyc[k:] + cyc[:k])
            done.update(path)
        return found

    def has_nontrivial_cycle(self) -> bool:
        return bool(self.cycles())


def build_gf(f: Operation) -> GfDigraph:
    _need_binary(f)
    return GfDigraph(f, {(a, b): (a, v) for (a, b), v in f.items()})


# ---------------------------------------------------------------------------
# the class A: f(x, y) = q (x + y) over a prime field, q = (p + 1) / 2
# ---------------------------------------------------------------------------
def half_sum(D: Domain, group=None) -> Operation:
    """``q (x + y)`` for a cyclic group of prime order on D (default: sorted labelling)."""
    p = D.size
    if not _is_prime(p) or p == 2:
        raise InvalidArgument("half-sum needs an odd prime domain size")
    if group is None:
        from .groups import cyclic_group

        group = cyclic_group(D)
    q = (p + 1) // 2
    return Operation.from_function(D, 2, lambda x, y: group.times(q, group.plus(x, y)), name="halfsum")


def in_class_a(f: Operation):
    """The group labelling realising ``f = q (x + y)``, or None."""
    if f.arity != 2:
        return None
    p = f.domain.size
    if p <= 2 or not _is_prime(p):
        return None
    for G in enumerate_abelian_groups(f.domain):
        if half_sum(f.domain, G) == f:
            return G
    return None


def affine_by_nesting(f: Operation) -> Operation:
    """``f(...f(f(x, z), y)..., y)`` with p - 1 applications of f, as a ternary table."""
    _need_binary(f)
    p = f.domain.size

    def g(x, y, z):
        v = f(x, z)
        for _ in range(p - 2):
            v = f(v, y)
        return v

    return Operation.from_function(f.domain, 3, g, name="nested")
