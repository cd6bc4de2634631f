"""Abelian groups on a domain, cosets and linear systems over Z_p.

Only elementary abelian groups (exponent a prime p) admit a linear-algebra
view; within the domain cap that means Z_p itself and Z_2 x Z_2.  Each
element is then labelled by a digit vector in Z_p^k.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from ..core import Domain, Operation, Relation
from ..errors import InvalidArgument, NotACoset, UnsupportedGroup
from . import linalg


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, int(n**0.5) + 1))


@dataclass(frozen=True, eq=False)
class AbelianGroup:
    carrier: Domain
    add: Operation
    neg: Operation
    identity: int
    name: str | None = None
    _affine: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        D = self.carrier
        if self.add.domain != D or self.add.arity != 2 or self.neg.domain != D or self.neg.arity != 1:
            raise InvalidArgument("group operations must be a binary add and a unary neg over the carrier")
        if self.identity not in D:
            raise InvalidArgument(f"identity {self.identity} not in {D!r}")
        e, add, neg = self.identity, self.add, self.neg
        for a in D:
            if add(a, e) != a or add(a, neg(a)) != e:
                raise InvalidArgument("identity or inverse law fails")
            for b in D:
                if add(a, b) != add(b, a):
                    raise InvalidArgument("addition is not commutative")
                for c in D:
                    if add(add(a, b), c) != add(a, add(b, c)):
                        raise InvalidArgument("addition is not associative")

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.add == other.add and self.identity == other.identity

    def __hash__(self):
        return hash((self.add, self.identity))

    def __repr__(self):
        return f"AbelianGroup({self.name or '?'}, {list(self.carrier)}, zero={self.identity})"

    # -- arithmetic -------------------------------------------------------
    def plus(self, a: int, b: int) -> int:
        return self.add(a, b)

    def minus(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def times(self, k: int, a: int) -> int:
        out = self.identity
        for _ in range(k % self.exponent()):
            out = self.add(out, a)
        return out

    def order_of(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.add(x, a)
            k += 1
        return k

    def exponent(self) -> int:
        from math import lcm

        out = 1
        for a in self.carrier:
            out = lcm(out, self.order_of(a))
        return out

    def affine_op(self) -> Operation:
        """``a_G(x, y, z) = x - y + z``."""
        if not self._affine:
            self._affine.append(
                Operation.from_function(
                    self.carrier, 3, lambda x, y, z: self.add(self.minus(x, y), z), name="affine"
                )
            )
        return self._affine[0]

    # -- linear view ----------------------------------------------------
    def is_elementary(self) -> bool:
        return _is_prime(self.exponent())

    def labeling(self) -> "Labeling":
        """Digit-vector coordinates for an elementary abelian group."""
        p = self.exponent()
        if not _is_prime(p):
            raise UnsupportedGroup(f"group of exponent {p} is not elementary abelian")
        basis: list[int] = []
        span = {self.identity}
        for a in self.carrier:
            if a not in span:
                basis.append(a)
                span = {self.add(s, self.times(k, a)) for s in span for k in range(p)}
        enc = {}
        for digits in itertools.product(range(p), repeat=len(basis)):
            x = self.identity
            for d, b in zip(digits, basis):
                x = self.add(x, self.times(d, b))
            enc[x] = digits
        return Labeling(p, len(basis), enc)


@dataclass(frozen=True)
class Labeling:
    """Bijection between a group carrier and Z_p^width."""

    prime: int
    width: int
    encode: dict

    @property
    def decode(self) -> dict:
        return {v: k for k, v in self.encode.items()}


def group_from_table(D: Domain, add_table, identity: int, name: str | None = None) -> AbelianGroup:
    add = Operation(D, 2, add_table, name="+")
    negs = []
    for a in D:
        inv = [b for b in D if add(a, b) == identity]
        if len(inv) != 1:
            raise InvalidArgument(f"{a} has no unique inverse")
        negs.append(inv[0])
    return AbelianGroup(D, add, Operation(D, 1, negs, name="-"), identity, name=name)


def cyclic_group(D: Domain, order=None) -> AbelianGroup:
    """Z_n with ``D[i]`` labelling residue ``i`` (or the element order given)."""
    elems = list(order) if order is not None else list(D.elements)
    n = len(elems)
    pos = {e: i for i, e in enumerate(elems)}
    table = {(a, b): elems[(pos[a] + pos[b]) % n] for a in D for b in D}
    return group_from_table(D, table, elems[0], name=f"Z{n}")


def klein_group(D: Domain, order=None) -> AbelianGroup:
    """Z_2 x Z_2 with ``order[i]`` labelling the bit pair of ``i``."""
    if D.size != 4:
        raise InvalidArgument("Z2xZ2 needs four elements")
    elems = list(order) if order is not None else list(D.elements)
    pos = {e: i for i, e in enumerate(elems)}
    table = {(a, b): elems[pos[a] ^ pos[b]] for a in D for b in D}
    return group_from_table(D, table, elems[0], name="Z2xZ2")


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    q = 2
    while n > 1:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    return out


def _partitions(k: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = k if largest is None else largest
    if k == 0:
        yield []
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield [first] + rest


def abstract_abelian_groups(n: int) -> list[tuple[int, ...]]:
    """Invariant factor lists (as prime-power cyclic factors) of every abelian group of order n."""
    per_prime = []
    for p, k in sorted(_factor(n).items()):
        per_prime.append([tuple(p**e for e in part) for part in _partitions(k)])
    if not per_prime:
        return [()]
    return [sum(combo, ()) for combo in itertools.product(*per_prime)]


def enumerate_abelian_groups(D: Domain) -> list[AbelianGroup]:
    """Every abelian group table on D, deduplicated, in a fixed order."""
    n = D.size
    groups: list[AbelianGroup] = []
    seen = set()
    for factors in abstract_abelian_groups(n):
        abstract = list(itertools.product(*(range(m) for m in factors)))
        name = "x".join(f"Z{m}" for m in factors) or "Z1"

        def plus(u, v, factors=factors):
            return tuple((x + y) % m for x, y, m in zip(u, v, factors))

        for perm in itertools.permutations(D.elements):
            label = dict(zip(abstract, perm))
            table = {(label[u], label[v]): label[plus(u, v)] for u in abstract for v in abstract}
            key = tuple(table[a, b] for a in D for b in D)
            if key in seen:
                continue
            seen.add(key)
            groups.append(group_from_table(D, table, label[abstract[0]], name=name))
    return groups


def distinct_affine_ops(D: Domain) -> list[tuple[Operation, AbelianGroup]]:
    """The distinct ``x - y + z`` tables, each with one group realising it."""
    out, seen = [], set()
    for G in enumerate_abelian_groups(D):
        a = G.affine_op()
        if a not in seen:
            seen.add(a)
            out.append((a, G))
    return out


# ---------------------------------------------------------------------------
# linear systems
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LinearSystem:
    """Rows ``(coeffs, rhs)`` over Z_p in the digit coordinates of ``labeling``.

    A relation of arity r over a group labelled by ``width`` digits has
    ``num_vars = r * width``; variable ``i * width + j`` is digit j of
    coordinate i.
    """

    prime: int
    num_vars: int
    rows: tuple
    labeling: Labeling

    def solutions(self) -> Iterator[tuple[int, ...]]:
        """Every solution vector in Z_p^num_vars, lexicographically."""
        p, n = self.prime, self.num_vars
        coeffs = [r[0] for r in self.rows]
        rhs = [r[1] for r in self.rows]
        sol = linalg.solve(coeffs, rhs, n, p) if coeffs else ([0] * n, linalg.nullspace([], n, p))
        if sol is None:
            return
        x0, basis = sol
        pts = set()
        for cs in itertools.product(range(p), repeat=len(basis)):
            v = list(x0)
            for c, b in zip(cs, basis):
                if c:
                    v = [(a + c * y) % p for a, y in zip(v, b)]
            pts.add(tuple(v))
        yield from sorted(pts)

    def to_relation(self) -> Relation:
        w = self.labeling.width
        dec = self.labeling.decode
        arity = self.num_vars // w if w else 0
        return Relation(arity, (tuple(dec[v[i * w:(i + 1) * w]] for i in range(arity)) for v in self.solutions()))

    def describe(self) -> list[str]:
        out = []
        for coeffs, rhs in self.rows:
            terms = [f"{c}*x{i}" if c != 1 else f"x{i}" for i, c in enumerate(coeffs) if c]
            out.append(f"{' + '.join(terms) or '0'} = {rhs} (mod {self.prime})")
        return out


def coset_to_linear_system(R: Relation, G: AbelianGroup) -> LinearSystem:
    """Parity-check rows whose solution set, decoded, is exactly R."""
    if R.is_empty:
        raise NotACoset("the empty relation is not a coset")
    R.check_domain(G.carrier)
    try:
        lab = G.labeling()
    except UnsupportedGroup:
        raise UnsupportedGroup(f"{G!r} has no Z_p labeling; only elementary abelian groups are supported") from None
    p, w = lab.prime, lab.width
    n = R.arity * w

    def vec(t):
        return [d for x in t for d in lab.encode[x]]

    t0 = vec(R.tuples[0])
    diffs = [[(a - b) % p for a, b in zip(vec(t), t0)] for t in R.tuples[1:]]
    span_rows, piv = linalg.rref(diffs, n, p) if diffs else ([], [])
    if p ** len(piv) != len(R):
        raise NotACoset(f"relation of size {len(R)} is not a coset (span has {p ** len(piv)} points)")
    checks = linalg.nullspace(span_rows, n, p)
    checks, _ = linalg.rref(checks, n, p) if checks else ([], [])
    rows = tuple((tuple(h), sum(a * b for a, b in zip(h, t0)) % p) for h in checks)
    system = LinearSystem(p, n, rows, lab)
    # the span may have the right size yet not be R itself
    if set(system.to_relation().tuples) != set(R.tuples):
        raise NotACoset("relation is not closed under x - y + z")
    return system
