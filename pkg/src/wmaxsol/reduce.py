"""Constructive reductions and instance generators."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import (
    ConstraintLanguage,
    Domain,
    Instance,
    Relation,
    equality_relation,
)
from .errors import InvalidArgument


# ---------------------------------------------------------------------------
# equality elimination
# ---------------------------------------------------------------------------
def eliminate_equalities(instance: Instance):
    """Merge variables joined by the equality relation.

    Returns ``(instance', mapping)`` where ``mapping`` sends every original
    variable to the surviving variable that stands for it (the one with the
    smallest index in its class); merged weights are summed.
    """
    eq = equality_relation(instance.domain)
    n = instance.n_vars
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    rest = []
    for c in instance.constraints:
        if instance.relation(c) == eq:
            a, b = find(c.scope[0]), find(c.scope[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
        else:
            rest.append(c)
    rep = [find(v) for v in range(n)]
    keep = sorted(set(rep))
    weights = {v: 0 for v in keep}
    for v, w in enumerate(instance.weights):
        weights[rep[v]] += w
    names = instance.variables
    new = Instance(
        instance.language,
        [names[v] for v in keep],
        [weights[v] for v in keep],
        [(tuple(names[rep[v]] for v in c.scope), c.relation) for c in rest],
    )
    mapping = {names[v]: names[rep[v]] for v in range(n)}
    return new, mapping


def lift_assignment(mapping: Mapping[str, str], assignment: Mapping[str, int]) -> dict:
    """Propagate a solution of the reduced instance back to every original variable."""
    return {v: assignment[r] for v, r in mapping.items()}


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise InvalidArgument("vertex count must be non-negative")
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidArgument(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgument(f"edge ({u}, {v}) outside {n} vertices")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, itertools.combinations(range(n), 2))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(i, i + 1) for i in range(n - 1)])


def cut_size(g: Graph, coloring: Sequence[int]) -> int:
    return sum(1 for u, v in g.edges if coloring[u] != coloring[v])


def max_pcut(g: Graph, p: int) -> int:
    """Brute-force Max-p-Cut; the first vertex is pinned to colour 0 by symmetry."""
    if g.n == 0:
        return 0
    best = 0
    for rest in itertools.product(range(p), repeat=g.n - 1):
        best = max(best, cut_size(g, (0,) + rest))
    return best


def max_independent_set(g: Graph) -> int:
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    best = 0
    for mask in range(1 << g.n):
        if all(not (mask >> u & 1 and adj[u] & mask) for u in range(g.n)):
            best = max(best, bin(mask).count("1"))
    return best


def gen_independent_set_gadget(g: Graph, a: int, b: int, domain: Domain | None = None) -> Instance:
    """One weight-1 variable per vertex and ``R = {(a,a),(a,b),(b,a)}`` per edge.

    The optimum is ``a (|V| - alpha) + b alpha`` with alpha the independence
    number; with ``a = 0`` it is the independent set problem itself.
    """
    if a >= b:
        raise InvalidArgument(f"need a < b, got a={a}, b={b}")
    D = domain if domain is not None else Domain([a, b])
    if a not in D or b not in D:
        raise InvalidArgument(f"{a} and {b} must both be in {D!r}")
    lang = ConstraintLanguage(D, {"R": Relation(2, [(a, a), (a, b), (b, a)])})
    names = [f"x{i}" for i in range(g.n)]
    return Instance(lang, names, [1] * g.n, [((f"x{u}", f"x{v}"), "R") for u, v in g.edges])


# ---------------------------------------------------------------------------
# equations over Z_p
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Equation:
    """``sum(sign * var for sign, var in terms) + const = 0 (mod p)``."""

    terms: tuple
    const: int

    def coefficients(self, p: int) -> dict[str, int]:
        out: dict[str, int] = {}
        for s, v in self.terms:
            out[v] = (out.get(v, 0) + s) % p
        return {v: c for v, c in out.items() if c}


@dataclass(frozen=True)
class EqnInstance:
    prime: int
    variables: tuple
    weights: tuple
    equations: tuple
    gmap: tuple = field(default=())

    def __post_init__(self):
        p = self.prime
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise InvalidArgument(f"{p} is not prime")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != len(self.variables):
            raise InvalidArgument("one weight per variable required")
        eqs = []
        known = set(self.variables)
        for e in self.equations:
            terms = tuple((int(s), str(v)) for s, v in e.terms)
            for s, v in terms:
                if s not in (1, -1):
                    raise InvalidArgument("terms carry a sign of +1 or -1")
                if v not in known:
                    raise InvalidArgument(f"unknown variable {v!r}")
            eqs.append(Equation(terms, int(e.const) % p))
        object.__setattr__(self, "equations", tuple(eqs))
        gmap = tuple(int(x) for x in self.gmap) if self.gmap else tuple(range(p))
        if len(gmap) != p or any(x < 0 for x in gmap):
            raise InvalidArgument("the value map needs one natural number per residue")
        object.__setattr__(self, "gmap", gmap)

    def satisfied(self, values: Mapping[str, int]) -> bool:
        p = self.prime
        return all(
            (sum(s * values[v] for s, v in e.terms) + e.const) % p == 0 for e in self.equations
        )

    def measure(self, values: Mapping[str, int]) -> int:
        return sum(w * self.gmap[values[v] % self.prime] for v, w in zip(self.variables, self.weights))

    def brute_force(self):
        """``(optimum, assignment)`` or None when unsatisfiable."""
        best = None
        for vals in itertools.product(range(self.prime), repeat=len(self.variables)):
            a = dict(zip(self.variables, vals))
            if self.satisfied(a):
                m = self.measure(a)
                if best is None or m > best[0]:
                    best = (m, a)
        return best


def g_min(gmap: Sequence[int]) -> int:
    """Smallest residue minimising the value map."""
    return min(range(len(gmap)), key=lambda k: (gmap[k], k))


def gen_maxpcut_eqn(g: Graph, p: int, gmap: Sequence[int] | None = None) -> EqnInstance:
    """Equations ``k (x_i - x_j) + g_min = z_i_j_k`` for every edge and k < p.

    Vertex variables weigh 0 and each z weighs 1, so the measure of a
    solution is determined by the cut of the colouring ``x``.
    """
    gmap = tuple(gmap) if gmap is not None else tuple(range(p))
    gm = g_min(gmap)
    names = [f"x{i}" for i in range(g.n)]
    weights = [0] * g.n
    eqs = []
    for i, j in g.edges:
        for k in range(p):
            z = f"z_{i}_{j}_{k}"
            names.append(z)
            weights.append(1)
            terms = [(1, f"x{i}")] * k + [(-1, f"x{j}")] * k + [(-1, z)]
            eqs.append(Equation(tuple(terms), gm))
    return EqnInstance(p, tuple(names), tuple(weights), tuple(eqs), gmap)


def pcut_measure_identity(g: Graph, p: int, gmap: Sequence[int], coloring: Sequence[int]):
    """Both sides of ``m' = |E| p g(g_min) + (g_s - p g(g_min)) cut``.

    The left side completes the z variables from the colouring, checks that
    every equation holds and measures the equation instance.
    """
    e = gen_maxpcut_eqn(g, p, gmap)
    vals = {f"x{i}": c % p for i, c in enumerate(coloring)}
    gm = g_min(e.gmap)
    for i, j in g.edges:
        for k in range(p):
            vals[f"z_{i}_{j}_{k}"] = (k * (vals[f"x{i}"] - vals[f"x{j}"]) + gm) % p
    if not e.satisfied(vals):
        raise InvalidArgument("completed assignment violates an equation")
    lhs = e.measure(vals)
    gs = sum(e.gmap)
    base = e.gmap[gm]
    rhs = len(g.edges) * p * base + (gs - p * base) * cut_size(g, coloring)
    return lhs, rhs


def _check_embedding(p: int, G, embedding: Sequence[int]) -> None:
    emb = list(embedding)
    if len(emb) != p:
        raise InvalidArgument(f"embedding must list one element per residue mod {p}")
    if len(set(emb)) != p:
        raise InvalidArgument("embedding is not injective")
    for x in emb:
        if x not in G.carrier:
            raise InvalidArgument(f"{x} is not in the group")
    for a in range(p):
        for b in range(p):
            if G.plus(emb[a], emb[b]) != emb[(a + b) % p]:
                raise InvalidArgument("embedding is not a homomorphism")


def eqn_to_maxsol(e: EqnInstance, G, embedding: Sequence[int] | None = None) -> Instance:
    """Materialise each equation as a relation over the image H of Z_p in G.

    Every variable also gets the unary relation ``U = H``.  A solution
    ``s`` of ``e`` maps to ``embedding o s`` with measure taken under
    ``g = embedding``; ``embedding`` defaults to the value map of ``e``.
    """
    p = e.prime
    emb = list(embedding) if embedding is not None else list(e.gmap)
    _check_embedding(p, G, emb)
    rels: dict[Relation, str] = {}
    cons = []

    def name_for(R):
        if R not in rels:
            rels[R] = f"E{len(rels)}"
        return rels[R]

    for eq in e.equations:
        coeffs = eq.coefficients(p)
        scope = [v for v in e.variables if v in coeffs]
        if not scope:
            if eq.const % p:
                # 0 = c with c != 0: unsatisfiable, pin it on any variable
                if not e.variables:
                    raise InvalidArgument("inconsistent equation over no variables")
                cons.append(((e.variables[0],), name_for(Relation(1, []))))
            continue
        tuples = []
        for vals in itertools.product(range(p), repeat=len(scope)):
            if (sum(coeffs[v] * x for v, x in zip(scope, vals)) + eq.const) % p == 0:
                tuples.append(tuple(emb[x] for x in vals))
        cons.append((tuple(scope), name_for(Relation(len(scope), tuples))))
    U = Relation(1, [(x,) for x in emb])
    lang = ConstraintLanguage(G.carrier, [("U", U)] + [(n, R) for R, n in rels.items()])
    cons = [((v,), "U") for v in e.variables] + cons
    return Instance(lang, e.variables, e.weights, cons)


# ---------------------------------------------------------------------------
# splitting long linear inequalities
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Inequality:
    """``sum(a * v for a, v in terms) >= rhs``."""

    terms: tuple
    rhs: int

    def holds(self, values: Mapping[str, int]) -> bool:
        return sum(a * values[v] for a, v in self.terms) >= self.rhs

    def __str__(self):
        parts = []
        for a, v in self.terms:
            sign = "-" if a < 0 else "+"
            mag = "" if abs(a) == 1 else f"{abs(a)}*"
            parts.append(f"{sign} {mag}{v}")
        s = " ".join(parts)
        return (s[2:] if s.startswith("+ ") else s) + f" >= {self.rhs}"


@dataclass(frozen=True)
class SplitResult:
    inequalities: tuple
    fresh: dict  # name -> (lo, hi) needed for equivalence
    variables: tuple

    def fits(self, d: int) -> bool:
        """True when every fresh variable's range lies in ``{0, ..., d-1}``."""
        return all(lo >= 0 and hi <= d - 1 for lo, hi in self.fresh.values())


def split_inequality(coeffs: Sequence[int], b: int, d: int, names: Sequence[str] | None = None) -> SplitResult:
    """Rewrite ``sum a_i x_i >= b`` into inequalities of at most three variables.

    Terms are paired level by level from the left: each pair ``a x + a' y``
    becomes a fresh ``z`` tied to it by two opposite inequalities, until at
    most three terms remain.  The value range z must cover is reported,
    computed from ``x_i`` in ``{0..d-1}``.
    """
    if not coeffs:
        raise InvalidArgument("need at least one coefficient")
    names = list(names) if names is not None else [f"x{i + 1}" for i in range(len(coeffs))]
    if len(names) != len(coeffs):
        raise InvalidArgument("one name per coefficient required")
    ranges = {v: (0, d - 1) for v in names}
    fresh: dict[str, tuple[int, int]] = {}
    ineqs = []
    terms = [(int(a), v) for a, v in zip(coeffs, names)]
    level = 0
    while len(terms) > 3:
        nxt = []
        i = 0
        while i < len(terms):
            if len(nxt) + len(terms) - i <= 3 or i + 1 == len(terms):
                nxt += terms[i:]
                break
            pair = terms[i:i + 2]
            z = f"z_{level}_{len(nxt)}"
            lo = sum(min(a * ranges[v][0], a * ranges[v][1]) for a, v in pair)
            hi = sum(max(a * ranges[v][0], a * ranges[v][1]) for a, v in pair)
            ranges[z] = fresh[z] = (lo, hi)
            ineqs.append(Inequality(tuple(pair) + ((-1, z),), 0))
            ineqs.append(Inequality(tuple((-a, v) for a, v in pair) + ((1, z),), 0))
            nxt.append((1, z))
            i += 2
        terms = nxt
        level += 1
    ineqs.append(Inequality(tuple(terms), int(b)))
    return SplitResult(tuple(ineqs), fresh, tuple(names))
