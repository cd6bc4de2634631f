"""Seeded random generators for operations, languages, instances and graphs.

All generators take a ``random.Random`` so a seed fixes every output.
"""
from __future__ import annotations

import itertools
import random

import networkx as nx

from .algebra.groups import cyclic_group
from .algebra.ops import closure, is_generalised_max
from .core import ConstraintLanguage, Domain, Instance, Operation, Relation
from .reduce import EqnInstance, Equation, Graph


def rng_for(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_domain(rng: random.Random, sizes=(2, 3, 4), gaps: bool = True) -> Domain:
    """A domain of one of ``sizes``; with ``gaps`` it may skip values or omit 0."""
    n = rng.choice(list(sizes))
    if not gaps or rng.random() < 0.5:
        return Domain.range(n)
    return Domain(sorted(rng.sample(range(2 * n), n)))


def random_genmax_op(rng: random.Random, D: Domain) -> Operation:
    """A uniformly drawn binary table satisfying both generalised-max conditions."""
    elems = D.elements
    table = {}
    for a in elems:
        table[a, a] = rng.choice([v for v in elems if v >= a])
    for a, b in itertools.combinations(elems, 2):
        while True:
            x, y = rng.choice(elems), rng.choice(elems)
            lo, hi = a, b
            if (x <= lo and not y > hi) or (y <= lo and not x > hi):
                continue
            table[a, b], table[b, a] = x, y
            break
    f = Operation(D, 2, table, name="g")
    assert is_generalised_max(f)
    return f


def random_idempotent_binary(rng: random.Random, D: Domain) -> Operation:
    table = {(a, b): (a if a == b else rng.choice(D.elements)) for a in D for b in D}
    return Operation(D, 2, table, name="f")


def random_relation(rng: random.Random, D: Domain, arity: int, size: int) -> Relation:
    pool = list(itertools.product(D.elements, repeat=arity))
    return Relation(arity, rng.sample(pool, min(size, len(pool))))


def random_invariant_relation(rng: random.Random, f: Operation, arity: int, seeds: int) -> Relation:
    """Closure under f of a few random tuples."""
    D = f.domain
    start = [tuple(rng.choice(D.elements) for _ in range(arity)) for _ in range(seeds)]
    return closure(f, start, arity)


def random_instance(
    rng: random.Random,
    lang: ConstraintLanguage,
    n_vars: int,
    n_cons: int,
    max_weight: int = 10,
) -> Instance:
    names = [f"v{i}" for i in range(n_vars)]
    weights = [rng.randint(0, max_weight) for _ in names]
    rels = lang.names()
    cons = []
    for _ in range(n_cons if rels and n_vars else 0):
        r = rng.choice(rels)
        cons.append((tuple(rng.randrange(n_vars) for _ in range(lang[r].arity)), r))
    return Instance(lang, names, weights, cons)


def random_genmax_language(rng: random.Random, D: Domain, n_rels: int = 3, max_arity: int = 3):
    """``(language, witness)``: relations generated by closure under a random genmax op."""
    f = random_genmax_op(rng, D)
    rels = {}
    for i in range(n_rels):
        arity = rng.randint(1, max_arity)
        rels[f"R{i}"] = random_invariant_relation(rng, f, arity, rng.randint(1, 3))
    return ConstraintLanguage(D, rels), f


def random_injective_relation(rng: random.Random, D: Domain) -> Relation:
    """Graph of a random partial injective map (possibly empty)."""
    k = rng.randint(0, D.size)
    src = rng.sample(D.elements, k)
    dst = rng.sample(D.elements, k)
    return Relation(2, zip(src, dst))


def random_permutation_language(rng: random.Random, D: Domain, n_rels: int = 3) -> ConstraintLanguage:
    rels = {}
    for i in range(n_rels):
        if rng.random() < 0.2:
            rels[f"U{i}"] = Relation(1, [(x,) for x in rng.sample(D.elements, rng.randint(1, D.size))])
        elif rng.random() < 0.7:
            perm = rng.sample(D.elements, D.size)
            rels[f"P{i}"] = Relation(2, zip(D.elements, perm))
        else:
            rels[f"P{i}"] = random_injective_relation(rng, D)
    return ConstraintLanguage(D, rels)


def random_linear_instance(rng: random.Random, p: int, n_vars: int, n_eqs: int, max_weight: int = 10, max_scope: int = 3):
    """``(instance, group)``: random equations ``sum c_i x_i = b`` over Z_p as coset relations."""
    D = Domain.range(p, cap=None)
    G = cyclic_group(D)
    rels: dict[Relation, str] = {}
    cons = []
    for _ in range(n_eqs):
        k = rng.randint(1, min(max_scope, n_vars))
        scope = rng.sample(range(n_vars), k)
        coeffs = [rng.randrange(1, p) for _ in scope]
        b = rng.randrange(p)
        R = Relation(k, (t for t in itertools.product(range(p), repeat=k)
                         if sum(c * x for c, x in zip(coeffs, t)) % p == b))
        rels.setdefault(R, f"L{len(rels)}")
        cons.append((tuple(scope), rels[R]))
    lang = ConstraintLanguage(D, [(n, R) for R, n in rels.items()])
    names = [f"v{i}" for i in range(n_vars)]
    return Instance(lang, names, [rng.randint(0, max_weight) for _ in names], cons), G


def random_eqn_instance(rng: random.Random, p: int, n_vars: int, n_eqs: int, gmap=None, max_weight: int = 5) -> EqnInstance:
    names = [f"x{i}" for i in range(n_vars)]
    eqs = []
    for _ in range(n_eqs):
        terms = [(rng.choice((1, -1)), rng.choice(names)) for _ in range(rng.randint(1, 3))]
        eqs.append(Equation(tuple(terms), rng.randrange(p)))
    weights = tuple(rng.randint(0, max_weight) for _ in names)
    return EqnInstance(p, tuple(names), weights, tuple(eqs), tuple(gmap or ()))


def random_graph(rng: random.Random, n: int, prob: float = 0.5) -> Graph:
    return Graph(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < prob])


def all_graphs(max_n: int) -> list[Graph]:
    """One graph per isomorphism class on up to ``max_n`` vertices (max_n <= 7)."""
    out = []
    for g in nx.graph_atlas_g():
        if g.number_of_nodes() > max_n:
            break
        out.append(Graph(g.number_of_nodes(), g.edges()))
    return out
