"""Exact polynomial solvers: generalised-max-closed and injective languages."""
from __future__ import annotations

from collections import deque
from fractions import Fraction

from ..algebra.ops import is_generalised_max, is_polymorphism
from ..core import Instance, Operation, Relation, as_assignment, is_feasible
from ..errors import InternalError, InvalidCertificate, NotInjective
from .consistency import consistent_relations
from .result import SolveResult, Status


def solve_genmax(instance: Instance, witness: Operation) -> SolveResult:
    """Optimum for a language closed under a generalised-max operation.

    After pairwise consistency every variable has the same set of allowed
    values in each constraint it occurs in, and each filtered relation is
    still closed under the witness, so it contains its componentwise
    maximum.  Setting every variable to its largest allowed value is
    therefore feasible, and it is optimal because no solution can exceed it
    anywhere.
    """
    if not is_generalised_max(witness):
        raise InvalidCertificate(f"{witness.label} is not a generalised-max operation")
    for name, R in instance.language.relations.items():
        if not is_polymorphism(witness, R):
            raise InvalidCertificate(f"relation {name!r} is not closed under {witness.label}")
    D = instance.domain
    rels = consistent_relations(instance)
    if any(not r for r in rels):
        return SolveResult.infeasible("genmax")
    best = [D.max] * instance.n_vars
    for c, r in zip(instance.constraints, rels):
        top = Relation(len(c.scope), r).tmax()
        for v, x in zip(c.scope, top):
            best[v] = min(best[v], x)
    a = as_assignment(instance, best)
    if not is_feasible(instance, a):
        raise InternalError("componentwise maximum is not a solution; the witness must be wrong")
    m = sum(w * x for w, x in zip(instance.weights, best))
    return SolveResult(Status.OPTIMAL, a, m, Fraction(1), solver="genmax")


def _injective_map(R: Relation):
    fwd, bwd = {}, {}
    for a, b in R.tuples:
        if a in fwd or b in bwd:
            return None
        fwd[a] = b
        bwd[b] = a
    return fwd, bwd


def check_injective(instance: Instance) -> None:
    for c in instance.constraints:
        R = instance.relation(c)
        if R.arity == 1:
            continue
        if R.arity != 2 or _injective_map(R) is None:
            raise NotInjective(f"relation {c.relation!r} is not the graph of an injective partial map")


def solve_injective(instance: Instance) -> SolveResult:
    """Optimum when every constraint is unary or an injective binary relation.

    In each connected component of the constraint graph the value of one
    variable determines all the others, so at most |D| candidates per
    component need checking.
    """
    check_injective(instance)
    D = instance.domain
    n = instance.n_vars
    allowed = [set(D.elements) for _ in range(n)]
    adj = [[] for _ in range(n)]
    loops = []
    for c in instance.constraints:
        R = instance.relation(c)
        if R.arity == 1:
            allowed[c.scope[0]] &= {t[0] for t in R.tuples}
            continue
        u, v = c.scope
        fwd, bwd = _injective_map(R)
        if u == v:
            loops.append((u, R))
            continue
        adj[u].append((v, fwd))
        adj[v].append((u, bwd))
    for u, R in loops:
        allowed[u] &= {a for a, b in R.tuples if a == b}

    values = [None] * n
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        comp = [root]
        seen[root] = True
        q = deque([root])
        while q:
            u = q.popleft()
            for v, _ in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    q.append(v)
        best, best_m = None, -1
        for a in sorted(allowed[root], reverse=True):
            val = {root: a}
            ok = True
            q = deque([root])
            while q and ok:
                u = q.popleft()
                for v, m in adj[u]:
                    b = m.get(val[u])
                    if b is None or b not in allowed[v]:
                        ok = False
                        break
                    if v in val:
                        if val[v] != b:
                            ok = False
                            break
                    else:
                        val[v] = b
                        q.append(v)
            if not ok:
                continue
            meas = sum(instance.weights[v] * x for v, x in val.items())
            if meas > best_m:
                best, best_m = val, meas
        if best is None:
            return SolveResult.infeasible("injective")
        for v, x in best.items():
            values[v] = x
    a = as_assignment(instance, values)
    if not is_feasible(instance, a):
        raise InternalError("propagated assignment violates a constraint")
    m = sum(w * x for w, x in zip(instance.weights, values))
    return SolveResult(Status.OPTIMAL, a, m, Fraction(1), solver="injective")
