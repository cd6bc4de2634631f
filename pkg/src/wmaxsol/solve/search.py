"""Complete backtracking search for one satisfying assignment."""
from __future__ import annotations

from ..core import Instance, as_assignment
from ..errors import BudgetExceeded
from .consistency import consistent_relations

DEFAULT_SEARCH_BUDGET = 10**7


def _propagate(doms, cons, by_var, dirty):
    """Generalised arc consistency; returns False on a wipe-out."""
    queue = list(dirty)
    pending = set(queue)
    while queue:
        k = queue.pop()
        pending.discard(k)
        scope, tuples = cons[k]
        live = [t for t in tuples if all(t[i] in doms[v] for i, v in enumerate(scope))]
        if not live:
            return False
        cons[k] = (scope, live)
        for i, v in enumerate(scope):
            support = {t[i] for t in live}
            if support != doms[v]:
                doms[v] = doms[v] & support
                for k2 in by_var[v]:
                    if k2 != k and k2 not in pending:
                        pending.add(k2)
                        queue.append(k2)
    return True


def csp_search(instance: Instance, budget: int | None = DEFAULT_SEARCH_BUDGET, order=None):
    """A satisfying assignment or None.

    Pairwise consistency at the root, then GAC at every node with the
    smallest-domain-first variable choice.  Values are tried largest first,
    which tends to find heavy solutions early but carries no guarantee.
    """
    D = instance.domain
    n = instance.n_vars
    rels = consistent_relations(instance)
    if any(not r for r in rels):
        return None
    cons = [(c.scope, sorted(r)) for c, r in zip(instance.constraints, rels)]
    by_var = [[] for _ in range(n)]
    for k, (scope, _) in enumerate(cons):
        for v in set(scope):
            by_var[v].append(k)
    doms = [set(D.elements) for _ in range(n)]
    if not _propagate(doms, cons, by_var, range(len(cons))):
        return None
    nodes = 0

    def search(doms, cons):
        nonlocal nodes
        open_vars = [v for v in range(n) if len(doms[v]) > 1]
        if not open_vars:
            return [next(iter(d)) for d in doms]
        v = min(open_vars, key=lambda u: (len(doms[u]), u))
        for x in sorted(doms[v], reverse=True):
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(f"search exceeded {budget} nodes")
            d2 = list(doms)
            d2[v] = {x}
            c2 = list(cons)
            if _propagate(d2, c2, by_var, by_var[v]):
                got = search(d2, c2)
                if got is not None:
                    return got
        return None

    vals = search(doms, cons)
    return None if vals is None else as_assignment(instance, vals)
