"""Search for a generalised-max polymorphism of a constraint language."""
from __future__ import annotations

from ..core import ConstraintLanguage, Domain, Operation
from ..errors import BudgetExceeded

DEFAULT_WITNESS_BUDGET = 10**8


def find_genmax_witness(language, budget: int = DEFAULT_WITNESS_BUDGET, domain: Domain | None = None):
    """A binary generalised-max operation preserving every relation, or None.

    Backtracking over the Cayley table with forward checking.  Each pair of
    tuples ``(t1, t2)`` from a relation gives one check on the cells
    ``(t1[i], t2[i])``; once all but one of those cells are set, values of
    the last cell that would push the image out of R are pruned.  The
    coupled condition on ``(a, b)``/``(b, a)`` is propagated the same way.
    Raises BudgetExceeded after ``budget`` assignments.
    """
    if isinstance(language, ConstraintLanguage):
        D = language.domain
        rels = list(language)
    else:
        if domain is None:
            raise ValueError("a domain is required when passing bare relations")
        D = domain
        rels = list(language)
    elems = D.elements
    cells = [(a, b) for a in elems for b in elems]
    cid = {c: i for i, c in enumerate(cells)}
    n_cells = len(cells)

    pref = []
    for a, b in cells:
        if a == b:
            pref.append([v for v in elems if v >= a])
        else:
            top = max(a, b)
            pref.append([top] + [v for v in reversed(elems) if v != top])
    dom = [set(p) for p in pref]
    partner = [cid[(b, a)] for a, b in cells]

    checks = []  # (tuple set, positions)
    seen = set()
    for ri, R in enumerate(rels):
        for t1 in R.tuples:
            for t2 in R.tuples:
                pos = tuple(cid[(x, y)] for x, y in zip(t1, t2))
                if (ri, pos) in seen:
                    continue
                seen.add((ri, pos))
                checks.append((R._set, pos))
    by_cell = [[] for _ in range(n_cells)]
    cnt = []
    for k, (_, pos) in enumerate(checks):
        distinct = set(pos)
        cnt.append(len(distinct))
        for c in distinct:
            by_cell[c].append(k)

    val = [None] * n_cells
    trail = []  # (cell, removed value)

    def prune(c, keep) -> bool:
        for v in [v for v in dom[c] if not keep(v)]:
            dom[c].discard(v)
            trail.append((c, v))
        return bool(dom[c])

    def filter_check(k) -> bool:
        rset, pos = checks[k]
        u = next(p for p in pos if val[p] is None)

        def keep(v):
            return tuple(v if p == u else val[p] for p in pos) in rset

        return prune(u, keep)

    def undo(mark):
        while len(trail) > mark:
            c, v = trail.pop()
            dom[c].add(v)

    # root propagation: checks touching a single cell
    for k in range(len(checks)):
        if cnt[k] == 1 and not filter_check(k):
            return None

    nodes = 0

    def assign(c, v) -> bool:
        val[c] = v
        for k in by_cell[c]:
            cnt[k] -= 1
        a, b = cells[c]
        if a != b and v <= min(a, b):
            pc = partner[c]
            hi = max(a, b)
            if val[pc] is not None:
                if val[pc] <= hi:
                    return False
            elif not prune(pc, lambda w: w > hi):
                return False
        for k in by_cell[c]:
            if cnt[k] == 0:
                rset, pos = checks[k]
                if tuple(val[p] for p in pos) not in rset:
                    return False
            elif cnt[k] == 1 and not filter_check(k):
                return False
        return True

    def unassign(c):
        val[c] = None
        for k in by_cell[c]:
            cnt[k] += 1

    def search(depth) -> bool:
        nonlocal nodes
        if depth == n_cells:
            return True
        c = min((i for i in range(n_cells) if val[i] is None), key=lambda i: len(dom[i]))
        for v in [v for v in pref[c] if v in dom[c]]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"generalised-max witness search exceeded {budget} nodes")
            mark = len(trail)
            if assign(c, v) and search(depth + 1):
                return True
            unassign(c)
            undo(mark)
        return False

    if not search(0):
        return None
    return Operation(D, 2, list(val), name="genmax")
