"""Pairwise consistency by semijoin filtering."""
from __future__ import annotations

from ..core import Instance, Relation


def _self_consistent(scope, tuples):
    """Drop tuples that give one variable two values (repeated scope entries)."""
    first = {}
    pairs = []
    for i, v in enumerate(scope):
        if v in first:
            pairs.append((first[v], i))
        else:
            first[v] = i
    if not pairs:
        return tuples
    return {t for t in tuples if all(t[i] == t[j] for i, j in pairs)}


def consistent_relations(instance: Instance):
    """Filtered tuple sets, one per constraint, at the pairwise fixpoint.

    Constraint i keeps a tuple iff, for every other constraint j, its values
    on the shared variables occur in some tuple of j.  That is exactly the
    condition that the join of i and j projects back onto i.
    """
    cons = instance.constraints
    rels = [_self_consistent(c.scope, set(instance.relation(c).tuples)) for c in cons]
    shared = {}
    by_var: dict[int, list[int]] = {}
    for i, c in enumerate(cons):
        for v in set(c.scope):
            by_var.setdefault(v, []).append(i)
    for i, c in enumerate(cons):
        pos_i = {v: c.scope.index(v) for v in c.scope}
        for j in sorted({j for v in pos_i for j in by_var[v] if j != i}):
            pos_j = {v: cons[j].scope.index(v) for v in cons[j].scope}
            common = sorted(set(pos_i) & set(pos_j))
            shared[i, j] = ([pos_i[v] for v in common], [pos_j[v] for v in common])
    queue = list(range(len(cons)))
    queued = set(queue)
    while queue:
        j = queue.pop(0)
        queued.discard(j)
        # j changed (or is new): re-filter everybody that shares variables with it
        for i in range(len(cons)):
            key = (i, j)
            if key not in shared:
                continue
            pi, pj = shared[key]
            support = {tuple(t[p] for p in pj) for t in rels[j]}
            kept = {t for t in rels[i] if tuple(t[p] for p in pi) in support}
            if len(kept) != len(rels[i]):
                rels[i] = kept
                if i not in queued:
                    queue.append(i)
                    queued.add(i)
    return rels


def pairwise_consistency(instance: Instance) -> Instance:
    """Equivalent instance whose constraints are pairwise consistent.

    Changed constraints get fresh relation names; relations that become empty
    are kept so callers can detect infeasibility.
    """
    rels = consistent_relations(instance)
    lang = instance.language
    extra = {}
    constraints = []
    for c, kept in zip(instance.constraints, rels):
        R = instance.relation(c)
        if len(kept) == len(R):
            constraints.append((c.scope, c.relation))
            continue
        newR = Relation(R.arity, kept)
        name = None
        for n, r in extra.items():
            if r == newR:
                name = n
                break
        if name is None:
            stem = f"{c.relation}'"
            name = stem
            k = 1
            while name in lang or name in extra:
                name = f"{stem}{k}"
                k += 1
            extra[name] = newR
        constraints.append((c.scope, name))
    new_lang = lang.with_relations(extra) if extra else lang
    return Instance(new_lang, instance.variables, instance.weights, constraints)
