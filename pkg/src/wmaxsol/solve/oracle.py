"""Exhaustive enumeration: the reference optimum and the full solution set."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .. import kernels
from ..core import Instance, as_assignment
from ..errors import BudgetExceeded
from .result import SolveResult, Status

DEFAULT_BF_BUDGET = 2 * 10**7
# int64 accumulation is safe below this bound on sum(w) * max(D)
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class EncodedInstance:
    n_vars: int
    n_dom: int
    values: np.ndarray
    weights: np.ndarray
    scope_flat: np.ndarray
    scope_off: np.ndarray
    tab_flat: np.ndarray
    tab_off: np.ndarray


def encode_instance(instance: Instance) -> EncodedInstance | None:
    """Flat arrays for the kernels, or None if some table or sum would not fit."""
    D = instance.domain
    if sum(instance.weights) * D.max >= _INT64_SAFE:
        return None
    scopes, tables = [], []
    for c in instance.constraints:
        tab = instance.relation(c).membership_table(D)
        if tab is None:
            return None
        scopes.append(c.scope)
        tables.append(tab)
    scope_off = np.zeros(len(scopes) + 1, dtype=np.int64)
    tab_off = np.zeros(len(tables) + 1, dtype=np.int64)
    for i, (s, t) in enumerate(zip(scopes, tables)):
        scope_off[i + 1] = scope_off[i] + len(s)
        tab_off[i + 1] = tab_off[i] + len(t)
    return EncodedInstance(
        n_vars=instance.n_vars,
        n_dom=D.size,
        values=np.array(D.elements, dtype=np.int64),
        weights=np.array(instance.weights, dtype=np.int64),
        scope_flat=np.array([v for s in scopes for v in s], dtype=np.int64),
        scope_off=scope_off,
        tab_flat=np.concatenate(tables) if tables else np.zeros(0, dtype=np.bool_),
        tab_off=tab_off[:-1] if len(tables) else np.zeros(0, dtype=np.int64),
    )


def _python_best(instance: Instance, hi: int, lo: int):
    """Slow path for huge weights or tables: exact Python integers."""
    D = instance.domain
    n = instance.n_vars
    rels = [(c.scope, instance.relation(c)) for c in instance.constraints]
    best, best_code = -1, -1
    for code in range(hi - 1, lo - 1, -1):
        vals = [D.elements[i] for i in kernels.decode(code, n, D.size)]
        if all(tuple(vals[i] for i in s) in R for s, R in rels):
            m = sum(w * x for w, x in zip(instance.weights, vals))
            if m > best:
                best, best_code = m, code
    return best_code >= 0, best, best_code


def _check_budget(instance: Instance, budget: int | None) -> int:
    total = instance.domain.size**instance.n_vars
    if budget is not None and total > budget:
        raise BudgetExceeded(
            f"brute force needs {total} assignments, budget is {budget}"
        )
    return total


def brute_force(instance: Instance, budget: int | None = DEFAULT_BF_BUDGET, jobs: int = 1, backend=None) -> SolveResult:
    """Exact optimum by enumeration; ties go to the lexicographically largest assignment.

    With ``jobs > 1`` the code range is split into contiguous blocks scanned
    on a thread pool (the kernels release the GIL); merging by (measure,
    code) gives the same answer as a sequential scan.
    """
    total = _check_budget(instance, budget)
    enc = encode_instance(instance)
    D = instance.domain

    def scan(hi, lo):
        if enc is None:
            return _python_best(instance, hi, lo)
        return kernels.best_in_range(enc, hi, lo, backend=backend)

    jobs = max(1, int(jobs))
    if jobs == 1 or total < 4 * jobs:
        found, best, code = scan(total, 0)
    else:
        bounds = [total * k // jobs for k in range(jobs + 1)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda k: scan(bounds[k + 1], bounds[k]), range(jobs)))
        hits = [(b, c) for f, b, c in parts if f]
        found = bool(hits)
        best, code = max(hits) if hits else (-1, -1)
    if not found:
        return SolveResult.infeasible("brute_force", enumerated=total)
    vals = [D.elements[i] for i in kernels.decode(code, instance.n_vars, D.size)]
    return SolveResult(
        Status.OPTIMAL,
        as_assignment(instance, vals),
        int(best),
        Fraction(1),
        solver="brute_force",
        details={"enumerated": total},
    )


def enumerate_solutions(instance: Instance, budget: int | None = DEFAULT_BF_BUDGET, limit: int | None = None, backend=None):
    """All satisfying value tuples in lexicographic order (up to ``limit``)."""
    total = _check_budget(instance, budget)
    D = instance.domain
    enc = encode_instance(instance)
    if enc is None:
        out = []
        rels = [(c.scope, instance.relation(c)) for c in instance.constraints]
        for vals in itertools.product(D.elements, repeat=instance.n_vars):
            if all(tuple(vals[i] for i in s) in R for s, R in rels):
                out.append(vals)
                if limit is not None and len(out) >= limit:
                    break
        return out
    codes, _ = kernels.solution_codes(enc, total if limit is None else limit, backend=backend)
    elems = np.array(D.elements, dtype=np.int64)
    if instance.n_vars == 0:
        return [()] * len(codes)
    idx = kernels._digits(codes, instance.n_vars, D.size)
    return [tuple(int(x) for x in row) for row in elems[idx]]
