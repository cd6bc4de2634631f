"""Numeric inner loops.

Each kernel exists twice: a numba ``@njit`` version and a chunked numpy
version.  Both operate on domain *indices* and mixed-radix codes (first
position most significant) and must return identical results; the public
wrappers pick one according to :data:`wmaxsol._jit.USE_NUMBA` unless a
``backend`` is forced.

Encodings
---------
instance constraints
    ``scope_flat``/``scope_off``: concatenated scopes, ``scope_off[c]`` is the
    start of constraint ``c`` (length ``n_cons + 1``).  ``tab_flat``/``tab_off``:
    concatenated boolean membership tables, one per constraint.
relations
    ``rel_idx``: ``m x r`` matrix of element indices; ``rel_codes``: sorted codes.
"""
from __future__ import annotations

import numpy as np

from . import _jit
from ._jit import njit

NUMPY_CHUNK = 1 << 16


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------
@njit
def _decode(code, n_vars, n_dom, out):
    for v in range(n_vars - 1, -1, -1):
        out[v] = code % n_dom
        code //= n_dom


@njit
def _feasible(idx, n_dom, scope_flat, scope_off, tab_flat, tab_off):
    n_cons = scope_off.shape[0] - 1
    for c in range(n_cons):
        code = 0
        for j in range(scope_off[c], scope_off[c + 1]):
            code = code * n_dom + idx[scope_flat[j]]
        if not tab_flat[tab_off[c] + code]:
            return False
    return True


@njit
def _bf_numba(n_vars, n_dom, values, weights, scope_flat, scope_off, tab_flat, tab_off, hi, lo):
    """Scan codes hi-1 down to lo; return (found, best_measure, best_code)."""
    idx = np.zeros(max(n_vars, 1), dtype=np.int64)
    best = -1
    best_code = -1
    if hi <= lo:
        return False, best, best_code
    _decode(hi - 1, n_vars, n_dom, idx)
    code = hi - 1
    while code >= lo:
        if _feasible(idx, n_dom, scope_flat, scope_off, tab_flat, tab_off):
            m = 0
            for v in range(n_vars):
                m += weights[v] * values[idx[v]]
            if m > best:
                best = m
                best_code = code
        code -= 1
        # odometer decrement
        v = n_vars - 1
        while v >= 0:
            if idx[v] > 0:
                idx[v] -= 1
                break
            idx[v] = n_dom - 1
            v -= 1
    return best_code >= 0, best, best_code


@njit
def _solutions_numba(n_vars, n_dom, scope_flat, scope_off, tab_flat, tab_off, total, limit):
    idx = np.zeros(max(n_vars, 1), dtype=np.int64)
    buf = np.empty(16, dtype=np.int64)
    count = 0
    for code in range(total):
        if _feasible(idx, n_dom, scope_flat, scope_off, tab_flat, tab_off):
            if count == limit:
                return buf[:count], True
            if count == buf.shape[0]:
                nb = np.empty(buf.shape[0] * 2, dtype=np.int64)
                nb[:count] = buf[:count]
                buf = nb
            buf[count] = code
            count += 1
        v = n_vars - 1
        while v >= 0:
            if idx[v] < n_dom - 1:
                idx[v] += 1
                break
            idx[v] = 0
            v -= 1
    return buf[:count], False


@njit
def _poly_numba(f_table, k, n_dom, rel_idx, rel_codes):
    """Index of the first k-selection whose image leaves the relation, or -1."""
    m = rel_idx.shape[0]
    r = rel_idx.shape[1]
    if m == 0:
        return -1
    sel = np.zeros(k, dtype=np.int64)
    total = 1
    for _ in range(k):
        total *= m
    for s in range(total):
        code = 0
        for c in range(r):
            inp = 0
            for j in range(k):
                inp = inp * n_dom + rel_idx[sel[j], c]
            code = code * n_dom + f_table[inp]
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) // 2
            if rel_codes[mid] < code:
                lo = mid + 1
            else:
                hi = mid
        if lo == m or rel_codes[lo] != code:
            return s
        j = k - 1
        while j >= 0:
            if sel[j] < m - 1:
                sel[j] += 1
                break
            sel[j] = 0
            j -= 1
    return -1


# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------
def _digits(codes, width, base):
    radix = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // radix[None, :]) % base


def _feasible_mask(idx, n_dom, scope_flat, scope_off, tab_flat, tab_off):
    ok = np.ones(idx.shape[0], dtype=np.bool_)
    for c in range(len(scope_off) - 1):
        code = np.zeros(idx.shape[0], dtype=np.int64)
        for j in range(scope_off[c], scope_off[c + 1]):
            code = code * n_dom + idx[:, scope_flat[j]]
        ok &= tab_flat[tab_off[c] + code]
    return ok


def _bf_numpy(n_vars, n_dom, values, weights, scope_flat, scope_off, tab_flat, tab_off, hi, lo):
    best = -1
    best_code = -1
    top = hi
    while top > lo:
        bottom = max(lo, top - NUMPY_CHUNK)
        codes = np.arange(top - 1, bottom - 1, -1, dtype=np.int64)
        idx = _digits(codes, n_vars, n_dom) if n_vars else np.zeros((len(codes), 0), dtype=np.int64)
        ok = _feasible_mask(idx, n_dom, scope_flat, scope_off, tab_flat, tab_off)
        if ok.any():
            meas = values[idx[ok]] @ weights if n_vars else np.zeros(int(ok.sum()), dtype=np.int64)
            i = int(np.argmax(meas))  # first maximum = largest code in this chunk
            if meas[i] > best:
                best = int(meas[i])
                best_code = int(codes[ok][i])
        top = bottom
    return best_code >= 0, best, best_code


def _solutions_numpy(n_vars, n_dom, scope_flat, scope_off, tab_flat, tab_off, total, limit):
    found = []
    count = 0
    for start in range(0, total, NUMPY_CHUNK):
        codes = np.arange(start, min(total, start + NUMPY_CHUNK), dtype=np.int64)
        idx = _digits(codes, n_vars, n_dom) if n_vars else np.zeros((len(codes), 0), dtype=np.int64)
        ok = _feasible_mask(idx, n_dom, scope_flat, scope_off, tab_flat, tab_off)
        hit = codes[ok]
        if count + len(hit) > limit:
            found.append(hit[: limit - count])
            return np.concatenate(found), True
        found.append(hit)
        count += len(hit)
    return (np.concatenate(found) if found else np.zeros(0, dtype=np.int64)), False


def _poly_numpy(f_table, k, n_dom, rel_idx, rel_codes):
    m, r = rel_idx.shape
    if m == 0:
        return -1
    total = m**k
    for start in range(0, total, NUMPY_CHUNK):
        s = np.arange(start, min(total, start + NUMPY_CHUNK), dtype=np.int64)
        sel = _digits(s, k, m)  # (chunk, k)
        inp = np.zeros((len(s), r), dtype=np.int64)
        for j in range(k):
            inp = inp * n_dom + rel_idx[sel[:, j]]
        out = f_table[inp]
        code = out @ (n_dom ** np.arange(r - 1, -1, -1, dtype=np.int64))
        pos = np.searchsorted(rel_codes, code)
        pos = np.minimum(pos, m - 1)
        bad = rel_codes[pos] != code
        if bad.any():
            return int(s[np.argmax(bad)])
    return -1


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------
def _use_numba(backend):
    if backend is None:
        return _jit.USE_NUMBA
    if backend == "numba":
        if not _jit.HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return True
    if backend == "numpy":
        return False
    raise ValueError(f"unknown backend {backend!r}")


def best_in_range(enc, hi, lo, backend=None):
    """Best feasible code in ``[lo, hi)``; ties go to the largest code."""
    fn = _bf_numba if _use_numba(backend) else _bf_numpy
    found, best, code = fn(
        enc.n_vars, enc.n_dom, enc.values, enc.weights,
        enc.scope_flat, enc.scope_off, enc.tab_flat, enc.tab_off, int(hi), int(lo),
    )
    return bool(found), int(best), int(code)


def solution_codes(enc, limit, backend=None):
    fn = _solutions_numba if _use_numba(backend) else _solutions_numpy
    total = enc.n_dom**enc.n_vars
    codes, truncated = fn(
        enc.n_vars, enc.n_dom, enc.scope_flat, enc.scope_off, enc.tab_flat, enc.tab_off,
        int(total), int(limit),
    )
    return np.asarray(codes, dtype=np.int64), bool(truncated)


def first_violation(f_table, k, n_dom, rel_idx, rel_codes, backend=None):
    fn = _poly_numba if _use_numba(backend) else _poly_numpy
    return int(fn(f_table, int(k), int(n_dom), rel_idx, rel_codes))


def decode(code, n_vars, n_dom):
    out = [0] * n_vars
    for v in range(n_vars - 1, -1, -1):
        out[v] = code % n_dom
        code //= n_dom
    return out
