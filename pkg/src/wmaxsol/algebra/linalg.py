"""Gaussian elimination over Z_p (p prime) on small dense integer matrices."""
from __future__ import annotations


def rref(rows, n_cols: int, p: int):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``.

    ``rows`` are lists of length ``n_cols`` (or ``n_cols + 1`` for augmented
    systems, in which case the last column is never used as a pivot).
    """
    m = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r] + [row for row in m[r:] if any(row)], pivots


def rank(rows, n_cols: int, p: int) -> int:
    return len(rref(rows, n_cols, p)[1])


def nullspace(rows, n_cols: int, p: int):
    """Basis of ``{x : rows @ x == 0 (mod p)}``."""
    red, pivots = rref(rows, n_cols, p)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n_cols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[fc]) % p
        basis.append(v)
    return basis


def solve(rows, rhs, n_cols: int, p: int):
    """Affine solution set of ``rows @ x == rhs``.

    Returns ``(particular, kernel_basis)`` or ``None`` when inconsistent.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, n_cols, p)
    for row in red[len(pivots):]:
        if row[n_cols] % p:
            return None
    x = [0] * n_cols
    for row, pc in zip(red, pivots):
        x[pc] = row[n_cols] % p
    return x, nullspace(rows, n_cols, p)
