"""Exact Gaussian elimination over any field of :mod:`spinlab.field`."""

from __future__ import annotations

from typing import List, Sequence


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.  Returns (matrix, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    n = len(M[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(M)):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        row = M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                Mi = M[i]
                M[i] = [a - f * b if b else a for a, b in zip(Mi, row)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def kernel(rows: Sequence[Sequence], ncols: int | None = None, zero=None, one=None) -> List[list]:
    """Basis of the right null space {x : M x = 0}.

    For an empty matrix the number of columns and field constants must be
    supplied.
    """
    if not rows:
        if ncols is None or zero is None:
            raise ValueError("empty matrix needs ncols, zero, one")
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    n = len(rows[0])
    R, piv = rref(rows, n)
    zero = rows[0][0] * 0
    one = zero + 1
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def det(rows):
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    acc = M[0][0] * 0 + 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return M[0][0] * 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            acc = -acc
        p = M[c][c]
        acc = acc * p
        inv = 1 / p
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return acc


def solve(rows, rhs):
    """One solution of M x = rhs, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    n = len(rows[0])
    R, piv = rref(aug, n + 1)
    if n in piv:
        return None
    zero = rows[0][0] * 0
    x = [zero] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


def mat_mul(A, B):
    return [[sum((a * b for a, b in zip(row, col)), A[0][0] * 0) for col in zip(*B)] for row in A]


def mat_vec(A, v):
    return [sum((a * b for a, b in zip(row, v)), v[0] * 0) for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def inverse(A):
    n = len(A)
    zero = A[0][0] * 0
    one = zero + 1
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(A)]
    R, piv = rref(aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]
