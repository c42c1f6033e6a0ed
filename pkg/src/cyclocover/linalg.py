"""Dense linear algebra over a finite field F_q.

Matrices are lists of rows of integer element codes (see :mod:`cyclocover.gf`).
The small exact routines work on Python lists; :func:`np_matmul` is the
vectorised product used by the enumeration code.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .gf import FieldCtx


class SingularMatrix(ValueError):
    pass


def rref(rows: Sequence[Sequence[int]], F: FieldCtx) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; zero rows are dropped.

    Returns ``(R, pivots)`` with ``len(R) == len(pivots) == rank``.
    """
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        if inv != 1:
            M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = F.neg(M[i][c])
                M[i] = [F.add(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence[int]], F: FieldCtx) -> int:
    return len(rref(rows, F)[1])


def inverse(M: Sequence[Sequence[int]], F: FieldCtx) -> list[list[int]]:
    n = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    R, piv = rref(aug, F)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in R]


def nullspace(rows: Sequence[Sequence[int]], F: FieldCtx, ncols: int | None = None) -> list[list[int]]:
    """Basis of ``{x : rows . x = 0}`` (right kernel), one basis vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    R, piv = rref(rows, F) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, piv):
            if row[f]:
                v[pc] = F.neg(row[f])
        basis.append(v)
    return basis


def coordinates(basis: Sequence[Sequence[int]], v: Sequence[int], F: FieldCtx) -> list[int] | None:
    """Coefficients ``c`` with ``sum c_i basis_i == v``, or None if ``v`` is
    outside the span.  ``basis`` must be linearly independent."""
    k = len(basis)
    n = len(v)
    # columns: basis vectors; solve B^T c = v via rref of the augmented system
    aug = [[basis[i][j] for i in range(k)] + [v[j]] for j in range(n)]
    R, piv = rref(aug, F)
    if k in piv:
        return None
    c = [0] * k
    for row, pc in zip(R, piv):
        c[pc] = row[k]
    return c


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], F: FieldCtx) -> list[list[int]]:
    out = []
    for row in A:
        new = []
        for j in range(len(B[0])):
            acc = 0
            for i, a in enumerate(row):
                if a and B[i][j]:
                    acc = F.add(acc, F.mul(a, B[i][j]))
            new.append(acc)
        out.append(new)
    return out


def vec_dot(u: Sequence[int], v: Sequence[int], F: FieldCtx) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def vec_add(u: Sequence[int], v: Sequence[int], F: FieldCtx) -> list[int]:
    return [F.add(a, b) for a, b in zip(u, v)]


def vec_scale(c: int, v: Sequence[int], F: FieldCtx) -> list[int]:
    return [F.mul(c, a) for a in v]


def np_matmul(X: np.ndarray, Y: np.ndarray, F: FieldCtx) -> np.ndarray:
    """``X @ Y`` over F_q for integer-code arrays ``X`` (N x k), ``Y`` (k x M)."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if F.k == 1:
        k = X.shape[1]
        if k * (F.p - 1) ** 2 < (1 << 24):
            out = X.astype(np.float32) @ Y.astype(np.float32)
            return out.astype(np.int64) % F.p
        return (X.astype(np.int64) @ Y.astype(np.int64)) % F.p
    t = F.np_tables()
    acc = np.zeros((X.shape[0], Y.shape[1]), dtype=np.int64)
    for j in range(X.shape[1]):
        acc = t.add[acc, t.mul[X[:, j][:, None], Y[j][None, :]]]
    return acc
