"""Vectors of F_q^n as integer codes, shift/scalar orbits and shift masks.

A vector ``(v_0, ..., v_{n-1})`` with entries given as field codes is encoded
as ``sum v_i * q**(n-1-i)``; ``v_0`` is the most significant digit, so integer
order and lexicographic order agree.

The shift is ``shift(v, i)[j] == v[j - i]`` (indices mod n).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .gf import FieldCtx, base_field

CHUNK = 1 << 18
DEFAULT_VECTOR_BUDGET = 1 << 24


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, need: int, budget: int):
        super().__init__(f"{what}: need {need}, budget {budget}")
        self.what = what
        self.need = need
        self.budget = budget


class MemoryBudgetExceeded(BudgetExceeded):
    pass


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CYCLOCOVER_THREADS", "1")))
    except ValueError:
        return 1


def shift(v: Sequence[int], i: int) -> tuple[int, ...]:
    n = len(v)
    if n == 0:
        return tuple(v)
    i %= n
    return tuple(v[n - i :]) + tuple(v[: n - i])


def encode(v: Sequence[int], q: int) -> int:
    code = 0
    for x in v:
        code = code * q + int(x)
    return code


def decode(code: int, q: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        code, out[i] = divmod(code, q)
    return tuple(out)


def digits(codes: np.ndarray, q: int, n: int) -> np.ndarray:
    """``(N,)`` int64 codes -> ``(N, n)`` digit matrix."""
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((codes.shape[0], n), dtype=np.int64)
    c = codes.copy()
    for i in range(n - 1, -1, -1):
        c, out[:, i] = np.divmod(c, q)
    return out


def undigits(D: np.ndarray, q: int) -> np.ndarray:
    n = D.shape[1]
    weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return D.astype(np.int64) @ weights


def rotate_codes(codes: np.ndarray, q: int, n: int, s: int) -> np.ndarray:
    """Codes of ``shift(v, s)`` for ``0 <= s < n``."""
    if s == 0:
        return codes
    low = q**s
    return codes // low + (codes % low) * q ** (n - s)


def scalar_tables(F: FieldCtx) -> list[np.ndarray]:
    """Lookup tables for multiplication by each nonzero scalar."""
    return [np.array([F.mul(c, a) for a in range(F.q)], dtype=np.int64) for c in range(1, F.q)]


def canonical(v: Sequence[int], F: FieldCtx, step: int = 1) -> tuple[tuple[int, ...], int]:
    """Lex-smallest element of ``{c * shift(v, step*i)}`` and the stabilizer size."""
    n = len(v)
    best = None
    stab = 0
    v = tuple(v)
    for c in range(1, F.q):
        w = tuple(F.mul(c, x) for x in v)
        for i in range(0, n, step) if n else [0]:
            r = shift(w, i)
            if r == v:
                stab += 1
            if best is None or r < best:
                best = r
    return best, stab


@dataclass(frozen=True)
class OrbitRep:
    vector: tuple[int, ...]
    code: int
    orbit_size: int
    stabilizer: int


@dataclass
class RepTable:
    """All canonical representatives of nonzero orbits, ascending."""

    q: int
    n: int
    step: int
    codes: np.ndarray  # int64, ascending
    orbit_sizes: np.ndarray

    @property
    def group_order(self) -> int:
        return (self.q - 1) * (self.n // self.step)

    def __len__(self) -> int:
        return len(self.codes)

    def digits(self, lo: int = 0, hi: int | None = None) -> np.ndarray:
        return digits(self.codes[lo:hi], self.q, self.n)

    def __iter__(self) -> Iterator[OrbitRep]:
        g = self.group_order
        for c, s in zip(self.codes.tolist(), self.orbit_sizes.tolist()):
            yield OrbitRep(decode(c, self.q, self.n), c, s, g // s)

    def total_vectors(self) -> int:
        return int(self.orbit_sizes.sum())


def _reps_chunk(lo: int, hi: int, q: int, n: int, step: int, tabs: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    codes = np.arange(lo, hi, dtype=np.int64)
    keep = np.ones(len(codes), dtype=bool)
    stab = np.ones(len(codes), dtype=np.int64)
    for s in range(step, n, step):
        r = rotate_codes(codes, q, n, s)
        keep &= codes <= r
        stab += codes == r
    codes, stab = codes[keep], stab[keep]
    if q > 2 and len(codes):
        D = digits(codes, q, n)
        for t in tabs[1:]:
            sc = undigits(t[D], q)
            ok = np.ones(len(codes), dtype=bool)
            for s in range(0, n, step):
                r = rotate_codes(sc, q, n, s)
                ok &= codes <= r
                stab += codes == r
            codes, stab, D = codes[ok], stab[ok], D[ok]
            # stab was only accumulated for survivors of this scalar; later
            # scalars filter further, keeping arrays aligned
    return codes, stab


def orbit_representatives(
    q: int, n: int, step: int = 1, budget: int = DEFAULT_VECTOR_BUDGET << 2
) -> RepTable:
    """One canonical representative per nonzero orbit of ``F_q^*`` times the
    group generated by ``shift(., step)``.  ``step`` must divide ``n``."""
    return _orbit_reps_cached(q, n, step, budget)


_REP_CACHE: dict[tuple[int, int, int], RepTable] = {}


def _orbit_reps_cached(q: int, n: int, step: int, budget: int) -> RepTable:
    if n % step:
        raise ValueError("step must divide n")
    key = (q, n, step)
    if key in _REP_CACHE:
        return _REP_CACHE[key]
    total = q**n
    if total > budget:
        raise BudgetExceeded(f"vectors of F_{q}^{n}", total, budget)
    F = base_field(q)
    tabs = scalar_tables(F)
    parts, stabs = [], []
    for lo in range(1, total, CHUNK):
        c, s = _reps_chunk(lo, min(lo + CHUNK, total), q, n, step, tabs)
        parts.append(c)
        stabs.append(s)
    codes = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    stab = np.concatenate(stabs) if stabs else np.zeros(0, dtype=np.int64)
    group = (q - 1) * (n // step)
    table = RepTable(q, n, step, codes, group // stab)
    _REP_CACHE[key] = table
    return table


def burnside_count(q: int, n: int, step: int = 1) -> int:
    """Number of nonzero orbits, by Burnside's lemma over scalar x shift."""
    from math import gcd

    F = base_field(q)
    m = n // step
    fixed_total = 0
    for c in range(1, q):
        oc = F.order(c) if q > 2 else 1
        for j in range(m):
            s = (j * step) % n
            cyc = gcd(s, n) if s else n  # cycles of the coordinate rotation
            L = n // cyc  # cycle length
            # c * shift(v, s) == v: along a cycle v_{k+s} = c^{-1} v_k, so the
            # cycle closes iff c^L == 1; then each cycle is free in one entry
            if L % oc == 0:
                fixed_total += q**cyc
            else:
                fixed_total += 1  # only zero
    # subtract the zero vector, which is fixed by every element
    group = (q - 1) * m
    return (fixed_total - group) // group


# ---------------------------------------------------------------------------
# shift masks
# ---------------------------------------------------------------------------


def mask_dtype(n: int):
    if n <= 8:
        return np.uint8
    if n <= 16:
        return np.uint16
    if n <= 32:
        return np.uint32
    return np.uint64


def shifted_stack(alphas: np.ndarray, n: int, step: int = 1) -> np.ndarray:
    """For each candidate row ``a`` the rows ``shift(a, -s)``, s in the shift
    group; shape ``(K * n/step, n)``, candidate-major."""
    alphas = np.asarray(alphas, dtype=np.int64)
    idx = np.arange(n)
    shifts = range(0, n, step)
    rows = [alphas[:, (idx + s) % n] for s in shifts]  # shift(a, -s)[j] = a[j+s]
    return np.stack(rows, axis=1).reshape(-1, n)


def _products(W: np.ndarray, S: np.ndarray, F: FieldCtx) -> np.ndarray:
    """Inner products ``W @ S.T`` over F (codes), shape (N, M)."""
    from .linalg import np_matmul

    return np_matmul(W, S.T, F)


def compute_masks(W: np.ndarray, alphas: np.ndarray, F: FieldCtx, step: int = 1) -> np.ndarray:
    """``(N, K)`` masks; bit ``j`` of ``mask[r, k]`` is
    ``[inner(shift(W[r], j*step), alphas[k]) == 0]``."""
    W = np.asarray(W, dtype=np.int64)
    alphas = np.atleast_2d(np.asarray(alphas, dtype=np.int64))
    n = W.shape[1]
    g = n // step
    K = alphas.shape[0]
    dt = mask_dtype(g)
    if K == 0 or W.shape[0] == 0:
        return np.zeros((W.shape[0], K), dtype=dt)
    weights = (np.uint64(1) << np.arange(g, dtype=np.uint64)).astype(dt)
    out = np.empty((W.shape[0], K), dtype=dt)
    kc = max(1, (1 << 24) // max(1, W.shape[0] * g))  # bounds the int64 intermediate
    for lo in range(0, K, kc):
        A = alphas[lo : lo + kc]
        # inner(shift(w, s), a) == inner(w, shift(a, -s))
        P = _products(W, shifted_stack(A, n, step), F).reshape(W.shape[0], len(A), g)
        out[:, lo : lo + len(A)] = ((P == 0).astype(dt) * weights).sum(axis=2, dtype=np.uint64).astype(dt)
    return out


def rotate_mask(mask: int, k: int, g: int) -> int:
    """Rotate a g-bit mask right by ``k`` (left for negative ``k``)."""
    k %= g
    full = (1 << g) - 1
    return ((mask >> k) | (mask << (g - k))) & full


def intersect_covers(masks_per_dual: Sequence[np.ndarray]) -> np.ndarray:
    """Boolean array: which rows have a shift orthogonal to every dual."""
    acc = masks_per_dual[0]
    for m in masks_per_dual[1:]:
        acc = acc & m
    return acc != 0


def scan_reps(
    reps: RepTable,
    duals: np.ndarray,
    F: FieldCtx,
    threads: int = 1,
    chunk: int = CHUNK,
) -> int | None:
    """Index of the first representative with no shift orthogonal to all of
    ``duals`` (a missed vector), or None when every representative is hit."""
    duals = np.atleast_2d(np.asarray(duals, dtype=np.int64))
    if duals.shape[0] == 0:
        return None
    bounds = [(lo, min(lo + chunk, len(reps))) for lo in range(0, len(reps), chunk)]

    def work(b):
        lo, hi = b
        M = compute_masks(reps.digits(lo, hi), duals, F, reps.step)
        ok = np.bitwise_and.reduce(M, axis=1) != 0
        bad = np.flatnonzero(~ok)
        return lo + int(bad[0]) if len(bad) else None

    if threads <= 1:
        for b in bounds:
            r = work(b)
            if r is not None:
                return r
        return None
    with ThreadPoolExecutor(threads) as ex:
        # deterministic: smallest failing index wins regardless of scheduling
        for r in ex.map(work, bounds):
            if r is not None:
                return r
    return None


# ---------------------------------------------------------------------------
# vectorised digit arithmetic
# ---------------------------------------------------------------------------


def add_digits(A: np.ndarray, B: np.ndarray, F: FieldCtx) -> np.ndarray:
    if F.k == 1:
        return (A + B) % F.p
    return F.np_tables().add[A, B]


def scale_digits(c: int, A: np.ndarray, F: FieldCtx) -> np.ndarray:
    if F.k == 1:
        return (c * A) % F.p
    return F.np_tables().mul[c, A]


def canonical_codes(D: np.ndarray, F: FieldCtx, step: int = 1) -> np.ndarray:
    """Canonical (smallest) code over scalar multiples and shifts, per row."""
    D = np.asarray(D, dtype=np.int64)
    n = D.shape[1]
    q = F.q
    best = None
    for c in range(1, q):
        codes = undigits(scale_digits(c, D, F), q)
        for s in range(0, n, step):
            r = rotate_codes(codes, q, n, s)
            best = r if best is None else np.minimum(best, r)
    return best


def span_digits(rows: Sequence[Sequence[int]], F: FieldCtx, n: int) -> np.ndarray:
    """All ``q**len(rows)`` vectors of the span (with repetitions if dependent)."""
    pts = np.zeros((1, n), dtype=np.int64)
    for r in rows:
        r = np.asarray(r, dtype=np.int64)[None, :]
        pts = np.concatenate([add_digits(pts, scale_digits(c, np.repeat(r, len(pts), 0), F), F) for c in range(F.q)])
    return pts


def extension_ok(span: np.ndarray, B: np.ndarray, F: FieldCtx, allowed_sorted: np.ndarray) -> np.ndarray:
    """For each row ``b`` of ``B``: is every ``s + c*b`` (s in ``span``,
    c nonzero) in the sorted code array ``allowed_sorted``."""
    q = F.q
    ok = np.ones(len(B), dtype=bool)
    for c in range(1, q):
        cB = scale_digits(c, B, F)
        for s in span:
            if not ok.any():
                return ok
            codes = undigits(add_digits(cB, s[None, :], F), q)
            pos = np.searchsorted(allowed_sorted, codes)
            pos = np.minimum(pos, len(allowed_sorted) - 1)
            ok &= allowed_sorted[pos] == codes if len(allowed_sorted) else False
    return ok
