"""Subspaces of F_q^n, the cyclic shift, and covering verification."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .gf import FieldCtx, base_field
from .ntheory import floor_log
from .orbits import (
    DEFAULT_VECTOR_BUDGET,
    BudgetExceeded,
    compute_masks,
    decode,
    default_threads,
    digits,
    orbit_representatives,
    scan_reps,
    shift,
    span_digits,
    undigits,
)
from .polyring import LengthMismatch, NonCoprime, Poly, factor_xn_minus_1

__all__ = [
    "BudgetExceeded",
    "Subspace",
    "shift",
    "inner",
    "subspace_from_rows",
    "contains",
    "is_cyclic_covering",
    "is_tau3_covering",
    "decompose_invariant",
    "hq_bruteforce",
]


def inner(u: Sequence[int], v: Sequence[int], F: FieldCtx) -> int:
    return linalg.vec_dot(u, v, F)


@dataclass(frozen=True)
class Subspace:
    """Row-reduced basis of a subspace of F_q^n."""

    ctx: FieldCtx
    n: int
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], F: FieldCtx, n: int | None = None) -> "Subspace":
        rows = [list(r) for r in rows]
        if n is None:
            if not rows:
                raise LengthMismatch("cannot infer n from an empty row list")
            n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise LengthMismatch("rows of different lengths")
        R, piv = linalg.rref(rows, F) if rows else ([], [])
        return cls(F, n, tuple(tuple(r) for r in R), tuple(piv))

    @classmethod
    def full(cls, F: FieldCtx, n: int) -> "Subspace":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], F, n)

    @classmethod
    def from_duals(cls, duals: Iterable[Sequence[int]], F: FieldCtx, n: int) -> "Subspace":
        """``{x : inner(x, a) = 0 for every dual a}``."""
        duals = [list(d) for d in duals]
        if not duals:
            return cls.full(F, n)
        return cls.from_rows(linalg.nullspace(duals, F, n), F, n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.n - self.dim

    @property
    def q(self) -> int:
        return self.ctx.q

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.n:
            raise LengthMismatch(f"vector of length {len(v)} in F_q^{self.n}")
        F = self.ctx
        r = list(v)
        for row, pc in zip(self.basis, self.pivots):
            c = r[pc]
            if c:
                nc = F.neg(c)
                r = [F.add(a, F.mul(nc, b)) for a, b in zip(r, row)]
        return not any(r)

    @cached_property
    def annihilator(self) -> tuple[tuple[int, ...], ...]:
        """RREF basis of the orthogonal complement (the dual vectors)."""
        if not self.basis:
            rows = [[int(i == j) for j in range(self.n)] for i in range(self.n)]
        else:
            rows = linalg.nullspace([list(b) for b in self.basis], self.ctx, self.n)
        R, _ = linalg.rref(rows, self.ctx) if rows else ([], [])
        return tuple(tuple(r) for r in R)

    def shifted(self, i: int) -> "Subspace":
        return Subspace.from_rows([shift(b, i) for b in self.basis], self.ctx, self.n)

    def scaled(self, c: int) -> "Subspace":
        F = self.ctx
        return Subspace.from_rows([[F.mul(c, x) for x in b] for b in self.basis], F, self.n)

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "basis": [list(b) for b in self.basis], "duals": [list(a) for a in self.annihilator]}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subspace) and self.ctx == other.ctx and self.basis == other.basis and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.ctx, self.n, self.basis))


def subspace_from_rows(rows: Iterable[Sequence[int]], q: int | FieldCtx = 3, n: int | None = None) -> Subspace:
    F = q if isinstance(q, FieldCtx) else base_field(q)
    return Subspace.from_rows(rows, F, n)


def contains(S: Subspace, v: Sequence[int]) -> bool:
    return S.contains(v)


# ---------------------------------------------------------------------------
# covering verification
# ---------------------------------------------------------------------------


def _covering_check(S: Subspace, step: int, budget: int, threads: int | None):
    from .certificates import CoveringWitness, NonCoveringWitness

    F, n = S.ctx, S.n
    if F.q**n > budget:
        raise BudgetExceeded(f"vectors of F_{F.q}^{n}", F.q**n, budget)
    duals = S.annihilator
    if not duals:
        return CoveringWitness.build(S, step=step)
    reps = orbit_representatives(F.q, n, step, budget=budget)
    bad = scan_reps(reps, np.array(duals, dtype=np.int64), F, threads or default_threads())
    if bad is None:
        if step == 1:
            # every covering subspace has codimension at most floor(log_q n)
            assert S.codim <= floor_log(F.q, n), "orbit bound violated"
        return CoveringWitness.build(S, step=step)
    return NonCoveringWitness(F.q, n, step, [list(b) for b in S.basis], list(decode(int(reps.codes[bad]), F.q, n)))


def is_cyclic_covering(S: Subspace, budget: int = DEFAULT_VECTOR_BUDGET, threads: int | None = None):
    """Covering certificate for ``S`` under the full cyclic shift group.

    Returns a ``CoveringWitness`` or a ``NonCoveringWitness`` carrying the
    lexicographically smallest vector that no shift of ``S`` contains.
    """
    return _covering_check(S, 1, budget, threads)


def is_tau3_covering(S: Subspace, m: int, n: int, budget: int = DEFAULT_VECTOR_BUDGET, threads: int | None = None):
    """Covering under the n-element group generated by the m-fold shift of
    F_q^{mn}."""
    if S.n != m * n:
        raise LengthMismatch(f"subspace lives in dimension {S.n}, expected {m * n}")
    return _covering_check(S, m, budget, threads)


# ---------------------------------------------------------------------------
# invariant components
# ---------------------------------------------------------------------------


def decompose_invariant(q: int, n: int) -> list[Subspace]:
    """``W_i = ker f_i(shift)`` for the irreducible factors ``f_i`` of
    ``x^n - 1``, in factor order.  ``W_i`` consists of the multiples of
    ``(x^n - 1)/f_i`` in ``F_q[x]/(x^n - 1)``."""
    from math import gcd

    if gcd(q, n) != 1:
        raise NonCoprime(f"gcd({q}, {n}) != 1")
    fac = factor_xn_minus_1(q, n)
    F = fac.ctx
    xn1 = Poly.x_pow(F, n) - Poly(F, (1,))
    out = []
    for f in fac.factors:
        h = xn1 // f.poly
        rows = [(Poly.x_pow(F, j) * h).padded(n) for j in range(f.degree)]
        out.append(Subspace.from_rows(rows, F, n))
    return out


# ---------------------------------------------------------------------------
# brute force h_q(n)
# ---------------------------------------------------------------------------


def _canonical_span(rows: Sequence[Sequence[int]], F: FieldCtx, n: int) -> tuple[tuple[int, ...], ...]:
    """Lex-smallest RREF basis among all shifts of ``span(rows)``."""
    best = None
    for i in range(n):
        R, _ = linalg.rref([shift(r, i) for r in rows], F)
        key = tuple(tuple(r) for r in R)
        if best is None or key < best:
            best = key
    return best


def _span_orbit_key(span: np.ndarray, q: int, n: int) -> tuple[int, ...]:
    """Shift-invariant key of a subspace given all its vectors (as digits)."""
    from .orbits import rotate_codes

    codes = undigits(span, q)
    rot = np.sort(np.stack([rotate_codes(codes, q, n, s) for s in range(n)]), axis=1)
    return min(tuple(r) for r in rot.tolist())


def covering_duals(q: int, n: int, budget: int = 1 << 20, threads: int | None = None) -> np.ndarray:
    """Codes of all nonzero ``a`` with ``{x : inner(x, a) = 0}`` covering.

    Only orbit representatives are tested; covering is invariant under shift
    and nonzero scaling, so the result is the union of the covering orbits.
    """
    from .search import covering_reps

    F = base_field(q)
    reps = orbit_representatives(q, n, budget=budget)
    good = covering_reps(reps, reps.digits(), F, threads=threads)
    return _expand_orbits(reps.digits()[good], F, n)


def _expand_orbits(D: np.ndarray, F: FieldCtx, n: int) -> np.ndarray:
    from .orbits import scalar_tables, undigits

    if len(D) == 0:
        return np.zeros(0, dtype=np.int64)
    idx = np.arange(n)
    out = []
    for t in scalar_tables(F):
        S = t[D]
        for s in range(n):
            out.append(undigits(S[:, (idx - s) % n], F.q))
    return np.unique(np.concatenate(out))


def hq_bruteforce(
    q: int,
    n: int,
    budget: int = 1 << 20,
    threads: int | None = None,
    max_codim: int | None = None,
    mask_memory_mb: int = 1024,
):
    """Exact h_q(n) by exhaustive search over dual spaces, for tiny ``q**n``.

    A dual space is covering iff the AND of its vectors' shift masks is
    nonzero on every orbit representative, and every vector of a covering
    dual space is a covering dual.  So dual spaces are grown depth-first
    from covering duals, carrying the running AND, and are deduplicated up
    to shift at each dimension.  The search stops once a covering subspace
    of codimension ``floor(log_q n)`` (or ``max_codim``) is found.
    """
    from .certificates import CoveringWitness, ExhaustiveNonExistence, TheoremBound
    from .criteria import HqResult
    from .orbits import MemoryBudgetExceeded, canonical_codes, mask_dtype

    F = base_field(q)
    if q**n > budget:
        raise BudgetExceeded(f"vectors of F_{q}^{n}", q**n, budget)
    log_cap = floor_log(q, n)
    cap = log_cap if max_codim is None else min(log_cap, max_codim)
    threads = threads or default_threads()
    reps = orbit_representatives(q, n, budget=budget)
    c1 = covering_duals(q, n, budget, threads)
    P = digits(np.array(_projective_points_filter(c1, F, n), dtype=np.int64), q, n).reshape(-1, n)
    need = len(reps) * len(P) * np.dtype(mask_dtype(n)).itemsize
    if need > mask_memory_mb << 20:
        raise MemoryBudgetExceeded("brute-force mask table bytes", need, mask_memory_mb << 20)
    M = compute_masks(reps.digits(), P, F) if len(P) else np.zeros((len(reps), 0), dtype=mask_dtype(n))
    p_codes = undigits(P, q) if len(P) else np.zeros(0, dtype=np.int64)

    seen: list[set] = [set() for _ in range(cap + 1)]
    counts = {"covering_duals": int(len(c1)), "mask_tests": 0}
    best: list | None = None
    found = 0

    def grow(rows: list, acc: np.ndarray) -> bool:
        nonlocal best, found
        c = len(rows)
        if c > found:
            found, best = c, rows
        if c == cap:
            return True
        ok = ((M & acc[:, None]) != 0).all(axis=0)
        counts["mask_tests"] += len(P)
        in_span = np.isin(p_codes, undigits(span_digits(rows, F, n), q))
        for k in np.flatnonzero(ok & ~in_span):
            ext = rows + [P[k].tolist()]
            key = _span_orbit_key(span_digits(ext, F, n), q, n)
            if key in seen[c + 1]:
                continue
            seen[c + 1].add(key)
            if grow(ext, acc & M[:, k]):
                return True
        return False

    if cap >= 1 and len(P):
        starts = np.unique(canonical_codes(P, F))
        index = {int(code): k for k, code in enumerate(p_codes.tolist())}
        for code in starts.tolist():
            k = index[int(code)]
            if grow([P[k].tolist()], M[:, k]):
                break
    counts["classes_per_codim"] = [len(x) for x in seen[2:]]
    certs = []
    if best is not None:
        certs.append(CoveringWitness.build(Subspace.from_duals(best, F, n)))
    if found < log_cap:
        if max_codim is not None and found == max_codim:
            return HqResult.bounds(q, n, found, log_cap, certs, ["hq_bruteforce (capped)"])
        certs.append(
            ExhaustiveNonExistence(q, n, found + 1, "bruteforce_levels", {"budget": budget}, counts, refutations=[])
        )
    else:
        certs.append(TheoremBound.log_upper_bound(q, n))
    return HqResult.exact(q, n, found, certs, ["hq_bruteforce"])


def _projective_points_filter(codes: np.ndarray, F: FieldCtx, n: int) -> list[int]:
    """One code per projective class (the one whose first nonzero entry is 1)."""
    out = []
    for c in codes.tolist():
        v = decode(c, F.q, n)
        lead = next(x for x in v if x)
        if lead == 1:
            out.append(c)
    return out
