"""Exhaustive searches for covering subspaces of codimension 1 and 2.

Every search runs over canonical orbit representatives ``w`` of the nonzero
vectors and compares them against dual candidates ``a`` through shift masks:
bit ``i`` of ``mask(w, a)`` records ``inner(shift(w, i), a) == 0``.  The
kernel of a dual space ``D`` is covering iff for every representative the
masks of a basis of ``D`` share a set bit.
"""

from __future__ import annotations

import itertools
import sys
from concurrent.futures import ThreadPoolExecutor
from math import gcd
from typing import Sequence

import numpy as np

from . import linalg
from .certificates import CoveringWitness, ExhaustiveNonExistence
from .cover import Subspace, _canonical_span, decompose_invariant
from .gf import FieldCtx, base_field
from .orbits import (
    BudgetExceeded,
    MemoryBudgetExceeded,
    RepTable,
    compute_masks,
    decode,
    default_threads,
    encode,
    mask_dtype,
    orbit_representatives,
)

__all__ = [
    "orbit_representatives",
    "candidate_duals",
    "covering_reps",
    "codim1_search",
    "mask_table",
    "codim2_nonexistence",
]

TILE = 1 << 21  # products per tile: rows x (candidates * shifts)
DEFAULT_MASK_MB = 1024


def _progress(msg: str, enabled: bool) -> None:
    if enabled:
        print(msg, file=sys.stderr, flush=True)


def candidate_duals(q: int, n: int, W: Subspace, projective: bool = False, budget: int = 1 << 20) -> np.ndarray:
    """All nonzero combinations of the basis of ``W`` as an ``(N, n)`` array,
    in order of their coefficient tuples; with ``projective`` one per line
    through the origin (the combination whose first nonzero coefficient is 1).
    """
    F = W.ctx
    d = W.dim
    if q**d > budget:
        raise BudgetExceeded(f"combinations of a {d}-dim space", q**d, budget)
    B = np.array(W.basis, dtype=np.int64).reshape(d, n)
    coeffs = np.array(list(itertools.product(range(q), repeat=d))[1:], dtype=np.int64).reshape(-1, d)
    if projective:
        lead = coeffs[np.arange(len(coeffs)), (coeffs != 0).argmax(axis=1)]
        coeffs = coeffs[lead == 1]
    return linalg.np_matmul(coeffs, B, F)


def _tiles(K: int, rows: int, g: int) -> list[tuple[int, int]]:
    per = max(1, TILE // max(1, rows * g))
    return [(lo, min(lo + per, K)) for lo in range(0, K, per)]


def covering_reps(
    reps: RepTable,
    alphas: np.ndarray,
    F: FieldCtx,
    threads: int | None = None,
    first_chunk: int = 64,
) -> np.ndarray:
    """Boolean array: is the kernel of each single dual ``alphas[k]`` covering.

    Candidates are dropped as soon as one representative has an all-zero
    mask; chunks of representatives double in size as candidates thin out.
    """
    threads = threads or default_threads()
    alphas = np.atleast_2d(np.asarray(alphas, dtype=np.int64))
    K = alphas.shape[0]
    alive = np.arange(K)
    g = reps.n // reps.step
    lo, size = 0, first_chunk
    N = len(reps)
    while len(alive) and lo < N:
        W = reps.digits(lo, min(lo + size, N))
        tiles = _tiles(len(alive), W.shape[0], g)

        def work(t, W=W, sub=alive):
            M = compute_masks(W, alphas[sub[t[0] : t[1]]], F, reps.step)
            return (M != 0).all(axis=0)

        if threads > 1 and len(tiles) > 1:
            with ThreadPoolExecutor(threads) as ex:
                ok = np.concatenate(list(ex.map(work, tiles)))
        else:
            ok = np.concatenate([work(t) for t in tiles])
        alive = alive[ok]
        lo += size
        size = min(size * 2, max(first_chunk, TILE // max(1, len(alive) * g)), 1 << 16)
    out = np.zeros(K, dtype=bool)
    out[alive] = True
    return out


def mask_table(
    q: int,
    n: int,
    candidates: np.ndarray,
    reps: RepTable | None = None,
    memory_mb: int = DEFAULT_MASK_MB,
) -> np.ndarray:
    """Masks for every (representative, candidate) pair, shape ``(R, K)``."""
    F = base_field(q)
    reps = reps if reps is not None else orbit_representatives(q, n)
    candidates = np.atleast_2d(np.asarray(candidates, dtype=np.int64))
    need = len(reps) * candidates.shape[0] * np.dtype(mask_dtype(n)).itemsize
    if need > memory_mb * (1 << 20):
        raise MemoryBudgetExceeded("mask table bytes", need, memory_mb << 20)
    parts = []
    for lo in range(0, len(reps), 1 << 14):
        W = reps.digits(lo, lo + (1 << 14))
        parts.append(
            np.concatenate(
                [compute_masks(W, candidates[a:b], F, reps.step) for a, b in _tiles(len(candidates), W.shape[0], n)],
                axis=1,
            )
        )
    return np.concatenate(parts, axis=0)


def _projective(codes: Sequence[int], q: int, n: int) -> list[int]:
    out = []
    for c in codes:
        v = decode(int(c), q, n)
        if next(x for x in v if x) == 1:
            out.append(int(c))
    return out


def codim1_search(q: int, n: int, budget: int = 1 << 26, threads: int | None = None):
    """A ``CoveringWitness`` of codimension 1, or None after exhausting.

    For ``gcd(q, n) == 1`` the candidates are the duals lying in a single
    invariant component: if some component ``W`` has a covering hyperplane
    ``H`` then ``H`` plus the other components is covering, and its dual lies
    in one component, so this candidate set is complete.  Otherwise every
    orbit representative is tried.
    """
    F = base_field(q)
    reps = orbit_representatives(q, n, budget=budget)
    if gcd(q, n) == 1:
        pools = [candidate_duals(q, n, W, projective=True) for W in decompose_invariant(q, n)]
        cands = np.concatenate(pools) if pools else np.zeros((0, n), dtype=np.int64)
        order = np.argsort([encode(r, q) for r in cands.tolist()], kind="stable")
        cands = cands[order]
    else:
        cands = reps.digits()
    ok = covering_reps(reps, cands, F, threads)
    hits = np.flatnonzero(ok)
    if len(hits) == 0:
        return None
    best = min((tuple(cands[i].tolist()) for i in hits), key=lambda v: _canonical_span([v], F, n))
    alpha = _canonical_span([best], F, n)[0]
    return CoveringWitness.build(Subspace.from_duals([alpha], F, n))


# ---------------------------------------------------------------------------
# codimension 2
# ---------------------------------------------------------------------------


def _span_key(a: Sequence[int], b: Sequence[int], F: FieldCtx) -> tuple:
    R, _ = linalg.rref([list(a), list(b)], F)
    return tuple(tuple(r) for r in R)


def _dependent(a: Sequence[int], b: Sequence[int], F: FieldCtx) -> bool:
    return linalg.rank([list(a), list(b)], F) < 2


def _scan_pairs(
    reps: RepTable,
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]],
    F: FieldCtx,
    threads: int,
    progress: bool,
) -> tuple[list[int], list[int | None]]:
    """For each dual pair, the index of the first representative it misses
    (None if it misses none).  Masks are built per chunk for the distinct
    vectors involved; chunks of representatives grow as pairs die."""
    if not pairs:
        return [], []
    vecs = sorted({v for p in pairs for v in p})
    index = {v: i for i, v in enumerate(vecs)}
    A = np.array([index[p[0]] for p in pairs])
    B = np.array([index[p[1]] for p in pairs])
    V = np.array(vecs, dtype=np.int64)
    first_fail: list[int | None] = [None] * len(pairs)
    alive = np.arange(len(pairs))
    lo, size, N = 0, 64, len(reps)
    g = reps.n // reps.step
    while len(alive) and lo < N:
        hi = min(lo + size, N)
        W = reps.digits(lo, hi)
        used = np.unique(np.concatenate([A[alive], B[alive]]))
        tiles = _tiles(len(used), W.shape[0], g)

        def work(t, W=W, used=used):
            return compute_masks(W, V[used[t[0] : t[1]]], F, reps.step)

        if threads > 1 and len(tiles) > 1:
            with ThreadPoolExecutor(threads) as ex:
                M = np.concatenate(list(ex.map(work, tiles)), axis=1)
        else:
            M = np.concatenate([work(t) for t in tiles], axis=1)
        col = np.full(len(vecs), -1)
        col[used] = np.arange(len(used))
        both = M[:, col[A[alive]]] & M[:, col[B[alive]]]
        dead = (both == 0).any(axis=0)
        if dead.any():
            rows = (both == 0).argmax(axis=0)
            for j in np.flatnonzero(dead):
                first_fail[alive[j]] = lo + int(rows[j])
        alive = alive[~dead]
        _progress(f"  reps {hi}/{N}: {len(alive)} pairs alive", progress)
        lo = hi
        size = min(size * 2, 1 << 16)
    return list(alive), first_fail


def _component_label(i: int) -> str:
    return f"W{i}"


def codim2_nonexistence(
    q: int,
    n: int,
    pools: str = "components",
    threads: int | None = None,
    mask_memory_mb: int = DEFAULT_MASK_MB,
    budget: int = 1 << 26,
    progress: bool = False,
):
    """Search for a covering subspace of codimension 2.

    ``pools="components"``: dual pairs are drawn from the invariant
    components, within one component or across two, for every combination
    of components.  ``pools="all"``: every two-dimensional dual space whose
    nonzero vectors are all covering duals (anywhere in F_q^n) is tried.

    Returns a ``CoveringWitness`` for the first covering pair (smallest
    canonical dual basis) or an ``ExhaustiveNonExistence`` with counts.
    """
    threads = threads or default_threads()
    F = base_field(q)
    reps = orbit_representatives(q, n, budget=budget)
    if pools == "components":
        pair_list, counts, params = _component_pairs(q, n, reps, F, threads, progress)
    elif pools == "all":
        pair_list, counts, params = _all_pairs(q, n, reps, F, threads, progress)
    else:
        raise ValueError(f"unknown pool mode {pools!r}")
    est = len(reps) * 2 * np.dtype(mask_dtype(n)).itemsize * min(len(pair_list), 1 << 10)
    if est > mask_memory_mb * (1 << 20) * 64:  # chunked; only a hard sanity limit
        raise MemoryBudgetExceeded("pair scan bytes", est, mask_memory_mb << 20)
    _progress(f"h_{q}({n}) codim 2: {len(pair_list)} distinct dual spaces to scan", progress)
    alive, fails = _scan_pairs(reps, pair_list, F, threads, progress)
    counts["covering_found"] = len(alive)
    if alive:
        keys = sorted(_canonical_span(list(pair_list[i]), F, n) for i in alive)
        return CoveringWitness.build(Subspace.from_duals(keys[0], F, n))
    refutations = [
        {"duals": [list(a), list(b)], "vector": list(decode(int(reps.codes[f]), q, n))}
        for (a, b), f in zip(pair_list, fails)
    ]
    return ExhaustiveNonExistence(q, n, 2, "codim2_pools", params, counts, refutations)


def _component_pairs(q, n, reps, F, threads, progress):
    comps = decompose_invariant(q, n)
    raw_pools = [candidate_duals(q, n, W) for W in comps]
    covering = []
    for i, P in enumerate(raw_pools):
        ok = covering_reps(reps, P, F, threads)
        covering.append(ok)
        _progress(f"  {_component_label(i)}: {len(P)} candidates, {int(ok.sum())} covering alone", progress)
    combos = {}
    seen: dict[tuple, tuple] = {}
    for i, j in itertools.combinations_with_replacement(range(len(comps)), 2):
        Pi, Pj = raw_pools[i], raw_pools[j]
        raw = len(Pi) * len(Pj)
        dependent = len(Pi) * (q - 1) if i == j else 0
        ci = [tuple(v) for v in Pi[covering[i]].tolist()]
        cj = [tuple(v) for v in Pj[covering[j]].tolist()]
        kept = 0
        distinct = set()
        for a in ci:
            for b in cj:
                if i == j and _dependent(a, b, F):
                    continue
                kept += 1
                key = _span_key(a, b, F)
                distinct.add(key)
                seen.setdefault(key, key)
        combos[f"{_component_label(i)}x{_component_label(j)}"] = {
            "raw_pairs": raw,
            "dependent_skipped": dependent,
            "pruned_noncovering_member": raw - dependent - kept,
            "pairs_kept": kept,
            "distinct_subspaces": len(distinct),
        }
    pair_list = sorted(seen)
    counts = {
        "orbit_representatives": len(reps),
        "pool_sizes": {_component_label(i): len(P) for i, P in enumerate(raw_pools)},
        "covering_in_pool": {_component_label(i): int(c.sum()) for i, c in enumerate(covering)},
        "combinations": combos,
        "raw_pairs_total": sum(c["raw_pairs"] for c in combos.values()),
        "dependent_skipped_total": sum(c["dependent_skipped"] for c in combos.values()),
        "distinct_subspaces_checked": len(pair_list),
    }
    params = {"pools": "components", "components": [list(map(list, W.basis)) for W in comps]}
    return [tuple(map(tuple, k)) for k in pair_list], counts, params


def covering_dual_space(q: int, n: int, reps: RepTable, F: FieldCtx, threads: int) -> np.ndarray:
    """Basis rows of a shift-invariant subspace containing every covering dual.

    For ``gcd(q, n) == 1``: if the kernel of ``a`` is covering, so is its
    intersection with each invariant component.  Each component pairs
    nondegenerately with exactly one component, so a nonzero projection of
    ``a`` onto ``W_j`` forces a covering hyperplane inside the partner of
    ``W_j``, which happens iff the pure duals of ``W_j`` are covering.  The
    result is the sum of those ``W_j``.  Otherwise the whole space.
    """
    if gcd(q, n) != 1:
        return np.eye(n, dtype=np.int64)
    rows = []
    for W in decompose_invariant(q, n):
        probe = candidate_duals(q, n, W, projective=True)[:1]
        if covering_reps(reps, probe, F, threads).all():
            rows.extend(W.basis)
    return np.array(rows, dtype=np.int64).reshape(-1, n)


def covering_dual_codes(q: int, n: int, reps: RepTable, F: FieldCtx, threads: int) -> tuple[np.ndarray, dict]:
    """Sorted codes of every nonzero ``a`` whose kernel is covering."""
    from .cover import _expand_orbits
    from .orbits import canonical_codes, digits

    S = covering_dual_space(q, n, reps, F, threads)
    if len(S) == 0:
        return np.zeros(0, dtype=np.int64), {"dual_space_dim": 0, "dual_orbits": 0}
    if len(S) == n:
        cand = reps.digits()
    else:
        sub = Subspace.from_rows(S.tolist(), F, n)
        cand = digits(np.unique(canonical_codes(candidate_duals(q, n, sub, projective=True, budget=1 << 26), F)), q, n)
    ok = covering_reps(reps, cand, F, threads)
    return _expand_orbits(cand[ok], F, n), {"dual_space_dim": int(len(S)), "dual_orbits": int(len(cand))}


def _all_pairs(q, n, reps, F, threads, progress):
    from .orbits import canonical_codes, extension_ok, span_digits

    c1, info = covering_dual_codes(q, n, reps, F, threads)
    proj = np.array(_projective(c1.tolist(), q, n), dtype=np.int64)
    _progress(f"  covering duals: {len(c1)} ({len(proj)} projective)", progress)
    P = digits_of(proj, q, n)
    # first vector up to shift and scalar: one canonical representative per orbit
    first = np.unique(canonical_codes(P, F)) if len(P) else proj
    classes = set()
    tested = 0
    for a_code in first.tolist():
        a = np.array(decode(a_code, q, n), dtype=np.int64)
        tested += len(P)
        ok = extension_ok(span_digits([a], F, n), P, F, c1)
        for b in P[ok]:
            if not _dependent(a.tolist(), b.tolist(), F):
                classes.add(_canonical_span([a.tolist(), b.tolist()], F, n))
    pair_list = sorted(classes)
    counts = {
        "orbit_representatives": len(reps),
        **info,
        "covering_duals": len(c1),
        "projective_covering_duals": len(proj),
        "pairs_tested": tested,
        "distinct_subspaces_checked": len(pair_list),
    }
    return [tuple(map(tuple, k)) for k in pair_list], counts, {"pools": "all"}


def digits_of(codes: np.ndarray, q: int, n: int) -> np.ndarray:
    from .orbits import digits

    return digits(np.asarray(codes, dtype=np.int64), q, n)
