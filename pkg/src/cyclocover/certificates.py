"""Certificate objects, their JSON form and independent rechecks.

Rechecks deliberately avoid the shift-mask machinery used by the searches:
membership is tested against the primal (row-reduced) basis.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .gf import base_field
from .orbits import orbit_representatives

KINDS = ("covering_witness", "non_covering_witness", "exhaustive_nonexistence", "theorem_bound")


class MalformedCertificate(ValueError):
    pass


def _members_of_shifts(X: np.ndarray, basis: list[list[int]], pivots: list[int], F, n: int, step: int) -> np.ndarray:
    """For each row x of X: is ``x`` in ``shift(S, j*step)`` for some j.

    ``x in shift(S, s)`` iff ``shift(x, -s) in S``; with an RREF basis that is
    ``y == y[:, pivots] @ B``.
    """
    from .linalg import np_matmul

    hit = np.zeros(X.shape[0], dtype=bool)
    if not basis:
        hit[:] = ~X.any(axis=1)
        return hit
    B = np.array(basis, dtype=np.int64)
    idx = np.arange(n)
    for s in range(0, n, step):
        Y = X[:, (idx + s) % n]
        recon = np_matmul(Y[:, pivots], B, F)
        hit |= (recon == Y).all(axis=1)
    return hit


def _pivots(basis: list[list[int]]) -> list[int]:
    return [next(i for i, x in enumerate(r) if x) for r in basis]


def _rref(basis, F):
    from .linalg import rref

    R, _ = rref(basis, F)
    return R


@dataclass
class CoveringWitness:
    q: int
    n: int
    step: int
    basis: list[list[int]]
    duals: list[list[int]]
    kind: str = field(default="covering_witness", init=False)

    @classmethod
    def build(cls, S, step: int = 1) -> "CoveringWitness":
        return cls(S.q, S.n, step, [list(b) for b in S.basis], [list(a) for a in S.annihilator])

    @property
    def codim(self) -> int:
        return self.n - len(self.basis)

    def to_json(self) -> dict:
        return {"kind": self.kind, **{k: v for k, v in asdict(self).items() if k != "kind"}}

    def recheck(self, fast: bool = False) -> bool:
        F = base_field(self.q)
        basis = _rref(self.basis, F)
        if len(basis) != len(self.basis):
            return False
        # duals must annihilate the basis and have the complementary rank
        from .linalg import rank, vec_dot

        if self.duals and rank(self.duals, F) != self.n - len(basis):
            return False
        if any(vec_dot(b, a, F) for b in basis for a in self.duals):
            return False
        reps = orbit_representatives(self.q, self.n, self.step, budget=1 << 26)
        piv = _pivots(basis)
        for lo in range(0, len(reps), 1 << 16):
            X = reps.digits(lo, lo + (1 << 16))
            if not _members_of_shifts(X, basis, piv, F, self.n, self.step).all():
                return False
        return True


@dataclass
class NonCoveringWitness:
    q: int
    n: int
    step: int
    basis: list[list[int]]
    vector: list[int]
    kind: str = field(default="non_covering_witness", init=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, **{k: v for k, v in asdict(self).items() if k != "kind"}}

    def recheck(self, fast: bool = False) -> bool:
        F = base_field(self.q)
        basis = _rref(self.basis, F)
        X = np.array([self.vector], dtype=np.int64)
        return not _members_of_shifts(X, basis, _pivots(basis), F, self.n, self.step)[0]


@dataclass
class ExhaustiveNonExistence:
    """No covering subspace of codimension ``codim`` among the stated search
    space.  ``refutations`` lists ``{"duals": [...], "vector": [...]}`` pairs:
    a dual space together with a vector missed by every shift of its kernel.
    """

    q: int
    n: int
    codim: int
    method: str
    parameters: dict[str, Any]
    counts: dict[str, Any]
    refutations: list[dict] = field(default_factory=list)
    kind: str = field(default="exhaustive_nonexistence", init=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, **{k: v for k, v in asdict(self).items() if k != "kind"}}

    def _check_refutation(self, ref: dict, F) -> bool:
        from .cover import Subspace

        S = Subspace.from_duals(ref["duals"], F, self.n)
        if S.codim != len(ref["duals"]):
            return False
        X = np.array([ref["vector"]], dtype=np.int64)
        return not _members_of_shifts(X, [list(b) for b in S.basis], list(S.pivots), F, self.n, 1)[0]

    def recheck(self, fast: bool = False, seed: int = 0) -> bool:
        F = base_field(self.q)
        refs = self.refutations
        if fast and refs:
            rng = random.Random(seed)
            k = max(1, len(refs) // 100)
            refs = rng.sample(refs, k)
        if not all(self._check_refutation(r, F) for r in refs):
            return False
        if fast:
            return True
        return _rerun(self)


def _rerun(cert: ExhaustiveNonExistence) -> bool:
    """Re-run the producing search with the stated parameters."""
    if cert.method == "codim2_pools":
        from .search import codim2_nonexistence

        again = codim2_nonexistence(cert.q, cert.n, pools=cert.parameters.get("pools", "components"))
        return isinstance(again, ExhaustiveNonExistence) and again.counts == cert.counts
    if cert.method == "codim1_exhaustive":
        from .search import codim1_search

        return codim1_search(cert.q, cert.n) is None
    if cert.method == "bruteforce_levels":
        from .cover import hq_bruteforce

        res = hq_bruteforce(cert.q, cert.n, budget=cert.parameters.get("budget", 1 << 20))
        return res.hi == cert.codim - 1 or res.lo < cert.codim
    raise MalformedCertificate(f"unknown method {cert.method!r}")


@dataclass
class TheoremBound:
    """A bound ``lo <= h_q(n) <= hi`` that follows from a named result whose
    hypotheses are recomputable from ``parameters``.  ``premises`` are the
    claims (as ``[q, n, lo, hi]``) the result consumes; each must be backed by
    another certificate in the same chain."""

    theorem: str
    q: int
    n: int
    lo: int
    hi: int
    parameters: dict[str, Any]
    statement: str
    premises: list[list[int]] = field(default_factory=list)
    kind: str = field(default="theorem_bound", init=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, **{k: v for k, v in asdict(self).items() if k != "kind"}}

    @classmethod
    def log_upper_bound(cls, q: int, n: int) -> "TheoremBound":
        from .ntheory import floor_log

        return cls("log_upper_bound", q, n, 0, floor_log(q, n), {}, "h_q(n) <= floor(log_q n)")

    def recheck(self, fast: bool = False) -> bool:
        from .criteria import recheck_theorem

        return recheck_theorem(self)


CERT_TYPES = {
    "covering_witness": CoveringWitness,
    "non_covering_witness": NonCoveringWitness,
    "exhaustive_nonexistence": ExhaustiveNonExistence,
    "theorem_bound": TheoremBound,
}


def from_json(obj: dict):
    if not isinstance(obj, dict) or obj.get("kind") not in CERT_TYPES:
        raise MalformedCertificate("missing or unknown 'kind'")
    cls = CERT_TYPES[obj["kind"]]
    data = {k: v for k, v in obj.items() if k != "kind"}
    try:
        return cls(**data)
    except TypeError as exc:
        raise MalformedCertificate(str(exc)) from exc


def dumps(cert) -> str:
    return json.dumps(cert.to_json(), sort_keys=True)
