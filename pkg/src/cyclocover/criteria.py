"""Decision procedures and bounds for h_q(n), and the resolver combining them.

Every bound carries a certificate: an explicit witness, an exhaustive search
record, or a named result whose hypotheses can be recomputed from its
parameters (see :func:`recheck_theorem`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable

import numpy as np

from . import linalg
from .certificates import (
    CoveringWitness,
    ExhaustiveNonExistence,
    TheoremBound,
)
from .gf import FieldCtx, base_field, dual_basis, field_make, normal_element
from .ntheory import (
    divisors,
    floor_log,
    is_primitive_root,
    isprime,
    multiplicative_order,
    prime_power,
    split_p_part,
    totient,
)
from .orbits import BudgetExceeded
from .polyring import Poly, factor_xn_minus_1, is_irreducible, power_coeffs

DEFAULT_BUDGET = 1 << 26
TUPLE_BUDGET = 1 << 26


class CriteriaError(ValueError):
    pass


class NotAFactor(CriteriaError):
    pass


class NotOddPrime(CriteriaError):
    pass


class BadParameters(CriteriaError):
    pass


class EvenInput(CriteriaError):
    pass


class ZeroAlpha(CriteriaError):
    pass


class InconsistentBounds(AssertionError):
    pass


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------


def cert_bounds(cert) -> tuple[int, int, int, int] | None:
    """``(q, n, lo, hi)`` implied by a certificate, or None."""
    if isinstance(cert, CoveringWitness):
        if cert.step != 1:
            return None
        return cert.q, cert.n, cert.codim, floor_log(cert.q, cert.n)
    if isinstance(cert, ExhaustiveNonExistence):
        return cert.q, cert.n, 0, cert.codim - 1
    if isinstance(cert, TheoremBound):
        return cert.q, cert.n, cert.lo, cert.hi
    return None


@dataclass
class HqResult:
    q: int
    n: int
    lo: int
    hi: int
    certificates: list = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)
    headline: str = ""
    lo_rule: str = ""
    hi_rule: str = ""
    notes: list[str] = field(default_factory=list)
    budget_limited: bool = False

    @classmethod
    def exact(cls, q, n, value, certs, prov) -> "HqResult":
        return cls(q, n, value, value, list(certs), list(prov))

    @classmethod
    def bounds(cls, q, n, lo, hi, certs, prov) -> "HqResult":
        return cls(q, n, lo, hi, list(certs), list(prov))

    @property
    def status(self) -> str:
        return "exact" if self.lo == self.hi else "bounds"

    @property
    def value(self) -> int | None:
        return self.lo if self.lo == self.hi else None

    def tighten(self, lo: int | None, hi: int | None, rule: str, certs=(), detail: str = "") -> bool:
        """Apply a bound; returns True if it improved anything."""
        improved = False
        if lo is not None and lo > self.lo:
            self.lo, self.lo_rule, improved = lo, rule, True
        if hi is not None and hi < self.hi:
            self.hi, self.hi_rule, improved = hi, rule, True
        if self.lo > self.hi:
            raise InconsistentBounds(f"h_{self.q}({self.n}): {rule} gives [{lo}, {hi}] against [{self.lo}, {self.hi}]")
        entry = rule + (f": {detail}" if detail else "")
        if entry not in self.provenance:
            self.provenance.append(entry)
        for c in certs:
            self.add_cert(c)
        return improved

    def add_cert(self, cert) -> None:
        key = _cert_key(cert)
        if all(_cert_key(c) != key for c in self.certificates):
            self.certificates.append(cert)

    def absorb(self, other: "HqResult", rule: str | None = None) -> None:
        for c in other.certificates:
            self.add_cert(c)
        for p in other.provenance:
            self.tighten(None, None, p)
        self.tighten(other.lo, other.hi, rule or (other.provenance[-1] if other.provenance else "merged"))

    def label(self) -> str:
        if self.value is not None:
            return f"h_{self.q}({self.n}) = {self.value} [{self.headline}]"
        return f"{self.lo} <= h_{self.q}({self.n}) <= {self.hi} [{self.headline}]"

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "status": self.status,
            "lo": self.lo,
            "hi": self.hi,
            "certificates": [c.to_json() for c in self.certificates],
            "provenance": list(self.provenance),
        }


def _cert_key(cert) -> str:
    import json

    return json.dumps(cert.to_json(), sort_keys=True)


class ResultStore(dict):
    """Resolved results keyed by ``(q, n)``; premises are looked up here."""


# ---------------------------------------------------------------------------
# component criterion
# ---------------------------------------------------------------------------


@dataclass
class ComponentReport:
    factor: Poly
    rows: list[tuple[int, list[int]]]
    admits: bool
    witness: list[int] | None
    tuples_checked: int
    hits: list[tuple[list[int], int]] | None = None

    @property
    def degree(self) -> int:
        return self.factor.degree

    def to_json(self) -> dict:
        return {
            "factor": list(self.factor.coeffs),
            "admits": self.admits,
            "witness": self.witness,
            "tuples_checked": self.tuples_checked,
        }


def _unit_tuples(F: FieldCtx, d: int, lo: int, hi: int) -> np.ndarray:
    """Tuples ``lo..hi-1`` of ``(F^*)^d`` in lexicographic order."""
    units = np.arange(1, F.q, dtype=np.int64)
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((hi - lo, d), dtype=np.int64)
    for j in range(d - 1, -1, -1):
        idx, r = np.divmod(idx, F.q - 1)
        out[:, j] = units[r]
    return out


def tuple_scan(A: np.ndarray, F: FieldCtx, budget: int = TUPLE_BUDGET, keep_hits: bool = False):
    """Is every ``x`` in ``(F^*)^d`` orthogonal to some row of ``A``?

    Returns ``(all_hit, first_bad_tuple, checked, hits)``.
    """
    d = A.shape[1]
    total = (F.q - 1) ** d
    if total > budget:
        raise BudgetExceeded(f"tuples in (F_{F.q}^*)^{d}", total, budget)
    hits = [] if keep_hits else None
    step = 1 << 16
    for lo in range(0, total, step):
        X = _unit_tuples(F, d, lo, min(lo + step, total))
        if A.shape[0] == 0:
            return False, X[0].tolist(), lo + 1, hits
        Z = linalg.np_matmul(X, A.T, F) == 0
        hit = Z.any(axis=1)
        if keep_hits:
            first = Z.argmax(axis=1)
            hits.extend((x.tolist(), int(i)) for x, i in zip(X, first))
        if not hit.all():
            k = int(np.flatnonzero(~hit)[0])
            return False, X[k].tolist(), lo + k + 1, hits
    return True, None, total, hits


def component_codim1_check(q: int, n: int, f: Poly, budget: int = TUPLE_BUDGET) -> ComponentReport:
    """Does the component ``F_q[x]/(f)`` of ``F_q[x]/(x^n - 1)`` have a
    covering hyperplane?  Rows are ``x^i mod f`` for ``d <= i <= n``."""
    F = base_field(q)
    if f.ctx != F:
        raise CriteriaError("factor lives over a different field")
    xn1 = Poly.x_pow(F, n) - Poly(F, (1,))
    if f.degree < 1 or not (xn1 % f).is_zero():
        raise NotAFactor(f"{f.pretty()} does not divide x^{n} - 1")
    if not is_irreducible(f):
        raise NotAFactor(f"{f.pretty()} is not irreducible")
    d = f.degree
    rows = [(i, power_coeffs(f, i)) for i in range(d, n + 1)]
    A = np.array([r for _, r in rows], dtype=np.int64).reshape(-1, d)
    small = (q - 1) ** d <= 1024
    ok, bad, checked, hits = tuple_scan(A, F, budget, keep_hits=small)
    return ComponentReport(f, rows, ok, bad, checked, hits if ok else None)


def _zero_decision_params(q, n, budget):
    F = base_field(q)
    e, n1 = split_p_part(n, F.p)
    fac = factor_xn_minus_1(q, n1)
    reports = [component_codim1_check(q, n1, fct.poly, budget) for fct in fac.factors]
    return e, n1, fac, reports


def hq_zero_decision(q: int, n: int, budget: int = TUPLE_BUDGET) -> HqResult:
    """Exact 0 when no invariant component of ``F_q^{n'}`` has a covering
    hyperplane (``n = p^e n'``), else the bounds ``[1, floor(log_q n)]``."""
    e, n1, fac, reports = _zero_decision_params(q, n, budget)
    admitting = [r for r in reports if r.admits]
    hi = floor_log(q, n)
    params = {
        "n_prime": n1,
        "p_power": base_field(q).p ** e,
        "components": [r.to_json() for r in reports],
    }
    if not admitting:
        tb = TheoremBound(
            "component_criterion", q, n, 0, 0, params,
            "no invariant component of the p-free part admits a covering hyperplane",
        )
        res = HqResult.exact(q, n, 0, [tb], ["component_criterion"])
    else:
        tb = TheoremBound(
            "component_criterion", q, n, 1, hi, params,
            "an invariant component admits a covering hyperplane",
        )
        res = HqResult.bounds(q, n, 1, hi, [tb], ["component_criterion"])
    res.lo_rule = res.hi_rule = "component_criterion"
    res.reports = reports  # type: ignore[attr-defined]
    return res


# ---------------------------------------------------------------------------
# number-theoretic conditions
# ---------------------------------------------------------------------------


@dataclass
class Applicability:
    applicable: bool
    reason: str
    certificates: list = field(default_factory=list)
    data: dict = field(default_factory=dict)


def _is_prime_square(q: int) -> bool:
    pp = prime_power(q)
    return pp is not None and pp[1] == 2


def primitive_root_family(q: int, ell: int, t: int = 1) -> Applicability:
    """Primitive-root condition for lengths ``ell^t`` and ``2 ell^t``."""
    if ell < 3 or not isprime(ell):
        raise NotOddPrime(f"{ell} is not an odd prime")
    if gcd(q, ell) != 1:
        raise BadParameters(f"gcd({q}, {ell}) != 1")
    if t < 1:
        raise BadParameters("t must be positive")
    mod = ell**t
    order = multiplicative_order(q, mod)
    phi = int(totient(mod))
    primitive = order == phi
    lifts = is_primitive_root(q, ell) and pow(q, ell - 1, ell * ell) != 1
    data = {
        "order": order,
        "phi": phi,
        "primitive": primitive,
        "primitive_mod_ell": is_primitive_root(q, ell),
        "lifts_to_all_powers": lifts,
        "q_ne_2": q != 2,
        "q_ne_p_squared": not _is_prime_square(q),
    }
    if not primitive:
        return Applicability(False, f"ord_{mod}({q}) = {order} != {phi}", data=data)
    if not (data["q_ne_2"] and data["q_ne_p_squared"]):
        data["blocked_only_by_literal_hypotheses"] = True
        return Applicability(False, "q = 2 or q = p^2 excluded by hypothesis", data=data)
    params = {"ell": ell, "t": t}
    certs = [
        TheoremBound(
            "primitive_root_prime_power", q, mod, 0, 0, params,
            f"q primitive root mod {ell}^{t}, q != 2, q != p^2 => h_q({mod}) = 0",
        )
    ]
    if q % 2 == 1:
        certs.append(
            TheoremBound(
                "primitive_root_twice_prime_power", q, 2 * mod, 0, 0, params,
                f"q odd, primitive root mod {ell}^{t} => h_q({2 * mod}) = 0",
            )
        )
    return Applicability(True, "primitive root", certs, data)


@dataclass
class ResidueCheck:
    complete: bool
    distinct: bool
    count: int
    modulus: int
    note: str

    def __bool__(self) -> bool:
        return self.complete


def residue_system_check(q: int, t: int, N: int, n: int) -> ResidueCheck:
    """Do ``((q^t-1)/(q-1)) i + N j`` (``0 <= i <= q-2``, ``0 <= j < n``)
    form a complete residue system?  Checked modulo ``q^t - 1``, the order of
    the multiplicative group the exponents live in."""
    M = q**t - 1
    if n * N != M or n < 1 or N < 1:
        raise BadParameters(f"n*N = {n * N} != q^t - 1 = {M}")
    step = M // (q - 1)
    vals = {(step * i + N * j) % M for i in range(q - 1) for j in range(n)}
    count = (q - 1) * n
    distinct = len(vals) == count
    complete = distinct and count == M
    return ResidueCheck(complete, distinct, count, M, f"checked modulo q^t - 1 = {M} (not q^t = {M + 1})")


@dataclass
class OrdBound:
    m: int
    N: int
    coprime: bool
    bound: int | None
    exact_case: bool
    exact_value: int | None
    certificates: list


def ord_lower_bound(q: int, n: int) -> OrdBound:
    """``h_q(n) >= m - ord_N(q)`` when ``gcd(n, N) = 1``, with ``m = ord_n(q)``
    and ``nN = q^m - 1``; for ``m = 2`` and ``n > q`` also the exact value.
    ``ord_1(q)`` is 1: ``F_{q^1}`` is the subfield used in that case."""
    if gcd(q, n) != 1:
        raise BadParameters(f"gcd({q}, {n}) != 1")
    m = multiplicative_order(q, n)
    N = (q**m - 1) // n
    coprime = gcd(n, N) == 1
    certs = []
    bound = None
    if coprime:
        bound = m - multiplicative_order(q, N)
        if bound > 0:
            certs.append(
                TheoremBound(
                    "subfield_lower_bound", q, n, bound, floor_log(q, n), {"m": m, "N": N},
                    f"gcd(n, N) = 1 => h_q(n) >= m - ord_N(q) = {bound}",
                )
            )
    exact_case = m == 2 and n > q
    exact_value = None
    if exact_case:
        exact_value = 1 if (coprime and (q - 1) % N == 0) else 0
        certs.append(
            TheoremBound(
                "quadratic_order_exact", q, n, exact_value, exact_value, {"m": m, "N": N},
                "nN = q^2 - 1, n > q: h_q(n) = 1 iff gcd(n, N) = 1 and N | q - 1",
            )
        )
    return OrdBound(m, N, coprime, bound, exact_case, exact_value, certs)


def _store_exact(store: ResultStore | None, q: int, n: int) -> HqResult | None:
    if store is None:
        return None
    return store.get((q, n))


def transfer_2n(q: int, n: int, store: ResultStore | None = None) -> Applicability:
    """``h_q(n) = 0`` for odd ``q`` and odd ``n`` gives ``h_q(2n) = 0``."""
    if n % 2 == 0:
        raise EvenInput(f"n = {n} is even")
    if q % 2 == 0:
        raise EvenInput(f"q = {q} is even")
    prem = _store_exact(store, q, n)
    if prem is None or prem.hi != 0:
        return Applicability(False, f"no certified h_{q}({n}) = 0 in the store")
    tb = TheoremBound(
        "odd_length_doubling", q, 2 * n, 0, 0, {"base_n": n},
        f"q odd, n odd, h_q({n}) = 0 => h_q({2 * n}) = 0", premises=[[q, n, 0, 0]],
    )
    return Applicability(True, f"from h_{q}({n})=0", [tb] + list(prem.certificates))


def qm_reduction(q: int, m: int, n: int, store: ResultStore | None = None) -> Applicability:
    """``h_q(mn) <= m - 1`` gives ``h_{q^m}(n) = 0``."""
    prem = _store_exact(store, q, m * n)
    tau_bound = floor_log(q, n)
    data = {"tau3_upper_bound": tau_bound}
    if prem is None or prem.hi > m - 1:
        have = "unknown" if prem is None else f"<= {prem.hi}"
        return Applicability(False, f"h_{q}({m * n}) {have}, need <= {m - 1}", data=data)
    tb = TheoremBound(
        "extension_field_reduction", q**m, n, 0, 0, {"base_q": q, "m": m},
        f"h_{q}({m * n}) <= {m - 1} => h_{q ** m}({n}) = 0",
        premises=[[q, m * n, 0, m - 1]],
    )
    val = prem.value if prem.value is not None else f"<={prem.hi}"
    return Applicability(True, f"from h_{q}({m * n})={val}", [tb] + list(prem.certificates), data)


# ---------------------------------------------------------------------------
# known values from the literature
# ---------------------------------------------------------------------------


def _is_power_of(x: int, b: int) -> bool:
    if x < 1:
        return False
    while x % b == 0:
        x //= b
    return x == 1


def _known_clauses(q: int, n: int) -> list[tuple[str, int | None, int | None, str, dict]]:
    """Closed-form facts whose hypotheses hold literally for ``(q, n)``:
    ``(id, lo, hi, statement, parameters)``."""
    pp = prime_power(q)
    if pp is None:
        raise BadParameters(f"{q} is not a prime power")
    p, _ = pp
    out = []
    e, n1 = split_p_part(n, p)
    # q^d - 1
    d, acc = 1, q
    while acc - 1 < n:
        d, acc = d + 1, acc * q
    if acc - 1 == n:
        out.append(("known:q_power_minus_one", d - 1, d - 1, f"h_q(q^{d} - 1) = {d - 1}", {"d": d}))
    # k p^d with k | q - 1
    if (q - 1) % n1 == 0:
        out.append(("known:unit_root_length", 0, 0, "h_q(k p^d) = 0 for k | q - 1", {"k": n1, "d": e}))
    if q == 2:
        if _is_power_of(n, 2):
            out.append(("known:binary_power_of_two", 0, 0, "h_2(n) = 0 iff n is a power of 2", {}))
        elif n == 3:
            out.append(("known:binary_three", 1, 1, "h_2(n) = 1 iff n = 3", {}))
        else:
            out.append(("known:binary_at_least_two", 2, None, "h_2(n) >= 2 unless n = 3 or a power of 2", {}))
    # l p^d with l < q
    if n1 < q:
        out.append(("known:short_cofactor", 0, 0, "h_q(l p^d) = 0 for l < q", {"l": n1, "d": e}))
    if q == 2 and n > 3 and isprime(n) and is_primitive_root(2, n):
        out.append(("known:binary_primitive_prime", 2, 2, "h_2(t) = 2 for primes t > 3 with 2 primitive", {"t": n}))
    if isprime(q) and q > 2 and isprime(n) and n > q and is_primitive_root(q, n):
        out.append(("known:odd_prime_primitive_prime", 0, 0, "h_q(t) = 0 for q odd prime, t > q prime, q primitive mod t", {"t": n}))
    if p > 2:
        if n1 * 1 == q + 1 or (n % (q + 1) == 0 and _is_power_of(n // (q + 1), p)):
            out.append(("known:q_plus_one_length", 0, 0, "h_q(p^d (q + 1)) = 0 for odd p", {}))
        if (q + 1) % 4 == 0 and n % (2 * (q - 1)) == 0 and _is_power_of(n // (2 * (q - 1)), p):
            out.append(("known:twice_q_minus_one_length", 0, 0, "h_q(2 p^d (q - 1)) = 0 if 4 | q + 1", {}))
        if n % 2 == 0:
            m = n // 2
            _, ell = split_p_part(m, p)
            if ell > 2 and isprime(ell) and is_primitive_root(q, 2 * ell) and gcd(q, ell - 1) == 1:
                out.append(("known:twice_prime_length", 0, 0, "h_q(2 p^d l) = 0 for l odd prime, q primitive mod 2l, gcd(q, l - 1) = 1", {"l": ell}))
    return out


def known_value_oracle(q: int, n: int, _depth: int = 0) -> HqResult:
    """Tightest bounds from closed-form facts quoted from the literature,
    each fired only when its hypotheses hold literally."""
    hi0 = floor_log(q, n)
    res = HqResult(q, n, 0, hi0, [TheoremBound.log_upper_bound(q, n)], ["log_upper_bound"])
    res.hi_rule = "log_upper_bound"
    for tid, lo, hi, stmt, params in _known_clauses(q, n):
        tb = TheoremBound(tid, q, n, lo if lo is not None else 0, hi if hi is not None else hi0, params, stmt)
        res.tighten(lo, hi, tid, [tb])
    if _depth < 2 and n > 1:
        p = prime_power(q)[0]
        e, n1 = split_p_part(n, p)
        if e and n1 != n:
            sub = known_value_oracle(q, n1, _depth + 1)
            if sub.hi == 0:
                tb = TheoremBound("known:p_power_strip", q, n, 0, 0, {"n_prime": n1}, "h_q(n p^k) = 0 iff h_q(n) = 0", premises=[[q, n1, 0, 0]])
                res.tighten(None, 0, "known:p_power_strip", [tb, *sub.certificates])
            elif sub.lo >= 1:
                tb = TheoremBound("known:p_power_strip", q, n, 1, hi0, {"n_prime": n1}, "h_q(n p^k) = 0 iff h_q(n) = 0", premises=[[q, n1, 1, sub.hi]])
                res.tighten(1, None, "known:p_power_strip", [tb, *sub.certificates])
        for a in divisors(n):
            b = n // a
            if 1 < a <= b < n:
                ra, rb = known_value_oracle(q, a, _depth + 1), known_value_oracle(q, b, _depth + 1)
                if ra.lo + rb.lo > res.lo:
                    tb = TheoremBound(
                        "known:superadditive", q, n, ra.lo + rb.lo, hi0, {"m": a, "k": b},
                        "h_q(mk) >= h_q(m) + h_q(k)", premises=[[q, a, ra.lo, ra.hi], [q, b, rb.lo, rb.hi]],
                    )
                    res.tighten(ra.lo + rb.lo, None, "known:superadditive", [tb, *ra.certificates, *rb.certificates])
    return res


# ---------------------------------------------------------------------------
# V_alpha criterion on F_{q^n}
# ---------------------------------------------------------------------------


@dataclass
class VAlphaReport:
    t: int
    covering: bool
    rows: list[list[int]]
    witness: list[int] | None
    shortcut: bool
    note: str = "conjugate independence is taken over F_q"


def _field_for(q: int, n: int) -> FieldCtx:
    pp = prime_power(q)
    if pp is None or pp[1] != 1:
        raise BadParameters("the F_{q^n} criterion is implemented for prime q")
    return field_make(q, n)


def alpha_from_dual(q: int, n: int, a) -> list[int]:
    """Normal-basis coordinates of the ``alpha`` in F_{q^n} whose hyperplane
    ``{x : Tr(alpha x) = 0}`` corresponds, in normal-basis coordinates of
    ``x``, to ``{b : inner(b, a) = 0}``: ``Tr(alpha gamma_i) = a_i``."""
    L = _field_for(q, n)
    nb = normal_element(L)
    dual = dual_basis(L, list(nb.conjugates))
    alpha = 0
    for ai, d in zip(a, dual):
        alpha = L.add(alpha, L.scale(int(ai), d.code))
    return list(nb.to_coords(alpha))


def valpha_covering_check(q: int, n: int, alpha, budget: int = TUPLE_BUDGET) -> VAlphaReport:
    """Is ``V_alpha = {x : Tr(alpha x) = 0}`` covering under Frobenius?

    ``alpha`` is given by normal-basis coordinates, so its conjugates are the
    cyclic shifts of that vector.
    """
    from .orbits import shift as vshift

    F = base_field(q)
    if not any(int(c) % q for c in alpha):
        raise ZeroAlpha("alpha must be nonzero")
    if len(alpha) != n:
        raise BadParameters("alpha needs n coordinates")
    conj = [list(vshift([int(c) % q for c in alpha], i)) for i in range(n)]
    t = linalg.rank(conj, F)
    if t == n:
        return VAlphaReport(t, False, [], [1] * n, False)
    basis = conj[:t]
    rows = []
    for i in range(t, n):
        k = linalg.coordinates(basis, conj[i], F)
        assert k is not None, "first t conjugates must span"
        rows.append(k)
    # shortcut: every nonzero vector of the span is a multiple of a conjugate;
    # it needs a nonzero k with sum k_j x_j = 0, so t >= 2
    pts = {tuple(linalg.vec_scale(c, v, F)) for v in conj for c in range(1, q)}
    shortcut = t >= 2 and len(pts) == q**t - 1
    if shortcut:
        return VAlphaReport(t, True, rows, None, True)
    A = np.array(rows, dtype=np.int64).reshape(-1, t)
    ok, bad, _, _ = tuple_scan(A, F, budget)
    return VAlphaReport(t, ok, rows, bad, False)


# ---------------------------------------------------------------------------
# rechecking named results
# ---------------------------------------------------------------------------


def _recheck_component(tb: TheoremBound) -> bool:
    q, n = tb.q, tb.n
    e, n1 = split_p_part(n, base_field(q).p)
    if tb.parameters.get("n_prime") != n1:
        return False
    fac = factor_xn_minus_1(q, n1)
    if not fac.verify() or not all(is_irreducible(f.poly) for f in fac.factors):
        return False
    claimed = tb.parameters.get("components", [])
    if [c["factor"] for c in claimed] != [list(f.poly.coeffs) for f in fac.factors]:
        return False
    F = base_field(q)
    any_admits = False
    for c, f in zip(claimed, fac.factors):
        d = f.degree
        A = np.array([power_coeffs(f.poly, i) for i in range(d, n1 + 1)], dtype=np.int64).reshape(-1, d)
        if c["admits"]:
            ok, _, _, _ = tuple_scan(A, F)
            if not ok:
                return False
            any_admits = True
        else:
            x = np.array(c["witness"], dtype=np.int64)
            if len(x) != d or not x.all() or (linalg.np_matmul(x[None, :], A.T, F) == 0).any():
                return False
    if any_admits:
        return tb.lo == 1 and tb.hi == floor_log(q, n)
    return tb.lo == tb.hi == 0


def _recheck_known(tb: TheoremBound) -> bool:
    if tb.theorem == "known:superadditive":
        (pa, pb) = tb.premises
        return pa[1] * pb[1] == tb.n and tb.lo == pa[2] + pb[2]
    if tb.theorem == "known:p_power_strip":
        (prem,) = tb.premises
        e, n1 = split_p_part(tb.n, base_field(tb.q).p)
        if prem[1] != n1:
            return False
        return (prem[3] == 0 and tb.hi == 0) or (prem[2] >= 1 and tb.lo == 1)
    for tid, lo, hi, _, params in _known_clauses(tb.q, tb.n):
        if tid == tb.theorem:
            want_lo = lo if lo is not None else 0
            want_hi = hi if hi is not None else floor_log(tb.q, tb.n)
            return (tb.lo, tb.hi) == (want_lo, want_hi)
    return False


def _recheck_primitive(tb: TheoremBound) -> bool:
    ell, t = tb.parameters["ell"], tb.parameters["t"]
    try:
        app = primitive_root_family(tb.q, ell, t)
    except CriteriaError:
        return False
    return app.applicable and any(_cert_key(c) == _cert_key(tb) for c in app.certificates)


def _recheck_ord(tb: TheoremBound) -> bool:
    ob = ord_lower_bound(tb.q, tb.n)
    return any(_cert_key(c) == _cert_key(tb) for c in ob.certificates)


def _recheck_transfer(tb: TheoremBound) -> bool:
    n0 = tb.parameters["base_n"]
    return tb.q % 2 == 1 and n0 % 2 == 1 and tb.n == 2 * n0 and tb.premises == [[tb.q, n0, 0, 0]] and tb.lo == tb.hi == 0


def _recheck_qm(tb: TheoremBound) -> bool:
    q0, m = tb.parameters["base_q"], tb.parameters["m"]
    return q0**m == tb.q and tb.premises == [[q0, m * tb.n, 0, m - 1]] and tb.lo == tb.hi == 0


def _recheck_residue(tb: TheoremBound) -> bool:
    p = tb.parameters
    return bool(residue_system_check(tb.q, p["t"], p["N"], tb.n)) and tb.lo == 1


def _recheck_log(tb: TheoremBound) -> bool:
    return tb.lo == 0 and tb.hi == floor_log(tb.q, tb.n)


_RECHECKERS: dict[str, Callable[[TheoremBound], bool]] = {
    "component_criterion": _recheck_component,
    "primitive_root_prime_power": _recheck_primitive,
    "primitive_root_twice_prime_power": _recheck_primitive,
    "subfield_lower_bound": _recheck_ord,
    "quadratic_order_exact": _recheck_ord,
    "odd_length_doubling": _recheck_transfer,
    "extension_field_reduction": _recheck_qm,
    "complete_residue_system": _recheck_residue,
    "log_upper_bound": _recheck_log,
}


def recheck_theorem(tb: TheoremBound) -> bool:
    if tb.theorem.startswith("known:"):
        return _recheck_known(tb)
    fn = _RECHECKERS.get(tb.theorem)
    return fn is not None and fn(tb)


def recheck_result(obj: dict, fast: bool = False) -> tuple[bool, list[str]]:
    """Recheck every certificate of a serialized result and that the chain
    supports the claimed bounds and every premise."""
    from .certificates import from_json

    msgs = []
    certs = [from_json(c) for c in obj.get("certificates", [])]
    ok = True
    for c in certs:
        good = c.recheck(fast=fast)
        msgs.append(f"{c.kind} ({getattr(c, 'theorem', getattr(c, 'method', ''))}) q={c.q} n={c.n}: {'pass' if good else 'FAIL'}")
        ok &= good
    bounds = [b for b in (cert_bounds(c) for c in certs) if b is not None]

    def supported(q, n, lo, hi) -> bool:
        have_lo = max([b[2] for b in bounds if b[:2] == (q, n)], default=0)
        have_hi = min([b[3] for b in bounds if b[:2] == (q, n)], default=floor_log(q, n))
        return have_lo >= lo and have_hi <= hi

    for c in certs:
        for prem in getattr(c, "premises", []) or []:
            if not supported(*prem):
                msgs.append(f"unsupported premise h_{prem[0]}({prem[1]}) in [{prem[2]}, {prem[3]}]")
                ok = False
    if not supported(obj["q"], obj["n"], obj["lo"], obj["hi"]):
        msgs.append("claimed bounds are not supported by the certificates")
        ok = False
    return ok, msgs


# ---------------------------------------------------------------------------
# resolver
# ---------------------------------------------------------------------------

ZERO_PRIORITY = [
    "extension_field_reduction",
    "odd_length_doubling",
    "primitive_root_prime_power",
    "primitive_root_twice_prime_power",
    "p_power_strip",
    "quadratic_order_exact",
    "component_criterion",
    "log_upper_bound",
    "hq_bruteforce",
]

_LABELS = {
    "extension_field_reduction": "qm_reduction",
    "odd_length_doubling": "transfer_2n",
    "primitive_root_prime_power": "primitive root",
    "primitive_root_twice_prime_power": "primitive root",
    "p_power_strip": "p-power reduction",
    "quadratic_order_exact": "ord exact (m = 2)",
    "subfield_lower_bound": "ord lower bound",
    "complete_residue_system": "complete residue system",
    "component_criterion": "component criterion",
    "log_upper_bound": "log bound",
    "codim1_witness": "codim-1 witness",
    "codim2_witness": "codim-2 witness",
    "codim2_exhaustion": "codim-2 exhaustion",
    "hq_bruteforce": "brute force",
}


def _label(rule: str) -> str:
    base = rule.split(":", 1)[0] if not rule.startswith("known:") else rule
    if base.startswith("known:"):
        return "known value (" + base[6:] + ")"
    return _LABELS.get(base, base)


def hq_resolve(
    q: int,
    n: int,
    budget: int = DEFAULT_BUDGET,
    store: ResultStore | None = None,
    search: bool = True,
    threads: int | None = None,
    progress: bool = False,
    bruteforce_limit: int = 1 << 12,
    pools: str = "all",
) -> HqResult:
    """Combine every applicable criterion, search and known value into the
    tightest certified result for ``h_q(n)``."""
    if prime_power(q) is None:
        raise BadParameters(f"{q} is not a prime power")
    if n < 1:
        raise BadParameters("n must be positive")
    store = store if store is not None else ResultStore()
    if (q, n) in store:
        return store[(q, n)]
    p, s = prime_power(q)
    res = HqResult(q, n, 0, floor_log(q, n), [TheoremBound.log_upper_bound(q, n)], ["log_upper_bound"])
    res.hi_rule = "log_upper_bound"
    zero_rules: list[tuple[str, str]] = []  # (rule, detail) that establish h = 0
    if res.hi == 0:
        zero_rules.append(("log_upper_bound", ""))

    # extension-field reduction from a smaller base field
    for m in sorted(d for d in divisors(s) if d > 1):
        q0 = p ** (s // m)
        try:
            hq_resolve(q0, m * n, budget, store, search, threads, progress, bruteforce_limit, pools)
        except BudgetExceeded:
            continue
        app = qm_reduction(q0, m, n, store)
        res.notes.append(f"qm_reduction(q={q0}, m={m}): {app.reason}; tau3 bound {app.data.get('tau3_upper_bound')}")
        if app.applicable:
            res.tighten(None, 0, "extension_field_reduction", app.certificates, app.reason)
            zero_rules.append(("extension_field_reduction", app.reason))

    # doubling of odd lengths
    if q % 2 == 1 and n % 2 == 0 and (n // 2) % 2 == 1:
        hq_resolve(q, n // 2, budget, store, search, threads, progress, bruteforce_limit, pools)
        app = transfer_2n(q, n // 2, store)
        if app.applicable:
            res.tighten(None, 0, "odd_length_doubling", app.certificates, app.reason)
            zero_rules.append(("odd_length_doubling", app.reason))

    # primitive roots modulo prime powers
    core = n // 2 if n % 2 == 0 and q % 2 == 1 else n
    from sympy import factorint

    fz = factorint(core)
    if len(fz) == 1:
        ((ell, t),) = fz.items()
        if ell > 2 and gcd(q, ell) == 1:
            app = primitive_root_family(q, int(ell), int(t))
            for c in app.certificates:
                if c.n == n:
                    res.tighten(None, 0, c.theorem, [c])
                    zero_rules.append((c.theorem, ""))
            if not app.applicable:
                res.notes.append(f"primitive_root_family({q}, {ell}, {t}): {app.reason}")

    # p-power part
    e, n1 = split_p_part(n, p)
    if e:
        sub = hq_resolve(q, n1, budget, store, search, threads, progress, bruteforce_limit, pools)
        if sub.hi == 0:
            tb = TheoremBound("known:p_power_strip", q, n, 0, 0, {"n_prime": n1}, "h_q(n p^k) = 0 iff h_q(n) = 0", premises=[[q, n1, 0, 0]])
            res.tighten(None, 0, "p_power_strip", [tb, *sub.certificates], f"from h_{q}({n1})=0")
            zero_rules.append(("p_power_strip", f"from h_{q}({n1})=0"))
        elif sub.lo >= 1:
            tb = TheoremBound("known:p_power_strip", q, n, 1, res.hi, {"n_prime": n1}, "h_q(n p^k) = 0 iff h_q(n) = 0", premises=[[q, n1, 1, sub.hi]])
            res.tighten(1, None, "p_power_strip", [tb, *sub.certificates], f"from h_{q}({n1})>=1")

    # the component criterion decides h = 0 outright
    try:
        zd = hq_zero_decision(q, n)
        res.tighten(zd.lo, zd.hi, "component_criterion", zd.certificates)
        if zd.hi == 0:
            zero_rules.append(("component_criterion", ""))
    except BudgetExceeded as exc:
        res.notes.append(f"component criterion skipped: {exc}")

    # order / residue bounds
    if gcd(q, n) == 1 and n > 1:
        ob = ord_lower_bound(q, n)
        for c in ob.certificates:
            res.tighten(c.lo, c.hi, c.theorem, [c], f"m={ob.m}, N={ob.N}")
            if c.hi == 0:
                zero_rules.append((c.theorem, ""))
        if ob.N == q - 1 and q > 2:
            rc = residue_system_check(q, ob.m, ob.N, n)
            res.notes.append(f"residue system: {'complete' if rc.complete else 'not complete'}; {rc.note}")
            if rc.complete:
                tb = TheoremBound(
                    "complete_residue_system", q, n, 1, floor_log(q, n), {"t": ob.m, "N": ob.N},
                    "complete residue system => a covering hyperplane exists",
                )
                res.tighten(1, None, "complete_residue_system", [tb])

    # literature values
    orc = known_value_oracle(q, n)
    for c in orc.certificates:
        if isinstance(c, TheoremBound) and c.theorem != "log_upper_bound" and c.n == n and c.q == q:
            res.tighten(c.lo, c.hi, c.theorem, [x for x in orc.certificates])
            if c.hi == 0:
                zero_rules.append((c.theorem, ""))

    # explicit searches
    if search and q**n <= budget and res.hi >= 1:
        from .search import codim1_search

        if not any(isinstance(c, CoveringWitness) and c.n == n and c.q == q for c in res.certificates):
            w = codim1_search(q, n, budget=budget, threads=threads)
            if w is not None:
                res.tighten(1, None, "codim1_witness", [w])
            elif res.lo == 0:
                ex = ExhaustiveNonExistence(q, n, 1, "codim1_exhaustive", {}, {"result": "none"}, [])
                res.tighten(None, 0, "codim1_exhaustion", [ex])
        if res.hi >= 2 and res.lo <= 2:
            r2 = _codim2(q, n, pools, threads, budget, progress, res)
            if isinstance(r2, CoveringWitness):
                res.tighten(2, None, "codim2_witness", [r2])
            else:
                res.tighten(None, 1, "codim2_exhaustion", [r2])
        if res.lo < res.hi and q**n <= bruteforce_limit:
            from .cover import hq_bruteforce

            bf = hq_bruteforce(q, n, budget=max(bruteforce_limit, q**n), threads=threads)
            res.tighten(bf.lo, bf.hi, "hq_bruteforce", bf.certificates)
            if bf.hi == 0:
                zero_rules.append(("hq_bruteforce", ""))

    if search and res.lo < res.hi and q**n > budget:
        res.budget_limited = True
        res.notes.append(f"explicit search skipped: q^n = {q**n} exceeds the vector budget {budget}")
    res.headline = _headline(res, zero_rules)
    store[(q, n)] = res
    return res


def _codim2(q, n, pools, threads, budget, progress, res):
    """Codim-2 search.  Component pools only settle non-existence when every
    covering dual lies in a single component; otherwise fall back to all
    covering duals."""
    from .search import codim2_nonexistence, covering_dual_codes

    r2 = codim2_nonexistence(q, n, pools=pools, threads=threads, budget=budget, progress=progress)
    if pools != "components" or isinstance(r2, CoveringWitness):
        return r2
    from .orbits import orbit_representatives

    F = base_field(q)
    reps = orbit_representatives(q, n, budget=budget)
    allc, _ = covering_dual_codes(q, n, reps, F, threads or 1)
    pure = sum(r2.counts["covering_in_pool"].values())
    if len(allc) == pure:
        res.notes.append(f"component pools complete: all {pure} covering duals are pure")
        return r2
    res.notes.append(f"component pools incomplete: {len(allc) - pure} mixed covering duals; rerun with all pools")
    return codim2_nonexistence(q, n, pools="all", threads=threads, budget=budget, progress=progress)


def _headline(res: HqResult, zero_rules: list[tuple[str, str]]) -> str:
    if res.hi == 0 and zero_rules:
        ranked = sorted(zero_rules, key=lambda r: ZERO_PRIORITY.index(r[0]) if r[0] in ZERO_PRIORITY else len(ZERO_PRIORITY))
        rule, detail = ranked[0]
        return _label(rule) + (f" {detail}" if detail else "")
    if res.hi == 0:
        return _label(res.hi_rule)
    lo = _label(res.lo_rule) if res.lo_rule else "trivial"
    wit = [c for c in res.certificates if isinstance(c, CoveringWitness) and (c.q, c.n) == (res.q, res.n)]
    if wit and max(c.codim for c in wit) == res.lo:
        lo = f"codim-{res.lo} witness"
    hi = _label(res.hi_rule) if res.hi_rule else "log bound"
    if lo == hi:
        return lo
    return f"lower: {lo}; upper: {hi}"


def hq_table(q: int, lo: int, hi: int, **kw) -> list[HqResult]:
    store = kw.pop("store", None) or ResultStore()
    return [hq_resolve(q, n, store=store, **kw) for n in range(lo, hi + 1)]
