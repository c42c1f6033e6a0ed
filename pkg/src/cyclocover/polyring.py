"""Polynomials over F_q and the factorisation of x^n - 1.

The factor attached to the cyclotomic coset of ``s`` is the minimal polynomial
of ``omega**s``, where ``omega`` is a root of a fixed irreducible factor of
the n'-th cyclotomic polynomial: the one whose ascending coefficient tuple is
smallest.  Factors are listed by the minimum of their coset.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

from sympy import Poly as _SymPoly
from sympy import cyclotomic_poly, symbols

from .gf import FieldCtx, base_field, field_make
from .ntheory import divisors, multiplicative_order, split_p_part


class PolyError(ValueError):
    pass


class NonCoprime(PolyError):
    pass


class ReduciblePolynomial(PolyError):
    pass


class LengthMismatch(PolyError):
    pass


def _trim(cs: list[int]) -> tuple[int, ...]:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Poly:
    """Dense polynomial over ``ctx`` with ascending coefficient codes."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(list(self.coeffs)))

    @classmethod
    def x_pow(cls, ctx: FieldCtx, e: int, c: int = 1) -> "Poly":
        return cls(ctx, (0,) * e + (c,))

    @classmethod
    def from_ints(cls, ctx: FieldCtx, ints: Sequence[int]) -> "Poly":
        """Prime-field integers (possibly negative) as coefficients."""
        return cls(ctx, tuple(ctx.embed_prime(c) for c in ints))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def padded(self, length: int) -> list[int]:
        if len(self.coeffs) > length:
            raise LengthMismatch(f"degree {self.degree} does not fit in {length} slots")
        return list(self.coeffs) + [0] * (length - len(self.coeffs))

    # -- ring operations ----------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        F = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __neg__(self) -> "Poly":
        return Poly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly | int") -> "Poly":
        F = self.ctx
        if isinstance(other, int):
            return Poly(F, [F.mul(other, c) for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly(F, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        F = self.ctx
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.degree
        inv_lead = F.inv(other.lead)
        if len(r) <= d:
            return Poly(F, ()), self
        quo = [0] * (len(r) - d)
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i]
            if c:
                f = F.mul(c, inv_lead)
                quo[i - d] = f
                nf = F.neg(f)
                for j, b in enumerate(other.coeffs):
                    if b:
                        r[i - d + j] = F.add(r[i - d + j], F.mul(nf, b))
        return Poly(F, quo), Poly(F, r[:d])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero() or self.lead == 1:
            return self
        return self * self.ctx.inv(self.lead)

    def powmod(self, e: int, m: "Poly") -> "Poly":
        result = Poly(self.ctx, (1,))
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def compose_mod(self, g: "Poly", m: "Poly") -> "Poly":
        """``self(g(x)) mod m`` by Horner's rule."""
        acc = Poly(self.ctx, ())
        for c in reversed(self.coeffs):
            acc = (acc * g + Poly(self.ctx, (c,))) % m
        return acc

    def derivative(self) -> "Poly":
        F = self.ctx
        return Poly(F, [F.scale(i, c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int, L: FieldCtx | None = None) -> int:
        """Evaluate at the code ``x`` of ``L`` (default: the coefficient field).

        Coefficients must be prime-field elements when ``L`` differs from
        ``ctx``.
        """
        L = L or self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = L.add(L.mul(acc, x), c if L is self.ctx else L.embed_prime(c))
        return acc

    # -- display ------------------------------------------------------------
    def _coeff_str(self, c: int, signed: bool) -> tuple[str, str]:
        F = self.ctx
        if F.k > 1:
            return "+", str(c)
        if signed and c > F.p // 2:
            return "-", str(F.p - c)
        return "+", str(c)

    def pretty(self, signed: bool = False) -> str:
        """Descending-power display, e.g. ``x^5 + x^4 - x^3 + x^2 - 1``."""
        if self.is_zero():
            return "0"
        terms = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if not c:
                continue
            sign, mag = self._coeff_str(c, signed)
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if mono and mag == "1":
                body = mono
            elif mono:
                body = f"{mag}*{mono}" if self.ctx.k > 1 else f"{mag}{mono}"  # codes need the '*'
            else:
                body = mag
            terms.append((sign, body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def to_text(self) -> str:
        """Ascending text form ``c0 + c1*x + ... (mod p)``."""
        parts = []
        for e, c in enumerate(self.coeffs):
            mono = "" if e == 0 else ("*x" if e == 1 else f"*x^{e}")
            parts.append(f"{c}{mono}")
        body = " + ".join(parts) if parts else "0"
        if self.ctx.k == 1:
            return f"{body} (mod {self.ctx.p})"
        return f"{body} (over F_{self.ctx.q})"

    def __str__(self) -> str:
        return self.pretty()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """``(g, s, t)`` with ``s*a + t*b == g`` monic."""
    F = a.ctx
    r0, r1 = a, b
    s0, s1 = Poly(F, (1,)), Poly(F, ())
    t0, t1 = Poly(F, ()), Poly(F, (1,))
    while not r1.is_zero():
        qt, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    inv = F.inv(r0.lead)
    return r0 * inv, s0 * inv, t0 * inv


def poly_sort_key(f: Poly) -> tuple:
    return (f.degree, f.coeffs)


@lru_cache(maxsize=None)
def is_irreducible(f: Poly) -> bool:
    """Rabin's test over F_q."""
    d = f.degree
    if d <= 0:
        return False
    if d == 1:
        return True
    F = f.ctx
    f = f.monic()
    x = Poly.x_pow(F, 1)
    # x^(q^d) == x mod f
    xp = x
    powers = {0: x}
    for i in range(1, d + 1):
        xp = xp.powmod(F.q, f)
        powers[i] = xp
    if (powers[d] - x) % f != Poly(F, ()):
        return False
    for r in {int(r) for r in _prime_factors(d)}:
        g = poly_gcd(f, powers[d // r] - x)
        if g.degree != 0:
            return False
    return True


def _prime_factors(d: int) -> list[int]:
    from sympy import primefactors

    return primefactors(d)


# ---------------------------------------------------------------------------
# cyclotomic cosets and x^n - 1
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic_cosets(q: int, n: int) -> tuple[tuple[int, ...], ...]:
    """q-cyclotomic cosets of Z_n, each sorted, ordered by their minimum."""
    from math import gcd

    if gcd(q, n) != 1:
        raise NonCoprime(f"gcd({q}, {n}) != 1")
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        coset = []
        t = s
        while not seen[t]:
            seen[t] = True
            coset.append(t)
            t = (t * q) % n
        out.append(tuple(sorted(coset)))
    return tuple(out)


def _cyclotomic(F: FieldCtx, d: int) -> Poly:
    x = symbols("x")
    ints = [int(c) for c in _SymPoly(cyclotomic_poly(d, x), x).all_coeffs()][::-1]
    return Poly.from_ints(F, ints)


def _random_poly(F: FieldCtx, deg: int, rng: random.Random) -> Poly:
    return Poly(F, [rng.randrange(F.q) for _ in range(deg)])


def equal_degree_factor(f: Poly, r: int, rng: random.Random) -> list[Poly]:
    """Split a squarefree monic ``f`` whose irreducible factors all have
    degree ``r`` (Cantor-Zassenhaus)."""
    F = f.ctx
    if f.degree == r:
        return [f]
    if f.degree < r or f.degree % r:
        raise PolyError("degree is not a multiple of the factor degree")
    while True:
        a = _random_poly(F, f.degree, rng)
        if a.degree < 1:
            continue
        if F.p == 2:
            # absolute trace of a from F_{q^r} down to F_2
            t = a % f
            acc = t
            for _ in range(F.k * r - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.powmod((F.q**r - 1) // 2, f) - Poly(F, (1,))
        g = poly_gcd(f, b)
        if 0 < g.degree < f.degree:
            return equal_degree_factor(g, r, rng) + equal_degree_factor(f // g, r, rng)


@dataclass(frozen=True)
class Factor:
    poly: Poly
    multiplicity: int
    coset: tuple[int, ...]

    @property
    def degree(self) -> int:
        return self.poly.degree

    @cached_property
    def power(self) -> Poly:
        out = Poly(self.poly.ctx, (1,))
        for _ in range(self.multiplicity):
            out = out * self.poly
        return out


@dataclass(frozen=True)
class Factorization:
    q: int
    n: int
    p_power: int  # p^e with n = p^e * n_prime
    n_prime: int
    factors: tuple[Factor, ...]
    ctx: FieldCtx = field(repr=False)

    def product(self) -> Poly:
        out = Poly(self.ctx, (1,))
        for f in self.factors:
            out = out * f.power
        return out

    def verify(self) -> bool:
        target = Poly.x_pow(self.ctx, self.n) - Poly(self.ctx, (1,))
        ok = self.product() == target
        ok &= all(f.degree == len(f.coset) for f in self.factors)
        ok &= sum(f.degree * f.multiplicity for f in self.factors) == self.n
        return ok

    def index_of(self, f: Poly) -> int:
        for i, fac in enumerate(self.factors):
            if fac.poly == f.monic():
                return i
        raise ValueError("not a factor")

    @cached_property
    def _crt_data(self) -> list[Poly]:
        """Idempotent lifts: ``e_i = 1 mod F_i`` and ``0 mod F_j`` (j != i)."""
        F = self.ctx
        modulus = Poly.x_pow(F, self.n) - Poly(F, (1,))
        out = []
        for fac in self.factors:
            Fi = fac.power
            Mi = modulus // Fi
            g, s, _ = poly_xgcd(Mi % Fi, Fi)
            assert g.degree == 0
            out.append((s * Mi) % modulus)
        return out


def factor_xn_minus_1(q: int, n: int) -> Factorization:
    return _factor_cached(q, n)


@lru_cache(maxsize=None)
def _factor_cached(q: int, n: int) -> Factorization:
    if n < 1:
        raise PolyError("n must be positive")
    F = base_field(q)
    e, n1 = split_p_part(n, F.p)
    rng = random.Random(0x5EED ^ (q * 1000003 + n1))
    pieces: dict[int, list[Poly]] = {}
    for d in divisors(n1):
        phi_d = _cyclotomic(F, d)
        r = multiplicative_order(q, d)
        pieces[d] = sorted(equal_degree_factor(phi_d, r, rng), key=lambda f: f.coeffs)
    anchor = pieces[n1][0]  # omega is a root of this factor
    all_factors = [f for d in divisors(n1) for f in pieces[d]]
    factors = []
    xm = Poly.x_pow(F, 1)
    for coset in cyclotomic_cosets(q, n1):
        s = coset[0]
        xs = xm.powmod(s, anchor) if anchor.degree > 0 else xm
        match = [g for g in all_factors if g.degree == len(coset) and g.compose_mod(xs, anchor).is_zero()]
        if len(match) != 1:
            raise AssertionError(f"coset {coset} matched {len(match)} factors")
        factors.append(Factor(match[0], F.p**e, coset))
    return Factorization(q, n, F.p**e, n1, tuple(factors), F)


# ---------------------------------------------------------------------------
# minimal polynomials, power rows, CRT
# ---------------------------------------------------------------------------


def subfield_embedding(L: FieldCtx, K: FieldCtx) -> dict[int, int]:
    """Map from codes of ``K`` to codes of ``L`` (``K.k`` must divide ``L.k``),
    sending the generator class ``x`` of K to the smallest-code root of
    K's modulus in L."""
    if K.p != L.p or L.k % K.k:
        raise PolyError("K is not a subfield of L")
    if K.k == 1:
        return {c: c for c in range(K.q)}
    mod = Poly.from_ints(L, K.modulus)
    root = next(r for r in range(L.q) if mod(r, L) == 0)
    out = {}
    for code in range(K.q):
        acc, pw = 0, 1
        for c in K.coeffs(code):
            acc = L.add(acc, L.scale(c, pw))
            pw = L.mul(pw, root)
        out[code] = acc
    return out


def minimal_poly(L: FieldCtx, omega: int, base: FieldCtx | int | None = None) -> Poly:
    """Minimal polynomial of ``omega`` (a code of ``L``) over the subfield
    ``base`` (default: the prime field), returned over ``base``."""
    if base is None:
        base = field_make(L.p, 1)
    elif isinstance(base, int):
        base = base_field(base)
    s = base.k
    conj = [omega]
    x = L.frobenius(omega, s)
    while x != omega:
        conj.append(x)
        x = L.frobenius(x, s)
    prod = Poly(L, (1,))
    for c in conj:
        prod = prod * Poly(L, (L.neg(c), 1))
    back = {v: k for k, v in subfield_embedding(L, base).items()}
    try:
        return Poly(base, [back[c] for c in prod.coeffs])
    except KeyError as exc:  # pragma: no cover - Galois theory guarantees this
        raise AssertionError("minimal polynomial left the base field") from exc


def power_coeffs(f: Poly, i: int) -> list[int]:
    """Coefficients of ``x^i mod f`` in the basis ``1, x, ..., x^(d-1)``."""
    if not is_irreducible(f):
        raise ReduciblePolynomial(f"{f.pretty()} is reducible")
    return Poly.x_pow(f.ctx, 1).powmod(i, f.monic()).padded(f.degree)


def crt_split(v: Sequence[int], fac: Factorization) -> list[Poly]:
    """Residues of ``v(x) = sum v_i x^i`` modulo each factor power."""
    if len(v) != fac.n:
        raise LengthMismatch(f"vector of length {len(v)} for n={fac.n}")
    g = Poly(fac.ctx, list(v))
    return [g % f.power for f in fac.factors]


def crt_lift(residues: Sequence[Poly], fac: Factorization) -> list[int]:
    """Inverse of :func:`crt_split`."""
    if len(residues) != len(fac.factors):
        raise LengthMismatch("one residue per factor required")
    F = fac.ctx
    modulus = Poly.x_pow(F, fac.n) - Poly(F, (1,))
    acc = Poly(F, ())
    for r, e in zip(residues, fac._crt_data):
        acc = acc + r * e
    return (acc % modulus).padded(fac.n)
