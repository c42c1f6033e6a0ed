"""Arithmetic in F_p and F_{p^k}.

Elements are integer codes: the element ``c0 + c1*x + ... + c_{k-1}*x^{k-1}``
(power basis of the modulus) is stored as ``c0 + c1*p + ... + c_{k-1}*p^{k-1}``.
For ``k == 1`` the code is just the residue.  "Lex-smallest" throughout means
smallest code, i.e. the highest-degree coefficient is compared first.

:class:`FieldCtx` does all arithmetic on codes; :class:`FieldElem` wraps a
code together with its context for operator syntax and context checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from .ntheory import isprime, prime_power

TABLE_LIMIT = 1 << 20  # log/antilog tables below this size
FIELD_LIMIT = 1 << 32  # largest field field_make will build
SMALL_TABLE_LIMIT = 1 << 12  # full q x q numpy tables for vectorised work


class FieldError(ValueError):
    pass


class NonPrimeCharacteristic(FieldError):
    pass


class TableBudgetExceeded(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class MixedContexts(FieldError):
    pass


class NonDivisorSubfield(FieldError):
    pass


class ZeroArgument(FieldError):
    pass


class DependentBasis(FieldError):
    pass


# ---------------------------------------------------------------------------
# raw polynomial helpers over F_p (coefficient lists, ascending)
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo monic ``m`` over F_p."""
    r = [x % p for x in a]
    dm = len(m) - 1
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            off = i - dm
            for j in range(dm + 1):
                r[off + j] = (r[off + j] - c * m[j]) % p
    return _trim(r[:dm] if len(r) > dm else r)


def _is_irreducible_trial(m: Sequence[int], p: int) -> bool:
    """Irreducibility of monic ``m`` by trial division by every monic polynomial
    of degree 1..deg(m)//2."""
    k = len(m) - 1
    if k <= 1:
        return True
    if m[0] % p == 0:
        return False
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _pmod(m, list(low) + [1], p):
                return False
    return True


def _candidate_moduli(p: int, k: int) -> Iterable[list[int]]:
    """Monic degree-k polynomials in increasing code order."""
    for code in range(p**k):
        coeffs = []
        for _ in range(k):
            code, c = divmod(code, p)
            coeffs.append(c)
        yield coeffs + [1]


# ---------------------------------------------------------------------------
# field context
# ---------------------------------------------------------------------------


class FieldCtx:
    """The field F_{p^k}; immutable after construction.

    Build instances with :func:`field_make` so that the modulus and the
    generator are the canonical (smallest-code) choices.
    """

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus)
        self._pow_p = [p**i for i in range(k + 1)]
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self.gen = self._find_generator()
        if self.q <= TABLE_LIMIT and k > 1:
            self._build_tables()
        self._np_tables = None

    # -- identity -----------------------------------------------------------
    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    @property
    def generator(self) -> "FieldElem":
        return FieldElem(self, self.gen)

    def __call__(self, value: int | Sequence[int]) -> "FieldElem":
        """``F(3)`` wraps a code, ``F([c0, c1])`` builds from coefficients."""
        if isinstance(value, (int, np.integer)):
            return FieldElem(self, int(value) % self.q if self.k == 1 else int(value))
        return FieldElem(self, self.from_coeffs(value))

    def elements(self) -> range:
        return range(self.q)

    # -- coefficient views --------------------------------------------------
    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, cs: Sequence[int]) -> int:
        if len(cs) > self.k:
            cs = _pmod(cs, self.modulus, self.p)
        return sum((int(c) % self.p) * self._pow_p[i] for i, c in enumerate(cs))

    def embed_prime(self, c: int) -> int:
        """Code of the prime-field element ``c``."""
        return c % self.p

    # -- arithmetic on codes ------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out, mul, p = 0, 1, self.p
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * mul
            mul *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        out, mul, p = 0, 1, self.p
        while a:
            a, x = divmod(a, p)
            out += ((-x) % p) * mul
            mul *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, c: int, a: int) -> int:
        """Multiply ``a`` by the prime-field scalar ``c``."""
        c %= self.p
        if self.k == 1:
            return (c * a) % self.p
        return self.from_coeffs([c * x for x in self.coeffs(a)])

    def _mul_raw(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    if y:
                        prod[i + j] += x * y
        return self.from_coeffs(_pmod(prod, self.modulus, self.p))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_raw(a, b)

    def _pow_raw(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_raw(result, base)
            base = self._mul_raw(base, base)
            e >>= 1
        return result

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.p)
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._pow_raw(a, e % (self.q - 1))

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self._log is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self._pow_raw(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, times: int = 1) -> int:
        """``a ** (p ** times)``; ``frobenius(a, k) == a``."""
        times %= self.k
        if times == 0 or a == 0:
            return a
        return self.pow(a, self.p**times)

    def trace(self, a: int, sub_degree: int = 1) -> int:
        """Trace from F_{p^k} down to F_{p^sub_degree}."""
        if sub_degree < 1 or self.k % sub_degree:
            raise NonDivisorSubfield(f"{sub_degree} does not divide {self.k}")
        acc, x = 0, a
        for _ in range(self.k // sub_degree):
            acc = self.add(acc, x)
            x = self.frobenius(x, sub_degree)
        return acc

    def in_subfield(self, a: int, sub_degree: int) -> bool:
        return self.frobenius(a, sub_degree) == a

    # -- multiplicative structure -------------------------------------------
    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        n = self.q - 1
        primes = list(factorint(n))
        pw = (lambda a, e: pow(a, e, self.p)) if self.k == 1 else self._pow_raw
        for g in range(2 if self.k == 1 else 1, self.q):
            if all(pw(g, n // r) != 1 for r in primes):
                return g
        raise AssertionError("multiplicative group has no generator")

    def _build_tables(self) -> None:
        n = self.q - 1
        exp = [0] * n
        log = [0] * self.q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._mul_raw(x, self.gen)
        self._exp, self._log = exp, log

    def dlog(self, a: int) -> int:
        """Discrete log to base ``gen``, in ``[0, q-1)``."""
        if a == 0:
            raise ZeroArgument("dlog of zero")
        if self._log is not None:
            return self._log[a]
        if self.k == 1 and self.q <= TABLE_LIMIT:
            x = 1
            for i in range(self.q - 1):
                if x == a:
                    return i
                x = (x * self.gen) % self.p
        return _bsgs(self, a)

    def antilog(self, e: int) -> int:
        if self._exp is not None:
            return self._exp[e % (self.q - 1)]
        return self.pow(self.gen, e % (self.q - 1)) if self.q > 2 else 1

    def order(self, a: int) -> int:
        if a == 0:
            raise ZeroArgument("order of zero")
        n = self.q - 1
        for r, e in factorint(n).items():
            for _ in range(e):
                if self.pow(a, n // r) == 1:
                    n //= r
                else:
                    break
        return n

    # -- numpy tables for vectorised arithmetic ------------------------------
    def np_tables(self) -> "NpTables":
        if self._np_tables is None:
            if self.q > SMALL_TABLE_LIMIT:
                raise TableBudgetExceeded(f"q={self.q} too large for dense tables")
            q = self.q
            add = np.array([[self.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            mul = np.array([[self.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            neg = np.array([self.neg(a) for a in range(q)], dtype=np.int64)
            inv = np.array([0] + [self.inv(a) for a in range(1, q)], dtype=np.int64)
            self._np_tables = NpTables(add, mul, neg, inv)
        return self._np_tables


@dataclass(frozen=True)
class NpTables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray


def _bsgs(F: FieldCtx, a: int) -> int:
    import math

    n = F.q - 1
    m = math.isqrt(n) + 1
    table = {}
    x = 1
    for j in range(m):
        table.setdefault(x, j)
        x = F.mul(x, F.gen)
    step = F.inv(F.pow(F.gen, m))
    y = a
    for i in range(m):
        if y in table:
            return (i * m + table[y]) % n
        y = F.mul(y, step)
    raise AssertionError("discrete log not found")


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> FieldCtx:
    """The canonical F_{p^k}: smallest-code monic irreducible modulus and
    smallest-code primitive element."""
    if not isprime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if p**k > FIELD_LIMIT:
        raise TableBudgetExceeded(f"{p}^{k} exceeds the field budget 2^32")
    if k == 1:
        return FieldCtx(p, 1, (0, 1))
    for m in _candidate_moduli(p, k):
        if _is_irreducible_trial(m, p):
            return FieldCtx(p, k, m)
    raise AssertionError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def base_field(q: int) -> FieldCtx:
    """F_q for a prime power ``q``."""
    pp = prime_power(q)
    if pp is None:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return field_make(*pp)


# ---------------------------------------------------------------------------
# element wrapper
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldElem:
    ctx: FieldCtx = field(compare=True)
    code: int

    def _other(self, other: "FieldElem | int") -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise MixedContexts(f"{self.ctx!r} vs {other.ctx!r}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.ctx.embed_prime(int(other))
        return NotImplemented

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.ctx.coeffs(self.code)

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._other(other), self.code))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.code, self._other(other)))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.code, e))

    def __bool__(self) -> bool:
        return self.code != 0

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.code))

    def frobenius(self, times: int = 1) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.frobenius(self.code, times))

    def trace(self, sub_degree: int = 1) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.trace(self.code, sub_degree))

    def dlog(self) -> int:
        return self.ctx.dlog(self.code)

    def __repr__(self) -> str:
        if self.ctx.k == 1:
            return f"{self.code} (mod {self.ctx.p})"
        return f"{list(self.coeffs)} in F_{self.ctx.p}^{self.ctx.k}"


def _code(ctx: FieldCtx, x: "FieldElem | int") -> int:
    if isinstance(x, FieldElem):
        if x.ctx != ctx:
            raise MixedContexts(f"{ctx!r} vs {x.ctx!r}")
        return x.code
    return int(x)


def arith(ctx: FieldCtx, op: str, *args) -> FieldElem:
    """Functional front end: ``arith(F, "mul", a, b)``, ``arith(F, "pow", a, 5)``."""
    if op == "pow":
        a, e = args
        return FieldElem(ctx, ctx.pow(_code(ctx, a), int(e)))
    if op == "frobenius":
        a, *rest = args
        return FieldElem(ctx, ctx.frobenius(_code(ctx, a), *(int(t) for t in rest)))
    codes = [_code(ctx, a) for a in args]
    fn = {"add": ctx.add, "sub": ctx.sub, "mul": ctx.mul, "inv": ctx.inv, "neg": ctx.neg, "div": ctx.div}
    if op not in fn:
        raise FieldError(f"unknown operation {op!r}")
    return FieldElem(ctx, fn[op](*codes))


def trace(ctx: FieldCtx, x: "FieldElem | int", sub_degree: int = 1) -> FieldElem:
    return FieldElem(ctx, ctx.trace(_code(ctx, x), sub_degree))


def dlog(ctx: FieldCtx, x: "FieldElem | int") -> int:
    return ctx.dlog(_code(ctx, x))


# ---------------------------------------------------------------------------
# bases over the prime field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalBasis:
    """Normal element ``gamma`` and the change of basis between standard
    (power-basis) coordinates and coordinates along ``gamma^(p^i)``.

    Row-vector convention: ``std = nrm @ from_normal`` and
    ``nrm = std @ to_normal`` (mod p).
    """

    ctx: FieldCtx
    gamma: int
    conjugates: tuple[int, ...]
    from_normal: tuple[tuple[int, ...], ...]
    to_normal: tuple[tuple[int, ...], ...]

    def to_coords(self, a: int) -> tuple[int, ...]:
        return _vecmat(self.ctx.coeffs(a), self.to_normal, self.ctx.p)

    def from_coords(self, coords: Sequence[int]) -> int:
        return self.ctx.from_coeffs(_vecmat(coords, self.from_normal, self.ctx.p))


def _vecmat(v: Sequence[int], M: Sequence[Sequence[int]], p: int) -> tuple[int, ...]:
    cols = len(M[0])
    return tuple(sum(v[i] * M[i][j] for i in range(len(v))) % p for j in range(cols))


@lru_cache(maxsize=None)
def normal_element(ctx: FieldCtx) -> NormalBasis:
    """Smallest-code element whose conjugates form a basis over F_p."""
    from . import linalg

    Fp = field_make(ctx.p, 1)
    for g in range(1, ctx.q):
        conj = [ctx.frobenius(g, i) for i in range(ctx.k)]
        rows = [list(ctx.coeffs(c)) for c in conj]
        if linalg.rank(rows, Fp) == ctx.k:
            inv = linalg.inverse(rows, Fp)
            return NormalBasis(
                ctx,
                g,
                tuple(conj),
                tuple(tuple(r) for r in rows),
                tuple(tuple(r) for r in inv),
            )
    raise AssertionError("no normal element found")


def dual_basis(ctx: FieldCtx, basis: Sequence["FieldElem | int"]) -> list[FieldElem]:
    """Trace-dual basis: ``Tr(b_i * d_j) == delta_ij`` (trace to F_p)."""
    from . import linalg

    codes = [_code(ctx, b) for b in basis]
    Fp = field_make(ctx.p, 1)
    if len(codes) != ctx.k or linalg.rank([list(ctx.coeffs(c)) for c in codes], Fp) != ctx.k:
        raise DependentBasis("basis is not linearly independent over the prime field")
    gram = [[ctx.trace(ctx.mul(a, b)) for b in codes] for a in codes]
    cinv = linalg.inverse(gram, Fp)
    out = []
    for j in range(ctx.k):
        acc = 0
        for l in range(ctx.k):
            acc = ctx.add(acc, ctx.scale(cinv[j][l], codes[l]))
        out.append(FieldElem(ctx, acc))
    return out
