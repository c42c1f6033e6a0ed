"""Small integer number theory: orders, prime powers, integer logs."""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from sympy import factorint, isprime, totient

__all__ = [
    "isprime",
    "prime_power",
    "multiplicative_order",
    "is_primitive_root",
    "floor_log",
    "split_p_part",
    "divisors",
    "totient",
]


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, s)`` with ``q == p**s`` and ``p`` prime, or None."""
    if q < 2:
        return None
    f = factorint(q)
    if len(f) != 1:
        return None
    ((p, s),) = f.items()
    return int(p), int(s)


@lru_cache(maxsize=4096)
def multiplicative_order(a: int, m: int) -> int:
    """Order of ``a`` in ``(Z/mZ)^*``.

    ``ord_1(a) = 1`` for every ``a``: the smallest positive k with
    ``a**k = 1 (mod 1)``.
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return 1
    a %= m
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    phi = int(totient(m))
    order = phi
    for r, e in factorint(phi).items():
        for _ in range(e):
            if pow(a, order // r, m) == 1:
                order //= r
            else:
                break
    return order


def is_primitive_root(a: int, m: int) -> bool:
    if m == 1:
        return True
    if gcd(a, m) != 1:
        return False
    return multiplicative_order(a, m) == int(totient(m))


def floor_log(q: int, n: int) -> int:
    """Largest c with ``q**c <= n`` (exact integer arithmetic)."""
    if q < 2 or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    c, acc = 0, q
    while acc <= n:
        c += 1
        acc *= q
    return c


def split_p_part(n: int, p: int) -> tuple[int, int]:
    """Write ``n = p**e * n1`` with ``p`` not dividing ``n1``; return ``(e, n1)``."""
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e, n


def divisors(n: int) -> list[int]:
    out = [1]
    for r, e in factorint(n).items():
        out = [d * r**k for d in out for k in range(e + 1)]
    return sorted(out)
