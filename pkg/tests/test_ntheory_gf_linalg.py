import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cyclocover import linalg
from cyclocover.gf import (
    DependentBasis,
    DivisionByZero,
    FieldElem,
    MixedContexts,
    NonPrimeCharacteristic,
    arith,
    base_field,
    dual_basis,
    field_make,
    normal_element,
)
from cyclocover.ntheory import (
    divisors,
    floor_log,
    is_primitive_root,
    multiplicative_order,
    prime_power,
    split_p_part,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)]


# -- number theory -----------------------------------------------------------


@pytest.mark.parametrize("m", range(1, 60))
@pytest.mark.parametrize("a", [2, 3, 4, 5, 7, 9])
def test_order_matches_naive(a, m):
    from math import gcd

    if gcd(a, m) != 1:
        with pytest.raises(ValueError):
            multiplicative_order(a, m)
    else:
        assert multiplicative_order(a, m) == oracles.mult_order(a, m)


def test_primitive_roots_and_prime_powers():
    assert is_primitive_root(3, 17) and is_primitive_root(2, 13)
    assert not is_primitive_root(3, 11)
    assert prime_power(9) == (3, 2) and prime_power(6) is None and prime_power(1) is None
    assert split_p_part(48, 2) == (4, 3)
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert [floor_log(3, n) for n in (1, 2, 3, 8, 9, 26, 27)] == [0, 0, 1, 1, 2, 2, 3]


# -- fields --------------------------------------------------------------------


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, k):
    F = field_make(p, k)
    els = list(F.elements())
    assert len(els) == p**k
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.antilog(F.dlog(a)) == a
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_f4_matches_independent_table():
    F = field_make(2, 2)
    for a, b in itertools.product(range(4), repeat=2):
        assert F.mul(a, b) == oracles.f4_mul(a, b)
        assert F.add(a, b) == a ^ b


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (2, 5), (3, 5)])
def test_frobenius_and_trace(p, k):
    F = field_make(p, k)
    for a in range(F.q):
        assert F.frobenius(a, k) == a
        t = F.trace(a)
        assert F.in_subfield(t, 1)
    for a, b in [(1, 2), (3, F.q - 1)]:
        assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
        assert F.trace(F.add(a, b)) == F.add(F.trace(a), F.trace(b))


def test_field_errors():
    with pytest.raises(NonPrimeCharacteristic):
        field_make(6)
    with pytest.raises(NonPrimeCharacteristic):
        base_field(12)
    F = field_make(3, 2)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(MixedContexts):
        FieldElem(F, 1) + FieldElem(field_make(2, 2), 1)
    with pytest.raises(DependentBasis):
        dual_basis(F, [1, 1])
    assert arith(F, "mul", 2, 2).code == F.mul(2, 2)


@pytest.mark.parametrize("p,k", [(2, 4), (3, 3), (2, 5), (5, 2)])
def test_normal_and_dual_basis(p, k):
    F = field_make(p, k)
    nb = normal_element(F)
    for a in range(F.q):
        assert nb.from_coords(nb.to_coords(a)) == a
    d = dual_basis(F, list(nb.conjugates))
    for i, b in enumerate(nb.conjugates):
        for j, e in enumerate(d):
            assert F.trace(F.mul(b, e.code)) == int(i == j)


# -- linear algebra ------------------------------------------------------------


def _rand_matrix(rng, q, r, c):
    return [[rng.randrange(q) for _ in range(c)] for _ in range(r)]


@pytest.mark.parametrize("q", [2, 3, 5])
def test_rank_against_span_size(q):
    rng = random.Random(q)
    F = base_field(q)
    for _ in range(40):
        r, c = rng.randint(1, 4), rng.randint(1, 5)
        M = _rand_matrix(rng, q, r, c)
        rk = linalg.rank(M, F)
        assert q**rk == len(oracles.span(M, q, c))
        N = linalg.nullspace(M, F, c)
        assert len(N) == c - rk
        for v in N:
            assert all(linalg.vec_dot(row, v, F) == 0 for row in M)


def test_inverse_and_singular():
    F = base_field(3)
    M = [[1, 2], [0, 1]]
    inv = linalg.inverse(M, F)
    assert linalg.matmul(M, inv, F) == [[1, 0], [0, 1]]
    with pytest.raises(linalg.SingularMatrix):
        linalg.inverse([[1, 2], [2, 1]], F)


@given(st.lists(st.lists(st.integers(0, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rref_over_f4_is_idempotent(rows):
    F = field_make(2, 2)
    R, piv = linalg.rref(rows, F)
    R2, piv2 = linalg.rref(R, F)
    assert (R, piv) == (R2, piv2)
    assert len(R) == linalg.rank(rows, F)
    for row in rows:
        assert linalg.coordinates(R, row, F) is not None
