import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cyclocover.gf import base_field, field_make
from cyclocover.polyring import (
    LengthMismatch,
    NonCoprime,
    Poly,
    ReduciblePolynomial,
    crt_lift,
    crt_split,
    cyclotomic_cosets,
    factor_xn_minus_1,
    is_irreducible,
    minimal_poly,
    poly_gcd,
    poly_xgcd,
    power_coeffs,
)

X = sympy.symbols("x")

# coefficients listed from the constant term upward
PAPER_F11 = {
    "f0": "x - 1",
    "f1": "x^5 + x^4 - x^3 + x^2 - 1",
    "f2": "x^5 - x^3 + x^2 - x - 1",
}
PAPER_F16 = [
    (2, 0, 1, 0, 1),  # x^4 + x^2 + 2
    (1, 0, 1),  # x^2 + 1
    (2, 2, 1),  # x^2 + 2x + 2
    (1, 1),  # x + 1
    (2, 0, 2, 0, 1),  # x^4 + 2x^2 + 2
    (2, 1),  # x + 2
    (2, 1, 1),  # x^2 + x + 2
]
PAPER_ROWS_3_11 = [
    (1, 0, -1, 1, -1),
    (-1, 1, 1, 1, -1),
    (-1, -1, -1, 0, -1),
    (-1, -1, 0, 1, 1),
    (1, -1, 1, 1, 0),
    (0, 1, -1, 1, 1),
]


def sympy_factors(p, n):
    _, fl = sympy.factor_list(X**n - 1, modulus=p)
    out = []
    for f, e in fl:
        cs = [int(c) % p for c in reversed(sympy.Poly(f, X, modulus=p).all_coeffs())]
        out.append((tuple(cs), e))
    return sorted(out)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 15, 16, 20, 21])
def test_factorization_matches_sympy(p, n):
    fac = factor_xn_minus_1(p, n)
    mine = sorted((tuple(f.poly.coeffs), f.multiplicity) for f in fac.factors)
    assert mine == sympy_factors(p, n)
    assert fac.verify()


@pytest.mark.parametrize("n", [3, 5, 7, 9, 15, 17])
def test_factorization_over_f4(n):
    fac = factor_xn_minus_1(4, n)
    assert fac.verify()
    assert all(is_irreducible(f.poly) for f in fac.factors)
    assert sorted(f.degree for f in fac.factors) == sorted(len(c) for c in cyclotomic_cosets(4, n))


def test_paper_factors_3_11():
    fac = factor_xn_minus_1(3, 11)
    got = [f.poly.pretty(signed=True) for f in fac.factors]
    assert got == [PAPER_F11["f0"], PAPER_F11["f1"], PAPER_F11["f2"]]


def test_paper_factors_3_16():
    fac = factor_xn_minus_1(3, 16)
    assert sorted(tuple(f.poly.coeffs) for f in fac.factors) == sorted(PAPER_F16)


def test_power_rows_3_11():
    f1 = factor_xn_minus_1(3, 11).factors[1].poly
    rows = [tuple(c if c < 2 else -1 for c in power_coeffs(f1, i)) for i in range(5, 11)]
    assert rows == PAPER_ROWS_3_11
    # rows below the degree are unit vectors: x_j = 0 has no solution in F_q^*
    for i in range(5):
        assert power_coeffs(f1, i) == [int(j == i) for j in range(5)]
    assert power_coeffs(f1, 11) == [1, 0, 0, 0, 0]


def test_cosets():
    assert cyclotomic_cosets(3, 11) == ((0,), (1, 3, 4, 5, 9), (2, 6, 7, 8, 10))
    assert cyclotomic_cosets(2, 7) == ((0,), (1, 2, 4), (3, 5, 6))
    with pytest.raises(NonCoprime):
        cyclotomic_cosets(3, 6)


def test_text_forms():
    F = base_field(3)
    f = Poly(F, (2, 0, 1))
    assert f.pretty() == "x^2 + 2"
    assert f.pretty(signed=True) == "x^2 - 1"
    assert f.to_text() == "2 + 0*x + 1*x^2 (mod 3)"
    assert factor_xn_minus_1(2, 1).factors[0].poly.pretty() == "x + 1"


def test_poly_errors():
    F = base_field(3)
    with pytest.raises(ReduciblePolynomial):
        power_coeffs(Poly(F, (2, 0, 1)), 3)
    fac = factor_xn_minus_1(3, 4)
    with pytest.raises(LengthMismatch):
        crt_split([1, 2, 3], fac)


def test_gcd_and_xgcd():
    F = base_field(5)
    a = Poly(F, (1, 2, 1))  # (x+1)^2
    b = Poly(F, (4, 0, 1))  # (x+1)(x-1)
    assert poly_gcd(a, b).coeffs == (1, 1)
    g, s, t = poly_xgcd(a, b)
    assert (s * a + t * b).monic() == g.monic()


def test_minimal_poly_of_roots():
    L = field_make(3, 5)
    fac = factor_xn_minus_1(3, 11)
    omega = L.pow(L.gen, (L.q - 1) // 11)
    m = minimal_poly(L, omega, 3)
    assert any(m == f.poly for f in fac.factors)


@pytest.mark.parametrize("q,n", [(3, 11), (3, 16), (2, 12), (4, 9)])
def test_irreducibility_matches_sympy_for_primes(q, n):
    for f in factor_xn_minus_1(q, n).factors:
        if q in (2, 3, 5, 7):
            assert sympy.Poly(list(reversed(f.poly.coeffs)), X, modulus=q).is_irreducible
        assert is_irreducible(f.poly)


@given(st.sampled_from([(3, 11), (3, 16), (2, 15), (5, 12), (4, 5), (2, 12)]), st.data())
def test_crt_round_trip(qn, data):
    q, n = qn
    fac = factor_xn_minus_1(q, n)
    v = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    assert crt_lift(crt_split(v, fac), fac) == v


@given(st.sampled_from([(3, 11), (2, 15), (5, 12), (3, 8)]), st.data())
def test_crt_split_is_shift_natural(qn, data):
    """Shifting a vector multiplies every residue by x."""
    q, n = qn
    fac = factor_xn_minus_1(q, n)
    F = fac.ctx
    v = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    xs = Poly.x_pow(F, 1)
    lhs = crt_split(list(oracles.shift(v, 1)), fac)
    rhs = [(xs * r) % f.power for r, f in zip(crt_split(v, fac), fac.factors)]
    assert lhs == rhs
