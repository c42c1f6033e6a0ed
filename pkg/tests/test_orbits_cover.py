import itertools
import random

import numpy as np
import pytest

import oracles
from cyclocover.cover import (
    Subspace,
    decompose_invariant,
    hq_bruteforce,
    is_cyclic_covering,
    is_tau3_covering,
    subspace_from_rows,
)
from cyclocover.certificates import CoveringWitness, NonCoveringWitness
from cyclocover.gf import base_field
from cyclocover.orbits import (
    BudgetExceeded,
    burnside_count,
    canonical,
    compute_masks,
    decode,
    digits,
    encode,
    orbit_representatives,
    rotate_codes,
    rotate_mask,
    shift,
    undigits,
)
from cyclocover.polyring import LengthMismatch, NonCoprime, factor_xn_minus_1


# -- orbits ----------------------------------------------------------------------


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (2, 6), (2, 9), (3, 4), (3, 5), (3, 6), (4, 3), (4, 4), (5, 4)])
def test_orbit_counts_match_direct_dedup(q, n):
    want = oracles.orbit_count(q, n)
    assert len(orbit_representatives(q, n)) == want
    assert burnside_count(q, n) == want


def test_orbit_examples():
    assert len(orbit_representatives(2, 2)) == 2
    assert len(orbit_representatives(2, 3)) == 3
    reps = orbit_representatives(2, 6)
    assert reps.total_vectors() == 2**6 - 1


def test_orbit_count_3_11_frozen():
    # direct canonical-form dedup in pure Python; frozen value 8053
    assert oracles.orbit_count(3, 11) == 8053
    assert len(orbit_representatives(3, 11)) == 8053
    # shift orbits including zero, the classical necklace count
    assert (3**11 + 10 * 3) // 11 == 16107


def test_tau3_orbit_counts():
    assert len(orbit_representatives(2, 6, step=2)) == oracles.orbit_count(2, 6, step=2)
    assert len(orbit_representatives(3, 4, step=2)) == oracles.orbit_count(3, 4, step=2)


def test_reps_are_canonical_and_budgeted():
    F = base_field(3)
    for rep in orbit_representatives(3, 5):
        assert canonical(rep.vector, F)[0] == rep.vector
    with pytest.raises(BudgetExceeded):
        orbit_representatives(3, 12, budget=1000)


def test_codes_round_trip():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randint(1, 9)
        v = tuple(rng.randrange(3) for _ in range(n))
        assert decode(encode(v, 3), 3, n) == v
        s = rng.randrange(n)
        rot = rotate_codes(np.array([encode(v, 3)]), 3, n, s)
        assert decode(int(rot[0]), 3, n) == oracles.shift(v, s) == shift(v, s)
    D = digits(np.arange(27), 3, 3)
    assert undigits(D, 3).tolist() == list(range(27))


def test_mask_bits_against_inner_products():
    F = base_field(3)
    rng = random.Random(2)
    n = 7
    W = np.array([[rng.randrange(3) for _ in range(n)] for _ in range(20)])
    A = np.array([[rng.randrange(3) for _ in range(n)] for _ in range(5)])
    M = compute_masks(W, A, F)
    Fo = oracles.Field(3)
    for r, w in enumerate(W.tolist()):
        for k, a in enumerate(A.tolist()):
            want = sum(1 << i for i in range(n) if Fo.inner(oracles.shift(w, i), a) == 0)
            assert int(M[r, k]) == want
    # the zero vector is orthogonal to everything
    assert int(compute_masks(np.zeros((1, n), dtype=int), A, F)[0, 0]) == (1 << n) - 1


def test_mask_rotation_identity():
    F = base_field(2)
    n = 9
    rng = random.Random(3)
    for _ in range(50):
        w = [rng.randrange(2) for _ in range(n)]
        a = [rng.randrange(2) for _ in range(n)]
        k = rng.randrange(n)
        m0 = int(compute_masks(np.array([w]), np.array([a]), F)[0, 0])
        mk = int(compute_masks(np.array([oracles.shift(w, k)]), np.array([a]), F)[0, 0])
        assert mk == rotate_mask(m0, k, n)


# -- subspaces and covering -----------------------------------------------------


def test_subspace_basics():
    S = subspace_from_rows([[1, 1, 0], [0, 1, 1]], 2)
    assert S.dim == 2 and S.codim == 1
    assert S.contains([1, 0, 1]) and not S.contains([1, 0, 0])
    assert S.annihilator == ((1, 1, 1),)
    with pytest.raises(LengthMismatch):
        S.contains([1, 0])
    with pytest.raises(LengthMismatch):
        subspace_from_rows([[1, 0], [1, 0, 1]], 2)


@pytest.mark.parametrize("q,n", [(2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (3, 4), (4, 3)])
def test_covering_matches_naive_union(q, n):
    F = base_field(q)
    rng = random.Random(q * 100 + n)
    for _ in range(40):
        c = rng.randint(1, 2)
        duals = [[rng.randrange(q) for _ in range(n)] for _ in range(c)]
        S = Subspace.from_duals(duals, F, n)
        want = oracles.is_covering_set(oracles.kernel(duals, q, n), q, n)
        got = is_cyclic_covering(S)
        assert isinstance(got, CoveringWitness) == want
        if not want:
            assert isinstance(got, NonCoveringWitness)
            v = got.vector
            assert all(oracles.shift(v, -i) not in oracles.kernel(duals, q, n) for i in range(n))
            assert got.recheck()


def test_full_space_and_log_bound():
    F = base_field(2)
    assert isinstance(is_cyclic_covering(Subspace.full(F, 4)), CoveringWitness)
    # codim-1 covering of F_2^3 exists and respects codim <= floor(log_2 3) = 1
    S = Subspace.from_duals([[0, 1, 1]], F, 3)
    assert isinstance(is_cyclic_covering(S), CoveringWitness)


def test_tau3_with_m1_is_cyclic():
    rng = random.Random(5)
    F = base_field(2)
    for _ in range(100):
        n = rng.randint(2, 8)
        duals = [[rng.randrange(2) for _ in range(n)]]
        S = Subspace.from_duals(duals, F, n)
        a = isinstance(is_cyclic_covering(S), CoveringWitness)
        b = isinstance(is_tau3_covering(S, 1, n), CoveringWitness)
        assert a == b


def test_tau3_instance_q2_mn4():
    # any cyclic covering of F_2^4 (only the full space) is a tau3-covering
    F = base_field(2)
    S = Subspace.full(F, 4)
    assert isinstance(is_tau3_covering(S, 2, 2), CoveringWitness)
    T = Subspace.from_duals([[1, 0, 1, 0]], F, 4)
    got = is_tau3_covering(T, 2, 2)
    want = oracles.is_covering_set(oracles.kernel([[1, 0, 1, 0]], 2, 4), 2, 4, step=2)
    assert isinstance(got, CoveringWitness) == want


def test_decompose_invariant_3_11():
    comps = decompose_invariant(3, 11)
    fac = factor_xn_minus_1(3, 11)
    assert [W.dim for W in comps] == [1, 5, 5]
    for W, f in zip(comps, fac.factors):
        for b in W.basis:
            assert oracles.poly_apply_shift(f.poly.coeffs, b, 3) == (0,) * 11
    # the three components span F_3^11
    rows = [list(b) for W in comps for b in W.basis]
    assert Subspace.from_rows(rows, base_field(3), 11).dim == 11
    with pytest.raises(NonCoprime):
        decompose_invariant(3, 12)


def test_paper_component_generators_3_11():
    u = (1, 0, 0, 0, 0, 1, 2, 2, 2, 1, 0)
    v = (1, 0, 0, 0, 0, 1, 0, 1, 2, 2, 2)
    W0, W1, W2 = decompose_invariant(3, 11)
    F = oracles.Field(3)
    # with shift(v, i)[j] = v[j - i], u is killed by f2(tau) and v by f1(tau);
    # the opposite shift direction swaps the two reciprocal factors
    for gen, W in ((u, W2), (v, W1)):
        basis = [oracles.shift(gen, i) for i in range(5)]
        assert all(W.contains(b) for b in basis)
        assert Subspace.from_rows(basis, base_field(3), 11).dim == 5
        # self-orthogonal bases
        assert all(F.inner(a, b) == 0 for a, b in itertools.product(basis, repeat=2))


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3)])
def test_bruteforce_matches_naive(q, n):
    assert hq_bruteforce(q, n).value == oracles.naive_h(q, n)


def test_bruteforce_certificates_recheck():
    r = hq_bruteforce(2, 7)
    assert r.value == 2
    assert all(c.recheck() for c in r.certificates)
    with pytest.raises(BudgetExceeded):
        hq_bruteforce(3, 13, budget=1000)
