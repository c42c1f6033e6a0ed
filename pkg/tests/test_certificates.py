import json

import pytest

from cyclocover.certificates import (
    CoveringWitness,
    ExhaustiveNonExistence,
    MalformedCertificate,
    NonCoveringWitness,
    TheoremBound,
    dumps,
    from_json,
)
from cyclocover.cover import Subspace, hq_bruteforce, is_cyclic_covering
from cyclocover.criteria import hq_resolve, primitive_root_family, recheck_result
from cyclocover.gf import base_field
from cyclocover.search import codim1_search, codim2_nonexistence


def _round_trip(c):
    back = from_json(json.loads(dumps(c)))
    assert back == c
    return back


def test_covering_witness_round_trip_and_tamper():
    w = codim1_search(2, 3)
    assert isinstance(w, CoveringWitness) and w.codim == 1
    back = _round_trip(w)
    assert back.recheck()
    # a non-covering hyperplane of F_2^3: the even-weight code misses (1,0,0)
    bad = CoveringWitness.build(Subspace.from_duals([[1, 1, 1]], base_field(2), 3))
    assert not bad.recheck()
    # duals that do not annihilate the basis
    tampered = CoveringWitness(w.q, w.n, w.step, w.basis, [[1, 0, 0]])
    assert not tampered.recheck()


def test_non_covering_witness():
    S = Subspace.from_duals([[1, 1, 1]], base_field(2), 3)
    nc = is_cyclic_covering(S)
    assert isinstance(nc, NonCoveringWitness)
    back = _round_trip(nc)
    assert back.recheck()
    back.vector = [0, 0, 0]
    assert not back.recheck()


def test_exhaustive_codim1_round_trip():
    r = hq_resolve(3, 5, search=True)
    assert r.value == 0
    obj = json.loads(json.dumps(r.to_json()))
    ok, problems = recheck_result(obj)
    assert ok, problems


def test_exhaustive_codim2_fast_recheck():
    cert = codim2_nonexistence(3, 11, pools="all")
    assert isinstance(cert, ExhaustiveNonExistence) and cert.refutations
    back = _round_trip(cert)
    assert back.recheck(fast=True)
    assert back.recheck()
    back.refutations[0]["vector"] = [0] * 11
    assert not back.recheck(fast=False)


def test_bruteforce_exhaustive_recheck():
    r = hq_bruteforce(2, 6)
    exh = [c for c in r.certificates if isinstance(c, ExhaustiveNonExistence)]
    for c in exh:
        assert _round_trip(c).recheck()


def test_theorem_bound_recheck():
    app = primitive_root_family(3, 5)
    assert app.applicable
    for c in app.certificates:
        assert isinstance(c, TheoremBound)
        assert _round_trip(c).recheck()
    lie = TheoremBound(app.certificates[0].theorem, 3, 11, 0, 0, {**app.certificates[0].parameters}, "")
    assert not lie.recheck()
    lb = TheoremBound.log_upper_bound(3, 11)
    assert lb.hi == 2 and lb.recheck()
    assert not TheoremBound("log_upper_bound", 3, 11, 0, 1, {}, "").recheck()


@pytest.mark.parametrize(
    "obj",
    [
        {},
        {"kind": "nonsense"},
        {"kind": "covering_witness", "q": 2},
        {"kind": "theorem_bound", "theorem": "x", "extra": 1},
        [],
    ],
)
def test_malformed(obj):
    with pytest.raises(MalformedCertificate):
        from_json(obj)
