import json
import random

import pytest

from flagval.errors import AxiomFailure, DependentBasis, InputError, NotACPair, NotAF, ZeroElement
from flagval.logfield.cpair import AFElement, af_corank, find_af_in_span, find_bad_subspace, \
    inertia_check, is_c_pair_field, verify_cpair_witness
from flagval.logfield.logfun import Character, combination, eval_log, logfunction_from_json, \
    ord_place, restrict_to_subspace
from flagval.logfield.models import Bivariate, Univariate
from flagval.logfield.reconstruct import compare, positive, reconstruct_valuation, \
    verify_ultrametric_witness
from flagval.logfield.valuations import MonomialValuation, Place, PlaceValuation, Valuation

U = Univariate(3)
B = Bivariate(3)
LEX = MonomialValuation("lex")


def ordf(name, w=1):
    return ord_place(U, name, w)


def lexchar(a, b):
    return Character(B, LEX, [a, b])


# -- evaluation -------------------------------------------------------------------

def test_eval_place_weights():
    assert eval_log(ordf("t"), "t^2/(t+1)").value == 2
    assert eval_log(ordf("t+1"), "t^3+1").value == 3  # (t+1)^3 in characteristic 3
    assert eval_log(ordf("inf"), "t").value == 255  # -1 mod 2^8
    assert eval_log(ordf("t^2+1"), "t^2+1").value == 1


def test_eval_lex_character():
    assert eval_log(lexchar(1, 5), B.element("x^2*y")).value == 7


def test_eval_zero_and_bad_place():
    with pytest.raises(ZeroElement):
        ordf("t").value(U.const(0))
    with pytest.raises(InputError):
        Place.parse("t^2+2", 3)  # reducible: (t+1)(t+2)


def test_log_law():
    f = combination([(3, ordf("t")), (-2, ordf("t^2+1")), (5, ordf("inf"))])
    pool = U.pool(2)
    rng = random.Random(0)
    for _ in range(10000):
        a, b = rng.choice(pool), rng.choice(pool)
        assert f.value(a * b) == (f.value(a) + f.value(b)) % f.modulus
    assert all(f.value(U.const(c)) == 0 for c in (1, 2))


# -- restriction ------------------------------------------------------------------

def test_restrict_ord_t():
    assert restrict_to_subspace(ordf("t"), ["1", "t"]).point_values() == [1, 0, 0, 0]


def test_restrict_lex_against_oracle():
    t = restrict_to_subspace(lexchar(1, 5), ["1", "x", "y"])
    # oracle on a + b x + c y: 0 if a != 0, else 1 if b != 0, else 5
    for (a, b, c), v in zip(t.space.points, t.point_values()):
        want = 0 if a else (1 if b else 5)
        assert v == want


def test_restrict_dependent_basis():
    with pytest.raises(DependentBasis):
        restrict_to_subspace(ordf("t"), ["1", "t", "t+1"])


def test_shift_invariance():
    f = combination([(1, ordf("t")), (2, ordf("t+1"))])
    kappa = U.element("t^2+1")
    a = restrict_to_subspace(f, ["1", "t"]).point_values()
    b = restrict_to_subspace(f, [kappa, kappa * U.element("t")]).point_values()
    assert [(x + f.value(kappa)) % f.modulus for x in a] == b


# -- c-pairs and AF elements ------------------------------------------------------

def test_cpair_multiple_passes():
    f = ordf("t")
    assert is_c_pair_field(f, f.scaled(3), D=2).passed


def test_cpair_sum_difference_fails():
    s = combination([(1, ordf("t")), (1, ordf("t+1"))])
    d = combination([(1, ordf("t")), (-1, ordf("t+1"))])
    r = is_c_pair_field(s, d, D=2)
    assert r.kind == "fail"
    assert verify_cpair_witness(s, d, r.witness)


def test_find_af_multiple():
    f = ordf("t")
    r = find_af_in_span(f, f.scaled(2), D=2)
    assert isinstance(r, AFElement) and (r.lam1, r.lam2) == (1, 0)


def test_find_af_lex_pair():
    r = find_af_in_span(lexchar(1, 0), lexchar(0, 1), D=2)
    assert r.kind == "af-element"
    assert r.to_json()["certificate"]


def test_find_af_requires_cpair():
    s = combination([(1, ordf("t")), (1, ordf("t+1"))])
    d = combination([(1, ordf("t")), (-1, ordf("t+1"))])
    with pytest.raises(NotACPair):
        find_af_in_span(s, d, D=2)


def test_bad_subspace():
    s = combination([(1, ordf("t")), (1, ordf("t+1"))])
    d = combination([(1, ordf("t")), (-1, ordf("t+1"))])
    # 2 ord_{t+1} = s - d is AF, so no refuting subspace exists
    assert find_bad_subspace(s, d, D=2) is None
    # f1 itself is AF here
    assert find_bad_subspace(ordf("t"), ordf("t").scaled(3), D=2) is None
    r = find_bad_subspace(s, s.scaled(0), D=2)
    assert r.kind == "bad-subspace" and len(r.basis) == 3
    assert r.refutations


def test_inertia():
    assert inertia_check(lexchar(1, 0), LEX, D=2).passed
    r = inertia_check(ordf("t"), PlaceValuation(Place.parse("t+1", 3)), D=2)
    assert r.kind == "fail" and r.witness["kind"] == "fiber"


def test_corank():
    lx, ly = lexchar(1, 0), lexchar(0, 1)
    r = af_corank([lx, combination([(1, lx), (1, ly)]), ly], D=2)
    assert r.quotient is None and len(r.af_part) == 3
    s = combination([(1, ordf("t")), (1, ordf("t+1"))])
    d = combination([(1, ordf("t")), (-1, ordf("t+1"))])
    with pytest.raises(NotACPair) as e:
        af_corank([s, d], D=2)
    assert e.value.witness == [0, 1]


# -- reconstruction ---------------------------------------------------------------

def test_reconstruct_place():
    r = reconstruct_valuation(ordf("t"), D=2, pairs=2000)
    assert r.scale == "Z" and [str(g) for g in r.generators] == ["t"]
    nu = PlaceValuation(Place.parse("t", 3))
    for k in U.pool(2):
        assert r.nu(k) == nu.value(k)
    assert r.caveat


def test_reconstruct_weight():
    r = reconstruct_valuation(Character(B, MonomialValuation("weight"), [1]), D=2, pairs=1000)
    nu = MonomialValuation("weight")
    assert r.scale == "Z"
    for k in B.pool(2)[:300]:
        assert r.nu(k) == nu.value(k)


def test_reconstruct_not_af():
    f = combination([(1, ordf("t")), (1, ordf("t+1"))])
    with pytest.raises(NotAF) as e:
        reconstruct_valuation(f, D=2, pairs=100)
    w = e.value.witness
    assert w["kind"] == "ultrametric"
    assert verify_ultrametric_witness(f, w)


def test_compare_and_positive():
    f = ordf("t")
    t = U.element("t")
    assert positive(f, t) and not positive(f, U.element("t+1"))
    assert compare(f, t * t, t) == 1
    assert compare(f, U.one(), t) == -1


def test_axiom_check_rejects_degree():
    class Degree(Valuation):
        # total degree of the numerator: multiplicative on polynomials, not ultrametric
        def value(self, k):
            return max(i + j for i, j in dict(k.num))

    assert LEX.check_axioms(B.pool(1), pairs=500)
    with pytest.raises(AxiomFailure):
        Degree().check_axioms(B.pool(1), pairs=500)


# -- JSON -------------------------------------------------------------------------

@pytest.mark.parametrize("f", [
    ord_place(U, "t", 3),
    combination([(1, ord_place(U, "t")), (2, ord_place(U, "inf"))]),
    Character(B, LEX, [1, 37]),
    Character(B, MonomialValuation("weight", (2, 3)), [5]),
])
def test_json_roundtrip(f):
    g = logfunction_from_json(json.dumps(f.to_json()))
    assert g.to_json() == f.to_json()
    for k in f.model.pool(1):
        assert g.value(k) == f.value(k)
