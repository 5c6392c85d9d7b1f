import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flagval.af.check import check_af, verify_witness
from flagval.af.examples import fano_lifted, fano_table, mod4, parity, typical
from flagval.af.funceq import check_functional_equation
from flagval.af.order import build_order, filtration_from_order
from flagval.af.rank2 import classify_rank2
from flagval.af.rank3 import detect_special_basis, rank3_reduce
from flagval.af.reduce import reduce_value_set
from flagval.errors import BasisConditionFailure, InvarianceFailure, Rank2Failure, WindowTooShallow
from flagval.functions import DepthK, FullTable, constant, postcompose, restrict
from flagval.geometry.projective import projective_space
from flagval.geometry.verify import brute_af_batch
from flagval.lattice import INTEGERS, Lattice, Subgroup, Window, all_vectors

Z2 = Lattice(INTEGERS, 2)
Z3 = Lattice(INTEGERS, 3)


# -- classify_rank2 ---------------------------------------------------------------

def test_classify_constant():
    assert classify_rank2(FullTable.from_points(5, 2, [3] * 6)).kind == "constant"


def test_classify_off_point():
    c = classify_rank2(FullTable.from_points(3, 2, [1, 0, 0, 0]))
    assert c.kind == "off-subgroup"
    assert c.direction == (0, 1) and c.generic == 0 and c.other == 1


def test_classify_typical():
    c = classify_rank2(typical())
    assert (c.kind, c.p, c.k, c.phase) == ("typical", 2, 0, 0)


def test_classify_shallow_window():
    with pytest.raises(WindowTooShallow):
        classify_rank2(typical(window=Window(2, 1)))


def test_classify_not_af():
    r = classify_rank2(FullTable.from_points(3, 2, [0, 1, 0, 1]))
    assert r.kind == "not-af"


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_two_value_law(vals):
    # never certify three values on a rank-2 group
    r = classify_rank2(FullTable.from_points(5, 2, vals))
    if len(set(vals)) >= 3:
        assert r.kind == "not-af"


# -- check_af ---------------------------------------------------------------------

def test_check_af_constant():
    v = check_af(constant(Z2, 1))
    assert v.kind == "certified" and len(v.filtration.layers) == 1


def test_check_af_fano():
    v = check_af(fano_table())
    assert v.to_json()["kind"] == "exceptional:fano"
    assert v.basis is not None


def test_check_af_delta_plane():
    f = FullTable.from_points(3, 3, [1] + [0] * 12)
    v = check_af(f)
    assert v.kind == "certified" and len(v.filtration.layers) == 2
    assert v.filtration.validate(f) is None
    # oracle: every line restriction is AF
    space = projective_space(3, 2)
    ok = brute_af_batch(space, np.array([f.point_values()]))
    assert ok[(1 << 13) - 1][0]


def test_check_af_invariance_error():
    mapping = {v: int(v == (1, 0)) for v in all_vectors(3, 2) if any(v)}
    with pytest.raises(InvarianceFailure):
        check_af(FullTable.from_vectors(3, 2, mapping))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 13 - 1))
def test_certificates_and_witnesses_sound(bits):
    f = FullTable.from_points(3, 3, [(bits >> i) & 1 for i in range(13)])
    v = check_af(f)
    if v.kind == "certified":
        assert v.filtration.validate(f) is None
    else:
        assert verify_witness(f, v.witness)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=7, max_size=7))
def test_oracle_agreement_q2(vals):
    f = FullTable.from_points(2, 3, vals)
    space = projective_space(2, 2)
    oracle = brute_af_batch(space, np.array([vals]))[(1 << 7) - 1][0]
    assert (check_af(f, exceptional=False).kind == "certified") == bool(oracle)


def test_window_certificate_sound():
    f = typical()
    v = check_af(f)
    assert v.kind == "certified"
    assert v.filtration.validate(f) is None


# -- build_order ------------------------------------------------------------------

def test_order_constant():
    rel = build_order(constant(Z2, 1))
    assert rel.compare((1, 0), (0, 1)) == 0


def test_order_typical():
    # the generic element lies below the layer-1 element
    rel = build_order(typical())
    assert rel.compare((0, 1), (1, 0)) == 1 or rel.compare((1, 0), (0, 1)) == -1


def test_order_fano_lifted_cycle():
    r = build_order(fano_lifted())
    assert r.kind == "contradiction"
    w = r.to_json()["witness"]
    assert w["kind"] == "cycle"
    f = fano_lifted()
    vals = [f.evaluate(tuple(w[k])) for k in ("a", "b", "a2", "b2")]
    assert vals == list(w["values"])


def test_order_needs_rank2():
    f = FullTable.from_points(3, 3, [0, 1, 2] + [0] * 10)
    with pytest.raises(Rank2Failure):
        build_order(f)


@pytest.mark.parametrize("vals", [
    [1] + [0] * 12,
    [2, 1, 1, 1] + [0] * 9,
    [0] * 13,
])
def test_order_filtration_agrees_with_peeling(vals):
    f = FullTable.from_points(3, 3, vals)
    rel = build_order(f)
    a = filtration_from_order(f, rel)
    b = check_af(f).filtration
    assert [s.gens for s in a.subgroups] == [s.gens for s in b.subgroups]
    assert a.values == b.values


# -- reduce_value_set -------------------------------------------------------------

def test_reduce_all_af():
    f = FullTable.from_points(3, 3, [2, 1, 1, 1] + [0] * 9)
    assert reduce_value_set(f).kind == "all-reductions-af"


def test_reduce_three_value_triple():
    def rule(v):
        r = tuple(x % 3 for x in v)
        if r[0] == 0:
            return 1
        return {0: 0, 1: 2, 2: 2}[(r[1] * pow(r[0], -1, 3)) % 3]
    f = DepthK.from_rule(3, 1, 2, rule, window=Window(3, 1))
    r = reduce_value_set(f)
    assert r.kind == "counterexample" and r.target == "Z/4"
    h = dict(r.h)
    assert len({h[0], h[1], h[2]}) == 3


def test_reduce_fano_relabeled():
    f = postcompose({0: "x", 1: "y"}, fano_table())
    r = reduce_value_set(f)
    assert r.kind == "counterexample" and r.target == "Z/2"


# -- rank3_reduce / special bases -------------------------------------------------

def test_rank3_fq_always_certified():
    rng = random.Random(1)
    space = projective_space(3, 2)
    for _ in range(30):
        # random flag function: point, line through it, rest
        f = FullTable.from_points(3, 3, [rng.randrange(2) for _ in range(13)])
        if all(classify_rank2(restrict(f, Subgroup.span(f.lattice, [space.points[i] for i in space.mask_points(m)][:2]))).kind != "not-af"
               for m in space.lines()):
            assert rank3_reduce(f).kind == "certified"


def test_rank3_mod4():
    v = rank3_reduce(mod4())
    assert v.to_json()["kind"] == "exceptional:mod4"


def test_rank3_special_basis_certified():
    f = DepthK.from_rule(2, 1, 3, lambda v: int(v[0] % 2 == 0 and v[1] % 2 == 0), window=Window(4, 2))
    v = rank3_reduce(f)
    assert v.kind == "certified"
    A1 = v.filtration.subgroups[1]
    assert A1.gens == Subgroup.span(Z3, [(2, 0, 0), (0, 2, 0), (0, 0, 1)]).gens


def test_special_basis_detection():
    assert detect_special_basis(constant(Z3, 0, Window(4, 2))) is None
    assert detect_special_basis(fano_lifted(Window(4, 2))) is None
    f = DepthK.from_rule(2, 2, 3, lambda v: int(v[0] % 4 == 0 and v[1] % 4 == 0), window=Window(4, 2))
    assert detect_special_basis(f) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_exceptional_completeness_mod2():
    # over Z^3 induced from A/2A: every refuted function with AF planes is Fano-shaped
    seen = 0
    for bits in range(1, 127):
        f = DepthK.from_rule(2, 1, 3, lambda v: (bits >> (4 * (v[0] % 2) + 2 * (v[1] % 2) + (v[2] % 2) - 1)) & 1,
                             window=Window(2, 1))
        v = check_af(f)
        if v.kind == "exceptional":
            seen += 1
            assert v.pattern == "fano"
    assert seen == 56


# -- functional equation ----------------------------------------------------------

def test_fe_typical_holds():
    assert check_functional_equation(typical(), ((0, 1), (1, 0))).kind == "holds"


def test_fe_parity_holds_and_certifies():
    f = parity()
    assert check_functional_equation(f, ((0, 1), (1, 0))).kind == "holds"
    v = check_af(f)
    assert v.kind == "certified"
    assert v.filtration.subgroups[1].gens == Subgroup.span(Z2, [(1, 0), (0, 2)]).gens


def test_fe_basis_condition():
    with pytest.raises(BasisConditionFailure):
        check_functional_equation(parity(), ((1, 0), (0, 1)))


def test_fe_flipped_parity_violation():
    # parity with the classes of (1, 1) and (3, 3) mod 4 flipped
    f = DepthK.from_rule(2, 2, 2, lambda v: 0 if tuple(x % 4 for x in v) in [(1, 1), (3, 3)] else v[1] % 2,
                         window=Window(4, 2))
    r = check_functional_equation(f, ((0, 1), (1, 2)))
    assert r.kind == "violation"
    assert (r.k, r.m, r.n) == (-1, -1, 0)
    assert check_af(f).kind != "certified"
