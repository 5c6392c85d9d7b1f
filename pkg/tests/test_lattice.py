import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flagval.af.check import check_af
from flagval.af.examples import fano_table, mod4, mod4_value, typical
from flagval.af.rank2 import classify_rank2
from flagval.errors import InvarianceFailure, OutOfWindow, PartialMap, ZeroElement
from flagval.functions import (DepthK, FullTable, WindowOracle, check_invariance, constant,
                               enumerate_primitive_classes, postcompose, restrict)
from flagval.lattice import INTEGERS, Lattice, PrimeField, Subgroup, Window, all_vectors
from flagval.padic import PadicInteger

Z2 = Lattice(INTEGERS, 2)
Z3 = Lattice(INTEGERS, 3)


def test_evaluate_constant():
    assert constant(Z2, 7, Window(8, 1)).evaluate((3, 5)) == 7


def test_evaluate_typical_layers():
    # generic off Z e1 + 2Z e2; values only see primitive parts
    t = typical(generic="g", other="o")
    assert t.evaluate((0, 1)) == "g"
    assert t.evaluate((0, 2)) == "g"
    assert t.evaluate((1, 0)) == "o"
    assert t.evaluate((1, 2)) == "o"
    assert t.evaluate((3, 1)) == "g"


def test_evaluate_unit_invariance_depthk():
    f = DepthK.from_rule(2, 2, 2, lambda v: (v[0] % 2, v[1] % 4 in (1, 3)), window=Window(8, 2))
    assert f.evaluate((5, 3)) == f.evaluate((1, 3))


def test_evaluate_errors():
    f = constant(Z2, 1, Window(2, 1))
    with pytest.raises(ZeroElement):
        f.evaluate((0, 0))
    with pytest.raises(OutOfWindow):
        f.evaluate((3, 1))


def test_check_invariance():
    assert check_invariance(constant(Z2, 0)) is None
    mapping = {v: int(v == (1, 0)) for v in all_vectors(3, 2) if any(v)}
    assert check_invariance(FullTable.from_vectors(3, 2, mapping)) == (2, (1, 0))
    w = Window(8, 3)
    assert check_invariance(mod4(w), w) is None


def test_restrict_constant():
    f = constant(Z3, 4, Window(4, 1))
    B = Subgroup.span(Z3, [(1, 1, 0), (0, 2, 1)])
    g = restrict(f, B)
    assert check_af(g).kind == "certified"
    assert set(g.attained()) == {4}


def test_restrict_fano_planes():
    f = fano_table()
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    # the plane <e1, e2> misses the three minority points
    g = restrict(f, Subgroup.span(f.lattice, [e1, e2]))
    assert set(g.point_values()) == {1}
    # <e1, e3> meets them once: one nongeneric point
    g = restrict(f, Subgroup.span(f.lattice, [e1, e3]))
    assert sorted(g.point_values()) == [0, 1, 1]
    c = classify_rank2(g)
    assert c.kind == "off-subgroup" and c.other == 0


def test_restrict_typical_shifts_phase():
    t = typical(window=Window(16, 4))
    full = classify_rank2(t)
    sub = classify_rank2(restrict(t, Subgroup.span(Z2, [(1, 0), (0, 2)])))
    assert full.kind == sub.kind == "typical"
    assert sub.phase != full.phase


def test_postcompose():
    t = typical()
    assert postcompose(lambda v: v, t).attained() == t.attained()
    assert postcompose(lambda v: 0, t).attained() == [0]
    with pytest.raises(PartialMap):
        postcompose({0: 1}, t)


def test_postcompose_mod4_rule():
    # a Z/2-valued relabeling of the mod-4 example reproduces the same pattern
    f = mod4()
    g = postcompose({0: "a", 1: "b"}, f)
    for rep, v in f.entries():
        assert g.class_value(rep) == {0: "a", 1: "b"}[mod4_value(rep)]


def test_primitive_classes():
    assert len(enumerate_primitive_classes(Lattice(PrimeField(3), 2), 3)) == 4
    assert enumerate_primitive_classes(Z2, 2) == [(0, 1), (1, 0), (1, 1)]
    assert len(enumerate_primitive_classes(Z3, 2)) == 7


@pytest.mark.parametrize("n,m", [(2, 4), (2, 9), (3, 4), (2, 5)])
def test_primitive_classes_count(n, m):
    # orbit count of primitive vectors mod p^k under units: p^{(k-1)(n-1)} (p^n - 1)/(p - 1)
    p = {4: 2, 9: 3, 5: 5}[m]
    k = {4: 2, 9: 2, 5: 1}[m]
    want = p ** ((k - 1) * (n - 1)) * (p ** n - 1) // (p - 1)
    assert len(enumerate_primitive_classes(Lattice(INTEGERS, n), m)) == want


def test_window_oracle_snapshot():
    def rule(v):
        g = int(np.gcd(*v))
        return int(v[1] // g % 2 == 0)
    o = WindowOracle(2, rule, Window(4, 1), p=2, k=1)
    assert isinstance(o.snapshot(), DepthK)
    assert check_af(o).kind == "certified"
    bad = WindowOracle(2, lambda v: int(v[1] % 2 == 0), Window(4, 1), p=2, k=1)
    with pytest.raises(InvarianceFailure):
        bad.snapshot()


vec3 = st.tuples(*[st.integers(-3, 3)] * 3).filter(any)


@settings(max_examples=60, deadline=None)
@given(st.lists(vec3, min_size=1, max_size=4))
def test_canonical_form_idempotent(vs):
    S = Subgroup.span(Z3, vs)
    assert S.normalized().gens == S.gens
    assert Subgroup.span(Z3, list(reversed(vs))).gens == S.gens


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 2)] * 3).filter(any), min_size=1, max_size=4))
def test_canonical_form_fq(vs):
    L = Lattice(PrimeField(3), 3)
    S = Subgroup.span(L, vs)
    assert S.normalized().gens == S.gens
    for v in vs:
        assert S.contains(v)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 13 - 1), vec3, st.integers(1, 2))
def test_unit_invariance_tables(bits, v, n):
    vals = [(bits >> i) & 1 for i in range(13)]
    f = FullTable.from_points(3, 3, vals)
    v = tuple(x % 3 for x in v)
    if any(v):
        assert f.evaluate(v) == f.evaluate(tuple(n * x for x in v))


def test_restriction_transitivity():
    f = mod4(Window(8, 3))
    B = Subgroup.span(Z3, [(1, 0, 0), (0, 1, 0), (0, 0, 2)])
    g = restrict(f, B)
    C_in_B = Subgroup.span(g.lattice, [(1, 1, 0), (0, 0, 1)])
    C = Subgroup.span(Z3, [(1, 1, 0), (0, 0, 2)])
    gc = restrict(g, C_in_B)
    fc = restrict(f, C)
    for a in Window(2, 1).points(2):
        assert gc.evaluate(tuple(a)) == fc.evaluate(tuple(a))


def test_finite_index_lifting():
    # f_B certified on an index-2 sublattice, and f itself certified
    t = typical(window=Window(16, 4))
    B = Subgroup.span(Z2, [(2, 0), (0, 1)])
    assert classify_rank2(restrict(t, B)).kind == "typical"
    assert check_af(t).kind == "certified"


def test_postcompose_preserves_certificates():
    f = FullTable.from_points(3, 3, [2, 1, 1, 1] + [0] * 9)
    v = check_af(f)
    assert v.kind == "certified"
    g = postcompose({0: 0, 1: 1, 2: 1}, f)
    assert check_af(g).kind == "certified"


def test_padic_roundtrip():
    a = PadicInteger(37, 2, 8)
    assert PadicInteger.from_string(a.to_string(), 2).value == 37
    assert (a * a.inverse()).value == 1
