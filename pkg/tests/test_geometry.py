import itertools
import random

import numpy as np
import pytest

from flagval.errors import BudgetExceeded, HypothesisFailure, NotACPair, RingUnsupported
from flagval.functions import FullTable
from flagval.geometry.phi import PointAndLine, Ring, ShapeViolation, collinear, image_shape, \
    line_condition, phi_image
from flagval.geometry.projective import projective_space
from flagval.geometry.reduction import find_three_point_reduction, plane_af_batch, \
    search_no_af_cpairs
from flagval.geometry.threepoint import three_point_analysis
from flagval.geometry.verify import PROPOSITIONS, brute_af_batch, verify_proposition

P2 = projective_space(3, 2)


def table(vals, q=3):
    return FullTable.from_points(q, 3, vals)


def test_projective_counts():
    assert (P2.size, len(P2.lines())) == (13, 13)
    assert projective_space(2, 2).size == 7
    assert projective_space(5, 1).size == 6
    assert projective_space(3, 0).size == 1 and projective_space(3, 0).lines() == []


def test_phi_point_and_line():
    pm = phi_image(table([1] + [0] * 12), table([0] * 13), "Z/3")
    assert pm.image_points() == [(0, 0), (1, 0)]
    assert line_condition(pm) is None
    assert isinstance(image_shape(pm), PointAndLine)


def test_phi_rejects_unknown_ring():
    with pytest.raises(RingUnsupported):
        phi_image(table([0] * 13), table([0] * 13), "GF(4)")


def test_line_condition_flags_bad_line():
    m = P2.lines()[0]
    idx = P2.mask_points(m)
    v1, v2 = [0] * 13, [0] * 13
    v1[idx[1]], v2[idx[2]] = 1, 1
    pm = phi_image(table(v1), table(v2), "Z/3")
    assert line_condition(pm) is not None


def test_shape_violation():
    # four images in general position cannot be covered by a point and a line
    v1 = [0, 1, 0, 1] + [0] * 9
    v2 = [0, 0, 1, 1] + [0] * 9
    pm = phi_image(table(v1), table(v2), "Z/3")
    s = image_shape(pm)
    assert isinstance(s, ShapeViolation) and len(s.points) == 4


def test_collinear_rings():
    assert collinear(Ring("Q"), [(0, 0), (1, 2), (3, 6)])
    assert not collinear(Ring("Q"), [(0, 0), (1, 2), (3, 5)])
    zp = Ring("Zp", 2, 8)
    assert collinear(zp, [(0, 0), (2, 4), (4, 8)])
    assert not collinear(zp, [(0, 0), (2, 4), (1, 3)])


def test_three_point_single_line():
    L = [m for m in P2.lines() if m & 1][0]
    v1 = [1 if (L >> i) & 1 and i else 0 for i in range(13)]
    r = three_point_analysis(table(v1), table([1] + [0] * 12))
    assert r.which == ["f1", "f2", "f3"]
    assert r.line_types["T3"] == 1
    assert all(p["holds"] for p in r.predictions)


def test_three_point_hypotheses():
    with pytest.raises(HypothesisFailure):
        three_point_analysis(table([1] + [0] * 12), table([1] + [0] * 12))
    # a point off a line labelled differently: lines through it see all three labels
    L = [m for m in P2.lines() if not m & 1][0]
    v2 = [1 if (L >> i) & 1 else 0 for i in range(13)]
    with pytest.raises(HypothesisFailure):
        three_point_analysis(table([1] + [0] * 12), table(v2))


def test_reduction_degenerate_pair():
    # f2 = 0: the reduction lives entirely on f1
    rng = random.Random(0)
    f1 = table([rng.randrange(3) for _ in range(13)])
    r = find_three_point_reduction(f1, table([0] * 13))
    assert r.kind == "reduction"
    for v in r.verdicts:
        assert v.kind != "certified"


def test_reduction_af_in_span():
    r = find_three_point_reduction(table([1] + [0] * 12), table([0] * 13))
    assert r.kind == "no-reduction" and r.af_element == (1, 0)
    assert r.certificate.kind == "certified"


def test_reduction_needs_cpair():
    m = P2.lines()[0]
    idx = P2.mask_points(m)
    v1, v2 = [0] * 13, [0] * 13
    v1[idx[1]], v2[idx[2]] = 1, 1
    with pytest.raises(NotACPair):
        find_three_point_reduction(table(v1), table(v2))


def test_plane_rule_matches_oracle():
    rng = np.random.default_rng(3)
    V = rng.integers(0, 2, size=(1500, 13))
    V[:20] = 0
    V[20:40, :4] = 1
    want = brute_af_batch(P2, V)[P2.full]
    assert (plane_af_batch(P2, V) == want).all()


def test_no_af_cpairs_q2_brute_force():
    # independent enumeration: every pair with f1 = 0 wherever f2 = 1
    sp = projective_space(2, 2)
    n, p = sp.size, 3
    F1 = np.array(list(itertools.product(range(p), repeat=n)))
    F2 = np.array(list(itertools.product((0, 1), repeat=n)))
    A = np.repeat(F1, len(F2), axis=0)
    B = np.tile(F2, (len(F1), 1))
    keep = ~((A != 0) & (B == 1)).any(axis=1)
    A, B = A[keep], B[keep]
    ok = np.ones(len(A), dtype=bool)
    for m in sp.lines():
        i, j, k = sp.mask_points(m)
        det = (A[:, j] - A[:, i]) * (B[:, k] - B[:, i]) - (A[:, k] - A[:, i]) * (B[:, j] - B[:, i])
        ok &= det % p == 0
    A, B = A[ok], B[ok]
    premise = np.ones(len(A), dtype=bool)
    for l1, l2 in [(1, 0)] + [(l, 1) for l in range(p)]:
        G = (l1 * A + l2 * B) % p
        premise &= ~G.any(axis=1) | ~brute_af_batch(sp, G)[sp.full]
    noncol = np.zeros(len(A), dtype=bool)
    for a, b in itertools.combinations(range(1, n), 2):
        det = (A[:, a] - A[:, 0]) * (B[:, b] - B[:, 0]) - (A[:, b] - A[:, 0]) * (B[:, a] - B[:, 0])
        noncol |= det % p != 0
    assert premise.sum() > 0
    want = int((premise & noncol).sum())
    _, found = search_no_af_cpairs(sp, p)
    assert len(found) == want == 0


@pytest.mark.parametrize("name,q", [("z2-p", 3), ("z2-p", 5), ("red2-p", 3), ("fano", 2),
                                    ("lemma-h", 3), ("agf", 2)])
def test_verify_small(name, q):
    rep = verify_proposition(name, q, jobs=1)
    assert rep.ok
    assert rep.conclusion_holds == rep.hypothesis_satisfied
    js = rep.to_json()
    assert js["proposition"] == name and js["violations"] == []


def test_verify_budget():
    with pytest.raises(BudgetExceeded):
        verify_proposition("red2-p", 7, jobs=1)
    with pytest.raises(BudgetExceeded):
        verify_proposition("red2-p", 3, budget=100, jobs=1)


def test_verify_unknown():
    assert "red2-p" in PROPOSITIONS
    with pytest.raises(ValueError):
        verify_proposition("nope", 3, jobs=1)
