"""Pairs of Z/2-functions on P^2 whose image sits in three points of the affine plane.

Points are labelled by their image: 0 for p12 = (0,0), 1 for p13 = (1,0)
and 2 for p23 = (0,1). Then f1 is the indicator of P13, f2 that of P23 and
f3 = f1 + f2 that of P13 u P23. A line is of type T_i when its image avoids
p_jk; the function constant on T_i-lines is the indicator of P_jk, so
T_1 <-> f2, T_2 <-> f1 and T_3 <-> f3.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import HypothesisFailure
from ..af.peel import projective_af

NAMES = ("f1", "f2", "f3")
# label sets that make up the 1-locus of f1, f2, f3
ONES = ((1,), (2,), (1, 2))
# lines of type T_i avoid label MISSING[i]; the function constant on them
MISSING = {1: 2, 2: 1, 3: 0}
CONSTANT_ON = {1: "f2", 2: "f1", 3: "f3"}
POINT_NAMES = {0: "P12", 1: "P13", 2: "P23"}


def line_matrix(space):
    """(lines, points) 0/1 incidence matrix."""
    lines = space.lines()
    M = np.zeros((len(lines), space.size), dtype=np.int64)
    for i, m in enumerate(lines):
        M[i, space.mask_points(m)] = 1
    return M


def batch_analysis(space, L):
    """Vectorized analysis of labelings L (m, points) with entries in {0, 1, 2}.

    Returns (admissible, af, present): admissible[r] says every line sees at
    most two labels, af[r, i] says f_{i+1} is AF on every line (a Z/2
    function on a line is AF iff it is constant off at most one point) and
    present[r, l] is the bitmask of labels seen on line l.
    """
    L = np.asarray(L)
    inc = line_matrix(space).T  # (points, lines)
    q = space.q
    present = np.zeros((len(L), inc.shape[1]), dtype=np.int64)
    for lab in range(3):
        hit = (L == lab).astype(np.int64) @ inc
        present |= (hit > 0).astype(np.int64) << lab
    admissible = (present != 7).all(axis=1)
    af = np.zeros((len(L), 3), dtype=bool)
    for i, ones in enumerate(ONES):
        cnt = np.isin(L, ones).astype(np.int64) @ inc
        ok = (cnt <= 1) | (cnt >= q)
        af[:, i] = ok.all(axis=1)
    return admissible, af, present


def batch_predictions(space, L, present, af):
    """Rows where a prediction of the degenerate cases fails.

    An empty P_jk makes the matching function constant; when all three point
    classes occur, a single line of type T_j makes the function constant on
    T_j-lines AF everywhere.
    """
    bad = np.zeros(len(L), dtype=bool)
    full = np.ones(len(L), dtype=bool)
    for lab, fn in ((0, 2), (1, 0), (2, 1)):
        empty = ~(L == lab).any(axis=1)
        full &= ~empty
        bad |= empty & ~af[:, fn]
    for j, miss in MISSING.items():
        lines_j = ((present >> miss) & 1) == 0
        one = full & (lines_j.sum(axis=1) == 1)
        fn = NAMES.index(CONSTANT_ON[j])
        bad |= one & ~af[:, fn]
    return bad


@dataclass
class ThreePointResult:
    which: list
    point_counts: dict
    line_types: dict
    predictions: list = field(default_factory=list)
    kind: str = "three-point"

    def to_json(self):
        return {"kind": self.kind, "whichAF": self.which, "points": self.point_counts,
                "lineTypes": self.line_types, "predictions": self.predictions}


def labels_of(f1, f2):
    if f1.q != f2.q or f1.rank != 3 or f2.rank != 3:
        raise ValueError("three-point instances live on P^2(F_q)")
    a = np.array([int(v) % 2 for v in f1.point_values()])
    b = np.array([int(v) % 2 for v in f2.point_values()])
    if ((a == 1) & (b == 1)).any():
        i = int(np.nonzero((a == 1) & (b == 1))[0][0])
        raise HypothesisFailure("image contains (1,1) at %r" % (f1.space.points[i],),
                                witness=f1.space.points[i])
    return np.where(a == 1, 1, np.where(b == 1, 2, 0))


def three_point_analysis(f1, f2):
    """Which of f1, f2, f3 = f1 + f2 are AF on every line of P^2."""
    space = f1.space
    L = labels_of(f1, f2)
    for m in space.lines():
        if len(set(L[space.mask_points(m)].tolist())) == 3:
            raise HypothesisFailure("a line meets all three image points",
                                    witness=[space.points[i] for i in space.mask_points(m)])
    which = []
    for name, ones in zip(NAMES, ONES):
        codes = np.isin(L, ones).astype(np.int64)
        if all(projective_af(space, codes, m) for m in space.lines()):
            which.append(name)
    counts = {POINT_NAMES[k]: int((L == k).sum()) for k in range(3)}
    types = {}
    for j, miss in MISSING.items():
        types["T%d" % j] = sum(1 for m in space.lines() if miss not in set(L[space.mask_points(m)].tolist()))
    preds = []
    for lab, fn in ((0, "f3"), (1, "f1"), (2, "f2")):
        if counts[POINT_NAMES[lab]] == 0:
            preds.append({"reason": "%s empty" % POINT_NAMES[lab], "constant": fn, "holds": fn in which})
    for j in (1, 2, 3):
        if min(counts.values()) > 0 and types["T%d" % j] == 1:
            fn = CONSTANT_ON[j]
            preds.append({"reason": "single T%d line" % j, "af": fn, "holds": fn in which})
    return ThreePointResult(which, counts, types, preds)
