"""The order >_f defined by an invariant function whose rank-2 restrictions are AF.

For distinct values a >~ b means f(a + b) = f(a): a is the generic one in
<a, b>. Equal values are compared through a separator c of the other value
with a >~ c >~ b. The =_f classes are the classes of elements with the same
set of elements above them.

Layers are read off as A^alpha = span{x <=_f alpha}: the elements that are
at most as generic as alpha. (With the opposite inequality the sets would be
unions of the shallow layers, which are not subgroups.)
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import Rank2Failure, UnhandledConfiguration
from ..functions import FullTable, as_certifiable
from ..lattice import Subgroup
from .peel import norm_order
from .verdicts import Filtration


def tilde_greater(f, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    s = a + b
    if f.q:
        s %= f.q
    if not s.any():
        return False
    ca, cb, cs = f.codes(np.array([a, b, s]))
    return ca != cb and cs == ca


@dataclass
class OrderRelation:
    points: np.ndarray
    codes: np.ndarray
    greater: np.ndarray  # greater[i, j]: points[i] >_f points[j]
    tilde: np.ndarray
    classes: list  # lists of point indices, most generic class first
    labels: tuple
    window: object = None
    separators: dict = field(default_factory=dict)

    def index(self, v):
        t = tuple(int(x) for x in v)
        return self._index[t]

    def __post_init__(self):
        self._index = {tuple(int(x) for x in p): i for i, p in enumerate(self.points)}
        self.class_of = np.empty(len(self.points), dtype=np.int64)
        for ci, members in enumerate(self.classes):
            self.class_of[members] = ci

    def compare(self, a, b):
        """1 if a > b, -1 if b > a, 0 if a =_f b."""
        i, j = self.index(a), self.index(b)
        if self.greater[i, j]:
            return 1
        if self.greater[j, i]:
            return -1
        return 0

    def separator(self, a, b):
        """Smallest-norm c of the other value with a >~ c >~ b (None if values differ)."""
        i, j = self.index(a), self.index(b)
        return self._separator(i, j)

    def _separator(self, i, j):
        if self.codes[i] != self.codes[j]:
            return None
        hits = np.nonzero(self.tilde[i] & self.tilde[:, j])[0]
        if not len(hits):
            return None
        return tuple(int(x) for x in self.points[hits[0]])

    def class_values(self):
        return [self.labels[int(self.codes[c[0]])] for c in self.classes]


@dataclass
class Contradiction:
    """a >~ c >~ b >~ c2 >~ a with f(a) = f(b) != f(c) = f(c2)."""

    cycle: dict
    kind: str = "contradiction"

    def to_json(self):
        from .verdicts import witness_json
        return {"kind": self.kind, "witness": witness_json(self.cycle)}


def _domain(f, window):
    if isinstance(f, FullTable):
        space = f.space
        pts = np.array(space.points, dtype=np.int64)
        return pts, f.point_codes.copy(), None
    window = window or f.window
    pts = window.points(f.rank)
    pts = pts[norm_order(pts)]
    return pts, f.codes(pts), window


def _tilde_matrix(f, pts, codes):
    m, n = pts.shape
    S = (pts[:, None, :] + pts[None, :, :]).reshape(-1, n)
    if f.q:
        S %= f.q
    nz = S.any(axis=1)
    sc = np.full(len(S), -1, dtype=np.int64)
    sc[nz] = f.codes(S[nz])
    sc = sc.reshape(m, m)
    differ = codes[:, None] != codes[None, :]
    return differ & (sc == codes[:, None])


def build_order(f, window=None, check_rank2=True):
    """OrderRelation, or Contradiction carrying a 4-cycle with separators."""
    from .check import all_rank2_af
    f = as_certifiable(f)
    if check_rank2:
        bad = all_rank2_af(f, window)
        if bad is not None:
            raise Rank2Failure("rank-2 restriction to %r is not AF" % (bad[0].gens,), witness=bad[1])
    pts, codes, window = _domain(f, window)
    T = _tilde_matrix(f, pts, codes)
    Tf = T.astype(np.float32)
    via = (Tf @ Tf) > 0
    same = codes[:, None] == codes[None, :]
    sep = via & same
    both = sep & sep.T
    if both.any():
        i, j = np.argwhere(both)[0]
        c = np.nonzero(T[i] & T[:, j])[0][0]
        c2 = np.nonzero(T[j] & T[:, i])[0][0]
        vec = lambda k: tuple(int(x) for x in pts[k])
        return Contradiction({"kind": "cycle", "a": vec(i), "b": vec(c), "a2": vec(j), "b2": vec(c2),
                              "values": [f.labels[int(codes[k])] for k in (i, c, j, c2)]})
    G = T | sep
    Gf = G.astype(np.float32)
    if ((Gf @ Gf > 0) & ~G).any():
        i, j = np.argwhere((Gf @ Gf > 0) & ~G)[0]
        raise UnhandledConfiguration(
            "order is not transitive at %r > ? > %r" % (tuple(pts[i]), tuple(pts[j])),
            witness=(tuple(int(x) for x in pts[i]), tuple(int(x) for x in pts[j])))
    # =_f classes: identical columns (same elements above)
    groups = {}
    for j in range(len(pts)):
        groups.setdefault(G[:, j].tobytes(), []).append(j)
    classes = sorted(groups.values(), key=lambda c: (int(G[:, c[0]].sum()), c[0]))
    rel = OrderRelation(pts, codes, G, T, classes, f.labels, window)
    # separators for the comparisons between class representatives
    reps = [c[0] for c in classes]
    for x in range(len(reps)):
        for y in range(x + 1, len(reps)):
            i, j = reps[x], reps[y]
            if codes[i] == codes[j] and G[i, j]:
                rel.separators[(tuple(int(v) for v in pts[i]), tuple(int(v) for v in pts[j]))] = \
                    rel._separator(i, j)
    return rel


def filtration_from_order(f, rel):
    """Layers A^alpha = span{x <=_f alpha}, most generic first."""
    G = rel.greater
    layers = []
    lattice = f.lattice
    for members in rel.classes:
        a = members[0]
        below = np.nonzero(G[a] | (rel.class_of == rel.class_of[a]))[0]
        if f.q:
            space = f.space
            mask = space.closure(space.mask_of([int(i) for i in below]))
            from .peel import mask_subgroup
            sub = mask_subgroup(space, mask)
        else:
            sub = Subgroup.span(lattice, [tuple(int(x) for x in rel.points[i]) for i in below])
        layers.append((sub, rel.labels[int(rel.codes[a])]))
    return Filtration(layers, rel.window)
