"""Rank-2 classification: constant, constant off a cyclic subgroup, or a staircase."""

import numpy as np

from ..errors import WindowTooShallow
from ..functions import FullTable, as_certifiable
from ..lattice import Subgroup, is_prime
from .peel import mask_subgroup, norm_order, peel_projective, peel_window
from .verdicts import Filtration, NotAFResult, Rank2Class


def classify_rank2(f, window=None):
    f = as_certifiable(f)
    if f.rank != 2:
        raise ValueError("classify_rank2 needs a rank-2 domain")
    if isinstance(f, FullTable):
        return _classify_projective(f)
    window = window or f.window
    pts = window.points(2)
    pts = pts[norm_order(pts)]
    codes = f.codes(pts)
    return classify_points(f, f.lattice.whole(), pts, codes, window)


def _classify_projective(f):
    space = f.space
    layers, failure = peel_projective(space, f.point_codes, len(f.labels))
    if failure is not None:
        return NotAFResult(projective_witness(f, failure))
    filt = Filtration([(mask_subgroup(space, m), f.labels[c]) for m, c in layers])
    if len(layers) == 1:
        return Rank2Class("constant", f.labels[layers[0][1]], filtration=filt)
    (m1, c1) = layers[1]
    point = space.points[space.mask_points(m1)[0]]
    return Rank2Class("off-subgroup", f.labels[layers[0][1]], f.labels[c1],
                      direction=point, filtration=filt)


def classify_points(f, ambient, pts, codes, window):
    """Classify f on the rank-2 subgroup spanned by `pts` (norm-ordered, ambient coordinates)."""
    lattice = ambient.parent
    layers, failure = peel_window(lattice, pts, codes, len(f.labels))
    if failure is not None:
        return NotAFResult(window_witness(f, failure, pts))
    filt = Filtration([(s, f.labels[c]) for s, c in layers], window)
    top = layers[0][0]
    if len(layers) == 1:
        return Rank2Class("constant", f.labels[layers[0][1]], filtration=filt)
    L1 = layers[1][0]
    g0, g1 = f.labels[layers[0][1]], f.labels[layers[1][1]]
    if L1.rank < top.rank:
        direction = L1.gens[0]
        return Rank2Class("off-subgroup", g0, g1, direction=direction, filtration=filt)
    return _typical(f, top, layers, filt, pts, codes, window)


def _scaled(sub, factor):
    return Subgroup(sub.parent, tuple(tuple(factor * x for x in g) for g in sub.gens))


def _divided(sub, p):
    if any(x % p for g in sub.gens for x in g):
        return None
    return Subgroup(sub.parent, tuple(tuple(x // p for x in g) for g in sub.gens))


def _relative_index(big, small):
    """[big : small] for full-rank-in-big subgroups, via covolumes of the row bases."""
    def covol(s):
        M = np.array(s.gens, dtype=object)
        G = M.dot(M.T)
        from ..lattice import det
        return det([[int(x) for x in row] for row in G])
    a, b = covol(big), covol(small)
    if a == 0 or b % a:
        return None
    r = b // a
    s = int(round(r ** 0.5))
    while s * s > r:
        s -= 1
    while (s + 1) * (s + 1) <= r:
        s += 1
    return s if s * s == r else None


def _typical(f, top, layers, filt, pts, codes, window):
    shallow = "staircase needs two full periods within the window"
    if window.depth < 2 or len(layers) < 4:
        raise WindowTooShallow(shallow)
    L1, L2, L3 = layers[1][0], layers[2][0], layers[3][0]
    p = _relative_index(L1, L2)
    if p is None or not is_prime(p):
        raise WindowTooShallow(shallow)
    C = _divided(L2, p)
    if C is None or not C.contains_subgroup(L1) or L3 != _scaled(L1, p):
        raise WindowTooShallow(shallow)
    idx = _relative_index(top, C)
    k = 0
    while idx and idx % p == 0:
        idx //= p
        k += 1
    if idx != 1:
        raise WindowTooShallow(shallow)
    c0, c1 = layers[0][1], layers[1][1]
    if any(c not in (c0, c1) for _, c in layers) or c0 == c1:
        raise WindowTooShallow(shallow)
    # check the staircase prediction on every window point
    inside = top.contains_array(pts)
    want = np.full(len(pts), c0)
    scale = 1
    while True:
        Cn = _scaled(C, scale)
        in_c = Cn.contains_array(pts)
        if not in_c.any():
            break
        in_c1 = _scaled(L1, scale).contains_array(pts)
        want[in_c] = c0
        want[in_c1] = c1
        scale *= p
    if (want[inside] != codes[inside]).any():
        raise WindowTooShallow(shallow)
    pair = sorted([c0, c1])
    phase = pair.index(c0)
    return Rank2Class("typical", f.labels[c0], f.labels[c1], p=p, k=k, phase=phase, C=C,
                      filtration=filt)


def find_triple(f, vectors, limit=80):
    """Lexicographically first a, b (norm order) with f(a), f(b), f(a+b) pairwise distinct."""
    V = np.asarray(vectors[:limit], dtype=np.int64)
    if len(V) < 2:
        return None
    ca = f.codes(V)
    if len(set(ca.tolist())) < 2:
        return None
    q = f.q
    for i in range(len(V)):
        for j in range(len(V)):
            if ca[i] == ca[j]:
                continue
            s = V[i] + V[j]
            if q:
                s = s % q
            if not s.any():
                continue
            cs = int(f.codes(s[None, :])[0])
            if cs != ca[i] and cs != ca[j]:
                return (tuple(int(x) for x in V[i]), tuple(int(x) for x in V[j]),
                        tuple(int(x) for x in s))
    return None


def window_witness(f, failure, pts):
    sub, covers = failure
    inside = pts[sub.contains_array(pts)]
    tri = find_triple(f, inside)
    if tri is not None:
        return {"kind": "triple", "a": tri[0], "b": tri[1], "sum": tri[2],
                "values": [f.labels[f.code(v)] for v in tri]}
    return {"kind": "cover", "subgroup": sub,
            "covers": {f.labels[c]: v for c, v in sorted(covers.items())}}


def projective_witness(f, failure):
    space = f.space
    mask, covers = failure
    sub = mask_subgroup(space, mask)
    vecs = [v for v in space.all_vectors() if sub.contains(v)]
    tri = find_triple(f, vecs)
    if tri is not None:
        return {"kind": "triple", "a": tri[0], "b": tri[1], "sum": tri[2],
                "values": [f.labels[f.code(v)] for v in tri]}
    return {"kind": "cover", "subgroup": mask_subgroup(space, mask),
            "covers": {f.labels[c]: [space.points[i] for i in idx] for c, idx in sorted(covers.items())}}
