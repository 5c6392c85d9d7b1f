"""Reduction of a c-pair without AF elements to three refuted Z/2-functions.

The normal form used throughout: after an affine change over R the image of
a c-pair lies in {(0,1)} u (x-axis), so f2 is the indicator of the set D
mapping to (0,1) and f1 vanishes on D.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from ..af.check import check_af
from ..af.verdicts import Certified
from ..errors import NotACPair
from ..functions import FullTable
from .phi import PointAndLine, Ring, image_shape, line_condition, phi_image


def plane_af_batch(space, V):
    """AF test for many functions on P^2(F_q) at once (rows of V are point codes).

    A function on P^2 is AF iff some line l has f constant on the complement
    of l and constant off at most one point of l.
    """
    V = np.asarray(V)
    q = space.q
    out = np.zeros(len(V), dtype=bool)
    for m in space.lines():
        on = space.mask_points(m)
        off = [i for i in range(space.size) if i not in set(on)]
        comp = (V[:, off] == V[:, off[:1]]).all(axis=1)
        W = V[:, on]
        eq = (W[:, :, None] == W[:, None, :]).sum(axis=2)
        line_ok = eq.max(axis=1) >= q
        out |= comp & line_ok
    return out


def _components(space, D):
    """Union-find classes of points off D forced to share f1 by lines meeting D."""
    parent = list(range(space.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    dset = set(D)
    for m in space.lines():
        pts = space.mask_points(m)
        if dset & set(pts):
            rest = [i for i in pts if i not in dset]
            for a, b in zip(rest, rest[1:]):
                parent[find(a)] = find(b)
    roots = {}
    comp = np.full(space.size, -1, dtype=np.int64)
    for i in range(space.size):
        if i not in dset:
            comp[i] = roots.setdefault(find(i), len(roots))
    return comp, len(roots)


def _span_directions(p):
    return [(1, 0)] + [(l, 1) for l in range(p)]


def _pair_ok(space, F1, F2, p):
    """Rows where every nonzero element of the span of (F1, F2) over Z/p is non-AF."""
    ok = np.ones(len(F1), dtype=bool)
    for l1, l2 in _span_directions(p):
        G = (l1 * F1 + l2 * F2) % p
        zero = ~G.any(axis=1)
        ok &= zero | ~plane_af_batch(space, G)
    return ok


def search_no_af_cpairs(space, p, limit=None):
    """All normal-form c-pairs (f1, f2) on P^2(F_q) over Z/p whose span has no nonzero AF element.

    Only pairs with a non-collinear image are enumerated: a collinear image
    means some combination of f1, f2 is constant, so either the span holds a
    nonzero constant or the pair is proportional. Returns (instances
    examined, list of (f1 point values, f2 point values)).
    """
    n = space.size
    masks = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
    masks = masks[(masks.sum(axis=1) > 0) & (masks.sum(axis=1) < n)]
    # f2 itself lies in the span, so D must be non-AF
    masks = masks[~plane_af_batch(space, masks)]
    rows1, rows2 = [], []
    for F2row in masks:
        comp, k = _components(space, np.nonzero(F2row)[0].tolist())
        vals = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64).reshape(p ** k, k)
        # at least two distinct x values off D
        vals = vals[(vals != vals[:, :1]).any(axis=1)]
        F1 = np.zeros((len(vals), n), dtype=np.int64)
        off = comp >= 0
        F1[:, off] = vals[:, comp[off]]
        rows1.append(F1)
        rows2.append(np.tile(F2row, (len(F1), 1)))
    F1 = np.concatenate(rows1) if rows1 else np.zeros((0, n), dtype=np.int64)
    F2 = np.concatenate(rows2) if rows2 else np.zeros((0, n), dtype=np.int64)
    ok = _pair_ok(space, F1, F2, p) if len(F1) else np.zeros(0, dtype=bool)
    found = [(F1[i].tolist(), F2[i].tolist()) for i in np.nonzero(ok)[0]]
    if limit:
        found = found[:limit]
    return len(F1), found


@dataclass
class Reduction:
    f1: object
    f2: object
    h: dict
    verdicts: list
    kind: str = "reduction"

    def to_json(self):
        return {"kind": self.kind, "f1": list(map(int, self.f1.point_values())),
                "f2": list(map(int, self.f2.point_values())),
                "h": [[int(k), v] for k, v in sorted(self.h.items())],
                "verdicts": [v.to_json() for v in self.verdicts]}


@dataclass
class NoReduction:
    reason: str
    af_element: tuple = None
    certificate: object = None
    kind: str = "no-reduction"

    def to_json(self):
        return {"kind": self.kind, "reason": self.reason,
                "afElement": None if self.af_element is None else list(self.af_element),
                "certificate": None if self.certificate is None else self.certificate.to_json()}


def _table(space, values):
    return FullTable.from_points(space.q, space.n, [int(v) for v in values])


def _combo(ring, a, b, c, v1, v2):
    m = ring.modulus
    return [(a * x + b * y + c) % m for x, y in zip(v1, v2)]


def _maps_to_z2(values):
    """Maps h: values -> Z/2 with h(0) = 0, non-constant first."""
    vals = sorted(set(values) - {0})
    for bits in itertools.product((0, 1), repeat=len(vals)):
        if any(bits):
            h = dict(zip(vals, bits))
            if 0 in values:
                h[0] = 0
            yield h


def _try(space, ring, g1, g2, tried):
    for h in _maps_to_z2(set(g1) | set(g2)):
        a = [h.get(v, 0) for v in g1]
        b = [h.get(v, 0) for v in g2]
        c = [(x + y) % 2 for x, y in zip(a, b)]
        key = (tuple(a), tuple(b))
        if key in tried:
            continue
        tried.add(key)
        verdicts = []
        for vals in (a, b, c):
            v = check_af(_table(space, vals))
            if isinstance(v, Certified):
                break
            verdicts.append(v)
        else:
            return h, verdicts
    return None


def _proportional(g1, g2, m):
    return any(all((l * x - y) % m == 0 for x, y in zip(g1, g2)) for l in range(1, m))


def find_three_point_reduction(f1, f2, ring="Z/3"):
    """(f1', f2', h') with h'f1', h'f2' and their sum all refuted, or NoReduction."""
    if not isinstance(ring, Ring):
        ring = Ring.parse(ring)
    if ring.kind == "Q":
        raise ValueError("the reduction search needs a finite value ring")
    space = f1.space
    pm = phi_image(f1, f2, ring)
    bad = line_condition(pm)
    if bad is not None:
        raise NotACPair("line image is not collinear",
                        witness=[space.points[i] for i in space.mask_points(bad)])
    v1 = [x for x, _ in pm.images]
    v2 = [y for _, y in pm.images]
    m = ring.modulus
    coeffs = range(m) if ring.kind == "Z/p" else range(ring.p)
    # premise: no nonzero AF element in the span
    for l1, l2 in [(1, 0)] + [(l, 1) for l in coeffs]:
        g = _combo(ring, l1, l2, 0, v1, v2)
        if not any(g):
            continue
        v = check_af(_table(space, g))
        if isinstance(v, Certified):
            return NoReduction("span contains an AF element", (l1, l2), v)
    tried = set()
    candidates = []
    shape = image_shape(pm)
    if isinstance(shape, PointAndLine) and shape.line.direction is not None:
        # coordinates with the line as x-axis and d at (0, 1)
        (px, py), (dx, dy) = shape.line.point, shape.line.direction
        a, b = dy, -dx
        c = (a * px + b * py) % m
        sd = (a * shape.d[0] + b * shape.d[1] - c) % m
        inv = pow(int(sd), -1, m) if sd and np.gcd(int(sd), m) == 1 else None
        if inv is not None:
            t2 = [((a * x + b * y - c) * inv) % m for x, y in zip(v1, v2)]
            # position along the line, zero at the chosen origin
            if np.gcd(int(dx), m) == 1:
                dinv = pow(int(dx), -1, m)
                t1 = [((x - px) * dinv) % m if s == 0 else 0 for x, s in zip(v1, t2)]
            else:
                dinv = pow(int(dy), -1, m)
                t1 = [((y - py) * dinv) % m if s == 0 else 0 for y, s in zip(v2, t2)]
            candidates.append((t1, t2))
            for mu in range(1, m):
                g1 = [(mu * x + y - 1) % m for x, y in zip(t1, t2)]
                g2 = [(-y) % m for y in t2]
                candidates.append((g1, g2))
    for a1, b1, c1, a2, b2, c2 in itertools.product(coeffs, repeat=6):
        if (a1 * b2 - a2 * b1) % m == 0:
            continue
        candidates.append((_combo(ring, a1, b1, c1, v1, v2), _combo(ring, a2, b2, c2, v1, v2)))
    for g1, g2 in candidates:
        if len(set(g1)) < 2 or len(set(g2)) < 2 or _proportional(g1, g2, m):
            continue
        hit = _try(space, ring, g1, g2, tried)
        if hit is not None:
            h, verdicts = hit
            return Reduction(_table(space, g1), _table(space, g2), h, verdicts)
    return NoReduction("search exhausted without a reduction")
