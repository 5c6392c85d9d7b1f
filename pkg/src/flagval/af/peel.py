"""Greedy layer peeling.

On the current subgroup B pick a value g whose complement
{x in B : f(x) != g} spans a proper subgroup B1; f is then constant (= g)
on B minus B1 and we continue on B1. When no value works, no filtration
exists: any filtration of B would put the complement of its generic value
inside a proper subgroup. Restricting a filtration to a subgroup keeps it a
filtration, so the choice of g (if several work) never matters, and a
failure at any depth refutes the whole function.
"""

import numpy as np

from ..lattice import Subgroup, _hnf_finish, _hnf_insert, rref_rows


def norm_order(points):
    """Permutation sorting points by max norm, then l1 norm, then descending lex order.

    The last key puts e1, e2, ... ahead of their negatives.
    """
    P = np.asarray(points)
    keys = [tuple(-int(x) for x in row) for row in P]
    mx = np.abs(P).max(axis=1)
    l1 = np.abs(P).sum(axis=1)
    return sorted(range(len(P)), key=lambda i: (mx[i], l1[i], keys[i]))


class SpanBuilder:
    """Incremental Z-span that can stop once it reaches a target subgroup."""

    def __init__(self, lattice):
        self.lattice = lattice
        self.n = lattice.rank
        self.piv = {}
        self.used = []

    def add(self, v):
        v = [int(x) for x in v]
        if _hnf_insert(self.piv, list(v), self.n):
            self.used.append(tuple(v))
            return True
        return False

    def subgroup(self):
        return Subgroup(self.lattice, _hnf_finish(self.piv))

    def reaches(self, target):
        if len(self.piv) < target.rank:
            return False
        return self.subgroup().contains_subgroup(target)


def span_until(lattice, vectors, target):
    """Span of `vectors` (an iterable), stopping early once it contains `target`."""
    sb = SpanBuilder(lattice)
    for v in vectors:
        if sb.add(v) and sb.reaches(target):
            return target, sb.used, True
    s = sb.subgroup()
    return s, sb.used, s == target


def peel_window(lattice, points, codes, n_labels):
    """Peel a Z-window. `points` must already be in norm order.

    Returns (layers, failure); layers is a list of (Subgroup, code), failure
    is None or (Subgroup, {code: generating vectors of the complement}).
    """
    X = np.arange(len(points))
    current = Subgroup.span(lattice, lattice.standard_basis())
    sb = SpanBuilder(lattice)
    for v in points:
        if sb.add(v) and sb.reaches(current):
            break
    current = sb.subgroup()
    layers = []
    while True:
        cx = codes[X]
        present = sorted(set(int(c) for c in cx))
        if len(present) == 1:
            layers.append((current, present[0]))
            return layers, None
        covers = {}
        for g in present:
            T = X[cx != g]
            sub, used, full = span_until(lattice, points[T], current)
            if not full:
                layers.append((current, g))
                X = X[sub.contains_array(points[X])]
                current = sub
                break
            covers[g] = used
        else:
            for g in range(n_labels):
                if g not in covers:
                    _, used, _ = span_until(lattice, points[X], current)
                    covers[g] = used
            return layers, (current, covers)


def peel_projective(space, point_codes, n_labels, mask=None):
    """Peel a function on the points of P(V), V = F_q^n, given per-point codes.

    Returns (layers, failure) with layers [(mask, code)] and failure None or
    (mask, {code: generating point indices of the complement}).
    """
    vmask = {}
    for i, c in enumerate(point_codes):
        vmask[int(c)] = vmask.get(int(c), 0) | (1 << i)
    current = space.full if mask is None else mask
    layers = []
    while True:
        present = sorted(c for c, m in vmask.items() if m & current)
        if len(present) == 1:
            layers.append((current, present[0]))
            return layers, None
        for g in present:
            T = current & ~vmask[g]
            W = space.closure(T)
            if W != current:
                layers.append((current, g))
                current = W
                break
        else:
            covers = {}
            for g in range(n_labels):
                T = current & ~vmask.get(g, 0)
                covers[g] = minimal_spanning_points(space, T)
            return layers, (current, covers)


def projective_af(space, point_codes, mask=None):
    """Fast yes/no AF test on a subspace mask (used by the exhaustive sweeps)."""
    vmask = {}
    for i, c in enumerate(point_codes):
        vmask[c] = vmask.get(c, 0) | (1 << i)
    current = space.full if mask is None else mask
    while True:
        present = [c for c, m in vmask.items() if m & current]
        if len(present) <= 1:
            return True
        for g in present:
            W = space.closure(current & ~vmask[g])
            if W != current:
                current = W
                break
        else:
            return False


def minimal_spanning_points(space, mask):
    """Greedy generating subset (point indices) of the span of `mask`."""
    chosen = 0
    out = []
    span = 0
    for i in space.mask_points(mask):
        if not span >> i & 1:
            chosen |= 1 << i
            out.append(i)
            span = space.closure(chosen)
    return out


def mask_subgroup(space, mask):
    reps = [space.points[i] for i in space.mask_points(mask)]
    return Subgroup(space.lattice, rref_rows(reps, space.q, space.n))
