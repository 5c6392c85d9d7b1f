"""Reduction of the value set to Z/2 and Z/4."""

from dataclasses import dataclass

from ..functions import as_certifiable, postcompose
from .check import check_af
from .rank2 import find_triple
from .verdicts import Certified


@dataclass
class AllReductionsAF:
    tried: int
    kind: str = "all-reductions-af"

    def to_json(self):
        return {"kind": self.kind, "tried": self.tried}


@dataclass
class Counterexample:
    h: dict
    target: str  # "Z/2" or "Z/4"
    verdict: object
    kind: str = "counterexample"

    def to_json(self):
        from .verdicts import _label
        return {"kind": self.kind, "target": self.target,
                "h": [[_label(k), v] for k, v in self.h.items()],
                "verdict": self.verdict.to_json()}


def set_partitions(items, max_blocks):
    """Set partitions as block-index lists (restricted growth strings), block count <= max_blocks."""
    n = len(items)
    out = []

    def grow(prefix, top):
        if len(prefix) == n:
            out.append(list(prefix))
            return
        for b in range(min(top + 2, max_blocks)):
            grow(prefix + [b], max(top, b))

    if n:
        grow([0], 0)
    return out


def _triple_h(f, S, window):
    """The map sending f(a), f(b), f(a+b) to 0, 1, 2 (other values to 3) for a violating triple."""
    if len(S) < 3:
        return None
    pts = (window or f.window).points(f.rank) if not f.q else f.space.all_vectors()
    from .peel import norm_order
    import numpy as np
    P = np.asarray(pts, dtype=np.int64)
    P = P[norm_order(P)]
    tri = find_triple(f, P, limit=200)
    if tri is None:
        return None
    va, vb, vs = (f.labels[f.code(v)] for v in tri)
    return {s: {va: 0, vb: 1, vs: 2}.get(s, 3) for s in S}


def reduce_value_set(f, window=None):
    """First h: S -> Z/2 or Z/4 with h o f not certified, else AllReductionsAF.

    Order: the triple-separating map to Z/4 (when a triple exists), then
    every non-constant map to Z/2 up to swapping 0 and 1, then (|S| <= 8)
    maps to Z/4 with 3 or 4 distinct values, up to relabeling of Z/4.
    """
    f = as_certifiable(f)
    if window is not None and not f.q and hasattr(f, "with_window"):
        f = f.with_window(window)
    S = [f.labels[c] for c in sorted(f.attained_codes())]
    tried = 0

    def attempt(h, target):
        nonlocal tried
        tried += 1
        g = postcompose(h, f)
        v = check_af(g)
        if not isinstance(v, Certified):
            return Counterexample(h, target, v)
        return None

    h = _triple_h(f, S, window)
    if h is not None:
        out = attempt(h, "Z/4")
        if out is not None:
            return out
    for blocks in set_partitions(S, 2):
        if max(blocks) == 1:
            out = attempt(dict(zip(S, blocks)), "Z/2")
            if out is not None:
                return out
    if len(S) <= 8:
        for blocks in set_partitions(S, 4):
            if max(blocks) >= 2:
                out = attempt(dict(zip(S, blocks)), "Z/4")
                if out is not None:
                    return out
    return AllReductionsAF(tried)
