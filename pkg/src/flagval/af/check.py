"""check_af and the rank-2 / rank-3 restriction sweeps it relies on."""

import itertools

import numpy as np

from ..errors import InvarianceFailure
from ..functions import FullTable, as_certifiable, check_invariance
from ..lattice import Subgroup, primitive_part
from .peel import mask_subgroup, norm_order, peel_projective, peel_window, projective_af, span_until
from .rank2 import projective_witness, window_witness
from .verdicts import Certified, Filtration, Refuted

GENERATOR_BOX = 2


def sorted_window(f, window=None):
    window = window or f.window
    pts = window.points(f.rank)
    pts = pts[norm_order(pts)]
    return window, pts, f.codes(pts)


def check_af(f, window=None, exceptional=True):
    """AF verdict for f: Certified, Refuted or (rank 3) Exceptional."""
    f = as_certifiable(f)
    bad = check_invariance(f, window)
    if bad is not None:
        raise InvarianceFailure("f(%d*a) != f(a) at a=%r" % bad, witness=bad)
    if isinstance(f, FullTable):
        space = f.space
        layers, failure = peel_projective(space, f.point_codes, len(f.labels))
        if failure is None:
            return Certified(Filtration([(mask_subgroup(space, m), f.labels[c]) for m, c in layers]))
        return _localize_projective(f, failure, exceptional)
    window, pts, codes = sorted_window(f, window)
    layers, failure = peel_window(f.lattice, pts, codes, len(f.labels))
    if failure is None:
        return Certified(Filtration([(s, f.labels[c]) for s, c in layers], window), window)
    return _localize_window(f, failure, pts, codes, window, exceptional)


def _localize_projective(f, failure, exceptional):
    space = f.space
    mask = failure[0]
    dim = space.dimension(mask)
    if dim >= 2:
        for line in space.lines():
            if line & mask == line and not projective_af(space, f.point_codes, line):
                _, fail2 = peel_projective(space, f.point_codes, len(f.labels), mask=line)
                return Refuted(projective_witness(f, fail2))
        if dim == 2 and exceptional:
            from .rank3 import match_exceptional_projective
            exc = match_exceptional_projective(f, mask)
            if exc is not None:
                return exc
        if dim >= 3:
            for plane in space.planes():
                if plane & mask == plane and not projective_af(space, f.point_codes, plane):
                    _, fail3 = peel_projective(space, f.point_codes, len(f.labels), mask=plane)
                    return _localize_projective(f, fail3, exceptional)
    return Refuted(projective_witness(f, failure))


def _localize_window(f, failure, pts, codes, window, exceptional):
    sub = failure[0]
    if sub.rank >= 3:
        bad = first_bad_rank2(f, sub, pts, codes)
        if bad is not None:
            return Refuted(bad[1], window)
        if sub.rank == 3 and exceptional:
            from .rank3 import match_exceptional_window
            exc = match_exceptional_window(f, sub, pts, codes, window)
            if exc is not None:
                return exc
    return Refuted(window_witness(f, failure, pts), window)


def small_generators(sub, pts, box=GENERATOR_BOX):
    """Primitive window points of `sub` within the generator box, one per sign class."""
    sel = pts[(np.abs(pts).max(axis=1) <= box) & sub.contains_array(pts)]
    out, seen = [], set()
    for v in sel:
        t = tuple(int(x) for x in v)
        try:
            pp = primitive_part(t)
        except ValueError:
            continue
        if pp != t:
            continue
        key = max(t, tuple(-x for x in t))
        if key not in seen:
            seen.add(key)
            out.append(t)
    return out


def rank2_sublattices(sub, pts, box=GENERATOR_BOX):
    """Rank-2 subgroups of `sub` spanned by pairs of small window vectors (deduplicated)."""
    gens = small_generators(sub, pts, box)
    seen = {}
    for a, b in itertools.combinations(gens, 2):
        s = Subgroup.span(sub.parent, [a, b])
        if s.rank == 2:
            seen.setdefault(s, None)
    return list(seen)


def rank3_sublattices(sub, pts, box=GENERATOR_BOX):
    gens = small_generators(sub, pts, box)
    seen = {}
    for a, b, c in itertools.combinations(gens, 3):
        s = Subgroup.span(sub.parent, [a, b, c])
        if s.rank == 3:
            seen.setdefault(s, None)
    return list(seen)


def sublattice_peel(f, L, pts, codes):
    sel = L.contains_array(pts)
    return peel_window(f.lattice, pts[sel], codes[sel], len(f.labels)), pts[sel]


def first_bad_rank2(f, sub, pts, codes, box=GENERATOR_BOX):
    """First rank-2 subgroup (in sweep order) whose restriction is refuted, with its witness."""
    for L in rank2_sublattices(sub, pts, box):
        (layers, failure), lp = sublattice_peel(f, L, pts, codes)
        if failure is not None:
            return L, window_witness(f, failure, lp)
    return None


def all_rank2_af(f, window=None, box=GENERATOR_BOX):
    """None if every rank-2 restriction within the window is AF, else (subgroup, witness)."""
    f = as_certifiable(f)
    if isinstance(f, FullTable):
        space = f.space
        for line in space.lines():
            if not projective_af(space, f.point_codes, line):
                _, fail = peel_projective(space, f.point_codes, len(f.labels), mask=line)
                return mask_subgroup(space, line), projective_witness(f, fail)
        return None
    window, pts, codes = sorted_window(f, window)
    return first_bad_rank2(f, f.lattice.whole(), pts, codes, box)


def verify_witness(f, w):
    """True iff the witness re-evaluates to a genuine obstruction to the AF property."""
    kind = w["kind"]
    q = f.q
    if kind == "triple":
        a, b, s = (np.array(w[k], dtype=np.int64) for k in ("a", "b", "sum"))
        t = a + b
        if q:
            t %= q
            s %= q
        if (t != s).any():
            return False
        c = f.codes(np.array([a, b, s]))
        return len(set(c.tolist())) == 3
    if kind == "cover":
        sub = w["subgroup"]
        covers = w["covers"]
        if set(covers) != set(f.labels):
            return False
        for label, vecs in covers.items():
            if not vecs:
                return False
            V = np.array(vecs, dtype=np.int64)
            if not sub.contains_array(V).all():
                return False
            if (f.codes(V) == f.labels.index(label)).any():
                return False
            if Subgroup.span(sub.parent, [tuple(int(x) for x in v) for v in vecs]) != sub:
                return False
        return True
    if kind == "cycle":
        from .order import tilde_greater
        chain = [w["a"], w["b"], w["a2"], w["b2"], w["a"]]
        return all(tilde_greater(f, x, y) for x, y in zip(chain, chain[1:]))
    raise ValueError("unknown witness kind %r" % kind)


__all__ = ["check_af", "all_rank2_af", "verify_witness", "rank2_sublattices", "span_until"]
