"""Rank-3 reduction: special bases and the two exceptional patterns."""

import itertools

import numpy as np

from ..errors import Rank2Failure, WindowTooShallow
from ..functions import FullTable, as_certifiable
from ..lattice import Window
from .examples import FANO_TRIANGLE
from .verdicts import Certified, Exceptional

E2 = (0, 1, 0)


def _xor(*vs):
    return tuple(sum(x) % 2 for x in zip(*vs))


def fano_basis_mod2(triangle):
    """(e1, e2, e3) mod 2 for minority points P1, P2, P3 = e1+e3, e2+e3, e1+e2+e3."""
    P1, P2, P3 = triangle
    return [_xor(P2, P3), _xor(P1, P3), _xor(P1, P2, P3)]


def best_fano_basis(triangle):
    # the labelling of the triangle only swaps e1 and e2; prefer the one closest to the identity
    cands = [fano_basis_mod2(t) for t in itertools.permutations(triangle)]
    return min(cands, key=lambda B: (sum(map(sum, B)), [tuple(-x for x in r) for r in B]))


def collinear2(pts):
    return not any(_xor(*pts))


def lift_unimodular(M, m):
    """Integer matrix congruent to M mod m with determinant +-1 (small entries first)."""
    M = np.asarray(M, dtype=np.int64) % m
    choices = []
    for x in M.flatten():
        x = int(x)
        c = sorted({x, x - m, x + m} if x == 0 else {x, x - m}, key=lambda t: (abs(t), -t))
        choices.append(c)
    combos = np.array(list(itertools.product(*choices)), dtype=np.int64)
    mats = combos.reshape(-1, 3, 3)
    dets = np.rint(np.linalg.det(mats)).astype(np.int64)
    hits = np.nonzero(np.abs(dets) == 1)[0]
    if not len(hits):
        return None
    norms = np.abs(combos).sum(axis=1)
    best = hits[np.argmin(norms[hits])]
    return mats[best]


def _adjugate(B):
    d = int(round(np.linalg.det(B)))
    return np.rint(np.linalg.inv(B) * d).astype(np.int64), d


def _inverse_mod(B, m):
    """Inverse of an integer 3x3 matrix modulo m (None if the determinant is not a unit)."""
    adj, d = _adjugate(B)
    try:
        dinv = pow(d % m, -1, m)
    except ValueError:
        return None
    return (adj * dinv) % m


def _pattern_codes(prim, zero, one, mod4):
    """Pattern value on primitive coordinates (only their residues mod 4 matter)."""
    b = prim % 2
    tri = np.zeros(len(prim), dtype=bool)
    for t in FANO_TRIANGLE:
        tri |= (b == t).all(axis=1)
    out = np.where(tri, zero, one)
    if mod4:
        e2 = (b == E2).all(axis=1)
        out[e2] = np.where(prim[e2, 0] % 4 == 0, zero, one)
    return out


def match_exceptional_projective(f, mask):
    """Fano check on a plane of P(F_2^n); returns Exceptional or None."""
    space = f.space
    if space.q != 2:
        return None
    idx = space.mask_points(mask)
    codes = [int(f.point_codes[i]) for i in idx]
    vals = sorted(set(codes))
    if len(vals) != 2:
        return None
    for z in vals:
        tri = [space.points[i] for i, c in zip(idx, codes) if c == z]
        if len(tri) == 3 and not collinear2(tri):
            basis = best_fano_basis(tri)
            return Exceptional("fano", basis, None, f.labels[z], mask_sub(space, mask))
    return None


def mask_sub(space, mask):
    from .peel import mask_subgroup
    return mask_subgroup(space, mask)


def match_exceptional_window(f, sub, pts, codes, window):
    """Recognize the Fano or Mod4 pattern on the rank-3 subgroup `sub` of a Z-lattice."""
    sel = sub.contains_array(pts)
    P, C = pts[sel], codes[sel]
    if len(set(C.tolist())) != 2 or sub.rank != 3:
        return None
    coords = sub.coordinates_array(P)
    g = np.gcd.reduce(np.abs(coords), axis=1)
    prim = coords // g[:, None]
    keys = [tuple(r) for r in (prim % 2)]
    seen = {}
    for k, c in zip(keys, C.tolist()):
        seen.setdefault(k, set()).add(c)
    if len(seen) != 7:
        return None
    split = [k for k, s in seen.items() if len(s) > 1]
    single = {k: next(iter(s)) for k, s in seen.items() if len(s) == 1}
    vals = sorted(set(C.tolist()))
    E = sub.embedding_matrix()

    def finish(kind, M, m, zero, one):
        # M: rows are the new basis mod m, in coordinates of sub
        inv = _inverse_mod(M, m)
        want = _pattern_codes(prim @ inv % m, zero, one, kind == "mod4")
        if (want != C).any():
            return None
        B = lift_unimodular(M, m)
        if B is None:
            return None
        basis = [tuple(int(x) for x in row) for row in B @ E]
        return Exceptional(kind, basis, window, f.labels[zero], sub)

    if not split:
        for z in vals:
            tri = sorted(k for k, c in single.items() if c == z)
            if len(tri) == 3 and not collinear2(tri):
                one = [v for v in vals if v != z][0]
                out = finish("fano", np.array(best_fano_basis(tri)), 2, z, one)
                if out is not None:
                    return out
        return None
    if len(split) != 1:
        return None
    s = split[0]
    for z in vals:
        one = [v for v in vals if v != z][0]
        tri = sorted(k for k, c in single.items() if c == z)
        if len(tri) != 3 or collinear2(tri):
            continue
        for P1, P2, P3 in itertools.permutations(tri):
            if P1 > P3 or _xor(P1, P3) != s:
                continue
            for first, third in ((P1, P3), (P3, P1)):
                base = np.array(fano_basis_mod2((first, P2, third)), dtype=np.int64)
                for delta in itertools.product((0, 1), repeat=9):
                    M4 = (base + 2 * np.array(delta).reshape(3, 3)) % 4
                    out = finish("mod4", M4, 4, z, one)
                    if out is not None:
                        return out
    return None


def _sign_classes(P):
    """Primitive points up to sign, one rep each, ordered by norm then closeness to e1, e2, ..."""
    out, seen = [], set()
    for v in P:
        t = tuple(int(x) for x in v)
        if np.gcd.reduce(np.abs(v)) != 1:
            continue
        key = max(t, tuple(-x for x in t))
        if key not in seen:
            seen.add(key)
            out.append(key)
    out.sort(key=lambda t: (max(abs(x) for x in t), sum(abs(x) for x in t), tuple(-x for x in t)))
    return out


def detect_special_basis(f, window=None):
    """(a1, a2, b1) with a1, a2, a1+b1, a2+b1 in one value class and b1 in the other."""
    f = as_certifiable(f)
    if f.rank != 3:
        raise ValueError("special bases live on rank-3 groups")
    window = window or f.window
    if window.depth < 2:
        raise WindowTooShallow("special basis search needs window depth >= 2")
    vals = sorted(f.attained_codes())
    if len(vals) != 2:
        return None
    box = window.box // 2
    pts = Window(box, window.depth).points(3) if box >= 1 else window.points(3)
    reps = _sign_classes(pts)
    R = np.array(reps, dtype=np.int64)
    codes = f.codes(R)
    for bval in vals:
        aval = [v for v in vals if v != bval][0]
        for b1, cb in zip(R, codes):
            if cb != bval:
                continue
            cand = np.vstack([R, -R])
            ok = f.codes(cand) == aval
            shifted = cand + b1
            nz = shifted.any(axis=1)
            ok &= nz
            ok[nz] &= f.codes(shifted[nz]) == aval
            A = cand[ok]
            if len(A) < 2:
                continue
            X = np.cross(A, b1)
            D = A @ X.T
            hit = np.argwhere(np.abs(np.triu(D, 1)) == 1)
            if len(hit):
                i, j = hit[0]
                return (tuple(int(x) for x in A[i]), tuple(int(x) for x in A[j]),
                        tuple(int(x) for x in b1))
    return None


def rank3_reduce(f, window=None):
    from .check import all_rank2_af, check_af
    f = as_certifiable(f)
    if f.rank != 3:
        raise ValueError("rank3_reduce needs a rank-3 group")
    bad = all_rank2_af(f, window)
    if bad is not None:
        raise Rank2Failure("rank-2 restriction to %r is not AF" % (bad[0].gens,), witness=bad[1])
    verdict = check_af(f, window)
    if isinstance(f, FullTable) or len(f.attained_codes()) != 2:
        return verdict
    if isinstance(verdict, Certified):
        verdict.basis = detect_special_basis(f, window)
    return verdict

