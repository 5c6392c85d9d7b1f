"""The functional equation f(ma' + nb') = f(ma' + (n + km)b') on rank-2 groups."""

from dataclasses import dataclass

import numpy as np

from ..errors import BasisConditionFailure
from ..functions import as_certifiable
from ..lattice import Window
from .peel import norm_order


@dataclass
class Holds:
    pairs: int
    box: int
    kind: str = "holds"

    def to_json(self):
        return {"kind": self.kind, "pairs": self.pairs, "box": self.box}


@dataclass
class Violation:
    k: int
    m: int
    n: int
    a: tuple
    b: tuple
    kind: str = "violation"

    def to_json(self):
        return {"kind": self.kind, "k": self.k, "m": self.m, "n": self.n,
                "a": list(self.a), "b": list(self.b)}


class DenseTable:
    """Codes of a rank-2 function on the box [-B, B]^2 (code -1 at the origin)."""

    def __init__(self, f, B):
        self.B = B
        r = np.arange(-B, B + 1)
        X, Y = np.meshgrid(r, r, indexing="ij")
        P = np.stack([X.ravel(), Y.ravel()], axis=1)
        codes = np.full(len(P), -1, dtype=np.int64)
        nz = P.any(axis=1)
        codes[nz] = f.codes(P[nz])
        self.table = codes.reshape(2 * B + 1, 2 * B + 1)

    def __call__(self, X, Y):
        return self.table[X + self.B, Y + self.B]


def basis_condition(f, a, b):
    if abs(a[0] * b[1] - a[1] * b[0]) != 1:
        return "(a, b) is not a basis"
    ca, cb, cs = f.codes(np.array([a, b, (a[0] + b[0], a[1] + b[1])]))
    if len(f.attained_codes()) != 2:
        return "f must take exactly two values"
    if not (ca == cs != cb):
        return "need f(a) = f(a+b) != f(b)"
    return None


def check_functional_equation(f, basis, box=None):
    """Holds, or the first Violation(k, m, n, a', b') in enumeration order."""
    f = as_certifiable(f)
    if f.rank != 2 or f.q:
        raise ValueError("the functional equation is checked on Z^2")
    a, b = (tuple(int(x) for x in v) for v in basis)
    problem = basis_condition(f, a, b)
    if problem:
        raise BasisConditionFailure(problem, witness=(a, b))
    M = box or f.window.box
    pts = Window(M, f.window.depth).points(2)
    pts = pts[norm_order(pts)]
    # (a', b') and (-a', -b') give the same equations, so a' runs over one sign only
    half = np.array([p for p in pts if tuple(p) > tuple(-p)])
    table = DenseTable(f, 2 * M * M + M ** 3)
    ca, cb = f.codes(np.array([a, b]))
    A = half[table(half[:, 0], half[:, 1]) == ca]
    Bv = pts[table(pts[:, 0], pts[:, 1]) == cb]
    rng = np.arange(-M, M + 1)
    K, Mm, N = np.meshgrid(rng, rng[rng != 0], rng, indexing="ij")
    K, Mm, N = K.ravel(), Mm.ravel(), N.ravel()
    # small (k, m, n) first so reported violations are as short as possible
    size = np.maximum(np.maximum(abs(K), abs(Mm)), abs(N))
    order = np.lexsort((N, Mm, K, abs(K) + abs(Mm) + abs(N), size))
    K, Mm, N = K[order], Mm[order], N[order]
    pairs = 0
    for ap in A:
        S = ap[None, :] + Bv
        ok = S.any(axis=1)
        ok[ok] = table(S[ok, 0], S[ok, 1]) == ca
        for bp in Bv[ok]:
            pairs += 1
            n2 = N + K * Mm
            X1 = Mm * ap[0] + N * bp[0]
            Y1 = Mm * ap[1] + N * bp[1]
            X2 = Mm * ap[0] + n2 * bp[0]
            Y2 = Mm * ap[1] + n2 * bp[1]
            live = ((X1 != 0) | (Y1 != 0)) & ((X2 != 0) | (Y2 != 0))
            bad = live & (table(X1, Y1) != table(X2, Y2))
            if bad.any():
                i = np.nonzero(bad)[0][0]
                return Violation(int(K[i]), int(Mm[i]), int(N[i]),
                                 tuple(int(x) for x in ap), tuple(int(x) for x in bp))
    return Holds(pairs, M)
