"""Free Z-lattices and F_q-vector spaces, their subgroups, and finite windows.

Subgroups are kept in a canonical echelon form so that two generating sets of
the same subgroup compare (and hash) equal:

* over Z, the Hermite normal form of the row lattice: pivots positive and
  strictly moving right, entries above a pivot reduced into [0, pivot);
* over F_q, the reduced row echelon form with unit pivots.
"""

from dataclasses import dataclass, field
from math import gcd
from functools import reduce
import itertools

import numpy as np


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def content(v):
    return reduce(gcd, (abs(x) for x in v), 0)


def primitive_part(v):
    c = content(v)
    if c == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(x // c for x in v)


def det(rows):
    """Exact integer determinant (small matrices, fraction-free Bareiss)."""
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class ScalarDomain:
    """Either the integers (class A_0) or the prime field F_q (class A_q)."""

    q: int = 0

    def __post_init__(self):
        if self.q and not is_prime(self.q):
            raise ValueError("q must be prime, got %d" % self.q)

    @property
    def is_integral(self):
        return self.q == 0

    @property
    def exceptional_char(self):
        # q = 2 is accepted as data only; the A_q class requires q odd.
        return self.q == 2

    def is_unit(self, n):
        if self.q == 0:
            return n != 0
        return n % self.q != 0

    def __str__(self):
        return "Z" if self.q == 0 else "F%d" % self.q


INTEGERS = ScalarDomain(0)


def PrimeField(q):
    return ScalarDomain(q)


@dataclass(frozen=True)
class Lattice:
    domain: ScalarDomain
    rank: int
    labels: tuple = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")

    @property
    def q(self):
        return self.domain.q

    def zero(self):
        return (0,) * self.rank

    def standard_basis(self):
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def reduce(self, v):
        v = tuple(int(x) for x in v)
        if len(v) != self.rank:
            raise ValueError("vector of length %d in rank-%d lattice" % (len(v), self.rank))
        if self.q:
            return tuple(x % self.q for x in v)
        return v

    def whole(self):
        return Subgroup(self, tuple(self.standard_basis()))


def hnf_rows(vectors, n):
    """Hermite normal form (row style) of the Z-span of `vectors`."""
    piv = {}
    for v in vectors:
        _hnf_insert(piv, list(v), n)
    return _hnf_finish(piv)


def _hnf_insert(piv, v, n):
    """Insert v into a pivot map col -> row; returns True if the span grew."""
    for c in range(n):
        a = v[c]
        if a == 0:
            continue
        r = piv.get(c)
        if r is None:
            if a < 0:
                v = [-x for x in v]
            piv[c] = v
            return True
        b = r[c]
        if a % b == 0:
            t = a // b
            v = [x - t * y for x, y in zip(v, r)]
            continue
        g, x, y = xgcd(b, a)
        new_r = [x * s + y * t for s, t in zip(r, v)]
        v = [(b // g) * t - (a // g) * s for s, t in zip(r, v)]
        piv[c] = new_r
        # the old row is still in the span; keep reducing the remainder
        _hnf_insert(piv, v, n)
        return True
    return False


def _hnf_finish(piv):
    cols = sorted(piv)
    rows = [list(piv[c]) for c in cols]
    for i, c in enumerate(cols):
        if rows[i][c] < 0:
            rows[i] = [-x for x in rows[i]]
        p = rows[i][c]
        for j in range(i):
            t = rows[j][c] // p
            if t:
                rows[j] = [x - t * y for x, y in zip(rows[j], rows[i])]
    return tuple(tuple(r) for r in rows)


def rref_rows(vectors, q, n):
    """Reduced row echelon form over F_q of the span of `vectors`."""
    rows = []
    pivots = []
    for v in vectors:
        v = [x % q for x in v]
        for r, c in zip(rows, pivots):
            if v[c]:
                t = v[c]
                v = [(x - t * y) % q for x, y in zip(v, r)]
        lead = next((c for c in range(n) if v[c]), None)
        if lead is None:
            continue
        inv = pow(v[lead], -1, q)
        v = [(x * inv) % q for x in v]
        for i, r in enumerate(rows):
            if r[lead]:
                t = r[lead]
                rows[i] = [(x - t * y) % q for x, y in zip(r, v)]
        rows.append(v)
        pivots.append(lead)
    order = sorted(range(len(rows)), key=lambda i: pivots[i])
    return tuple(tuple(rows[i]) for i in order)


def canonical_generators(lattice, vectors):
    vs = [lattice.reduce(v) for v in vectors]
    if lattice.q:
        return rref_rows(vs, lattice.q, lattice.rank)
    return hnf_rows(vs, lattice.rank)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of `parent`, stored by canonical generators."""

    parent: Lattice
    gens: tuple = field(default=())

    @classmethod
    def span(cls, parent, vectors):
        return cls(parent, canonical_generators(parent, vectors))

    def normalized(self):
        return Subgroup.span(self.parent, self.gens)

    @property
    def rank(self):
        return len(self.gens)

    def pivots(self):
        return [next(i for i, x in enumerate(r) if x) for r in self.gens]

    def index(self):
        """Index in the parent (None when infinite over Z)."""
        n = self.parent.rank
        if self.parent.q:
            return self.parent.q ** (n - self.rank)
        if self.rank < n:
            return None
        out = 1
        for r, c in zip(self.gens, self.pivots()):
            out *= r[c]
        return out

    def contains(self, v):
        v = list(self.parent.reduce(v))
        q = self.parent.q
        for r, c in zip(self.gens, self.pivots()):
            if q:
                t = v[c]
            else:
                if v[c] % r[c]:
                    return False
                t = v[c] // r[c]
            if t:
                v = [x - t * y for x, y in zip(v, r)]
                if q:
                    v = [x % q for x in v]
        return not any(v)

    def contains_array(self, points):
        """Vectorized membership for an (m, n) integer array."""
        R = np.array(points, dtype=np.int64, copy=True)
        if R.size == 0:
            return np.zeros(len(R), dtype=bool)
        ok = np.ones(len(R), dtype=bool)
        q = self.parent.q
        if q:
            R %= q
        for r, c in zip(self.gens, self.pivots()):
            row = np.array(r, dtype=np.int64)
            if q:
                t = R[:, c].copy()
                R = (R - t[:, None] * row) % q
            else:
                ok &= R[:, c] % r[c] == 0
                t = R[:, c] // r[c]
                R = R - t[:, None] * row
        ok &= ~R.any(axis=1)
        return ok

    def contains_subgroup(self, other):
        return all(self.contains(g) for g in other.gens)

    def is_proper_in(self, other):
        return other.contains_subgroup(self) and self != other

    def coordinates(self, v):
        """Coordinates of v in the canonical basis (v must lie in the subgroup)."""
        v = list(self.parent.reduce(v))
        q = self.parent.q
        out = []
        for r, c in zip(self.gens, self.pivots()):
            t = v[c] if q else v[c] // r[c]
            out.append(t)
            v = [x - t * y for x, y in zip(v, r)]
            if q:
                v = [x % q for x in v]
        if any(v):
            raise ValueError("vector %r not in subgroup" % (tuple(v),))
        return tuple(out)

    def coordinates_array(self, points):
        """Vectorized coordinates for an (m, n) array of members."""
        R = np.array(points, dtype=np.int64, copy=True).reshape(-1, self.parent.rank)
        q = self.parent.q
        out = np.zeros((len(R), self.rank), dtype=np.int64)
        for i, (r, c) in enumerate(zip(self.gens, self.pivots())):
            row = np.array(r, dtype=np.int64)
            t = R[:, c] % q if q else R[:, c] // r[c]
            out[:, i] = t
            R = R - t[:, None] * row
            if q:
                R %= q
        if R.any():
            raise ValueError("some points lie outside the subgroup")
        return out

    def embed(self, coords):
        out = [0] * self.parent.rank
        for t, r in zip(coords, self.gens):
            out = [x + t * y for x, y in zip(out, r)]
        return self.parent.reduce(out)

    def embedding_matrix(self):
        """(rank, n) array whose rows are the canonical generators."""
        return np.array(self.gens, dtype=np.int64).reshape(self.rank, self.parent.rank)

    def elementary_divisor_bound(self):
        """Largest elementary divisor of the generator matrix (Z, full row rank)."""
        if not self.gens:
            return 1
        from itertools import combinations
        k = self.rank
        minors = []
        for cols in combinations(range(self.parent.rank), k):
            minors.append(abs(det([[r[c] for c in cols] for r in self.gens])))
        dk = reduce(gcd, minors, 0)
        if k == 1:
            return dk
        sub = []
        for rows in combinations(range(k), k - 1):
            for cols in combinations(range(self.parent.rank), k - 1):
                sub.append(abs(det([[self.gens[i][c] for c in cols] for i in rows])))
        dk1 = reduce(gcd, sub, 0)
        return dk // dk1 if dk1 else dk

    def to_json(self):
        return [list(g) for g in self.gens]

    def __repr__(self):
        return "Subgroup(%s^%d, %s)" % (self.parent.domain, self.parent.rank, list(self.gens))


@dataclass(frozen=True)
class Window:
    """Box [-box, box]^n plus the declared p-depth of a finite description."""

    box: int
    depth: int

    def __post_init__(self):
        if self.box < 1 or self.depth < 0:
            raise ValueError("window needs box >= 1 and depth >= 0")

    def points(self, n):
        """All nonzero points of the box, lexicographic order, as an array."""
        rng = np.arange(-self.box, self.box + 1, dtype=np.int64)
        grid = np.stack(np.meshgrid(*([rng] * n), indexing="ij"), axis=-1).reshape(-1, n)
        return grid[grid.any(axis=1)]

    def half_points(self, n):
        """Nonzero box points up to sign: first nonzero coordinate positive."""
        pts = self.points(n)
        first = pts[np.arange(len(pts)), (pts != 0).argmax(axis=1)]
        return pts[first > 0]

    def contains(self, v):
        return all(abs(int(x)) <= self.box for x in v)

    def to_json(self):
        return {"box": self.box, "depth": self.depth}


def all_vectors(q, n):
    """Every vector of F_q^n in lexicographic order."""
    return [tuple(v) for v in itertools.product(range(q), repeat=n)]
