"""Finite projective spaces P^d(F_q) with bitmask point sets.

Point sets are Python ints used as bitsets over the point list, which keeps
the exhaustive sweeps cheap: a subspace is the bitmask of its points and the
span of a point set is memoized per mask.
"""

import itertools
from functools import lru_cache

import numpy as np

from ..lattice import Lattice, PrimeField, Subgroup, is_prime, rref_rows


class ProjectiveSpace:
    def __init__(self, q, d):
        if not is_prime(q):
            raise ValueError("q must be prime")
        if d < 0:
            raise ValueError("dimension must be nonnegative")
        self.q = q
        self.d = d
        self.n = d + 1
        self.lattice = Lattice(PrimeField(q), self.n)
        n = self.n
        # canonical representatives: first nonzero coordinate equal to 1
        self.points = [v for v in itertools.product(range(q), repeat=n)
                       if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
        self.index = {v: i for i, v in enumerate(self.points)}
        self.full = (1 << len(self.points)) - 1
        weights = np.array([q ** (n - 1 - i) for i in range(n)], dtype=np.int64)
        self._weights = weights
        vec_point = np.full(q ** n, -1, dtype=np.int64)
        for v in itertools.product(range(q), repeat=n):
            if not any(v):
                continue
            lead = v[next(i for i, x in enumerate(v) if x)]
            inv = pow(lead, -1, q)
            rep = tuple((x * inv) % q for x in v)
            vec_point[int(np.dot(v, weights))] = self.index[rep]
        self.vec_point = vec_point
        self._closure = {0: 0}
        self._lines = None

    def __repr__(self):
        return "ProjectiveSpace(q=%d, d=%d)" % (self.q, self.d)

    @property
    def size(self):
        return len(self.points)

    def point_of(self, v):
        v = tuple(int(x) % self.q for x in v)
        if not any(v):
            raise ValueError("zero vector is not a point")
        return int(self.vec_point[int(np.dot(v, self._weights))])

    def vector_index(self, v):
        return int(np.dot([int(x) % self.q for x in v], self._weights))

    def all_vectors(self):
        """Nonzero vectors of F_q^n in lexicographic (vector index) order."""
        return [v for v in itertools.product(range(self.q), repeat=self.n) if any(v)]

    def mask_points(self, mask):
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return out

    def mask_of(self, indices):
        m = 0
        for i in indices:
            m |= 1 << i
        return m

    def subspace_mask(self, rows):
        """Point mask of the span of `rows` (vectors of F_q^n)."""
        rows = rref_rows(rows, self.q, self.n)
        m = 0
        for coeffs in itertools.product(range(self.q), repeat=len(rows)):
            if not any(coeffs):
                continue
            v = [0] * self.n
            for c, r in zip(coeffs, rows):
                if c:
                    v = [(x + c * y) % self.q for x, y in zip(v, r)]
            m |= 1 << self.point_of(v)
        return m

    def closure(self, mask):
        """Smallest projective subspace containing the point set `mask`."""
        hit = self._closure.get(mask)
        if hit is not None:
            return hit
        reps = [self.points[i] for i in self.mask_points(mask)]
        out = self.subspace_mask(reps)
        self._closure[mask] = out
        return out

    def subgroup(self, mask):
        """The linear subspace (as a Subgroup) whose points are `mask`."""
        reps = [self.points[i] for i in self.mask_points(mask)]
        return Subgroup.span(self.lattice, reps)

    def dimension(self, mask):
        """Projective dimension of a subspace mask (-1 for the empty set)."""
        size = bin(mask).count("1")
        k, total = 0, 0
        while total < size:
            total += self.q ** k
            k += 1
        return k - 1

    def lines(self):
        if self._lines is None:
            seen = {}
            for i, j in itertools.combinations(range(self.size), 2):
                m = self.closure((1 << i) | (1 << j))
                seen.setdefault(m, None)
            self._lines = sorted(seen, key=lambda m: self.mask_points(m))
        return self._lines

    def planes(self):
        out = {}
        for a, b, c in itertools.combinations(range(self.size), 3):
            m = self.closure((1 << a) | (1 << b) | (1 << c))
            if self.dimension(m) == 2:
                out.setdefault(m, None)
        return sorted(out, key=lambda m: self.mask_points(m))

    def lines_through(self, i):
        return [m for m in self.lines() if m >> i & 1]


@lru_cache(maxsize=None)
def projective_space(q, d):
    """Shared instance per (q, d); the closure cache is reused across calls."""
    return ProjectiveSpace(q, d)
