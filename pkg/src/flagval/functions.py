"""Invariant functions on lattices and F_q-spaces, and the core operations on them.

Every function keeps its values as small integer codes into a tuple of
labels; the engines work on codes and translate back only for reports.
"""

from math import gcd
import itertools

import numpy as np

from .errors import InvarianceFailure, OutOfWindow, PartialMap, ZeroElement
from .geometry.projective import projective_space
from .lattice import INTEGERS, Lattice, PrimeField, Window


def _label_key(x):
    return (type(x).__name__, x)


def sort_labels(values):
    vals = list(dict.fromkeys(values))
    try:
        return tuple(sorted(vals, key=_label_key))
    except TypeError:
        return tuple(vals)


def vp(n, p):
    n = abs(n)
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_power(m):
    """Return (p, k) with m = p^k, or raise."""
    for p in range(2, m + 1):
        if m % p == 0:
            k, x = 0, m
            while x % p == 0:
                x //= p
                k += 1
            if x != 1:
                break
            return p, k
    raise ValueError("%d is not a prime power" % m)


def enumerate_primitive_classes(lattice, modulus):
    """One representative per unit orbit of primitive residue vectors.

    Representatives use smallest nonnegative residues and are the
    lexicographically smallest member of their orbit; the list is sorted.
    """
    n = lattice.rank
    if lattice.q:
        if modulus != lattice.q:
            raise ValueError("over F_q the modulus must be q")
        return list(projective_space(lattice.q, n - 1).points)
    p, _ = prime_power(modulus)
    units = [u for u in range(1, modulus) if u % p]
    out = []
    for v in itertools.product(range(modulus), repeat=n):
        if all(x % p == 0 for x in v):
            continue
        if all(tuple((u * x) % modulus for x in v) >= v for u in units):
            out.append(v)
    return out


class InvariantFunction:
    """Common interface. `labels[c]` is the value carried by code c."""

    kind = "abstract"

    def __init__(self, lattice, labels):
        self.lattice = lattice
        self.labels = tuple(labels)

    @property
    def rank(self):
        return self.lattice.rank

    @property
    def q(self):
        return self.lattice.q

    def code_of(self, value):
        return self.labels.index(value)

    def evaluate(self, a):
        a = tuple(int(x) for x in a)
        if len(a) != self.rank:
            raise ValueError("expected a vector of length %d" % self.rank)
        nonzero = any(x % self.q for x in a) if self.q else any(a)
        if not nonzero:
            raise ZeroElement("values at 0 are ignored")
        self._check_window(a)
        return self.labels[self.code(a)]

    def _check_window(self, a):
        pass

    def code(self, a):
        return int(self.codes(np.array([a], dtype=np.int64))[0])

    def codes(self, points):
        raise NotImplementedError

    def attained_codes(self):
        raise NotImplementedError

    def attained(self):
        return [self.labels[c] for c in sorted(self.attained_codes())]


class FullTable(InvariantFunction):
    """F_q case: a value for every nonzero vector of F_q^n."""

    kind = "table"

    def __init__(self, q, n, vector_codes, labels):
        super().__init__(Lattice(PrimeField(q), n), labels)
        self.space = projective_space(q, n - 1)
        self.vector_codes = np.asarray(vector_codes, dtype=np.int64)
        if len(self.vector_codes) != q ** n:
            raise ValueError("table needs q^n entries")
        reps = [self.space.vector_index(v) for v in self.space.points]
        self.point_codes = self.vector_codes[reps]
        self.window = None

    @classmethod
    def from_points(cls, q, n, values, labels=None):
        """Build from one value per point of P^{n-1}(F_q), in point order."""
        values = list(values)
        space = projective_space(q, n - 1)
        if len(values) != space.size:
            raise ValueError("expected %d point values" % space.size)
        labels = sort_labels(values) if labels is None else tuple(labels)
        pc = np.array([labels.index(v) for v in values], dtype=np.int64)
        vc = np.zeros(q ** n, dtype=np.int64)
        nz = space.vec_point >= 0
        vc[nz] = pc[space.vec_point[nz]]
        return cls(q, n, vc, labels)

    @classmethod
    def from_point_codes(cls, q, n, codes, labels):
        space = projective_space(q, n - 1)
        pc = np.asarray(codes, dtype=np.int64)
        vc = np.zeros(q ** n, dtype=np.int64)
        nz = space.vec_point >= 0
        vc[nz] = pc[space.vec_point[nz]]
        return cls(q, n, vc, labels)

    @classmethod
    def from_vectors(cls, q, n, mapping):
        """Build from a dict vector -> value covering every nonzero vector."""
        space = projective_space(q, n - 1)
        labels = sort_labels(mapping.values())
        vc = np.zeros(q ** n, dtype=np.int64)
        for v in space.all_vectors():
            vc[space.vector_index(v)] = labels.index(mapping[v])
        return cls(q, n, vc, labels)

    @classmethod
    def from_rule(cls, q, n, rule):
        space = projective_space(q, n - 1)
        return cls.from_vectors(q, n, {v: rule(v) for v in space.all_vectors()})

    def codes(self, points):
        P = np.asarray(points, dtype=np.int64) % self.q
        idx = P @ self.space._weights
        return self.vector_codes[idx]

    def point_values(self):
        return [self.labels[c] for c in self.point_codes]

    def attained_codes(self):
        return set(int(c) for c in self.point_codes)


class DepthK(InvariantFunction):
    """Z case: values on primitive classes of (Z/p^k)^n, extended by invariance."""

    kind = "depthk"

    def __init__(self, p, k, n, entries, window=None, labels=None):
        lattice = Lattice(INTEGERS, n)
        self.p, self.k = p, k
        self.modulus = p ** k
        m = self.modulus
        self.classes = enumerate_primitive_classes(lattice, m)
        self._weights = np.array([m ** (n - 1 - i) for i in range(n)], dtype=np.int64)
        residue_class = np.full(m ** n, -1, dtype=np.int64)
        units = [u for u in range(1, m) if u % p]
        for ci, rep in enumerate(self.classes):
            for u in units:
                w = tuple((u * x) % m for x in rep)
                residue_class[int(np.dot(w, self._weights))] = ci
        self.residue_class = residue_class
        values = {}
        self.conflicts = []
        for cls_vec, value in entries:
            v = tuple(int(x) % m for x in cls_vec)
            ci = int(residue_class[int(np.dot(v, self._weights))])
            if ci < 0:
                raise ValueError("class %r is not primitive mod %d" % (v, m))
            if ci in values and values[ci][1] != value:
                self.conflicts.append((values[ci][0], v))
            else:
                values.setdefault(ci, (v, value))
        missing = [self.classes[i] for i in range(len(self.classes)) if i not in values]
        if missing:
            raise ValueError("no value for classes %r" % missing[:4])
        vals = [values[i][1] for i in range(len(self.classes))]
        labels = sort_labels(vals) if labels is None else tuple(labels)
        super().__init__(lattice, labels)
        self.class_codes = np.array([labels.index(v) for v in vals], dtype=np.int64)
        self.window = window or Window(box=max(2, m), depth=k)

    @classmethod
    def from_rule(cls, p, k, n, rule, window=None):
        lattice = Lattice(INTEGERS, n)
        reps = enumerate_primitive_classes(lattice, p ** k)
        return cls(p, k, n, [(r, rule(r)) for r in reps], window=window)

    def _check_window(self, a):
        if not self.window.contains(a):
            raise OutOfWindow("%r outside box %d" % (a, self.window.box))

    def codes(self, points):
        P = np.asarray(points, dtype=np.int64)
        g = np.gcd.reduce(np.abs(P), axis=1)
        if (g == 0).any():
            raise ZeroElement("values at 0 are ignored")
        R = (P // g[:, None]) % self.modulus
        ci = self.residue_class[R @ self._weights]
        return self.class_codes[ci]

    def class_value(self, rep):
        return self.labels[self.code(rep)]

    def entries(self):
        return [(rep, self.labels[c]) for rep, c in zip(self.classes, self.class_codes)]

    def attained_codes(self):
        return set(int(c) for c in self.class_codes)

    def with_window(self, window):
        return DepthK(self.p, self.k, self.rank, self.entries(), window=window, labels=self.labels)


class WindowOracle(InvariantFunction):
    """A rule evaluated on demand over a declared window.

    Certification needs a DepthK snapshot; `p` and `k` declare the depth the
    rule is claimed to factor through.
    """

    kind = "oracle"

    def __init__(self, n, rule, window, p=None, k=None, labels=None):
        super().__init__(Lattice(INTEGERS, n), labels or ())
        self.rule = rule
        self.window = window
        self.p, self.k = p, k
        self._cache = {}

    def _check_window(self, a):
        if not self.window.contains(a):
            raise OutOfWindow("%r outside box %d" % (a, self.window.box))

    def raw(self, a):
        a = tuple(int(x) for x in a)
        hit = self._cache.get(a)
        if hit is None:
            hit = self.rule(a)
            self._cache[a] = hit
        return hit

    def evaluate(self, a):
        a = tuple(int(x) for x in a)
        if not any(a):
            raise ZeroElement("values at 0 are ignored")
        self._check_window(a)
        return self.raw(a)

    def codes(self, points):
        vals = [self.raw(tuple(v)) for v in np.asarray(points)]
        labels = sort_labels(list(self.labels) + vals)
        self.labels = labels
        return np.array([labels.index(v) for v in vals], dtype=np.int64)

    def attained_codes(self):
        self.codes(self.window.points(self.rank))
        return set(range(len(self.labels)))

    def snapshot(self):
        if self.p is None or self.k is None:
            raise ValueError("oracle declares no depth; cannot snapshot")
        f = DepthK.from_rule(self.p, self.k, self.rank, self.raw, window=self.window)
        pts = self.window.points(self.rank)
        mine = [self.raw(tuple(v)) for v in pts]
        theirs = [f.labels[c] for c in f.codes(pts)]
        for v, a, b in zip(pts, mine, theirs):
            if a != b:
                raise InvarianceFailure("rule is not induced from depth %d at %r" % (self.k, tuple(v)),
                                        witness=tuple(int(x) for x in v))
        return f


def as_certifiable(f):
    return f.snapshot() if isinstance(f, WindowOracle) else f


def check_invariance(f, window=None):
    """Pass (None) or the first witness (n, a) with f(na) != f(a)."""
    if isinstance(f, FullTable):
        q = f.q
        for a in f.space.all_vectors():
            ca = f.vector_codes[f.space.vector_index(a)]
            for n in range(2, q):
                na = tuple((n * x) % q for x in a)
                if f.vector_codes[f.space.vector_index(na)] != ca:
                    return (n, a)
        return None
    if isinstance(f, DepthK) and f.conflicts:
        a, b = f.conflicts[0]
        m = f.modulus
        for u in range(1, m):
            if tuple((u * x) % m for x in a) == b:
                return (u, a)
    window = window or f.window
    pts = window.points(f.rank)
    base = f.codes(pts) if not isinstance(f, WindowOracle) else None
    lookup = {tuple(int(x) for x in v): i for i, v in enumerate(pts)}
    for i, v in enumerate(pts):
        a = tuple(int(x) for x in v)
        top = window.box // max(abs(x) for x in a)
        for n in [m for k in range(1, top + 1) for m in (k, -k)]:
            if n == 1:
                continue
            na = tuple(n * x for x in a)
            j = lookup[na]
            if base is not None:
                if base[j] != base[i]:
                    return (n, a)
            elif f.raw(na) != f.raw(a):
                return (n, a)
    return None


def restrict(f, B):
    """f_B in the canonical coordinates of B."""
    if B.parent.rank != f.rank or B.parent.q != f.q:
        raise ValueError("subgroup does not live in the function's lattice")
    r = B.rank
    if r == 0:
        raise ValueError("cannot restrict to the zero subgroup")
    if isinstance(f, FullTable):
        q = f.q
        mapping = {}
        for c in itertools.product(range(q), repeat=r):
            if any(c):
                mapping[c] = f.labels[f.code(B.embed(c))]
        g = FullTable.from_vectors(q, r, mapping)
        return g
    M = B.embedding_matrix()
    stretch = int(np.abs(M).sum(axis=0).max())
    window = Window(box=max(1, f.window.box // stretch), depth=f.window.depth)
    if isinstance(f, DepthK):
        e = vp(B.elementary_divisor_bound(), f.p) or 0
        k2 = f.k + e
        reps = enumerate_primitive_classes(Lattice(INTEGERS, r), f.p ** k2)
        pts = np.array(reps, dtype=np.int64) @ M
        codes = f.codes(pts)
        entries = [(rep, f.labels[c]) for rep, c in zip(reps, codes)]
        return DepthK(f.p, k2, r, entries, window=window)
    if isinstance(f, WindowOracle):
        rule = f.raw
        return WindowOracle(r, lambda y: rule(tuple(int(x) for x in np.array(y) @ M)), window,
                            p=f.p, k=None if f.k is None else f.k + (vp(B.elementary_divisor_bound(), f.p) or 0))
    raise TypeError("unsupported representation")


def postcompose(h, f):
    """h o f, where h is a dict or a callable on values."""
    def apply(v):
        try:
            return h[v] if isinstance(h, dict) else h(v)
        except (KeyError, IndexError) as exc:
            raise PartialMap("h undefined on %r" % (v,), witness=v) from exc

    if isinstance(f, WindowOracle):
        rule = f.raw
        return WindowOracle(f.rank, lambda a: apply(rule(a)), f.window, p=f.p, k=f.k)
    attained = f.attained_codes()
    image = {c: apply(f.labels[c]) for c in attained}
    labels = sort_labels(image.values())
    remap = np.zeros(len(f.labels), dtype=np.int64)
    for c, v in image.items():
        remap[c] = labels.index(v)
    if isinstance(f, FullTable):
        return FullTable(f.q, f.rank, remap[f.vector_codes], labels)
    if isinstance(f, DepthK):
        g = DepthK.__new__(DepthK)
        g.__dict__.update(f.__dict__)
        g.labels = labels
        g.class_codes = remap[f.class_codes]
        g.conflicts = list(f.conflicts)
        return g
    raise TypeError("unsupported representation")


def constant(lattice, value, window=None):
    if lattice.q:
        space = projective_space(lattice.q, lattice.rank - 1)
        return FullTable.from_points(lattice.q, lattice.rank, [value] * space.size)
    return DepthK(2, 1, lattice.rank,
                  [(r, value) for r in enumerate_primitive_classes(lattice, 2)], window=window)
