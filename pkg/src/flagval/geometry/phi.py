"""The map v -> (f1(v), f2(v)) into the affine plane over R, and point-plus-line covers."""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import RingUnsupported
from ..padic import DEFAULT_PRECISION, PadicInteger


@dataclass(frozen=True)
class Ring:
    """Value ring: "Z/p", "Q" (exact rationals) or "Zp" (p-adic integers mod p^N)."""

    kind: str
    p: int = 0
    N: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.kind not in ("Z/p", "Q", "Zp"):
            raise RingUnsupported("unsupported value ring %r (use Z/p, Q or Zp)" % self.kind)

    @classmethod
    def parse(cls, text, p=0, N=DEFAULT_PRECISION):
        t = text.replace(" ", "")
        if t in ("Q", "QQ"):
            return cls("Q")
        if t.startswith("Z/"):
            return cls("Z/p", int(t[2:]))
        if t in ("Zp", "Z_p"):
            return cls("Zp", p, N)
        raise RingUnsupported("unsupported value ring %r" % text)

    @property
    def modulus(self):
        if self.kind == "Z/p":
            return self.p
        if self.kind == "Zp":
            return self.p ** self.N
        return None

    def num(self, v):
        """Normalized number for a ring value (int residue or Fraction)."""
        if self.kind == "Q":
            return Fraction(v)
        if isinstance(v, PadicInteger):
            return v.value % self.modulus
        return int(v) % self.modulus

    def reduce(self, x):
        return x if self.kind == "Q" else x % self.modulus

    def valuation(self, x):
        """p-adic valuation of a residue (None for zero); 0 or None over a field."""
        x = self.reduce(x)
        if not x:
            return None
        if self.kind != "Zp":
            return 0
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def to_json(self):
        out = {"kind": self.kind}
        if self.kind != "Q":
            out["p"] = self.p
        if self.kind == "Zp":
            out["precision"] = self.N
        return out


@dataclass
class AffineLine:
    """point + R * direction, with the direction primitive (a unit coordinate)."""

    point: tuple
    direction: tuple
    ring: Ring
    precision: int = 0  # digits over which membership is tested (Zp only)

    def contains(self, q):
        r = self.ring
        if self.direction is None:
            return all(r.reduce(a - b) == 0 for a, b in zip(q, self.point))
        dx, dy = self.direction
        det = (q[0] - self.point[0]) * dy - (q[1] - self.point[1]) * dx
        if r.kind == "Zp":
            return det % (r.p ** self.precision) == 0
        return r.reduce(det) == 0

    def coefficients(self):
        """(a, b, c) with a x + b y = c."""
        if self.direction is None:
            return None
        dx, dy = self.direction
        a, b = dy, -dx
        return (a, b, self.ring.reduce(a * self.point[0] + b * self.point[1]))

    def to_json(self):
        return {"point": [_jnum(x) for x in self.point],
                "direction": None if self.direction is None else [_jnum(x) for x in self.direction],
                "coefficients": None if self.direction is None else [_jnum(x) for x in self.coefficients()]}


def _jnum(x):
    return str(x) if isinstance(x, Fraction) else int(x)


def line_through(ring, p1, p2):
    """The affine line through two distinct points."""
    dx, dy = ring.reduce(p2[0] - p1[0]), ring.reduce(p2[1] - p1[1])
    if ring.kind == "Q":
        return AffineLine(p1, (dx, dy), ring)
    if ring.kind == "Z/p":
        return AffineLine(p1, (dx, dy), ring, 1)
    v = min(x for x in (ring.valuation(dx), ring.valuation(dy)) if x is not None)
    scale = ring.p ** v
    return AffineLine(p1, (dx // scale, dy // scale), ring, ring.N - v)


def collinear(ring, points):
    """True iff all points lie on one affine line (vacuous for <= 2 distinct points)."""
    pts = list(dict.fromkeys(points))
    if len(pts) <= 2:
        return True
    if ring.kind == "Zp":
        # use the difference of smallest valuation as the direction
        base = pts[0]
        best = min(pts[1:], key=lambda q: min(x for x in (ring.valuation(q[0] - base[0]),
                                                          ring.valuation(q[1] - base[1]))
                                              if x is not None))
        L = line_through(ring, base, best)
    else:
        L = line_through(ring, pts[0], pts[1])
    return all(L.contains(q) for q in pts)


@dataclass
class PhiMap:
    f1: object
    f2: object
    ring: Ring
    images: list  # per projective point, a pair of normalized numbers
    fibers: dict = field(default_factory=dict)

    @property
    def space(self):
        return self.f1.space

    def image_points(self):
        return sorted(self.fibers, key=_point_key)

    def line_images(self, mask):
        return [self.images[i] for i in self.space.mask_points(mask)]


def _point_key(p):
    return tuple((float(x), str(x)) for x in p)


def phi_image(f1, f2, ring):
    """Image of every point of P(V) under (f1, f2); both are FullTables on the same space."""
    if not isinstance(ring, Ring):
        ring = Ring.parse(ring)
    if f1.q != f2.q or f1.rank != f2.rank:
        raise ValueError("f1 and f2 must live on the same space")
    v1 = f1.point_values()
    v2 = f2.point_values()
    images = [(ring.num(a), ring.num(b)) for a, b in zip(v1, v2)]
    fibers = {}
    for i, im in enumerate(images):
        fibers.setdefault(im, []).append(i)
    return PhiMap(f1, f2, ring, images, fibers)


def line_condition(pm):
    """First line of P(V) whose image is not collinear (the per-line c-pair test), or None."""
    for m in pm.space.lines():
        if not collinear(pm.ring, pm.line_images(m)):
            return m
    return None


@dataclass
class PointAndLine:
    d: tuple
    line: AffineLine
    kind: str = "point-and-line"

    def covers(self, p):
        return p == self.d or self.line.contains(p)

    def to_json(self):
        return {"kind": self.kind, "d": [_jnum(x) for x in self.d], "line": self.line.to_json()}


@dataclass
class ShapeViolation:
    points: list
    kind: str = "violation"

    def to_json(self):
        return {"kind": self.kind, "points": [[_jnum(x) for x in p] for p in self.points]}


def _cover(ring, pts):
    """A point-plus-line cover of the distinct points `pts`, or None."""
    if len(pts) == 1:
        return PointAndLine(pts[0], AffineLine(pts[0], None, ring))
    for a, b in itertools.combinations(pts, 2):
        L = line_through(ring, a, b)
        off = [q for q in pts if not L.contains(q)]
        if len(off) <= 1:
            return PointAndLine(off[0] if off else a, L)
    return None


def image_shape(pm, rank3=True):
    if pm.ring.kind not in ("Z/p", "Q", "Zp"):
        raise RingUnsupported("point-plus-line covers need Z/p, Q or Zp")
    if rank3 and pm.space.n != 3:
        raise ValueError("rank3 shape analysis needs a 3-dimensional space")
    pts = pm.image_points()
    cover = _cover(pm.ring, pts)
    if cover is not None:
        return cover
    for size in range(4, len(pts) + 1):
        for sub in itertools.combinations(pts, size):
            if _cover(pm.ring, list(sub)) is None:
                return ShapeViolation(list(sub))
    return ShapeViolation(pts)
