"""Places of F_q(t) and monomial valuations of F_q(x, y)."""

import random
from dataclasses import dataclass

from ..errors import AxiomFailure, InputError
from . import poly as P
from .models import BF, RF


@dataclass(frozen=True)
class Place:
    """A monic irreducible polynomial of F_q[t], or poly=None for the infinite place."""

    q: int
    poly: tuple = None

    def __post_init__(self):
        if self.poly is not None and not P.is_irreducible(self.poly, self.q):
            raise InputError("%s is not irreducible over F_%d" % (P.to_string(self.poly), self.q))
        if self.poly is not None and self.poly[-1] != 1:
            raise InputError("places are given by monic polynomials")

    @classmethod
    def parse(cls, text, q):
        t = text.replace(" ", "")
        if t in ("inf", "oo", "infinity"):
            return cls(q, None)
        return cls(q, P.parse(t, q))

    @property
    def degree(self):
        return 1 if self.poly is None else P.deg(self.poly)

    def order(self, k):
        if k.is_zero():
            raise ValueError("order of zero")
        if self.poly is None:
            return P.deg(k.den) - P.deg(k.num)
        return P.order_at(k.num, self.poly, self.q) - P.order_at(k.den, self.poly, self.q)

    def uniformizer(self):
        if self.poly is None:
            return RF.make((1,), (0, 1), self.q)
        return RF.make(self.poly, (1,), self.q)

    @property
    def name(self):
        return "inf" if self.poly is None else P.to_string(self.poly)

    def __str__(self):
        return self.name


class Valuation:
    """Common interface: value(k) in the scale, zero(), add(a, b), sign(a)."""

    scale = "Z"

    def zero(self):
        return 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def sign(self, a):
        return (a > 0) - (a < 0)

    def compare(self, a, b):
        return self.sign(self.sub(a, b))

    def in_O(self, k):
        return self.sign(self.value(k)) >= 0

    def in_m(self, k):
        return self.sign(self.value(k)) > 0

    def check_axioms(self, elements, pairs=200, seed=0):
        """Spot-check multiplicativity and the ultrametric law; raises AxiomFailure."""
        rng = random.Random(seed)
        els = [e for e in elements if not e.is_zero()]
        for _ in range(pairs if len(els) > 1 else 0):
            a, b = rng.choice(els), rng.choice(els)
            va, vb = self.value(a), self.value(b)
            if self.value(a * b) != self.add(va, vb):
                raise AxiomFailure("value(ab) != value(a) + value(b)", witness=(str(a), str(b)))
            s = a + b
            if s.is_zero():
                continue
            vs = self.value(s)
            lo = va if self.compare(va, vb) <= 0 else vb
            if self.compare(vs, lo) < 0 or (self.compare(va, vb) != 0 and vs != lo):
                raise AxiomFailure("ultrametric law fails", witness=(str(a), str(b)))
        return True


class PlaceValuation(Valuation):
    def __init__(self, place):
        self.place = place

    def value(self, k):
        return self.place.order(k)

    def generators(self):
        return [self.place.uniformizer()]

    def __eq__(self, o):
        return isinstance(o, PlaceValuation) and o.place == self.place

    def __hash__(self):
        return hash(self.place)

    def to_json(self):
        return {"kind": "place", "place": self.place.name, "scale": self.scale}


class MonomialValuation(Valuation):
    """Monomial valuations on F_q(x, y).

    lex: value is (y-exponent, x-exponent) of the smallest monomial, compared
    lexicographically; revlex: (x-exponent, y-exponent); weight (w1, w2): the
    integer min of w1*i + w2*j over the support.
    """

    def __init__(self, kind="lex", weights=(1, 2)):
        if kind not in ("lex", "revlex", "weight"):
            raise InputError("unknown monomial valuation %r" % kind)
        self.kind = kind
        self.weights = tuple(weights)
        self.scale = "Z" if kind == "weight" else "Z2-lex"

    def _poly(self, terms):
        if self.kind == "lex":
            return min((j, i) for i, j in terms)
        if self.kind == "revlex":
            return min((i, j) for i, j in terms)
        w1, w2 = self.weights
        return min(w1 * i + w2 * j for i, j in terms)

    def value(self, k):
        if k.is_zero():
            raise ValueError("value of zero")
        a = self._poly(dict(k.num))
        b = self._poly(dict(k.den))
        return self.sub(a, b)

    def exponents(self, v):
        """(x-part, y-part) of a scale element (lex and revlex only)."""
        if self.kind == "lex":
            return v[1], v[0]
        return v

    def zero(self):
        return 0 if self.kind == "weight" else (0, 0)

    def add(self, a, b):
        if self.kind == "weight":
            return a + b
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        if self.kind == "weight":
            return a - b
        return (a[0] - b[0], a[1] - b[1])

    def sign(self, a):
        if self.kind == "weight":
            return (a > 0) - (a < 0)
        return (a > (0, 0)) - (a < (0, 0))

    def __eq__(self, o):
        return isinstance(o, MonomialValuation) and (o.kind, o.weights) == (self.kind, self.weights)

    def __hash__(self):
        return hash((self.kind, self.weights))

    def to_json(self):
        out = {"kind": self.kind, "scale": self.scale}
        if self.kind == "weight":
            out["weights"] = list(self.weights)
        else:
            out["orientation"] = ["y", "x"] if self.kind == "lex" else ["x", "y"]
        return out


def valuation_from_json(d, model):
    if isinstance(d, str):
        d = {"kind": d}
    kind = d.get("kind")
    if kind == "place":
        return PlaceValuation(Place.parse(d["place"], model.q))
    if kind in ("lex", "revlex", "weight"):
        return MonomialValuation(kind, d.get("weights", (1, 2)))
    raise InputError("unknown valuation %r" % kind)


__all__ = ["Place", "PlaceValuation", "MonomialValuation", "valuation_from_json", "BF", "RF"]
