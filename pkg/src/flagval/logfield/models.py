"""Rational function fields F_q(t) and F_q(x, y) with exact arithmetic."""

import itertools
from dataclasses import dataclass

from ..errors import InputError, ZeroElement
from ..lattice import is_prime
from . import poly as P


@dataclass(frozen=True)
class RF:
    """num/den in F_q(t), reduced, den monic."""

    num: tuple
    den: tuple
    q: int

    @classmethod
    def make(cls, num, den, q):
        num, den = P.norm(num, q), P.norm(den, q)
        if not den:
            raise ZeroElement("zero denominator")
        if not num:
            return cls((), (1,), q)
        g = P.gcd(num, den, q)
        if P.deg(g) > 0:
            num, den = P.divmod_(num, g, q)[0], P.divmod_(den, g, q)[0]
        den, lead = P.monic(den, q)
        num = P.scale(num, pow(lead, -1, q), q)
        return cls(num, den, q)

    def is_zero(self):
        return not self.num

    def __add__(self, o):
        q = self.q
        if isinstance(o, int):
            o = RF.make((o,), (1,), q)
        if self.den == o.den:
            return RF.make(P.add(self.num, o.num, q), self.den, q)
        return RF.make(P.add(P.mul(self.num, o.den, q), P.mul(o.num, self.den, q), q),
                       P.mul(self.den, o.den, q), q)

    __radd__ = __add__

    def __neg__(self):
        return RF(P.neg(self.num, self.q), self.den, self.q)

    def __sub__(self, o):
        if isinstance(o, int):
            o = RF.make((o,), (1,), self.q)
        return self + (-o)

    def __mul__(self, o):
        q = self.q
        if isinstance(o, int):
            return RF.make(P.scale(self.num, o, q), self.den, q)
        return RF.make(P.mul(self.num, o.num, q), P.mul(self.den, o.den, q), q)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroElement("0 has no inverse")
        return RF.make(self.den, self.num, self.q)

    def __truediv__(self, o):
        return self * o.inverse()

    def degree(self):
        return max(P.deg(self.num), P.deg(self.den))

    def __str__(self):
        n = P.to_string(self.num)
        if self.den == (1,):
            return n
        return "(%s)/(%s)" % (n, P.to_string(self.den))


def _lead_key(a):
    # largest monomial in lex order on (y-exponent, x-exponent)
    return max(a, key=lambda e: (e[1], e[0]))


@dataclass(frozen=True)
class BF:
    """num/den in F_q(x, y); dicts frozen as sorted item tuples.

    Fractions are not brought to lowest terms (only common monomial factors
    are cancelled and den is made monic); equality is tested by cross
    multiplication, and every model valuation is monomial, hence well
    defined on any representative.
    """

    num: tuple
    den: tuple
    q: int

    @classmethod
    def make(cls, num, den, q):
        num, den = P.bnorm(dict(num), q), P.bnorm(dict(den), q)
        if not den:
            raise ZeroElement("zero denominator")
        if not num:
            return cls((), (((0, 0), 1),), q)
        mi = min(min(e[0] for e in num), min(e[0] for e in den))
        mj = min(min(e[1] for e in num), min(e[1] for e in den))
        num = {(i - mi, j - mj): c for (i, j), c in num.items()}
        den = {(i - mi, j - mj): c for (i, j), c in den.items()}
        inv = pow(den[_lead_key(den)], -1, q)
        return cls(P.bkey(P.bscale(num, inv, q)), P.bkey(P.bscale(den, inv, q)), q)

    @property
    def n(self):
        return dict(self.num)

    @property
    def d(self):
        return dict(self.den)

    def is_zero(self):
        return not self.num

    def _coerce(self, o):
        if isinstance(o, int):
            return BF.make({(0, 0): o}, {(0, 0): 1}, self.q)
        return o

    def __add__(self, o):
        o = self._coerce(o)
        q = self.q
        if self.den == o.den:
            return BF.make(P.badd(self.n, o.n, q), self.d, q)
        return BF.make(P.badd(P.bmul(self.n, o.d, q), P.bmul(o.n, self.d, q), q),
                       P.bmul(self.d, o.d, q), q)

    __radd__ = __add__

    def __neg__(self):
        return BF.make(P.bscale(self.n, -1, self.q), self.d, self.q)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __mul__(self, o):
        q = self.q
        if isinstance(o, int):
            return BF.make(P.bscale(self.n, o, q), self.d, q)
        return BF.make(P.bmul(self.n, o.n, q), P.bmul(self.d, o.d, q), q)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroElement("0 has no inverse")
        return BF.make(self.d, self.n, self.q)

    def __truediv__(self, o):
        return self * o.inverse()

    def __eq__(self, o):
        if not isinstance(o, BF):
            return NotImplemented
        q = self.q
        return P.bkey(P.bmul(self.n, o.d, q)) == P.bkey(P.bmul(o.n, self.d, q))

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        n = P.bto_string(self.n)
        if self.den == (((0, 0), 1),):
            return n
        return "(%s)/(%s)" % (n, P.bto_string(self.d))


def _split_fraction(text):
    """'(a)/(b)' or 'a/b' or 'a' -> (a, b)."""
    s = text.replace(" ", "")
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return _strip(s[:i]), _strip(s[i + 1:])
    return _strip(s), "1"


def _strip(s):
    while s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    return s


class Univariate:
    kind = "univariate"

    def __init__(self, q):
        if not is_prime(q) or q == 2:
            raise InputError("the field models need an odd prime q")
        self.q = q

    def __repr__(self):
        return "Univariate(q=%d)" % self.q

    def __eq__(self, o):
        return isinstance(o, Univariate) and o.q == self.q

    def __hash__(self):
        return hash(("u", self.q))

    def const(self, c):
        return RF.make((c,), (1,), self.q)

    def one(self):
        return self.const(1)

    def t(self):
        return RF.make((0, 1), (1,), self.q)

    def poly(self, coeffs):
        return RF.make(coeffs, (1,), self.q)

    def element(self, text):
        if not isinstance(text, str):
            return text
        a, b = _split_fraction(text)
        return RF.make(P.parse(a, self.q), P.parse(b, self.q), self.q)

    def pool(self, D=3):
        """All reduced fractions num/den with deg num, deg den <= D, den monic; deterministic order."""
        q = self.q
        dens = [d for k in range(D + 1) for d in P.monics(q, k)]
        seen = {}
        for den in dens:
            for num in itertools.product(range(q), repeat=D + 1):
                if not any(num):
                    continue
                e = RF.make(num, den, q)
                seen.setdefault((e.num, e.den), e)
        return sorted(seen.values(), key=lambda e: (e.degree(), P.deg(e.den), e.den, len(e.num), e.num))

    def to_json(self):
        return {"kind": self.kind, "q": self.q}


class Bivariate:
    kind = "bivariate"

    def __init__(self, q):
        if not is_prime(q) or q == 2:
            raise InputError("the field models need an odd prime q")
        self.q = q

    def __repr__(self):
        return "Bivariate(q=%d)" % self.q

    def __eq__(self, o):
        return isinstance(o, Bivariate) and o.q == self.q

    def __hash__(self):
        return hash(("b", self.q))

    def const(self, c):
        return BF.make({(0, 0): c}, {(0, 0): 1}, self.q)

    def one(self):
        return self.const(1)

    def x(self):
        return BF.make({(1, 0): 1}, {(0, 0): 1}, self.q)

    def y(self):
        return BF.make({(0, 1): 1}, {(0, 0): 1}, self.q)

    def poly(self, terms):
        return BF.make(terms, {(0, 0): 1}, self.q)

    def element(self, text):
        if not isinstance(text, str):
            return text
        a, b = _split_fraction(text)
        return BF.make(P.bparse(a, self.q), P.bparse(b, self.q), self.q)

    def monomials(self, D):
        return [(i, d - i) for d in range(D + 1) for i in range(d, -1, -1)]

    def pool(self, D=3):
        """All nonzero polynomials of total degree <= D, in a deterministic order."""
        q = self.q
        monos = self.monomials(D)
        out = []
        for coeffs in itertools.product(range(q), repeat=len(monos)):
            if any(coeffs):
                out.append(BF.make({m: c for m, c in zip(monos, coeffs) if c}, {(0, 0): 1}, q))
        out.sort(key=lambda e: (max(i + j for i, j in e.n), len(e.num), e.num))
        return out

    def to_json(self):
        return {"kind": self.kind, "q": self.q}


def model_from_json(d):
    kind = d.get("kind")
    q = int(d.get("q", 3))
    if kind == "univariate":
        return Univariate(q)
    if kind == "bivariate":
        return Bivariate(q)
    raise InputError("unknown model kind %r" % kind)
