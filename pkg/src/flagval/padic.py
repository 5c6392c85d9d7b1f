"""Fixed-precision p-adic integers: exact arithmetic modulo p^N."""

from functools import total_ordering

DEFAULT_PRECISION = 8


@total_ordering
class PadicInteger:
    __slots__ = ("p", "N", "value")

    def __init__(self, value, p, N=DEFAULT_PRECISION):
        if N < 1:
            raise ValueError("precision must be at least 1")
        self.p = p
        self.N = N
        self.value = int(value) % (p ** N)

    @property
    def modulus(self):
        return self.p ** self.N

    def _coerce(self, other):
        if isinstance(other, PadicInteger):
            if other.p != self.p:
                raise ValueError("mixing p-adic integers with different p")
            N = min(self.N, other.N)
            return other.value, N
        if isinstance(other, int):
            return other, self.N
        return None, None

    def __add__(self, other):
        v, N = self._coerce(other)
        if v is None:
            return NotImplemented
        return PadicInteger(self.value + v, self.p, N)

    __radd__ = __add__

    def __neg__(self):
        return PadicInteger(-self.value, self.p, self.N)

    def __sub__(self, other):
        v, N = self._coerce(other)
        if v is None:
            return NotImplemented
        return PadicInteger(self.value - v, self.p, N)

    def __rsub__(self, other):
        v, N = self._coerce(other)
        if v is None:
            return NotImplemented
        return PadicInteger(v - self.value, self.p, N)

    def __mul__(self, other):
        v, N = self._coerce(other)
        if v is None:
            return NotImplemented
        return PadicInteger(self.value * v, self.p, N)

    __rmul__ = __mul__

    def __eq__(self, other):
        v, N = self._coerce(other)
        if v is None:
            return NotImplemented
        m = self.p ** N
        return (self.value - v) % m == 0

    def __lt__(self, other):
        # Only used for deterministic sorting, not a field order.
        v, N = self._coerce(other)
        if v is None:
            return NotImplemented
        return self.value < v % (self.p ** N)

    def __hash__(self):
        return hash((self.p, self.N, self.value))

    def valuation(self):
        """p-adic valuation; N for zero (the precision floor)."""
        if self.value == 0:
            return self.N
        v, x = 0, self.value
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def is_unit(self):
        return self.value % self.p != 0

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in Z_%d" % self.p)
        return PadicInteger(pow(self.value, -1, self.modulus), self.p, self.N)

    def lift(self):
        """Signed representative in (-p^N/2, p^N/2]."""
        m = self.modulus
        v = self.value
        return v - m if v > m // 2 else v

    def digits(self):
        out = []
        x = self.value
        for _ in range(self.N):
            out.append(x % self.p)
            x //= self.p
        return out

    def to_string(self):
        """Base-p digits, little-endian, N digits (serialization format)."""
        return "".join(_DIGITS[d] for d in self.digits())

    @classmethod
    def from_string(cls, s, p):
        value = 0
        for i, ch in enumerate(s):
            d = _DIGITS.index(ch)
            if d >= p:
                raise ValueError("digit %r out of range for p=%d" % (ch, p))
            value += d * p ** i
        return cls(value, p, len(s))

    def __repr__(self):
        return "PadicInteger(%d, p=%d, N=%d)" % (self.lift(), self.p, self.N)

    def __str__(self):
        return str(self.lift())


_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"
