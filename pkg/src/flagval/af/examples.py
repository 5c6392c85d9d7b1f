"""Constructors for the standard example functions used by tests and the CLI."""

from ..functions import DepthK, FullTable
from ..lattice import Window

# minority points of the 7-point pattern, in the basis (e1, e2, e3)
FANO_TRIANGLE = ((1, 0, 1), (0, 1, 1), (1, 1, 1))


def fano_value(v, zero=0, one=1):
    r = tuple(int(x) % 2 for x in v)
    return zero if r in FANO_TRIANGLE else one


def mod4_value(v, zero=0, one=1):
    """The depth-2 variant: the class of e2 mod 2 is split by n1 mod 4."""
    r = tuple(int(x) % 2 for x in v)
    if r != (0, 1, 0):
        return fano_value(r, zero, one)
    return zero if int(v[0]) % 4 == 0 else one


def fano_table():
    """The exceptional pattern on (Z/2)^3."""
    return FullTable.from_rule(2, 3, fano_value)


def fano_lifted(window=None):
    """The same pattern on Z^3, induced from A/2A."""
    return DepthK.from_rule(2, 1, 3, fano_value, window=window)


def mod4(window=None):
    return DepthK.from_rule(2, 2, 3, mod4_value, window=window or Window(4, 3))


def typical(p=2, generic=0, other=1, window=None):
    """Staircase on Z^2 with a = e1, a' = e2: generic off Z a + pZ a'."""
    def rule(v):
        return other if v[1] % p == 0 else generic
    return DepthK.from_rule(p, 1, 2, rule, window=window or Window(max(8, p ** 3), 3))


def parity(window=None):
    """1 on vectors with odd second coordinate."""
    return DepthK.from_rule(2, 1, 2, lambda v: v[1] % 2, window=window)
