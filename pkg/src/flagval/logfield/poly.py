"""Polynomials over F_q: univariate as coefficient tuples (low degree first), bivariate as dicts."""

import itertools
import re
from functools import lru_cache

from ..errors import InputError

# -- univariate -----------------------------------------------------------------


def trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def norm(c, q):
    return trim(x % q for x in c)


def deg(a):
    return len(a) - 1  # -1 for the zero polynomial


def add(a, b, q):
    n = max(len(a), len(b))
    return trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n))


def neg(a, q):
    return tuple((-x) % q for x in a)


def sub(a, b, q):
    return add(a, neg(b, q), q)


def mul(a, b, q):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return norm(out, q)


def scale(a, c, q):
    return norm((x * c for x in a), q)


def divmod_(a, b, q):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, q)
    r = list(a)
    out = [0] * max(len(a) - len(b) + 1, 0)
    for i in range(len(a) - len(b), -1, -1):
        c = (r[i + len(b) - 1] * inv) % q
        out[i] = c
        if c:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] - c * y) % q
    return trim(out), trim(r)


def monic(a, q):
    if not a:
        return a, 0
    lead = a[-1]
    return scale(a, pow(lead, -1, q), q), lead


def gcd(a, b, q):
    while b:
        a, b = b, divmod_(a, b, q)[1]
    return monic(a, q)[0]


def power(a, n, q):
    out = (1,)
    for _ in range(n):
        out = mul(out, a, q)
    return out


def order_at(a, p, q):
    """Multiplicity of the irreducible p in the nonzero polynomial a."""
    if not a:
        raise ZeroDivisionError("order of zero")
    n = 0
    while True:
        quo, r = divmod_(a, p, q)
        if r:
            return n
        a = quo
        n += 1


def monics(q, d):
    """All monic polynomials of degree exactly d."""
    for low in itertools.product(range(q), repeat=d):
        yield tuple(low) + (1,)


@lru_cache(maxsize=None)
def irreducibles(q, max_degree=6):
    """Monic irreducibles of degree 1..max_degree, by trial division."""
    out = []
    for d in range(1, max_degree + 1):
        for f in monics(q, d):
            if all(divmod_(f, g, q)[1] for g in out if 2 * deg(g) <= d):
                out.append(f)
    return tuple(out)


def is_irreducible(f, q):
    f = monic(norm(f, q), q)[0]
    if deg(f) < 1:
        return False
    table = irreducibles(q, max(1, deg(f) // 2))
    return all(divmod_(f, g, q)[1] for g in table if 2 * deg(g) <= deg(f))


def factor(a, q):
    """Leading coefficient and {irreducible: multiplicity} by trial division against the table."""
    a, lead = monic(a, q)
    out = {}
    rest = a
    for g in irreducibles(q, max(1, deg(a) // 2)):
        if deg(rest) < 1:
            break
        if 2 * deg(g) > deg(rest):
            break
        n = 0
        while True:
            quo, r = divmod_(rest, g, q)
            if r:
                break
            rest, n = quo, n + 1
        if n:
            out[g] = n
    if deg(rest) >= 1:
        out[rest] = out.get(rest, 0) + 1
    return lead, out


def to_string(a, var="t"):
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else "%s^%d" % (var, i)
            terms.append(mono if c == 1 else "%d%s" % (c, mono))
    return "+".join(terms)


_TERM = re.compile(r"^(\d*)\*?((?:[a-z](?:\^\d+)?\*?)*)$")
_FACTOR = re.compile(r"([a-z])(?:\^(\d+))?")


def parse_terms(text, variables):
    """{exponent tuple: integer coefficient} for a sum of monomials like '2t^2+t+1'."""
    s = text.replace(" ", "")
    if not s:
        raise InputError("empty polynomial")
    s = s.replace("-", "+-")
    out = {}
    for part in s.split("+"):
        if not part:
            continue
        sign = 1
        if part.startswith("-"):
            sign, part = -1, part[1:]
        m = _TERM.match(part)
        if not m or not (m.group(1) or m.group(2)):
            raise InputError("cannot parse term %r in %r" % (part, text))
        coeff = int(m.group(1)) if m.group(1) else 1
        exps = [0] * len(variables)
        for var, e in _FACTOR.findall(m.group(2)):
            if var not in variables:
                raise InputError("unknown variable %r in %r" % (var, text))
            exps[variables.index(var)] += int(e) if e else 1
        key = tuple(exps)
        out[key] = out.get(key, 0) + sign * coeff
    return out


def parse(text, q, var="t"):
    terms = parse_terms(text, (var,))
    n = max(e[0] for e in terms) + 1
    c = [0] * n
    for (e,), v in terms.items():
        c[e] += v
    return norm(c, q)


# -- bivariate: dict {(i, j): c} for c x^i y^j -----------------------------------


def bnorm(a, q):
    return {k: v % q for k, v in a.items() if v % q}


def badd(a, b, q):
    out = dict(a)
    for k, v in b.items():
        out[k] = (out.get(k, 0) + v) % q
    return {k: v for k, v in out.items() if v}


def bscale(a, c, q):
    return bnorm({k: v * c for k, v in a.items()}, q)


def bmul(a, b, q):
    out = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            key = (i + k, j + l)
            out[key] = (out.get(key, 0) + x * y) % q
    return {k: v for k, v in out.items() if v}


def bkey(a):
    return tuple(sorted(a.items()))


def bto_string(a):
    if not a:
        return "0"
    terms = []
    for (i, j), c in sorted(a.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][1], -t[0][0])):
        mono = ""
        if i:
            mono += "x" if i == 1 else "x^%d" % i
        if j:
            mono += "y" if j == 1 else "y^%d" % j
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else "%d%s" % (c, mono))
    return "+".join(terms)


def bparse(text, q):
    return bnorm(parse_terms(text, ("x", "y")), q)
