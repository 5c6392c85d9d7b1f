"""Recover a valuation from an AF logarithmic function.

The order comes from the tilde relation: a >~ b iff f(a) != f(b) and
f(a + b) = f(a), read as "a has smaller valuation than b".  So k lies in
the maximal ideal iff 1 >~ k, i.e. f(k) != 0 and f(1 + k) = 0.
"""

import random
from math import gcd as _gcd
from dataclasses import dataclass, field

from ..errors import AxiomFailure, NotAF, UnhandledConfiguration
from .cpair import DEFAULT_DEGREE, PLANE_SAMPLES, line_elements, line_values, p1_af, pool_lines, \
    sample_planes, _certify

HORIZON = 16
AXIOM_PAIRS = 10000

FIELD_CAVEAT = ("F_q is a finite-field stand-in: it has extensions of every degree and "
                "does not meet the Galois-theoretic hypotheses, so these runs exercise the "
                "function-space combinatorics only")


def compare(f, a, b):
    """+1 if nu(a) > nu(b), -1 if nu(a) < nu(b), 0 if f cannot tell them apart."""
    fa, fb = f.value(a), f.value(b)
    if fa == fb:
        return 0
    s = a + b
    if s.is_zero():
        return 0
    fs = f.value(s)
    if fs == fb:
        return 1
    if fs == fa:
        return -1
    raise NotAF("ultrametric comparison fails", witness=_triple(f, a, b, s))


def _triple(f, a, b, s):
    return {"x": str(a), "y": str(b), "sum": str(s),
            "values": [f.value(a), f.value(b), f.value(s)]}


def positive(f, k):
    """k in the maximal ideal."""
    one = k * 0 + 1
    s = one + k
    return f.value(k) != 0 and not s.is_zero() and f.value(s) == 0


def _power(g, n):
    one = g * 0 + 1
    if n < 0:
        g, n = g.inverse(), -n
    out = one
    for _ in range(n):
        out = out * g
    return out


@dataclass
class ReconstructionResult:
    scale: str
    generators: list          # field elements of minimal positive valuation per rank step
    ftilde: list              # f on the generators
    f: object
    horizon: int
    checks: dict = field(default_factory=dict)
    caveat: str = FIELD_CAVEAT
    kind: str = "valuation"

    def nu(self, k):
        memo = self.__dict__.setdefault("_memo", {})
        v = memo.get(k)
        if v is None:
            v = memo[k] = self._nu(k)
        return v

    def _nu(self, k):
        f = self.f
        fk = f.value(k)
        m = f.modulus
        if self.scale == "trivial":
            return 0
        if self.scale == "Z":
            return _solve_linear(fk, self.ftilde[0], m, self.bound)
        # rank 2: the top coordinate by archimedean class, then the bottom one
        g1, g2 = self.generators
        a, b = self.ftilde
        hits = [(n2, n1) for n2 in range(-self.bound2, self.bound2 + 1)
                for n1 in [_solve_linear((fk - n2 * b) % m, a, m, self.horizon)]
                if n1 is not None]
        if len(hits) == 1:
            return hits[0]
        hits.sort(key=lambda h: (abs(h[0]) + abs(h[1]), h))
        # compare() is truthful whenever it is nonzero; testing two horizons
        # keeps a single value collision from hiding a wrong candidate
        for n2, n1 in hits:
            ok = True
            for h in (self.horizon, self.horizon + 1):
                if compare(f, k, self._mono(n2, -h)) < 0 or compare(f, k, self._mono(n2, h)) > 0:
                    ok = False
                    break
            if ok:
                return (n2, n1)
        raise UnhandledConfiguration("no scale coordinate for %s" % k, witness=str(k))

    def _mono(self, n2, n1):
        cache = self.__dict__.setdefault("_cache", {})
        key = (n2, n1)
        if key not in cache:
            g1, g2 = self.generators
            cache[key] = _power(g2, n2) * _power(g1, n1)
        return cache[key]

    @property
    def bound(self):
        return self.checks.get("bound", 4 * HORIZON)

    @property
    def bound2(self):
        return self.checks.get("bound2", 8)

    def sign(self, v):
        if self.scale == "Z2-lex":
            return (v > (0, 0)) - (v < (0, 0))
        return (v > 0) - (v < 0)

    def add(self, a, b):
        if self.scale == "Z2-lex":
            return (a[0] + b[0], a[1] + b[1])
        return a + b

    def in_O(self, k):
        return self.sign(self.nu(k)) >= 0

    def in_m(self, k):
        return self.sign(self.nu(k)) > 0

    def to_json(self):
        return {"kind": self.kind, "scale": self.scale,
                "generators": [str(g) for g in self.generators],
                "ftilde": list(self.ftilde), "horizon": self.horizon,
                "precision": self.f.N, "p": self.f.p,
                "checks": self.checks, "caveat": self.caveat}


def _solve_linear(target, a, m, bound):
    """Smallest |n| <= bound with n*a = target mod m, or None."""
    target %= m
    a %= m
    if a == 0:
        return 0 if target == 0 else None
    g = _gcd(a, m)
    if target % g:
        return None
    mod = m // g
    n0 = (target // g) * pow(a // g, -1, mod) % mod if mod > 1 else 0
    best = None
    for n in (n0, n0 - mod):
        if abs(n) <= bound and (best is None or (abs(n), n < 0) < (abs(best), best < 0)):
            best = n
    return best


def _minimum(f, els):
    best = els[0]
    for k in els[1:]:
        if compare(f, k, best) < 0:
            best = k
    return best


def _not_af_witness(f, line_k, pool):
    """An ultrametric violation, with the orientation used to read it."""
    orient, evidence = 1, None
    for k in pool:
        if positive(f, k):
            b = f.balanced(k)
            orient = 1 if b > 0 else -1
            evidence = {"element": str(k), "value": f.value(k), "onePlus": 0}
            break
    cands = list(line_elements(f.model, line_k))
    cands += [c for c in pool[:60] if c not in cands]

    def lv(k):
        return orient * f.balanced(k)

    for strict in (True, False):
        for i, x in enumerate(cands):
            for y in cands[i:]:
                s = x + y
                if s.is_zero():
                    continue
                a, b, c = lv(x), lv(y), lv(s)
                if strict and c < min(a, b):
                    return _witness(f, x, y, s, orient, evidence, "strict")
                if not strict and a != b and c != min(a, b):
                    return _witness(f, x, y, s, orient, evidence, "equality")
    return {"kind": "line", "module": ["1", str(line_k)], "values": line_values(f, line_k),
            "orientation": orient, "evidence": evidence}


def _witness(f, x, y, s, orient, evidence, clause):
    return {"kind": "ultrametric", "clause": clause, "x": str(x), "y": str(y), "sum": str(s),
            "values": [f.value(x), f.value(y), f.value(s)], "orientation": orient,
            "evidence": evidence}


def verify_ultrametric_witness(f, w):
    """Re-check a NotAF witness against f."""
    if w.get("kind") != "ultrametric":
        vals = line_values(f, f.model.element(w["module"][1]))
        return not p1_af(vals)
    x, y = f.model.element(w["x"]), f.model.element(w["y"])
    s = x + y
    o = w["orientation"]
    a, b, c = o * f.balanced(x), o * f.balanced(y), o * f.balanced(s)
    if w["clause"] == "strict":
        return c < min(a, b)
    return a != b and c != min(a, b)


def reconstruct_valuation(f, D=DEFAULT_DEGREE, horizon=HORIZON, pairs=AXIOM_PAIRS, seed=0,
                          planes=PLANE_SAMPLES, budget=None):
    model = f.model
    lines = pool_lines(model, D) if budget is None else pool_lines(model, D, budget)
    pool = model.pool(D)
    for k in lines:
        if not p1_af(line_values(f, k)):
            raise NotAF("f is not AF on <1, %s>" % k, witness=_not_af_witness(f, k, pool))
    bad = _certify(f, [], sample_planes(model, lines, planes, seed), {})
    if bad is not None:
        raise NotAF("f is not AF on a sampled plane", witness={"kind": "plane", **bad})

    flags = [positive(f, k) for k in pool]
    pos = [k for k, b in zip(pool, flags) if b]
    if not pos:
        if any(f.value(k) for k in pool):
            raise UnhandledConfiguration("f is nonzero but no element is positive")
        res = ReconstructionResult("trivial", [], [], f, horizon)
    else:
        g1 = _minimum(f, pos)
        beyond = _power(g1, horizon)
        far = [k for k in pos if compare(f, k, beyond) > 0]
        if not far:
            res = ReconstructionResult("Z", [g1], [f.value(g1)], f, horizon)
        else:
            g2 = _minimum(f, far)
            res = ReconstructionResult("Z2-lex", [g1, g2], [f.value(g1), f.value(g2)], f, horizon)
    res.checks = {"bound": 4 * horizon, "bound2": 4 * D}
    res.checks.update(_validate(res, pool, flags, pairs, seed))
    return res


def _validate(res, pool, flags, pairs, seed):
    """Order, axiom and O / m checks on sampled pairs; raises AxiomFailure."""
    f = res.f
    rng = random.Random(seed)
    nus = {}

    def nu(k):
        v = nus.get(k)
        if v is None:
            v = nus[k] = res.nu(k)
        return v

    for k, b in zip(pool, flags):
        if (res.sign(nu(k)) > 0) != b:
            raise AxiomFailure("membership in m disagrees with f", witness=str(k))
    order = axioms = units = 0
    for _ in range(pairs):
        a, b = rng.choice(pool), rng.choice(pool)
        va, vb = nu(a), nu(b)
        c = compare(f, a, b)
        if c != res.sign(_sub(va, vb)) and c != 0:
            raise AxiomFailure("order disagrees with f", witness=(str(a), str(b)))
        order += 1
        if res.add(va, vb) != res.nu(a * b):
            raise AxiomFailure("nu(ab) != nu(a) + nu(b)", witness=(str(a), str(b)))
        s = a + b
        if not s.is_zero():
            vs, lo = res.nu(s), min(va, vb)
            if vs < lo or (va != vb and vs != lo):
                raise AxiomFailure("ultrametric law fails", witness=(str(a), str(b)))
        axioms += 1
        if res.sign(va) == 0:
            # units invert inside O minus m
            if res.sign(res.nu(a.inverse())) != 0:
                raise AxiomFailure("inverse of a unit left O* ", witness=str(a))
            if res.sign(vb) > 0:
                e = (a + b) * a - a * a
                if not e.is_zero() and res.sign(res.nu(e)) <= 0:
                    raise AxiomFailure("(u + m)u - u^2 not in m", witness=(str(a), str(b)))
            units += 1
    return {"pool": len(pool), "orderPairs": order, "axiomPairs": axioms, "unitChecks": units}


def _sub(a, b):
    if isinstance(a, tuple):
        return (a[0] - b[0], a[1] - b[1])
    return a - b
