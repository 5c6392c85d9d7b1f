"""c-pairs of logarithmic functions, AF elements in their span, bad subspaces, corank."""

import random
from dataclasses import dataclass, field

from ..af.check import check_af
from ..af.verdicts import Certified
from ..errors import BudgetExceeded, DependentBasis, NotACPair
from .logfun import combination, restrict_to_subspace

DEFAULT_DEGREE = 3
DEFAULT_BUDGET = 200000
PLANE_SAMPLES = 60


def line_elements(model, k):
    """Points of P(<1, k>) in point order: k, 1, 1 + k, 1 + 2k, ..."""
    one = model.one()
    return [k] + [one + k * c for c in range(model.q)]


def line_values(f, k):
    return [f.value(e) for e in line_elements(f.model, k)]


def p1_af(vals):
    """On P^1(F_q) a function is AF iff it is constant off at most one point."""
    n = len(vals)
    return max(vals.count(v) for v in set(vals)) >= n - 1


def pool_lines(model, D, budget=DEFAULT_BUDGET):
    """Non-constant pool elements k; the modules <1, k> (shifts cover <a, b> with b/a = k)."""
    pool = model.pool(D)
    lines = [k for k in pool if not _is_const(k)]
    if len(lines) > budget:
        raise BudgetExceeded("pool of degree %d has %d modules, budget is %d" % (D, len(lines), budget),
                             witness={"modules": len(lines), "budget": budget})
    return lines


def _is_const(k):
    if hasattr(k, "n"):
        return set(k.n) <= {(0, 0)} and set(k.d) <= {(0, 0)}
    return len(k.num) <= 1 and len(k.den) <= 1


def sample_planes(model, lines, count=PLANE_SAMPLES, seed=0):
    """Deterministic sample of independent triples (1, a, b) from the pool."""
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < 50 * count and len(lines) > 1:
        tries += 1
        a, b = rng.sample(lines, 2)
        basis = [model.one(), a, b]
        if _independent(model, basis):
            out.append(basis)
    return out


def _independent(model, basis):
    from .logfun import subspace_elements
    _, els = subspace_elements(model, basis)
    return not any(e.is_zero() for e in els)


def _collinear_mod(points, m):
    x0, y0 = points[0]
    d = [((x - x0) % m, (y - y0) % m) for x, y in points[1:]]
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            if (d[i][0] * d[j][1] - d[i][1] * d[j][0]) % m:
                return (0, i + 1, j + 1)
    return None


@dataclass
class CPairResult:
    passed: bool
    modules: int
    degree: int
    witness: dict = None
    precision: int = 0

    @property
    def kind(self):
        return "pass" if self.passed else "fail"

    def to_json(self):
        return {"kind": self.kind, "modules": self.modules, "degree": self.degree,
                "precision": self.precision, "witness": self.witness}


def is_c_pair_field(f1, f2, D=DEFAULT_DEGREE, budget=DEFAULT_BUDGET):
    """Rank of <f1, f2, 1> restricted to every pool module <1, k> is at most 2."""
    if f1.model != f2.model or f1.modulus != f2.modulus:
        raise ValueError("f1 and f2 must share model, p and precision")
    lines = pool_lines(f1.model, D, budget)
    m = f1.modulus
    for n, k in enumerate(lines):
        els = line_elements(f1.model, k)
        pts = [(f1.value(e), f2.value(e)) for e in els]
        bad = _collinear_mod(pts, m)
        if bad is not None:
            w = {"module": ["1", str(k)],
                 "points": [str(els[i]) for i in bad],
                 "values": [[pts[i][0], pts[i][1]] for i in bad]}
            return CPairResult(False, n + 1, D, w, f1.N)
    return CPairResult(True, len(lines), D, None, f1.N)


def verify_cpair_witness(f1, f2, w):
    """The three points of the module carry non-collinear (f1, f2) images."""
    model = f1.model
    els = [model.element(s) for s in w["points"]]
    pts = [(f1.value(e), f2.value(e)) for e in els]
    return _collinear_mod(pts, f1.modulus) is not None


# -- AF elements in the span ------------------------------------------------------


def _certify(g, lines, planes, cache):
    """None if g passes every pool line and sampled plane, else the refuting subspace."""
    for k in lines:
        vals = line_values(g, k)
        if not p1_af(vals):
            return {"basis": ["1", str(k)], "values": vals}
    for basis in planes:
        t = restrict_to_subspace(g, basis)
        key = tuple(t.point_values())
        v = cache.get(key)
        if v is None:
            v = cache[key] = check_af(t)
        if not isinstance(v, Certified):
            return {"basis": [str(b) for b in basis], "values": list(key), "verdict": v.to_json()}
    return None


def _certificate(g, lines, planes):
    """Certified filtrations for every distinct restriction pattern seen on lines and planes."""
    patterns = {}
    q = g.model.q
    for k in lines:
        vals = tuple(line_values(g, k))
        patterns.setdefault((2, vals), ["1", str(k)])
    for basis in planes:
        t = restrict_to_subspace(g, basis)
        patterns.setdefault((3, tuple(t.point_values())), [str(b) for b in basis])
    from ..functions import FullTable
    certs = []
    for (n, vals), basis in sorted(patterns.items(), key=lambda t: (t[0][0], t[0][1])):
        v = check_af(FullTable.from_points(q, n, list(vals)))
        if not isinstance(v, Certified):
            return None
        certs.append({"basis": basis, "values": list(vals), "filtration": v.filtration.to_json()})
    return {"lines": len(lines), "planes": len(planes), "patterns": certs}


def span_candidates(f, bound=None):
    """(lam1, lam2) representatives: (1, 0), (0, 1), then (1, l) and (l, 1) for small l."""
    bound = bound if bound is not None else max(4, f.p)
    m = f.modulus
    out = [(1, 0), (0, 1)]
    for l in range(1, bound + 1):
        for c in ((1, l), (1, (-l) % m), (l, 1), ((-l) % m, 1)):
            if c not in out:
                out.append(c)
    return out


@dataclass
class AFElement:
    lam1: int
    lam2: int
    function: object
    certificate: dict
    kind: str = "af-element"

    def to_json(self):
        return {"kind": self.kind, "lambda": [self.lam1, self.lam2],
                "function": self.function.to_json(), "certificate": self.certificate}


@dataclass
class NotFound:
    candidates: list
    refutations: list
    kind: str = "not-found"

    def to_json(self):
        return {"kind": self.kind, "candidates": [list(c) for c in self.candidates],
                "refutations": self.refutations}


def find_af_in_span(f1, f2, D=DEFAULT_DEGREE, bound=None, planes=PLANE_SAMPLES, seed=0,
                    budget=DEFAULT_BUDGET, check_pair=True):
    if check_pair:
        cp = is_c_pair_field(f1, f2, D, budget)
        if not cp.passed:
            raise NotACPair("f1, f2 do not form a c-pair", witness=cp.witness)
    lines = pool_lines(f1.model, D, budget)
    plane_list = sample_planes(f1.model, lines, planes, seed)
    cache = {}
    refutations = []
    cands = span_candidates(f1, bound)
    for l1, l2 in cands:
        g = combination([(l1, f1), (l2, f2)])
        if all(g.value(k) == 0 for k in lines[:50]) and _vanishes(g, lines):
            continue
        bad = _certify(g, lines, plane_list, cache)
        if bad is None:
            cert = _certificate(g, lines, plane_list)
            if cert is not None:
                return AFElement(l1, l2, g, cert)
        refutations.append({"lambda": [l1, l2], "subspace": bad})
    return NotFound(cands, refutations)


def _vanishes(g, lines):
    return all(g.value(k) == 0 for k in lines)


def is_af_on_pool(f, D=DEFAULT_DEGREE, planes=PLANE_SAMPLES, seed=0, budget=DEFAULT_BUDGET):
    """None if f passes all pool lines and sampled planes, else the refuting subspace."""
    lines = pool_lines(f.model, D, budget)
    return _certify(f, lines, sample_planes(f.model, lines, planes, seed), {})


# -- a 3-dimensional subspace with no AF span element -----------------------------


@dataclass
class BadSubspace:
    basis: list
    mu1: int
    refutations: list
    kind: str = "bad-subspace"

    def to_json(self):
        return {"kind": self.kind, "basis": [str(b) for b in self.basis], "mu1": self.mu1,
                "refutations": self.refutations}


def _solve_mu(u, w, m, p):
    """mu with w - mu*u constant on the line (mod m), or None."""
    du = [(x - u[0]) % m for x in u[1:]]
    dw = [(x - w[0]) % m for x in w[1:]]
    best = None
    for a, b in zip(du, dw):
        if a:
            v = 0
            while a % p ** (v + 1) == 0:
                v += 1
            if best is None or v < best[0]:
                best = (v, a, b)
    if best is None:
        return None
    v, a, b = best
    if b % p ** v:
        return None
    mod = m // p ** v
    mu = ((b // p ** v) * pow(a // p ** v, -1, mod)) % mod if mod > 1 else 0
    if all((y - mu * x) % m == 0 for x, y in zip(du, dw)):
        return mu
    return mu  # best effort; the final sweep decides


def find_bad_subspace(f1, f2, D=DEFAULT_DEGREE, bound=None, budget=DEFAULT_BUDGET, attempts=20):
    model = f1.model
    lines = pool_lines(model, D, budget)
    m, p = f1.modulus, f1.p
    bad1 = [k for k in lines if not p1_af(line_values(f1, k))]
    if not bad1:
        return None
    cands = [(l1, l2) for l1, l2 in span_candidates(f1, bound)]
    for k in bad1[:attempts]:
        u, w = line_values(f1, k), line_values(f2, k)
        mu = _solve_mu(u, w, m, p)
        if mu is None:
            mu = 0
        g = combination([(1, f2), (-mu, f1)])
        zero = _vanishes(g, lines)
        if zero:
            wlist = [None]
        else:
            wlist = [r for r in lines if not p1_af(line_values(g, r))][:attempts]
            if not wlist:
                return None
        for rho in wlist:
            for x1 in (model.one(), k, model.one() + k):
                third = lines[0] if rho is None else rho * x1
                basis = [model.one(), k, third]
                if rho is None:
                    basis = next(([model.one(), k, z] for z in lines if _independent(model, [model.one(), k, z])), None)
                    if basis is None:
                        break
                elif not _independent(model, basis):
                    continue
                refs = _sweep(f1, g, basis, cands)
                if refs is not None:
                    return BadSubspace(basis, mu, refs)
    return None


def _sweep(f1, g, basis, cands):
    """check_af refutations of every nonzero candidate on V, or None if one is AF."""
    refs = []
    for l1, l2 in cands:
        h = combination([(l1, f1), (l2, g)])
        try:
            t = restrict_to_subspace(h, basis)
        except DependentBasis:
            return None
        if len(set(t.point_values())) == 1 and t.point_values()[0] == 0:
            continue  # the zero function
        v = check_af(t)
        if isinstance(v, Certified):
            return None
        refs.append({"lambda": [l1, l2], "verdict": v.to_json()})
    return refs


# -- inertia and corank -----------------------------------------------------------


@dataclass
class InertiaResult:
    passed: bool
    witness: dict = None
    checked: int = 0

    @property
    def kind(self):
        return "pass" if self.passed else "fail"

    def to_json(self):
        return {"kind": self.kind, "checked": self.checked, "witness": self.witness}


def inertia_check(f, nu, D=DEFAULT_DEGREE, samples=2000, seed=0):
    """f depends only on nu over the pool, and vanishes on sampled 1 + m."""
    pool = f.model.pool(D)
    seen = {}
    for k in pool:
        v = nu.value(k)
        fv = f.value(k)
        prev = seen.setdefault(v, (k, fv))
        if prev[1] != fv:
            return InertiaResult(False, {"kind": "fiber", "k1": str(prev[0]), "k2": str(k),
                                         "valuation": _jv(v), "values": [prev[1], fv]}, len(seen))
    ms = [k for k in pool if nu.sign(nu.value(k)) > 0]
    rng = random.Random(seed)
    one = f.model.one()
    for _ in range(min(samples, len(ms) * 4) if ms else 0):
        a = rng.choice(ms)
        b = rng.choice(pool)
        mm = a * b if nu.sign(nu.value(a * b)) > 0 else a
        e = one + mm
        if e.is_zero():
            continue
        if f.value(e) != 0:
            return InertiaResult(False, {"kind": "one-plus-m", "m": str(mm), "value": f.value(e)}, len(pool))
    return InertiaResult(True, None, len(pool))


def _jv(v):
    return list(v) if isinstance(v, tuple) else v


@dataclass
class Corank:
    af_part: list
    quotient: object
    kind: str = "corank"

    def to_json(self):
        return {"kind": self.kind,
                "afPart": [{"function": g.to_json(), "lambda": lam} for g, lam in self.af_part],
                "quotient": None if self.quotient is None else self.quotient.to_json()}


def af_corank(fs, D=DEFAULT_DEGREE, bound=None, budget=DEFAULT_BUDGET, planes=PLANE_SAMPLES):
    """AF elements spanning a corank-<=1 part of <fs>, plus at most one residual generator."""
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            cp = is_c_pair_field(fs[i], fs[j], D, budget)
            if not cp.passed:
                raise NotACPair("functions %d and %d do not form a c-pair" % (i, j), witness=[i, j])
    status = [is_af_on_pool(f, D, planes, budget=budget) is None for f in fs]
    n = len(fs)
    if all(status):
        part = []
        for i, f in enumerate(fs):
            lam = [0] * n
            lam[i] = 1
            part.append((f, lam))
        return Corank(part, None)
    i0 = status.index(False)
    part = []
    for j, f in enumerate(fs):
        if j == i0:
            continue
        lam = [0] * n
        if status[j]:
            lam[j] = 1
            part.append((f, lam))
            continue
        r = find_af_in_span(fs[i0], f, D, bound, planes, budget=budget, check_pair=False)
        if isinstance(r, AFElement) and r.lam2 % f.p:
            lam[i0], lam[j] = r.lam1, r.lam2
            part.append((r.function, lam))
        else:
            raise NotACPair("no AF combination of functions %d and %d found" % (i0, j), witness=[i0, j])
    return Corank(part, fs[i0])
