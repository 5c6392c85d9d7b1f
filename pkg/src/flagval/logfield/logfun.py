"""Logarithmic functions on the model fields, with values in Z_p mod p^N."""

import itertools
import json

import numpy as np

from ..errors import DependentBasis, InputError, ZeroElement
from ..functions import FullTable
from ..geometry.projective import projective_space
from ..lattice import is_prime
from ..padic import DEFAULT_PRECISION, PadicInteger
from .models import Bivariate, Univariate, model_from_json
from .valuations import MonomialValuation, Place, PlaceValuation, valuation_from_json

DEFAULT_P = 2


class LogFunction:
    """f: K* -> Z/p^N with f(ab) = f(a) + f(b) and f = 0 on F_q*."""

    def __init__(self, model, p=DEFAULT_P, N=DEFAULT_PRECISION):
        if not is_prime(p):
            raise InputError("p must be prime")
        self.model = model
        self.p = p
        self.N = N
        self.modulus = p ** N

    def raw(self, k):
        raise NotImplementedError

    def value(self, k):
        """Residue mod p^N."""
        if k.is_zero():
            raise ZeroElement("f is not defined at 0")
        return self.raw(k) % self.modulus

    def balanced(self, k):
        v = self.value(k)
        return v - self.modulus if v > self.modulus // 2 else v

    def __call__(self, k):
        return self.value(k)

    def combine(self, lam, other, mu=1):
        """lam*self + mu*other, simplified when both have the same shape."""
        return combination([(lam, self), (mu, other)])

    def scaled(self, lam):
        return combination([(lam, self)])


class PlaceWeights(LogFunction):
    def __init__(self, model, weights, p=DEFAULT_P, N=DEFAULT_PRECISION):
        super().__init__(model, p, N)
        if not isinstance(model, Univariate):
            raise InputError("place weights live on the univariate model")
        self.weights = {pl: int(w) for pl, w in weights.items() if int(w) % self.modulus}

    def raw(self, k):
        return sum(w * pl.order(k) for pl, w in self.weights.items())

    def to_json(self):
        items = sorted(self.weights.items(), key=lambda t: (t[0].poly is None, t[0].degree, t[0].poly or ()))
        return {"model": self.model.to_json(), "weights": [[pl.name, w] for pl, w in items],
                "p": self.p, "precision": self.N}


class Character(LogFunction):
    """chi o nu for a model valuation nu; chi is given by its values on the scale generators."""

    def __init__(self, model, valuation, on_generators, p=DEFAULT_P, N=DEFAULT_PRECISION):
        super().__init__(model, p, N)
        self.valuation = valuation
        self.on_generators = tuple(int(a) for a in on_generators)
        want = 2 if isinstance(valuation, MonomialValuation) and valuation.kind != "weight" else 1
        if len(self.on_generators) != want:
            raise InputError("character needs %d generator value(s)" % want)
        if isinstance(valuation, MonomialValuation) and not isinstance(model, Bivariate):
            raise InputError("monomial valuations live on the bivariate model")
        if isinstance(valuation, PlaceValuation) and not isinstance(model, Univariate):
            raise InputError("place valuations live on the univariate model")

    def chi(self, v):
        if len(self.on_generators) == 1:
            return self.on_generators[0] * v
        i, j = self.valuation.exponents(v)
        a, b = self.on_generators
        return a * i + b * j

    def raw(self, k):
        return self.chi(self.valuation.value(k))

    def to_json(self):
        v = self.valuation.to_json()
        name = v["kind"] if v["kind"] in ("lex", "revlex") else v
        return {"model": self.model.to_json(),
                "character": {"onGenerators": list(self.on_generators), "valuation": name},
                "p": self.p, "precision": self.N}


class Combination(LogFunction):
    def __init__(self, terms):
        f0 = terms[0][1]
        super().__init__(f0.model, f0.p, f0.N)
        self.terms = [(int(l), f) for l, f in terms]

    def raw(self, k):
        return sum(l * f.raw(k) for l, f in self.terms)

    def to_json(self):
        return {"model": self.model.to_json(), "combination": [[l, f.to_json()] for l, f in self.terms],
                "p": self.p, "precision": self.N}


def combination(terms):
    """sum of lam_i * f_i, folded into PlaceWeights / Character when possible."""
    terms = [(int(l), f) for l, f in terms]
    flat = []
    for l, f in terms:
        if isinstance(f, Combination):
            flat.extend((l * l2, f2) for l2, f2 in f.terms)
        else:
            flat.append((l, f))
    f0 = flat[0][1]
    if any(f.p != f0.p or f.N != f0.N or f.model != f0.model for _, f in flat):
        raise InputError("combined functions must share model, p and precision")
    if all(isinstance(f, PlaceWeights) for _, f in flat):
        w = {}
        for l, f in flat:
            for pl, x in f.weights.items():
                w[pl] = w.get(pl, 0) + l * x
        return PlaceWeights(f0.model, w, f0.p, f0.N)
    if all(isinstance(f, Character) and f.valuation == f0.valuation for _, f in flat):
        g = [sum(l * f.on_generators[i] for l, f in flat) for i in range(len(f0.on_generators))]
        return Character(f0.model, f0.valuation, g, f0.p, f0.N)
    return Combination(flat)


def eval_log(f, k):
    if isinstance(k, str):
        k = f.model.element(k)
    return PadicInteger(f.value(k), f.p, f.N)


def ord_place(model, place, weight=1, p=DEFAULT_P, N=DEFAULT_PRECISION):
    if isinstance(place, str):
        place = Place.parse(place, model.q)
    return PlaceWeights(model, {place: weight}, p, N)


def subspace_elements(model, basis):
    """Field element for every point of P(V) (canonical representatives, point order)."""
    n = len(basis)
    space = projective_space(model.q, n - 1)
    out = []
    for v in space.points:
        e = model.const(0)
        for c, b in zip(v, basis):
            if c:
                e = e + b * c
        out.append(e)
    return space, out


def restrict_to_subspace(f, basis):
    """The FullTable of f on P(V), V spanned over F_q by `basis`."""
    basis = [f.model.element(b) for b in basis]
    if not 1 <= len(basis) <= 4:
        raise ValueError("subspaces of dimension 1..4 only")
    space, els = subspace_elements(f.model, basis)
    vals = []
    for v, e in zip(space.points, els):
        if e.is_zero():
            raise DependentBasis("basis is linearly dependent over F_%d" % f.model.q, witness=list(v))
        vals.append(f.value(e))
    return FullTable.from_points(f.model.q, len(basis), vals)


def logfunction_from_json(d):
    if isinstance(d, str):
        d = json.loads(d)
    try:
        model = model_from_json(d["model"])
        p = int(d.get("p", DEFAULT_P))
        N = int(d.get("precision", DEFAULT_PRECISION))
        if "weights" in d:
            w = {}
            for name, x in d["weights"]:
                pl = Place.parse(name, model.q)
                w[pl] = w.get(pl, 0) + int(x)
            return PlaceWeights(model, w, p, N)
        if "character" in d:
            c = d["character"]
            val = valuation_from_json(c.get("valuation", "lex"), model)
            return Character(model, val, c["onGenerators"], p, N)
        if "combination" in d:
            return combination([(l, logfunction_from_json(g)) for l, g in d["combination"]])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("malformed log function: %s" % e)
    raise InputError("log function needs 'weights', 'character' or 'combination'")


__all__ = ["LogFunction", "PlaceWeights", "Character", "Combination", "combination", "eval_log",
           "ord_place", "restrict_to_subspace", "subspace_elements", "logfunction_from_json"]
