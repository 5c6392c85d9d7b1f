"""Exhaustive and sampled harnesses for the rank-2, rank-3 and plane lemmas."""

import itertools
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..af.check import check_af
from ..af.examples import fano_table
from ..af.funceq import basis_condition, check_functional_equation
from ..af.verdicts import Certified, Exceptional
from ..errors import BudgetExceeded
from ..functions import DepthK, FullTable, enumerate_primitive_classes
from ..lattice import INTEGERS, Lattice, Window
from .phi import Ring, image_shape, line_condition, phi_image, ShapeViolation
from .projective import projective_space
from .reduction import find_three_point_reduction, search_no_af_cpairs
from .threepoint import batch_analysis, batch_predictions

DEFAULT_BUDGET = 1 << 24
PROPOSITIONS = ("z2-p", "red2-p", "2-coeff", "fano", "agf", "restr3-sample", "line-point", "lemma-h")


@dataclass
class Report:
    proposition: str
    q: int
    instances: int = 0
    hypothesis_satisfied: int = 0
    conclusion_holds: int = 0
    counterexamples: list = field(default_factory=list)
    wall_ms: int = 0
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.counterexamples

    def to_json(self):
        return {"proposition": self.proposition, "q": self.q, "instances": self.instances,
                "hypothesisSatisfied": self.hypothesis_satisfied,
                "conclusionHolds": self.conclusion_holds,
                "violations": self.counterexamples, "details": self.details,
                "wallTimeMs": self.wall_ms}


def default_jobs():
    env = os.environ.get("FLAGVAL_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _budget(count, budget, what):
    if count > budget:
        raise BudgetExceeded("%s needs %d instances, budget is %d" % (what, count, budget),
                             witness={"instances": count, "budget": budget})


# -- a brute-force AF oracle on projective spaces ----------------------------

def subspaces_by_rank(space):
    """{rank: [point masks]} for every nonzero subspace, built by adjoining points."""
    out = {1: [1 << i for i in range(space.size)]}
    for r in range(2, space.n + 1):
        seen = {}
        for m in out[r - 1]:
            for i in range(space.size):
                if not m >> i & 1:
                    seen.setdefault(space.closure(m | (1 << i)), None)
        out[r] = sorted(seen)
    return out


def brute_af_batch(space, V):
    """AF on the whole space for each row of V, straight from the definition.

    A subspace W carries an AF restriction iff it is a point, or some
    hyperplane H of W has f constant on W minus H and AF on H. Every flag
    can be refined to pass through a hyperplane, so this covers all flags.
    """
    V = np.asarray(V)
    subs = subspaces_by_rank(space)
    af = {m: np.ones(len(V), dtype=bool) for m in subs[1]}
    for r in range(2, space.n + 1):
        for W in subs[r]:
            res = np.zeros(len(V), dtype=bool)
            for H in subs[r - 1]:
                if H & W != H:
                    continue
                idx = space.mask_points(W & ~H)
                const = (V[:, idx] == V[:, idx[:1]]).all(axis=1)
                res |= const & af[H]
            af[W] = res
    return af


def line_af_all(space, V):
    """Every line restriction of a Z/2 function is AF (constant off at most one point)."""
    ok = np.ones(len(V), dtype=bool)
    q = space.q
    for m in space.lines():
        cnt = V[:, space.mask_points(m)].sum(axis=1)
        ok &= (cnt <= 1) | (cnt >= q)
    return ok


def _bits(count, n):
    return ((np.arange(count, dtype=np.int64)[:, None] >> np.arange(n - 1, -1, -1)) & 1)


# -- harnesses ----------------------------------------------------------------

def verify_z2p(q, budget=DEFAULT_BUDGET, jobs=1):
    space = projective_space(q, 1)
    n = space.size
    _budget(2 ** n, budget, "z2-p")
    V = _bits(2 ** n, n)
    oracle = brute_af_batch(space, V)[space.full]
    ones = V.sum(axis=1)
    shape = (ones <= 1) | (ones >= n - 1)
    rep = Report("z2-p", q, instances=len(V), hypothesis_satisfied=len(V))
    engine_count = 0
    for row, o, s in zip(V, oracle, shape):
        e = isinstance(check_af(FullTable.from_point_codes(q, 2, row, (0, 1))), Certified)
        engine_count += e
        if e == o == s:
            rep.conclusion_holds += 1
        else:
            rep.counterexamples.append({"points": row.tolist(), "engine": bool(e),
                                        "oracle": bool(o), "shape": bool(s)})
    rep.details = {"afEngine": int(engine_count), "afOracle": int(oracle.sum()),
                   "constantsPlusOneOff": int(shape.sum())}
    return rep


def verify_red2p(q, budget=DEFAULT_BUDGET, jobs=1):
    if q == 2:
        raise ValueError("red2-p needs q > 2 (the Fano plane is the known exception)")
    space = projective_space(q, 2)
    n = space.size
    _budget(2 ** n, budget, "red2-p")
    V = _bits(2 ** n, n)
    hyp = line_af_all(space, V)
    rep = Report("red2-p", q, instances=len(V), hypothesis_satisfied=int(hyp.sum()))
    for row in V[hyp]:
        v = check_af(FullTable.from_point_codes(q, 3, row, (0, 1)))
        if isinstance(v, Certified):
            rep.conclusion_holds += 1
        else:
            rep.counterexamples.append({"points": row.tolist(), "verdict": v.kind})
    return rep


def _two_coeff_chunk(args):
    q, prefix, rest = args
    space = projective_space(q, 2)
    n = space.size
    tail = np.array(list(itertools.product(range(3), repeat=rest)), dtype=np.int64)
    head = np.array(prefix, dtype=np.int64)
    L = np.concatenate([np.tile(head, (len(tail), 1)), tail], axis=1).reshape(len(tail), n)
    adm, af, present = batch_analysis(space, L)
    L, af, present = L[adm], af[adm], present[adm]
    empty = ~af.any(axis=1)
    bad_pred = batch_predictions(space, L, present, af)
    out = {"admissible": int(adm.sum()), "nonempty": int((~empty).sum()),
           "predictionFailures": int(bad_pred.sum()),
           "bad": [L[i].tolist() for i in np.nonzero(empty | bad_pred)[0][:5]]}
    return out


def verify_two_coeff(q, budget=DEFAULT_BUDGET, jobs=1):
    space = projective_space(q, 2)
    n = space.size
    _budget(3 ** n, budget, "2-coeff")
    k = min(4, n)
    chunks = [(q, p, n - k) for p in itertools.product(range(3), repeat=k)]
    parts = _map(_two_coeff_chunk, chunks, jobs)
    rep = Report("2-coeff", q, instances=3 ** n)
    rep.hypothesis_satisfied = sum(p["admissible"] for p in parts)
    rep.conclusion_holds = sum(p["nonempty"] for p in parts)
    rep.details["predictionFailures"] = sum(p["predictionFailures"] for p in parts)
    for p in parts:
        rep.counterexamples.extend({"labels": b} for b in p["bad"])
    return rep


def verify_fano(q=2, budget=DEFAULT_BUDGET, jobs=1):
    """The Fano plane: every function with AF lines but not AF must be the minority-triangle pattern."""
    if q != 2:
        raise ValueError("the Fano check lives on P^2(F_2)")
    space = projective_space(2, 2)
    V = _bits(2 ** space.size, space.size)
    hyp = line_af_all(space, V)
    oracle = brute_af_batch(space, V)[space.full]
    rep = Report("fano", 2, instances=len(V), hypothesis_satisfied=int(hyp.sum()))
    exceptional = 0
    for row, o in zip(V[hyp], oracle[hyp]):
        v = check_af(FullTable.from_point_codes(2, 3, row, (0, 1)))
        agrees = isinstance(v, Certified) == bool(o)
        if not agrees:
            rep.counterexamples.append({"points": row.tolist(), "verdict": v.kind, "oracle": bool(o)})
        elif isinstance(v, Certified):
            rep.conclusion_holds += 1
        elif isinstance(v, Exceptional) and v.pattern == "fano":
            exceptional += 1
            rep.conclusion_holds += 1
        else:
            rep.counterexamples.append({"points": row.tolist(), "verdict": v.kind})
    f = fano_table()
    v = check_af(f)
    codes = np.array([f.point_values()]) % 2
    kind = v.to_json()["kind"]
    rep.details = {"notAFWithAFLines": exceptional, "example": kind,
                   "exampleLinesAF": bool(line_af_all(space, codes)[0])}
    if kind != "exceptional:fano":
        rep.counterexamples.append({"example": kind})
    return rep


def find_basis(f, box=2):
    """First (a, b) in norm order with det +-1 and f(a) = f(a+b) != f(b)."""
    r = range(-box, box + 1)
    vs = [v for v in itertools.product(r, repeat=2) if any(v)]
    vs.sort(key=lambda t: (max(map(abs, t)), sum(map(abs, t)), tuple(-x for x in t)))
    for a in vs:
        for b in vs:
            if basis_condition(f, a, b) is None:
                return a, b
    return None


def agf_functions(samples=1000, seed=0):
    """All Z/2 functions induced from (Z/4)^2, then `samples` random ones from (Z/8)^2."""
    lat = Lattice(INTEGERS, 2)
    reps = enumerate_primitive_classes(lat, 4)
    for bits in itertools.product((0, 1), repeat=len(reps)):
        yield DepthK(2, 2, 2, list(zip(reps, bits)), window=Window(4, 2))
    reps8 = enumerate_primitive_classes(lat, 8)
    rng = random.Random(seed)
    for _ in range(samples):
        yield DepthK(2, 3, 2, list(zip(reps8, [rng.randint(0, 1) for _ in reps8])), window=Window(4, 3))


def verify_agf(q=2, budget=DEFAULT_BUDGET, jobs=1, samples=1000, seed=0):
    if q != 2:
        raise ValueError("the functional-equation sweep uses p = 2")
    _budget(64 + samples, budget, "agf")
    rep = Report("agf", q)
    for f in agf_functions(samples, seed):
        rep.instances += 1
        if len(f.attained_codes()) != 2:
            continue
        ab = find_basis(f)
        if ab is None:
            continue
        if check_functional_equation(f, ab, box=4).kind != "holds":
            continue
        rep.hypothesis_satisfied += 1
        v = check_af(f)
        if isinstance(v, Certified):
            rep.conclusion_holds += 1
        else:
            rep.counterexamples.append({"entries": [[list(r), int(x)] for r, x in f.entries()],
                                        "basis": [list(ab[0]), list(ab[1])], "verdict": v.kind})
    return rep


def _random_flag_function(space, rng):
    """Random AF Z/2 function: a random maximal flag with random layer values."""
    pts = list(range(space.size))
    rng.shuffle(pts)
    chain = [0]
    for i in pts:
        m = space.closure(chain[-1] | (1 << i))
        if m != chain[-1]:
            chain.append(m)
    vals = np.zeros(space.size, dtype=np.int64)
    for small, big in zip(chain, chain[1:]):
        vals[space.mask_points(big & ~small)] = rng.randint(0, 1)
    return vals


def verify_restr3(q=2, budget=DEFAULT_BUDGET, jobs=1, samples=4000, seed=0):
    """Rank-3 sufficiency on P^3(F_q): exhaustive for q = 2, sampled perturbations otherwise."""
    space = projective_space(q, 3)
    n = space.size
    rng = random.Random(seed)
    if 2 ** n <= budget and q == 2:
        V = _bits(2 ** n, n)
        mode = "exhaustive"
    else:
        _budget(samples, budget, "restr3-sample")
        rows = []
        for i in range(samples):
            v = _random_flag_function(space, rng)
            for _ in range(i % 3):
                j = rng.randrange(n)
                v[j] ^= 1
            rows.append(v)
        V = np.array(rows)
        mode = "sampled"
    af = brute_af_batch(space, V)
    planes = subspaces_by_rank(space)[3]
    hyp = np.ones(len(V), dtype=bool)
    for P in planes:
        hyp &= af[P]
    rep = Report("restr3-sample", q, instances=len(V), hypothesis_satisfied=int(hyp.sum()))
    rep.details = {"mode": mode, "oracleAF": int(af[space.full].sum())}
    for row, o in zip(V[hyp], af[space.full][hyp]):
        v = check_af(FullTable.from_point_codes(q, 4, row, (0, 1)))
        if isinstance(v, Certified) and o:
            rep.conclusion_holds += 1
        else:
            rep.counterexamples.append({"points": row.tolist(), "verdict": v.kind, "oracle": bool(o)})
    return rep


def random_cpair(space, p, rng, tries=200):
    """A random pair of Z/p-functions on P^2(F_q) whose line images are collinear."""
    ring = Ring("Z/p", p)
    lines = [space.mask_points(m) for m in space.lines()]
    on = [[l for l in lines if i in l] for i in range(space.size)]
    images = [(x, y) for x in range(p) for y in range(p)]
    order = list(range(space.size))

    def ok(assign, i):
        from .phi import collinear
        for l in on[i]:
            got = [assign[j] for j in l if j in assign]
            if len(got) >= 3 and not collinear(ring, got):
                return False
        return True

    for _ in range(tries):
        assign = {}
        stack = [(0, rng.sample(images, len(images)))]
        while stack:
            k, opts = stack[-1]
            if k == len(order):
                break
            i = order[k]
            assign.pop(i, None)
            if not opts:
                stack.pop()
                continue
            assign[i] = opts.pop()
            if ok(assign, i):
                stack.append((k + 1, rng.sample(images, len(images))))
        if len(assign) == space.size:
            f1 = [assign[i][0] for i in range(space.size)]
            f2 = [assign[i][1] for i in range(space.size)]
            return f1, f2
    return None


def verify_line_point(q=3, budget=DEFAULT_BUDGET, jobs=1, samples=2000, seed=0, p=None):
    """Point-plus-line image shape on random c-pairs over Z/p (p = q by default)."""
    p = p or q
    _budget(samples, budget, "line-point")
    space = projective_space(q, 2)
    rng = random.Random(seed)
    rep = Report("line-point", q, details={"ring": "Z/%d" % p, "noncollinear": 0})
    for _ in range(samples):
        pair = random_cpair(space, p, rng)
        if pair is None:
            continue
        rep.instances += 1
        f1 = FullTable.from_points(q, 3, pair[0])
        f2 = FullTable.from_points(q, 3, pair[1])
        pm = phi_image(f1, f2, Ring("Z/p", p))
        if line_condition(pm) is not None:
            continue
        rep.hypothesis_satisfied += 1
        shape = image_shape(pm)
        if isinstance(shape, ShapeViolation):
            rep.counterexamples.append({"f1": pair[0], "f2": pair[1]})
        else:
            rep.conclusion_holds += 1
            pts = pm.image_points()
            if len(pts) >= 3 and not all(shape.line.contains(x) for x in pts):
                rep.details["noncollinear"] += 1
    return rep


def verify_lemma_h(q=3, budget=DEFAULT_BUDGET, jobs=1, p=None):
    """Search normal-form c-pairs with no AF element in their span; reduce any that turn up."""
    p = p or q
    space = projective_space(q, 2)
    _budget(2 ** space.size, budget, "lemma-h")
    examined, found = search_no_af_cpairs(space, p)
    rep = Report("lemma-h", q, instances=examined, hypothesis_satisfied=len(found),
                 details={"ring": "Z/%d" % p})
    for f1, f2 in found:
        r = find_three_point_reduction(FullTable.from_points(q, 3, f1),
                                       FullTable.from_points(q, 3, f2), Ring("Z/p", p))
        if r.kind == "reduction":
            rep.conclusion_holds += 1
        else:
            rep.counterexamples.append({"f1": f1, "f2": f2, "result": r.kind})
    return rep


HARNESSES = {
    "z2-p": verify_z2p,
    "red2-p": verify_red2p,
    "2-coeff": verify_two_coeff,
    "fano": verify_fano,
    "agf": verify_agf,
    "restr3-sample": verify_restr3,
    "line-point": verify_line_point,
    "lemma-h": verify_lemma_h,
}


def verify_proposition(name, q, budget=DEFAULT_BUDGET, jobs=None, **opts):
    if name not in HARNESSES:
        raise ValueError("unknown proposition %r (choose from %s)" % (name, ", ".join(PROPOSITIONS)))
    jobs = default_jobs() if jobs is None else jobs
    t = time.perf_counter()
    rep = HARNESSES[name](q, budget=budget, jobs=jobs, **opts)
    rep.wall_ms = int((time.perf_counter() - t) * 1000)
    return rep
