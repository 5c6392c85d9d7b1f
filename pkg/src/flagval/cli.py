"""Command-line front end.

Every command prints one JSON report (stable key order) to stdout or --out,
and a one-line summary to stderr.  Exit codes: 0 success, 10 refuted / not
AF / failed check, 11 exceptional rank-3 pattern, 2 input error, 3 budget
exceeded.
"""

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .errors import BudgetExceeded, FlagvalError, InputError, NotACPair, NotAF

EXIT_OK, EXIT_REFUTED, EXIT_EXCEPTIONAL, EXIT_INPUT, EXIT_BUDGET = 0, 10, 11, 2, 3

FUNCTION_SCHEMA = """\
Function files (check-af, classify) are JSON objects:

  {"domain": {"kind": "Fq", "q": 3, "rank": 2},
   "values": {"kind": "table", "entries": [[[x, y], v], ...]}}
      a value per point of P^{rank-1}(F_q); any nonzero vector may stand
      for its point.

  {"domain": {"kind": "Z", "rank": 3},
   "values": {"kind": "depthk", "p": 2, "k": 2, "entries": [[[x, y, z], v], ...]},
   "window": {"box": 4, "depth": 3}}
      values on primitive classes of (Z/p^k)^rank, extended to Z^rank by
      invariance; "window" is optional.

A flat shorthand is also read: {"kind": "table", "q", "rank", "points": [...]}
with one value per point in point order, or {"kind": "depthk", "p", "depth",
"rank", "classes", "window"}.  Values may be integers or strings.
"""


class InputProblem(Exception):
    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail or {}


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputProblem("cannot read %s: %s" % (path, e.strerror), {"path": path})
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputProblem("%s:%d:%d: %s" % (path, e.lineno, e.colno, e.msg),
                           {"path": path, "line": e.lineno, "column": e.colno, "position": e.pos,
                            "reason": e.msg})


def _value(v):
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return v
    raise InputProblem("function values must be integers or strings, got %r" % (v,))


def load_function(path, window=None, depth=None):
    from .functions import DepthK, FullTable
    from .lattice import Window
    d = _load_json(path)
    if not isinstance(d, dict):
        raise InputProblem("%s: top level must be an object" % path)
    if "domain" in d:
        d = _flatten(d, path)
    kind = d.get("kind")
    try:
        if kind == "table":
            q, n = int(d["q"]), int(d["rank"])
            if "points" in d:
                return FullTable.from_points(q, n, [_value(v) for v in d["points"]])
            mapping = {}
            from .geometry.projective import projective_space
            space = projective_space(q, n - 1)
            given = {tuple(int(x) % q for x in v): _value(val) for v, val in d["vectors"]}
            for v in space.all_vectors():
                if v in given:
                    mapping[v] = given[v]
                else:
                    # fill in from the point representative by invariance
                    rep = space.points[space.point_of(v)]
                    if rep not in given:
                        raise InputProblem("%s: no value for vector %r" % (path, list(v)))
                    mapping[v] = given[rep]
            return FullTable.from_vectors(q, n, mapping)
        if kind == "depthk":
            p, k, n = int(d["p"]), int(d["depth"]), int(d["rank"])
            w = d.get("window")
            box = window if window is not None else (w["box"] if w else max(2, p ** k))
            dep = depth if depth is not None else (w["depth"] if w else k)
            entries = [(tuple(int(x) for x in v), _value(val)) for v, val in d["classes"]]
            return DepthK(p, k, n, entries, window=Window(int(box), int(dep)))
    except InputProblem:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise InputProblem("%s: malformed %s function: %s" % (path, kind, e), {"path": path})
    raise InputProblem("%s: unknown function kind %r (expected table or depthk)" % (path, kind))


def _flatten(d, path):
    """The nested {"domain", "values", "window"} layout -> the flat one above."""
    try:
        dom, vals = d["domain"], d["values"]
        n = int(dom["rank"])
        if dom["kind"] == "Fq":
            return {"kind": "table", "q": int(dom["q"]), "rank": n, "vectors": vals["entries"]}
        if dom["kind"] == "Z":
            return {"kind": "depthk", "p": int(vals["p"]), "depth": int(vals["k"]), "rank": n,
                    "classes": vals["entries"], "window": d.get("window")}
    except (KeyError, TypeError, ValueError) as e:
        raise InputProblem("%s: malformed function file: missing or bad %s" % (path, e), {"path": path})
    raise InputProblem("%s: domain kind must be Z or Fq" % path, {"path": path})


def load_logfunction(path):
    from .logfield.logfun import logfunction_from_json
    d = _load_json(path)
    try:
        return logfunction_from_json(d)
    except InputError as e:
        raise InputProblem("%s: %s" % (path, e), {"path": path})
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise InputProblem("%s: malformed log function: %s" % (path, e), {"path": path})


def resolve_jobs(arg):
    env = os.environ.get("FLAGVAL_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputProblem("FLAGVAL_JOBS must be an integer, got %r" % env)
    if arg is not None:
        return max(1, arg)
    return os.cpu_count() or 1


# -- commands --------------------------------------------------------------------


def cmd_check_af(args):
    from .af.check import check_af
    from .lattice import Window
    f = load_function(args.file, args.window, args.depth)
    window = None
    if args.window is not None or args.depth is not None:
        if getattr(f, "window", None) is not None:
            window = Window(args.window or f.window.box, args.depth if args.depth is not None else f.window.depth)
    v = check_af(f, window)
    code = {"certified": EXIT_OK, "refuted": EXIT_REFUTED, "exceptional": EXIT_EXCEPTIONAL}[v.kind]
    payload = v.to_json()
    return code, payload, payload["kind"]


def cmd_classify(args):
    from .af.rank2 import classify_rank2
    f = load_function(args.file, args.window, args.depth)
    if f.rank != 2:
        raise InputProblem("classify needs a rank-2 function, got rank %d" % f.rank)
    r = classify_rank2(f)
    payload = r.to_json()
    return (EXIT_REFUTED if r.kind == "not-af" else EXIT_OK), payload, r.kind


def cmd_verify(args):
    from .geometry.verify import verify_proposition
    rep = verify_proposition(args.proposition, args.q, budget=args.budget, jobs=args.jobs_resolved)
    payload = rep.to_json()
    summary = "%s q=%d: %d instances, %d satisfy the hypothesis, %d violations" % (
        args.proposition, args.q, rep.instances, rep.hypothesis_satisfied, len(rep.counterexamples))
    return (EXIT_OK if rep.ok else EXIT_REFUTED), payload, summary


def cmd_cpair(args):
    from .logfield.cpair import is_c_pair_field
    f1, f2 = load_logfunction(args.f1), load_logfunction(args.f2)
    r = is_c_pair_field(f1, f2, args.degree, args.budget)
    return (EXIT_OK if r.passed else EXIT_REFUTED), r.to_json(), r.kind


def cmd_find_af(args):
    from .logfield.cpair import AFElement, find_af_in_span
    f1, f2 = load_logfunction(args.f1), load_logfunction(args.f2)
    try:
        r = find_af_in_span(f1, f2, args.degree, budget=args.budget)
    except NotACPair as e:
        return EXIT_REFUTED, {"kind": "not-a-c-pair", "witness": e.witness}, "not a c-pair"
    return (EXIT_OK if isinstance(r, AFElement) else EXIT_REFUTED), r.to_json(), r.kind


def cmd_reconstruct(args):
    from .logfield.reconstruct import reconstruct_valuation
    f = load_logfunction(args.file)
    try:
        r = reconstruct_valuation(f, args.degree, pairs=args.pairs, budget=args.budget)
    except NotAF as e:
        return EXIT_REFUTED, {"kind": "not-af", "message": str(e), "witness": e.witness}, "not AF"
    payload = r.to_json()
    return EXIT_OK, payload, "scale %s, generators %s" % (r.scale, ", ".join(payload["generators"]))


COMMANDS = {"check-af": cmd_check_af, "classify": cmd_classify, "verify": cmd_verify,
            "cpair": cmd_cpair, "find-af": cmd_find_af, "reconstruct": cmd_reconstruct}


def build_parser():
    from .geometry.verify import DEFAULT_BUDGET, PROPOSITIONS
    from .logfield.cpair import DEFAULT_BUDGET as POOL_BUDGET, DEFAULT_DEGREE
    from .logfield.reconstruct import AXIOM_PAIRS

    ap = argparse.ArgumentParser(prog="flagval", description="AF functions, c-pairs and valuations.",
                                 epilog=FUNCTION_SCHEMA, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version="flagval " + __version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (FLAGVAL_JOBS overrides)")

    helps = {"check-af": "decide the AF property, with a certificate or witness",
             "classify": "canonical shape of a rank-2 function",
             "cpair": "check the c-pair condition on two log functions",
             "find-af": "search the span of a c-pair for an AF element",
             "reconstruct": "recover a valuation from an AF log function"}
    for name in ("check-af", "classify"):
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("file")
        p.add_argument("--window", type=int, default=None, help="box half-width M for Z^n functions")
        p.add_argument("--depth", type=int, default=None, help="declared window depth k")
        common(p)

    p = sub.add_parser("verify", help="exhaustive or sampled check of a finite lemma")
    p.add_argument("proposition", choices=PROPOSITIONS)
    p.add_argument("q_pos", nargs="?", type=int, metavar="q")
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum instance count")
    common(p)

    for name, files in (("cpair", ("f1", "f2")), ("find-af", ("f1", "f2")), ("reconstruct", ("file",))):
        p = sub.add_parser(name, help=helps[name])
        for fn in files:
            p.add_argument(fn)
        p.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help="pool degree bound D")
        p.add_argument("--budget", type=int, default=POOL_BUDGET, help="maximum pool modules")
        if name == "reconstruct":
            p.add_argument("--pairs", type=int, default=AXIOM_PAIRS, help="sampled pairs for the axiom checks")
        common(p)
    return ap


def _options(args):
    skip = {"command", "out", "q_pos", "jobs", "jobs_resolved", "file", "f1", "f2"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _inputs(args):
    out = []
    for key in ("file", "f1", "f2"):
        path = getattr(args, key, None)
        if path is not None:
            try:
                out.append({"path": path, "sha256": _digest(path)})
            except OSError:
                out.append({"path": path, "sha256": None})
    return out


def _emit(report, args):
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify":
        q = args.q if args.q is not None else args.q_pos
        if q is None:
            ap.error("verify needs q (positional or --q)")
        args.q = q
    t = time.perf_counter()
    report = {"tool": "flagval", "version": __version__,
              "command": {"name": args.command, "options": None},
              "inputs": _inputs(args)}
    try:
        args.jobs_resolved = resolve_jobs(args.jobs)
        report["command"]["options"] = _options(args)
        code, payload, summary = COMMANDS[args.command](args)
    except InputProblem as e:
        code, payload, summary = EXIT_INPUT, {"kind": "input-error", "message": str(e), **e.detail}, str(e)
    except BudgetExceeded as e:
        code, payload, summary = EXIT_BUDGET, {"kind": "budget-exceeded", "message": str(e)}, str(e)
    except (InputError, ValueError) as e:
        code, payload, summary = EXIT_INPUT, {"kind": "input-error", "message": str(e)}, str(e)
    except FlagvalError as e:
        code = EXIT_REFUTED
        payload = {"kind": type(e).__name__, "message": str(e), "witness": _plain(e.witness)}
        summary = "%s: %s" % (type(e).__name__, e)
    report["result"] = payload
    report["exitCode"] = code
    report["timing"] = {"wallTimeMs": int((time.perf_counter() - t) * 1000)}
    _emit(report, args)
    print("flagval %s: %s (exit %d)" % (args.command, summary, code), file=sys.stderr)
    return code


def _plain(w):
    try:
        json.dumps(w)
        return w
    except TypeError:
        return repr(w)


if __name__ == "__main__":
    sys.exit(main())
