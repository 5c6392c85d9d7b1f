"""Certificates and verdicts produced by the AF engine."""

from dataclasses import dataclass, field

import numpy as np

from ..functions import FullTable
from ..lattice import Subgroup, Window


def _vec(v):
    return [int(x) for x in v]


def _label(v):
    from ..padic import PadicInteger
    if isinstance(v, PadicInteger):
        return v.to_string()
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


@dataclass
class Filtration:
    """A = A_0 > A_1 > ... with f constant on each A_i minus A_{i+1}.

    The last layer runs down to 0. Over Z the descent and constancy claims
    are made for the points of `window` only.
    """

    layers: list  # [(Subgroup, value)]
    window: Window = None

    @property
    def subgroups(self):
        return [s for s, _ in self.layers]

    @property
    def values(self):
        return [v for _, v in self.layers]

    def validate(self, f):
        """Re-check descent and layer constancy from scratch; returns a problem or None."""
        subs = self.subgroups
        if not subs:
            return "empty filtration"
        for a, b in zip(subs, subs[1:]):
            if not a.contains_subgroup(b) or a == b:
                return "no strict descent from %r to %r" % (a.gens, b.gens)
        pts = _domain_points(f, self.window)
        codes = f.codes(pts)
        depth = np.zeros(len(pts), dtype=np.int64)
        for s in subs[1:]:
            depth += s.contains_array(pts)
        inside = subs[0].contains_array(pts)
        for i, (s, v) in enumerate(self.layers):
            sel = inside & (depth == i)
            want = f.labels.index(v)
            bad = np.nonzero(sel & (codes != want))[0]
            if len(bad):
                return "value changes on layer %d at %r" % (i, tuple(int(x) for x in pts[bad[0]]))
        return None

    def to_json(self):
        return [{"generators": [_vec(g) for g in s.gens], "layerValue": _label(v)}
                for s, v in self.layers]


def _domain_points(f, window):
    if isinstance(f, FullTable):
        return np.array(f.space.all_vectors(), dtype=np.int64)
    return (window or f.window).points(f.rank)


@dataclass
class Certified:
    filtration: Filtration
    window: Window = None
    kind: str = "certified"
    basis: tuple = None  # special basis, when rank3_reduce found one

    def to_json(self):
        out = {"kind": self.kind, "filtration": self.filtration.to_json(),
               "window": self.window.to_json() if self.window else None}
        if self.basis is not None:
            out["specialBasis"] = [_vec(b) for b in self.basis]
        return out


@dataclass
class Refuted:
    """`witness` is a dict with a `kind` of triple, cover or cycle."""

    witness: dict
    window: Window = None
    kind: str = "refuted"

    def to_json(self):
        return {"kind": self.kind, "witness": witness_json(self.witness),
                "window": self.window.to_json() if self.window else None}


@dataclass
class Exceptional:
    pattern: str  # "fano" or "mod4"
    basis: list
    window: Window = None
    zero_value: object = None
    subgroup: Subgroup = None
    kind: str = "exceptional"

    def to_json(self):
        return {"kind": "exceptional:" + self.pattern, "basis": [_vec(b) for b in self.basis],
                "zeroValue": _label(self.zero_value),
                "window": self.window.to_json() if self.window else None}


def witness_json(w):
    out = {}
    for key, val in w.items():
        if isinstance(val, Subgroup):
            out[key] = [_vec(g) for g in val.gens]
        elif isinstance(val, dict):
            out[key] = [[_label(k), [_vec(x) for x in v]] for k, v in val.items()]
        elif isinstance(val, (list, tuple)) and val and isinstance(val[0], (list, tuple, np.ndarray)):
            out[key] = [_vec(x) for x in val]
        elif isinstance(val, (tuple, np.ndarray)):
            out[key] = _vec(val)
        else:
            out[key] = _label(val) if not isinstance(val, list) else [_label(x) for x in val]
    return out


@dataclass
class Rank2Class:
    """Canonical shape of an AF function on a rank-2 group.

    kind is "constant", "off-subgroup" or "typical". For off-subgroup the
    direction spans the exceptional subgroup; for typical, C is the subgroup
    of index p^k carrying the staircase and phase is the position of the
    generic value in the sorted pair of attained values.
    """

    kind: str
    generic: object
    other: object = None
    direction: tuple = None
    p: int = 0
    k: int = 0
    phase: int = 0
    C: Subgroup = None
    filtration: Filtration = None

    def to_json(self):
        out = {"kind": self.kind, "generic": _label(self.generic)}
        if self.kind != "constant":
            out["other"] = _label(self.other)
        if self.direction is not None:
            out["direction"] = _vec(self.direction)
        if self.kind == "typical":
            out.update({"p": self.p, "k": self.k, "phase": self.phase,
                        "C": [_vec(g) for g in self.C.gens]})
        return out


@dataclass
class NotAFResult:
    witness: dict = field(default_factory=dict)
    kind: str = "not-af"

    def to_json(self):
        return {"kind": self.kind, "witness": witness_json(self.witness)}
