"""Golden cases: functions that are in a class only after composing with a
map, with the verdicts and witnesses they are expected to produce.

The data lives in ``data/corpus.json`` in the same shape the CLI accepts,
so it can be extended without touching code.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .classify import CLASSES, ToleranceConfig, chain_holds, classify, default_t_samples, raw_classify
from .expr import ComposedPhi, PhiSpec, PlaneMap, eval_expr, parse_expr
from .measure import IntervalSpace, sample
from .norms import luxemburg_norm, weak_orlicz_norm
from .verify import SuiteReport

# entries whose claims include a class that fails: (holds, fails)
NON_REVERSALS = {
    "unit_rate_exponential": ("e_strong_young", "e_n"),
    "kinked_diagonal": ("e_orlicz", "e_strong_young"),
    "log_barrier": ("e_young", "e_orlicz"),
}

WITNESS_TOL = 1e-6
NORM_TOL = 1e-6
NORM_NODES = 2049


def _const(text: str) -> float:
    return float(eval_expr(parse_expr(text, ()), {}))


@dataclass(frozen=True, eq=False)
class CorpusEntry:
    id: str
    phi: PhiSpec
    map: PlaneMap
    omega: tuple
    claims: dict
    witness: dict = field(default_factory=dict)
    norms: tuple = ()
    tolerances: dict = field(default_factory=dict)
    note: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusEntry":
        return cls(
            id=d["id"],
            phi=PhiSpec.parse(d["phi"]),
            map=PlaneMap.parse(d.get("map_t", "t"), d.get("map_u", "u")),
            omega=(float(d["omega"][0]), float(d["omega"][1])),
            claims=d.get("claims", {}),
            witness=d.get("witness", {}),
            norms=tuple(d.get("norms", ())),
            tolerances=d.get("tolerances", {}),
            note=d.get("note", ""),
        )

    @property
    def composed(self) -> ComposedPhi:
        return ComposedPhi(self.phi, self.map)

    def tols(self, base: ToleranceConfig | None = None) -> ToleranceConfig:
        base = base or ToleranceConfig()
        return ToleranceConfig.from_dict({**base.to_dict(), **self.tolerances})

    def t_samples(self) -> np.ndarray:
        return default_t_samples(*self.omega)

    def classify(self, tols: ToleranceConfig | None = None):
        return classify(self.composed, self.t_samples(), self.tols(tols), self.omega)

    def raw_classify(self, tols: ToleranceConfig | None = None):
        return raw_classify(self.phi, self.t_samples(), self.tols(tols), self.omega)


def load_corpus(path=None) -> list:
    if path is None:
        text = resources.files("eorlicz").joinpath("data/corpus.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    return [CorpusEntry.from_dict(d) for d in data["entries"]]


def _close(a, b, tol=WITNESS_TOL) -> bool:
    return a is not None and b is not None and math.isfinite(a) and abs(a - b) <= tol * max(1.0, abs(b))


def _check_witness(e: CorpusEntry, comp, raw) -> list:
    """Problems with the named witnesses, empty when all hold."""
    w = e.witness
    problems = []
    if "raw_class" in w:
        cls = w["raw_class"]
        fail = raw.failures.get(cls)
        if fail is None:
            problems.append(f"raw {cls} has no failure")
        else:
            if "raw_axiom" in w and fail["axiom"] != w["raw_axiom"]:
                problems.append(f"raw {cls} fails {fail['axiom']}, expected {w['raw_axiom']}")
            if "raw_t_sign" in w and not np.sign(fail["t"]) == w["raw_t_sign"]:
                problems.append(f"raw failure at t = {fail['t']}, expected sign {w['raw_t_sign']}")
            if "raw_value" in w:
                t = fail["t"]
                got = (fail.get("witness") or {}).get("value")
                want = float(eval_expr(parse_expr(w["raw_value"], ("t",)), {"t": t}))
                if not _close(got, want):
                    problems.append(f"raw value at t = {t} is {got}, expected {want}")
    if "composed_class" in w:
        cls = w["composed_class"]
        axiom = w.get("composed_axiom")
        fail = comp.failures.get(cls)
        if axiom is not None:
            # the named axiom must fail somewhere, whichever axiom fails first
            rec = next((p[axiom] for p in comp.profiles if not p[axiom].passed), None)
            fail = None if rec is None else {"axiom": axiom, "witness": rec.witness}
        if fail is None:
            problems.append(f"composed {cls} has no failure" + (f" of {axiom}" if axiom else ""))
        else:
            wit = fail.get("witness") or {}
            if "ratio_limit" in w:
                seq = wit.get("sequence") or [None]
                if not _close(seq[-1], w["ratio_limit"]):
                    problems.append(f"ratio tends to {seq[-1]}, expected {w['ratio_limit']}")
            if "zero_at" in w and not _close(wit.get("u"), w["zero_at"]):
                problems.append(f"zero witness at u = {wit.get('u')}, expected {w['zero_at']}")
            if "U_phi" in w and not _close(wit.get("u"), w["U_phi"]):
                problems.append(f"U_phi witness {wit.get('u')}, expected {w['U_phi']}")
            if "left_limit" in w:
                want = _const(w["left_limit"])
                got = wit.get("left_limit")
                if not _close(got, want):
                    problems.append(f"left limit {got}, expected {want}")
    return problems


def _check_norms(e: CorpusEntry, tols) -> tuple:
    problems, values = [], []
    if not e.norms:
        return problems, values
    space = IntervalSpace(e.omega[0], e.omega[1], NORM_NODES)
    for n in e.norms:
        f = sample(n["f"], space)
        fn = luxemburg_norm if n["kind"] == "luxemburg" else weak_orlicz_norm
        got = fn(f, e.composed, tols=tols).value
        want = _const(n["value"])
        values.append({"kind": n["kind"], "f": n["f"], "value": got, "expected": want})
        if not abs(got - want) <= NORM_TOL * max(1.0, abs(want)):
            problems.append(f"{n['kind']} norm of f = {n['f']} is {got}, expected {want}")
    return problems, values


def check_entry(e: CorpusEntry, tols: ToleranceConfig | None = None) -> dict:
    """Classify one entry and compare it with its claims and witnesses."""
    t = e.tols(tols)
    comp = e.classify(tols)
    raw = e.raw_classify(tols) if "raw" in e.claims or "raw_class" in e.witness else None
    problems = []
    for cls, want in e.claims.get("composed", {}).items():
        if comp.verdicts[cls] != want:
            why = comp.failures.get(cls)
            problems.append(f"composed {cls} is {comp.verdicts[cls]}, expected {want}"
                            + (f" ({why['axiom']} at t = {why['t']})" if why else ""))
    for cls, want in e.claims.get("raw", {}).items():
        if raw.verdicts[cls] != want:
            problems.append(f"raw {cls} is {raw.verdicts[cls]}, expected {want}")
    if not comp.chain_consistent or (raw is not None and not raw.chain_consistent):
        problems.append("class chain violated")
    problems += _check_witness(e, comp, raw)
    norm_problems, norm_values = _check_norms(e, t)
    problems += norm_problems
    return {
        "id": e.id,
        "phi_E": str(e.composed),
        "verdicts": comp.verdicts,
        "raw_verdicts": raw.verdicts if raw is not None else None,
        "failures": comp.failures,
        "raw_failures": raw.failures if raw is not None else None,
        "norms": norm_values,
        "problems": problems,
        "ok": not problems,
    }


def run_corpus(tols: ToleranceConfig | None = None, entries=None) -> tuple:
    """Check every entry; returns (SuiteReport, per-entry details)."""
    entries = entries if entries is not None else load_corpus()
    rep = SuiteReport("corpus")
    details = []
    for e in entries:
        d = check_entry(e, tols)
        details.append(d)
        if d["ok"]:
            rep.passed()
        else:
            rep.failed(e.id, "corpus/" + e.id, {"problems": d["problems"], "verdicts": d["verdicts"]})
    return rep, details


__all__ = ["CLASSES", "CorpusEntry", "NON_REVERSALS", "check_entry", "load_corpus", "run_corpus",
           "chain_holds"]
