"""One test per acceptance criterion.

Each test records PASS or FAIL for its criterion (printed in the terminal
summary) and asserts that the outcome matches the expected one.  Two
criteria are expected to fail because the underlying claims are false; the
tests pin down exactly which cases fail, so any other change shows up.
"""

import math
import os
import time

import numpy as np
import pytest

from eorlicz.classify import CLASSES
from eorlicz.corpus import run_corpus
from eorlicz.expr import ComposedPhi, PhiSpec
from eorlicz.measure import IntervalSpace, distribution, integrate, rearrange, sample
from eorlicz.norms import (
    LorentzConfig,
    MorreyConfig,
    lorentz_norm,
    luxemburg_norm,
    morrey_norm,
    sobolev_norm,
    weak_orlicz_norm,
)
from eorlicz.verify import (
    CLOSURE_OPS,
    INCLUSION_MODES,
    check_chain,
    check_closure,
    check_inclusion,
    corpus_functions,
)

CASES = int(os.environ.get("EORLICZ_ACCEPTANCE_CASES", "100"))
FNS = corpus_functions(257)
PHI_GRID = ("u", "u^2", "u^4", "exp(2*u) - 1", "cosh(u) - 1")
REFUTED_CORPUS = {"log_square_mixture", "negated_log_tail"}
REFUTED_CLOSURE_OP = "map_min"


def comp(text):
    return ComposedPhi(PhiSpec.parse(text))


def test_criterion_01_corpus(criterion):
    rep, details = run_corpus()
    bad = sorted(d["id"] for d in details if not d["ok"])
    criterion(1, rep.ok, f"{rep.cases_passed}/{rep.cases_run} corpus entries; refuted: {', '.join(bad)}")
    assert set(bad) == REFUTED_CORPUS


def test_criterion_02_lp_oracle(criterion):
    worst = 0.0
    for p in (1, 2, 4):
        c = comp(f"u^{p}")
        for (a, b), f, want in (((0, 1), "1", 1.0), ((0, 2), "1", 2 ** (1 / p)),
                                ((0, 1), "t", (1 / (p + 1)) ** (1 / p))):
            got = luxemburg_norm(sample(f, IntervalSpace(a, b, 2049)), c).value
            worst = max(worst, abs(got / want - 1))
    criterion(2, worst <= 1e-6, f"max relative error {worst:.2e} at 2049 nodes")
    assert worst <= 1e-6


def test_criterion_03_exponential_norm(criterion):
    got = luxemburg_norm(sample("1", IntervalSpace(0, 1, 257)), comp("exp(2*u) - 1")).value
    err = abs(got - 2 / math.log(2))
    criterion(3, err <= 1e-6, f"value {got:.9f}, error {err:.1e}")
    assert err <= 1e-6


def test_criterion_04_weak_below_strong(criterion):
    total = ok = 0
    for phi in PHI_GRID:
        c = comp(phi)
        for f in FNS.values():
            total += 1
            ok += weak_orlicz_norm(f, c).value <= luxemburg_norm(f, c).value + 1e-9
    criterion(4, ok == total, f"{ok}/{total} (f, phi) pairs")
    assert ok == total


def test_criterion_05_inclusion_suites(criterion):
    start = time.perf_counter()
    reports = []
    for mode in INCLUSION_MODES:
        for fam in ("orlicz", "sobolev", "morrey", "lorentz"):
            reports.append(check_inclusion(mode, fam, CASES, seed=0))
        reports.append(check_inclusion(mode, "orlicz", CASES, seed=0, weak_cross=True))
    run = sum(r.cases_run for r in reports)
    passed = sum(r.cases_passed for r in reports)
    skipped = sum(r.skipped for r in reports)
    ok = all(r.ok for r in reports)
    criterion(5, ok, f"{passed}/{run} hypothesis-passing cases over {len(reports)} suites "
                     f"({skipped} skipped), {time.perf_counter() - start:.0f} s")
    assert ok, [r.failures[:1] for r in reports if not r.ok]


def test_criterion_06_closure_suites(criterion):
    start = time.perf_counter()
    reports = {(cls, op): check_closure(cls, op, CASES, seed=0) for cls in CLASSES for op in CLOSURE_OPS}
    zero = [check_closure(cls, op, 1, c=0.0) for cls in CLASSES for op in ("scale", "map_scale")]
    red = sorted(f"{cls}/{op}" for (cls, op), r in reports.items() if not r.ok)
    green = [r for (cls, op), r in reports.items() if op != REFUTED_CLOSURE_OP]
    min_pass = {cls: reports[cls, REFUTED_CLOSURE_OP].cases_passed for cls in CLASSES}
    ok = not red
    criterion(6, ok, f"{sum(r.ok for r in reports.values())}/{len(reports)} suites at 100%; "
                     f"map_min passes {min_pass}; {time.perf_counter() - start:.0f} s")
    # every suite except map_min is clean, map_min has real counterexamples
    assert all(r.ok and r.cases_run == CASES for r in green)
    assert all(not reports[cls, REFUTED_CLOSURE_OP].ok for cls in CLASSES)
    # the zero scale factor is a diagnostic, never a failure
    assert all(z.ok and z.cases_run == 0 and z.diagnostics for z in zero)


def test_criterion_07_rearrangement(criterion):
    ok = True
    worst = 0.0
    for f in FNS.values():
        r = rearrange(f)
        cell = f.space.max_cell
        us = np.unique(np.concatenate((f.values, np.linspace(0, 1.1 * f.values.max(), 101))))
        gap = max(abs(distribution(f, u) - r.measure_above(u)) for u in us)
        worst = max(worst, gap)
        ok &= gap <= cell
        for p in (1, 2, 4):
            lhs = integrate(f.space, f.values ** p)
            rhs = float(np.sum(r.levels ** p * r.cell_measures))
            ok &= abs(lhs - rhs) <= 2 * cell * f.values.max() ** p
    criterion(7, ok, f"max distribution gap {worst:.1e} over {len(FNS)} functions")
    assert ok


def test_criterion_08_lorentz_reduction(criterion):
    worst = 0.0
    for phi in ("u^2", "exp(u) - 1"):
        c = comp(phi)
        for f in FNS.values():
            a, b = luxemburg_norm(f, c).value, lorentz_norm(f, c, LorentzConfig.parse("1")).value
            worst = max(worst, abs(a - b) / a)
    criterion(8, worst <= 1e-6, f"max relative gap {worst:.1e}")
    assert worst <= 1e-6


def test_criterion_09_homogeneity(criterion):
    morrey = MorreyConfig.parse("r^(-1)")
    families = {
        "luxemburg": lambda f, c: luxemburg_norm(f, c),
        "weak": lambda f, c: weak_orlicz_norm(f, c),
        "sobolev": lambda f, c: sobolev_norm(f, c),
        "morrey": lambda f, c: morrey_norm(f, c, morrey),
        "lorentz": lambda f, c: lorentz_norm(f, c),
    }
    worst = 0.0
    for name, norm in families.items():
        for phi in ("u^2", "exp(u) - 1"):
            c = comp(phi)
            for f in FNS.values():
                base = norm(f, c).value
                for alpha in (0.1, 3.0, 10.0):
                    worst = max(worst, abs(norm(f.scaled(alpha), c).value - alpha * base) / (alpha * base))
    criterion(9, worst <= 1e-8, f"max relative error {worst:.1e} over 5 families")
    assert worst <= 1e-8


def test_criterion_10_chain(criterion):
    rep = check_chain(cases=500, seed=0)
    counts = rep.diagnostics[0]["class_counts"]
    criterion(10, rep.ok, f"{rep.cases_passed}/{rep.cases_run} draws; class counts {counts}")
    assert rep.ok and rep.cases_run == 500
