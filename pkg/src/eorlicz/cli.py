"""Command line front end.  Every command prints one JSON report:

    {schema_version, command, config, result, seed, timing_ms}

Exit codes: 0 success, 1 a gating check failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
import warnings

import numpy as np

from . import extreal as xr
from .classify import ToleranceConfig, classify, default_t_samples, raw_classify
from .expr import ComposedPhi, ExprSyntaxError, PhiSpec, PlaneMap
from .measure import IntervalSpace, UndefinedIntegrandError, load_csv, sample
from .norms import (
    NORM_KINDS,
    LorentzConfig,
    MorreyConfig,
    NonMonotonePredicateError,
    PreconditionError,
    SobolevConfig,
    lorentz_norm,
    luxemburg_norm,
    morrey_norm,
    sobolev_norm,
    weak_orlicz_norm,
)

SCHEMA_VERSION = 1
DEFAULT_NODES = 257
DEFAULT_T_SAMPLES = 33
SUITES = ("closure", "chain", "inclusion", "all")

# flags whose value may legitimately start with '-' (e.g. --omega -2,2)
_VALUE_FLAGS = {
    "--phi", "--map-t", "--map-u", "--omega", "--t-samples", "--kind", "--f-expr",
    "--f-csv", "--nodes", "--k", "--phi-weight", "--weight", "--centers", "--radii",
    "--suite", "--seed", "--cases",
}


class InputError(ValueError):
    pass


def jsonable(x):
    """Recursively convert to strict JSON, encoding +-inf and Undefined."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return xr.to_json(float(x))
    return x


def _join_values(argv: list) -> list:
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def _floats(text: str, what: str) -> list:
    try:
        vals = [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    return vals


def _omega(text: str) -> tuple:
    vals = _floats(text, "--omega")
    if len(vals) != 2 or not vals[0] < vals[1] or not all(map(math.isfinite, vals)):
        raise InputError(f"--omega: expected a,b with a < b, got {text!r}")
    return vals[0], vals[1]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eorlicz", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def plane(sp):
        sp.add_argument("--phi", required=True, help="Phi(t, u)")
        sp.add_argument("--map-t", default="t", help="first coordinate of E (default t)")
        sp.add_argument("--map-u", default="u", help="second coordinate of E (default u)")
        sp.add_argument("--omega", required=True, help="a,b")

    c = sub.add_parser("classify", help="class verdicts of Phi o E")
    plane(c)
    c.add_argument("--t-samples", type=int, default=DEFAULT_T_SAMPLES)
    c.add_argument("--raw", action="store_true", help="also classify Phi with the identity map")

    n = sub.add_parser("norm", help="compute a norm of f")
    n.add_argument("--kind", required=True, choices=NORM_KINDS)
    plane(n)
    src = n.add_mutually_exclusive_group(required=True)
    src.add_argument("--f-expr")
    src.add_argument("--f-csv")
    n.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    n.add_argument("--k", type=int, default=1)
    n.add_argument("--phi-weight", default="1", help="Morrey weight phi(r)")
    n.add_argument("--weight", default="1", help="Lorentz weight omega(s)")
    n.add_argument("--weak", action="store_true")
    n.add_argument("--centers", default="")
    n.add_argument("--radii", default="")

    v = sub.add_parser("verify", help="run seeded property suites")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=int, default=100)

    sub.add_parser("corpus", help="check the golden corpus")
    return p


def _composed(args) -> ComposedPhi:
    return ComposedPhi(PhiSpec.parse(args.phi), PlaneMap.parse(args.map_t, args.map_u))


def cmd_classify(args, tols):
    if args.t_samples < 1:
        raise InputError("--t-samples must be >= 1")
    omega = _omega(args.omega)
    T = default_t_samples(*omega, n=args.t_samples)
    rep = classify(_composed(args), T, tols, omega)
    result = rep.to_dict()
    if args.raw:
        result["raw"] = raw_classify(PhiSpec.parse(args.phi), T, tols, omega).to_dict()
    config = {"omega": omega, "t_samples": args.t_samples, "tolerances": tols.to_dict()}
    return 0, config, result, None


def cmd_norm(args, tols):
    omega = _omega(args.omega)
    c = _composed(args)
    if args.f_csv:
        try:
            f = load_csv(args.f_csv)
        except OSError as e:
            raise InputError(f"--f-csv: {e}") from None
    else:
        if args.nodes < 3:
            raise InputError("--nodes must be >= 3")
        f = sample(args.f_expr, IntervalSpace(omega[0], omega[1], args.nodes))
    config = {"omega": omega, "nodes": int(f.space.nodes.size), "kind": args.kind,
              "weak": args.weak, "tolerances": tols.to_dict(), "t_samples": DEFAULT_T_SAMPLES}
    kind = args.kind
    if kind == "luxemburg":
        res = (weak_orlicz_norm if args.weak else luxemburg_norm)(f, c, tols=tols)
    elif kind == "weak":
        res = weak_orlicz_norm(f, c, tols=tols)
    elif kind == "sobolev":
        res = sobolev_norm(f, c, SobolevConfig(args.k), weak=args.weak, tols=tols)
        config["k"] = args.k
    elif kind == "morrey":
        cfg = MorreyConfig.parse(args.phi_weight, _floats(args.centers, "--centers"),
                                 _floats(args.radii, "--radii"))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = morrey_norm(f, c, cfg, weak=args.weak, tols=tols)
        r = cfg.resolved(f.space)
        config.update(phi_weight=args.phi_weight, centers=r.centers, radii=r.radii)
    else:
        cfg = LorentzConfig.parse(args.weight)
        res = lorentz_norm(f, c, cfg, weak=args.weak, tols=tols)
        config.update(weight=args.weight, integrand_weight=cfg.integrand_weight)
    return 0, config, res.to_dict(), None


def cmd_verify(args, tols):
    from .verify import run_suite

    if args.cases < 1:
        raise InputError("--cases must be >= 1")
    reports = run_suite(args.suite, args.seed, args.cases, tols)
    result = {
        "suites": [r.to_dict() for r in reports],
        "cases_run": sum(r.cases_run for r in reports),
        "cases_passed": sum(r.cases_passed for r in reports),
        "skipped": sum(r.skipped for r in reports),
        "failed_suites": [r.suite for r in reports if not r.ok],
    }
    config = {"suite": args.suite, "cases": args.cases, "tolerances": tols.to_dict()}
    code = 0 if all(r.ok for r in reports) else 1
    return code, config, result, args.seed


def cmd_corpus(args, tols):
    from .corpus import run_corpus

    rep, details = run_corpus(tols)
    result = dict(rep.to_dict(), entries=details)
    return (0 if rep.ok else 1), {"tolerances": tols.to_dict()}, result, None


COMMANDS = {"classify": cmd_classify, "norm": cmd_norm, "verify": cmd_verify, "corpus": cmd_corpus}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(argv))
    except SystemExit as e:
        return int(e.code or 0)
    tols = ToleranceConfig()
    start = time.perf_counter()
    try:
        code, config, result, seed = COMMANDS[args.command](args, tols)
    except (InputError, ExprSyntaxError, PreconditionError, UndefinedIntegrandError,
            NonMonotonePredicateError, ValueError) as e:
        module = type(e).__module__.rsplit(".", 1)[-1]
        print(f"eorlicz {args.command}: {module}: {e}", file=sys.stderr)
        code, config, result, seed = 2, {}, {"error": str(e), "error_type": type(e).__name__}, None
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": [args.command] + argv[1:],
        "config": config,
        "result": result,
        "seed": seed,
        "timing_ms": round((time.perf_counter() - start) * 1000.0, 3),
    }
    out.write(json.dumps(jsonable(report), indent=2) + "\n")
    out.flush()
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
