"""Command line entry points: scenario runner, check explainer, symbol eval.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage error.
A run writes runs/<name>-<timestamp>/ with manifest.json (timing, versions,
paths), report.json (canonical bytes, a pure function of the scenario), and
any CSV artifacts the checks produced.
"""

from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
import time
from pathlib import Path

from . import checks
from .errors import OnCurveError, PreconditionError, UsageError
from .symbols import LaurentPoly, sup_norm, winding

_SUITE_NAMES = checks.SUITES

_COUNT_KEYS = (
    "trials",
    "max_degree",
    "max_correction",
    "elements",
    "planted",
    "commutant_symbols",
    "commutant_truncation",
    "cross_section_truncation",
    "spectra_symbols",
    "spectra_degree",
    "lambda_points",
    "grid_size",
    "probes",
    "nr_thetas",
    "nr_truncation",
    "sphere_degree",
    "sphere_symbols",
    "mc_samples",
    "mc_alphas",
    "tensor_trials",
    "hardy_window",
)

_LIST_KEYS = ("sphere_dims", "hardy_degrees")


def validate_scenario(obj, origin="scenario"):
    """Return (name, seed, suite, params) or raise UsageError naming the field."""
    if not isinstance(obj, dict):
        raise UsageError(f"{origin}: expected a JSON object")
    for key in obj:
        if key not in ("name", "seed", "suite", "parameters"):
            raise UsageError(f"{origin}.{key}: unknown key")
    name = obj.get("name", "scenario")
    if not isinstance(name, str) or not name:
        raise UsageError(f"{origin}.name: expected a nonempty string")
    seed = obj.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise UsageError(f"{origin}.seed: expected a 64-bit integer")
    suite = obj.get("suite", "all")
    if suite not in _SUITE_NAMES:
        raise UsageError(
            f"{origin}.suite: {suite!r} is not one of {', '.join(_SUITE_NAMES)}"
        )
    raw = obj.get("parameters", {})
    if not isinstance(raw, dict):
        raise UsageError(f"{origin}.parameters: expected a JSON object")
    params = json.loads(json.dumps(checks.DEFAULT_PARAMS))
    for key, value in raw.items():
        where = f"{origin}.parameters.{key}"
        if key not in params:
            raise UsageError(f"{where}: unknown parameter")
        if key == "tolerances":
            if not isinstance(value, dict):
                raise UsageError(f"{where}: expected a JSON object")
            for tk, tv in value.items():
                if tk not in params["tolerances"]:
                    raise UsageError(f"{where}.{tk}: unknown tolerance")
                if not isinstance(tv, (int, float)) or isinstance(tv, bool) or tv <= 0:
                    raise UsageError(f"{where}.{tk}: tolerances must be > 0")
                params["tolerances"][tk] = float(tv)
        elif key == "symbols":
            if not isinstance(value, list) or not all(isinstance(s, str) for s in value):
                raise UsageError(f"{where}: expected a list of symbol strings")
            for i, text in enumerate(value):
                try:
                    phi = LaurentPoly.from_text(text)
                except (PreconditionError, ValueError) as exc:
                    raise UsageError(f"{where}[{i}]: {exc}") from exc
                if phi.nvars != 1:
                    raise UsageError(f"{where}[{i}]: one-variable symbols only")
                if phi.band() > params["nr_truncation"] // 8:
                    raise UsageError(f"{where}[{i}]: band too large for this run")
            params[key] = list(value)
        elif key in _LIST_KEYS:
            if (
                not isinstance(value, list)
                or not value
                or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in value)
            ):
                raise UsageError(f"{where}: expected a nonempty list of integers >= 1")
            params[key] = list(value)
        elif key in _COUNT_KEYS:
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise UsageError(f"{where}: expected an integer >= 1")
            params[key] = value
        else:
            raise UsageError(f"{where}: unknown parameter")
    if params["elements"] < 2 * params["planted"]:
        raise UsageError(
            f"{origin}.parameters.elements: must be >= 2 * planted "
            f"({2 * params['planted']})"
        )
    if params["grid_size"] < 4 * (1 + params["spectra_degree"]):
        raise UsageError(
            f"{origin}.parameters.grid_size: must be >= 4 * (1 + spectra_degree)"
        )
    return name, seed, suite, params


def _load_scenario(path):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read scenario {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    return obj


def _run_dir(root, name):
    stamp = time.strftime("%Y%m%d-%H%M%S")
    base = Path(root) / f"{name}-{stamp}"
    out, k = base, 1
    while out.exists():
        out = Path(f"{base}-{k}")
        k += 1
    out.mkdir(parents=True)
    return out


def cmd_run(args):
    obj = _load_scenario(args.scenario)
    if args.seed is not None:
        obj["seed"] = args.seed
    if args.suite is not None:
        obj["suite"] = args.suite
    name, seed, suite, params = validate_scenario(obj, origin=Path(args.scenario).name)

    started = time.strftime("%Y-%m-%dT%H:%M:%S")
    t0 = time.perf_counter()
    echo = {"name": name, "seed": seed, "suite": suite, "parameters": params}
    report = checks.run_checks(suite, params, seed, scenario_echo=echo)
    elapsed = time.perf_counter() - t0

    outdir = _run_dir(args.out, name)
    (outdir / "report.json").write_text(checks.canonical_json(checks.report_json(report)))
    import numpy
    import scipy

    manifest = {
        "name": name,
        "started": started,
        "elapsed_seconds": elapsed,
        "timing": report.timing,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "version": report.version,
        "report": "report.json",
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    for record in report.checks:
        for fname, rows in record.artifacts.items():
            with open(outdir / fname, "w", newline="") as fh:
                csv.writer(fh).writerows(rows)

    for record in report.checks:
        mark = "PASS" if record.verdict else "FAIL"
        print(f"{mark} {record.check_id} [{record.tag}]")
    print(f"report: {outdir / 'report.json'}")
    if report.all_pass:
        return 0
    print("failing checks: " + ", ".join(report.failing_ids()), file=sys.stderr)
    return 1


def cmd_explain(args):
    print(checks.explain(args.check), end="")
    return 0


def cmd_symbol_eval(args):
    try:
        phi = LaurentPoly.from_text(args.expr)
    except (PreconditionError, ValueError) as exc:
        raise UsageError(f"cannot parse symbol: {exc}") from exc
    grid = args.grid
    if grid < 4 * (1 + phi.band()):
        raise UsageError(f"--grid must be >= 4 * (1 + band) = {4 * (1 + phi.band())}")
    print(f"symbol:   {phi.to_text()}")
    print(f"nvars:    {phi.nvars}")
    print(f"degrees:  [-{phi.deg_neg()}, {phi.deg_pos()}]")
    print(f"l1 norm:  {phi.l1_norm()!r}")
    lo, up = sup_norm(phi, grid_size=grid)
    print(f"sup |phi|: in [{lo!r}, {up!r}] ({grid}-point grid)")
    if phi.nvars == 1:
        try:
            print(f"winding about 0: {winding(phi, 0.0, grid_size=grid)}")
        except OnCurveError:
            print("winding about 0: undefined (0 lies on the sampled curve)")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sphiso",
        description="verification suite for Toeplitz operators of spherical isometries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file and write a report")
    p_run.add_argument("scenario", help="path to a scenario JSON file")
    p_run.add_argument("--seed", type=int, default=None, help="override the seed")
    p_run.add_argument("--suite", choices=_SUITE_NAMES, default=None, help="override the suite")
    p_run.add_argument("--out", default="runs", help="directory for run artifacts")
    p_run.set_defaults(fn=cmd_run)

    p_explain = sub.add_parser("explain", help="describe a named check")
    p_explain.add_argument("check", help="check id, e.g. thm2_1_identities")
    p_explain.set_defaults(fn=cmd_explain)

    p_eval = sub.add_parser("symbol-eval", help="parse a symbol and report norms")
    p_eval.add_argument("expr", help='symbol text, e.g. "z + 0.5*zbar^2"')
    p_eval.add_argument("--grid", type=int, default=512, help="sample grid size")
    p_eval.set_defaults(fn=cmd_symbol_eval)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
