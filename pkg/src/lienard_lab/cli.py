"""Command-line front end.

Subcommands
-----------
simulate   integrate one orbit and export t,x,y CSV plus an events sidecar
cycles     detect limit cycles; JSON report plus (y0, D) and (alpha, V) CSVs
alphabar   amplitude bound from a supplied intercept or the detected cycles
check      run the theorem checker and render a pass/fail table
phi        averaging integral: roots JSON plus an (r, Phi) CSV
reproduce  regenerate the reference tables/examples and diff against the
           committed golden files

Exit codes: 0 success, 1 usage, 2 model error, 3 numerical error,
4 golden-file mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from importlib import resources

import numpy as np

from . import catalog, model_files
from .amplitude import alpha_bar, solve_alpha
from .averaging import PhiProblem, phi, phi_roots
from .cycles import find_limit_cycles, potential_scan, scan_cycles
from .errors import (AnalysisError, ConfigError, DomainError, LienardError,
                     NoRootError, NumericalError, StructuralError,
                     UnknownModelError)
from .functions import find_zero_structure, validate_model
from .integrate import EventSpec, PhaseState, StepControl, integrate
from ._parallel import parallel_map
from .theorems import THEOREMS, check_hypotheses, predict_count

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MODEL = 2
EXIT_NUMERIC = 3
EXIT_GOLDEN = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _slug(name):
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in name)


def _atomic_write(path, text):
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path, obj):
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_csv(path, header, rows):
    lines = [header]
    for row in rows:
        lines.append(",".join(f"{v:.17g}" if isinstance(v, float) else str(v)
                              for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _load_model(args):
    if args.model:
        return model_files.load_system(args.model)
    if not args.builtin:
        raise ConfigError("supply --builtin NAME or --model PATH")
    params = {}
    if args.mu is not None:
        params["mu"] = args.mu
    if args.k is not None:
        params["k"] = args.k
    return catalog.builtin(args.builtin, params)


def _ctrl(args):
    kw = {}
    if args.rtol is not None:
        kw["rtol"] = args.rtol
    if args.atol is not None:
        kw["atol"] = args.atol
    return StepControl(**kw)


def _span(text, what):
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise ConfigError(f"{what} must look like LO:HI, got {text!r}") from None
    return lo, hi


def render_table(rows):
    """Fixed-column text table of (mu, y_plus0, alpha_bar), mu ascending,
    10 significant digits."""
    if not rows:
        raise ValueError("render_table needs at least one row")
    out = [f"{'mu':>8s}  {'y_plus0':>18s}  {'alpha_bar':>18s}"]
    for mu, y0, ab in sorted(rows, key=lambda r: r[0]):
        out.append(f"{mu:>8g}  {y0:>18.10g}  {ab:>18.10g}")
    return "\n".join(out) + "\n"


def _cmd_simulate(args):
    system = _load_model(args)
    if args.y0 is None:
        raise ConfigError("simulate needs --y0")
    ctrl = _ctrl(args)
    stop = EventSpec(args.stop_kind, args.stop_direction, args.stop_count)
    record = tuple(EventSpec(k) for k in
                   ("x_axis_cross", "curve_F_cross") if k != args.stop_kind)
    traj = integrate(system, PhaseState(0.0, args.x0, args.y0), stop, ctrl,
                     record=record)
    base = os.path.join(args.out, f"{_slug(system.name)}_trajectory")
    wrote = []
    if args.format in ("csv", "both"):
        traj.to_csv(base + ".csv", base + "_events.csv")
        wrote += [base + ".csv", base + "_events.csv"]
    if args.format in ("json", "both"):
        _write_json(base + ".json", {
            "model": system.name, "status": traj.status,
            "n_states": int(traj.states.shape[0]),
            "end": {"t": traj.end.t, "x": traj.end.x, "y": traj.end.y},
            "events": [{"kind": k, "t": s.t, "x": s.x, "y": s.y}
                       for k, s in traj.events],
        })
        wrote.append(base + ".json")
    print(f"status={traj.status} events={len(traj.events)} "
          f"states={traj.states.shape[0]}")
    for w in wrote:
        print(f"wrote {w}")
    return EXIT_OK


def _cmd_cycles(args):
    system = _load_model(args)
    ctrl = _ctrl(args)
    scan = scan_cycles(system, y_max=args.y_max, grid_n=args.grid, ctrl=ctrl)
    report = {"model": system.name,
              "cycles": [c.as_dict() for c in scan.cycles],
              "scan": {"y_min": float(scan.y_grid[0]),
                       "y_max": float(scan.y_grid[-1]),
                       "grid_n": int(scan.y_grid.size)}}
    base = os.path.join(args.out, f"{_slug(system.name)}_cycles")
    wrote = []
    if args.format in ("json", "both"):
        _write_json(base + ".json", report)
        wrote.append(base + ".json")
    if args.format in ("csv", "both"):
        _write_csv(base + "_return_map.csv", "y0,D",
                   [(float(y), float(d)) for y, d in zip(scan.y_grid, scan.D_values)])
        wrote.append(base + "_return_map.csv")
        if args.alpha_range:
            lo, hi = _span(args.alpha_range, "--alpha-range")
            pscan = potential_scan(system, (lo, hi), max(args.grid // 2, 50), ctrl)
            _write_csv(base + "_potential.csv", "alpha,V",
                       [(float(a), float(v)) for a, v in
                        zip(pscan.alphas, pscan.V_values)])
            wrote.append(base + "_potential.csv")
    print(f"{len(scan.cycles)} cycle(s) "
          + " ".join(f"y+={c.y_plus0:.8g}[{c.stability}]" for c in scan.cycles))
    for w in wrote:
        print(f"wrote {w}")
    return EXIT_OK


def _cmd_alphabar(args):
    system = _load_model(args)
    ctrl = _ctrl(args)
    zs = find_zero_structure(system)
    results = []
    if args.y0 is not None:
        if args.bracket:
            bracket = _span(args.bracket, "--bracket")
        elif len(zs.zeros) >= 2:
            bracket = (zs.zeros[0], zs.zeros[1])
        elif zs.zeros:
            bracket = (zs.zeros[0], min(system.d, 10 * zs.zeros[0]))
        else:
            raise ConfigError("F has no positive zero; supply --bracket LO:HI")
        a = solve_alpha(system, args.y0, bracket)
        results.append({"interval_index": 0, "alpha_prime": a,
                        "alpha_double_prime": a, "alpha_bar": a,
                        "y_plus0": args.y0})
    else:
        cycles = find_limit_cycles(system, ctrl=ctrl)
        if not cycles:
            raise AnalysisError("no limit cycles detected; supply --y0")
        for i, c in enumerate(cycles):
            if i + 1 < len(zs.zeros):
                bracket = (zs.zeros[i], zs.zeros[i + 1])
            elif zs.zeros:
                bracket = (zs.zeros[-1], min(system.d, 10 * zs.zeros[-1]))
            else:
                break
            try:
                results.append(alpha_bar(system, c, bracket, i).as_dict())
            except NoRootError:
                results.append({"interval_index": i, "alpha_bar": None,
                                "y_plus0": c.y_plus0,
                                "note": "no root in bracket"})
    path = os.path.join(args.out, f"{_slug(system.name)}_alphabar.json")
    _write_json(path, {"model": system.name, "bounds": results})
    for r in results:
        print(f"interval {r['interval_index']}: alpha_bar={r.get('alpha_bar')}")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_check(args):
    system = _load_model(args)
    ctrl = _ctrl(args)
    if args.theorem == "auto":
        n, report = predict_count(system, ctrl)
    else:
        report = check_hypotheses(system, args.theorem, ctrl=ctrl)
        n = report.predicted_N
    path = os.path.join(args.out, f"{_slug(system.name)}_check.json")
    _write_json(path, report.as_dict())
    print(f"theorem: {report.theorem}    predicted_N: "
          f"{n if n is not None else 'none'}")
    if report.hypotheses:
        width = max(len(h.statement) for h in report.hypotheses)
        for h in report.hypotheses:
            print(f"  ({h.id}) {h.statement:<{width}s}  [{h.verdict}]")
    for note in report.notes:
        print(f"  note: {note}")
    print(f"wrote {path}")
    return EXIT_OK


def _phi_problem(args):
    if args.p_coeffs:
        coeffs = tuple(float(c) for c in args.p_coeffs.split(","))
        mu = args.mu if args.mu is not None else 0.0
    elif args.builtin == "quintic":
        if args.k is None:
            raise ConfigError("phi with --builtin quintic needs --k")
        coeffs = (-4.0, 0.0, 75.0, 0.0, -50.0 * args.k)
        mu = 0.1
    elif args.builtin == "vdp":
        if args.mu is None:
            raise ConfigError("phi with --builtin vdp needs --mu")
        coeffs = (-1.0, 0.0, 1.0)
        mu = args.mu
    else:
        raise ConfigError("phi needs --p-coeffs or --builtin quintic/vdp")
    r_range = _span(args.r_range, "--r-range") if args.r_range else (1e-2, 3.0)
    return PhiProblem(coeffs, mu, r_range)


def _cmd_phi(args):
    problem = _phi_problem(args)
    roots = phi_roots(problem, max(args.grid, 100))
    base = os.path.join(args.out, "phi")
    wrote = []
    if args.format in ("json", "both"):
        _write_json(base + "_roots.json", {
            "p_coeffs": list(problem.p_coeffs), "mu": problem.mu,
            "r_range": list(problem.r_range),
            "roots": list(roots.roots), "tangential": list(roots.tangential)})
        wrote.append(base + "_roots.json")
    if args.format in ("csv", "both"):
        _write_csv(base + ".csv", "r,Phi", [(float(r), float(v))
                                            for r, v in roots.values])
        wrote.append(base + ".csv")
    print(f"roots: {list(roots.roots)} tangential: {list(roots.tangential)}")
    for w in wrote:
        print(f"wrote {w}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduce: regenerate reference tables and diff against the golden files

def _golden(name):
    with resources.files("lienard_lab.golden").joinpath(name).open("r") as fh:
        return json.load(fh)


def _reproduce_vdp_table(out_dir, ctrl):
    golden = _golden("vdp_table.json")
    bracket = tuple(golden["bracket"])
    tol = golden["tolerances"]

    def run_row(row):
        mu = row["mu"]
        system = catalog.builtin("vdp", {"mu": mu})
        cycles = find_limit_cycles(system, ctrl=ctrl)
        y_ours = cycles[0].y_plus0 if cycles else math.nan
        ab_pub = solve_alpha(system, row["y_plus0"], bracket)
        ab_ours = (solve_alpha(system, y_ours, bracket)
                   if math.isfinite(y_ours) else math.nan)
        return {
            "mu": mu,
            "y_plus0": y_ours,
            "y_plus0_reference": row["y_plus0"],
            "alpha_bar": ab_ours,
            "alpha_bar_reference": row["alpha_bar"],
            "alpha_bar_from_reference_y": ab_pub,
        }

    rows = parallel_map(run_row, golden["rows"])
    failures = []
    for r in rows:
        checks = {
            "y_plus0_rel": abs(r["y_plus0"] - r["y_plus0_reference"])
            / r["y_plus0_reference"],
            "alpha_bar_from_reference_y_rel":
                abs(r["alpha_bar_from_reference_y"] - r["alpha_bar_reference"])
                / r["alpha_bar_reference"],
            "alpha_bar_pipeline_rel": abs(r["alpha_bar"] - r["alpha_bar_reference"])
            / r["alpha_bar_reference"],
        }
        r["diffs"] = checks
        r["pass"] = all(v <= tol[k] for k, v in checks.items())
        if not r["pass"]:
            failures.append(r["mu"])

    table_txt = render_table([(r["mu"], r["y_plus0"], r["alpha_bar"])
                              for r in rows])
    _atomic_write(os.path.join(out_dir, "vdp_table.txt"), table_txt)
    _write_json(os.path.join(out_dir, "vdp_table.json"),
                {"rows": rows, "failures": failures})
    print(table_txt, end="")
    print(f"vdp-table: {len(rows) - len(failures)}/{len(rows)} rows match "
          f"(tolerances {tol})")
    return failures


def _examples_quantity(check, system, ctrl, cycle_cache):
    q = check["quantity"]
    key = (check.get("builtin"), json.dumps(check.get("params", {}),
                                            sort_keys=True))

    def cycles():
        if key not in cycle_cache:
            cycle_cache[key] = find_limit_cycles(system, ctrl=ctrl)
        return cycle_cache[key]

    if q == "cycle_count":
        return len(cycles())
    if q == "stabilities":
        return [c.stability for c in cycles()]
    if q == "intercepts":
        vals = [c.y_plus0 for c in cycles()]
        return vals[:check["first_n"]] if "first_n" in check else vals
    if q == "zeros":
        return list(find_zero_structure(system).zeros)
    if q == "extrema":
        return list(find_zero_structure(system).extrema)
    if q == "alpha_bar_from_y0":
        return solve_alpha(system, check["y0"], tuple(check["bracket"]))
    if q == "predicted_N":
        return predict_count(system, ctrl)[0]
    if q == "c1_residual":
        rep = validate_model(system.F, c1_required=True)
        return max(rep.max_value_residual, rep.max_derivative_residual)
    if q == "alpha_bar_vs_bounded":
        mu = check["params"]["mu"]
        other = catalog.builtin("vdp_bounded", {"mu": mu})
        zs = find_zero_structure(system)
        bracket = (zs.zeros[0], min(system.d, 4.0))
        c1 = find_limit_cycles(system, ctrl=ctrl)
        c2 = find_limit_cycles(other, ctrl=ctrl)
        a1 = alpha_bar(system, c1[0], bracket).alpha_bar
        a2 = alpha_bar(other, c2[0], bracket).alpha_bar
        return abs(a1 - a2)
    raise ConfigError(f"unknown golden quantity {q!r}")


def _value_matches(got, expect, atol):
    if isinstance(expect, list):
        if not isinstance(got, list) or len(got) != len(expect):
            return False
        return all(_value_matches(g, e, atol) for g, e in zip(got, expect))
    if isinstance(expect, (int, float)) and not isinstance(expect, bool):
        if got is None or (isinstance(got, float) and math.isnan(got)):
            return False
        return abs(float(got) - float(expect)) <= (atol if atol is not None else 0.0)
    return got == expect


def _reproduce_examples(out_dir, ctrl):
    golden = _golden("examples.json")
    failures = []
    results = []
    cycle_cache = {}
    for check in golden["checks"]:
        system = catalog.builtin(check["builtin"], check.get("params", {}))
        try:
            got = _examples_quantity(check, system, ctrl, cycle_cache)
            ok = _value_matches(got, check["expect"], check.get("atol"))
        except LienardError as exc:
            got, ok = f"error: {exc}", False
        results.append({"id": check["id"], "expected": check["expect"],
                        "computed": got, "atol": check.get("atol"),
                        "pass": ok})
        if not ok:
            failures.append(check["id"])
        marker = "ok " if ok else "FAIL"
        print(f"  [{marker}] {check['id']}: computed={got} "
              f"expected={check['expect']}")
    _write_json(os.path.join(out_dir, "examples_report.json"),
                {"results": results, "failures": failures})
    print(f"examples: {len(results) - len(failures)}/{len(results)} checks match")
    return failures


def _cmd_reproduce(args):
    ctrl = _ctrl(args)
    targets = ("vdp-table", "examples") if args.target == "all" else (args.target,)
    failures = []
    for target in targets:
        if target == "vdp-table":
            failures += [f"vdp-table mu={m}"
                         for m in _reproduce_vdp_table(args.out, ctrl)]
        elif target == "examples":
            failures += _reproduce_examples(args.out, ctrl)
        else:
            raise ConfigError(f"unknown reproduce target {target!r}")
    if failures:
        print(f"MISMATCH: {failures}")
        return EXIT_GOLDEN
    print("all golden checks match")
    return EXIT_OK


def _build_parser():
    p = _Parser(prog="lienard-lab",
                description="Limit-cycle analysis for planar Lienard systems")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=True):
        if model:
            sp.add_argument("--builtin", help="catalog model name")
            sp.add_argument("--mu", type=float)
            sp.add_argument("--k", type=float)
            sp.add_argument("--model", help="path to a model definition file")
        sp.add_argument("--rtol", type=float)
        sp.add_argument("--atol", type=float)
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--format", choices=("csv", "json", "both"),
                        default="both")

    sp = sub.add_parser("simulate", help="integrate one orbit")
    common(sp)
    sp.add_argument("--y0", type=float)
    sp.add_argument("--x0", type=float, default=0.0)
    sp.add_argument("--stop-kind", default="y_axis_cross",
                    choices=("x_axis_cross", "y_axis_cross", "curve_F_cross"))
    sp.add_argument("--stop-direction", default="any",
                    choices=("rising", "falling", "any"))
    sp.add_argument("--stop-count", type=int, default=2)
    sp.set_defaults(fn=_cmd_simulate)

    sp = sub.add_parser("cycles", help="detect limit cycles")
    common(sp)
    sp.add_argument("--y-max", type=float)
    sp.add_argument("--grid", type=int, default=400)
    sp.add_argument("--alpha-range", help="LO:HI for the potential scan CSV")
    sp.set_defaults(fn=_cmd_cycles)

    sp = sub.add_parser("alphabar", help="amplitude upper bound")
    common(sp)
    sp.add_argument("--y0", type=float, help="y-axis intercept; omit to use "
                                             "detected cycles")
    sp.add_argument("--bracket", help="LO:HI root bracket")
    sp.set_defaults(fn=_cmd_alphabar)

    sp = sub.add_parser("check", help="verify theorem hypotheses")
    common(sp)
    sp.add_argument("--theorem", default="auto", choices=("auto",) + THEOREMS)
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("phi", help="averaging radius criterion")
    common(sp)
    sp.add_argument("--p-coeffs", help="comma-separated ascending coefficients")
    sp.add_argument("--r-range", help="LO:HI radius range")
    sp.add_argument("--grid", type=int, default=200)
    sp.set_defaults(fn=_cmd_phi)

    sp = sub.add_parser("reproduce", help="regenerate reference tables and "
                                          "diff against golden files")
    common(sp, model=False)
    sp.add_argument("--target", default="all",
                    choices=("vdp-table", "examples", "all"))
    sp.set_defaults(fn=_cmd_reproduce)
    return p


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except (_UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnknownModelError, ConfigError, StructuralError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (NumericalError, DomainError, AnalysisError, NoRootError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
