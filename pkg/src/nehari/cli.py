"""Command-line front end.

Subcommands: ``check`` (condition verdicts), ``solve`` (full problem),
``restrict`` (one ladder level), ``sweep`` (convergence study).  A problem
file is JSON; with ``--out DIR`` the machine-readable reports (JSON + CSV)
and the figures are written there, while stdout carries a summary in the
requested format.  Exit codes: 0 success, 1 input error, 2 condition
failure, 3 numerical guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import analysis, plots
from .errors import ConditionError, InputError, NumericalGuardError
from .hankel import check_conditions, rate_predictor
from .realization import Realization, eval_coanalytic, gramians
from .solver import central_restricted, solve_full_nehari
from .subspace import build_ladder

DEFAULTS = {
    "grid": 4096,
    "tol": 1e-10,
    "gap_rtol": 1e-8,
    "k": 1,
    "k_max": 12,
    "n_fft": 8192,
}


def fmt12(x: float) -> str:
    return f"{float(x):.12g}"


def _round_floats(obj):
    """Round every float to 12 significant digits for reproducible output."""
    if isinstance(obj, float):
        return float(fmt12(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def dump_json(obj, stream) -> None:
    json.dump(_round_floats(obj), stream, indent=2)
    stream.write("\n")


@dataclass
class ProblemSpec:
    """Validated problem description parsed from JSON."""

    realization: Realization
    q_roots: tuple
    k: int
    k_max: int
    grid: int
    tol: float
    gap_rtol: float
    n_fft: int
    out: Optional[str] = None

    @staticmethod
    def from_json_dict(obj: dict) -> "ProblemSpec":
        if not isinstance(obj, dict):
            raise InputError("problem file must contain a JSON object")
        if "realization" not in obj:
            raise InputError("field 'realization': missing")
        try:
            realization = Realization.from_json_dict(obj["realization"])
        except InputError as exc:
            raise InputError(f"field 'realization': {exc}") from exc

        q_roots = []
        for i, pair in enumerate(obj.get("q_roots", [])):
            try:
                re, im = float(pair[0]), float(pair[1])
            except (TypeError, ValueError, IndexError) as exc:
                raise InputError(
                    f"field 'q_roots[{i}]': expected an [re, im] pair"
                ) from exc
            root = complex(re, im)
            if abs(root) >= 1.0:
                raise InputError(
                    f"field 'q_roots[{i}]': root {root} not strictly inside "
                    "the unit disk"
                )
            q_roots.append(root)

        def _int_field(name, minimum):
            val = obj.get(name, DEFAULTS[name])
            try:
                val = int(val)
            except (TypeError, ValueError) as exc:
                raise InputError(f"field '{name}': expected an integer") from exc
            if val < minimum:
                raise InputError(f"field '{name}': must be >= {minimum}")
            return val

        def _float_field(name, minimum):
            val = obj.get(name, DEFAULTS[name])
            try:
                val = float(val)
            except (TypeError, ValueError) as exc:
                raise InputError(f"field '{name}': expected a number") from exc
            if not val > minimum:
                raise InputError(f"field '{name}': must be > {minimum}")
            return val

        return ProblemSpec(
            realization=realization,
            q_roots=tuple(q_roots),
            k=_int_field("k", 1),
            k_max=_int_field("k_max", 1),
            grid=_int_field("grid", 16),
            tol=_float_field("tol", 0.0),
            gap_rtol=_float_field("gap_rtol", 0.0),
            n_fft=_int_field("n_fft", 64),
            out=obj.get("out"),
        )


def load_problem(args) -> ProblemSpec:
    if args.stdin:
        raw = sys.stdin.read()
        source = "<stdin>"
    else:
        if args.problem is None:
            raise InputError("no problem file given (pass a path or --stdin)")
        source = args.problem
        try:
            raw = Path(args.problem).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read problem file {source}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {source}: {exc}") from exc
    spec = ProblemSpec.from_json_dict(obj)
    # command-line overrides
    for name in ("grid", "tol", "gap_rtol", "k", "k_max", "out"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(spec, name, val)
    return spec


def _prepare(spec: ProblemSpec):
    gp = gramians(spec.realization, tol=spec.tol)
    if not gp.minimal:
        raise InputError(
            "realization must be minimal (controllable and observable); "
            f"got controllable={gp.controllable}, observable={gp.observable}"
        )
    report = check_conditions(spec.realization, gp, gap_rtol=spec.gap_rtol)
    return gp, report


def _outdir(spec: ProblemSpec) -> Optional[Path]:
    if spec.out is None:
        return None
    path = Path(spec.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(args, table_lines, json_obj, csv_writer=None) -> None:
    if args.format == "json":
        dump_json(json_obj, sys.stdout)
    elif args.format == "csv" and csv_writer is not None:
        csv_writer(sys.stdout)
    else:
        for line in table_lines:
            print(line)


def _write_grid_csv(path_or_stream, ts, lams, values, extra_name=None, extra=None):
    def write(stream):
        q, p = values[0].shape
        header = ["t", "re_lambda", "im_lambda"]
        for i in range(q):
            for j in range(p):
                header += [f"re_phi_{i}_{j}", f"im_phi_{i}_{j}"]
        if extra_name:
            header.append(extra_name)
        w = csv.writer(stream)
        w.writerow(header)
        for idx, (t, lam) in enumerate(zip(ts, lams)):
            row = [fmt12(t), fmt12(lam.real), fmt12(lam.imag)]
            for i in range(q):
                for j in range(p):
                    v = values[idx][i, j]
                    row += [fmt12(v.real), fmt12(v.imag)]
            if extra_name:
                row.append(fmt12(extra[idx]))
            w.writerow(row)

    if hasattr(path_or_stream, "write"):
        write(path_or_stream)
    else:
        with open(path_or_stream, "w", newline="", encoding="utf-8") as fh:
            write(fh)


def cmd_check(args) -> int:
    spec = load_problem(args)
    gp, report = _prepare(spec)
    obj = report.to_json_dict()
    obj["stein_residuals"] = [gp.residual_P, gp.residual_Q]
    rp = rate_predictor(spec.realization, spec.q_roots)
    obj["rate_predictor"] = rp.to_json_dict()
    lines = [
        f"gamma          = {fmt12(report.gamma)}",
        f"multiplicity   = {report.multiplicity} (channels p = {spec.realization.p})",
        f"c2_holds       = {report.c2_holds}",
        f"d0_invertible  = {report.d0_invertible}",
        f"z0_radius      = {fmt12(rp.z0_radius)} (z_radius = {fmt12(rp.z_radius)})",
    ]
    _emit(args, lines, obj)
    out = _outdir(spec)
    if out is not None:
        with open(out / "report.json", "w", encoding="utf-8") as fh:
            dump_json(obj, fh)
    return 0 if report.c2_holds else 2


def cmd_solve(args) -> int:
    spec = load_problem(args)
    gp, report = _prepare(spec)
    sol = solve_full_nehari(spec.realization, gp, report)

    n = spec.grid
    ts = 2 * np.pi * np.arange(n) / n
    lams = np.exp(1j * ts)
    values = [sol.evaluator(lam) for lam in lams]
    sigmas = [
        float(np.linalg.norm(eval_coanalytic(spec.realization, lam) + val, 2))
        for lam, val in zip(lams, values)
    ]
    allpass_residual = float(max(abs(s - sol.gamma) for s in sigmas))

    obj = sol.to_json_dict()
    obj["allpass_residual"] = allpass_residual
    obj["report"] = report.to_json_dict()
    lines = [
        f"gamma             = {fmt12(sol.gamma)}",
        f"allpass residual  = {fmt12(allpass_residual)} over {n} grid points",
        f"realization order = {sol.realization.n}",
        f"phi_plus(0)       = {np.array2string(sol.evaluator(0.0), precision=12)}",
    ]
    _emit(args, lines, obj,
          lambda s: _write_grid_csv(s, ts, lams, values, "sigma_max_error", sigmas))
    out = _outdir(spec)
    if out is not None:
        with open(out / "solution.json", "w", encoding="utf-8") as fh:
            dump_json(obj, fh)
        _write_grid_csv(out / "grid.csv", ts, lams, values, "sigma_max_error", sigmas)
        if not args.no_figures:
            plots.plot_error_modulus(ts, sigmas, sol.gamma, out / "error_modulus.png")
    return 0


def cmd_restrict(args) -> int:
    spec = load_problem(args)
    gp, report = _prepare(spec)
    lb = build_ladder(spec.q_roots, k=spec.k, p=spec.realization.p)
    sol = central_restricted(spec.realization, gp, lb)
    n = spec.grid
    ts = 2 * np.pi * np.arange(n) / n
    lams = np.exp(1j * ts)
    values = [sol.evaluator(lam) for lam in lams]
    n_fft = max(spec.n_fft, 8 * lb.m)
    certificate = analysis.optimality_certificate(
        analysis.error_evaluator(spec.realization, sol), lb, sol.gamma, n_fft=n_fft
    )

    obj = sol.to_json_dict()
    obj["certificate_residual"] = certificate
    obj["n_fft"] = n_fft
    lines = [
        f"gamma_k              = {fmt12(sol.gamma)} (k = {spec.k})",
        f"gamma (full)         = {fmt12(report.gamma)}",
        f"certificate residual = {fmt12(certificate)} at n_fft = {n_fft}",
        f"phi_plus(0)          = {np.array2string(sol.evaluator(0.0), precision=12)}",
    ]
    _emit(args, lines, obj, lambda s: _write_grid_csv(s, ts, lams, values))
    out = _outdir(spec)
    if out is not None:
        with open(out / "solution.json", "w", encoding="utf-8") as fh:
            dump_json(obj, fh)
        _write_grid_csv(out / "grid.csv", ts, lams, values)
        if not args.no_figures:
            plots.plot_solution_entries(ts, values, sol.gamma, out / "solution_grid.png")
    return 0


def cmd_sweep(args) -> int:
    spec = load_problem(args)
    gp, report = _prepare(spec)
    full = solve_full_nehari(spec.realization, gp, report, build_realization=False)
    rep = analysis.convergence_sweep(
        spec.realization, spec.q_roots, spec.k_max,
        n_grid=spec.grid, gp=gp, full=full,
    )
    obj = rep.to_json_dict()

    def write_csv(stream):
        w = csv.writer(stream)
        w.writerow(["k", "gamma_k", "sup_err", "delta_gap", "skipped"])
        for k, gk, se, dg, sk in rep.csv_rows():
            w.writerow([
                k,
                "" if gk is None else fmt12(gk),
                "" if se is None else fmt12(se),
                "" if dg is None else fmt12(dg),
                sk,
            ])

    predicted = "n/a (exact at every level)" if rep.predicted_log_rate is None \
        else fmt12(rep.predicted_log_rate)
    lines = [
        f"gamma            = {fmt12(rep.gamma)}",
        f"z0_radius        = {fmt12(rep.z0_radius)}",
        f"fitted slope     = "
        + ("inconclusive" if not rep.fit_ok else fmt12(rep.fitted_slope))
        + f" over {rep.n_fit_points} levels",
        f"predicted slope  = {predicted}",
        f"gamma monotone   = {rep.gamma_monotone}",
    ]
    _emit(args, lines, obj, write_csv)
    out = _outdir(spec)
    if out is not None:
        with open(out / "sweep.json", "w", encoding="utf-8") as fh:
            dump_json(obj, fh)
        with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
            write_csv(fh)
        if not args.no_figures:
            plots.plot_sweep(rep, out / "sweep.png")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are input errors (exit 1)
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nehari", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (
        ("check", cmd_check, "condition verdicts and rate prediction"),
        ("solve", cmd_solve, "solve the full problem"),
        ("restrict", cmd_restrict, "central solution on one ladder level"),
        ("sweep", cmd_sweep, "convergence sweep over ladder levels"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("problem", nargs="?", help="problem JSON file")
        p.add_argument("--stdin", action="store_true",
                       help="read the problem JSON from stdin")
        p.add_argument("--out", help="directory for reports, CSVs and figures")
        p.add_argument("--format", choices=("json", "csv", "table"),
                       default="table", help="stdout format")
        p.add_argument("--grid", type=int, help="circle grid size")
        p.add_argument("--tol", type=float, help="Stein residual tolerance")
        p.add_argument("--gap-rtol", dest="gap_rtol", type=float,
                       help="relative gap for multiplicity detection")
        p.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")
        if name == "restrict":
            p.add_argument("--k", type=int, help="ladder level")
        if name == "sweep":
            p.add_argument("--k-max", dest="k_max", type=int, help="largest level")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ConditionError as exc:
        print(f"condition failure: {exc}", file=sys.stderr)
        return 2
    except NumericalGuardError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
