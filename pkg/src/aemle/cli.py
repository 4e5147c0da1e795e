"""Command-line frontend: every capability as a subcommand with seeded runs.

Emission rules shared by all subcommands: each run prints a machine-readable
header carrying the tool version, the resolved parameters, and the seed;
reals are written with 17 significant digits so CSV round-trips losslessly;
identical flags and seed give byte-identical output.  Exit codes: 0 success,
2 bad usage or unparseable input, 3 a computation that raised.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import AemleError, ConfigError, SpecError
from .estimator import MleConfig, data_from_json, mle_grid_adaptive
from .fisher import classical_bound, cr_lower_bound, max_grover_depth
from .hwspec import (
    HardwareAssumptions,
    TimeInterpretation,
    compute_spec,
    gate_error_gap,
    report_rows,
)
from .model import (
    ScheduleKind,
    amplitude_point,
    make_schedule,
    noisy_good_prob,
    schedule_to_json,
    total_queries,
)
from .sampler import hit_rate_curve, run_trials, sample_counts
from .survey import anomaly_density, default_density_schedule, error_vs_kappa_contour

# Default seed: fixed so every run is reproducible out of the box.
DEFAULT_SEED = 20250817

_SEED_ENV = "AEMLE_SEED"

_KINDS = ["classical", "lis", "eis", "powerbase"]


def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _resolved_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(_SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{_SEED_ENV}={env!r} is not an integer") from exc
    return DEFAULT_SEED


def _emit(
    args: argparse.Namespace,
    command: str,
    params: dict[str, object],
    columns: list[str],
    rows: list[list[object]],
) -> None:
    seed = params.get("seed", "")
    if args.format == "json":
        doc = {
            "meta": {
                "tool": "aemle",
                "version": __version__,
                "command": command,
                "params": params,
            },
            "columns": columns,
            "rows": rows,
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        pairs = " ".join(f"{k}={_fmt(v)}" for k, v in params.items())
        header = f"# aemle {__version__} {command} {pairs}".rstrip()
        cells = [[_fmt(v) for v in row] for row in rows]
        if args.format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(cells)
            text = header + "\n" + buf.getvalue()
        else:
            widths = [
                max(len(columns[i]), max((len(r[i]) for r in cells), default=0))
                for i in range(len(columns))
            ]
            lines = [header, "  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
            for row in cells:
                lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
            text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _schedule_descriptor(schedule) -> str:
    depths = "|".join(str(m) for m in schedule.depths)
    shots = "|".join(str(n) for n in schedule.shots)
    return f"{schedule.kind.value};depths={depths};shots={shots}"


def _check(parser: argparse.ArgumentParser, ok: bool, message: str) -> None:
    if not ok:
        parser.error(message)


# ---------------------------------------------------------------- subcommands


def cmd_schedule(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    schedule = make_schedule(args.kind, args.M, args.shots, args.r)
    params: dict[str, object] = {
        "seed": _resolved_seed(args),
        "kind": args.kind,
        "M": args.M,
        "shots": args.shots,
        "n_queries": total_queries(schedule),
    }
    if args.r is not None:
        params["r"] = args.r
    if args.format == "json":
        doc = json.loads(schedule_to_json(schedule))
        doc["meta"] = {"tool": "aemle", "version": __version__, "command": "schedule", "params": params}
        text = json.dumps(doc, indent=2) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return
    rows = [[k, m, n] for k, (m, n) in enumerate(schedule.stages)]
    _emit(args, "schedule", params, ["stage", "m", "shots"], rows)


def cmd_crbound(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    _check(parser, 0.0 < args.a < 1.0, f"--a must be strictly inside (0, 1), got {args.a}")
    _check(parser, args.kappa >= 0.0, f"--kappa must be >= 0, got {args.kappa}")
    _check(parser, args.M >= 1, f"--M must be >= 1, got {args.M}")
    _check(parser, args.shots >= 1, f"--shots must be >= 1, got {args.shots}")
    point = amplitude_point(args.a, args.kappa)
    mbar = max_grover_depth(args.kappa) if args.kappa > 0.0 else None
    params: dict[str, object] = {
        "seed": _resolved_seed(args),
        "a": args.a,
        "kappa": args.kappa,
        "kind": args.kind,
        "shots": args.shots,
    }
    if args.r is not None:
        params["r"] = args.r
    if mbar is not None:
        params["m_bar"] = mbar
    rows = []
    for M in range(1, args.M + 1):
        schedule = make_schedule(args.kind, M, args.shots, args.r)
        nq = total_queries(schedule)
        bound = cr_lower_bound(point, schedule)
        beyond = mbar is not None and max(schedule.depths) > mbar
        rows.append(
            [M, nq, bound.epsilon_min, classical_bound(args.a, nq), bound.identifiable, beyond]
        )
    _emit(
        args,
        "crbound",
        params,
        ["M", "n_queries", "epsilon_min", "classical_epsilon", "identifiable", "beyond_max_depth"],
        rows,
    )


def cmd_estimate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    seed = _resolved_seed(args)
    config = MleConfig(divisions_per_stage=args.divisions)
    params: dict[str, object] = {"seed": seed, "divisions": args.divisions}
    if args.data is not None:
        with open(args.data, "r", encoding="utf-8") as fh:
            data = data_from_json(fh.read())
        params["data"] = os.path.basename(args.data)
    else:
        _check(parser, args.a is not None and args.kappa is not None,
               "--simulate requires --a and --kappa")
        _check(parser, 0.0 <= args.a <= 1.0, f"--a must be in [0, 1], got {args.a}")
        _check(parser, args.kappa >= 0.0, f"--kappa must be >= 0, got {args.kappa}")
        schedule = make_schedule(args.kind, args.M, args.shots, args.r)
        data = sample_counts(amplitude_point(args.a, args.kappa), schedule, seed)
        params.update({"a": args.a, "kappa": args.kappa, "kind": args.kind,
                       "M": args.M, "shots": args.shots})
    result = mle_grid_adaptive(data, config)
    rows = [[
        result.a_hat,
        result.kappa_hat,
        result.log_likelihood_at_max,
        result.likelihood_evaluations,
        result.anomalous,
        result.anomality if result.anomality is not None else float("nan"),
        result.kappa_identifiable,
    ]]
    _emit(
        args,
        "estimate",
        params,
        ["a_hat", "kappa_hat", "log_likelihood", "evaluations", "anomalous",
         "anomality", "kappa_identifiable"],
        rows,
    )


def cmd_trials(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    _check(parser, 0.0 < args.a < 1.0, f"--a must be strictly inside (0, 1), got {args.a}")
    _check(parser, args.kappa >= 0.0, f"--kappa must be >= 0, got {args.kappa}")
    _check(parser, args.trials >= 1, f"--trials must be >= 1, got {args.trials}")
    seed = _resolved_seed(args)
    batch = run_trials(
        amplitude_point(args.a, args.kappa),
        args.kind,
        args.M,
        args.shots,
        args.trials,
        seed,
        MleConfig(divisions_per_stage=args.divisions),
        args.r,
        workers=args.threads,
    )
    params: dict[str, object] = {
        "seed": seed,
        "a": args.a,
        "kappa": args.kappa,
        "kind": args.kind,
        "shots": args.shots,
        "trials": args.trials,
        "divisions": args.divisions,
    }
    rows = [
        [rec.M, rec.n_queries, rec.rmse, rec.stderr, rec.mean_kappa_hat,
         rec.failed_trials, rec.epsilon_min]
        for rec in batch.records
    ]
    _emit(
        args,
        "trials",
        params,
        ["M", "N_q", "rmse", "stderr", "mean_kappa_hat", "failed_trials", "epsilon_min"],
        rows,
    )


def cmd_density(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    _check(parser, args.kappa > 0.0, f"--kappa must be > 0, got {args.kappa}")
    _check(parser, args.samples >= 1000, f"--samples must be >= 1000, got {args.samples}")
    _check(parser, 0.0 < args.threshold < 1.0,
           f"--threshold must be inside (0, 1), got {args.threshold}")
    seed = _resolved_seed(args)
    if args.M is not None:
        schedule = make_schedule(ScheduleKind.EIS, args.M, args.shots)
    else:
        schedule = default_density_schedule(args.kappa, args.shots)
    result = anomaly_density(args.kappa, args.samples, args.threshold, schedule, seed)
    params: dict[str, object] = {
        "seed": seed,
        "kappa": args.kappa,
        "samples": args.samples,
        "threshold": args.threshold,
    }
    rows = [[
        result.kappa,
        result.density_percent,
        result.stderr_percent,
        result.samples,
        result.skipped,
        result.threshold,
        _schedule_descriptor(result.schedule),
    ]]
    _emit(
        args,
        "density",
        params,
        ["kappa", "density_percent", "stderr_percent", "samples", "skipped",
         "threshold", "schedule"],
        rows,
    )


def cmd_contour(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    _check(parser, 0.0 < args.a_min < args.a_max < 1.0,
           "--a-min/--a-max must satisfy 0 < min < max < 1")
    _check(parser, 0.0 < args.kappa_min < args.kappa_max,
           "--kappa-min/--kappa-max must satisfy 0 < min < max")
    _check(parser, args.a_points >= 2 and args.kappa_points >= 2,
           "--a-points and --kappa-points must be >= 2")
    schedule = make_schedule(args.kind, args.M, args.shots, args.r)
    a_grid = np.linspace(args.a_min, args.a_max, args.a_points)
    k_grid = np.geomspace(args.kappa_min, args.kappa_max, args.kappa_points)
    grid = error_vs_kappa_contour(a_grid, k_grid, schedule)
    params: dict[str, object] = {
        "seed": _resolved_seed(args),
        "kind": args.kind,
        "M": args.M,
        "shots": args.shots,
        "a_points": args.a_points,
        "kappa_points": args.kappa_points,
    }
    columns = ["a"] + [f"kappa={_fmt(k)}" for k in grid.kappa_values]
    rows = [[a, *eps_row] for a, eps_row in zip(grid.a_values, grid.epsilon_min)]
    _emit(args, "contour", params, columns, rows)


def cmd_hwspec(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    _check(parser, 0.0 < args.eps < 1.0, f"--eps must be inside (0, 1), got {args.eps}")
    _check(parser, args.nint >= 1, f"--nint must be >= 1, got {args.nint}")
    assumptions = HardwareAssumptions(
        epsilon_target=args.eps,
        N_int=args.nint,
        N_k=args.nk,
        t_s=args.ts,
        t_d=args.td,
        t_m=args.tm,
        interval_factor=args.interval_factor,
        error_ratio=args.error_ratio,
        reference_amplitude=args.ref_a,
        kappa_bar_override=args.kappa_bar,
    )
    interpretation = TimeInterpretation(args.interpretation)
    report = compute_spec(assumptions, interpretation)
    gap = gate_error_gap(report, args.device_eps_s, args.device_eps_d)
    params: dict[str, object] = {
        "seed": _resolved_seed(args),
        "eps": args.eps,
        "nint": args.nint,
        "nk": args.nk,
        "t_s": args.ts,
        "t_d": args.td,
        "t_m": args.tm,
        "interval_factor": args.interval_factor,
        "error_ratio": args.error_ratio,
        "interpretation": args.interpretation,
    }
    if args.kappa_bar is not None:
        params["kappa_bar_override"] = args.kappa_bar
    rows = [[name, desc, value] for name, desc, value in report_rows(report)]
    rows.append(["gap_s", "device eps_s over required", gap.gap_s])
    rows.append(["gap_d", "device eps_d over required", gap.gap_d])
    _emit(args, "hwspec", params, ["quantity", "description", "value"], rows)


def cmd_hitcurve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    _check(parser, 0.0 <= args.a <= 1.0, f"--a must be in [0, 1], got {args.a}")
    _check(parser, args.kappa >= 0.0, f"--kappa must be >= 0, got {args.kappa}")
    _check(parser, args.shots >= 1, f"--shots must be >= 1, got {args.shots}")
    if args.depths is not None:
        try:
            depths = [int(tok) for tok in args.depths.split(",") if tok.strip() != ""]
        except ValueError:
            parser.error(f"--depths must be a comma-separated integer list, got {args.depths!r}")
        _check(parser, bool(depths) and all(m >= 0 for m in depths),
               "--depths must contain non-negative integers")
    else:
        depths = list(range(args.max_depth + 1))
    seed = _resolved_seed(args)
    point = amplitude_point(args.a, args.kappa)
    curve = hit_rate_curve(point, depths, args.shots, seed)
    params: dict[str, object] = {
        "seed": seed,
        "a": args.a,
        "kappa": args.kappa,
        "shots": args.shots,
    }
    rows = [[m, rate, noisy_good_prob(m, point)] for m, rate in curve]
    _emit(args, "hitcurve", params, ["m", "hit_rate", "expected_prob"], rows)


# -------------------------------------------------------------------- parser


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None,
                     help=f"RNG seed (default {DEFAULT_SEED}, env {_SEED_ENV} overrides)")
    sub.add_argument("--format", choices=["csv", "json", "table"], default="table",
                     help="output format (default table)")
    sub.add_argument("--output", default=None, help="write to this file instead of stdout")
    sub.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                     help="worker threads where applicable (results are thread-count independent)")


def _add_schedule_flags(sub: argparse.ArgumentParser, default_M: int = 6) -> None:
    sub.add_argument("--kind", choices=_KINDS, default="eis", help="schedule kind (default eis)")
    sub.add_argument("--M", type=int, default=default_M, help=f"stage count parameter (default {default_M})")
    sub.add_argument("--shots", type=int, default=100, help="shots per stage (default 100)")
    sub.add_argument("--r", type=float, default=None, help="depth base for --kind powerbase")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aemle",
        description="Amplitude estimation under depolarizing noise: bounds, "
                    "estimators, surveys, and hardware requirements.",
    )
    parser.add_argument("--version", action="version", version=f"aemle {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("crbound", help="error lower bound versus schedule size")
    _add_common(sub)
    _add_schedule_flags(sub, default_M=10)
    sub.add_argument("--a", type=float, required=True, help="target amplitude in (0, 1)")
    sub.add_argument("--kappa", type=float, default=0.0, help="noise level (default 0)")
    sub.set_defaults(func=cmd_crbound)

    sub = subs.add_parser("estimate", help="maximum-likelihood estimate from data or simulation")
    _add_common(sub)
    _add_schedule_flags(sub)
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", default=None, help="experiment-data JSON file")
    src.add_argument("--simulate", action="store_true", help="sample data from --a/--kappa first")
    sub.add_argument("--a", type=float, default=None, help="true amplitude for --simulate")
    sub.add_argument("--kappa", type=float, default=None, help="true noise level for --simulate")
    sub.add_argument("--divisions", type=int, default=64, help="grid divisions per stage (default 64)")
    sub.set_defaults(func=cmd_estimate)

    sub = subs.add_parser("trials", help="seeded repeated-estimation accuracy sweep")
    _add_common(sub)
    _add_schedule_flags(sub)
    sub.add_argument("--a", type=float, required=True, help="true amplitude in (0, 1)")
    sub.add_argument("--kappa", type=float, default=0.0, help="true noise level (default 0)")
    sub.add_argument("--trials", type=int, default=100, help="repetitions per M (default 100)")
    sub.add_argument("--divisions", type=int, default=64, help="grid divisions per stage (default 64)")
    sub.set_defaults(func=cmd_trials)

    sub = subs.add_parser("density", help="fraction of anomalous target amplitudes")
    _add_common(sub)
    sub.add_argument("--kappa", type=float, required=True, help="noise level > 0")
    sub.add_argument("--samples", type=int, default=100_000, help="uniform samples (default 100000)")
    sub.add_argument("--threshold", type=float, default=0.9, help="beta threshold (default 0.9)")
    sub.add_argument("--M", type=int, default=None,
                     help="stage count of the probing schedule (default: depth-limit matched)")
    sub.add_argument("--shots", type=int, default=100, help="shots per stage (default 100)")
    sub.set_defaults(func=cmd_density)

    sub = subs.add_parser("contour", help="error bound on an (a, kappa) grid")
    _add_common(sub)
    _add_schedule_flags(sub)
    sub.add_argument("--a-min", type=float, default=0.01)
    sub.add_argument("--a-max", type=float, default=0.99)
    sub.add_argument("--a-points", type=int, default=99)
    sub.add_argument("--kappa-min", type=float, default=1e-5)
    sub.add_argument("--kappa-max", type=float, default=1e-1)
    sub.add_argument("--kappa-points", type=int, default=9)
    sub.set_defaults(func=cmd_contour)

    sub = subs.add_parser("hwspec", help="hardware requirements for a target accuracy")
    _add_common(sub)
    sub.add_argument("--eps", type=float, required=True, help="target estimation error")
    sub.add_argument("--nint", type=int, required=True, help="integration variable count")
    sub.add_argument("--nk", type=int, default=100, help="shots per stage (default 100)")
    sub.add_argument("--ts", type=float, default=7.1e-8, help="single-qubit gate time, s")
    sub.add_argument("--td", type=float, default=2.8e-7, help="two-qubit gate time, s")
    sub.add_argument("--tm", type=float, default=3.5e-6, help="measurement time, s")
    sub.add_argument("--interval-factor", type=float, default=10.0,
                     help="between-shot interval as a multiple of execution time (default 10)")
    sub.add_argument("--error-ratio", type=float, default=10.0,
                     help="two-qubit over single-qubit gate error (default 10)")
    sub.add_argument("--ref-a", type=float, default=0.375,
                     help="reference amplitude for the noise scan (default 0.375)")
    sub.add_argument("--kappa-bar", type=float, default=None,
                     help="override the tolerable noise level instead of scanning")
    sub.add_argument("--interpretation", choices=["per_shot", "per_mbar"], default="per_shot",
                     help="interval-time rule in the total-time sum (default per_shot)")
    sub.add_argument("--device-eps-s", type=float, default=1.0e-3,
                     help="device single-qubit error for the gap rows (default 1e-3)")
    sub.add_argument("--device-eps-d", type=float, default=1.0e-2,
                     help="device two-qubit error for the gap rows (default 1e-2)")
    sub.set_defaults(func=cmd_hwspec)

    sub = subs.add_parser("hitcurve", help="sampled hit rate versus amplification depth")
    _add_common(sub)
    sub.add_argument("--a", type=float, required=True, help="target amplitude")
    sub.add_argument("--kappa", type=float, default=0.0, help="noise level (default 0)")
    sub.add_argument("--shots", type=int, default=100, help="shots per depth (default 100)")
    sub.add_argument("--max-depth", type=int, default=30, help="sample depths 0..max (default 30)")
    sub.add_argument("--depths", default=None, help="explicit comma-separated depth list")
    sub.set_defaults(func=cmd_hitcurve)

    sub = subs.add_parser("schedule", help="emit a measurement schedule")
    _add_common(sub)
    _add_schedule_flags(sub)
    sub.set_defaults(func=cmd_schedule)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(parser, args)
    except (ConfigError, SpecError, OSError, json.JSONDecodeError) as exc:
        print(f"aemle: {exc}", file=sys.stderr)
        return 2
    except AemleError as exc:
        print(f"aemle: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
