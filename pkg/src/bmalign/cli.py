"""Command-line surface: length atlas, identity sweeps, exponent audits, simulations.

Every subcommand emits CSV (default) or JSON to --out (default stdout), with
rationals rendered as "num/den" so nothing exact is lost in transit.  Exit
codes: 0 success, 1 verification failure, 2 usage error.  A JSON file passed
via --config supplies defaults for any flag; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager
from typing import Sequence

from .atlas import (
    AtlasRow,
    VERIFY_MAX_LENGTH,
    VERIFY_MIN_LENGTH,
    check_row,
    check_witness_construction,
    construct_witnesses,
    identity_sweep,
    verify_length,
)
from .autocorr import (
    DEFAULT_MAX_ORDER,
    NotFound,
    class_min_order,
    orbit_representatives,
    pair_table,
)
from .decoder import DecodeProblem, auto_n_grid, run_series
from .exponent import expansion_convergence
from .signals import BooleanSignal, DeletionPattern, ObservationModel, ShiftDistribution

ATLAS_FIELDS = ["L", "orbit_count", "count_note", "t_class", "B3_num", "B3_den", "branch", "witness"]
CLAIMS_FIELDS = ["L", "V", "x1", "x2", "t", "s", "lhs", "rhs", "ok"]
BRANCHES = ["prime-case", "even-case", "open", "small-L"]


@contextmanager
def _open_out(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as stream:
            yield stream


def _int_list(value) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(part) for part in str(value).split(",") if part != ""]


def _float_list(value) -> list[float]:
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(part) for part in str(value).split(",") if part != ""]


def _parse_pair(text: str, length: int) -> tuple[BooleanSignal, BooleanSignal]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("--pair expects two comma-separated bit-strings or 'auto'")
    x1, x2 = (BooleanSignal.from_string(p.strip()) for p in parts)
    if x1.length != length or x2.length != length:
        raise ValueError("--pair bit-strings must match --L")
    return x1, x2


def _auto_pair(length: int) -> tuple[BooleanSignal, BooleanSignal]:
    if length >= 6:
        return construct_witnesses(length, "prime-style")
    catalog = orbit_representatives(length)
    _, witness = class_min_order(
        catalog, DeletionPattern.full(length), ShiftDistribution.uniform(length)
    )
    return witness


def _decode_class(args, length: int) -> tuple[BooleanSignal, ...]:
    if getattr(args, "pair", None) and args.pair != "auto":
        return _parse_pair(args.pair, length)
    if args.signal_class == "orbits":
        return orbit_representatives(length).representatives
    if length < 6:
        raise ValueError("witness pair class needs --L at least 6; use --signal-class orbits")
    return construct_witnesses(length, "prime-style")


def _write_rows(stream, fmt: str, fields: list[str], records: list[dict]) -> None:
    if fmt == "json":
        json.dump(records, stream, indent=2)
        stream.write("\n")
        return
    writer = csv.DictWriter(stream, fieldnames=fields)
    writer.writeheader()
    for record in records:
        writer.writerow(record)


def cmd_atlas(args) -> int:
    if args.L_min > args.L_max:
        raise ValueError("--L-min must not exceed --L-max")
    rows = [verify_length(length) for length in range(args.L_min, args.L_max + 1)]
    violations: list[str] = []
    for row in rows:
        violations.extend(check_row(row))
    with _open_out(args.out) as stream:
        _write_rows(stream, args.format, ATLAS_FIELDS, [row.to_record() for row in rows])
    for line in violations:
        print(f"violation: {line}", file=sys.stderr)
    return 1 if violations else 0


def cmd_verify(args) -> int:
    row = verify_length(args.L)
    violations = check_row(row) + check_witness_construction(args.L)
    if args.expect and row.branch != args.expect:
        violations.append(f"expected branch {args.expect}, computed {row.branch}")
    record = row.to_record()
    record["violations"] = "; ".join(violations)
    with _open_out(args.out) as stream:
        _write_rows(stream, args.format, ATLAS_FIELDS + ["violations"], [record])
    if args.pair_table:
        catalog = orbit_representatives(args.L)
        rows = pair_table(
            catalog,
            DeletionPattern.full(args.L),
            ShiftDistribution.uniform(args.L),
            DEFAULT_MAX_ORDER,
        )
        with open(args.pair_table, "w", newline="") as stream:
            writer = csv.writer(stream)
            writer.writerow(["x1", "x2", "t", "B_t_num", "B_t_den"])
            for x1, x2, order, gap in rows:
                writer.writerow([
                    str(x1),
                    str(x2),
                    str(order),
                    "" if gap is None else gap.numerator,
                    "" if gap is None else gap.denominator,
                ])
    for line in violations:
        print(f"violation: {line}", file=sys.stderr)
    return 1 if violations else 0


def cmd_claims(args) -> int:
    lengths = list(range(args.L_min, args.L_max + 1))
    deletion_cases = []
    for spec_text in args.deletions or []:
        head, _, tail = str(spec_text).partition(":")
        deletion_cases.append((int(head), tuple(int(v) for v in tail.split(","))))
    rows, violations = identity_sweep(lengths, deletion_cases)
    with _open_out(args.out) as stream:
        _write_rows(stream, args.format, CLAIMS_FIELDS, [row.to_record() for row in rows])
    print(
        f"checked {len(rows)} pairs, {len(violations)} violations",
        file=sys.stderr,
    )
    return 1 if violations else 0


def cmd_exponent(args) -> int:
    if args.pair == "auto":
        x1, x2 = _auto_pair(args.L)
    else:
        x1, x2 = _parse_pair(args.pair, args.L)
    eps = _float_list(args.eps)
    report = expansion_convergence(
        x1,
        x2,
        DeletionPattern.full(args.L),
        ShiftDistribution.uniform(args.L),
        eps,
    )
    with _open_out(args.out) as stream:
        if args.format == "json":
            json.dump(report.to_dict(), stream, indent=2)
            stream.write("\n")
        else:
            writer = csv.writer(stream)
            writer.writerow(["eps", "snr", "C", "ratio", "gap"])
            target = float(report.leading_coeff)
            for (p, value), ratio in zip(report.chernoff_samples, report.ratios):
                eps_value = 0.5 - p
                writer.writerow([
                    f"{eps_value:.10g}",
                    f"{eps_value * eps_value:.10g}",
                    f"{value:.12g}",
                    f"{ratio:.12g}",
                    f"{(ratio - target) / target:.6g}",
                ])
    return 0


def _build_problem(args) -> DecodeProblem:
    members = _decode_class(args, args.L)
    model = ObservationModel.full_uniform(args.L, args.p)
    return DecodeProblem.with_uniform_prior(members, model)


def cmd_simulate(args) -> int:
    problem = _build_problem(args)
    grid = _int_list(args.N_grid)
    series = run_series(problem, grid, args.trials, args.seed)
    with _open_out(args.out) as stream:
        if args.format == "json":
            json.dump(
                {"config": series.config, "points": [pt._asdict() for pt in series.points]},
                stream,
                indent=2,
            )
            stream.write("\n")
        else:
            series.write_csv(stream)
    return 0


def cmd_pe_curve(args) -> int:
    problem = _build_problem(args)
    grid = auto_n_grid(problem, points=args.points, seed=args.seed)
    series = run_series(problem, grid, args.trials, args.seed)
    with _open_out(args.out) as stream:
        if args.format == "json":
            records = []
            for pt in series.points:
                record = pt._asdict()
                record["ln_pe"] = math.log(pt.pe) if pt.pe > 0 else None
                records.append(record)
            json.dump({"config": series.config, "points": records}, stream, indent=2)
            stream.write("\n")
        else:
            if series.config is not None:
                stream.write("# config: " + json.dumps(series.config, sort_keys=True) + "\n")
            writer = csv.writer(stream)
            writer.writerow(["N", "trials", "errors", "pe", "ln_pe", "lo95", "hi95"])
            for pt in series.points:
                ln_pe = f"{math.log(pt.pe):.10g}" if pt.pe > 0 else ""
                writer.writerow([
                    pt.num_observations,
                    pt.trials,
                    pt.errors,
                    f"{pt.pe:.10g}",
                    ln_pe,
                    f"{pt.lo95:.10g}",
                    f"{pt.hi95:.10g}",
                ])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bmalign",
        description="Boolean multireference alignment lab: exact orders, exponents, simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p_atlas = sub.add_parser("atlas", help="per-length sweep over a range")
    p_atlas.add_argument("--L-min", type=int, default=VERIFY_MIN_LENGTH)
    p_atlas.add_argument("--L-max", type=int, default=VERIFY_MAX_LENGTH)
    add_common(p_atlas)
    p_atlas.set_defaults(handler=cmd_atlas)

    p_verify = sub.add_parser("verify", help="exhaustive check of one length")
    p_verify.add_argument("--L", type=int, required=True)
    p_verify.add_argument("--expect", choices=BRANCHES, default=None)
    p_verify.add_argument("--pair-table", default=None, help="also write per-pair CSV here")
    add_common(p_verify)
    p_verify.set_defaults(handler=cmd_verify)

    p_claims = sub.add_parser("claims", help="dual-route identity sweep over pairs")
    p_claims.add_argument("--L-min", type=int, default=3)
    p_claims.add_argument("--L-max", type=int, required=True)
    p_claims.add_argument(
        "--deletions",
        action="append",
        default=None,
        metavar="L:V0,V1,...",
        help="extra known-deletions case, e.g. 5:0,1,2 (repeatable)",
    )
    add_common(p_claims)
    p_claims.set_defaults(handler=cmd_claims)

    p_exp = sub.add_parser("exponent", help="leading-term audit for one pair")
    p_exp.add_argument("--L", type=int, required=True)
    p_exp.add_argument("--pair", default="auto", help="'auto' or 'bits,bits'")
    p_exp.add_argument("--eps", default="0.05,0.02,0.01,0.005")
    add_common(p_exp)
    p_exp.set_defaults(handler=cmd_exponent)

    def add_sim_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--L", type=int, required=True)
        p.add_argument("--p", type=float, required=True)
        p.add_argument("--trials", type=int, default=10000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--pair", default=None, help="explicit class 'bits,bits'")
        p.add_argument(
            "--signal-class",
            choices=["witnesses", "orbits"],
            default="witnesses",
            help="two-signal witness pair (default) or all orbit representatives",
        )

    p_sim = sub.add_parser("simulate", help="Monte Carlo error rates on a fixed grid")
    add_sim_common(p_sim)
    p_sim.add_argument("--N-grid", required=True, help="comma-separated observation counts")
    add_common(p_sim)
    p_sim.set_defaults(handler=cmd_simulate)

    p_curve = sub.add_parser("pe-curve", help="log error rate against N on an auto grid")
    add_sim_common(p_curve)
    p_curve.add_argument("--points", type=int, default=6)
    add_common(p_curve)
    p_curve.set_defaults(handler=cmd_pe_curve)

    return parser


def _extract_config(argv: list[str]) -> tuple[list[str], dict]:
    if "--config" not in argv:
        return argv, {}
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        print("error: --config requires a path", file=sys.stderr)
        raise SystemExit(2)
    with open(argv[idx + 1]) as stream:
        config = json.load(stream)
    if not isinstance(config, dict):
        print("error: --config must hold a JSON object", file=sys.stderr)
        raise SystemExit(2)
    return argv[:idx] + argv[idx + 2 :], config


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv, config = _extract_config(argv)
        parser = build_parser()
        if config:
            for action in parser._subparsers._group_actions[0].choices.values():
                action.set_defaults(**config)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
