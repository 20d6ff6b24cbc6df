"""Command-line surface.

Subcommands: report, bounds, trajectory, intersect, contour, oracle-check,
extremal-q.  Exit codes: 0 success, 1 validation error, 2 numerical
singularity, 3 I/O error.  The QDECISION_OUTPUT_DIR environment variable
supplies the default directory for written files.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .amplitudes import IntermediateEvent, build_state, conditional_from_amplitudes
from .core import (
    PhasePair,
    classical_bounds,
    conditional_quantum,
    extremal_weights,
    quantum_bounds,
)
from .datasets import (
    ExperimentFile,
    atomic_write,
    bundled_fixture_path,
    format_report,
    load_experiments,
    render_value,
    report,
    report_csv,
)
from .errors import SingularityError, ValidationError
from .geometry import concurrency, contour, intersect, sample_trajectory, trajectory
from .render import emit_contour, render_figure

OUTPUT_DIR_ENV = "QDECISION_OUTPUT_DIR"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SINGULARITY = 2
EXIT_IO = 3


def _output_path(args, default_name: str) -> Path:
    if args.output:
        return Path(args.output)
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    return base / default_name


def _load(args) -> ExperimentFile:
    path = bundled_fixture_path() if args.file == "bundled" else args.file
    return load_experiments(path, default_q0=args.q0)


def _cmd_report(args) -> int:
    file = _load(args)
    if not file.records:
        print("warning: no records in input", file=sys.stderr)
        return EXIT_OK
    rows = report(file)
    print(format_report(rows, decimals=args.decimals), end="")
    if args.output:
        out = _output_path(args, "report.csv")
        atomic_write(out, report_csv(rows))
        print(f"wrote {out}", file=sys.stderr)
        if args.figures:
            for rec in file.records:
                fig_path = out.with_name(f"{out.stem}_{rec.label}.png")
                render_figure(contour(rec, args.resolution), rec, fig_path)
                print(f"wrote {fig_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    file = _load(args)
    if not file.records:
        print("warning: no records in input", file=sys.stderr)
        return EXIT_OK
    d = args.decimals
    for rec in file.records:
        band = classical_bounds(rec, 0)
        qb = quantum_bounds(rec, 0).interval
        print(
            f"{rec.label}: classical [{render_value(band.lo, d)}, {render_value(band.hi, d)}]"
            f"  quantum [{render_value(qb.lo, d)}, {render_value(qb.hi, d)}]"
        )
    return EXIT_OK


def _cmd_trajectory(args) -> int:
    file = _load(args)
    rec = file.get(args.label)
    line = trajectory(rec, args.target)
    print(
        f"{rec.label}: target {render_value(line.target, args.decimals)} -> "
        f"line {line.alpha:.12g}*c0 + {line.beta:.12g}*c1 + {line.gamma:.12g} = 0"
    )
    pairs = sample_trajectory(line, args.samples)
    if not pairs:
        print("trajectory is empty: target lies outside the quantum bounds")
        return EXIT_OK
    print(f"{len(pairs)} admissible phase pairs (principal branch)")
    if args.output:
        out = _output_path(args, f"trajectory_{rec.label}.csv")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("theta0", "theta1", "cos_theta0", "cos_theta1"))
        for p in pairs:
            writer.writerow(
                [format(v, ".12g") for v in (p.theta0, p.theta1, p.c0, p.c1)]
            )
        atomic_write(out, buf.getvalue())
        print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def _cmd_intersect(args) -> int:
    file = _load(args)
    labels = [s.strip() for s in args.labels.split(",")]
    if len(labels) != 2:
        raise ValidationError(f"--labels expects exactly two labels, got {args.labels!r}")
    if args.check_all:
        all_labels = list(file.labels())
        fit_pair = (all_labels.index(labels[0]), all_labels.index(labels[1]))
        rep = concurrency(file.records, fit_pair)
        c0, c1 = rep.point
        print(f"intersection (cos theta0, cos theta1) = ({c0:.6f}, {c1:.6f})"
              f"  in_range={'yes' if rep.in_range else 'no'}")
        for label, res in zip(rep.labels, rep.residuals):
            tag = " (fit)" if label in labels else ""
            print(f"  residual {label}: {res:+.6f}{tag}")
    else:
        a = trajectory(file.get(labels[0]))
        b = trajectory(file.get(labels[1]))
        c0, c1, in_range = intersect(a, b)
        print(f"intersection (cos theta0, cos theta1) = ({c0:.6f}, {c1:.6f})"
              f"  in_range={'yes' if in_range else 'no'}")
    return EXIT_OK


def _cmd_contour(args) -> int:
    file = _load(args)
    rec = file.get(args.label)
    out = _output_path(args, f"contour_{rec.label}.{args.format}")
    emit_contour(rec, args.resolution, args.format, out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    file = _load(args)
    rng = np.random.default_rng(args.seed)
    thetas = np.linspace(0.0, 2.0 * np.pi, args.grid)
    worst = 0.0
    evaluations = 0
    for rec in file.records:
        for t0 in thetas:
            for t1 in thetas:
                phases = PhasePair(float(t0), float(t1))
                gauge = tuple(rng.uniform(0.0, 2.0 * np.pi, 4))
                state = build_state(rec, phases, gauge=gauge)
                amp = conditional_from_amplitudes(state, state.event())
                closed = conditional_quantum(rec, phases, 0)
                worst = max(worst, abs(amp[0] - closed), abs(amp[1] - (1.0 - closed)))
                evaluations += 1
    print(
        f"oracle check: {evaluations} evaluations, max |closed-form - amplitude| "
        f"= {worst:.3e}"
    )
    if worst >= 1e-12:
        print("oracle check FAILED (tolerance 1e-12)", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_extremal_q(args) -> int:
    w = extremal_weights(args.p0, args.p1)
    d = args.decimals
    print(f"X_j    = {w.x_j:.6f}")
    print(f"q_max  = {w.q_max:.6f}  (upper quantum bound reaches 1)")
    print(f"q_min  = {w.q_min:.6f}  (lower quantum bound reaches 0)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q0", type=float, default=0.5,
                        help="default condition weight when a record omits q0 (default 0.5)")
    common.add_argument("--decimals", type=int, default=2,
                        help="display rounding for probabilities (default 2)")
    common.add_argument("--output", default=None, help="output file path")

    parser = argparse.ArgumentParser(
        prog="qdecision",
        description="Two-condition/two-choice interference probability toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", parents=[common],
                       help="Table-style report: classical prediction, bounds, flags")
    p.add_argument("file", help="experiment CSV/JSON file, or 'bundled'")
    p.add_argument("--figures", action="store_true",
                   help="also render one matplotlib figure per record (needs --output)")
    p.add_argument("--resolution", type=int, default=201)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("bounds", parents=[common],
                       help="Classical and quantum intervals per record")
    p.add_argument("file")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("trajectory", parents=[common],
                       help="Level-set line and phase samples for one record")
    p.add_argument("file")
    p.add_argument("--label", required=True)
    p.add_argument("--target", type=float, default=None,
                   help="target probability (default: the record's observed_pk)")
    p.add_argument("--samples", type=int, default=256)
    p.set_defaults(func=_cmd_trajectory)

    p = sub.add_parser("intersect", parents=[common],
                       help="Intersection of two level-set lines in cosine space")
    p.add_argument("file")
    p.add_argument("--labels", required=True, help="two comma-separated labels")
    p.add_argument("--check-all", action="store_true",
                   help="report every record's residual at the fitted point")
    p.set_defaults(func=_cmd_intersect)

    p = sub.add_parser("contour", parents=[common],
                       help="Phase-plane grid export (csv, svg, or png)")
    p.add_argument("file")
    p.add_argument("--label", required=True)
    p.add_argument("--resolution", type=int, default=201)
    p.add_argument("--format", default="csv", choices=("csv", "svg", "png"))
    p.set_defaults(func=_cmd_contour)

    p = sub.add_parser("oracle-check", parents=[common],
                       help="Closed form vs amplitude-level equivalence sweep")
    p.add_argument("file")
    p.add_argument("--grid", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("extremal-q", parents=[common],
                       help="Condition weights that stretch the quantum bounds to [0, 1]")
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.set_defaults(func=_cmd_extremal_q)

    return parser


def cli_dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; the contract says 1
        return EXIT_OK if e.code == 0 else EXIT_VALIDATION
    try:
        return args.func(args)
    except SingularityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SINGULARITY
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    raise SystemExit(cli_dispatch())


if __name__ == "__main__":
    main()
