"""``blevy`` command line.

Exit codes: 0 success (every judged cell passed), 1 statistical failure,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from collections.abc import Callable, Sequence
from dataclasses import replace
from pathlib import Path

from blevy.cli.config_file import ExperimentSpec, dump_config, load_config, parse_checkpoints
from blevy.cli.presets import PRESETS, get_preset
from blevy.model.config import derived_constants
from blevy.oracle.brute_force import brute_force_second_moment
from blevy.oracle.closed_form import MomentVariant, centered_sum_second_moment
from blevy.sim.result import write_run_csv
from blevy.sim.simulator import simulate
from blevy.stats.diagnostics import (
    convergence_trace,
    martingale_diagnostics,
    write_gap_csv,
    write_trace_csv,
)
from blevy.stats.replicates import make_stream, run_replicates
from blevy.stats.summary import McCell, summarize, write_summary_csv, write_summary_json
from blevy.utils.errors import BlevyError, ConfigParseError, InvalidCheckpoints
from blevy.utils.logger import set_level, setup_logger
from blevy.utils.numeric import format_float
from blevy.utils.shared_defaults import (
    MIN_CONVERGENCE_CHECKPOINTS,
    MIN_MARTINGALE_REPLICATES,
)

logger = setup_logger("CLI", "blevy_cli.log")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

SEED_ENV = "BLEVY_SEED"
BRUTE_FORCE_RTOL = 1e-6


# ------------------------
# Argument parsing
# ------------------------
def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--config", type=Path, help="experiment file")
    source.add_argument("--preset", help="built-in experiment name")
    common.add_argument("--seed", type=int, help=f"master seed (default: ${SEED_ENV} or the file)")
    common.add_argument("--replicates", type=int, help="number of runs")
    common.add_argument("--cap", type=int, help="live-population cap per run")
    common.add_argument("--checkpoints", help="comma separated checkpoint times")
    common.add_argument("--variant", choices=("stated", "corrected"), help="second-moment constants")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="level of every blevy logger",
    )
    common.add_argument("--progress", action="store_true", help="show a progress bar")
    common.add_argument("--oracle-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    """Build the ``blevy`` argument parser."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="blevy",
        description="Simulate branching Lévy processes and check them against exact moments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="print the derived constants")
    sub.add_parser("verify", parents=[common], help="Monte Carlo check of the moment identities")
    sub.add_parser("converge", parents=[common], help="trace the empirical mean of surviving runs")
    sub.add_parser("simulate", parents=[common], help="dump one run as run.csv")
    presets_parser = sub.add_parser("presets", help="list built-in experiments")
    presets_parser.add_argument("--dump", metavar="NAME", help="print NAME as an experiment file")
    return parser


def resolve_spec(args: argparse.Namespace) -> ExperimentSpec:
    """Load the experiment named by ``args`` and apply command-line overrides.

    The seed comes from ``--seed``, else ``$BLEVY_SEED``, else the file.
    """
    if args.config is not None:
        spec = load_config(args.config)
    elif args.preset is not None:
        spec = get_preset(args.preset)
    else:
        raise ConfigParseError("--config", "one of --config or --preset is required")

    changes: dict[str, object] = {}
    if args.seed is not None:
        changes["master_seed"] = args.seed
    elif os.environ.get(SEED_ENV):
        raw = os.environ[SEED_ENV]
        try:
            changes["master_seed"] = int(raw)
        except ValueError:
            raise ConfigParseError(SEED_ENV, f"not an integer: {raw!r}") from None
    if args.replicates is not None:
        changes["replicates"] = args.replicates
    if args.cap is not None:
        changes["cap"] = args.cap
    if args.checkpoints is not None:
        changes["checkpoints"] = parse_checkpoints(args.checkpoints)
    if args.variant is not None:
        changes["variant"] = MomentVariant(args.variant)
    if args.out is not None:
        changes["output_dir"] = args.out
    spec = replace(spec, **changes)
    spec.validate()
    return spec


# ------------------------
# Subcommands
# ------------------------
def cmd_constants(args: argparse.Namespace) -> int:
    """Print the derived constants as ``key = value`` lines."""
    spec = resolve_spec(args)
    dc = derived_constants(spec.model)
    for key in ("lambda_hat", "r", "kappa", "c1", "c2", "c1_corr", "c2_corr", "q_ext"):
        print(f"{key} = {format_float(getattr(dc, key))}")
    return EXIT_OK


def _brute_force_cells(spec: ExperimentSpec, variant: MomentVariant) -> list[McCell]:
    dc = derived_constants(spec.model)
    cells = []
    for t in spec.checkpoints:
        numeric = brute_force_second_moment(spec.model, t)
        closed = centered_sum_second_moment(dc, t, variant)
        if not math.isclose(numeric, closed, rel_tol=BRUTE_FORCE_RTOL, abs_tol=1e-12):
            logger.warning(
                f"Integrated E[S^2] at t={t} is {numeric}, closed form ({variant.value}) {closed}"
            )
        cells.append(
            McCell.informational(t, "centered_sum_sq_ode", 1, numeric, 0.0, closed, variant.value)
        )
    return cells


def cmd_verify(args: argparse.Namespace) -> int:
    """Run replicates, summarise, and write ``summary.json`` / ``summary.csv``."""
    spec = resolve_spec(args)
    dc = derived_constants(spec.model)
    variant = spec.variant or MomentVariant.for_constants(dc)
    ode_cells = _brute_force_cells(spec, variant)

    results = run_replicates(
        spec.model,
        spec.checkpoints,
        spec.replicates,
        spec.cap,
        spec.master_seed,
        workers=args.workers,
        progress=args.progress,
    )
    summary = summarize(results, dc, variant, oracle_scale=args.oracle_scale)
    summary = summary.with_cells(ode_cells)

    if len(spec.checkpoints) >= 2 and spec.replicates >= MIN_MARTINGALE_REPLICATES:
        report = martingale_diagnostics(results, dc, variant)
        summary = summary.with_cells(report.to_cells())
    else:
        logger.info("Skipping martingale diagnostics (needs 2 checkpoints and 1000 replicates)")

    json_path = write_summary_json(summary, spec.output_dir / "summary.json")
    csv_path = write_summary_csv(summary, spec.output_dir / "summary.csv")

    failures = summary.failures
    print(
        f"{len(summary.cells)} cells, {len(failures)} failing; "
        f"{summary.n_total} runs ({summary.n_capped} capped, {summary.n_extinct} extinct)"
    )
    for c in failures:
        print(f"FAIL t={format_float(c.t)} {c.observable}: z={format_float(c.z_score)}")
    print(f"wrote {json_path} and {csv_path}")
    return EXIT_OK if summary.all_pass else EXIT_FAIL


def cmd_converge(args: argparse.Namespace) -> int:
    """Trace surviving runs and write ``trace.csv`` / ``gaps.csv``."""
    spec = resolve_spec(args)
    if len(spec.checkpoints) < MIN_CONVERGENCE_CHECKPOINTS:
        raise InvalidCheckpoints(
            f"converge needs at least {MIN_CONVERGENCE_CHECKPOINTS} checkpoints, "
            f"got {len(spec.checkpoints)}"
        )
    dc = derived_constants(spec.model)
    results = run_replicates(
        spec.model,
        spec.checkpoints,
        spec.replicates,
        spec.cap,
        spec.master_seed,
        workers=args.workers,
        surviving=True,
        max_attempts=spec.max_attempts,
        progress=args.progress,
    )
    report = convergence_trace(results, dc)
    trace_path = write_trace_csv(report, spec.output_dir / "trace.csv")
    gap_path = write_gap_csv(report, spec.output_dir / "gaps.csv")

    if report.median_gaps is not None:
        print("median |gap|: " + ", ".join(format_float(g) for g in report.median_gaps))
        print(f"strictly decreasing: {format_float(report.strictly_decreasing)}")
        print(f"runs with last gap < half first gap: {format_float(report.settled_fraction)}")
    print(f"wrote {trace_path} and {gap_path}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    """Simulate one run from stream ``(seed, 0)`` and write ``run.csv``."""
    spec = resolve_spec(args)
    result = simulate(
        spec.model,
        spec.checkpoints,
        spec.cap,
        make_stream(spec.master_seed, 0),
        seed=(spec.master_seed, 0),
    )
    path = write_run_csv(result, spec.output_dir / "run.csv")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_presets(args: argparse.Namespace) -> int:
    """List presets, or print one as an experiment file."""
    if args.dump is not None:
        sys.stdout.write(dump_config(get_preset(args.dump)))
        return EXIT_OK
    for preset in PRESETS.values():
        print(f"{preset.name}: {preset.description}")
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "constants": cmd_constants,
    "verify": cmd_verify,
    "converge": cmd_converge,
    "simulate": cmd_simulate,
    "presets": cmd_presets,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``blevy`` command.

    Parameters
    ----------
    argv : Sequence[str], optional
        Arguments without the program name; ``sys.argv[1:]`` if omitted.

    Returns
    -------
    int
        Process exit code.

    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    if hasattr(args, "log_level"):
        set_level(getattr(logging, args.log_level))

    try:
        code = COMMANDS[args.command](args)
    except BlevyError as exc:
        logger.error(f"{args.command} failed: {exc}")
        print(f"blevy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logger.info(f"{args.command} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
