"""Command-line driver: ``weyl-lab verify|scan|gradients|delta-probe``."""
import argparse
import asyncio
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

from weyl_lab.__about__ import __version__
from weyl_lab.brackets import TruncatedGaussian, delta_limit_probe, weyl_gradients
from weyl_lab.config import RunConfig, load_config
from weyl_lab.cover import CoverPoint, Sheet
from weyl_lab.exceptions import ConfigError, IoError, WeylLabError
from weyl_lab.report import SuiteReport, Table, emit
from weyl_lab.suites import run_suite
from weyl_lab.weyl import WeylOptions, weyl_function

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_SUITE_FAILURE = 1
EXIT_CONFIG_ERROR = 2

SCAN_COLUMNS = (
    "index",
    "lam_re",
    "lam_im",
    "sheet",
    "component",
    "x_re",
    "x_im",
    "pole",
    "method",
    "truncation_radius",
    "error_estimate",
    "flag",
)
GRADIENT_COLUMNS = ("y", "d_psi_re", "d_psi_im", "d_psibar_re", "d_psibar_im", "flag")
PROBE_COLUMNS = ("tau", "side", "probe_re", "probe_im", "target_re", "target_im", "abs_error", "flag")


def run_verify(config: RunConfig) -> List[SuiteReport]:
    """Run the configured suites in order; a failing case never aborts the run."""
    reports = [run_suite(name, config) for name in config.suites]
    failed = [r.name for r in reports if not r.passed]
    if failed:
        logger.warning(f"verify: failing suites[{', '.join(failed)}]")
    return reports


async def arun_verify(config: RunConfig) -> List[SuiteReport]:
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(None, run_verify, config)


def _scan_row(index: int, lam: complex, sheet: Sheet, config: RunConfig) -> Tuple:
    opts = WeylOptions(tol=config.tolerances.weyl)
    nan = math.nan
    try:
        q = CoverPoint(lam, sheet)
        v = weyl_function(config.potential.build(), config.probe.base_point, q, opts)
    except WeylLabError as e:
        logger.warning(f"scan: λ[{lam}], sheet[{sheet.value}], error[{e}]")
        return (index, lam.real, lam.imag, sheet.value, "", nan, nan, False, "", nan, nan, type(e).__name__)
    # X = ∞ is written as the reciprocal coordinate 0 with the pole flag
    x = 0j if v.is_pole else v.value
    return (
        index,
        lam.real,
        lam.imag,
        sheet.value,
        q.component.value,
        x.real,
        x.imag,
        v.is_pole,
        v.method.value,
        v.truncation_radius,
        v.error_estimate,
        "",
    )


def run_scan(config: RunConfig) -> Table:
    """X(base_point, Q) over the λ-grid on both sheets, ordered by grid index then sheet."""
    jobs = [(lam, sheet) for lam in config.lambda_grid.points() for sheet in (Sheet.PLUS, Sheet.MINUS)]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        rows = list(pool.map(lambda job: _scan_row(job[0], job[1][0], job[1][1], config), enumerate(jobs)))
    logger.info(f"scan: points[{len(rows)}], flagged[{sum(1 for r in rows if r[-1])}]")
    return Table("scan", SCAN_COLUMNS, rows)


def run_gradients(config: RunConfig) -> Table:
    """Closed-form gradients of X(base_point, Q) at the configured y values."""
    probe = config.probe
    p = config.potential.build()
    q = CoverPoint(complex(*probe.lam), probe.sheet)
    opts = WeylOptions(tol=config.tolerances.weyl)
    rows = []
    for y in probe.y_values:
        try:
            g = weyl_gradients(p, probe.base_point, q, y, opts)
        except WeylLabError as e:
            logger.warning(f"gradients: y[{y}], error[{e}]")
            rows.append((y, math.nan, math.nan, math.nan, math.nan, type(e).__name__))
            continue
        rows.append((y, g.d_psi.real, g.d_psi.imag, g.d_psibar.real, g.d_psibar.imag, ""))
    return Table("gradients", GRADIENT_COLUMNS, rows)


def run_delta_probe(config: RunConfig) -> Table:
    """Both sides of the mollified delta probe along the τ ladder."""
    probe = config.probe
    p = config.potential.build()
    z = probe.base_point
    f = TruncatedGaussian(z, probe.test_width)
    target = 1j * f(z)
    opts = WeylOptions(tol=config.tolerances.weyl)
    rows = []
    for tau in probe.tau_ladder:
        for side in ("right", "left"):
            try:
                value = delta_limit_probe(p, z, f, tau, side, opts)
            except WeylLabError as e:
                logger.warning(f"delta probe: τ[{tau}], side[{side}], error[{e}]")
                rows.append((tau, side, math.nan, math.nan, target.real, target.imag, math.nan, type(e).__name__))
                continue
            rows.append((tau, side, value.real, value.imag, target.real, target.imag, abs(value - target), ""))
    return Table("delta-probe", PROBE_COLUMNS, rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weyl-lab",
        description="Numerical checks of Weyl-function brackets for the Zakharov–Shabat problem.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, text in (
        ("verify", "run verification suites"),
        ("scan", "tabulate X over the λ-grid"),
        ("gradients", "tabulate the gradients of X"),
        ("delta-probe", "tabulate the delta-bracket probe"),
    ):
        cmd = sub.add_parser(verb, help=text)
        cmd.add_argument("--config", type=str, default=None, help="JSON run configuration")
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--out", type=str, default=None, help="output directory")
        cmd.add_argument("--format", choices=("csv", "json", "both"), default=None)
        cmd.add_argument("--workers", type=int, default=None)
        level = cmd.add_mutually_exclusive_group()
        level.add_argument("-v", "--verbose", action="store_true")
        level.add_argument("-q", "--quiet", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the weyl-lab command. Returns the process exit status."""
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = load_config(
            args.config, seed=args.seed, output_dir=args.out, format=args.format, workers=args.workers
        )
        if args.verb == "verify":
            reports = run_verify(config)
            emit(reports, config.format, config.output_dir)
            return EXIT_PASS if all(r.passed for r in reports) else EXIT_SUITE_FAILURE
        runner = {"scan": run_scan, "gradients": run_gradients, "delta-probe": run_delta_probe}[args.verb]
        emit([runner(config)], config.format, config.output_dir)
    except (ConfigError, IoError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_CONFIG_ERROR
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
