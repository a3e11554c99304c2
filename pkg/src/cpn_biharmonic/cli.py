"""Command line: ``cpn-biharmonic <suite> [options]``.

Exit codes: 0 when every check behaves as intended (controls must fail),
1 when some check does not, 2 for usage errors, 3 for an internal numeric failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, suites
from .errors import GeometryError
from .report import TOLERANCES, ResidualReport, config_hash

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_RHO = {
    "verify-torus": 4.0,
    "verify-case3": 3.0,
    "verify-curves": 6.0,
    "verify-simons": 4.0,
    "verify-algebra": 3.0,
    "controls": 4.0,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    rho: float
    case: str | None = None
    branch: str | None = None
    grid: int = 20
    step: float = 1e-3
    tolerances: dict = field(default_factory=dict)
    format: str = "text"
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.command not in suites.SUITES:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.rho > 0 or not self.step > 0 or self.grid <= 0:
            raise ValueError("rho, step and grid must be positive")
        unknown = set(self.tolerances) - set(TOLERANCES)
        if unknown:
            raise ValueError(f"unknown tolerance names: {', '.join(sorted(unknown))}")
        if any(not v > 0 for v in self.tolerances.values()):
            raise ValueError("tolerances must be positive")
        if self.format not in ("json", "csv", "text"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def hashed(self) -> dict:
        """The configuration fields that determine the report contents."""
        d = asdict(self)
        d.pop("out")
        d.pop("format")
        return d


def run_report(config: RunConfig) -> tuple[ResidualReport, int]:
    meta = {
        "command": config.command,
        "version": __version__,
        "rho": config.rho,
        "branch": config.branch,
        "case": config.case,
        "grid": config.grid,
        "step": config.step,
        "seed": config.seed,
        "tolerance_overrides": dict(sorted(config.tolerances.items())),
        "config_hash": config_hash(config.hashed()),
    }
    report = ResidualReport(meta, config.tolerances)
    rng = np.random.default_rng(config.seed)
    try:
        with np.errstate(all="raise"):
            _dispatch(config, report, rng)
    except (GeometryError, FloatingPointError, np.linalg.LinAlgError) as exc:
        report.check("internal_error", None, "pointwise", "TRIVIAL", note=f"{type(exc).__name__}: {exc}")
        return report, EXIT_NUMERIC
    return report, EXIT_OK if report.ok else EXIT_FAIL


def _dispatch(config: RunConfig, report: ResidualReport, rng) -> None:
    cmd = config.command
    if cmd == "verify-torus":
        if config.rho != 4.0:
            raise _Usage("the classified tori live in CP^2(4); use --rho 4")
        for branch in (config.branch,) if config.branch else ("plus", "minus"):
            suites.suite_torus(report, branch, config.grid, rng)
    elif cmd == "verify-case3":
        suites.suite_case3(report, config.rho, config.step, rng)
    elif cmd == "verify-curves":
        suites.suite_curves(report, config.rho, config.step)
    elif cmd == "verify-simons":
        suites.suite_simons(report, min(config.grid, 10))
    elif cmd == "verify-algebra":
        suites.suite_algebra(report, config.rho)
    elif cmd == "controls":
        suites.suite_controls(report, config.case, config.grid)


class _Usage(Exception):
    pass


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    if name not in TOLERANCES:
        raise argparse.ArgumentTypeError(f"unknown tolerance {name!r}; known: {', '.join(TOLERANCES)}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance value {value!r} is not a number") from None


def _positive(kind):
    def parse(text):
        try:
            x = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not a valid {kind.__name__}") from None
        if not x > 0:
            raise argparse.ArgumentTypeError(f"{text!r} must be positive")
        return x

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cpn-biharmonic", description="Verification reports for biharmonic surfaces in CP^n.")
    p.add_argument("command", choices=suites.SUITES)
    p.add_argument("--rho", type=_positive(float), help="holomorphic sectional curvature (suite default if omitted)")
    p.add_argument("--case", choices=suites.CONTROL_CASES, help="control case (controls suite only)")
    p.add_argument("--branch", choices=("plus", "minus"), help="torus branch (both if omitted)")
    p.add_argument("--grid", type=_positive(int), default=20, help="samples per direction")
    p.add_argument("--step", type=_positive(float), default=1e-3, help="RK4 step")
    p.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for the random gauge phases (u64)")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            rho=args.rho if args.rho is not None else DEFAULT_RHO[args.command],
            case=args.case,
            branch=args.branch,
            grid=args.grid,
            step=args.step,
            tolerances=dict(args.tol),
            format=args.format,
            seed=args.seed,
            out=args.out,
        )
        report, code = run_report(config)
    except (ValueError, _Usage) as exc:
        parser.error(str(exc))
    text = report.render(config.format)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
