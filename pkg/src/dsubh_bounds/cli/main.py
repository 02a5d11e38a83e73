from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from dsubh_bounds.config.paths import default_corpus_path
from dsubh_bounds.config.settings import apply_overrides, require_positive, settings
from dsubh_bounds.core.gauge import require_admissible
from dsubh_bounds.hausdorff.content import h_content
from dsubh_bounds.measures.modulus import modulus_profile
from dsubh_bounds.specs.loaders import load_gauge, load_measure, load_set
from dsubh_bounds.utils.errors import DomainError, GeometryError, SpecError
from dsubh_bounds.utils.log import configure_logging
from dsubh_bounds.verify.corpus import run_corpus
from dsubh_bounds.verify.report import content_payload, modulus_csv, write_reports
from dsubh_bounds.verify.selftest import run_selftest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: what to run, on which files, with which setting overrides."""

    subcommand: str
    inputs: tuple[Path, ...] = ()
    out_dir: Path | None = None
    tolerance: float | None = None
    resolution: int | None = None
    seed: int | None = None
    jobs: int | None = None
    ts: tuple[float, ...] = ()
    t: float = math.inf

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        if args.cmd == "modulus":
            inputs = (args.measure,)
        elif args.cmd == "content":
            inputs = (args.set, args.gauge)
        elif args.cmd == "verify":
            inputs = (args.corpus or str(default_corpus_path()),)
        else:
            inputs = ()

        paths = tuple(Path(p) for p in inputs)
        for p in paths:
            if not p.exists():
                raise SpecError("file not found", location=str(p))

        tolerance = args.tol
        if tolerance is not None:
            require_positive("pass_tolerance", tolerance)
        for name in ("resolution", "jobs"):
            value = getattr(args, name)
            if value is not None and value < 1:
                raise SpecError(f"--{name} must be >= 1, got {value}")

        return cls(
            subcommand=args.cmd,
            inputs=paths,
            out_dir=Path(args.out) if args.out else None,
            tolerance=tolerance,
            resolution=args.resolution,
            seed=args.seed,
            jobs=args.jobs,
            ts=tuple(getattr(args, "t_list", None) or ()),
            t=getattr(args, "t", math.inf),
        )

    def overrides(self) -> dict[str, object]:
        values = {
            "pass_tolerance": self.tolerance,
            "dyadic_resolution": self.resolution,
            "seed": self.seed,
            "jobs": self.jobs,
        }
        return {k: v for k, v in values.items() if v is not None}

    @property
    def output(self) -> Path:
        return self.out_dir if self.out_dir is not None else Path(settings.output_dir)


def cmd_modulus(cfg: RunConfig) -> int:
    mu = load_measure(cfg.inputs[0])
    text = modulus_csv(modulus_profile(mu, sorted(set(cfg.ts))))
    sys.stdout.write(text)
    if cfg.out_dir is not None:
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        (cfg.out_dir / "modulus.csv").write_text(text, encoding="utf-8")
    return EXIT_OK


def cmd_content(cfg: RunConfig) -> int:
    S = load_set(cfg.inputs[0])
    h = load_gauge(cfg.inputs[1])
    require_admissible(h, S.dim)
    estimate = h_content(S, h, cfg.t)

    out = cfg.output
    out.mkdir(parents=True, exist_ok=True)
    payload = content_payload(estimate, seed=settings.seed)
    path = out / "content.json"
    path.write_text(
        json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False) + "\n",
        encoding="utf-8",
    )
    print(f"content: lower={estimate.lower:.12g} upper={estimate.upper:.12g} -> {path}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    result = run_corpus(cfg.inputs[0])
    write_reports(result, cfg.output)
    s = result.summary
    print(
        f"{s.total} records: {s.ok} ok, {s.violations} violations, {s.rejected} rejected "
        f"(seed {result.seed}) -> {cfg.output}"
    )
    return EXIT_VIOLATION if s.violations else EXIT_OK


def cmd_selftest(cfg: RunConfig) -> int:
    report = run_selftest()
    for check in report.checks:
        mark = "PASS" if check.ok else "FAIL"
        print(f"{mark} {check.name}: {check.detail}")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, default=None, help="Directory for output files.")
    common.add_argument(
        "--resolution", type=int, default=None, help="Dyadic resolution k (2^k cells per side)."
    )
    common.add_argument("--tol", type=float, default=None, help="Relative pass tolerance.")
    common.add_argument("--seed", type=int, default=None, help="Seed for stochastic fallbacks.")
    common.add_argument("--jobs", type=int, default=None, help="Worker processes for verify.")
    common.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING...")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="dsubh-bounds",
        description="Moduli of continuity, Hausdorff contents and integral-bound verification.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_mod = sub.add_parser(
        "modulus", parents=[common], help="Certified modulus of continuity of a measure."
    )
    p_mod.add_argument("measure", type=str, help="Measure spec JSON file.")
    p_mod.add_argument(
        "--t", dest="t_list", type=float, nargs="*", default=[], help="Radii to evaluate."
    )

    p_con = sub.add_parser(
        "content", parents=[common], help="Hausdorff h-content bounds of a compact set."
    )
    p_con.add_argument("set", type=str, help="Set spec JSON file.")
    p_con.add_argument("gauge", type=str, help="Gauge spec JSON file.")
    p_con.add_argument("--t", type=float, default=math.inf, help="Covering radius (default inf).")

    p_ver = sub.add_parser("verify", parents=[common], help="Run a verification corpus.")
    p_ver.add_argument(
        "corpus", type=str, nargs="?", default=None, help="Corpus JSON (default: shipped one)."
    )

    sub.add_parser("selftest", parents=[common], help="Plumbing checks and a corrupted case.")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    What it does:
    - Entry point of the `dsubh-bounds` command.

    Behavior:
    - Exit 0 when everything passes, 1 on an inequality violation (or a failed
      self-test), 2 on usage, parse or input errors.
    - Logs go to stderr; tables and summaries to stdout.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    configure_logging(args.log_level or settings.log_level)
    snapshot = settings.model_dump()
    try:
        cfg = RunConfig.from_args(args)
        apply_overrides(cfg.overrides())

        if args.cmd == "modulus":
            return cmd_modulus(cfg)
        if args.cmd == "content":
            return cmd_content(cfg)
        if args.cmd == "verify":
            return cmd_verify(cfg)
        return cmd_selftest(cfg)
    except (SpecError, DomainError, GeometryError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        apply_overrides(snapshot)
