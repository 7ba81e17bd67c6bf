"""``minflows`` command line driver.

Exit status: 0 when every certificate passed, 1 when one failed, 2 on a
configuration or resource error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .certificates import Certificate
from .config import OUT_ENV, RunConfig, load_config, out_path
from .errors import BudgetExceeded, ConfigError, MinflowsError, ResourceLimitError, SizeConditionError, WindowTooSmall
from .render import render
from .suites import run_blueprint, run_construct, run_subshift

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class Report:
    """Single writer for one JSON-lines report (and optional timings)."""

    def __init__(self, path: Path, timings: Path | None = None):
        self.path = path
        self.timings = timings
        self._fh = open(path, "w", encoding="utf-8")
        self._th = open(timings, "w", encoding="utf-8") if timings else None
        self.failed: list[str] = []
        self.count = 0

    def write(self, cert: Certificate, section: str):
        rec = {"section": section, **cert.to_record()}
        self._fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
        if self._th is not None:
            self._th.write(json.dumps({"section": section, "check": cert.check, "stage": cert.stage, "millis": cert.millis}) + "\n")
        self.count += 1
        if not cert.passed:
            self.failed.append(f"{section}/{cert.check}" + (f"@{cert.stage}" if cert.stage is not None else "") + f": {cert.failures()}")

    def close(self):
        self._fh.close()
        if self._th is not None:
            self._th.close()


def _config_record(cfg: RunConfig, command: str) -> Certificate:
    cert = Certificate("config", params={"command": command, **cfg.to_record()}, seed=cfg.seed)
    cert.record("valid", True)
    return cert


def _blueprint(cfg, report, files):
    run = run_blueprint(cfg)
    for c in run.certificates:
        report.write(c, "blueprint")
    if cfg.render and run.blueprint is not None:
        try:
            suffix, text = render(run.blueprint)
        except ConfigError:
            return
        path = out_path(cfg) / f"blueprint{suffix}"
        path.write_text(text, encoding="utf-8")
        files.append(path)


def _subshift(cfg, report, files):
    for c in run_subshift(cfg):
        report.write(c, "subshift")


def _construct(cfg, report, files):
    for c in run_construct(cfg):
        report.write(c, "construct")


def _render(cfg, report, files):
    run = run_blueprint(cfg)
    suffix, text = render(run.blueprint)
    path = out_path(cfg) / f"blueprint{suffix}"
    path.write_text(text, encoding="utf-8")
    files.append(path)
    cert = Certificate("render", params={"file": path.name})
    cert.record("written", True)
    report.write(cert, "render")


COMMANDS = {
    "blueprint": [_blueprint],
    "subshift": [_subshift],
    "construct": [_construct],
    "verify": [_blueprint, _subshift, _construct],
    "render": [_render],
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minflows", description="Build and certify exhaustions, blueprints and product flows.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", help="TOML config file (defaults when omitted)")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--out", help=f"output directory (default from config, then ${OUT_ENV}, then ./reports)")
    common.add_argument("--trials", type=int, help="trials per randomized suite")
    common.add_argument("--part-colors", type=int, dest="part_colors", help="override the color count of the Part suite")
    common.add_argument("--stages", type=int, help="override the stage count")
    common.add_argument("--timings", action="store_true", help="also write timings.jsonl")
    common.add_argument("--quiet", "-q", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(
            args.config,
            seed=args.seed,
            out_dir=args.out,
            trials=args.trials,
            part_colors=args.part_colors,
            stages=args.stages,
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = out_path(cfg)
    report = Report(out / f"{args.command}.jsonl", out / "timings.jsonl" if args.timings else None)
    files: list[Path] = []
    status = EXIT_OK
    try:
        report.write(_config_record(cfg, args.command), "config")
        for step in COMMANDS[args.command]:
            step(cfg, report, files)
    except (ConfigError, ResourceLimitError, BudgetExceeded, SizeConditionError, WindowTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_ERROR
    except MinflowsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        status = EXIT_ERROR
    finally:
        report.close()
    if status == EXIT_OK and report.failed:
        status = EXIT_FAIL
    if not args.quiet:
        for line in report.failed:
            print(f"FAIL {line}")
        print(f"{report.count} certificates, {len(report.failed)} failed; report {report.path}")
        for f in files:
            print(f"wrote {f}")
    return status


if __name__ == "__main__":
    sys.exit(main())
