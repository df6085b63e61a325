"""
Command-line entry point: run scenarios from a JSON config into CSV + JSON
summaries, list the available scenarios, or run the acceptance sweep.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 physicality violation detected mid-run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__, acceptance
from .errors import (
    InvalidInputError,
    PhysicalityError,
    UnphysicalParameterError,
    UnsupportedRegimeError,
)
from .scenarios import (
    CONVENTIONS,
    SCENARIO_DESCRIPTIONS,
    SCENARIO_NAMES,
    ScenarioConfig,
    run_scenario,
)

_LIST_FIELDS = ("omega_over_gamma_list", "coherent_amplitudes")
_INT_FIELDS = ("z_steps",)
_FLOAT_FIELDS = ("epsilon", "kappa_L", "beta_norm")


@dataclass
class RunManifest:
    """What a `run` produced: files, conventions, outcome, and timing."""

    config_path: str
    output_dir: str
    files: list[str]
    conventions: dict
    tool_version: str
    duration_s: float
    passed: bool
    oracle_delta: float = 0.0
    scenario: str = ""
    extra: dict = field(default_factory=dict)


def _parse_override(item: str) -> tuple[str, object]:
    if "=" not in item:
        raise InvalidInputError(f"override must look like key=value, got {item!r}")
    key, raw = item.split("=", 1)
    key = key.strip()
    raw = raw.strip()
    try:
        if key in _LIST_FIELDS:
            return key, [float(v) for v in raw.split(",") if v != ""]
        if key in _INT_FIELDS:
            return key, int(raw)
        if key in _FLOAT_FIELDS:
            return key, float(raw)
    except ValueError:
        raise InvalidInputError(f"bad value for override {key!r}: {raw!r}") from None
    return key, raw


def _write_json_atomic(path: str, payload: dict) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    os.replace(tmp, path)


def run(config_path: str, output_dir: str, overrides: list[str] | None = None) -> RunManifest:
    """
    Run the scenario named in the JSON config, writing `<scenario>.csv` and
    `summary.json` into `output_dir`. Raises the package's typed errors on bad
    input; the `main` wrapper maps them to exit codes.
    """
    started = time.perf_counter()
    try:
        with open(config_path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read config {config_path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"config {config_path!r} is not valid JSON: {exc}") from None

    for item in overrides or []:
        key, value = _parse_override(item)
        raw[key] = value

    cfg = ScenarioConfig.from_dict(raw)
    report = run_scenario(cfg)

    try:
        os.makedirs(output_dir, exist_ok=True)
        csv_name = f"{cfg.scenario}.csv"
        report.to_csv(os.path.join(output_dir, csv_name))
        checks = report.metadata["checks"]
        summary = {
            "scenario": cfg.scenario,
            "tool_version": __version__,
            "config": report.metadata["config"],
            "conventions": report.metadata["conventions"],
            "terminal": report.metadata["terminal"],
            "checks": checks,
            "oracle_delta": max((c["delta"] for c in checks), default=0.0),
            "passed": report.metadata["passed"],
            "csv": csv_name,
            "rows": int(report.data.shape[0]),
            "columns": list(report.columns),
        }
        _write_json_atomic(os.path.join(output_dir, "summary.json"), summary)
    except OSError as exc:
        raise InvalidInputError(f"cannot write to {output_dir!r}: {exc}") from None

    return RunManifest(
        config_path=config_path,
        output_dir=output_dir,
        files=[csv_name, "summary.json"],
        conventions=dict(CONVENTIONS),
        tool_version=__version__,
        duration_s=time.perf_counter() - started,
        passed=summary["passed"],
        oracle_delta=summary["oracle_delta"],
        scenario=cfg.scenario,
        extra={"rows": summary["rows"]},
    )


def list_scenarios(as_json: bool = False) -> str:
    if as_json:
        return json.dumps(list(SCENARIO_NAMES))
    return "\n".join(f"{name:<14} {SCENARIO_DESCRIPTIONS[name]}" for name in SCENARIO_NAMES)


def verify(verbose: bool = False) -> int:
    """Run the acceptance sweep; print one line per criterion; 0 iff all pass."""
    results = acceptance.run_all()
    print(acceptance.render_table(results, verbose=verbose))
    return 0 if all(r.passed for r in results) else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="odsim",
        description="Gaussian-state simulator of two-mode light in a Raman-coupled Lambda medium.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the JSON scenario config")
    p_run.add_argument("--out", required=True, help="output directory for CSV and summary.json")
    p_run.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config field (repeatable); lists are comma-separated",
    )

    p_list = sub.add_parser("list", help="list the available scenarios")
    p_list.add_argument("--json", action="store_true", help="machine-readable name list")

    p_verify = sub.add_parser("verify", help="run the acceptance sweep")
    p_verify.add_argument("--verbose", action="store_true", help="per-check deltas")

    args = parser.parse_args(argv)

    if args.command == "list":
        print(list_scenarios(as_json=args.json))
        return 0

    if args.command == "verify":
        return verify(verbose=args.verbose)

    try:
        manifest = run(args.config, args.out, args.override)
    except PhysicalityError as exc:
        print(f"physicality violation: {exc}", file=sys.stderr)
        return 3
    except (InvalidInputError, UnphysicalParameterError, UnsupportedRegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for name in manifest.files:
        print(f"wrote {os.path.join(manifest.output_dir, name)}")
    status = "PASS" if manifest.passed else "FAIL"
    print(
        f"scenario {manifest.scenario}: {status} "
        f"(oracle_delta={manifest.oracle_delta:.3e}, rows={manifest.extra['rows']}, "
        f"{manifest.duration_s:.2f} s)"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
