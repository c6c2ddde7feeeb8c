"""Command-line interface.

Verbs:
    run <config>       trace-mode scenario -> per-strategy CSVs + JSON summary
    sweep <config>     winner-map sweep -> cell CSV + JSON grid
    validate           invariant + oracle-equivalence suites (exit 2 on failure)
    pin                regenerate the reference tables in data/pinned.json

Exit codes: 0 success, 1 config error, 2 acceptance failure.
"""

from __future__ import annotations

import argparse
import importlib.resources
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .experiments import run_scenario, run_sweep


def _resolve_config(arg: str) -> tuple[str, str]:
    """Return (config text, scenario name) for a path or a bundled name."""
    path = Path(arg)
    if path.exists():
        return path.read_text(encoding="utf-8"), path.stem
    bundled = importlib.resources.files("purisim").joinpath(f"configs/{arg}.cfg")
    if bundled.is_file():
        return bundled.read_text(encoding="utf-8"), arg
    raise ConfigError(f"no config file or bundled config named {arg!r}")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="purisim",
        description="Graph-state purification simulator and strategy optimizer",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="run a trace-mode scenario")
    p_run.add_argument("config", help="config path or bundled name (e.g. fig3)")
    p_run.add_argument("-o", "--outdir", default="out", help="output directory")

    p_sweep = sub.add_parser("sweep", help="run a winner-map sweep")
    p_sweep.add_argument("config", help="config path or bundled name (e.g. fig5)")
    p_sweep.add_argument("-o", "--outdir", default="out", help="output directory")

    sub.add_parser("validate", help="run the invariant and oracle suites")

    p_pin = sub.add_parser("pin", help="regenerate reference tables via the oracle")
    p_pin.add_argument(
        "-o", "--output", default=None, help="override the pinned-table path"
    )
    p_pin.add_argument(
        "--engine-only",
        action="store_true",
        help="skip the slow dense-oracle entries (keeps existing ones)",
    )

    args = parser.parse_args(argv)

    if args.verb in ("run", "sweep"):
        try:
            text, name = _resolve_config(args.config)
            scenario = parse_config(text, name)
            if args.verb == "run":
                summary = run_scenario(scenario, args.outdir, name)
                for sid, entry in summary["strategies"].items():
                    print(f"{sid}: {entry['status']}")
            else:
                cells = run_sweep(scenario, args.outdir, name)
                for c in cells:
                    print(
                        f"pw={c.pw:g} pz={c.pz:g} f0={c.f0:.6f} winner={c.winner}"
                    )
            print(f"outputs written to {Path(args.outdir).resolve()}")
        except (ConfigError, OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        return 0

    if args.verb == "validate":
        from .validation import run_all

        return 0 if run_all(verbose=True) else 2

    if args.verb == "pin":
        from .pinning import compute_pins, load_pinned, write_pinned

        pins = compute_pins(include_oracle=not args.engine_only)
        if args.engine_only:
            try:
                old = load_pinned()
            except FileNotFoundError:
                old = {}
            merged = {**old, **pins}
            pins = merged
        path = write_pinned(pins, args.output)
        print(f"wrote {len(pins)} pinned entries to {path}")
        return 0

    return 1


if __name__ == "__main__":
    sys.exit(main())
