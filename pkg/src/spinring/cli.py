"""Command-line front end.

Subcommands::

    spinring run      --config FILE [--set key=value]... [--out DIR]
    spinring figure   NAME --out DIR [--set key=value]...
    spinring sweep    --config FILE --axis NAME --values V1,V2,... [--out DIR]
    spinring validate --config FILE [--set key=value]...

Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
failures.  When the SPINRING_OUTPUT_ROOT environment variable is set,
relative output paths are resolved under it.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import (
    ExperimentConfig,
    OUTPUT_ROOT_ENV,
    apply_overrides,
    parse_override,
    run,
    sweep,
    validate,
)
from .errors import DomainError, NumericError
from .presets import PRESET_NAMES, run_preset

__all__ = ["main"]


def _load_config(path, sets) -> ExperimentConfig:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"config {path}: {exc}") from exc
    overrides = [parse_override(s) for s in sets]
    return ExperimentConfig.from_dict(apply_overrides(obj, overrides))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinring",
        description="Spin-ring quantum memory simulator with step-phase control",
        epilog=f"Relative output paths resolve under ${OUTPUT_ROOT_ENV} when set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p_run.add_argument("--out", default=None, help="override outputs.directory")

    p_fig = sub.add_parser("figure", help="run a named figure preset")
    p_fig.add_argument("name", choices=PRESET_NAMES)
    p_fig.add_argument("--out", required=True)
    p_fig.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    p_sweep = sub.add_parser("sweep", help="run a config across one parameter axis")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--axis", required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated numbers")
    p_sweep.add_argument("--out", default=None)

    p_val = sub.add_parser("validate", help="print diagnostics for a config")
    p_val.add_argument("--config", required=True)
    p_val.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = _load_config(args.config, args.set)
            bundle = run(config, out_dir=args.out)
            print(f"wrote {len(bundle.files)} files to {bundle.directory}")
        elif args.command == "figure":
            overrides = [parse_override(s) for s in args.set]
            bundles = run_preset(args.name, args.out, overrides)
            print(f"{args.name}: wrote {len(bundles)} bundle(s) under {args.out}")
        elif args.command == "sweep":
            with open(args.config) as fh:
                base = json.load(fh)
            try:
                values = [json.loads(v) for v in args.values.split(",") if v.strip()]
            except json.JSONDecodeError as exc:
                raise DomainError(f"bad --values list: {exc}") from exc
            index = sweep(base, args.axis, values, out_root=args.out)
            print(f"sweep index at {index}")
        elif args.command == "validate":
            config = _load_config(args.config, args.set)
            for line in validate(config):
                print(line)
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
