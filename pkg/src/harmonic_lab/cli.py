"""
Command-line runner.

    harmonic-lab list [FILTER]
    harmonic-lab validate --experiment NAME [--config FILE] [--set key=value ...]
    harmonic-lab run --experiment NAME [--config FILE] [--set key=value ...]
                     [--out PATH] [--format csv|json] [--seed S]

``run`` is implied when the first argument is a flag. ``--set`` values are
parsed as JSON when possible (so lists and objects work), otherwise as plain
strings; ``params.KEY=value`` sets one entry of the params block.

Exit codes: 0 success, 2 invalid configuration, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import ConfigError, ExperimentConfig, list_experiments, resolve, run, validate


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _apply_set(doc: dict, item: str) -> None:
    if "=" not in item:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    key, value = item.split("=", 1)
    value = _parse_value(value)
    if key.startswith("params."):
        doc.setdefault("params", {})[key[len("params."):]] = value
    else:
        doc[key] = value


def _build_config(args) -> ExperimentConfig:
    doc: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config!r}: {e}") from None
    for item in args.set or []:
        _apply_set(doc, item)
    for key in ("experiment", "out", "format", "seed"):
        v = getattr(args, key, None)
        if v is not None:
            doc[key] = v
    if "experiment" not in doc:
        raise ConfigError("no experiment given; pass --experiment NAME or a config file (see 'list')")
    return ExperimentConfig.from_dict(doc)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--experiment", help="experiment name (see 'list')")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config field")
    p.add_argument("--out", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmonic-lab", description="Seeded harmonic analysis experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_list = sub.add_parser("list", help="list experiments")
    p_list.add_argument("filter", nargs="?", default="")
    _add_config_flags(sub.add_parser("validate", help="check a config without running it"))
    _add_config_flags(sub.add_parser("run", help="run an experiment"))
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0].startswith("-") and argv[0] not in ("-h", "--help"):
        argv = ["run"] + argv
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name, desc, fields in list_experiments(args.filter):
            print(f"{name:20s} {desc}  [fields: {', '.join(fields) or 'none'}]")
        return 0
    try:
        cfg = _build_config(args)
        if args.command == "validate":
            diags = validate(cfg)
            for d in diags:
                print(d, file=sys.stderr)
            if diags:
                return 2
            print(json.dumps(resolve(cfg).to_dict(), sort_keys=True))
            return 0
        table = run(cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001  runtime failures map to exit code 1
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    text = table.render(table.metadata["config"]["format"])
    out = table.metadata["config"]["out"]
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
