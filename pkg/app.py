#!/usr/bin/env python3
import argparse
import importlib
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent / "src"))

from helpers.logging import logger, set_level  # noqa: E402

# command -> handler module under src/
ROUTES = {
    "axioms": "axioms",
    "octonion": "octonion",
    "algebra": "algebra",
    "ideal": "ideal",
    "localize": "localize",
    "cover": "cover",
    "glue": "glue",
    "line": "line",
    "proj verify": "proj_verify",
    "proj chart": "proj_chart",
    "proj transition": "proj_transition",
    "proj dualize": "proj_dualize",
    "proj glue": "proj_glue",
    "proj fieldcover": "proj_fieldcover",
    "suite all": "suite_all",
}
_WITH_FILE = {"axioms", "algebra", "ideal", "localize", "cover", "glue", "line"}
_PROJ = ("verify", "chart", "transition", "dualize", "glue", "fieldcover")


def _flags(default=None) -> argparse.ArgumentParser:
    """Shared flags; subcommands suppress their defaults so flags given before the subcommand survive."""
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--seed", type=int, default=default)
    flags.add_argument("--samples", type=int, default=default)
    flags.add_argument("--format", choices=("json", "text"), default=default)
    flags.add_argument("--out", default=default)
    flags.add_argument("--verbose", action="store_true", default=default or False)
    return flags


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relproj", parents=[_flags()])
    flags = _flags(argparse.SUPPRESS)
    commands = parser.add_subparsers(dest="command", required=True)
    for name in sorted(_WITH_FILE):
        commands.add_parser(name, parents=[flags]).add_argument("file")
    commands.add_parser("octonion", parents=[flags])

    proj = commands.add_parser("proj", parents=[flags]).add_subparsers(dest="action", required=True)
    for action in _PROJ:
        sub = proj.add_parser(action, parents=[flags])
        if action == "transition":
            sub.add_argument("file", nargs="?")
            sub.add_argument("--n", type=int)
            sub.add_argument("--from", dest="source", type=int)
            sub.add_argument("--to", dest="target", type=int)
            sub.add_argument("--coords", nargs="*")
        else:
            sub.add_argument("file")

    suite = commands.add_parser("suite", parents=[flags]).add_subparsers(dest="action", required=True)
    suite.add_parser("all", parents=[flags])
    return parser


def to_event(args: argparse.Namespace) -> dict:
    command = args.command if getattr(args, "action", None) is None else f"{args.command} {args.action}"
    params = {}
    if command == "proj transition":
        params = {"n": args.n, "from": args.source, "to": args.target, "coords": args.coords}
    return {
        "command": command,
        "file": getattr(args, "file", None),
        "seed": args.seed,
        "samples": args.samples,
        "format": args.format,
        "params": params,
    }


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_level("DEBUG")
    event = to_event(args)
    handler = importlib.import_module(ROUTES[event["command"]]).handler
    response = handler(event)
    body = response["body"]
    if args.out:
        Path(args.out).write_text(body + "\n", encoding="utf-8")
        logger.info("report written to %s", args.out)
    else:
        sys.stdout.write(body + "\n")
    return response["statusCode"]


if __name__ == "__main__":
    sys.exit(main())
