"""Command line front end.

    biphoton run <file|dir|builtin> [...] [--jobs N]
    biphoton list-builtin
    biphoton show <builtin-name>

Exit codes: 0 success, 1 parse error, 2 engine error, 3 oracle disagreement.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

from .runner import EngineError, execute, render
from .scenario import ScenarioError, parse_scenario

EXIT_OK, EXIT_PARSE, EXIT_ENGINE, EXIT_ORACLE = 0, 1, 2, 3

SUFFIX = ".scn"


def builtin_names() -> list[str]:
    root = resources.files("biphoton") / "scenarios"
    return sorted(p.name[: -len(SUFFIX)] for p in root.iterdir() if p.name.endswith(SUFFIX))


def builtin_text(name: str) -> str:
    path = resources.files("biphoton") / "scenarios" / f"{name}{SUFFIX}"
    if not path.is_file():
        raise KeyError(name)
    return path.read_text(encoding="utf-8")


def _collect(targets: list[str]) -> list[tuple[str, str]]:
    """Expand targets into ``(name, text)`` jobs in a stable order."""
    jobs = []
    for target in targets:
        path = Path(target)
        if path.is_dir():
            for f in sorted(path.glob(f"*{SUFFIX}")):
                jobs.append((f.stem, f.read_text(encoding="utf-8")))
        elif path.is_file():
            jobs.append((path.stem, path.read_text(encoding="utf-8")))
        else:
            try:
                jobs.append((target, builtin_text(target)))
            except KeyError:
                raise FileNotFoundError(f"no such file, directory or builtin scenario: {target}") from None
    return jobs


def _run_one(job: tuple[str, str]) -> tuple[int, str]:
    name, text = job
    try:
        scenario = parse_scenario(text, name=name)
    except ScenarioError as exc:
        return EXIT_PARSE, f"{name}: parse error: {exc}\n"
    try:
        result = execute(scenario)
    except EngineError as exc:
        return EXIT_ENGINE, f"{name}: engine error: {exc}\n"
    return (EXIT_OK if result.oracle_ok else EXIT_ORACLE), render(result)


def cmd_run(args) -> int:
    try:
        jobs = _collect(args.targets)
    except FileNotFoundError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    status = EXIT_OK
    chunks = []
    for code, text in results:
        if code in (EXIT_OK, EXIT_ORACLE):
            chunks.append(text)
        else:
            sys.stderr.write(text)
        status = max(status, code)
    sys.stdout.write("\n".join(chunks))
    return status


def cmd_list(args) -> int:
    for name in builtin_names():
        print(name)
    return EXIT_OK


def cmd_show(args) -> int:
    try:
        sys.stdout.write(builtin_text(args.name))
    except KeyError:
        print(f"unknown builtin scenario {args.name!r}", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biphoton", description="Linear-optical biphoton ququart simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run scenario files, directories or builtin names")
    run.add_argument("targets", nargs="+")
    run.add_argument("--jobs", type=int, default=1, help="evaluate independent scenarios in parallel")
    run.set_defaults(func=cmd_run)

    ls = sub.add_parser("list-builtin", help="list bundled scenarios")
    ls.set_defaults(func=cmd_list)

    show = sub.add_parser("show", help="print a bundled scenario file")
    show.add_argument("name")
    show.set_defaults(func=cmd_show)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
