"""Rewrite tests/golden/<name>.out from the current engine output.

Run after an intentional change to the report format, then review the diff.
"""

from pathlib import Path

from biphoton.cli import builtin_names, builtin_text
from biphoton.runner import run_scenario
from biphoton.scenario import parse_scenario

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main():
    GOLDEN.mkdir(exist_ok=True)
    for name in builtin_names():
        text = run_scenario(parse_scenario(builtin_text(name), name=name))
        (GOLDEN / f"{name}.out").write_text(text, encoding="utf-8")
        print(f"wrote {name}.out")


if __name__ == "__main__":
    main()
