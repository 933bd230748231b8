"""Line-oriented scenario files.

Grammar (whitespace separated, ``#`` starts a comment)::

    source <channel> ququart <c0> <c1> <c2> <c3> [pairs=1|2]
    source <channel> vacuum
    element <BS|PBS|DBS> <in1> <in2> -> <out1> <out2>
    element <HWP|QWP> <channel> <angle-degrees>
    postselect <ch1> <ch2> [...]
    option <oracle|counts|normalize> <on|off>
    option precision <digits>

Complex literals are a bare real ``0.5``, a pair ``(re,im)`` or polar
``pol(r,deg)``.  ``source <channel> vacuum`` declares an input port that
receives no light.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field

from .elements import TWO_PORT, WAVEPLATES


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class SourceDecl:
    channel: str
    coeffs: tuple[complex, ...] | None  # None: vacuum port
    pairs: int = 1

    @property
    def is_vacuum(self) -> bool:
        return self.coeffs is None


@dataclass(frozen=True)
class ElementDecl:
    kind: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    angle: float | None = None


@dataclass(frozen=True)
class Options:
    oracle: bool = False
    counts: bool = False
    normalize: bool = False
    precision: int = 6


@dataclass(frozen=True)
class Scenario:
    sources: tuple[SourceDecl, ...]
    elements: tuple[ElementDecl, ...]
    pattern: tuple[str, ...]
    options: Options = field(default_factory=Options)
    name: str = "scenario"


_FLOAT = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_PAIR = re.compile(rf"\(\s*({_FLOAT})\s*,\s*({_FLOAT})\s*\)$")
_POLAR = re.compile(rf"pol\(\s*({_FLOAT})\s*,\s*({_FLOAT})\s*\)$")
_REAL = re.compile(rf"{_FLOAT}$")


def parse_complex(token: str) -> complex:
    """``"0.5"``, ``"(0.5,-0.5)"`` or ``"pol(1,90)"``."""
    if _REAL.match(token):
        return complex(float(token), 0.0)
    m = _PAIR.match(token)
    if m:
        return complex(float(m.group(1)), float(m.group(2)))
    m = _POLAR.match(token)
    if m:
        r, deg = float(m.group(1)), float(m.group(2))
        # exact axes keep 90-degree phases free of cos(pi/2) dust
        quarter, rem = divmod(deg, 90.0)
        if rem == 0:
            return r * (1, 1j, -1, -1j)[int(quarter) % 4]
        return cmath.rect(r, math.radians(deg))
    raise ValueError(f"malformed complex literal {token!r}")


def format_complex(z: complex) -> str:
    if z.imag == 0:
        return repr(z.real + 0.0)
    return f"({z.real + 0.0!r},{z.imag + 0.0!r})"


def _onoff(token: str, line: int) -> bool:
    if token not in ("on", "off"):
        raise ScenarioError(f"expected 'on' or 'off', got {token!r}", line)
    return token == "on"


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    sources: list[SourceDecl] = []
    elements: list[ElementDecl] = []
    pattern: tuple[str, ...] | None = None
    opts = {}
    live: set[str] = set()
    declared: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        keyword, args = tokens[0], tokens[1:]

        if keyword == "source":
            if elements:
                raise ScenarioError("sources must be declared before elements", lineno)
            if len(args) < 2:
                raise ScenarioError("source needs a channel and a state", lineno)
            channel, kind = args[0], args[1]
            if channel in declared:
                raise ScenarioError(f"duplicate channel {channel!r}", lineno)
            if kind == "vacuum":
                if len(args) != 2:
                    raise ScenarioError("'source <channel> vacuum' takes no further arguments", lineno)
                sources.append(SourceDecl(channel, None))
            elif kind == "ququart":
                rest = args[2:]
                pairs = 1
                if rest and rest[-1].startswith("pairs="):
                    value = rest.pop()[len("pairs="):]
                    if value not in ("1", "2"):
                        raise ScenarioError(f"pairs must be 1 or 2, got {value!r}", lineno)
                    pairs = int(value)
                if len(rest) != 4:
                    raise ScenarioError(f"ququart needs 4 coefficients, got {len(rest)}", lineno)
                try:
                    coeffs = tuple(parse_complex(t) for t in rest)
                except ValueError as exc:
                    raise ScenarioError(str(exc), lineno) from None
                if all(c == 0 for c in coeffs):
                    raise ScenarioError(f"ququart on {channel!r} has all-zero coefficients", lineno)
                sources.append(SourceDecl(channel, coeffs, pairs))
            else:
                raise ScenarioError(f"unknown source kind {kind!r}", lineno)
            declared.add(channel)
            live.add(channel)

        elif keyword == "element":
            if not args:
                raise ScenarioError("element needs a kind", lineno)
            kind, ports = args[0], args[1:]
            if kind in TWO_PORT:
                if len(ports) != 5 or ports[2] != "->":
                    raise ScenarioError(f"usage: element {kind} <in1> <in2> -> <out1> <out2>", lineno)
                ins, outs = tuple(ports[:2]), tuple(ports[3:])
                if len(set(ins + outs)) != 4:
                    raise ScenarioError(f"duplicate channel in {' '.join(ports)}", lineno)
                for ch in ins:
                    if ch not in live:
                        raise ScenarioError(f"channel {ch!r} used before it exists", lineno)
                live -= set(ins)
                for ch in outs:
                    if ch in live:
                        raise ScenarioError(f"output channel {ch!r} is already in use", lineno)
                live |= set(outs)
                elements.append(ElementDecl(kind, ins, outs))
            elif kind in WAVEPLATES:
                if len(ports) != 2:
                    raise ScenarioError(f"usage: element {kind} <channel> <angle-degrees>", lineno)
                ch = ports[0]
                if ch not in live:
                    raise ScenarioError(f"channel {ch!r} used before it exists", lineno)
                try:
                    angle = float(ports[1])
                except ValueError:
                    raise ScenarioError(f"malformed angle {ports[1]!r}", lineno) from None
                if not math.isfinite(angle):
                    raise ScenarioError("angle must be finite", lineno)
                elements.append(ElementDecl(kind, (ch,), (ch,), angle))
            else:
                raise ScenarioError(f"unknown element kind {kind!r}", lineno)

        elif keyword == "postselect":
            if pattern is not None:
                raise ScenarioError("postselect given twice", lineno)
            if not args:
                raise ScenarioError("postselect needs at least one channel", lineno)
            if len(set(args)) != len(args):
                raise ScenarioError("duplicate channel in postselect", lineno)
            pattern = tuple(args)
            pattern_line = lineno

        elif keyword == "option":
            if len(args) != 2:
                raise ScenarioError("usage: option <name> <value>", lineno)
            key, value = args
            if key in ("oracle", "counts", "normalize"):
                opts[key] = _onoff(value, lineno)
            elif key == "precision":
                if not value.isdigit() or not 0 <= int(value) <= 17:
                    raise ScenarioError(f"precision must be an integer in 0..17, got {value!r}", lineno)
                opts[key] = int(value)
            else:
                raise ScenarioError(f"unknown option {key!r}", lineno)

        else:
            raise ScenarioError(f"unknown keyword {keyword!r}", lineno)

    if not sources:
        raise ScenarioError("no sources declared")
    if pattern is None:
        raise ScenarioError("missing postselect line")
    missing = [ch for ch in pattern if ch not in live]
    if missing:
        raise ScenarioError(f"postselected channel(s) {missing} do not exist at the output", pattern_line)
    return Scenario(tuple(sources), tuple(elements), pattern, Options(**opts), name)


def format_scenario(s: Scenario) -> str:
    """Canonical text for ``s``; ``parse_scenario`` of it gives back ``s``."""
    lines = []
    for src in s.sources:
        if src.is_vacuum:
            lines.append(f"source {src.channel} vacuum")
        else:
            coeffs = " ".join(format_complex(c) for c in src.coeffs)
            lines.append(f"source {src.channel} ququart {coeffs} pairs={src.pairs}")
    for e in s.elements:
        if e.kind in WAVEPLATES:
            lines.append(f"element {e.kind} {e.inputs[0]} {e.angle!r}")
        else:
            lines.append(f"element {e.kind} {' '.join(e.inputs)} -> {' '.join(e.outputs)}")
    lines.append("postselect " + " ".join(s.pattern))
    o = s.options
    for key in ("oracle", "counts", "normalize"):
        lines.append(f"option {key} {'on' if getattr(o, key) else 'off'}")
    lines.append(f"option precision {o.precision}")
    return "\n".join(lines) + "\n"
