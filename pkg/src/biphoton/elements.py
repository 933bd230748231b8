"""Lossless optical elements as linear substitutions on creation operators.

Every element maps each input creation operator to a linear combination of
output creation operators.  Applying an element to a state substitutes all
operators of every monomial at once and re-collects the polynomial.

Conventions
-----------
* 50/50 beam splitter, symmetric phase::

      in1^+ -> (out1^+ + i out2^+) / sqrt(2)
      in2^+ -> (i out1^+ + out2^+) / sqrt(2)

* Polarizing beam splitter: H transmits (in1->out1, in2->out2), V reflects.
* Dichroic beam splitter: L1 reflects (in1->out2, in2->out1), L2 transmits.
* Waveplates act on the (H, V) pair of every frequency of one channel with a
  Jones matrix ``J`` whose columns are the images of H and V::

      HWP(t) = [[cos 2t,  sin 2t],
                [sin 2t, -cos 2t]]
      QWP(t) = R(t) @ diag(1, i) @ R(-t)
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .fock import Freq, Mode, Monomial, OperatorState, Pol

SQRT1_2 = 1 / math.sqrt(2)

TWO_PORT = ("BS", "PBS", "DBS")
WAVEPLATES = ("HWP", "QWP")


class NetworkError(ValueError):
    """Raised when a network references channels that are not available."""


@dataclass(frozen=True)
class ElementMap:
    """One optical element.

    ``rules`` maps an input mode to ``((output_mode, coefficient), ...)``.
    Modes absent from ``rules`` pass through unchanged.
    """

    name: str
    rules: dict[Mode, tuple[tuple[Mode, complex], ...]]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    angle: float | None = None

    def image(self, m: Mode) -> tuple[tuple[Mode, complex], ...]:
        return self.rules.get(m, ((m, 1.0 + 0j),))

    def matrix(self) -> tuple[np.ndarray, list[Mode], list[Mode]]:
        """Coefficient matrix restricted to the touched modes.

        Returns ``(U, in_modes, out_modes)`` with ``U[row=out, col=in]``.
        """
        in_modes = sorted(self.rules)
        out_modes = sorted({o for img in self.rules.values() for o, _ in img})
        U = np.zeros((len(out_modes), len(in_modes)), dtype=complex)
        row = {m: k for k, m in enumerate(out_modes)}
        for col, m in enumerate(in_modes):
            for o, c in self.rules[m]:
                U[row[o], col] += c
        return U, in_modes, out_modes

    def is_unitary(self, atol: float = 1e-12) -> bool:
        U, _, _ = self.matrix()
        if U.shape[0] != U.shape[1]:
            return False
        return np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=atol, rtol=0)

    def __str__(self) -> str:
        if self.name in WAVEPLATES:
            return f"{self.name} {self.inputs[0]} {self.angle:g}"
        return f"{self.name} {' '.join(self.inputs)} -> {' '.join(self.outputs)}"


def _check_ports(in1, in2, out1, out2):
    names = (in1, in2, out1, out2)
    if len(set(names)) != 4:
        raise ValueError(f"channel names must be distinct, got {names}")


def make_bs(in1: str, in2: str, out1: str, out2: str) -> ElementMap:
    _check_ports(in1, in2, out1, out2)
    rules = {}
    for p, f in itertools.product(Pol, Freq):
        c, d = Mode(out1, p, f), Mode(out2, p, f)
        rules[Mode(in1, p, f)] = ((c, SQRT1_2 + 0j), (d, 1j * SQRT1_2))
        rules[Mode(in2, p, f)] = ((c, 1j * SQRT1_2), (d, SQRT1_2 + 0j))
    return ElementMap("BS", rules, (in1, in2), (out1, out2))


def make_pbs(in1: str, in2: str, out1: str, out2: str) -> ElementMap:
    _check_ports(in1, in2, out1, out2)
    rules = {}
    for f in Freq:
        rules[Mode(in1, Pol.H, f)] = ((Mode(out1, Pol.H, f), 1 + 0j),)
        rules[Mode(in1, Pol.V, f)] = ((Mode(out2, Pol.V, f), 1 + 0j),)
        rules[Mode(in2, Pol.H, f)] = ((Mode(out2, Pol.H, f), 1 + 0j),)
        rules[Mode(in2, Pol.V, f)] = ((Mode(out1, Pol.V, f), 1 + 0j),)
    return ElementMap("PBS", rules, (in1, in2), (out1, out2))


def make_dbs(in1: str, in2: str, out1: str, out2: str) -> ElementMap:
    _check_ports(in1, in2, out1, out2)
    rules = {}
    for p in Pol:
        rules[Mode(in1, p, Freq.L1)] = ((Mode(out2, p, Freq.L1), 1 + 0j),)
        rules[Mode(in2, p, Freq.L1)] = ((Mode(out1, p, Freq.L1), 1 + 0j),)
        rules[Mode(in1, p, Freq.L2)] = ((Mode(out1, p, Freq.L2), 1 + 0j),)
        rules[Mode(in2, p, Freq.L2)] = ((Mode(out2, p, Freq.L2), 1 + 0j),)
    return ElementMap("DBS", rules, (in1, in2), (out1, out2))


def jones_matrix(kind: str, angle: float) -> np.ndarray:
    """Jones matrix of a half- or quarter-wave plate, fast axis at ``angle`` degrees."""
    if not math.isfinite(angle):
        raise ValueError("waveplate angle must be finite")
    t = math.radians(angle)
    if kind == "HWP":
        c, s = math.cos(2 * t), math.sin(2 * t)
        return np.array([[c, s], [s, -c]], dtype=complex)
    if kind == "QWP":
        c, s = math.cos(t), math.sin(t)
        R = np.array([[c, -s], [s, c]])
        return R @ np.diag([1, 1j]) @ R.T
    raise ValueError(f"unknown waveplate kind {kind!r}")


def make_waveplate(channel: str, kind: str, angle: float) -> ElementMap:
    J = jones_matrix(kind, angle)
    rules = {}
    for f in Freq:
        for p_in in Pol:
            image = tuple(
                (Mode(channel, p_out, f), complex(J[p_out, p_in]))
                for p_out in Pol
                if abs(J[p_out, p_in]) >= 1e-15
            )
            rules[Mode(channel, p_in, f)] = image
    return ElementMap(kind, rules, (channel,), (channel,), angle=float(angle))


def make_element(kind: str, *ports, angle: float | None = None) -> ElementMap:
    """Build an element by kind name (``BS``, ``PBS``, ``DBS``, ``HWP``, ``QWP``)."""
    if kind in TWO_PORT:
        return {"BS": make_bs, "PBS": make_pbs, "DBS": make_dbs}[kind](*ports)
    if kind in WAVEPLATES:
        (channel,) = ports
        return make_waveplate(channel, kind, angle)
    raise ValueError(f"unknown element kind {kind!r}")


def apply_element(s: OperatorState, e: ElementMap) -> OperatorState:
    # Expansion of each operator is computed once per call.
    images: dict[Mode, tuple[tuple[Mode, complex], ...]] = {}
    out: dict[Monomial, complex] = {}
    for mono, amp in s.items():
        partial: dict[tuple[Mode, ...], complex] = {(): amp}
        for m in mono.modes:
            img = images.get(m)
            if img is None:
                img = images[m] = e.image(m)
            nxt: dict[tuple[Mode, ...], complex] = {}
            for modes, a in partial.items():
                for o, c in img:
                    key = tuple(sorted(modes + (o,)))
                    nxt[key] = nxt.get(key, 0j) + a * c
            partial = nxt
        for modes, a in partial.items():
            key = Monomial(modes)
            out[key] = out.get(key, 0j) + a
    return OperatorState(out)


@dataclass(frozen=True)
class Network:
    """Straight-line sequence of elements.

    ``channels`` are the spatial channels live at the input.  Each two-port
    element consumes its input channels and creates its output channels;
    cascades are wired by naming.
    """

    elements: tuple[ElementMap, ...]
    channels: tuple[str, ...]
    stages: tuple[frozenset[str], ...] = field(init=False, repr=False)

    def __init__(self, elements: Iterable[ElementMap], channels: Sequence[str]):
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "channels", tuple(channels))
        object.__setattr__(self, "stages", _validate(self.elements, self.channels))

    @property
    def output_channels(self) -> frozenset[str]:
        return self.stages[-1]


def _validate(elements, channels) -> tuple[frozenset[str], ...]:
    live = set(channels)
    if len(live) != len(channels):
        raise NetworkError(f"duplicate declared channel in {list(channels)}")
    stages = [frozenset(live)]
    for k, e in enumerate(elements):
        missing = [c for c in e.inputs if c not in live]
        if missing:
            raise NetworkError(f"element {k} ({e}): input channel(s) {missing} not available")
        if e.outputs != e.inputs:
            live -= set(e.inputs)
            clash = [c for c in e.outputs if c in live]
            if clash:
                raise NetworkError(f"element {k} ({e}): output channel(s) {clash} already in use")
            live |= set(e.outputs)
        stages.append(frozenset(live))
    return tuple(stages)


def apply_network(s: OperatorState, n: Network, trace: list | None = None) -> OperatorState:
    """Apply ``n`` element by element.

    If ``trace`` is a list, the state entering each element is appended to it.
    """
    stray = s.channels() - set(n.channels)
    if stray:
        raise NetworkError(f"state occupies undeclared channel(s) {sorted(stray)}")
    for e in n.elements:
        if trace is not None:
            trace.append(s)
        s = apply_element(s, e)
    return s
