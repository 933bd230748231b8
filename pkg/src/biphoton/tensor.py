"""First-quantized four-photon picture used as an independent oracle.

Two photon pairs occupy four labelled slots, ordered
``(L1 of pair 1, L2 of pair 1, L1 of pair 2, L2 of pair 2)``.  Each slot is
one of four single-photon states::

    input side:   0 = in1:H   1 = in1:V   2 = in2:H   3 = in2:V
    output side:  0 = out1:H  1 = out1:V  2 = out2:H  3 = out2:V

A four-photon state is a 256-vector with slot 1 as the most significant
index, and an element acts as ``U_L1 (x) U_L2 (x) U_L1 (x) U_L2``.

Slots are distinguishable labels here.  The bosonic amplitude of a physical
detection pattern is the sum over all slot assignments that land on it.
This module deliberately uses only written-out matrices and index
arithmetic; it shares no code path with the substitution engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .fock import ATOL, Freq, Mode, OperatorState

_S = 1 / np.sqrt(2)

_BS = _S * np.array(
    [
        [1, 0, 1j, 0],
        [0, 1, 0, 1j],
        [1j, 0, 1, 0],
        [0, 1j, 0, 1],
    ]
)
_PBS = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
    ],
    dtype=complex,
)
_DBS_L1 = np.array(
    [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ],
    dtype=complex,
)
_DBS_L2 = np.eye(4, dtype=complex)

# ququart digit -> (slot state of L1 photon, slot state of L2 photon), port offset 0
_DIGIT_POLS = {0: (0, 0), 1: (0, 1), 2: (1, 0), 3: (1, 1)}


def single_photon_matrix(kind: str, freq: Freq | str) -> np.ndarray:
    freq = Freq[freq] if isinstance(freq, str) else Freq(freq)
    if kind == "BS":
        return _BS.copy()
    if kind == "PBS":
        return _PBS.copy()
    if kind == "DBS":
        return (_DBS_L1 if freq is Freq.L1 else _DBS_L2).copy()
    raise ValueError(f"no single-photon matrix for element kind {kind!r}")


def four_photon_unitary(kind: str) -> np.ndarray:
    u1 = single_photon_matrix(kind, Freq.L1)
    u2 = single_photon_matrix(kind, Freq.L2)
    return np.kron(np.kron(u1, u2), np.kron(u1, u2))


def index(slots: Sequence[int]) -> int:
    s1, s2, s3, s4 = slots
    return ((s1 * 4 + s2) * 4 + s3) * 4 + s4


def slots_of(idx: int) -> tuple[int, int, int, int]:
    return (idx >> 6) & 3, (idx >> 4) & 3, (idx >> 2) & 3, idx & 3


def pair_vector(coeffs: Sequence[complex], port: int) -> np.ndarray:
    """16-vector of one ququart on input port 0 (in1) or 1 (in2), slots (L1, L2)."""
    v = np.zeros(16, dtype=complex)
    for j, c in enumerate(coeffs):
        p1, p2 = _DIGIT_POLS[j]
        v[(2 * port + p1) * 4 + (2 * port + p2)] = c
    return v


def pair_tensor(first: tuple[Sequence[complex], int], second: tuple[Sequence[complex], int]) -> np.ndarray:
    """Labelled-slot tensor ``psi_first (x) psi_second``; each argument is ``(coeffs, port)``."""
    return np.kron(pair_vector(*first), pair_vector(*second))


#: The three four-photon input groups of two SPDC sources.
TERMS = ("ab", "aa", "bb")


def term_tensor(term: str, ca: Sequence[complex], cb: Sequence[complex]) -> np.ndarray:
    """Input tensor for one group: one pair per source, or a double pair from one source."""
    if term == "ab":
        return pair_tensor((ca, 0), (cb, 1))
    if term == "aa":
        return pair_tensor((ca, 0), (ca, 0))
    if term == "bb":
        return pair_tensor((cb, 1), (cb, 1))
    raise ValueError(f"unknown input term {term!r}")


# --- bridge to/from the operator picture ----------------------------------


def _slot_state(m: Mode, ports: Sequence[str]) -> int:
    try:
        port = ports.index(m.spatial)
    except ValueError:
        raise ValueError(f"photon in channel {m.spatial!r} is not on ports {tuple(ports)}") from None
    return 2 * port + int(m.pol)


def tensor_from_state(state: OperatorState, ports: Sequence[str]) -> np.ndarray:
    """Labelled-slot tensor whose bosonic sum reproduces ``state``.

    Every monomial must hold two L1 and two L2 photons on ``ports``.  One
    slot assignment is chosen per monomial (L1 photons to slots 1 and 3, L2
    photons to slots 2 and 4, each pair in sorted order).
    """
    vec = np.zeros(256, dtype=complex)
    for mono, amp in state.items():
        l1 = sorted(_slot_state(m, ports) for m in mono.modes if m.freq is Freq.L1)
        l2 = sorted(_slot_state(m, ports) for m in mono.modes if m.freq is Freq.L2)
        if len(l1) != 2 or len(l2) != 2:
            raise ValueError(f"monomial {mono} is not a two-pair (2 x L1, 2 x L2) term")
        vec[index((l1[0], l2[0], l1[1], l2[1]))] += amp
    return vec


def pattern_key(idx: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Physical detection pattern of a slot index: sorted L1 states, sorted L2 states."""
    s1, s2, s3, s4 = slots_of(idx)
    return tuple(sorted((s1, s3))), tuple(sorted((s2, s4)))


def pattern_sums(vec: np.ndarray) -> dict:
    sums: dict = {}
    for idx in range(256):
        key = pattern_key(idx)
        sums[key] = sums.get(key, 0j) + vec[idx]
    return sums


def expressible(key) -> tuple[int, int] | None:
    """Ququart digits ``(out1, out2)`` if the pattern puts one L1 and one L2 photon on each port."""
    (a1, b1), (a2, b2) = key
    # port of a slot state is state // 2; sorted order puts out1 first when split
    if a1 // 2 == b1 // 2 or a2 // 2 == b2 // 2:
        return None
    d_out1 = 2 * (a1 % 2) + (a2 % 2)
    d_out2 = 2 * (b1 % 2) + (b2 % 2)
    return d_out1, d_out2


def oracle_table(vec: np.ndarray) -> dict[tuple[int, int], complex]:
    """Postselected two-ququart amplitudes read straight off an output tensor."""
    table = {}
    for key, amp in pattern_sums(vec).items():
        digits = expressible(key)
        if digits is not None and abs(amp) >= 1e-12:
            table[digits] = amp
    return table


# --- amplitude classification ----------------------------------------------


@dataclass(frozen=True)
class AmplitudeCounts:
    """Tallies of the 256 output slot amplitudes of one four-photon input term.

    ``vanished`` covers every entry without a detectable net amplitude, so
    ``kept + wasted + vanished == 256``.  ``cancelled`` is the part of
    ``vanished`` whose raw entry was nonzero and was removed by interference.
    """

    kept: int
    wasted: int
    vanished: int
    cancelled: int = 0

    @property
    def total(self) -> int:
        return self.kept + self.wasted + self.vanished

    def __add__(self, other: "AmplitudeCounts") -> "AmplitudeCounts":
        return AmplitudeCounts(
            self.kept + other.kept,
            self.wasted + other.wasted,
            self.vanished + other.vanished,
            self.cancelled + other.cancelled,
        )


def classify_tensor(vec_in: np.ndarray, kind: str, atol: float = ATOL) -> AmplitudeCounts:
    """Partition the 256 output slot amplitudes into kept / wasted / vanished.

    An output entry survives if it is nonzero itself and the bosonic sum of
    its detection pattern is nonzero; surviving entries are kept when the
    pattern is ququart-expressible and wasted otherwise.  Everything else
    vanished.
    """
    out = four_photon_unitary(kind) @ vec_in
    sums = pattern_sums(out)
    kept = wasted = cancelled = 0
    for idx in range(256):
        key = pattern_key(idx)
        if abs(out[idx]) < atol:
            continue
        if abs(sums[key]) < atol:
            cancelled += 1
        elif expressible(key) is None:
            wasted += 1
        else:
            kept += 1
    return AmplitudeCounts(kept, wasted, 256 - kept - wasted, cancelled)


# --- cross-validation against the substitution engine -----------------------


@dataclass(frozen=True)
class CrossCheckReport:
    element: str
    compared: int
    max_deviation: float
    failures: tuple = field(default_factory=tuple)

    @property
    def agree(self) -> bool:
        return not self.failures


def cross_check(state: OperatorState, element, atol: float = ATOL) -> CrossCheckReport:
    """Compare engine and tensor postselected tables for one two-port element.

    ``state`` must be a two-pair state living on the element's input channels.
    """
    from .elements import TWO_PORT, apply_element
    from .postselection import postselect

    if element.name not in TWO_PORT:
        raise ValueError(f"the tensor oracle only models two-port elements, not {element.name}")
    if state.degrees() - {4}:
        raise ValueError("the tensor oracle needs a pure four-photon state")
    vec = four_photon_unitary(element.name) @ tensor_from_state(state, element.inputs)
    oracle = oracle_table(vec)
    engine = postselect(apply_element(state, element), element.outputs).entries
    keys = sorted(set(oracle) | set(engine))
    failures = []
    worst = 0.0
    for k in keys:
        dev = abs(oracle.get(k, 0j) - engine.get(k, 0j))
        worst = max(worst, dev)
        if dev > atol:
            failures.append((k, engine.get(k, 0j), oracle.get(k, 0j)))
    return CrossCheckReport(str(element), len(keys), worst, tuple(failures))
