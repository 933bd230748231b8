"""Coincidence postselection and ququart-basis readout.

A detection pattern is a list of spatial channels; an output monomial is
detected only if every pattern channel holds exactly one L1 and one L2
photon and no photon sits anywhere else.  Detected monomials decode to a
tuple of ququart digits, one per pattern channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .fock import ATOL, Mode, Monomial, OperatorState, canonicalize
from .sources import BASIS, basis_modes, digit


@dataclass(frozen=True)
class CoincidencePattern:
    channels: tuple[str, ...]

    def __init__(self, channels: Sequence[str]):
        channels = tuple(channels)
        if len(set(channels)) != len(channels):
            raise ValueError(f"duplicate channel in pattern {channels}")
        object.__setattr__(self, "channels", channels)

    @property
    def photons(self) -> int:
        return 2 * len(self.channels)

    def __len__(self) -> int:
        return len(self.channels)


def _pattern(p) -> CoincidencePattern:
    return p if isinstance(p, CoincidencePattern) else CoincidencePattern(p)


def encode(digits: Sequence[int], pattern) -> Monomial:
    """Monomial detected as ``digits`` on ``pattern``."""
    pattern = _pattern(pattern)
    if len(digits) != len(pattern):
        raise ValueError("digit tuple length does not match pattern")
    modes: list[Mode] = []
    for ch, j in zip(pattern.channels, digits):
        modes.extend(basis_modes(ch, j))
    return canonicalize(modes)


def decode(mono: Monomial, pattern) -> tuple[int, ...] | None:
    """Digit tuple for a detectable monomial, ``None`` if it is not detected."""
    pattern = _pattern(pattern)
    if mono.degree != pattern.photons:
        return None
    slots: dict[str, list] = {ch: [None, None] for ch in pattern.channels}
    for m in mono.modes:
        pair = slots.get(m.spatial)
        if pair is None or pair[m.freq] is not None:
            return None
        pair[m.freq] = m.pol
    return tuple(digit(*slots[ch]) for ch in pattern.channels)


@dataclass(frozen=True)
class QuquartAmplitudeTable:
    """Postselected amplitudes keyed by digit tuples.

    ``remainder`` holds every monomial that does not produce a detection
    event; ``wasted`` is its number of monomials.
    """

    pattern: CoincidencePattern
    entries: dict[tuple[int, ...], complex]
    remainder: OperatorState = field(default_factory=OperatorState)

    @property
    def kept(self) -> int:
        return len(self.entries)

    @property
    def wasted(self) -> int:
        return len(self.remainder)

    @property
    def complete(self) -> bool:
        """True when nothing outside the ququart basis survived."""
        return not self.remainder

    def __getitem__(self, key) -> complex:
        return self.entries.get(tuple(key), 0j)

    def __len__(self) -> int:
        return len(self.entries)

    def sorted_items(self) -> list[tuple[tuple[int, ...], complex]]:
        return sorted(self.entries.items())

    def norm(self) -> float:
        return sum(abs(a) ** 2 for a in self.entries.values()) ** 0.5

    def normalized(self) -> "QuquartAmplitudeTable":
        n = self.norm()
        if n == 0:
            return self
        return QuquartAmplitudeTable(
            self.pattern, {k: a / n for k, a in self.entries.items()}, self.remainder
        )

    def to_array(self) -> np.ndarray:
        """Dense ``4 x 4 x ...`` amplitude array."""
        arr = np.zeros((4,) * len(self.pattern), dtype=complex)
        for k, a in self.entries.items():
            arr[k] = a
        return arr

    def isclose(self, other: Mapping, atol: float = ATOL) -> bool:
        other_entries = other.entries if isinstance(other, QuquartAmplitudeTable) else other
        keys = set(self.entries) | {tuple(k) for k in other_entries}
        return all(abs(self[k] - other_entries.get(k, 0j)) <= atol for k in keys)


def postselect(s: OperatorState, p) -> QuquartAmplitudeTable:
    p = _pattern(p)
    entries: dict[tuple[int, ...], complex] = {}
    rest: dict[Monomial, complex] = {}
    for mono, amp in s.items():
        key = decode(mono, p)
        if key is None:
            rest[mono] = amp
        else:
            entries[key] = amp
    return QuquartAmplitudeTable(p, entries, OperatorState(rest))


def postselect_general(s: OperatorState, p) -> tuple[QuquartAmplitudeTable, bool]:
    """Postselect and also report whether the non-ququart remainder is empty."""
    table = postselect(s, p)
    return table, table.complete


def table_state(table: QuquartAmplitudeTable) -> OperatorState:
    """Re-encode a table as an operator state on its pattern channels."""
    return OperatorState({encode(k, table.pattern): a for k, a in table.entries.items()})


# --- polarization analysis -------------------------------------------------

H = np.array([1, 0], dtype=complex)
V = np.array([0, 1], dtype=complex)
D = np.array([1, 1], dtype=complex) / np.sqrt(2)
A = np.array([1, -1], dtype=complex) / np.sqrt(2)
R = np.array([1, -1j], dtype=complex) / np.sqrt(2)
L = np.array([1, 1j], dtype=complex) / np.sqrt(2)


def analyzer_state(qwp: float, hwp: float) -> np.ndarray:
    """Polarization passed by a QWP, then an HWP, then a polarizer set to H.

    Angles are fast-axis angles in degrees.
    """
    from .elements import jones_matrix

    J = jones_matrix("HWP", hwp) @ jones_matrix("QWP", qwp)
    return J.conj().T @ H


def measure_polarization(state, p, settings) -> float:
    """Coincidence probability for a product of single-photon projectors.

    ``state`` is an :class:`OperatorState` or an already postselected table.
    ``settings`` gives one ``(e_L1, e_L2)`` pair of normalized Jones vectors
    per pattern channel.  The result is ``|<e|psi>|^2`` with no
    renormalization, so feeding a normalized state and summing over a
    complete basis of settings gives the total detection probability.
    """
    p = _pattern(p)
    table = state if isinstance(state, QuquartAmplitudeTable) else postselect(state, p)
    if len(settings) != len(p):
        raise ValueError("need one (L1, L2) projector pair per pattern channel")
    vecs = []
    for pair in settings:
        if len(pair) != 2:
            raise ValueError("each setting is an (L1, L2) pair of Jones vectors")
        row = []
        for e in pair:
            e = np.asarray(e, dtype=complex)
            if e.shape != (2,) or abs(np.linalg.norm(e) - 1) > 1e-9:
                raise ValueError(f"projector {e} is not a normalized Jones vector")
            row.append(e)
        vecs.append(row)
    amp = 0j
    for key, a in table.entries.items():
        w = a
        for (e1, e2), j in zip(vecs, key):
            p1, p2 = BASIS[j]
            w *= np.conj(e1[p1]) * np.conj(e2[p2])
        amp += w
    return float(abs(amp) ** 2)


# --- amplitude accounting ----------------------------------------------------


def classify_amplitudes(term: str, kind: str, ca: Sequence[complex], cb: Sequence[complex]):
    """Kept / wasted / vanished tallies for one input group through one element.

    ``term`` is ``"ab"`` (one pair per source), ``"aa"`` or ``"bb"`` (double
    pair from one source); ``ca`` and ``cb`` are the two sources' ququart
    coefficients, with source ``a`` on the element's first input.

    Counting is done on labelled-slot tensor amplitudes.  For the ``"ab"``
    group at a BS the interference-cancelled count depends on whether the
    two sources emit the same ququart: identical generic ququarts give
    (16, 64, 176), unrelated ones (16, 128, 112).
    """
    from .tensor import classify_tensor, term_tensor

    return classify_tensor(term_tensor(term, ca, cb), kind)


def classify_all(kind: str, ca: Sequence[complex], cb: Sequence[complex]) -> dict:
    """Tallies for every input group plus their sum under key ``"total"``."""
    from .tensor import TERMS

    out = {t: classify_amplitudes(t, kind, ca, cb) for t in TERMS}
    total = out["ab"]
    for t in TERMS[1:]:
        total = total + out[t]
    out["total"] = total
    return out


def efficiency_ratio(kind: str, ca: Sequence[complex], cb: Sequence[complex]) -> Fraction:
    """Kept-to-wasted slot-amplitude ratio summed over all input groups.

    Raises ``ZeroDivisionError`` when nothing is wasted.
    """
    total = classify_all(kind, ca, cb)["total"]
    if total.wasted == 0:
        raise ZeroDivisionError("no waste")
    return Fraction(total.kept, total.wasted)
