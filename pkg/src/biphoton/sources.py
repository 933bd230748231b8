"""Biphoton ququart states and their truncated SPDC expansions.

Ququart basis on one spatial channel, first slot is the L1 photon::

    |0> = H(L1) H(L2)    |1> = H(L1) V(L2)
    |2> = V(L1) H(L2)    |3> = V(L1) V(L2)

An SPDC source emitting ququart ``psi`` is modelled, with the common
``eta`` prefactors dropped, as ``vac + psi [+ psi*psi]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fock import Freq, Mode, OperatorState, Pol, filter_by_degree, multiply

#: digit -> (polarization of the L1 photon, polarization of the L2 photon)
BASIS: dict[int, tuple[Pol, Pol]] = {
    0: (Pol.H, Pol.H),
    1: (Pol.H, Pol.V),
    2: (Pol.V, Pol.H),
    3: (Pol.V, Pol.V),
}


def digit(p1: Pol, p2: Pol) -> int:
    return 2 * int(p1) + int(p2)


def basis_modes(channel: str, j: int) -> tuple[Mode, Mode]:
    p1, p2 = BASIS[j]
    return Mode(channel, p1, Freq.L1), Mode(channel, p2, Freq.L2)


@dataclass(frozen=True)
class QuquartSpec:
    """Four complex amplitudes ``(c0, c1, c2, c3)`` on one channel.

    Coefficients are used as given.  Pass ``normalized=True`` to have the
    constructor insist on ``sum |c_j|^2 == 1``.
    """

    channel: str
    coeffs: tuple[complex, complex, complex, complex]
    normalized: bool = False

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) != 4:
            raise ValueError(f"a ququart needs 4 coefficients, got {len(coeffs)}")
        if all(c == 0 for c in coeffs):
            raise ValueError(f"ququart on {self.channel!r} has all-zero coefficients")
        if self.normalized:
            total = sum(abs(c) ** 2 for c in coeffs)
            if abs(total - 1) > 1e-9:
                raise ValueError(f"coefficients not normalized (sum |c|^2 = {total:.12g})")
        object.__setattr__(self, "coeffs", coeffs)


@dataclass(frozen=True)
class SpdcExpansion:
    source: QuquartSpec
    max_pairs: int = 1

    def __post_init__(self):
        if self.max_pairs not in (1, 2):
            raise ValueError("max_pairs must be 1 or 2")

    @property
    def channel(self) -> str:
        return self.source.channel


def ququart_state(q: QuquartSpec) -> OperatorState:
    terms = OperatorState()
    for j, c in enumerate(q.coeffs):
        terms = terms + OperatorState.from_modes(basis_modes(q.channel, j), c)
    return terms


def basis_state(channel: str, j: int, amplitude: complex = 1.0) -> OperatorState:
    return OperatorState.from_modes(basis_modes(channel, j), amplitude)


def spdc_state(x: SpdcExpansion) -> OperatorState:
    """``vac + psi`` or ``vac + psi + psi^2`` for one source."""
    psi = ququart_state(x.source)
    out = OperatorState.vacuum() + psi
    if x.max_pairs == 2:
        out = out + multiply(psi, psi)
    return out


def joint_input(sources: Sequence[SpdcExpansion], total_photons: int) -> OperatorState:
    """Product of all source expansions restricted to ``total_photons`` photons.

    Each source is truncated at its own ``max_pairs``; triple and higher
    emissions from a single source never appear.
    """
    channels = [x.channel for x in sources]
    if len(set(channels)) != len(channels):
        raise ValueError(f"sources on duplicate channels: {channels}")
    state = OperatorState.vacuum()
    for x in sources:
        # Dropping terms above the target photon number early keeps products small.
        state = multiply(state, spdc_state(x))
        state = OperatorState({m: a for m, a in state.items() if m.degree <= total_photons})
    return filter_by_degree(state, total_photons)
