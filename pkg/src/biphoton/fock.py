"""Multi-photon states as polynomials in commuting creation operators.

A state is a finite sum ``sum_m alpha_m * m |vac>`` where each ``m`` is a
product of creation operators (a :class:`Monomial`).  Creation operators
commute, so a monomial is a sorted multiset of :class:`Mode` labels.

Amplitudes are plain substitution coefficients.  No ``sqrt(n!)`` Fock
weights are ever applied to multiply-occupied monomials, and nothing is
normalized implicitly.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

#: Terms whose magnitude drops below this are removed.
PRUNE_TOL = 1e-12
#: Absolute tolerance used for amplitude comparisons.
ATOL = 1e-9


class Pol(enum.IntEnum):
    H = 0
    V = 1


class Freq(enum.IntEnum):
    L1 = 0
    L2 = 1


@dataclass(frozen=True, order=True)
class Mode:
    """One bosonic mode: spatial channel, polarization, frequency.

    Ordering is lexicographic on ``(spatial, pol, freq)``.
    """

    spatial: str
    pol: Pol
    freq: Freq

    def __str__(self) -> str:
        return f"{self.spatial}:{self.pol.name}:{self.freq.name}"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        """Parse ``"a:H:L1"`` style labels."""
        try:
            spatial, pol, freq = text.split(":")
            return cls(spatial, Pol[pol], Freq[freq])
        except (ValueError, KeyError):
            raise ValueError(f"malformed mode label {text!r}") from None


def mode(spatial: str, pol: str | Pol, freq: str | Freq) -> Mode:
    """Convenience constructor accepting enum names."""
    if isinstance(pol, str):
        pol = Pol[pol]
    if isinstance(freq, str):
        freq = Freq[freq]
    return Mode(spatial, pol, freq)


@dataclass(frozen=True)
class Monomial:
    """A product of creation operators in canonical (sorted) order."""

    modes: tuple[Mode, ...] = ()

    @property
    def degree(self) -> int:
        return len(self.modes)

    def occupation(self) -> Counter:
        return Counter(self.modes)

    def channels(self) -> Counter:
        """Photon count per spatial channel."""
        return Counter(m.spatial for m in self.modes)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return canonicalize(self.modes + other.modes)

    def __str__(self) -> str:
        if not self.modes:
            return "vac"
        return "*".join(str(m) for m in self.modes)


VACUUM = Monomial(())


def canonicalize(modes: Iterable[Mode]) -> Monomial:
    return Monomial(tuple(sorted(modes)))


class OperatorState:
    """Sparse complex polynomial in creation operators acting on vacuum.

    Instances are treated as immutable.  Arithmetic returns new states and
    prunes amplitudes below :data:`PRUNE_TOL`.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, complex] | None = None):
        cleaned = {}
        for mono, amp in (terms or {}).items():
            amp = complex(amp)
            if abs(amp) >= PRUNE_TOL:
                cleaned[mono] = amp
        self._terms = cleaned

    @classmethod
    def vacuum(cls, amplitude: complex = 1.0) -> "OperatorState":
        return cls({VACUUM: amplitude})

    @classmethod
    def from_modes(cls, modes: Iterable[Mode], amplitude: complex = 1.0) -> "OperatorState":
        return cls({canonicalize(modes): amplitude})

    @property
    def terms(self) -> dict[Monomial, complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __getitem__(self, mono: Monomial) -> complex:
        return self._terms.get(mono, 0j)

    def degrees(self) -> set[int]:
        return {m.degree for m in self._terms}

    def channels(self) -> set[str]:
        return {md.spatial for m in self._terms for md in m.modes}

    def __add__(self, other: "OperatorState") -> "OperatorState":
        out = dict(self._terms)
        for mono, amp in other._terms.items():
            out[mono] = out.get(mono, 0j) + amp
        return OperatorState(out)

    def __neg__(self) -> "OperatorState":
        return OperatorState({m: -a for m, a in self._terms.items()})

    def __sub__(self, other: "OperatorState") -> "OperatorState":
        return self + (-other)

    def scale(self, factor: complex) -> "OperatorState":
        return OperatorState({m: factor * a for m, a in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, OperatorState):
            return multiply(self, other)
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "OperatorState":
        out = OperatorState.vacuum()
        for _ in range(n):
            out = multiply(out, self)
        return out

    def norm(self) -> float:
        """Euclidean norm of the raw coefficient vector (no Fock weights)."""
        return sum(abs(a) ** 2 for a in self._terms.values()) ** 0.5

    def isclose(self, other: "OperatorState", atol: float = ATOL) -> bool:
        keys = set(self._terms) | set(other._terms)
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorState):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def __repr__(self) -> str:
        if not self._terms:
            return "OperatorState(0)"
        body = " + ".join(
            f"({a.real:.6g}{a.imag:+.6g}j)*{m}" for m, a in sorted_terms(self)
        )
        return f"OperatorState({body})"


def sorted_terms(state: OperatorState) -> list[tuple[Monomial, complex]]:
    """Terms in a deterministic order (by degree, then by mode labels)."""
    return sorted(state.items(), key=lambda kv: (kv[0].degree, kv[0].modes))


def multiply(s1: OperatorState, s2: OperatorState) -> OperatorState:
    out: dict[Monomial, complex] = {}
    for m1, a1 in s1.items():
        for m2, a2 in s2.items():
            m = m1 * m2
            out[m] = out.get(m, 0j) + a1 * a2
    return OperatorState(out)


def filter_by_degree(s: OperatorState, n: int) -> OperatorState:
    if n < 0:
        raise ValueError("photon number must be non-negative")
    return OperatorState({m: a for m, a in s.items() if m.degree == n})
