import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biphoton.fock import (
    VACUUM,
    Freq,
    Mode,
    Monomial,
    OperatorState,
    Pol,
    canonicalize,
    filter_by_degree,
    mode,
    multiply,
)

ALL_MODES = [Mode(ch, p, f) for ch in "abcd" for p in Pol for f in Freq]

modes_st = st.lists(st.sampled_from(ALL_MODES), max_size=6)
amp_st = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z) > 1e-3
)
state_st = st.dictionaries(modes_st.map(canonicalize), amp_st, max_size=4).map(OperatorState)


def test_canonicalize_sorts():
    m = canonicalize([mode("c", "V", "L2"), mode("c", "H", "L1")])
    assert m.modes == (mode("c", "H", "L1"), mode("c", "V", "L2"))


def test_canonicalize_empty_is_vacuum():
    assert canonicalize([]) == VACUUM
    assert VACUUM.degree == 0


def test_canonicalize_multiset():
    m = canonicalize([mode("a", "H", "L1")] * 2)
    assert m.occupation()[mode("a", "H", "L1")] == 2
    assert m.degree == 2


def test_mode_ordering_spatial_then_pol_then_freq():
    assert Mode("a", Pol.V, Freq.L2) < Mode("b", Pol.H, Freq.L1)
    assert Mode("a", Pol.H, Freq.L2) < Mode("a", Pol.V, Freq.L1)
    assert Mode("a", Pol.H, Freq.L1) < Mode("a", Pol.H, Freq.L2)


def test_mode_parse_roundtrip():
    m = Mode.parse("a':V:L2")
    assert m == Mode("a'", Pol.V, Freq.L2)
    assert str(m) == "a':V:L2"
    with pytest.raises(ValueError):
        Mode.parse("a:X:L1")


@given(modes_st, st.randoms())
def test_canonical_roundtrip_under_shuffle(modes, rnd):
    m = canonicalize(modes)
    shuffled = list(m.modes)
    rnd.shuffle(shuffled)
    assert canonicalize(shuffled) == m
    assert canonicalize(m.modes) == m


def test_vacuum_is_identity():
    s = OperatorState({canonicalize(ALL_MODES[:2]): 0.5 - 1j, canonicalize(ALL_MODES[3:4]): 2})
    assert multiply(OperatorState.vacuum(), s) == s


def test_ququart_product_single_monomial():
    zero_a = OperatorState.from_modes([mode("a", "H", "L1"), mode("a", "H", "L2")])
    three_b = OperatorState.from_modes([mode("b", "V", "L1"), mode("b", "V", "L2")])
    prod = zero_a * three_b
    assert len(prod) == 1
    (mono,) = prod
    assert mono.modes == (
        mode("a", "H", "L1"),
        mode("a", "H", "L2"),
        mode("b", "V", "L1"),
        mode("b", "V", "L2"),
    )
    assert prod[mono] == 1


def _brute_square(terms):
    """Expand (sum_k t_k)^2 by enumerating ordered factor pairs."""
    out = {}
    for (m1, a1), (m2, a2) in itertools.product(terms, repeat=2):
        key = tuple(sorted(m1 + m2))
        out[key] = out.get(key, 0) + a1 * a2
    return out


def test_binomial_cross_term():
    x = (mode("a", "H", "L1"), mode("a", "H", "L2"))
    y = (mode("a", "V", "L1"), mode("a", "V", "L2"))
    expected = _brute_square([(x, 1), (y, 1)])
    assert sorted(expected.values()) == [1, 1, 2]
    s = OperatorState.from_modes(x) + OperatorState.from_modes(y)
    sq = s * s
    assert len(sq) == 3
    for modes, amp in expected.items():
        assert sq[Monomial(modes)] == pytest.approx(amp)


@settings(max_examples=50)
@given(state_st, state_st, state_st)
def test_multiply_commutative_and_associative(a, b, c):
    assert multiply(a, b).isclose(multiply(b, a), atol=1e-12)
    assert multiply(multiply(a, b), c).isclose(multiply(a, multiply(b, c)), atol=1e-12)


@given(state_st, state_st, amp_st)
def test_multiply_bilinear(a, b, z):
    assert multiply(a.scale(z), b).isclose(multiply(a, b).scale(z), atol=1e-9)
    assert multiply(a + b, b).isclose(multiply(a, b) + multiply(b, b), atol=1e-9)


@given(state_st)
def test_filter_by_degree_partitions(s):
    rebuilt = OperatorState()
    for n in s.degrees():
        part = filter_by_degree(s, n)
        assert part.degrees() <= {n}
        rebuilt = rebuilt + part
    assert rebuilt.terms == s.terms


def test_filter_by_degree_zero_keeps_vacuum():
    s = OperatorState.vacuum(0.3) + OperatorState.from_modes(ALL_MODES[:2])
    assert filter_by_degree(s, 0).terms == {VACUUM: 0.3}
    with pytest.raises(ValueError):
        filter_by_degree(s, -1)


def test_pruning_removes_cancellation():
    m = OperatorState.from_modes(ALL_MODES[:1])
    assert len(m - m) == 0
    almost = OperatorState({canonicalize(ALL_MODES[:1]): 1e-13})
    assert len(almost) == 0


def test_power_matches_repeated_multiply():
    s = OperatorState.from_modes(ALL_MODES[:1]) + OperatorState.from_modes(ALL_MODES[5:6], 1j)
    assert s**3 == s * s * s
    assert s**0 == OperatorState.vacuum()


def test_no_fock_weights():
    # a^+ a^+ |vac> keeps coefficient 1 on the doubly occupied monomial
    a = OperatorState.from_modes(ALL_MODES[:1])
    sq = a * a
    assert list(sq.terms.values()) == [1]
