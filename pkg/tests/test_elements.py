import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biphoton.elements import (
    Network,
    NetworkError,
    apply_element,
    apply_network,
    jones_matrix,
    make_bs,
    make_dbs,
    make_element,
    make_pbs,
    make_waveplate,
)
from biphoton.fock import OperatorState, mode
from biphoton.postselection import postselect
from biphoton.sources import QuquartSpec, basis_state, ququart_state

S = 1 / math.sqrt(2)


def image(e, m):
    return dict(e.image(m))


def test_bs_coefficients():
    bs = make_bs("a", "b", "c", "d")
    img = image(bs, mode("a", "H", "L1"))
    assert img[mode("c", "H", "L1")] == pytest.approx(S)
    assert img[mode("d", "H", "L1")] == pytest.approx(1j * S)
    img = image(bs, mode("b", "V", "L2"))
    assert img[mode("c", "V", "L2")] == pytest.approx(1j * S)
    assert img[mode("d", "V", "L2")] == pytest.approx(S)


def test_bs_single_photon_block_unitary():
    U, ins, outs = make_bs("a", "b", "c", "d").matrix()
    assert U.shape == (8, 8)
    assert np.allclose(U.conj().T @ U, np.eye(8), atol=1e-12)


def test_bs_twice_routes_a_to_d_with_phase_i():
    # 2x2 block squared: [[1, i], [i, 1]]^2 / 2 = [[0, i], [i, 0]]
    M = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
    M2 = M @ M
    assert np.allclose(M2, [[0, 1j], [1j, 0]])
    s = OperatorState.from_modes([mode("a", "H", "L1")])
    out = apply_element(apply_element(s, make_bs("a", "b", "c", "d")), make_bs("c", "d", "c2", "d2"))
    assert out == OperatorState.from_modes([mode("d2", "H", "L1")], M2[1, 0])


def test_pbs_routing():
    pbs = make_pbs("a", "b", "c", "d")
    assert image(pbs, mode("a", "V", "L2")) == {mode("d", "V", "L2"): 1}
    assert image(pbs, mode("a", "H", "L1")) == {mode("c", "H", "L1"): 1}
    assert image(pbs, mode("b", "H", "L1")) == {mode("d", "H", "L1"): 1}
    assert image(pbs, mode("b", "V", "L1")) == {mode("c", "V", "L1"): 1}


def test_pbs_matrix_is_permutation():
    # rows (cH, cV, dH, dV) x cols (aH, aV, bH, bV) for one frequency
    expected = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
    pbs = make_pbs("a", "b", "c", "d")
    ins = [mode(ch, p, "L1") for ch in "ab" for p in "HV"]
    outs = [mode(ch, p, "L1") for ch in "cd" for p in "HV"]
    got = np.array([[image(pbs, i).get(o, 0) for i in ins] for o in outs])
    assert np.array_equal(got, expected)


def test_dbs_routing():
    dbs = make_dbs("a", "b", "c", "d")
    assert image(dbs, mode("a", "H", "L1")) == {mode("d", "H", "L1"): 1}
    assert image(dbs, mode("a", "H", "L2")) == {mode("c", "H", "L2"): 1}
    assert image(dbs, mode("b", "V", "L1")) == {mode("c", "V", "L1"): 1}
    assert image(dbs, mode("b", "V", "L2")) == {mode("d", "V", "L2"): 1}


@pytest.mark.parametrize("maker", [make_pbs, make_dbs])
def test_permutation_elements_square_to_identity(maker):
    s = ququart_state(QuquartSpec("a", (0.3, 0.1j, -0.5, 0.2))) * ququart_state(
        QuquartSpec("b", (0.7, 0.2, 0.1, 0.4j))
    )
    twice = apply_element(apply_element(s, maker("a", "b", "c", "d")), maker("c", "d", "a", "b"))
    assert twice == s


@pytest.mark.parametrize("maker", [make_bs, make_pbs, make_dbs])
def test_duplicate_channels_rejected(maker):
    with pytest.raises(ValueError):
        maker("a", "b", "c", "c")


def test_hwp_45_flips_ququart_0_to_3():
    s = basis_state("a", 0)
    out = apply_element(s, make_waveplate("a", "HWP", 45))
    assert out == basis_state("a", 3)


def test_hwp_0_convention():
    hwp = make_waveplate("a", "HWP", 0)
    assert image(hwp, mode("a", "H", "L1")) == pytest.approx({mode("a", "H", "L1"): 1})
    assert image(hwp, mode("a", "V", "L2")) == pytest.approx({mode("a", "V", "L2"): -1})


def test_hwp_22_5_makes_equal_superposition():
    # (H1 + V1)(H2 + V2)/2 expands to all four basis states with weight 1/2
    out = apply_element(basis_state("a", 0), make_waveplate("a", "HWP", 22.5))
    expected = sum((basis_state("a", j, 0.5) for j in range(4)), OperatorState())
    assert out == expected


def test_qwp_45_matrix():
    # R(45) diag(1, i) R(-45) = [[1+i, 1-i], [1-i, 1+i]] / 2
    J = jones_matrix("QWP", 45)
    assert np.allclose(J, np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]) / 2)


def test_unknown_waveplate():
    with pytest.raises(ValueError):
        make_waveplate("a", "FWP", 10)
    with pytest.raises(ValueError):
        make_waveplate("a", "HWP", float("nan"))


@given(st.sampled_from(["HWP", "QWP"]), st.floats(-360, 360, allow_nan=False))
def test_waveplates_unitary(kind, angle):
    assert make_waveplate("a", kind, angle).is_unitary(atol=1e-12)


@pytest.mark.parametrize("kind", ["BS", "PBS", "DBS"])
def test_two_port_unitary(kind):
    assert make_element(kind, "a", "b", "c", "d").is_unitary(atol=1e-12)


def test_vacuum_passes_through():
    for e in (make_bs("a", "b", "c", "d"), make_waveplate("a", "QWP", 30)):
        assert apply_element(OperatorState.vacuum(), e) == OperatorState.vacuum()


def test_untouched_modes_pass_through():
    s = OperatorState.from_modes([mode("x", "H", "L1")], 0.5)
    assert apply_element(s, make_bs("a", "b", "c", "d")) == s


def test_eq12_bs_output_on_basis_inputs():
    s = basis_state("a", 0) * basis_state("b", 3)
    table = postselect(apply_element(s, make_bs("a", "b", "c", "d")), ["c", "d"])
    assert table.isclose({(0, 3): 0.25, (3, 0): 0.25, (1, 2): -0.25, (2, 1): -0.25})
    assert table.wasted > 0


def test_double_pair_bs_vacuum_term():
    zero = basis_state("a", 0)
    table = postselect(apply_element(zero * zero, make_bs("a", "b", "c", "d")), ["c", "d"])
    assert table[(0, 0)] == pytest.approx(-1)


@given(
    st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=8, max_size=8),
    st.sampled_from(["BS", "PBS", "DBS"]),
)
def test_photon_number_conserved(cs, kind):
    ca, cb = cs[:4], cs[4:]
    if not any(ca) or not any(cb):
        return
    s = ququart_state(QuquartSpec("a", ca)) * ququart_state(QuquartSpec("b", cb))
    out = apply_element(s, make_element(kind, "a", "b", "c", "d"))
    assert out.degrees() <= {4}


def test_empty_network_is_identity():
    s = basis_state("a", 2)
    assert apply_network(s, Network([], ["a"])) == s


def test_network_rejects_missing_channel():
    with pytest.raises(NetworkError):
        Network([make_dbs("a", "z", "c", "d")], ["a", "b"])


def test_network_rejects_output_clash():
    with pytest.raises(NetworkError):
        Network([make_dbs("a", "b", "c", "x")], ["a", "b", "c"])


def test_network_rejects_stray_state():
    n = Network([make_dbs("a", "b", "c", "d")], ["a", "b"])
    with pytest.raises(NetworkError):
        apply_network(basis_state("q", 0), n)


def test_three_ququart_cascade():
    s = basis_state("a", 0) * (basis_state("b", 0) + basis_state("b", 3)) * (
        basis_state("c", 0) + basis_state("c", 3)
    )
    n = Network([make_dbs("a", "b", "a'", "x"), make_dbs("x", "c", "b'", "c'")], ["a", "b", "c"])
    trace = []
    table = postselect(apply_network(s, n, trace), ["a'", "b'", "c'"])
    assert len(trace) == 2
    assert table.isclose({(0, 0, 0): 1, (0, 2, 1): 1, (2, 1, 0): 1, (2, 3, 1): 1})
    assert table.complete
