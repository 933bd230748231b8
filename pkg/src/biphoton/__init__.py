"""Linear-optical entangling schemes for biphoton ququarts.

States are polynomials in creation operators (:mod:`biphoton.fock`),
optical elements are substitutions (:mod:`biphoton.elements`), SPDC
sources provide the inputs (:mod:`biphoton.sources`) and coincidence
postselection reads out ququart amplitudes (:mod:`biphoton.postselection`).
:mod:`biphoton.tensor` re-derives four-photon results with explicit
256-dimensional matrices.
"""

from .elements import (
    ElementMap,
    Network,
    NetworkError,
    apply_element,
    apply_network,
    make_bs,
    make_dbs,
    make_element,
    make_pbs,
    make_waveplate,
)
from .fock import Freq, Mode, Monomial, OperatorState, Pol, canonicalize, filter_by_degree, multiply
from .postselection import (
    CoincidencePattern,
    QuquartAmplitudeTable,
    classify_all,
    classify_amplitudes,
    decode,
    efficiency_ratio,
    encode,
    measure_polarization,
    postselect,
    postselect_general,
)
from .sources import QuquartSpec, SpdcExpansion, basis_state, joint_input, ququart_state, spdc_state

__version__ = "0.1.0"
