"""Phase-space distributions and non-classicality indicators.

Evaluates Wigner, Husimi and Rivier distribution functions for finite
superpositions of Fock and squeezed-Fock states (one or two modes), and
computes the negativity-volume indicator delta, the interference
indicator eta, and the Von Neumann entanglement entropy.
"""

from .errors import (
    DegenerateStateError,
    DomainError,
    GridCoverageError,
    PhaseSpaceError,
    QuadratureError,
    ResourceBudgetError,
    StateFormatError,
    UnsupportedStateError,
)
from .grids import Axis, ModeAxes, PhaseGrid
from .indicators import (
    IndicatorResult,
    SweepRow,
    delta_indicator,
    eta_indicator,
    sweep_a,
    sweep_r,
    von_neumann_entropy,
)
from .phasespace import (
    Representation,
    build_term_table,
    cross_wigner_fock_closed,
    cross_wigner_numeric,
    default_grid,
    husimi_term,
    rivier_term,
)
from .quadrature import (
    QuadratureResult,
    abs_integral_4d_streamed,
    abs_integral_separable,
    integrate_2d,
    refine_until,
)
from .specialfn import assoc_laguerre, hermite_phys, log_factorial
from .states import (
    Primitive,
    SingleModeState,
    TwoModeState,
    entangled_state,
    fock,
    fock_psi,
    momentum_wavefunction,
    normalize,
    overlap,
    squeezed_excited_superposition,
    squeezed_fock,
    squeezed_fock_psi,
    squeezed_vacuum_superposition,
    state_from_json,
    state_to_dict,
)

__version__ = "0.1.0"
