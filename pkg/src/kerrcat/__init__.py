"""Simulation of conditional cat-state preparation from two self-Kerr states."""

from .coherent import (
    FockVector,
    SingleModeState,
    TwoModeState,
    coherent_overlap,
    fock_expansion,
    inner_product,
    quadrature_wavefunction,
    state_fidelity,
    state_norm,
)
from .errors import (
    DegenerateOutcomeError,
    DomainError,
    GridCoverageError,
    KerrCatError,
    NumericalError,
    TruncationError,
    UnrecognizedAmplitudeError,
)
from .kerr import KERR_CONVENTION, KerrCoefficients, SchemeConfig, kerr_coefficients, kerr_evolution_oracle, kerr_state
from .scheme import (
    ConditionalResult,
    CSSLabel,
    beam_splitter,
    condition_on_quadrature,
    css_decompose,
    css_state,
    prepare,
    sample_homodyne,
    target_peak_quadrature,
)
from .analysis import (
    RadiiReport,
    ScanPoint,
    circle_radii,
    decay_profile,
    find_vacuum_zeros,
    mode3_separability,
    scan_vacuum,
)
from .phase_space import GridSpec, WignerGrid, constellation, wigner

__version__ = "0.1.0"
