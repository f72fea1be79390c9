"""Interference of partially distinguishable identical particles on linear multiports."""

from ._backend import BACKEND
from .distinguishability import (
    DISCONNECTED,
    DistinguishabilityGraph,
    GramMatrix,
    check_cycle_bound,
    circle_dance_gram,
    circle_dance_states,
    collective_phase,
    cycle_weight,
    gershgorin_sufficient,
    gram_from_states,
    is_positive_semidefinite,
    n4_circle_sufficient,
    states_from_gram,
    triad_basis,
    triad_basis_decompose,
)
from .errors import (
    CertificateError,
    CollphaseError,
    ConfigError,
    ConsistencyError,
    DimensionError,
    DisconnectedError,
    NotUnitaryError,
    PauliExclusionError,
    PovmError,
    RealizabilityError,
    SizeLimitError,
    UnsupportedCaseError,
)
from .interference import *  # noqa: F401,F403
from .permgroup import (
    CycleDecomposition,
    Permutation,
    compose,
    count_r_cycles,
    cycle_decompose,
    enumerate_permutations,
    inverse,
    signature,
)
from .states import (
    GaussianPhotonSpec,
    MixedState,
    PureState,
    circle_dance_gaussian_params,
    four_particle_phase_gaussian,
    gaussian_overlap,
    overlap,
    trace_product,
)

__version__ = "0.1.0"
