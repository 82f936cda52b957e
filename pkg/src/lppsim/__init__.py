"""Directed last-passage growth, competition interfaces, and exclusion couplings.

A simulation library and CLI for the corner growth model with unit-rate
exponential weights: passage times and geodesics, the three-cluster
decomposition and its survival statistics, the two competition
interfaces, event-driven exclusion processes (plain, multi-type, fully
labeled), and the exact couplings tying them together, verified by
Monte Carlo and exact replay suites.
"""

from .errors import (
    AbsentLabelError,
    DimensionTooSmallError,
    HorizonExceedsWindowError,
    InvalidGapError,
    NotDownClosedError,
    TooManyPathsError,
    WindowExhaustedError,
    WindowTooSmallError,
)
from .exclusion import (
    HOLE,
    Configuration,
    RostLabeling,
    TaggedPairTrack,
    Trajectory,
    basic_couple,
    border_to_config,
    identity_multi,
    make_initial,
    overtake_time,
    position_of,
    psi,
    rost_tasep,
    simulate,
    step_tasep,
    tagged_pairs,
    three_type_from_tagged,
    three_type_initial,
    two_pair_tasep,
    verify_three_type_coupling,
)
from .experiments import (
    DensityRecords,
    Estimate,
    NLawResult,
    VerificationReport,
    coexistence_sweep,
    coexistence_target,
    density_profile,
    estimate_N_law,
    estimate_coexistence,
    estimate_conditional_coexistence,
    estimate_overtake,
    log2_series_check,
    overtake_sweep,
    verify_couplings,
)
from .interfaces import (
    InterfaceTrace,
    LabelCoordinates,
    angles,
    label_coordinates,
    meeting_index,
    trace_interfaces,
)
from .lpp import (
    LABEL_CENTER,
    LABEL_NONE,
    LABEL_RIGHT,
    LABEL_UP,
    AlphaProfile,
    CoexistenceStatus,
    PassageGrid,
    alpha_profile,
    brute_force_passage_time,
    coexistence_status,
    early_death_test,
    geodesic,
    passage_times,
    scan_alpha,
)
from .rng import Seed, substream
from .weights import WeightField, compute_N, sample_conditioned_on_N, sample_field

__version__ = "0.1.0"
