"""Discrete chaotic map built on a G4FET-NDR surrogate: oscillators,
bifurcation and Lyapunov analysis, chaos-based logic gates and
functionality-space counts."""

from .analysis import (
    BifurcationData,
    LyapunovCurve,
    SweepSpec,
    bifurcation_sweep,
    chaos_onset,
    classify_regions,
    first_flip,
    lyapunov_exponent,
    lyapunov_sweep,
    orbit_period,
)
from .chaogate import (
    MNEMONICS,
    DacSpec,
    GateConfig,
    SearchGrid,
    SearchResult,
    comparator,
    dac_encode,
    encode_function,
    gate_function,
    gate_trace,
    noise_margin,
    parse_function,
    search_configurations,
)
from .errors import (
    ClippingWarning,
    ConfigurationError,
    DomainError,
    ExtrapolationError,
    NotConjugateError,
    TableParseError,
)
from .funcspace import SpaceParams, compare_spaces, f1, f2, f3, f4
from .maps import (
    GnmParams,
    GnmSurrogate,
    Interval,
    Logistic,
    Sine,
    SurrogateConstants,
    Tabulated,
    Tent,
    eval_map,
    gnm_effective_r,
    gnm_map,
    identity_map,
    load_tabulated,
    map_derivative,
)
from .oscillator import BufferFeedback, MapFeedback, Orbit, Schedule, iterate, iterate_scheduled

__version__ = "0.1.0"
