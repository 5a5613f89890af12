"""Upper-bound rate calculator for the single-relay Gaussian channel.

Computes the cutset bound with optimized source-relay correlation,
amplify-and-forward and maximal-ratio-combining rates, the direct-link
baseline, and the two-hop power allocation; runs relay-position sweeps and
emits them as CSV rate curves.
"""

from .capacity_bounds import (
    AfMrcComparison,
    AfResult,
    BindingTerm,
    CutsetResult,
    af_beta_max,
    af_capacity,
    af_mrc_predicates,
    cutset_bound,
    cutset_terms,
    direct_capacity,
    evaluate_af,
    mrc_capacity,
    rho_numeric_search,
    rho_star,
)
from .errors import (
    ConfigParseError,
    DegenerateConditioningError,
    DegenerateSourceError,
    InfeasibleRelayError,
    ParameterDomainError,
    PowerLimitError,
    RelayCapError,
    UsageError,
)
from .gaussian_stats import (
    XR,
    XS,
    YD,
    YR,
    JointGaussianSystem,
    LabeledCovariance,
    assemble_covariance,
    conditional_covariance,
    gaussian_mutual_information,
)
from .link_model import (
    LinkGains,
    NodeGeometry,
    PathLossParams,
    PowerBudget,
    capacity_of_snr,
    gains_from_geometry,
    path_gain,
    snr,
)
from .power_alloc import AllocationResult, two_hop_allocate, two_hop_brute_force
from .sweep import (
    SweepReport,
    SweepResult,
    SweepRow,
    SweepSpec,
    analyze_sweep,
    emit_csv,
    evaluate_position,
    preset_scenarios,
    run_sweep,
)

__version__ = "0.1.0"
