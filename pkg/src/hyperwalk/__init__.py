"""Random walks on random uniform hypergraphs.

Sampling of H(n, p), the induced weighted multigraph, the spectrum of its
normalized adjacency, exact hitting/commute/cover-time quantities with
independent cross-checking routes, Monte Carlo estimators, and a batch
verification harness. An HTTP service and a thin CLI sit on top.
"""

__version__ = "0.1.0"

from .errors import (
    AllTrialsTruncatedError,
    ConnectivityNotAchievedError,
    DegenerateGapError,
    DeterministicCheckError,
    DisconnectedInstanceError,
    EigensolverError,
    EnumerationCapError,
    HyperwalkError,
    ParameterError,
    SingularSystemError,
    ZeroDegreeError,
)
from .hypergraph import (
    GenerationParams,
    Hypergraph,
    enumerate_possible_edges,
    from_json,
    generate,
    is_connected,
    to_json,
)
from .projection import (
    Multigraph,
    StationaryDist,
    project,
    stationary,
    transition_matrix,
    two_stage_transition_matrix,
)
from .spectral import (
    Spectrum,
    build_normalized_adjacency,
    decompose,
    spectral_deviation_bound,
    spectrum_residuals,
)
from .walk_times import (
    WalkTimes,
    avg_start_closed_form,
    avg_start_hitting,
    avg_target_closed_form,
    avg_target_hitting,
    commute_time_bounds,
    commute_times,
    commute_times_spectral,
    compute_walk_times,
    cover_time_bounds,
    hitting_time_bounds,
    hitting_times_solve,
    hitting_times_spectral,
)
from .montecarlo import (
    Estimate,
    WalkConfig,
    WalkSimulator,
    estimate_commute,
    estimate_cover,
    estimate_hitting,
)
from .analysis import Tolerances, analyze
from .verify import (
    Bands,
    ExperimentConfig,
    GridPoint,
    McSettings,
    config_from_dict,
    run_verification,
)
