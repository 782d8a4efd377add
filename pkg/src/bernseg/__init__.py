"""Nonparametric multiple change-point detection for multivariate series.

Observations are encoded into Bernoulli sequences, each sequence is
segmented by a penalized-likelihood merging search, and the per-sequence
results are aggregated through constrained clustering, weighting, and
stability selection.
"""

from ._accel import NUMBA_ENABLED
from .aggregate import (
    MultiCPResult,
    RateMatrix,
    build_rate_matrix,
    constrained_hclust,
    g_statistic,
    max_chisq_scan,
)
from .bernoulli import (
    RecurrenceSeq,
    Segmentation,
    algorithm1,
    encode_recurrence,
    penalized_loss,
    segment_rates,
)
from .encode import (
    EncodedBundle,
    EncodingSpec,
    Series,
    encode,
    kmeans_encode,
    pattern_encode,
    quantile_encode,
)
from .pipeline import detect_known_k, penalty_value, stability_detect
from .simulate import (
    ExperimentCell,
    Gaussian,
    GaussianCorr,
    ScenarioSpec,
    StudentT,
    ari,
    generate,
    labels_from_change_points,
    run_experiment,
    true_change_points,
)
from .stability import (
    ErrorBoundInputs,
    SelectionProfile,
    bin_profile,
    connected_windows,
    local_maxima,
    selection_profile,
    selection_set,
    smooth_profile,
    theorem3_bounds,
    threshold_select,
)
from .weighting import (
    IterativeWeightsResult,
    apply_weights,
    iterative_weights,
    membership_entropy,
    scale_map,
    simple_weights,
)

__version__ = "0.1.0"
