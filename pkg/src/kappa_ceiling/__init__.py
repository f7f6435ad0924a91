"""Rater-agreement analytics: reliability-based QWK ceilings for scoring benchmarks.

Estimates classical-test-theory reliability from two-rater score data,
derives the theoretical and human-like QWK ceilings, evaluates model
predictions against them, and reproduces the validating simulations
deterministically. Served over HTTP by ``kappa_ceiling.service`` and from
the command line by ``kappa-ceiling``.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateVariance,
    InsufficientData,
    KappaCeilingError,
    ParseError,
    ScaleViolation,
    SchemaError,
)
from .metrics import (
    DEGENERATE,
    Degenerate,
    HHReference,
    MomentSummary,
    PairedScores,
    ScoreScale,
    ccc_approx_qwk,
    ccc_factor,
    exact_qwk,
    hh_reference,
    moments,
    pearson,
    round_half_away,
    round_to_scale,
)
from .reliability import (
    AnovaSummary,
    CeilingReport,
    RaterMatrix,
    ReliabilityEstimates,
    ceiling_report,
    icc_average,
    icc_single,
    oneway_anova,
    reliability_estimates,
    theoretical_ceiling,
    human_like_ceiling,
)
from .simulation import (
    DEFAULT_SEED,
    AggregateResult,
    CccCheckResult,
    NoiseLevelAggregate,
    SimulationConfig,
    TrialResult,
    build_target,
    generate_rater_scores,
    generate_true_scores,
    run_ccc_check,
    run_noise_sweep,
    run_trial,
)
from .dataset_io import (
    DatasetSpec,
    EvaluationResult,
    LoadedDataset,
    evaluate_predictions,
    load_csv,
    load_csv_text,
    read_dataset_config,
)
