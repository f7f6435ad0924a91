"""Deterministic Monte Carlo validation of the QWK ceilings.

Two experiments:

* a noise sweep: at each rater noise level, generate latent true scores and
  two noisy integer rater scores per response, build the rounded-mean target,
  and compare the ideal model's observed agreement against the estimated
  ceilings, averaged over many trials;
* a concordance-approximation check: the same generator with the noise level
  drawn uniformly per trial, recording (kappa_ccc, kappa_true) pairs and
  their mean absolute error.

Generation convention: the latent true score is carried as a real value
(normal draw clipped into the scale). Rater scores round and clip the noisy
true value to integers. The ideal model predicts the true score itself; its
correlation with the target is computed on the raw values while its QWK, an
integer-only statistic, quantizes the predictions onto the scale first, the
same round-and-clip protocol used when evaluating real model predictions.
That asymmetry is what gives the concordance check a genuinely nonzero
quantization error to measure.

RNG contract: numpy's PCG64 ``Generator``. The per-trial substream is
``SeedSequence([seed, stream_tag, level_index, trial_index])`` with stream
tag 0 for the noise sweep and 1 for the concordance check; Gaussian draws
use ``Generator.normal`` (ziggurat). Within a trial the draw order is fixed:
(concordance check only: the noise level), true scores, rater-1 errors,
rater-2 errors, then, if enabled, the simulated human-like rater's errors.
Identical (seed, config) therefore give bit-identical results regardless of
execution order; aggregation sums in ascending trial order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateVariance
from .metrics import (
    Degenerate,
    PairedScores,
    ScoreScale,
    ccc_approx_qwk,
    exact_qwk,
    pearson,
    round_half_away,
    round_to_scale,
)
from .reliability import RaterMatrix, ceiling_report

__all__ = [
    "DEFAULT_SEED",
    "SimulationConfig",
    "TrialResult",
    "NoiseLevelAggregate",
    "AggregateResult",
    "CccCheckResult",
    "TARGET_RULES",
    "build_target",
    "generate_true_scores",
    "generate_rater_scores",
    "trial_stream",
    "run_trial",
    "run_noise_sweep",
    "run_ccc_check",
]

DEFAULT_SEED = 42

SWEEP_STREAM = 0
CCC_CHECK_STREAM = 1

TARGET_RULES = ("rounded_mean", "mean", "sum")


@dataclass(frozen=True)
class SimulationConfig:
    """Full parameterization of both experiments."""

    n: int = 1000
    scale: ScoreScale = ScoreScale(0, 10)
    true_mean: float = 5.0
    true_sd: float = 3.3
    noise_levels: tuple[float, ...] = (0.25, 0.50, 1.00, 2.00, 3.00)
    trials: int = 100
    seed: int = DEFAULT_SEED
    ccc_noise_lower: float = 0.1
    ccc_noise_upper: float = 5.0
    simulate_human_like: bool = False

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ConfigError(f"n must be at least 2, got {self.n}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if self.true_sd <= 0.0:
            raise ConfigError(f"true_sd must be positive, got {self.true_sd}")
        if not self.noise_levels:
            raise ConfigError("noise_levels must be non-empty")
        if any(s <= 0.0 for s in self.noise_levels):
            raise ConfigError(f"every noise level must be positive, got {self.noise_levels}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0.0 < self.ccc_noise_lower < self.ccc_noise_upper:
            raise ConfigError(
                "concordance-check noise range must satisfy 0 < lower < upper, "
                f"got ({self.ccc_noise_lower}, {self.ccc_noise_upper})"
            )
        object.__setattr__(self, "noise_levels", tuple(float(s) for s in self.noise_levels))


@dataclass(frozen=True)
class TrialResult:
    """Per-trial metrics of one generated dataset."""

    sigma_noise: float
    r_true: float
    kappa_true: float
    kappa_max_hat: float
    kappa_hl_hat: float
    kappa_h_hat: float
    kappa_ccc: float
    ccc_error: float
    kappa_humanlike_empirical: float | None = None
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class NoiseLevelAggregate:
    """Arithmetic means of every trial metric at one noise level."""

    sigma_noise: float
    r_true: float
    kappa_true: float
    kappa_max_hat: float
    kappa_hl_hat: float
    kappa_h_hat: float
    kappa_ccc: float
    ccc_error: float
    kappa_humanlike_empirical: float | None = None


@dataclass(frozen=True)
class AggregateResult:
    """Noise-sweep means per level, plus run identity."""

    levels: tuple[NoiseLevelAggregate, ...]
    trials: int
    seed: int
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class CccCheckResult:
    """(kappa_ccc, kappa_true) scatter points and their mean absolute error."""

    points: tuple[tuple[float, float], ...]
    mae: float
    trials: int
    seed: int
    warnings: tuple[str, ...] = ()


def trial_stream(
    seed: int, stream_tag: int, level_index: int, trial_index: int
) -> np.random.Generator:
    """Independent per-trial generator; see the module docstring for the contract."""
    return np.random.default_rng(
        np.random.SeedSequence([seed, stream_tag, level_index, trial_index])
    )


def generate_true_scores(
    n: int,
    scale: ScoreScale,
    true_mean: float,
    true_sd: float,
    stream: np.random.Generator,
) -> np.ndarray:
    """Latent true scores: normal draws clipped into the scale, kept real-valued.

    Quantization onto the integer scale happens where integers are required
    (rater scores, QWK evaluation), via ``round_to_scale``.
    """
    raw = stream.normal(true_mean, true_sd, n)
    return np.clip(raw, scale.min_score, scale.max_score)


def generate_rater_scores(
    true_scores: np.ndarray,
    sigma_noise: float,
    scale: ScoreScale,
    stream: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Two independent noisy integer ratings of the true scores.

    Each rater adds an independent N(0, sigma_noise^2) error to the true
    value, then rounds half-away and clips into the scale. Rater 1's error
    vector is drawn before rater 2's.
    """
    n = len(true_scores)
    x1 = round_to_scale(true_scores + stream.normal(0.0, sigma_noise, n), scale)
    x2 = round_to_scale(true_scores + stream.normal(0.0, sigma_noise, n), scale)
    return x1, x2


def build_target(x1: np.ndarray, x2: np.ndarray, rule: str) -> np.ndarray:
    """Combine two rater score vectors into a target variable.

    rounded_mean: per-element mean rounded half-away from zero (ties occur
    whenever x1+x2 is odd). mean: exact mean, may be half-integer. sum:
    plain sum; its natural scale is the doubled input scale.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if len(x1) != len(x2):
        raise ValueError(f"rater columns differ in length: {len(x1)} vs {len(x2)}")
    if rule == "rounded_mean":
        return round_half_away((x1 + x2) / 2.0).astype(np.int64)
    if rule == "mean":
        return (x1 + x2) / 2.0
    if rule == "sum":
        return (x1 + x2).astype(np.int64)
    raise ConfigError(f"unknown target rule {rule!r}; expected one of {TARGET_RULES}")


def _evaluate_trial(
    config: SimulationConfig,
    sigma_noise: float,
    stream: np.random.Generator,
) -> TrialResult:
    scale = config.scale
    warnings: list[str] = []

    true_scores = generate_true_scores(
        config.n, scale, config.true_mean, config.true_sd, stream
    )
    x1, x2 = generate_rater_scores(true_scores, sigma_noise, scale, stream)
    target = build_target(x1, x2, "rounded_mean")

    ideal_integer = round_to_scale(true_scores, scale)
    r_true = _metric(
        lambda: pearson(PairedScores(true_scores, target, scale)), "r_true", warnings
    )
    kappa_true = _metric(
        lambda: exact_qwk(PairedScores(ideal_integer, target, scale)), "kappa_true", warnings
    )
    kappa_ccc = _metric(
        lambda: ccc_approx_qwk(PairedScores(true_scores, target, scale)), "kappa_ccc", warnings
    )

    try:
        report = ceiling_report(RaterMatrix(x1, x2, scale))
        warnings.extend(report.warnings)
        kappa_max = report.kappa_max
        kappa_hl = report.kappa_hl
        kappa_h = math.nan if isinstance(report.kappa_h, Degenerate) else report.kappa_h
    except DegenerateVariance as exc:
        warnings.append(f"ceiling estimation degenerate: {exc}")
        kappa_max = kappa_hl = kappa_h = math.nan

    kappa_humanlike = None
    if config.simulate_human_like:
        humanlike = round_to_scale(
            true_scores + stream.normal(0.0, sigma_noise, config.n), scale
        )
        kappa_humanlike = _metric(
            lambda: exact_qwk(PairedScores(humanlike, target, scale)),
            "kappa_humanlike_empirical",
            warnings,
        )

    return TrialResult(
        sigma_noise=float(sigma_noise),
        r_true=r_true,
        kappa_true=kappa_true,
        kappa_max_hat=kappa_max,
        kappa_hl_hat=kappa_hl,
        kappa_h_hat=kappa_h,
        kappa_ccc=kappa_ccc,
        ccc_error=kappa_true - kappa_ccc,
        kappa_humanlike_empirical=kappa_humanlike,
        warnings=tuple(warnings),
    )


def _metric(compute, name: str, warnings: list[str]) -> float:
    """Degenerate metrics become NaN + warning so the trial is still returned."""
    try:
        value = compute()
    except DegenerateVariance as exc:
        warnings.append(f"{name} degenerate: {exc}")
        return math.nan
    if isinstance(value, Degenerate):
        warnings.append(f"{name} is {value}")
        return math.nan
    return value


def run_trial(
    config: SimulationConfig,
    sigma_noise: float,
    trial_index: int,
    level_index: int = 0,
) -> TrialResult:
    """One noise-sweep trial on its own substream; bit-reproducible."""
    stream = trial_stream(config.seed, SWEEP_STREAM, level_index, trial_index)
    return _evaluate_trial(config, sigma_noise, stream)


def run_noise_sweep(config: SimulationConfig) -> AggregateResult:
    """The full trials-by-noise-levels grid, aggregated per level.

    Means are accumulated in ascending trial-index order at each level, so
    results do not depend on how trials are scheduled.
    """
    levels = []
    warnings: list[str] = []
    for level_index, sigma_noise in enumerate(config.noise_levels):
        trials = [
            run_trial(config, sigma_noise, trial_index, level_index)
            for trial_index in range(config.trials)
        ]
        for trial_index, trial in enumerate(trials):
            warnings.extend(
                f"sigma={sigma_noise} trial={trial_index}: {w}" for w in trial.warnings
            )
        levels.append(
            NoiseLevelAggregate(
                sigma_noise=float(sigma_noise),
                r_true=_mean(trials, "r_true"),
                kappa_true=_mean(trials, "kappa_true"),
                kappa_max_hat=_mean(trials, "kappa_max_hat"),
                kappa_hl_hat=_mean(trials, "kappa_hl_hat"),
                kappa_h_hat=_mean(trials, "kappa_h_hat"),
                kappa_ccc=_mean(trials, "kappa_ccc"),
                ccc_error=_mean(trials, "ccc_error"),
                kappa_humanlike_empirical=(
                    _mean(trials, "kappa_humanlike_empirical")
                    if config.simulate_human_like
                    else None
                ),
            )
        )
    return AggregateResult(
        levels=tuple(levels),
        trials=config.trials,
        seed=config.seed,
        warnings=tuple(warnings),
    )


def _mean(trials: list[TrialResult], fieldname: str) -> float:
    total = 0.0
    for trial in trials:
        total += getattr(trial, fieldname)
    return total / len(trials)


def run_ccc_check(config: SimulationConfig) -> CccCheckResult:
    """Concordance-approximation accuracy with per-trial uniform noise levels.

    Each trial draws sigma_noise ~ U(lower, upper) from its substream first,
    then runs the standard generator and records
    (kappa_ccc, kappa_true); mae is the mean of |kappa_true - kappa_ccc|.
    """
    points = []
    warnings: list[str] = []
    abs_error_total = 0.0
    for trial_index in range(config.trials):
        stream = trial_stream(config.seed, CCC_CHECK_STREAM, 0, trial_index)
        sigma_noise = float(stream.uniform(config.ccc_noise_lower, config.ccc_noise_upper))
        trial = _evaluate_trial(config, sigma_noise, stream)
        warnings.extend(f"trial={trial_index}: {w}" for w in trial.warnings)
        points.append((trial.kappa_ccc, trial.kappa_true))
        abs_error_total += abs(trial.ccc_error)
    return CccCheckResult(
        points=tuple(points),
        mae=abs_error_total / config.trials,
        trials=config.trials,
        seed=config.seed,
        warnings=tuple(warnings),
    )
