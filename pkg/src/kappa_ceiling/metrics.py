"""Pairwise agreement statistics between two score vectors.

Implements the metric layer everything else builds on: population moments,
Pearson correlation, exact quadratic weighted kappa (QWK), the concordance
attenuation factor, the concordance-based QWK approximation, and the
human-human reference triple (r_H, F_H, kappa_H).

All moments are population moments (divide by N). With that convention the
quadratic weighted kappa of an integer pair has the closed form
``2*cov / (var_a + var_b + (mean_a - mean_b)**2)``, which is exactly the
Pearson correlation multiplied by the attenuation factor. The confusion-matrix
route and the moment route are kept as independent code paths so tests can
check one against the other.

All functions are pure and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateVariance, InsufficientData, ScaleViolation

__all__ = [
    "ScoreScale",
    "PairedScores",
    "MomentSummary",
    "Degenerate",
    "DEGENERATE",
    "HHReference",
    "round_half_away",
    "round_to_scale",
    "moments",
    "pearson",
    "exact_qwk",
    "ccc_factor",
    "ccc_approx_qwk",
    "hh_reference",
]


@dataclass(frozen=True)
class ScoreScale:
    """Inclusive integer score range, e.g. 0..10 for eleven categories."""

    min_score: int
    max_score: int

    def __post_init__(self) -> None:
        if self.max_score <= self.min_score:
            raise ConfigError(
                f"max_score must exceed min_score, got [{self.min_score}, {self.max_score}]"
            )

    @property
    def num_categories(self) -> int:
        return self.max_score - self.min_score + 1

    def contains(self, values: np.ndarray) -> bool:
        return bool(np.all(values >= self.min_score) and np.all(values <= self.max_score))

    def doubled(self) -> "ScoreScale":
        """Scale of the sum of two scores on this scale."""
        return ScoreScale(2 * self.min_score, 2 * self.max_score)


def round_half_away(x: np.ndarray | float) -> np.ndarray:
    """Round to nearest integer, ties away from zero (3.5 -> 4, -3.5 -> -4)."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def round_to_scale(values: np.ndarray | list, scale: ScoreScale) -> np.ndarray:
    """Round half-away and clip into the scale; returns an integer array."""
    rounded = round_half_away(np.asarray(values, dtype=float))
    return np.clip(rounded, scale.min_score, scale.max_score).astype(np.int64)


class Degenerate:
    """Marker for an undefined QWK (zero expected disagreement).

    Returned, never raised: a degenerate kappa inside a sweep must not abort
    the sweep, but silently mapping it to 0 or 1 would corrupt aggregates.
    Use the module-level ``DEGENERATE`` singleton.
    """

    _REASON = "undefined: zero expected disagreement"

    def __repr__(self) -> str:
        return "Degenerate"

    def __str__(self) -> str:
        return self._REASON


DEGENERATE = Degenerate()


@dataclass(frozen=True)
class PairedScores:
    """Two equal-length score vectors on a shared scale.

    Values may be real (e.g. raw model predictions); operations that require
    integers in scale (exact QWK) validate at call time.
    """

    a: np.ndarray
    b: np.ndarray
    scale: ScoreScale

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if self.a.ndim != 1 or self.b.ndim != 1:
            raise ValueError("paired scores must be one-dimensional")
        if len(self.a) != len(self.b):
            raise ValueError(f"length mismatch: {len(self.a)} vs {len(self.b)}")

    def __len__(self) -> int:
        return len(self.a)

    def swapped(self) -> "PairedScores":
        return PairedScores(self.b, self.a, self.scale)


@dataclass(frozen=True)
class MomentSummary:
    """Population means, variances and covariance of a pair."""

    mean_a: float
    mean_b: float
    var_a: float
    var_b: float
    covariance: float


@dataclass(frozen=True)
class HHReference:
    """Correlation, attenuation factor and exact QWK between two rater columns."""

    r_h: float
    f_h: float
    kappa_h: float | Degenerate


def moments(pair: PairedScores) -> MomentSummary:
    """Population moments (1/N) of both vectors and their covariance."""
    if len(pair) < 2:
        raise InsufficientData(f"need at least 2 paired observations, got {len(pair)}")
    a, b = pair.a, pair.b
    mean_a = float(a.mean())
    mean_b = float(b.mean())
    da = a - mean_a
    db = b - mean_b
    return MomentSummary(
        mean_a=mean_a,
        mean_b=mean_b,
        var_a=float((da * da).mean()),
        var_b=float((db * db).mean()),
        covariance=float((da * db).mean()),
    )


def pearson(pair: PairedScores) -> float:
    """Pearson correlation, clamped to [-1, 1] against floating-point overshoot."""
    m = moments(pair)
    if m.var_a <= 0.0 or m.var_b <= 0.0:
        raise DegenerateVariance("correlation undefined: at least one vector is constant")
    r = m.covariance / np.sqrt(m.var_a * m.var_b)
    return float(np.clip(r, -1.0, 1.0))


def _validate_integer_in_scale(values: np.ndarray, scale: ScoreScale, name: str) -> np.ndarray:
    if not np.all(values == np.floor(values)):
        bad = int(np.argmax(values != np.floor(values)))
        raise ScaleViolation(f"{name}[{bad}] = {values[bad]} is not an integer")
    ints = values.astype(np.int64)
    if not scale.contains(ints):
        bad = int(np.argmax((ints < scale.min_score) | (ints > scale.max_score)))
        raise ScaleViolation(
            f"{name}[{bad}] = {ints[bad]} outside scale [{scale.min_score}, {scale.max_score}]"
        )
    return ints


def exact_qwk(pair: PairedScores) -> float | Degenerate:
    """Exact quadratic weighted kappa over the declared scale.

    kappa = 1 - sum(w*O) / sum(w*E) with category index c = score - min_score,
    weights w[i,j] = (i-j)^2 / (K-1)^2, O the joint frequency matrix
    (normalized) and E the outer product of the two marginals. Returns the
    ``DEGENERATE`` marker when the expected disagreement is zero (both
    vectors constant), which has no meaningful numeric value.
    """
    if len(pair) < 2:
        raise InsufficientData(f"need at least 2 paired observations, got {len(pair)}")
    a = _validate_integer_in_scale(pair.a, pair.scale, "a")
    b = _validate_integer_in_scale(pair.b, pair.scale, "b")
    k = pair.scale.num_categories
    ai = a - pair.scale.min_score
    bi = b - pair.scale.min_score

    observed = np.zeros((k, k), dtype=float)
    np.add.at(observed, (ai, bi), 1.0)
    observed /= len(pair)
    marginal_a = observed.sum(axis=1)
    marginal_b = observed.sum(axis=0)
    expected = np.outer(marginal_a, marginal_b)

    idx = np.arange(k, dtype=float)
    weights = (idx[:, None] - idx[None, :]) ** 2 / (k - 1) ** 2

    denom = float((weights * expected).sum())
    if denom == 0.0:
        return DEGENERATE
    return 1.0 - float((weights * observed).sum()) / denom


def ccc_factor(m: MomentSummary) -> float:
    """Concordance attenuation factor 2*sd_a*sd_b / (var_a + var_b + (mean_a-mean_b)^2).

    Always in [0, 1]; equals 1 iff the two vectors share mean and variance.
    """
    denom = m.var_a + m.var_b + (m.mean_a - m.mean_b) ** 2
    if denom <= 0.0:
        raise DegenerateVariance("attenuation factor undefined: zero moment denominator")
    return float(2.0 * np.sqrt(m.var_a) * np.sqrt(m.var_b) / denom)


def ccc_approx_qwk(pair: PairedScores) -> float:
    """Concordance-based QWK approximation: pearson(pair) * ccc_factor(moments(pair)).

    Accepts real-valued vectors, so it can approximate the QWK of an
    unquantized prediction against a quantized target.
    """
    return pearson(pair) * ccc_factor(moments(pair))


def hh_reference(x1: np.ndarray, x2: np.ndarray, scale: ScoreScale) -> HHReference:
    """Human-human reference triple for two rater columns.

    r_H is the Pearson correlation of the columns, F_H the attenuation
    factor of their moments, and kappa_H the exact QWK (not the
    approximation; their near-identity is a tested property, not an input
    assumption).
    """
    pair = PairedScores(x1, x2, scale)
    r_h = pearson(pair)
    f_h = ccc_factor(moments(pair))
    kappa_h = exact_qwk(pair)
    return HHReference(r_h=r_h, f_h=f_h, kappa_h=kappa_h)
