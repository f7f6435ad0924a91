"""One-way random-effects reliability estimation and QWK ceilings.

The estimation chain is: two-rater score matrix -> one-way ANOVA mean
squares -> intraclass correlations (single-measure rho_1, average-measure
rho_Y) -> ceiling values. ``kappa_max = sqrt(rho_Y)`` is the QWK an
error-free predictor of the latent true score can reach against the noisy
two-rater target; ``kappa_hl = sqrt(rho_1 * rho_Y)`` is the QWK a predictor
with single-rater error variance can reach. The human-human QWK of the two
columns is reported alongside as a conservative reference.

Formulas are written for a general rater count k so the step-up identity
between the two ICCs can be exercised, but the public ingestion path is
fixed to two raters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateVariance, InsufficientData, ScaleViolation
from .metrics import (
    DEGENERATE,
    Degenerate,
    HHReference,
    ScoreScale,
    hh_reference,
)

__all__ = [
    "RaterMatrix",
    "AnovaSummary",
    "ReliabilityEstimates",
    "CeilingReport",
    "oneway_anova",
    "icc_single",
    "icc_average",
    "reliability_estimates",
    "theoretical_ceiling",
    "human_like_ceiling",
    "ceiling_report",
]

MIN_RESPONSES = 3


@dataclass(frozen=True)
class RaterMatrix:
    """N responses by two integer rater scores on a shared scale."""

    x1: np.ndarray
    x2: np.ndarray
    scale: ScoreScale

    def __post_init__(self) -> None:
        for name, col in (("x1", self.x1), ("x2", self.x2)):
            values = np.asarray(col, dtype=float)
            if not np.all(values == np.floor(values)):
                raise ScaleViolation(f"rater column {name} must contain integers")
            object.__setattr__(self, name, values.astype(np.int64))
        if len(self.x1) != len(self.x2):
            raise ValueError(f"rater columns differ in length: {len(self.x1)} vs {len(self.x2)}")
        if len(self.x1) < MIN_RESPONSES:
            raise InsufficientData(
                f"need at least {MIN_RESPONSES} responses for ANOVA, got {len(self.x1)}"
            )
        for name, col in (("rater 1", self.x1), ("rater 2", self.x2)):
            if not self.scale.contains(col):
                raise ScaleViolation(f"{name} scores fall outside scale "
                                     f"[{self.scale.min_score}, {self.scale.max_score}]")

    def __len__(self) -> int:
        return len(self.x1)

    @property
    def n_raters(self) -> int:
        return 2


@dataclass(frozen=True)
class AnovaSummary:
    """One-way ANOVA mean squares: msb between responses, msw within."""

    msb: float
    msw: float
    n: int
    k: int


@dataclass(frozen=True)
class ReliabilityEstimates:
    """Single- and average-measure ICC estimates with their mean squares.

    Raw (possibly negative) ICC values are reported for diagnostic honesty;
    ``clamped`` flags that a ceiling computed from them will clamp at zero.
    """

    rho_1: float
    rho_Y: float
    anova: AnovaSummary
    clamped: bool


@dataclass(frozen=True)
class CeilingReport:
    """Both ceilings plus the human-human reference for one dataset."""

    kappa_max: float
    kappa_hl: float
    kappa_h: float | Degenerate
    r_h: float
    f_h: float
    reliability: ReliabilityEstimates
    warnings: tuple[str, ...] = field(default=())


def oneway_anova(m: RaterMatrix) -> AnovaSummary:
    """Between- and within-response mean squares of the score matrix.

    msb = k * sum((row_mean - grand_mean)^2) / (n-1)
    msw = sum((x - row_mean)^2) / (n*(k-1))
    """
    x = np.column_stack([m.x1, m.x2]).astype(float)
    n, k = x.shape
    row_means = x.mean(axis=1)
    grand_mean = x.mean()
    msb = k * float(((row_means - grand_mean) ** 2).sum()) / (n - 1)
    msw = float(((x - row_means[:, None]) ** 2).sum()) / (n * (k - 1))
    return AnovaSummary(msb=msb, msw=msw, n=n, k=k)


def icc_single(a: AnovaSummary) -> float:
    """ICC(1,1): reliability of a single rater's score.

    (msb - msw) / (msb + (k-1)*msw); negative when msw > msb (raw value is
    returned, clamping is the ceiling layer's job).
    """
    denom = a.msb + (a.k - 1) * a.msw
    if denom <= 0.0:
        raise DegenerateVariance("ICC(1,1) undefined: zero total mean square")
    return (a.msb - a.msw) / denom

def icc_average(a: AnovaSummary) -> float:
    """ICC(1,k): reliability of the k-rater average, (msb - msw) / msb.

    Equals the k-fold step-up k*rho_1 / (1 + (k-1)*rho_1) of ``icc_single``
    algebraically.
    """
    if a.msb <= 0.0:
        raise DegenerateVariance("ICC(1,k) undefined: zero between-response mean square")
    return (a.msb - a.msw) / a.msb


def reliability_estimates(m: RaterMatrix) -> ReliabilityEstimates:
    """ANOVA plus both ICCs; flags whether ceilings will clamp."""
    a = oneway_anova(m)
    rho_1 = icc_single(a)
    rho_Y = icc_average(a)
    return ReliabilityEstimates(
        rho_1=rho_1,
        rho_Y=rho_Y,
        anova=a,
        clamped=(rho_1 < 0.0 or rho_Y < 0.0),
    )


def theoretical_ceiling(r: ReliabilityEstimates) -> float:
    """sqrt(rho_Y), clamping a negative estimate to zero."""
    return float(np.sqrt(max(r.rho_Y, 0.0)))


def human_like_ceiling(r: ReliabilityEstimates) -> float:
    """sqrt(rho_1 * rho_Y), clamping negative estimates to zero."""
    return float(np.sqrt(max(r.rho_1, 0.0) * max(r.rho_Y, 0.0)))


def ceiling_report(m: RaterMatrix) -> CeilingReport:
    """Assemble ANOVA, ICCs, both ceilings and the human-human reference."""
    estimates = reliability_estimates(m)
    warnings: list[str] = []
    if estimates.rho_1 < 0.0:
        warnings.append(
            f"single-rater reliability estimate is negative ({estimates.rho_1:.6f}); "
            "clamped to 0 in ceilings"
        )
    if estimates.rho_Y < 0.0:
        warnings.append(
            f"average-score reliability estimate is negative ({estimates.rho_Y:.6f}); "
            "clamped to 0 in ceilings"
        )
    ref = hh_reference(m.x1, m.x2, m.scale)
    if isinstance(ref.kappa_h, Degenerate):
        warnings.append(f"human-human QWK is {ref.kappa_h}")
    return CeilingReport(
        kappa_max=theoretical_ceiling(estimates),
        kappa_hl=human_like_ceiling(estimates),
        kappa_h=ref.kappa_h,
        r_h=ref.r_h,
        f_h=ref.f_h,
        reliability=estimates,
        warnings=tuple(warnings),
    )
