"""Pydantic request/response models for the HTTP service.

Response field names follow the domain types one-to-one, so the JSON body
of a response is exactly the structured report document the CLI renders.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

from ..simulation import DEFAULT_SEED


class ScaleModel(BaseModel):
    min_score: int
    max_score: int


class AnalyzeRequest(BaseModel):
    """Two-rater dataset shipped as delimited text plus its schema."""

    csv_text: str
    column_r1: str
    column_r2: str
    scale: ScaleModel
    target_rule: str = "rounded_mean"
    missing_policy: str = "reject"
    delimiter: str = ","
    source: str = "<inline>"


class EvaluateRequest(AnalyzeRequest):
    """Analyze plus a model-prediction column to score against the ceilings."""

    column_prediction: str
    round_predictions: bool = True


class SweepRequest(BaseModel):
    """Noise-sweep simulation parameters (defaults reproduce the reference run)."""

    n: int = 1000
    scale: ScaleModel = Field(default_factory=lambda: ScaleModel(min_score=0, max_score=10))
    true_mean: float = 5.0
    true_sd: float = 3.3
    noise_levels: list[float] = Field(default_factory=lambda: [0.25, 0.50, 1.00, 2.00, 3.00])
    trials: int = 100
    seed: int = DEFAULT_SEED
    simulate_human_like: bool = False


class CccCheckRequest(BaseModel):
    """Concordance-approximation check parameters."""

    n: int = 1000
    scale: ScaleModel = Field(default_factory=lambda: ScaleModel(min_score=0, max_score=10))
    true_mean: float = 5.0
    true_sd: float = 3.3
    trials: int = 100
    seed: int = DEFAULT_SEED
    ccc_noise_lower: float = 0.1
    ccc_noise_upper: float = 5.0


class AnovaModel(BaseModel):
    msb: float
    msw: float
    n: int
    k: int


class ReliabilityModel(BaseModel):
    rho_1: float
    rho_Y: float
    clamped: bool
    anova: AnovaModel


class CeilingsModel(BaseModel):
    kappa_max: float
    kappa_hl: float
    kappa_h: float | None
    r_h: float
    f_h: float
    reliability: ReliabilityModel


class EvaluationModel(BaseModel):
    qwk: float | None
    correlation: float | None
    attainment_vs_max: float | None
    attainment_vs_hl: float | None


class ReportDocumentBase(BaseModel):
    command: str
    version: str
    config: dict[str, Any]
    warnings: list[str]


class AnalyzeResponse(ReportDocumentBase):
    n: int
    n_dropped: int
    ceilings: CeilingsModel


class EvaluateResponse(AnalyzeResponse):
    evaluation: EvaluationModel


class SweepLevelModel(BaseModel):
    sigma_noise: float
    r_true: float | None
    kappa_true: float | None
    kappa_max_hat: float | None
    kappa_hl_hat: float | None
    kappa_h_hat: float | None
    kappa_ccc: float | None
    ccc_error: float | None
    kappa_humanlike_empirical: float | None


class SweepModel(BaseModel):
    trials: int
    seed: int
    levels: list[SweepLevelModel]


class SweepResponse(ReportDocumentBase):
    sweep: SweepModel


class CccCheckModel(BaseModel):
    mae: float | None
    trials: int
    seed: int
    points: list[tuple[float | None, float | None]]


class CccCheckResponse(ReportDocumentBase):
    ccc_check: CccCheckModel


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorResponse(BaseModel):
    error: str
    message: str
