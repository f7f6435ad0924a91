"""HTTP surface wrapping the core package.

Every endpoint is a pure function of its request body, so responses are
deterministic and the app needs no state. Domain errors map to HTTP status
codes: configuration problems to 400, data/validation problems to 422.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..dataset_io import (
    DatasetSpec,
    evaluate_predictions,
    load_csv_text,
)
from ..errors import ConfigError, KappaCeilingError
from ..metrics import ScoreScale
from ..reliability import ceiling_report
from ..report import (
    analyze_document,
    ccc_check_document,
    evaluate_document,
    sweep_document,
)
from ..simulation import SimulationConfig, run_ccc_check, run_noise_sweep
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    CccCheckRequest,
    CccCheckResponse,
    ErrorResponse,
    EvaluateRequest,
    EvaluateResponse,
    HealthResponse,
    SweepRequest,
    SweepResponse,
)

app = FastAPI(
    title="kappa-ceiling",
    version=__version__,
    description="Reliability-based QWK ceiling analytics for two-rater score data",
)

_ERROR_RESPONSES = {
    400: {"model": ErrorResponse},
    422: {"model": ErrorResponse},
}


@app.exception_handler(KappaCeilingError)
async def domain_error_handler(_: Request, exc: KappaCeilingError) -> JSONResponse:
    status = 400 if isinstance(exc, ConfigError) else 422
    return JSONResponse(
        status_code=status,
        content={"error": type(exc).__name__, "message": str(exc)},
    )


def _dataset_spec(request: AnalyzeRequest, prediction_column: str | None) -> DatasetSpec:
    return DatasetSpec(
        path=request.source,
        column_r1=request.column_r1,
        column_r2=request.column_r2,
        scale=ScoreScale(request.scale.min_score, request.scale.max_score),
        column_prediction=prediction_column,
        target_rule=request.target_rule,
        missing_policy=request.missing_policy,
        delimiter=request.delimiter,
    )


@app.get("/health", response_model=HealthResponse)
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/analyze", response_model=AnalyzeResponse, responses=_ERROR_RESPONSES)
def analyze(request: AnalyzeRequest) -> dict:
    """Ceiling report for a two-rater dataset."""
    spec = _dataset_spec(request, prediction_column=None)
    dataset = load_csv_text(request.csv_text, spec)
    report = ceiling_report(dataset.raters)
    return analyze_document(report, spec, len(dataset.raters), dataset.n_dropped)


@app.post("/evaluate", response_model=EvaluateResponse, responses=_ERROR_RESPONSES)
def evaluate(request: EvaluateRequest) -> dict:
    """Model predictions scored against the dataset's ceilings."""
    spec = _dataset_spec(request, prediction_column=request.column_prediction)
    dataset = load_csv_text(request.csv_text, spec)
    result = evaluate_predictions(dataset, round_predictions=request.round_predictions)
    return evaluate_document(result, spec, request.round_predictions, dataset.n_dropped)


@app.post("/simulate/table1", response_model=SweepResponse, responses=_ERROR_RESPONSES)
def simulate_table1(request: SweepRequest) -> dict:
    """Noise-sweep reproduction: mean metrics per noise level."""
    config = SimulationConfig(
        n=request.n,
        scale=ScoreScale(request.scale.min_score, request.scale.max_score),
        true_mean=request.true_mean,
        true_sd=request.true_sd,
        noise_levels=tuple(request.noise_levels),
        trials=request.trials,
        seed=request.seed,
        simulate_human_like=request.simulate_human_like,
    )
    return sweep_document(run_noise_sweep(config), config)


@app.post("/simulate/ccc-check", response_model=CccCheckResponse, responses=_ERROR_RESPONSES)
def simulate_ccc_check(request: CccCheckRequest) -> dict:
    """Concordance-approximation accuracy check."""
    config = SimulationConfig(
        n=request.n,
        scale=ScoreScale(request.scale.min_score, request.scale.max_score),
        true_mean=request.true_mean,
        true_sd=request.true_sd,
        trials=request.trials,
        seed=request.seed,
        ccc_noise_lower=request.ccc_noise_lower,
        ccc_noise_upper=request.ccc_noise_upper,
    )
    return ccc_check_document(run_ccc_check(config), config)
