"""Structured report documents and their text rendering.

A report document is a plain self-describing dict: field names match the
domain types, values carry full precision, and the same inputs always
produce the same document (there are no timestamps; the only run-dependent
field is the tool version). The service returns these documents as JSON and
the CLI renders them; the text renderer prints every numeric field with
3 decimal places.
"""

from __future__ import annotations

import json
import math
from typing import Any

from . import __version__
from .dataset_io import DatasetSpec, EvaluationResult
from .metrics import Degenerate
from .reliability import CeilingReport
from .simulation import AggregateResult, CccCheckResult, SimulationConfig

__all__ = [
    "analyze_document",
    "evaluate_document",
    "sweep_document",
    "ccc_check_document",
    "document_to_json",
    "render_document",
]

UNDEFINED_TEXT = "undefined: zero expected disagreement"


def _kappa_field(value: float | Degenerate) -> float | None:
    return None if isinstance(value, Degenerate) else value


def _wire_float(value: float | None) -> float | None:
    """NaN (a degenerate metric inside a returned trial) becomes null on the wire."""
    if value is None or math.isnan(value):
        return None
    return value


def _ceilings_block(report: CeilingReport) -> dict[str, Any]:
    anova = report.reliability.anova
    return {
        "kappa_max": report.kappa_max,
        "kappa_hl": report.kappa_hl,
        "kappa_h": _kappa_field(report.kappa_h),
        "r_h": report.r_h,
        "f_h": report.f_h,
        "reliability": {
            "rho_1": report.reliability.rho_1,
            "rho_Y": report.reliability.rho_Y,
            "clamped": report.reliability.clamped,
            "anova": {"msb": anova.msb, "msw": anova.msw, "n": anova.n, "k": anova.k},
        },
    }


def _dataset_config(spec: DatasetSpec) -> dict[str, Any]:
    return {
        "path": spec.path,
        "column_r1": spec.column_r1,
        "column_r2": spec.column_r2,
        "column_prediction": spec.column_prediction,
        "scale": {"min_score": spec.scale.min_score, "max_score": spec.scale.max_score},
        "target_rule": spec.target_rule,
        "missing_policy": spec.missing_policy,
        "delimiter": spec.delimiter,
    }


def _simulation_config(config: SimulationConfig) -> dict[str, Any]:
    return {
        "n": config.n,
        "scale": {"min_score": config.scale.min_score, "max_score": config.scale.max_score},
        "true_mean": config.true_mean,
        "true_sd": config.true_sd,
        "noise_levels": list(config.noise_levels),
        "trials": config.trials,
        "seed": config.seed,
        "ccc_noise_lower": config.ccc_noise_lower,
        "ccc_noise_upper": config.ccc_noise_upper,
        "simulate_human_like": config.simulate_human_like,
    }


def _base_document(command: str, config: dict[str, Any], warnings: tuple[str, ...]) -> dict[str, Any]:
    return {
        "command": command,
        "version": __version__,
        "config": config,
        "warnings": list(warnings),
    }


def analyze_document(
    report: CeilingReport, spec: DatasetSpec, n_rows: int, n_dropped: int
) -> dict[str, Any]:
    doc = _base_document("analyze", _dataset_config(spec), report.warnings)
    doc["n"] = n_rows
    doc["n_dropped"] = n_dropped
    doc["ceilings"] = _ceilings_block(report)
    return doc


def evaluate_document(
    result: EvaluationResult, spec: DatasetSpec, round_predictions: bool, n_dropped: int
) -> dict[str, Any]:
    config = _dataset_config(spec)
    config["round_predictions"] = round_predictions
    doc = _base_document("evaluate", config, result.warnings)
    doc["n"] = result.n
    doc["n_dropped"] = n_dropped
    doc["evaluation"] = {
        "qwk": _kappa_field(result.qwk),
        "correlation": result.correlation,
        "attainment_vs_max": result.attainment_vs_max,
        "attainment_vs_hl": result.attainment_vs_hl,
    }
    doc["ceilings"] = _ceilings_block(result.ceilings)
    return doc


def sweep_document(aggregate: AggregateResult, config: SimulationConfig) -> dict[str, Any]:
    doc = _base_document("simulate table1", _simulation_config(config), aggregate.warnings)
    doc["sweep"] = {
        "trials": aggregate.trials,
        "seed": aggregate.seed,
        "levels": [
            {
                "sigma_noise": level.sigma_noise,
                "r_true": _wire_float(level.r_true),
                "kappa_true": _wire_float(level.kappa_true),
                "kappa_max_hat": _wire_float(level.kappa_max_hat),
                "kappa_hl_hat": _wire_float(level.kappa_hl_hat),
                "kappa_h_hat": _wire_float(level.kappa_h_hat),
                "kappa_ccc": _wire_float(level.kappa_ccc),
                "ccc_error": _wire_float(level.ccc_error),
                "kappa_humanlike_empirical": _wire_float(level.kappa_humanlike_empirical),
            }
            for level in aggregate.levels
        ],
    }
    return doc


def ccc_check_document(result: CccCheckResult, config: SimulationConfig) -> dict[str, Any]:
    doc = _base_document("simulate ccc-check", _simulation_config(config), result.warnings)
    doc["ccc_check"] = {
        "mae": _wire_float(result.mae),
        "trials": result.trials,
        "seed": result.seed,
        "points": [
            [_wire_float(kappa_ccc), _wire_float(kappa_true)]
            for kappa_ccc, kappa_true in result.points
        ],
    }
    return doc


def document_to_json(doc: dict[str, Any]) -> str:
    """Full-precision JSON; byte-stable for identical inputs."""
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def _fmt(value: Any) -> str:
    """Three-decimal rendering for the table mode."""
    if value is None:
        return "undefined"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.3f}"
    return str(value)


def _fmt_kappa(value: Any) -> str:
    """Kappa fields spell out why they are undefined."""
    return UNDEFINED_TEXT if value is None else _fmt(value)


def _render_ceilings(block: dict[str, Any], lines: list[str]) -> None:
    reliability = block["reliability"]
    anova = reliability["anova"]
    lines.append(f"  kappa_max   {_fmt(block['kappa_max'])}")
    lines.append(f"  kappa_hl    {_fmt(block['kappa_hl'])}")
    lines.append(f"  kappa_h     {_fmt_kappa(block['kappa_h'])}")
    lines.append(f"  r_h         {_fmt(block['r_h'])}")
    lines.append(f"  f_h         {_fmt(block['f_h'])}")
    lines.append(f"  rho_1       {_fmt(reliability['rho_1'])}")
    lines.append(f"  rho_Y       {_fmt(reliability['rho_Y'])}")
    lines.append(
        f"  anova       msb={_fmt(anova['msb'])} msw={_fmt(anova['msw'])} "
        f"n={anova['n']} k={anova['k']}"
    )


_SWEEP_COLUMNS = (
    ("sigma_noise", "sigma_noise"),
    ("r_true", "r_true"),
    ("kappa_true", "kappa_true"),
    ("kappa_max_hat", "kappa_max_hat"),
    ("kappa_hl_hat", "kappa_hl_hat"),
    ("kappa_h_hat", "kappa_h_hat"),
)


def render_document(doc: dict[str, Any]) -> str:
    """Human-readable rendering of a structured report document."""
    lines = [f"kappa-ceiling {doc['version']} :: {doc['command']}"]

    if "n" in doc:
        lines.append(f"  n           {doc['n']}")
        if doc.get("n_dropped"):
            lines.append(f"  n_dropped   {doc['n_dropped']}")

    if "evaluation" in doc:
        block = doc["evaluation"]
        lines.append("evaluation")
        lines.append(f"  qwk               {_fmt_kappa(block['qwk'])}")
        lines.append(f"  correlation       {_fmt(block['correlation'])}")
        lines.append(f"  attainment_vs_max {_fmt(block['attainment_vs_max'])}")
        lines.append(f"  attainment_vs_hl  {_fmt(block['attainment_vs_hl'])}")

    if "ceilings" in doc:
        lines.append("ceilings")
        _render_ceilings(doc["ceilings"], lines)

    if "sweep" in doc:
        block = doc["sweep"]
        columns = list(_SWEEP_COLUMNS)
        if any(level["kappa_humanlike_empirical"] is not None for level in block["levels"]):
            columns.append(("kappa_humanlike_empirical", "kappa_humanlike_empirical"))
        header = [name for name, _ in columns]
        rows = [
            [_fmt(level[key]) for _, key in columns]
            for level in block["levels"]
        ]
        widths = [
            max(len(header[i]), *(len(row[i]) for row in rows)) for i in range(len(header))
        ]
        lines.append(f"noise sweep: trials={block['trials']} seed={block['seed']}")
        lines.append("  " + "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)))
        for row in rows:
            lines.append("  " + "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))

    if "ccc_check" in doc:
        block = doc["ccc_check"]
        lines.append(
            f"concordance check: trials={block['trials']} seed={block['seed']}"
        )
        lines.append(f"  mae         {_fmt(block['mae'])}")

    for warning in doc.get("warnings", ()):
        lines.append(f"warning: {warning}")

    return "\n".join(lines) + "\n"
