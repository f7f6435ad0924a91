"""Loading two-rater benchmark files and evaluating predictions against ceilings.

Input format: delimited text (comma by default, any single-character
delimiter), UTF-8, header row required, numbers in plain decimal notation.
The loader is schema-driven rather than dataset-specific: benchmark files
are license-gated and never shipped, so callers declare the two rater
columns, the score scale and the target construction rule.

A dataset spec can also be read from a small config file with one
``key = value`` per line (``#`` comments and blank lines allowed); see
``read_dataset_config``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ConfigError,
    DegenerateVariance,
    ParseError,
    ScaleViolation,
    SchemaError,
)
from .metrics import (
    Degenerate,
    PairedScores,
    ScoreScale,
    exact_qwk,
    pearson,
    round_to_scale,
)
from .reliability import CeilingReport, RaterMatrix, ceiling_report
from .simulation import TARGET_RULES, build_target

__all__ = [
    "DatasetSpec",
    "LoadedDataset",
    "EvaluationResult",
    "MISSING_POLICIES",
    "load_csv",
    "load_csv_text",
    "evaluate_predictions",
    "read_dataset_config",
    "dataset_spec_from_mapping",
]

MISSING_POLICIES = ("reject", "drop_row")


@dataclass(frozen=True)
class DatasetSpec:
    """Where a two-rater dataset lives and how to interpret it."""

    path: str
    column_r1: str
    column_r2: str
    scale: ScoreScale
    column_prediction: str | None = None
    target_rule: str = "rounded_mean"
    missing_policy: str = "reject"
    delimiter: str = ","

    def __post_init__(self) -> None:
        columns = [self.column_r1, self.column_r2]
        if self.column_prediction is not None:
            columns.append(self.column_prediction)
        if len(set(columns)) != len(columns):
            raise ConfigError(f"column names must be distinct, got {columns}")
        if self.target_rule not in TARGET_RULES:
            raise ConfigError(
                f"unknown target rule {self.target_rule!r}; expected one of {TARGET_RULES}"
            )
        if self.missing_policy not in MISSING_POLICIES:
            raise ConfigError(
                f"unknown missing policy {self.missing_policy!r}; "
                f"expected one of {MISSING_POLICIES}"
            )
        if len(self.delimiter) != 1:
            raise ConfigError(f"delimiter must be a single character, got {self.delimiter!r}")


@dataclass(frozen=True)
class LoadedDataset:
    """Parsed rater matrix, constructed target, optional predictions."""

    raters: RaterMatrix
    target: np.ndarray
    predictions: np.ndarray | None
    n_dropped: int
    spec: DatasetSpec

    @property
    def target_scale(self) -> ScoreScale:
        """Scale of the constructed target: doubled for the sum rule."""
        if self.spec.target_rule == "sum":
            return self.raters.scale.doubled()
        return self.raters.scale


@dataclass(frozen=True)
class EvaluationResult:
    """Model agreement with the target, referenced to the dataset's ceilings.

    Degenerate metrics (constant predictions or target) are surfaced as
    warnings with the field set to None/Degenerate rather than aborting the
    evaluation.
    """

    qwk: float | Degenerate
    correlation: float | None
    attainment_vs_max: float | None
    attainment_vs_hl: float | None
    ceilings: CeilingReport
    n: int
    warnings: tuple[str, ...] = ()


def _parse_cell(raw: str | None, row_number: int, column: str) -> float | None:
    """A cell's numeric value, or None when the cell is missing/blank."""
    if raw is None:
        return None
    text = raw.strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise ParseError(
            f"row {row_number}: cell {text!r} in column {column!r} is not numeric"
        ) from None


def _parse_rater_cell(
    value: float, row_number: int, column: str, scale: ScoreScale
) -> int:
    if value != math.floor(value):
        raise ScaleViolation(
            f"row {row_number}: rater score {value} in column {column!r} is not an integer"
        )
    score = int(value)
    if not scale.min_score <= score <= scale.max_score:
        raise ScaleViolation(
            f"row {row_number}: rater score {score} in column {column!r} outside scale "
            f"[{scale.min_score}, {scale.max_score}]"
        )
    return score


def load_csv(spec: DatasetSpec) -> LoadedDataset:
    """Load and validate the file named by the spec."""
    path = Path(spec.path)
    if not path.is_file():
        raise SchemaError(f"no such file: {spec.path}")
    return load_csv_text(path.read_text(encoding="utf-8"), spec)


def load_csv_text(text: str, spec: DatasetSpec) -> LoadedDataset:
    """Load a dataset from delimited text already in memory.

    Rater columns must parse as integers within the declared scale;
    the prediction column, when declared, parses as real numbers. Rows with
    missing cells in any declared column are rejected or dropped per the
    spec's missing policy; unparseable cells are a hard error under
    ``reject`` and count as missing under ``drop_row``.
    """
    reader = csv.DictReader(io.StringIO(text), delimiter=spec.delimiter)
    if reader.fieldnames is None:
        raise SchemaError("file is empty; a header row is required")
    needed = [spec.column_r1, spec.column_r2]
    if spec.column_prediction is not None:
        needed.append(spec.column_prediction)
    missing_columns = [c for c in needed if c not in reader.fieldnames]
    if missing_columns:
        raise SchemaError(
            f"missing columns {missing_columns} in header {list(reader.fieldnames)}"
        )

    x1: list[int] = []
    x2: list[int] = []
    predictions: list[float] = []
    n_dropped = 0
    # header is line 1; the first data row is line 2
    for row_number, row in enumerate(reader, start=2):
        try:
            cells = [_parse_cell(row.get(c), row_number, c) for c in needed]
        except ParseError:
            if spec.missing_policy == "reject":
                raise
            n_dropped += 1
            continue
        if any(cell is None for cell in cells):
            if spec.missing_policy == "reject":
                blank = needed[[cell is None for cell in cells].index(True)]
                raise ParseError(f"row {row_number}: missing value in column {blank!r}")
            n_dropped += 1
            continue
        x1.append(_parse_rater_cell(cells[0], row_number, spec.column_r1, spec.scale))
        x2.append(_parse_rater_cell(cells[1], row_number, spec.column_r2, spec.scale))
        if spec.column_prediction is not None:
            predictions.append(cells[2])

    raters = RaterMatrix(np.array(x1, dtype=np.int64), np.array(x2, dtype=np.int64), spec.scale)
    target = build_target(raters.x1, raters.x2, spec.target_rule)
    return LoadedDataset(
        raters=raters,
        target=np.asarray(target),
        predictions=np.array(predictions, dtype=float) if spec.column_prediction else None,
        n_dropped=n_dropped,
        spec=spec,
    )


def evaluate_predictions(ds: LoadedDataset, round_predictions: bool = True) -> EvaluationResult:
    """Model QWK and correlation against the target, plus ceiling attainment.

    With ``round_predictions`` (the standard protocol for real-valued model
    output) both predictions and target are rounded half-away and clipped to
    the target scale before QWK; correlation always uses the raw values.
    Attainment ratios divide the model QWK by each ceiling of the underlying
    rater matrix.
    """
    if ds.predictions is None:
        raise ConfigError("dataset was loaded without a prediction column")
    warnings: list[str] = []
    scale = ds.target_scale

    correlation: float | None
    try:
        correlation = pearson(PairedScores(ds.predictions, ds.target, scale))
    except DegenerateVariance as exc:
        warnings.append(f"correlation degenerate: {exc}")
        correlation = None
    if round_predictions:
        qwk_pair = PairedScores(
            round_to_scale(ds.predictions, scale), round_to_scale(ds.target, scale), scale
        )
    else:
        qwk_pair = PairedScores(ds.predictions, ds.target, scale)
    qwk = exact_qwk(qwk_pair)

    ceilings = ceiling_report(ds.raters)
    warnings.extend(ceilings.warnings)

    attainment_vs_max: float | None = None
    attainment_vs_hl: float | None = None
    if isinstance(qwk, Degenerate):
        warnings.append(f"model QWK is {qwk}")
    else:
        if ceilings.kappa_max > 0.0:
            attainment_vs_max = qwk / ceilings.kappa_max
        else:
            warnings.append("theoretical ceiling is 0; attainment undefined")
        if ceilings.kappa_hl > 0.0:
            attainment_vs_hl = qwk / ceilings.kappa_hl
        else:
            warnings.append("human-like ceiling is 0; attainment undefined")

    return EvaluationResult(
        qwk=qwk,
        correlation=correlation,
        attainment_vs_max=attainment_vs_max,
        attainment_vs_hl=attainment_vs_hl,
        ceilings=ceilings,
        n=len(ds.target),
        warnings=tuple(warnings),
    )


_CONFIG_KEYS = {
    "data",
    "rater1_col",
    "rater2_col",
    "prediction_col",
    "scale_min",
    "scale_max",
    "target_rule",
    "missing_policy",
    "delimiter",
}


def read_dataset_config(path: str | Path) -> DatasetSpec:
    """Parse a ``key = value`` dataset config file into a DatasetSpec.

    Recognized keys: data, rater1_col, rater2_col, prediction_col,
    scale_min, scale_max, target_rule, missing_policy, delimiter.
    ``delimiter`` accepts a literal character or the word ``tab``.
    """
    mapping: dict[str, str] = {}
    for line_number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{line_number}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(
                f"{path}:{line_number}: unknown key {key!r}; expected one of {sorted(_CONFIG_KEYS)}"
            )
        mapping[key] = value.strip()
    return dataset_spec_from_mapping(mapping)


def dataset_spec_from_mapping(mapping: dict[str, str]) -> DatasetSpec:
    """Build a DatasetSpec from string key-value pairs (config file or flags)."""
    for required in ("data", "rater1_col", "rater2_col", "scale_min", "scale_max"):
        if required not in mapping:
            raise ConfigError(f"dataset spec is missing required key {required!r}")
    try:
        scale = ScoreScale(int(mapping["scale_min"]), int(mapping["scale_max"]))
    except ValueError as exc:
        raise ConfigError(f"invalid scale: {exc}") from None
    delimiter = mapping.get("delimiter", ",")
    if delimiter.lower() == "tab":
        delimiter = "\t"
    return DatasetSpec(
        path=mapping["data"],
        column_r1=mapping["rater1_col"],
        column_r2=mapping["rater2_col"],
        scale=scale,
        column_prediction=mapping.get("prediction_col"),
        target_rule=mapping.get("target_rule", "rounded_mean"),
        missing_policy=mapping.get("missing_policy", "reject"),
        delimiter=delimiter,
    )
