"""Command-line client for the kappa-ceiling service.

The CLI does no statistics itself: it reads local files, ships requests to
the HTTP service and renders the returned report documents. By default it
talks to an in-process instance of the service (no server needed); pass
``--server-url`` to use a running one.

Exit codes: 0 success, 1 data/validation error, 2 usage error.

Environment: ``KAPPA_CEILING_SEED`` overrides the default simulation seed
when ``--seed`` is not given.
"""

from __future__ import annotations

import argparse
import asyncio
import os
import sys
from pathlib import Path
from typing import Any

import httpx

from . import __version__
from .dataset_io import read_dataset_config
from .errors import ConfigError
from .report import document_to_json, render_document
from .service.app import app as service_app
from .simulation import DEFAULT_SEED

SEED_ENV_VAR = "KAPPA_CEILING_SEED"

_USAGE_STATUS = 2
_DATA_STATUS = 1


def _post(server_url: str | None, path: str, payload: dict) -> tuple[int, Any]:
    """POST to the remote service, or to an in-process instance when no URL is set."""
    if server_url:
        with httpx.Client(base_url=server_url, timeout=600.0) as client:
            response = client.post(path, json=payload)
            return response.status_code, response.json()

    async def call() -> tuple[int, Any]:
        transport = httpx.ASGITransport(app=service_app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://kappa-ceiling.internal", timeout=600.0
        ) as client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(call())


def _emit(document: dict, args: argparse.Namespace) -> None:
    if args.format == "json":
        text = document_to_json(document)
    else:
        text = render_document(document)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _service_error(status: int, body: Any) -> int:
    if isinstance(body, dict) and "error" in body:
        sys.stderr.write(f"error [{body['error']}]: {body['message']}\n")
    else:
        sys.stderr.write(f"error [HTTP {status}]: {body}\n")
    return _USAGE_STATUS if status == 400 else _DATA_STATUS


def _run_request(args: argparse.Namespace, path: str, payload: dict) -> int:
    status, body = _post(args.server_url, path, payload)
    if status != 200:
        return _service_error(status, body)
    _emit(body, args)
    return 0


def _dataset_mapping(args: argparse.Namespace) -> dict[str, str]:
    """Merge config-file keys with explicitly passed flags (flags win)."""
    mapping: dict[str, str] = {}
    if args.config:
        base = read_dataset_config(args.config)
        mapping = {
            "data": base.path,
            "rater1_col": base.column_r1,
            "rater2_col": base.column_r2,
            "scale_min": str(base.scale.min_score),
            "scale_max": str(base.scale.max_score),
            "target_rule": base.target_rule,
            "missing_policy": base.missing_policy,
            "delimiter": base.delimiter,
        }
        if base.column_prediction:
            mapping["prediction_col"] = base.column_prediction
    overrides = {
        "data": args.data,
        "rater1_col": args.rater1_col,
        "rater2_col": args.rater2_col,
        "prediction_col": getattr(args, "prediction_col", None),
        "scale_min": None if args.scale_min is None else str(args.scale_min),
        "scale_max": None if args.scale_max is None else str(args.scale_max),
        "target_rule": args.target_rule,
        "missing_policy": args.missing_policy,
        "delimiter": "\t" if args.tab else args.delimiter,
    }
    mapping.update({key: value for key, value in overrides.items() if value is not None})
    return mapping


def _dataset_payload(args: argparse.Namespace, need_prediction: bool) -> dict:
    mapping = _dataset_mapping(args)
    for required in ("data", "rater1_col", "rater2_col", "scale_min", "scale_max"):
        if required not in mapping:
            raise ConfigError(f"missing required dataset option {required!r} "
                              "(flag or config file)")
    if need_prediction and "prediction_col" not in mapping:
        raise ConfigError("evaluate requires a prediction column "
                          "(--prediction-col or prediction_col in the config file)")
    data_path = Path(mapping["data"])
    try:
        csv_text = data_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read data file {data_path}: {exc}") from None
    try:
        scale = {"min_score": int(mapping["scale_min"]), "max_score": int(mapping["scale_max"])}
    except ValueError:
        raise ConfigError(
            f"scale bounds must be integers, got {mapping['scale_min']!r}, "
            f"{mapping['scale_max']!r}"
        ) from None
    payload = {
        "csv_text": csv_text,
        "column_r1": mapping["rater1_col"],
        "column_r2": mapping["rater2_col"],
        "scale": scale,
        "target_rule": mapping.get("target_rule", "rounded_mean"),
        "missing_policy": mapping.get("missing_policy", "reject"),
        "delimiter": mapping.get("delimiter", ","),
        "source": str(data_path),
    }
    if need_prediction:
        payload["column_prediction"] = mapping["prediction_col"]
        payload["round_predictions"] = not args.no_round_predictions
    return payload


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value is not None:
        try:
            return int(env_value)
        except ValueError:
            raise ConfigError(
                f"{SEED_ENV_VAR} must be an integer, got {env_value!r}"
            ) from None
    return DEFAULT_SEED


def _scale_payload(args: argparse.Namespace) -> dict:
    return {"min_score": args.scale_min, "max_score": args.scale_max}


def _cmd_analyze(args: argparse.Namespace) -> int:
    return _run_request(args, "/analyze", _dataset_payload(args, need_prediction=False))


def _cmd_evaluate(args: argparse.Namespace) -> int:
    return _run_request(args, "/evaluate", _dataset_payload(args, need_prediction=True))


def _cmd_simulate_table1(args: argparse.Namespace) -> int:
    payload = {
        "n": args.n,
        "scale": _scale_payload(args),
        "true_mean": args.true_mean,
        "true_sd": args.true_sd,
        "noise_levels": args.noise_levels,
        "trials": args.trials,
        "seed": _resolve_seed(args),
        "simulate_human_like": args.human_like,
    }
    return _run_request(args, "/simulate/table1", payload)


def _cmd_simulate_ccc_check(args: argparse.Namespace) -> int:
    payload = {
        "n": args.n,
        "scale": _scale_payload(args),
        "true_mean": args.true_mean,
        "true_sd": args.true_sd,
        "trials": args.trials,
        "seed": _resolve_seed(args),
        "ccc_noise_lower": args.noise_lower,
        "ccc_noise_upper": args.noise_upper,
    }
    status, body = _post(args.server_url, "/simulate/ccc-check", payload)
    if status != 200:
        return _service_error(status, body)
    if args.points_out:
        points = body["ccc_check"]["points"]
        lines = [f"{kappa_ccc!r},{kappa_true!r}" for kappa_ccc, kappa_true in points]
        Path(args.points_out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _emit(body, args)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run(service_app, host=args.host, port=args.port)
    return 0


def _noise_levels(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated list of numbers, got {text!r}"
        ) from None


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("table", "json"), default="table",
                        help="output rendering (default: table)")
    parser.add_argument("--out", metavar="PATH", default=None,
                        help="write the report to PATH instead of stdout")
    parser.add_argument("--server-url", metavar="URL", default=None,
                        help="use a running service instead of the in-process one")


def _add_dataset_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", metavar="PATH", help="delimited two-rater score file")
    parser.add_argument("--rater1-col", metavar="NAME", help="first rater column name")
    parser.add_argument("--rater2-col", metavar="NAME", help="second rater column name")
    parser.add_argument("--scale-min", type=int, metavar="INT", default=None,
                        help="minimum valid score")
    parser.add_argument("--scale-max", type=int, metavar="INT", default=None,
                        help="maximum valid score")
    parser.add_argument("--target-rule", choices=("rounded_mean", "mean", "sum"),
                        default=None, help="target construction rule (default: rounded_mean)")
    parser.add_argument("--missing-policy", choices=("reject", "drop_row"), default=None,
                        help="what to do with rows that have missing cells (default: reject)")
    parser.add_argument("--delimiter", metavar="CHAR", default=None,
                        help="field delimiter (default: comma)")
    parser.add_argument("--tab", action="store_true", help="tab-delimited input")
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="dataset spec as a 'key = value' config file; flags override it")


def _add_simulation_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help=f"RNG seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})")
    parser.add_argument("--trials", type=int, default=100, help="trials per condition")
    parser.add_argument("--n", type=int, default=1000, help="responses per trial")
    parser.add_argument("--scale-min", type=int, default=0, help="minimum score")
    parser.add_argument("--scale-max", type=int, default=10, help="maximum score")
    parser.add_argument("--true-mean", type=float, default=5.0,
                        help="mean of the latent true-score distribution")
    parser.add_argument("--true-sd", type=float, default=3.3,
                        help="standard deviation of the latent true-score distribution")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kappa-ceiling",
        description="Reliability-based QWK ceiling analytics for two-rater score data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="ceiling report for a two-rater file")
    _add_dataset_flags(analyze)
    _add_output_flags(analyze)
    analyze.set_defaults(handler=_cmd_analyze)

    evaluate = commands.add_parser(
        "evaluate", help="score model predictions against a dataset's ceilings"
    )
    _add_dataset_flags(evaluate)
    evaluate.add_argument("--prediction-col", metavar="NAME", default=None,
                          help="model prediction column name")
    evaluate.add_argument("--no-round-predictions", action="store_true",
                          help="feed raw predictions to QWK instead of rounding and clipping")
    _add_output_flags(evaluate)
    evaluate.set_defaults(handler=_cmd_evaluate)

    simulate = commands.add_parser("simulate", help="deterministic validation experiments")
    simulate_sub = simulate.add_subparsers(dest="experiment", required=True)

    table1 = simulate_sub.add_parser(
        "table1", help="noise sweep: mean agreement metrics and ceilings per noise level"
    )
    _add_simulation_flags(table1)
    table1.add_argument("--noise-levels", type=_noise_levels,
                        default=[0.25, 0.50, 1.00, 2.00, 3.00], metavar="S1,S2,...",
                        help="comma-separated rater noise levels")
    table1.add_argument("--human-like", action="store_true",
                        help="also simulate an explicit human-like rater per trial")
    _add_output_flags(table1)
    table1.set_defaults(handler=_cmd_simulate_table1)

    ccc_check = simulate_sub.add_parser(
        "ccc-check", help="accuracy of the concordance-based QWK approximation"
    )
    _add_simulation_flags(ccc_check)
    ccc_check.add_argument("--noise-lower", type=float, default=0.1,
                           help="lower bound of the per-trial uniform noise level")
    ccc_check.add_argument("--noise-upper", type=float, default=5.0,
                           help="upper bound of the per-trial uniform noise level")
    ccc_check.add_argument("--points-out", metavar="PATH", default=None,
                           help="write scatter points as CSV lines 'kappa_ccc,kappa_true'")
    _add_output_flags(ccc_check)
    ccc_check.set_defaults(handler=_cmd_simulate_ccc_check)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        sys.stderr.write(f"error [ConfigError]: {exc}\n")
        return _USAGE_STATUS
    except httpx.HTTPError as exc:
        sys.stderr.write(f"error [transport]: {exc}\n")
        return _DATA_STATUS


if __name__ == "__main__":
    sys.exit(main())
