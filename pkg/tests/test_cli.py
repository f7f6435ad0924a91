import json

import pytest

from kappa_ceiling.cli import main

FIXTURE_CSV = "id,r1,r2\na,1,2\nb,3,3\nc,5,4\nd,7,8\n"
PRED_CSV = "r1,r2,pred\n1,2,2.2\n3,3,3.4\n5,4,4.6\n7,8,7.9\n"


@pytest.fixture
def fixture_csv(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text(FIXTURE_CSV, encoding="utf-8")
    return path


@pytest.fixture
def pred_csv(tmp_path):
    path = tmp_path / "preds.csv"
    path.write_text(PRED_CSV, encoding="utf-8")
    return path


def analyze_args(path, *extra):
    return [
        "analyze", "--data", str(path),
        "--rater1-col", "r1", "--rater2-col", "r2",
        "--scale-min", "0", "--scale-max", "10",
        *extra,
    ]


def test_analyze_table_output(fixture_csv, capsys):
    assert main(analyze_args(fixture_csv)) == 0
    out = capsys.readouterr().out
    assert "kappa_max   0.986" in out
    assert "kappa_hl    0.958" in out
    assert "kappa_h     0.927" in out
    assert "msb=13.125" in out


def test_analyze_json_output_full_precision(fixture_csv, capsys):
    assert main(analyze_args(fixture_csv, "--format", "json")) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["command"] == "analyze"
    assert abs(doc["ceilings"]["kappa_max"] - 0.9856107606091623) < 1e-15
    assert doc["config"]["path"].endswith("scores.csv")


def test_analyze_out_file(fixture_csv, tmp_path, capsys):
    out_path = tmp_path / "report.json"
    assert main(analyze_args(fixture_csv, "--format", "json", "--out", str(out_path))) == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(out_path.read_text(encoding="utf-8"))
    assert doc["n"] == 4


def test_analyze_structured_output_is_byte_stable(fixture_csv, tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    main(analyze_args(fixture_csv, "--format", "json", "--out", str(first)))
    main(analyze_args(fixture_csv, "--format", "json", "--out", str(second)))
    assert first.read_bytes() == second.read_bytes()


def test_analyze_missing_file_is_usage_error(tmp_path, capsys):
    code = main(analyze_args(tmp_path / "absent.csv"))
    assert code == 2
    assert "cannot read data file" in capsys.readouterr().err


def test_analyze_data_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("r1,r2\n1,2\n3,99\n5,4\n", encoding="utf-8")
    code = main(analyze_args(path))
    assert code == 1
    err = capsys.readouterr().err
    assert "ScaleViolation" in err
    assert "row 3" in err


def test_analyze_missing_required_flags_is_usage_error(fixture_csv, capsys):
    code = main(["analyze", "--data", str(fixture_csv)])
    assert code == 2
    assert "missing required dataset option" in capsys.readouterr().err


def test_argparse_usage_error_exits_2(fixture_csv):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--scale-min", "zero"])
    assert exc.value.code == 2


def test_analyze_config_file_with_flag_override(fixture_csv, tmp_path, capsys):
    cfg = tmp_path / "dataset.conf"
    cfg.write_text(
        f"data = {fixture_csv}\n"
        "rater1_col = r1\n"
        "rater2_col = wrong\n"
        "scale_min = 0\n"
        "scale_max = 10\n",
        encoding="utf-8",
    )
    # config alone points at a bad column; the flag overrides it
    assert main(["analyze", "--config", str(cfg), "--rater2-col", "r2"]) == 0
    assert "kappa_max" in capsys.readouterr().out


def test_evaluate_command(pred_csv, capsys):
    code = main([
        "evaluate", "--data", str(pred_csv),
        "--rater1-col", "r1", "--rater2-col", "r2", "--prediction-col", "pred",
        "--scale-min", "0", "--scale-max", "10", "--format", "json",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["evaluation"]["qwk"] == 1.0
    assert doc["evaluation"]["attainment_vs_max"] > 1.0


def test_evaluate_requires_prediction_column(pred_csv, capsys):
    code = main([
        "evaluate", "--data", str(pred_csv),
        "--rater1-col", "r1", "--rater2-col", "r2",
        "--scale-min", "0", "--scale-max", "10",
    ])
    assert code == 2
    assert "prediction column" in capsys.readouterr().err


def test_simulate_table1_small(capsys):
    code = main([
        "simulate", "table1", "--seed", "7", "--trials", "2", "--n", "150",
        "--noise-levels", "0.5,2.0",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "noise sweep: trials=2 seed=7" in out
    assert "0.500" in out and "2.000" in out


def test_simulate_table1_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("KAPPA_CEILING_SEED", "1234")
    code = main([
        "simulate", "table1", "--trials", "1", "--n", "150",
        "--noise-levels", "1.0", "--format", "json",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["config"]["seed"] == 1234


def test_simulate_table1_flag_beats_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("KAPPA_CEILING_SEED", "1234")
    code = main([
        "simulate", "table1", "--seed", "9", "--trials", "1", "--n", "150",
        "--noise-levels", "1.0", "--format", "json",
    ])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["config"]["seed"] == 9


def test_simulate_table1_bad_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("KAPPA_CEILING_SEED", "not-a-number")
    code = main(["simulate", "table1", "--trials", "1", "--n", "150",
                 "--noise-levels", "1.0"])
    assert code == 2
    assert "KAPPA_CEILING_SEED" in capsys.readouterr().err


def test_simulate_table1_single_trial_passthrough(capsys):
    code = main([
        "simulate", "table1", "--seed", "3", "--trials", "1", "--n", "200",
        "--noise-levels", "0.25", "--format", "json",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    from kappa_ceiling import SimulationConfig, run_trial

    trial = run_trial(
        SimulationConfig(n=200, trials=1, seed=3, noise_levels=(0.25,)), 0.25, 0, 0
    )
    level = doc["sweep"]["levels"][0]
    assert level["kappa_true"] == trial.kappa_true
    assert level["kappa_max_hat"] == trial.kappa_max_hat


def test_simulate_ccc_check_with_points(tmp_path, capsys):
    points_path = tmp_path / "points.csv"
    code = main([
        "simulate", "ccc-check", "--seed", "7", "--trials", "4", "--n", "150",
        "--points-out", str(points_path), "--format", "json",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    lines = points_path.read_text(encoding="utf-8").strip().splitlines()
    assert len(lines) == 4
    first_ccc, first_true = (float(cell) for cell in lines[0].split(","))
    assert [first_ccc, first_true] == doc["ccc_check"]["points"][0]


def test_simulate_invalid_noise_levels_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "table1", "--noise-levels", "a,b"])
    assert exc.value.code == 2


def test_bad_config_value_maps_to_400_and_exit_2(capsys):
    code = main(["simulate", "table1", "--trials", "0", "--n", "150",
                 "--noise-levels", "1.0"])
    assert code == 2
    assert "ConfigError" in capsys.readouterr().err


def test_rendered_three_decimals(fixture_csv, capsys):
    main(analyze_args(fixture_csv))
    out = capsys.readouterr().out
    # full-precision digits never leak into table mode
    assert "0.9856" not in out
    assert "0.986" in out


def test_tab_delimited_input(tmp_path, capsys):
    path = tmp_path / "scores.tsv"
    path.write_text("r1\tr2\n1\t2\n3\t3\n5\t4\n7\t8\n", encoding="utf-8")
    assert main(analyze_args(path, "--tab")) == 0
    assert "kappa_max   0.986" in capsys.readouterr().out


def test_degenerate_evaluation_rendering(tmp_path, capsys):
    # row means vary (4.5 rounds up to 5) but the rounded-mean target is
    # constant; constant rounded predictions give zero expected disagreement
    path = tmp_path / "deg.csv"
    path.write_text(
        "r1,r2,pred\n4,5,5.2\n5,5,4.9\n6,4,5.1\n", encoding="utf-8"
    )
    code = main([
        "evaluate", "--data", str(path),
        "--rater1-col", "r1", "--rater2-col", "r2", "--prediction-col", "pred",
        "--scale-min", "0", "--scale-max", "10",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "qwk               undefined: zero expected disagreement" in out
    assert "warning:" in out


def test_serve_subcommand_parses():
    from kappa_ceiling.cli import build_parser

    args = build_parser().parse_args(["serve", "--host", "0.0.0.0", "--port", "9999"])
    assert args.host == "0.0.0.0"
    assert args.port == 9999


def test_simulate_table1_human_like_flag(capsys):
    code = main([
        "simulate", "table1", "--seed", "5", "--trials", "1", "--n", "200",
        "--noise-levels", "1.0", "--human-like",
    ])
    assert code == 0
    assert "kappa_humanlike_empirical" in capsys.readouterr().out
