"""CLI behavior: commands, exit codes, manifests, reproducible outputs."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from atppoints.cli import main
from conftest import SAMPLE_MATCHES, SAMPLE_RANKINGS

MATCHES = str(SAMPLE_MATCHES)
RANKINGS = str(SAMPLE_RANKINGS)


@pytest.fixture()
def runner():
    return CliRunner()


def tree_bytes(out_dir: Path, exclude: tuple[str, ...] = ("manifest.json",)) -> dict[str, bytes]:
    return {
        p.name: p.read_bytes()
        for p in sorted(out_dir.iterdir())
        if p.name not in exclude
    }


def manifest_of(out_dir: Path) -> dict:
    return json.loads((out_dir / "manifest.json").read_text())


class TestFit:
    def test_fit_sample(self, runner, tmp_path):
        out = tmp_path / "fit"
        result = runner.invoke(main, ["fit", MATCHES, "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "alpha=" in result.output
        assert (out / "params.txt").exists()
        assert (out / "report.txt").exists()
        params = (out / "params.txt").read_text()
        assert "alpha=" in params
        assert "dataset_fingerprint=" in params
        manifest = manifest_of(out)
        assert manifest["command"] == "fit"
        assert MATCHES in manifest["inputs"]

    def test_fit_empty_date_range_fails_cleanly(self, runner, tmp_path):
        out = tmp_path / "fit"
        result = runner.invoke(main, [
            "fit", MATCHES, "--from", "1990-01-01", "--to", "1990-12-31",
            "--out", str(out),
        ])
        assert result.exit_code == 5
        assert "no matches" in result.output
        assert not (out / "params.txt").exists()

    def test_fit_missing_file_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, ["fit", "missing.csv", "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_fit_schema_error_exit_code(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        result = runner.invoke(main, ["fit", str(bad), "--out", str(tmp_path / "o")])
        assert result.exit_code == 3
        assert "schema error" in result.output

    def test_fit_io_error_exit_code(self, runner, tmp_path):
        blocker = tmp_path / "occupied"
        blocker.write_text("i am a file, not a directory")
        result = runner.invoke(main, ["fit", MATCHES, "--out", str(blocker / "sub")])
        assert result.exit_code == 4
        assert "i/o error" in result.output

    def test_fit_byte_identical_reruns(self, runner, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            result = runner.invoke(main, ["fit", MATCHES, "--out", str(out)])
            assert result.exit_code == 0
        assert tree_bytes(out_a) == tree_bytes(out_b)
        ma, mb = manifest_of(out_a), manifest_of(out_b)
        for m in (ma, mb):
            m.pop("created_at")
            m["flags"].pop("out")
        assert ma == mb


class TestPredict:
    def test_even_points(self, runner):
        result = runner.invoke(main, ["predict", "--alpha", "0.8722", "1000", "1000"])
        assert result.exit_code == 0
        assert "probability 0.500000" in result.output
        assert "ratio       1.000000" in result.output

    def test_double_points_alpha_one(self, runner):
        result = runner.invoke(main, ["predict", "--alpha", "1", "2000", "1000"])
        assert result.exit_code == 0
        assert "probability 0.666667" in result.output

    def test_matches_model_oracle(self, runner):
        result = runner.invoke(main, ["predict", "--alpha", "0.8722", "10000", "1000"])
        # 10^0.8722 / (1 + 10^0.8722) to six decimals
        assert "probability 0.881667" in result.output

    def test_non_positive_points_usage_error(self, runner):
        result = runner.invoke(main, ["predict", "--alpha", "1", "0", "1000"])
        assert result.exit_code == 2

    def test_params_file_source(self, runner, tmp_path):
        out = tmp_path / "fit"
        assert runner.invoke(main, ["fit", MATCHES, "--out", str(out)]).exit_code == 0
        result = runner.invoke(
            main, ["predict", "--params", str(out / "params.txt"), "1500", "1500"]
        )
        assert result.exit_code == 0
        assert "probability 0.500000" in result.output

    def test_requires_alpha_or_params(self, runner):
        result = runner.invoke(main, ["predict", "100", "200"])
        assert result.exit_code == 2


class TestEvaluate:
    def test_prints_scores(self, runner):
        result = runner.invoke(main, ["evaluate", MATCHES, "--alpha", "0.8722"])
        assert result.exit_code == 0
        assert "e2" in result.output
        assert "baseline_e2" in result.output

    def test_writes_optional_report(self, runner, tmp_path):
        out = tmp_path / "eval"
        result = runner.invoke(
            main, ["evaluate", MATCHES, "--alpha", "0.9", "--out", str(out)]
        )
        assert result.exit_code == 0
        assert (out / "evaluation.txt").exists()
        assert (out / "manifest.json").exists()


class TestReport:
    def test_full_report(self, runner, tmp_path):
        out = tmp_path / "report"
        result = runner.invoke(main, [
            "report", MATCHES, "--rankings", RANKINGS,
            "--alpha", "0.8722", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        for name in (
            "ratio_curve.csv", "ratio_curve.svg", "calibration.csv",
            "calibration.svg", "rank_stats.csv", "rank_stats.txt",
            "participation.csv", "participation.txt", "ingest_report.txt",
            "manifest.json",
        ):
            assert (out / name).exists(), name

    def test_missing_rankings_skips_tables_keeps_figures(self, runner, tmp_path):
        out = tmp_path / "report"
        result = runner.invoke(main, [
            "report", MATCHES, "--alpha", "0.8722", "--out", str(out),
        ])
        assert result.exit_code == 0
        assert (out / "ratio_curve.svg").exists()
        assert not (out / "rank_stats.csv").exists()
        assert "rank-band tables skipped" in result.output

    def test_byte_identical_reruns(self, runner, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            result = runner.invoke(main, [
                "report", MATCHES, "--rankings", RANKINGS,
                "--alpha", "0.8722", "--out", str(out),
            ])
            assert result.exit_code == 0
        assert tree_bytes(out_a) == tree_bytes(out_b)


def write_small_sim_config(tmp_path: Path) -> Path:
    calendar = tmp_path / "calendar.csv"
    lines = ["week,category,draw_size", "3,grand_slam,128",
             "10,masters_1000,64", "20,masters_1000,64"]
    lines += [f"{w},tour_500,32" for w in (15, 30)]
    lines += [f"{w},tour_250,32" for w in (5, 25, 35, 40, 45)]
    calendar.write_text("\n".join(lines) + "\n")
    config = tmp_path / "season.cfg"
    config.write_text(
        f"calendar={calendar.name}\n"
        "n_players=140\n"
        "n_seasons=2\n"
        "burn_in=0\n"
        "top30_mandatory=true\n"
        "n_500_choices=3\n"
        "n_250_choices=3\n"
    )
    return config


class TestSimulate:
    def test_simulate_writes_report(self, runner, tmp_path):
        config = write_small_sim_config(tmp_path)
        out = tmp_path / "sim"
        result = runner.invoke(main, [
            "simulate", "--config", str(config), "--seed", "42", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert (out / "seasons.csv").exists()
        summary = (out / "summary.txt").read_text()
        assert "1260" in summary  # rank-32 ideal-schedule reference
        header = (out / "seasons.csv").read_text().splitlines()[0]
        assert header == "season,week,player,points,rank"
        manifest = manifest_of(out)
        assert manifest["seed"] == 42

    def test_same_seed_identical_outputs(self, runner, tmp_path):
        config = write_small_sim_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            result = runner.invoke(main, [
                "simulate", "--config", str(config), "--seed", "7", "--out", str(out),
            ])
            assert result.exit_code == 0
        assert tree_bytes(out_a) == tree_bytes(out_b)

    def test_infeasible_pool_clean_error(self, runner, tmp_path):
        config = write_small_sim_config(tmp_path)
        out = tmp_path / "sim"
        result = runner.invoke(main, [
            "simulate", "--config", str(config), "--players", "50", "--out", str(out),
        ])
        assert result.exit_code == 5
        assert "pool" in result.output


class TestIngestDump:
    def test_dump_and_counters(self, runner, tmp_path):
        out = tmp_path / "dump"
        result = runner.invoke(main, ["ingest-dump", MATCHES, "--out", str(out)])
        assert result.exit_code == 0
        assert "kept" in result.output
        lines = (out / "observations.csv").read_text().splitlines()
        assert lines[0] == "date,level,round,winner_points,loser_points"
        assert len(lines) == 1 + 184  # golden kept count
        assert (out / "manifest.json").exists()
