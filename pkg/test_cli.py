"""
Tests for faabe/cli.py and the text table in faabe/report.py
"""

import json

import pytest

from faabe.cli import SUBCOMMAND_FLAGS, main, parse_args
from faabe.evaluation import MetricsReport
from faabe.experiment import ComparisonRow
from faabe.report import format_number, render_csv, render_table


def row(dataset, method, mmre, mae, mse, rmse, n=21, similarity="euclidean"):
    return ComparisonRow(dataset, method, MetricsReport(mmre, mae, mse, rmse, n), similarity=similarity)


class TestParseArgs:
    """Test parse_args() for the documented invocations."""

    def test_run_with_tuning_flags(self):
        command = parse_args(["run", "--dataset", "desharnais", "--k", "2", "--pop", "30", "--seed", "7"])

        assert command.name == "run"
        assert command.dataset == "desharnais"
        assert command.overrides == {"k": 2, "pop": 30, "seed": 7, "repeats": 1}

    def test_switches_only_when_given(self):
        assert "strict_basic" not in parse_args(["suite"]).overrides
        command = parse_args(["suite", "--strict-basic", "--no-seed-all-ones", "--repeats", "3"])
        assert command.overrides == {"strict_basic": True, "seed_all_ones": False, "repeats": 3}

    def test_describe_defaults_to_all(self):
        command = parse_args(["describe"])
        assert command.dataset == "all"
        assert command.overrides == {}

    def test_zero_analogies_rejected(self, capsys):
        """Test: --k 0 exits with the config-error code and names the bound."""
        assert main(["run", "--dataset", "albrecht", "--k", "0"]) == 1
        assert "k must be >= 1" in capsys.readouterr().err

    def test_unknown_solution_rejected(self, capsys):
        assert main(["run", "--dataset", "albrecht", "--solution", "mode"]) == 1

    def test_similarity_takes_a_list(self):
        command = parse_args(["suite", "--similarity", "manhattan,euclidean"])
        assert command.overrides["similarity"] == ["manhattan", "euclidean"]

    def test_unknown_similarity_rejected(self, capsys):
        assert main(["run", "--dataset", "albrecht", "--similarity", "cosine"]) == 1
        assert "unknown similarity 'cosine'" in capsys.readouterr().err

    def test_run_needs_dataset(self, capsys):
        assert main(["run"]) == 1

    @pytest.mark.parametrize("subcommand", sorted(SUBCOMMAND_FLAGS))
    def test_help_lists_every_flag(self, subcommand, capsys):
        assert main([subcommand, "--help"]) == 0
        out = capsys.readouterr().out
        for flag in SUBCOMMAND_FLAGS[subcommand]:
            assert flag in out


class TestRenderTable:
    """Test render_table() marks and layout."""

    def test_lower_value_marked_on_both_sides(self):
        text = render_table([row("kemerer", "ABE", 0.5, 10.0, 300.0, 17.0), row("kemerer", "FAABE", 0.4, 12.0, 200.0, 14.0)])
        abe_line, faabe_line = text.splitlines()[2:]

        assert abe_line.split() == ["kemerer", "euclidean", "ABE", "0.5", "10*", "300", "17"]
        assert faabe_line.split() == ["FAABE", "0.4*", "12", "200*", "14*"]

    def test_cocomo_ordering(self):
        """Test: the ABE row comes first; FAABE's lower MMRE carries the mark."""
        text = render_table([row("cocomo81", "ABE", 3.2072, 1.0, 1.0, 1.0), row("cocomo81", "FAABE", 0.7188, 1.0, 1.0, 1.0)])
        lines = text.splitlines()

        assert lines[2].split() == ["cocomo81", "euclidean", "ABE", "3.207", "1", "1", "1"]
        assert lines[3].split() == ["FAABE", "0.7188*", "1", "1", "1"]

    def test_dataset_shown_once_per_group(self):
        rows = [row("a", "ABE", 1, 1, 1, 1), row("a", "FAABE", 2, 2, 2, 2), row("b", "ABE", 1, 1, 1, 1), row("b", "FAABE", 1, 1, 1, 1)]
        lines = render_table(rows).splitlines()[2:]

        assert [line.split()[0] for line in lines] == ["a", "FAABE", "b", "FAABE"]
        assert "*" not in lines[2] + lines[3]

    def test_kinds_compared_separately(self):
        """Test: marks compare ABE with FAABE under the same similarity kind only."""
        rows = [
            row("kemerer", "ABE", 0.5, 1, 1, 1),
            row("kemerer", "FAABE", 0.4, 1, 1, 1),
            row("kemerer", "ABE", 0.3, 1, 1, 1, similarity="manhattan"),
            row("kemerer", "FAABE", 0.6, 1, 1, 1, similarity="manhattan"),
        ]
        lines = render_table(rows).splitlines()[2:]

        assert lines[0].split() == ["kemerer", "euclidean", "ABE", "0.5", "1", "1", "1"]
        assert lines[1].split() == ["FAABE", "0.4*", "1", "1", "1"]
        assert lines[2].split() == ["manhattan", "ABE", "0.3*", "1", "1", "1"]
        assert lines[3].split() == ["FAABE", "0.6", "1", "1", "1"]

    def test_header_and_empty(self):
        assert render_table([]) == ""
        header = render_table([row("a", "ABE", 1, 1, 1, 1)]).splitlines()[0]
        assert header.split() == ["Dataset", "Similarity", "Method", "MMRE", "MAE", "MSE", "RMSE"]

    def test_format_number(self):
        assert format_number(None) == "-"
        assert format_number(3.20719, 4) == "3.207"

    def test_csv_columns(self):
        header = render_csv([row("a", "ABE", 1, 1, 1, 1)]).splitlines()[0]
        assert header == "dataset,similarity,method,seed,mmre,mae,mse,rmse,n"


class TestCommands:
    """Test main() end to end on the toy dataset."""

    def test_describe_json(self, toy_data_dir, capsys):
        assert main(["describe", "--dataset", "toy", "--format", "json"]) == 0
        stats = json.loads(capsys.readouterr().out)["toy"]

        assert stats["projects"] == 12
        assert stats["features"] == 3
        assert (stats["effort_min"], stats["effort_max"], stats["effort_median"]) == (120.0, 560.0, 280.0)

    def test_describe_shipped_benchmarks(self, capsys):
        """Test: a fresh checkout describes and checks the bundled Albrecht and Kemerer files."""
        assert main(["describe", "--check", "--format", "json"]) == 0
        stats = json.loads(capsys.readouterr().out)

        assert {"albrecht", "kemerer"} <= set(stats)
        assert (stats["kemerer"]["projects"], stats["kemerer"]["attributes"]) == (15, 7)
        assert (stats["albrecht"]["projects"], stats["albrecht"]["attributes"]) == (24, 8)

    def test_describe_check_mismatch(self, toy_data_dir):
        manifest = toy_data_dir / "manifests" / "toy.manifest"
        manifest.write_text(manifest.read_text() + "expected_projects = 13\n")
        assert main(["describe", "--dataset", "toy", "--check", "--quiet"]) == 2

    def test_describe_unknown_dataset(self, toy_data_dir):
        assert main(["describe", "--dataset", "nasa93"]) == 1

    def test_run_json(self, toy_data_dir, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["run", "--dataset", "toy", "--pop", "3", "--iters", "2", "--format", "json", "--output-dir", str(out), "--quiet"])

        assert code == 0
        rows = json.loads(capsys.readouterr().out)["rows"]
        assert [r["method"] for r in rows] == ["ABE", "FAABE"]
        assert (out / "toy" / "euclidean" / "0" / "metrics.json").is_file()

    def test_run_missing_csv(self, toy_data_dir, tmp_path):
        (toy_data_dir / "toy.csv").unlink()
        assert main(["run", "--dataset", "toy", "--output-dir", str(tmp_path / "out")]) == 2

    def test_suite_reports_failed_dataset(self, toy_data_dir, tmp_path, capsys):
        conf = tmp_path / "suite.conf"
        conf.write_text(f"datasets = toy, nosuch\npop = 3\niters = 1\nrepeats = 1\noutput_dir = {tmp_path / 'out'}\n")

        assert main(["suite", "--config", str(conf), "--quiet"]) == 2
        assert json.loads((tmp_path / "out" / "summary.json").read_text())["failures"][0]["dataset"] == "nosuch"

    def test_suite_bad_config_key(self, tmp_path):
        conf = tmp_path / "suite.conf"
        conf.write_text("neighbours = 3\n")
        assert main(["suite", "--config", str(conf)]) == 1

    def test_selftest_passes(self):
        assert main(["selftest", "--quiet"]) == 0
