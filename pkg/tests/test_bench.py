import csv
import json

import pytest

from wnnrec.bench import ExperimentConfig, ResultRow, emit_report, rows_from_json, run_experiment, run_suite
from wnnrec.cli import main as cli_main
from wnnrec.demo_data import write_synthetic_dataset


@pytest.fixture(scope="module")
def synthetic_dir(tmp_path_factory):
    return write_synthetic_dataset(tmp_path_factory.mktemp("movies"), n_movies=150, n_users=25, seed=3)


@pytest.fixture(scope="module")
def three_user_fixture(tmp_path_factory):
    """Two movies with identical features, so the WNN's prediction for the
    test movie equals the rating it was trained on for the twin movie."""
    root = tmp_path_factory.mktemp("tiny")
    row = "False,\"[{'id': 18, 'name': 'Drama'}]\",%d,en,Twin %d,Twin %d,7.0,500\n"
    (root / "movies_metadata.csv").write_text(
        "adult,genres,id,original_language,original_title,title,vote_average,vote_count\n"
        + row % (901, 1, 1)
        + row % (902, 2, 2)
    )
    (root / "links.csv").write_text("movieId,imdbId,tmdbId\n1,0000001,901\n2,0000002,902\n")
    (root / "ratings.csv").write_text(
        "userId,movieId,rating,timestamp\n"
        "1,1,4.0,100\n1,2,3.5,200\n"   # predict 4.0 vs 3.5 -> hit
        "2,1,1.0,100\n2,2,4.0,200\n"   # predict 1.0 vs 4.0 -> miss
        "3,1,3.0,100\n3,2,3.0,200\n"   # predict 3.0 vs 3.0 -> hit
    )
    return root


def tiny_cfg(root, **kw):
    base = dict(
        model="wnn",
        reviews_per_user=1,
        n_users=3,
        test_cap=1,
        tolerance=1.0,
        seed=0,
        ratings_path=str(root / "ratings.csv"),
        metadata_path=str(root / "movies_metadata.csv"),
        links_path=str(root / "links.csv"),
    )
    base.update(kw)
    return ExperimentConfig(**base)


class TestRunExperiment:
    def test_hand_computed_macro_accuracy(self, three_user_fixture):
        row = run_experiment(tiny_cfg(three_user_fixture))
        assert row.per_user_accuracies == [1.0, 0.0, 1.0]
        assert row.macro_accuracy == pytest.approx(2 / 3)
        assert row.micro_accuracy == pytest.approx(2 / 3)
        assert row.n_users_effective == 3

    def test_huge_tolerance_gives_perfect_accuracy(self, three_user_fixture):
        for model in ("wnn", "weighted", "cf"):
            row = run_experiment(tiny_cfg(three_user_fixture, model=model, tolerance=10.0))
            assert row.macro_accuracy == 1.0

    def test_deterministic_apart_from_timings(self, three_user_fixture):
        a = run_experiment(tiny_cfg(three_user_fixture, model="cf"))
        b = run_experiment(tiny_cfg(three_user_fixture, model="cf"))
        assert a.macro_accuracy == b.macro_accuracy
        assert a.per_user_accuracies == b.per_user_accuracies

    def test_unknown_model_rejected(self, three_user_fixture):
        with pytest.raises(ValueError):
            tiny_cfg(three_user_fixture, model="oracle")

    def test_synthetic_cells_run_for_all_models(self, synthetic_dir):
        for model in ("wnn", "weighted", "cf"):
            cfg = ExperimentConfig(
                model=model,
                reviews_per_user=3,
                n_users=8,
                test_cap=3,
                seed=1,
                weighted={"epochs": 30},
                cf={"epochs": 5},
                ratings_path=str(synthetic_dir / "ratings.csv"),
                metadata_path=str(synthetic_dir / "movies_metadata.csv"),
                links_path=str(synthetic_dir / "links.csv"),
            )
            row = run_experiment(cfg)
            assert 0.0 <= row.macro_accuracy <= 1.0
            assert row.n_users_effective == 8
            assert len(row.per_user_accuracies) == 8
            assert 0.0 <= row.macro_accuracy_tol05 <= row.macro_accuracy


class TestRunSuite:
    def grid(self, synthetic_dir, **kw):
        base = dict(
            n_users=6,
            test_cap=2,
            seed=2,
            weighted={"epochs": 20},
            cf={"epochs": 4},
            ratings_path=str(synthetic_dir / "ratings.csv"),
            metadata_path=str(synthetic_dir / "movies_metadata.csv"),
            links_path=str(synthetic_dir / "links.csv"),
        )
        base.update(kw)
        return base

    def test_full_grid_produces_model_times_r_rows(self, synthetic_dir):
        rows = run_suite(self.grid(synthetic_dir), models=["wnn", "weighted", "cf"], reviews_per_user=[2, 4])
        assert len(rows) == 6
        assert {(r.model, r.reviews_per_user) for r in rows} == {
            (m, rv) for m in ("wnn", "weighted", "cf") for rv in (2, 4)
        }

    def test_single_cell_grid(self, synthetic_dir):
        rows = run_suite(self.grid(synthetic_dir), models=["wnn"], reviews_per_user=[2])
        assert len(rows) == 1

    def test_duplicate_cells_deduplicated(self, synthetic_dir):
        rows = run_suite(self.grid(synthetic_dir), models=["wnn", "wnn"], reviews_per_user=[2, 2])
        assert len(rows) == 1

    def test_failing_cell_identified(self, synthetic_dir):
        grid = self.grid(synthetic_dir, n_users=10_000)
        with pytest.raises(RuntimeError, match="model=wnn R=2"):
            run_suite(grid, models=["wnn"], reviews_per_user=[2])


def sample_rows():
    return [
        ResultRow(
            model=m,
            reviews_per_user=rv,
            macro_accuracy=0.5 + 0.01 * i,
            per_user_accuracies=[0.5, 0.5 + 0.02 * i],
            micro_accuracy=0.5,
            macro_accuracy_tol05=0.3,
            train_time_s=1.5,
            predict_time_s=0.5,
            n_users_effective=2,
        )
        for i, (m, rv) in enumerate(
            (m, rv) for rv in (5, 10, 25, 100, 200) for m in ("wnn", "weighted", "cf")
        )
    ]


class TestReports:
    def test_csv_roundtrip(self, tmp_path):
        rows = sample_rows()
        out = tmp_path / "rows.csv"
        emit_report(rows, "csv", out)
        with open(out) as fh:
            parsed = list(csv.DictReader(fh))
        assert len(parsed) == len(rows)
        for row, doc in zip(rows, parsed):
            assert doc["model"] == row.model
            assert int(doc["R"]) == row.reviews_per_user
            assert float(doc["macro_accuracy"]) == row.macro_accuracy
            assert int(doc["n_users_effective"]) == row.n_users_effective

    def test_markdown_mirrors_grid_layout(self, tmp_path):
        out = tmp_path / "rows.md"
        emit_report(sample_rows(), "md", out)
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 2 + 5  # header + separator + one row per R
        assert lines[0].count("Accuracy") == 3
        assert lines[2].startswith("| 5 |")

    def test_json_roundtrip(self, tmp_path):
        rows = sample_rows()
        out = tmp_path / "rows.json"
        emit_report(rows, "json", out)
        assert rows_from_json(out.read_text()) == rows

    def test_empty_rows_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_report([], "csv", tmp_path / "rows.csv")

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_report(sample_rows(), "xml", tmp_path / "rows.xml")


class TestCli:
    def test_run_and_report(self, three_user_fixture, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(
            json.dumps(
                {
                    "model": "wnn",
                    "reviews_per_user": 1,
                    "n_users": 3,
                    "test_cap": 1,
                    "ratings_path": str(three_user_fixture / "ratings.csv"),
                    "metadata_path": str(three_user_fixture / "movies_metadata.csv"),
                    "links_path": str(three_user_fixture / "links.csv"),
                }
            )
        )
        rows_path = tmp_path / "rows.json"
        assert cli_main(["run", "--config", str(cfg_path), "--out", str(rows_path)]) == 0
        assert "macro=0.6667" in capsys.readouterr().out
        report_path = tmp_path / "report.csv"
        assert cli_main(["report", "--rows", str(rows_path), "--format", "csv", "--out", str(report_path)]) == 0
        assert report_path.read_text().startswith("model,R,")

    def test_failure_exits_nonzero(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"model": "wnn", "ratings_path": "/nonexistent.csv",
                                        "metadata_path": "/no.csv", "links_path": "/no.csv"}))
        assert cli_main(["run", "--config", str(cfg_path)]) == 2
        assert "error" in capsys.readouterr().err
