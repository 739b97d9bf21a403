from __future__ import annotations

import json
import shutil
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from kernelsmith import generator
from kernelsmith.cli import main
from kernelsmith.dataset import load_csv, load_schema


@pytest.fixture(scope="module")
def iris_files(tmp_path_factory) -> tuple[Path, Path]:
    root = tmp_path_factory.mktemp("cli")
    csv_path = root / "iris.csv"
    schema_path = root / "iris.schema.json"
    data = resources.files("kernelsmith.data")
    shutil.copy(str(data / "iris.csv"), csv_path)
    shutil.copy(str(data / "iris.schema.json"), schema_path)
    return csv_path, schema_path


def run(argv) -> int:
    return main([str(a) for a in argv])


def test_fit_writes_generator(iris_files, tmp_path, capsys):
    csv_path, schema_path = iris_files
    out = tmp_path / "generator.json"
    code = run(["fit", csv_path, "--schema", schema_path, "--seed", "1", "--out", out])
    assert code == 0
    printed = capsys.readouterr().out
    assert "G=" in printed
    spec = generator.load(out)
    assert 15 <= spec.kernel_count <= 60


def test_fit_bad_schema_exit_2(iris_files, tmp_path):
    csv_path, _ = iris_files
    bad = tmp_path / "bad.schema.json"
    bad.write_text(json.dumps([{"name": "nope", "kind": "numeric"}]))
    assert run(["fit", csv_path, "--schema", bad, "--seed", "1"]) == 2


def test_fit_min_w_too_high_exit_3(iris_files, tmp_path):
    csv_path, schema_path = iris_files
    code = run(
        ["fit", csv_path, "--schema", schema_path, "--seed", "1",
         "--min-w", "151", "--out", tmp_path / "g.json"]
    )
    assert code == 3


def test_gen_respects_size_and_distribution(iris_files, tmp_path):
    csv_path, schema_path = iris_files
    gen_file = tmp_path / "g.json"
    assert run(["fit", csv_path, "--schema", schema_path, "--seed", "1",
                "--out", gen_file]) == 0
    out_csv = tmp_path / "generated.csv"
    assert run(["gen", gen_file, "--size", "150", "--seed", "2",
                "--out", out_csv]) == 0
    d = load_csv(out_csv, load_schema(schema_path))
    assert d.n == 150
    assert np.array_equal(d.class_counts(), [50, 50, 50])


def test_gen_bad_class_dist_exit_2(iris_files, tmp_path):
    csv_path, schema_path = iris_files
    gen_file = tmp_path / "g.json"
    run(["fit", csv_path, "--schema", schema_path, "--seed", "1", "--out", gen_file])
    code = run(["gen", gen_file, "--size", "30", "--seed", "2",
                "--class-dist", "0.3,0.3,0.3", "--out", tmp_path / "x.csv"])
    assert code == 2


def test_gen_seed_reproducible_bytes(iris_files, tmp_path):
    csv_path, schema_path = iris_files
    gen_file = tmp_path / "g.json"
    run(["fit", csv_path, "--schema", schema_path, "--seed", "1", "--out", gen_file])
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run(["gen", gen_file, "--size", "60", "--seed", "9", "--out", a])
    run(["gen", gen_file, "--size", "60", "--seed", "9", "--out", b])
    assert a.read_bytes() == b.read_bytes()


def test_eval_self_comparison(iris_files, tmp_path, capsys):
    csv_path, schema_path = iris_files
    report_path = tmp_path / "report.json"
    code = run(
        ["eval", csv_path, csv_path, "--schema", schema_path, "--seed", "3",
         "--repeats-cv", "2", "--out", report_path]
    )
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["equal_fraction"] == 1.0
    assert report["ari"] == 1.0
    assert report["stats"]["delta_mean"] == 0.0
    assert report["kernel_count"] is None  # no --generator passed
    table = capsys.readouterr().out
    assert "dataset" in table and "ARI" in table


def test_eval_includes_generator_metadata(iris_files, tmp_path):
    csv_path, schema_path = iris_files
    gen_file = tmp_path / "g.json"
    run(["fit", csv_path, "--schema", schema_path, "--seed", "1", "--out", gen_file])
    out_csv = tmp_path / "gen.csv"
    run(["gen", gen_file, "--size", "60", "--seed", "2", "--out", out_csv])
    report_path = tmp_path / "report.json"
    code = run(
        ["eval", csv_path, out_csv, "--schema", schema_path, "--seed", "3",
         "--repeats-cv", "1", "--repeats-ari", "1",
         "--generator", gen_file, "--out", report_path]
    )
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["kernel_count"] >= 15
    assert report["build_seconds"] is not None
    assert report["format"] == "kernelsmith-report/v1"


def test_eval_schema_mismatch_exit_2(iris_files, tmp_path):
    csv_path, schema_path = iris_files
    other = tmp_path / "other.csv"
    other.write_text("a,b\n1,x\n")
    assert run(["eval", csv_path, other, "--schema", schema_path,
                "--seed", "1"]) == 2


def test_seed_required_in_ci(iris_files, tmp_path, monkeypatch):
    csv_path, schema_path = iris_files
    monkeypatch.setenv("CI", "1")
    with pytest.raises(SystemExit) as err:
        run(["fit", csv_path, "--schema", schema_path, "--out", tmp_path / "g.json"])
    assert err.value.code == 2


def test_clock_seed_echoed_outside_ci(iris_files, tmp_path, monkeypatch, capsys):
    csv_path, schema_path = iris_files
    monkeypatch.delenv("CI", raising=False)
    code = run(["fit", csv_path, "--schema", schema_path, "--out", tmp_path / "g.json"])
    assert code == 0
    assert "seed:" in capsys.readouterr().out
