import json

import numpy as np
import pytest

from conftest import regular_polygon_curve
from rhombidome import files
from rhombidome.cli import main
from rhombidome.cobordism import reduce_to_rhombi
from rhombidome.curve import random_integral_curve
from rhombidome.surface import validate_ledger


@pytest.fixture
def pentagon_file(tmp_path):
    path = tmp_path / "pentagon.json"
    files.write_curve(str(path), regular_polygon_curve(5))
    return str(path)


def test_reduce_pentagon_exit_zero(pentagon_file, tmp_path, capsys):
    out = tmp_path / "ledger.json"
    code = main(["reduce", "--in", pentagon_file, "--out", str(out)])
    assert code == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["stats"]["k"] == 2
    assert printed["valid"] is True
    ledger = files.read_ledger(str(out))
    assert validate_ledger(ledger).passed


def test_reduce_rhombus_identity(tmp_path, unit_square, capsys):
    infile = tmp_path / "square.json"
    files.write_curve(str(infile), unit_square)
    out = tmp_path / "out.json"
    assert main(["reduce", "--in", str(infile), "--out", str(out)]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["stats"]["k"] == 1


def test_reduce_rejects_fractional_edge(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "version": 1,
        "components": [[[0, 0, 0], [1.5, 0, 0], [0.75, 1.0, 0]]],
    }))
    code = main(["reduce", "--in", str(bad), "--out", str(tmp_path / "x.json")])
    assert code == 2


def test_reduce_rejects_malformed_json(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    assert main(["reduce", "--in", str(bad), "--out", str(tmp_path / "x.json")]) == 2


def test_validate_roundtrip_and_fault(tmp_path, pentagon_file, capsys):
    out = tmp_path / "ledger.json"
    assert main(["reduce", "--in", pentagon_file, "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["validate", "--in", str(out)]) == 0
    capsys.readouterr()
    # corrupt one rhombus coordinate
    doc = json.loads(out.read_text())
    doc["rhombi"][0][0][0] += 1e-3
    out.write_text(json.dumps(doc))
    assert main(["validate", "--in", str(out)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert not report["passed"]
    assert main(["validate", "--in", pentagon_file]) == 2  # a curve, not a ledger


def test_ledger_roundtrip_bytes(tmp_path):
    rng = np.random.default_rng(50)
    ledger = reduce_to_rhombi(random_integral_curve(13, rng))
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    files.write_ledger(str(first), ledger)
    files.write_ledger(str(second), files.read_ledger(str(first)))
    assert first.read_bytes() == second.read_bytes()


def test_off_export(tmp_path, capsys):
    rng = np.random.default_rng(51)
    infile = tmp_path / "curve.json"
    files.write_curve(str(infile), random_integral_curve(9, rng))
    out = tmp_path / "ledger.json"
    off = tmp_path / "dome.off"
    assert main(["reduce", "--in", str(infile), "--out", str(out),
                 "--off", str(off)]) == 0
    lines = off.read_text().splitlines()
    assert lines[0] == "OFF"
    n_vert, n_face, _ = map(int, lines[2].split())
    assert n_vert > 0 and n_face > 0
    assert len(lines) == 3 + n_vert + n_face


def test_moduli_exit_codes(capsys):
    assert main(["moduli", "dims", "--surface", "polygon:k=4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["scheme_dim"] == 5 and report["moduli_dim"] == 2
    assert main(["moduli", "dims", "--surface", "antiprism_band:k=4"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["tangent_dim"] >= 3
    assert main(["moduli", "isotropy", "--surface", "antiprism_band:k=4",
                 "--trials", "3"]) == 0
    capsys.readouterr()
    assert main(["moduli", "rank", "--surface", "three_rhombus_pants"]) == 0
    capsys.readouterr()
    assert main(["moduli", "dims", "--surface", "nonexistent"]) == 2
    assert main(["moduli", "rank", "--surface", "pentagon_pants"]) == 1


def test_census_rows_and_budget(tmp_path, capsys):
    csv_path = tmp_path / "census.csv"
    assert main(["census", "--n-min", "6", "--n-max", "6", "--samples", "10",
                 "--seed", "1", "--csv", str(csv_path)]) == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0].startswith("schema_version,")
    assert len(lines) == 11
    for line in lines[1:]:
        row = dict(zip(lines[0].split(","), line.split(",")))
        assert int(row["k"]) <= 36  # 6^2 + 2*6 - 12
        assert int(row["budget"]) == 36


def test_census_empty(tmp_path, capsys):
    csv_path = tmp_path / "empty.csv"
    assert main(["census", "--n-min", "6", "--n-max", "6", "--samples", "0",
                 "--csv", str(csv_path)]) == 0
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == 1


def test_census_pentagon_fixture(tmp_path, capsys):
    csv_path = tmp_path / "fixture.csv"
    assert main(["census", "--n-min", "5", "--n-max", "5", "--samples", "0",
                 "--pentagon-fixture", "--csv", str(csv_path)]) == 0
    lines = csv_path.read_text().strip().splitlines()
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert row["n"] == "5" and row["k"] == "2"


def test_census_usage_error(tmp_path):
    assert main(["census", "--n-min", "3", "--n-max", "4",
                 "--csv", str(tmp_path / "x.csv")]) == 2
