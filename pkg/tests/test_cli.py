import csv
import io
import json
import math

import numpy as np
import pytest

from hilbertmorrey import cli
from hilbertmorrey.norms import lp_norm
from hilbertmorrey.seq import make_sequence
from small_config import SMALL


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def fixture_file(tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"lo": -2, "values": [0.5, -1.0, 2.0, 0.25]}))
    return str(path)


def test_transform_delta(capsys):
    code, out, err = run(capsys, "transform", "--delta", "0", "--window", "64")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1
    n, hb = np.array(doc["n"]), np.array(doc["Hb"])
    assert np.array_equal(hb[n != 0], 1.0 / n[n != 0]) and hb[n == 0] == 0
    assert doc["tail_bound"] == pytest.approx(1 / 65) and "transform:" in err


def test_transform_fast_matches_naive(capsys, fixture_file):
    _, a, _ = run(capsys, "transform", "--fixture", fixture_file, "--window", "100", "--naive")
    _, b, _ = run(capsys, "transform", "--fixture", fixture_file, "--window", "100", "--fast")
    ha, hb = np.array(json.loads(a)["Hb"]), np.array(json.loads(b)["Hb"])
    assert np.max(np.abs(ha - hb)) <= 1e-9 * np.max(np.abs(ha))


def test_transform_usage_errors(capsys, tmp_path):
    assert run(capsys, "transform", "--delta", "80", "--window", "64")[0] == 2
    assert run(capsys, "transform", "--delta", "0")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"lo": 0, "vals": [1]}')
    assert run(capsys, "transform", "--fixture", str(bad), "--window", "4")[0] == 2
    bad.write_text("not json")
    assert run(capsys, "transform", "--fixture", str(bad), "--window", "4")[0] == 2
    assert run(capsys, "transform", "--fixture", str(tmp_path / "missing.json"),
               "--window", "4")[0] == 2
    assert run(capsys, "transform", "--delta", "0", "--values", "1", "--window", "4")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_apconst_power_one(capsys):
    code, out, _ = run(capsys, "apconst", "--weight", "power:1", "--p", "2", "--window", "64")
    doc = json.loads(out)
    assert code == 0 and math.isfinite(doc["value"]) and len(doc["witness"]) == 2
    assert doc["value"] > 1
    assert run(capsys, "apconst", "--weight", "power:1", "--p", "1", "--window", "8")[0] == 2
    assert run(capsys, "apconst", "--weight", "const:-1", "--p", "2")[0] == 2
    code, out, _ = run(capsys, "apconst", "--weight", "const:1", "--p", "2", "--window", "40",
                       "--doubling", "--max-n", "8")
    doc = json.loads(out)
    assert doc["value"] == 1.0 and doc["reverse_doubling"]["value"] == pytest.approx(35 / 17)


def test_norm_lambda_zero_is_l2(capsys, fixture_file):
    code, out, _ = run(capsys, "norm", "--weight", "const:1", "--p", "2", "--lambda", "0",
                       "--fixture", fixture_file)
    b = make_sequence([0.5, -1.0, 2.0, 0.25], -2)
    assert code == 0 and json.loads(out)["value"] == pytest.approx(lp_norm(b, 2), rel=1e-14)
    code, out, _ = run(capsys, "norm", "--p", "2", "--lambda", "0.25", "--delta", "3")
    assert json.loads(out) == {"schema_version": 1, "value": 1.0, "exactness": "exact",
                               "witness": [3, 0]}
    assert run(capsys, "norm", "--p", "2", "--lambda", "0.7", "--delta", "0")[0] == 2


def test_embed_csv(capsys, fixture_file):
    code, out, _ = run(capsys, "embed", "--fixture", fixture_file, "--samples", "1000")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0][:5] == ["x", "f", "w", "Sf", "Mf"]
    assert len(rows) == 1001
    assert run(capsys, "embed", "--delta", "0", "--samples", "0")[0] == 2


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--windows", "256", "1024")
    doc = json.loads(out)
    assert code == 0 and [r["window"] for r in doc["rows"]] == [256, 1024]
    assert all(r["max_rel_diff"] <= 1e-9 for r in doc["rows"])


def test_verify_config_errors(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"checks": [], "extra": 1}')
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2
    cfg.write_text("{broken")
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2
    assert run(capsys, "verify", "--config", str(tmp_path / "none.json"))[0] == 2
    cfg.write_text('{"checks": []}')
    assert run(capsys, "verify", "--config", str(cfg), "--json", "/nonexistent/dir/r.json")[0] == 2


def test_verify_negative_control(capsys):
    code, out, err = run(capsys, "verify", "--config", "negative-control")
    assert code == 1 and "FAIL" in err
    assert json.loads(out)["summary"]["apconst"]["failed"] == 1


def test_verify_same_seed_identical_files(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "small.json"
    cfg.write_text(json.dumps(SMALL))
    paths = []
    for i, jobs in enumerate(("1", "2")):
        monkeypatch.setenv(cli.JOBS_ENV, jobs)
        j, c = tmp_path / f"r{i}.json", tmp_path / f"r{i}.csv"
        assert run(capsys, "verify", "--config", str(cfg), "--json", str(j), "--csv", str(c))[0] == 0
        paths.append((j.read_bytes(), c.read_bytes()))
    assert paths[0] == paths[1]


def test_verify_default_config_passes(capsys, tmp_path):
    out = tmp_path / "default.json"
    code, _, err = run(capsys, "verify", "--json", str(out))
    doc = json.loads(out.read_text())
    assert code == 0, err
    assert set(doc["summary"]) == {"riesz", "weak11", "l1_log", "pointwise_bound", "morrey_bound",
                                   "domination", "embedding_norm", "reverse_doubling", "shell_growth",
                                   "apconst", "operator_norm"}
    assert all(s["failed"] == 0 for s in doc["summary"].values())
