from __future__ import annotations

import csv
import json

import pytest

from nlpot.cli import main, parse_field
from nlpot.operator import Gaussian, HarmonicWeighted, PolyDecay, StretchedExp


def _run(tmp_path, name, *argv):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_bytes()


def _rows(data: bytes):
    return list(csv.reader(data.decode().splitlines()))


def test_reconstruct_csv_format(tmp_path):
    code, data = _run(tmp_path, "v.csv", "reconstruct", "--model", "frac:1", "--field", "polydecay:1", "--grid", "0,2")
    assert code == 0
    assert b"\r" not in data and data.endswith(b"\n")
    rows = _rows(data)
    assert rows[0] == ["x", "V", "est_err"]
    x, v, _ = (float(c) for c in rows[2])
    assert x == 2.0
    # kappa = alpha = 1 on the line gives V = (x^2 - 1) / (x^2 + 1)
    assert v == pytest.approx(0.6, rel=1e-9)
    # 17 significant digits round-trip the float exactly
    assert float(rows[1][1]) == float(f"{float(rows[1][1]):.17g}")
    assert len(rows[1][1].lstrip("-").replace(".", "").split("e")[0].lstrip("0")) >= 15


def test_output_is_deterministic_across_threads(tmp_path, monkeypatch):
    argv = ["reconstruct", "--model", "rel:1,1", "--field", "gaussian:1", "--grid=-3:3:13"]
    _, one = _run(tmp_path, "a.csv", *argv, "--threads", "1")
    _, four = _run(tmp_path, "b.csv", *argv, "--threads", "4")
    monkeypatch.setenv("NLPOT_THREADS", "3")
    _, env = _run(tmp_path, "c.csv", *argv)
    assert one == four == env


def test_bad_thread_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("NLPOT_THREADS", "many")
    assert main(["reconstruct", "--out", str(tmp_path / "x.csv")]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["kernel", "--model", "frac:1", "--n", "4"],
        ["sigma", "--n", "4"],
        ["sigma", "--mass"],
        ["apply", "--model", "frac:1", "--field", "gaussian:1", "--grid", "0:1:3"],
        ["closedform", "--kappa", "1.5", "--alpha", "0.7", "--grid", "0:2:3"],
        ["closedform", "--verify", "--grid", "0,1"],
        ["closedform", "--d", "2", "--l", "1", "--kappa", "1.5", "--grid", "0.5,1"],
        ["sign", "--model", "frac:0.5", "--field", "polydecay:0.2", "--n", "5"],
        ["threshold", "--mode", "plus", "--alpha", "1"],
        ["pinning", "--R", "1"],
        ["nondecay", "--grid", "2:6:5"],
    ],
)
def test_subcommands_succeed(tmp_path, argv):
    code, data = _run(tmp_path, "out.txt", *argv)
    assert code == 0
    assert data


def test_kregion_json(tmp_path):
    code, data = _run(tmp_path, "k.json", "kregion", "--mode", "plus", "--alpha", "1", "--kappa", "0.49")
    assert code == 0
    payload = json.loads(data)
    assert set(payload) == {"K_value", "argopt_t"}
    assert payload["K_value"] > 0 and 0 < payload["argopt_t"] < 1


def test_pinning_json_gap(tmp_path):
    _, data = _run(tmp_path, "p.json", "pinning", "--R", "1")
    assert json.loads(data)["delta_V0"] == pytest.approx(0.36338022763241873, rel=1e-8)


def test_decay_fit_json(tmp_path):
    code, data = _run(tmp_path, "f.json", "decay-fit", "--model", "frac:1", "--field", "polydecay:0.75")
    payload = json.loads(data)
    assert code == 0
    assert payload["verdict"] == "pass"
    assert payload["predicted"] == -0.5


def test_closedform_verify_outside_decay_table(tmp_path):
    _, data = _run(tmp_path, "c.json", "closedform", "--verify", "--kappa", "1", "--alpha", "1", "--grid", "0,1,2")
    payload = json.loads(data)
    assert payload["max_residual"] < 1e-5
    assert payload["V0"] == pytest.approx(-1.0, rel=1e-12)
    assert payload["decay_exponent"] is None and payload["sign"] is None


@pytest.mark.parametrize(
    "argv",
    [
        ["reconstruct", "--no-such-flag"],
        ["no-such-command"],
        ["reconstruct", "--model", "frac:3"],
        ["reconstruct", "--field", "polydecay"],
        ["reconstruct", "--grid", "0:1"],
        ["closedform", "--kappa", "0.5", "--l", "1"],
        ["kregion", "--mode", "plus", "--kappa", "0.7"],
        [],
    ],
)
def test_input_errors_exit_with_one(tmp_path, argv):
    assert main([*argv, "--out", str(tmp_path / "x")] if argv else argv) == 1


@pytest.mark.parametrize(
    "text, cls",
    [("polydecay:0.5", PolyDecay), ("gaussian:2", Gaussian), ("stretched:1,0.5,1", StretchedExp), ("motiv:1.5,1", HarmonicWeighted)],
)
def test_parse_field(text, cls):
    assert isinstance(parse_field(text, 1), cls)


def test_parse_field_rejects_garbage():
    with pytest.raises(ValueError):
        parse_field("motiv:1.5,3", 1)
    with pytest.raises(ValueError):
        parse_field("triangle:1", 1)


def test_verify_runs_every_criterion(tmp_path):
    code, data = _run(tmp_path, "verify.txt", "verify")
    lines = data.decode().splitlines()
    assert code == 0
    assert len([l for l in lines if l.startswith("[PASS]")]) == 13
