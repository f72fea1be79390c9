import csv
import io
import json
import math
import subprocess
import sys

import pytest

from collphase.cli.config import parse_angle, parse_sweep, scenario_from_dict
from collphase.cli.emit import emit
from collphase.errors import ConfigError
from collphase.cli.main import EXIT_CERTIFICATE, EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, circle_dance_4_config, main
from collphase.cli.run import run_scenario


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize(
    "text, value",
    [("pi", math.pi), ("pi/2", math.pi / 2), ("-pi/2", -math.pi / 2), ("2*pi", 2 * math.pi), (0.25, 0.25), ("3*pi/8", 3 * math.pi / 8)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == value


@pytest.mark.parametrize("text", ["__import__('os')", "pi**2", "x", "", "sin(1)"])
def test_parse_angle_rejects(text):
    with pytest.raises(ConfigError):
        parse_angle(text)


def test_sweep_range_excludes_stop():
    sw = parse_sweep({"parameter": "a", "start": 0, "stop": "2*pi", "step": "pi/8"})
    assert len(sw.values) == 16
    assert sw.values[8] == math.pi
    with pytest.raises(ConfigError):
        parse_sweep({"parameter": "a", "start": 0, "stop": 1, "step": 0})


def test_emit_empty_and_single():
    assert emit([], "csv", ["a", "b"]) == "a,b\n"
    assert emit([{"a": 1, "b": 0.1 + 0.2}], "csv", ["a", "b"]) == "a,b\n1,0.3\n"
    assert json.loads(emit([], "json", ["a"])) == []


def test_emit_json_round_trip():
    recs = [{"x": math.pi / 7, "e": "0 1"}, {"x": 1e-17, "e": "1 1"}]
    back = json.loads(emit(recs, "json", ["x", "e"]))
    for r, b in zip(recs, back):
        assert b["x"] == float(f"{r['x']:.12g}") and b["e"] == r["e"]
    again = json.loads(emit(back, "json", ["x", "e"]))
    assert again == back


def test_hom_builtin(capsys):
    code, out, _ = run_cli(capsys, "hom")
    assert code == EXIT_OK
    probs = [float(r["probability"]) for r in rows(out)]
    assert probs == pytest.approx([0.5, 0.375, 0.0], abs=1e-12)


def test_hom_fermions(capsys):
    code, out, _ = run_cli(capsys, "hom", "--statistics", "fermion", "--format", "json")
    assert code == EXIT_OK
    probs = [r["probability"] for r in json.loads(out)]
    assert probs == pytest.approx([0.5, 0.625, 1.0], abs=1e-12)


def test_circle_dance_builtin(capsys):
    code, out, _ = run_cli(capsys, "circle-dance-4")
    assert code == EXIT_OK
    data = rows(out)
    assert len(data) == 16
    for r in data:
        th = float(r["sweep"])
        assert float(r["probability"]) == pytest.approx((2.375 - 0.125 * math.cos(th)) / 32, abs=1e-11)
    assert float(data[0]["probability"]) == pytest.approx(2.25 / 32, abs=1e-12)
    assert float(data[8]["probability"]) == pytest.approx(2.5 / 32, abs=1e-12)


def test_circle_dance_marginals_constant(capsys):
    code, out, _ = run_cli(capsys, "circle-dance-4", "--marginals", "3")
    assert code == EXIT_OK
    by_event = {}
    for r in rows(out):
        if r["method"] == "marginal":
            by_event.setdefault(r["event"], []).append(float(r["probability"]))
    assert len(by_event) == 20
    for values in by_event.values():
        assert len(values) == 16 and max(values) - min(values) < 1e-11


def test_verify_adds_oracle_columns(capsys):
    code, out, _ = run_cli(capsys, "hom", "--verify")
    assert code == EXIT_OK
    for r in rows(out):
        assert float(r["abs_delta"]) < 1e-8
        assert float(r["oracle"]) == pytest.approx(float(r["probability"]), abs=1e-8)


def test_verify_with_marginals(capsys):
    code, out, _ = run_cli(capsys, "circle-dance-4", "--verify", "--marginals", "2", "--format", "json")
    assert code == EXIT_OK
    assert max(r["abs_delta"] for r in json.loads(out)) < 1e-8


def test_determinism(tmp_path):
    cfg = {
        "multiport": {"type": "random", "modes": 4},
        "input": {"ports": [0, 1, 3], "states": {"type": "gram", "matrix": [
            [[1, 0], [0.3, 0.2], [0.1, 0]], [[0.3, -0.2], [1, 0], [0, 0.4]], [[0.1, 0], [0, -0.4], [1, 0]]]}},
        "events": "all",
        "seed": 5,
    }
    path = tmp_path / "s.json"
    path.write_text(json.dumps(cfg))
    cmd = [sys.executable, "-m", "collphase", "run", str(path), "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b
    assert math.fsum(r["probability"] for r in json.loads(a)) == pytest.approx(1, abs=1e-10)


def test_config_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli(capsys, "run", str(bad))[0] == EXIT_CONFIG
    assert run_cli(capsys, "run", str(tmp_path / "missing.json"))[0] == EXIT_CONFIG
    cfg = circle_dance_4_config()
    cfg["sweep"]["parameter"] = "input.states.nope"
    p = tmp_path / "typo.json"
    p.write_text(json.dumps(cfg))
    code, _, err = run_cli(capsys, "run", str(p))
    assert code == EXIT_CONFIG and "nope" in err
    assert run_cli(capsys, "circle-dance-4", "--marginals", "4")[0] == EXIT_CONFIG
    rand = {"multiport": {"type": "random", "modes": 2}, "input": {"ports": [0, 1], "states": {"type": "pair", "r": 0.5}}}
    p.write_text(json.dumps(rand))
    assert run_cli(capsys, "run", str(p))[0] == EXIT_CONFIG
    assert run_cli(capsys, "run", str(p), "--seed", "3")[0] == EXIT_OK


def test_certificate_errors_exit_3(tmp_path, capsys):
    p = tmp_path / "c.json"
    cfg = {"multiport": {"type": "matrix", "matrix": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]},
           "input": {"ports": [0, 1], "states": {"type": "pair", "r": 0.5}}}
    p.write_text(json.dumps(cfg))
    code, _, err = run_cli(capsys, "run", str(p))
    assert code == EXIT_CERTIFICATE and "unitary" in err
    # four-circle with all r = 0.6 at zero phase is not PSD
    assert run_cli(capsys, "circle-dance-4", "--r", "0.6")[0] == EXIT_CERTIFICATE


def test_normalize_check(capsys):
    code, out, _ = run_cli(capsys, "normalize-check", "--instances", "10", "--seed", "1")
    assert code == EXIT_OK
    assert all(float(r["deviation"]) < 1e-10 for r in rows(out))


def test_verification_failure_exit_4(monkeypatch, capsys):
    import collphase.cli.run as run_mod

    monkeypatch.setattr(run_mod, "oracle_probability", lambda u, inp, ev: 0.123)
    assert run_cli(capsys, "hom", "--verify")[0] == EXIT_VERIFY


def test_out_writes_sidecar(tmp_path, capsys):
    out = tmp_path / "hom.csv"
    assert run_cli(capsys, "hom", "--out", str(out))[0] == EXIT_OK
    assert rows(out.read_text())[0]["probability"] == "0.5"
    meta = json.loads((tmp_path / "hom.csv.meta.json").read_text())
    assert meta["command"] == "hom" and meta["scenario"] == "hom" and "backend" in meta


def test_random_seed_recorded():
    sc = scenario_from_dict({"multiport": {"type": "random", "modes": 3}, "seed": 9,
                             "input": {"ports": [0, 1], "states": {"type": "pair", "r": 0.2}}})
    assert run_scenario(sc).metadata["seed"] == 9
    assert run_scenario(sc, seed=4).metadata["seed"] == 4


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        scenario_from_dict({"multiport": {"type": "beamsplitter"}, "input": {}, "colour": 1})


def test_gaussian_states_scenario(capsys, tmp_path):
    photons = [{"center_frequency": w, "width": 1.0, "arrival_time": t} for w, t in [(0, 0), (0.5, 0.3), (1, 0), (0.5, -0.3)]]
    cfg = {"multiport": {"type": "symmetric4"},
           "input": {"ports": [0, 1, 2, 3], "states": {"type": "gaussian", "photons": photons, "chi": "pi/4"}}}
    p = tmp_path / "g.json"
    p.write_text(json.dumps(cfg))
    code, out, _ = run_cli(capsys, "run", str(p), "--verify")
    assert code == EXIT_OK and float(rows(out)[0]["abs_delta"]) < 1e-8
