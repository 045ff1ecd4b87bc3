import json

import pytest

from unity_filters import fourierpairs as fp
from unity_filters.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_power_sums_divisors(capsys):
    code, data = run_json(capsys, "power-sums", "--n", "12", "--divisors", "4,12", "--all-c")
    assert code == 0
    assert data["a"] == {"1": 0, "2": 0, "3": 3, "4": 0, "6": 3, "12": 3}


def test_power_sums_exponents(capsys):
    code, out, _ = run(capsys, "power-sums", "--n", "2", "--exponents", "1")
    assert code == 0 and "a_1  -1" in out
    code, data = run_json(capsys, "power-sums", "--n", "12", "--exponents", "0,4")
    assert data["a"]["1"] is None


def test_power_sums_bad_input(capsys):
    code, _, err = run(capsys, "power-sums", "--n", "12", "--divisors", "13")
    assert code == 2 and "13" in err
    assert run(capsys, "power-sums", "--n", "12")[0] == 2
    assert run(capsys, "power-sums", "--n", "12", "--divisors", "4", "--c", "5")[0] == 2
    assert run(capsys, "power-sums")[0] == 2


def test_check_theorem_filter(capsys):
    code, data = run_json(capsys, "check-theorem", "--which", "filter", "--size", "3")
    assert code == 0
    assert (data["tested"], data["filters"], data["failed"]) == (255, 8, 0)
    assert data["counterexamples"] == []


def test_check_theorem_filter_single_system(capsys):
    code, data = run_json(capsys, "check-theorem", "--which", "filter", "--size", "2",
                          "--weights", "1,0.5", "--system", "3,0")
    assert code == 0
    assert data["filter_generator"] is None and data["nonnegative"] is False


def test_check_theorem_roots(capsys):
    code, data = run_json(capsys, "check-theorem", "--which", "roots", "--n", "60")
    assert code == 0
    assert (data["tested"], data["filters"], data["failed"]) == (4095, 12, 0)


def test_check_theorem_caps(capsys):
    assert run(capsys, "check-theorem", "--which", "filter", "--size", "9")[0] == 2
    assert run(capsys, "check-theorem", "--which", "roots", "--n", "720720")[0] == 2
    assert run(capsys, "check-theorem", "--which", "roots")[0] == 2


def test_check_theorem_jobs_deterministic(capsys):
    base = ["check-theorem", "--which", "filter", "--size", "3", "--seed", "4", "--json"]
    main(base + ["--jobs", "1"])
    a = json.loads(capsys.readouterr().out)
    main(base + ["--jobs", "3"])
    b = json.loads(capsys.readouterr().out)
    for r in (a, b):
        r.pop("wall_time")
        r.pop("command")
    assert a == b


def test_cap_override_env(capsys, monkeypatch):
    monkeypatch.setenv("UNITY_FILTERS_CAP_OVERRIDE", "nope")
    assert run(capsys, "fourier", "brute", "--n", "2")[0] == 2
    monkeypatch.delenv("UNITY_FILTERS_CAP_OVERRIDE")
    # 2^17 has 18 divisors, above the default cap of 16
    assert run(capsys, "check-theorem", "--which", "roots", "--n", str(2**17))[0] == 2
    monkeypatch.setenv("UNITY_FILTERS_CAP_OVERRIDE", "18")
    code, data = run_json(capsys, "check-theorem", "--which", "roots", "--n", str(2**17))
    assert code == 0 and data["filters"] == 18


def test_fourier_enumerate(capsys):
    code, out, _ = run(capsys, "fourier", "enumerate", "--n", "4")
    assert code == 0 and out.startswith("8 matrices")
    code, data = run_json(capsys, "fourier", "enumerate", "--n", "3", "--mode", "exhaustive")
    assert data["count"] == 5


def test_fourier_verify(capsys):
    code, out, _ = run(capsys, "fourier", "verify", "--n", "12", "--d", "3", "--t", "2")
    assert code == 0
    assert fp.build_eps(12, 3, 2).to_text() in out
    assert "idempotent: true" in out


def test_fourier_verify_file(capsys, tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("1000\n0000\n0000\n0000\n")
    assert run(capsys, "fourier", "verify", "--in", str(f))[0] == 1
    f.write_text(json.dumps(fp.build_eps(4, 2, 1).to_json()))
    code, data = run_json(capsys, "fourier", "verify", "--in", str(f))
    assert code == 0 and data["params"] == {"d": 2, "t": 1}


def test_fourier_partner(capsys, tmp_path):
    code, data = run_json(capsys, "fourier", "partner", "--n", "4", "--d", "4", "--t", "1")
    assert code == 0 and data["rows"] == ["1000", "0001", "0010", "0100"]
    f = tmp_path / "m.txt"
    f.write_text("0100\n0000\n0000\n0000\n")
    assert run(capsys, "fourier", "partner", "--in", str(f))[0] == 1


def test_fourier_brute(capsys):
    code, out, _ = run(capsys, "fourier", "brute", "--n", "4")
    assert code == 0 and out.strip() == "exhaustive = classified: 8 = 8"
    assert run(capsys, "fourier", "brute", "--n", "6")[0] == 2


def test_grpeq_enumerate(capsys):
    code, out, _ = run(capsys, "grpeq", "enumerate", "--n", "6")
    assert code == 0 and out.startswith("12 solutions")
    code, data = run_json(capsys, "grpeq", "enumerate", "--group", "2,2")
    assert data["count"] == 35


def test_grpeq_verify_pairing_file(capsys, tmp_path):
    f = tmp_path / "pairing.json"
    f.write_text(json.dumps({
        "H1": [[1, 0]], "H2": [[0, 1]],
        "omega": [[[0, 0], [0, 0], 0], [[0, 0], [0, 1], 0], [[1, 0], [0, 0], 0], [[1, 0], [0, 1], 1]],
    }))
    code, out, _ = run(capsys, "grpeq", "verify", "--group", "2,2", "--in", str(f))
    assert code == 0 and "result: pass" in out


def test_grpeq_verify_bad_solution(capsys, tmp_path):
    f = tmp_path / "sol.json"
    f.write_text(json.dumps({"group": [2], "denominator": 1, "entries": [[None, None], [None, None]]}))
    code, data = run_json(capsys, "grpeq", "verify", "--in", str(f))
    assert code == 1 and data["failed"] == 1


def test_grpeq_verify_family(capsys):
    code, data = run_json(capsys, "grpeq", "verify", "--n", "8")
    assert code == 0 and data["tested"] == 15


def test_grpeq_bridge(capsys):
    code, out, _ = run(capsys, "grpeq", "bridge", "--n", "12")
    assert code == 0 and "bijection confirmed" in out and "28" in out
    assert run(capsys, "grpeq", "bridge")[0] == 2
