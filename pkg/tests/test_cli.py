import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from helpers import CORPUS, corpus_path, load
from regen_snapshots import SNAP, render, snapshot_cases
from stationarity.cli import oracle as oracle_module
from stationarity.cli.main import EXIT_DEGENERATE, EXIT_INPUT, EXIT_OK, EXIT_UNAVAILABLE, main, run
from stationarity.cli.oracle import Surd, evaluate, grid_oracle
from stationarity.cli.problem import format_rational, parse_problem, parse_rational, problem_to_dict, serialize_problem
from stationarity.errors import DegenerateInput, InputError


def path(name):
    return str(corpus_path(name))


def write(tmp_path, data, name="p.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def minimal(**over):
    d = {
        "schema_version": 1,
        "n": 1,
        "objective": {"gradient": ["1"], "affine": True},
        "G": [{"value": "0", "gradient": ["1"], "affine": True}],
        "H": [{"value": "0", "gradient": ["0"], "affine": True}],
    }
    d.update(over)
    return d


def test_rationals():
    assert parse_rational("3/4", "x") == Fraction(3, 4)
    assert parse_rational(-2, "x") == -2
    for bad in ("2/4", "-0", "3/1", "1.5", 1.5, True, "1/0", "", "+1"):
        with pytest.raises(InputError):
            parse_rational(bad, "x")
    assert format_rational(Fraction(-3, 4)) == "-3/4"


def test_corpus_round_trip():
    for name in CORPUS:
        raw = corpus_path(name).read_text()
        prob = parse_problem(raw)
        assert serialize_problem(prob) == raw
        again = parse_problem(serialize_problem(prob))
        assert again.point == prob.point and problem_to_dict(again) == problem_to_dict(prob)


def test_linear_corpus_point():
    p = load("linear_m_not_extended").point
    assert (p.n, p.l, p.q) == (3, 2, 1)
    assert all(fd.affine for fd in (p.f,) + p.g + p.G + p.H)


def test_infeasible_file_is_rejected(tmp_path):
    d = minimal()
    d["G"][0]["value"] = "-1"
    out = run(["classify", write(tmp_path, d)])
    assert out.code == EXIT_INPUT and "G_i(x) >= 0 violated at i = 1" in out.message


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda d: d.update(schema_version=2), "schema_version"),
        (lambda d: d.update(n=2), "expected 2 entries"),
        (lambda d: d["objective"].update(gradient=[0.5]), "p/q"),
        (lambda d: d.pop("objective"), "objective"),
    ],
)
def test_malformed_files(tmp_path, mutate, fragment):
    d = minimal()
    mutate(d)
    out = run(["classify", write(tmp_path, d)])
    assert out.code == EXIT_INPUT and fragment in out.message


def test_input_errors_exit_two(tmp_path):
    assert run(["classify", str(tmp_path / "missing.json")]).code == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["classify", str(bad)]).code == EXIT_INPUT
    lin = path("linear_m_not_extended")
    assert run(["classify", lin, "--direction", "0,1"]).code == EXIT_INPUT
    assert run(["classify", lin, "--direction", "0,1,0"]).code == EXIT_INPUT  # not critical
    assert run(["classify", lin, "--direction", "0,x,1"]).code == EXIT_INPUT
    assert run(["multipliers", lin, "--core-set", "g9"]).code == EXIT_INPUT
    assert run(["oracle", lin, "--radius", "-1"]).code == EXIT_INPUT


def test_unavailable_data_exits_three(tmp_path):
    lin = path("abs_power_nlp")
    assert run(["second-order", lin, "--direction", "0,1"]).code == EXIT_UNAVAILABLE
    assert run(["second-order", lin]).code == EXIT_OK  # a certified violation was found anyway
    d = minimal(objective={"gradient": ["1"]})
    assert run(["oracle", write(tmp_path, d)]).code == EXIT_UNAVAILABLE


def test_degenerate_pivot_exits_four(monkeypatch):
    from stationarity.cli import report

    def boom(*a, **k):
        raise DegenerateInput("forced")

    monkeypatch.setattr(report, "pivot", boom)
    assert run(["strong-m", path("linear_pivot_descent")]).code == EXIT_DEGENERATE


def test_classify_summary():
    rep = run(["classify", path("linear_m_not_extended")]).report
    c = rep["conditions"]
    assert c["M_stationarity"]["holds"] and c["M_stationarity"]["multiplier"] == ["1", "3", "0", "-2"]
    assert not c["S_stationarity"]["holds"]
    assert not c["extended_M_stationarity"]["holds"]
    assert c["extended_M_stationarity"]["failing_direction"] == ["0", "1", "1"]


def test_strong_m_from_file_block():
    rep = run(["strong-m", path("linear_pivot_descent"), "--seed", "7"]).report
    assert rep["outcome"] == "descent_direction"
    assert rep["descent_direction"] == ["0", "1", "1"]
    assert [e["drop"] for e in rep["trace"]] == ["g1", "H1"]
    assert [e["step"] for e in rep["trace"]] == ["2", "inf"]


def test_second_order_global_claim():
    rep = run(
        ["second-order", path("curved_pair_min"), "--direction", "1,0", "--direction", "0,1", "--mode", "directional"]
    ).report
    assert rep["sufficient"]["essential_local_minimizer_of_second_order"] is True


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("STATIONARITY_SEED", "11")
    assert run(["strong-m", path("m_not_strong_m")]).report["seed"] == 11
    monkeypatch.setenv("STATIONARITY_SEED", "x")
    assert run(["strong-m", path("m_not_strong_m")]).code == EXIT_INPUT


@pytest.mark.parametrize(
    "name, radius, point, value",
    [
        ("linear_m_not_extended", "1", ["0", "1/8", "1/8"], "-1/8"),
        ("curved_pair_nonmin", "1", ["1/8", "0"], "-1/8"),
        ("curved_pair_min", "1/2", None, None),
    ],
)
def test_oracle_examples(name, radius, point, value):
    rep = run(["oracle", path(name), "--radius", radius, "--resolution", "8"]).report
    assert rep["found"] == (point is not None)
    assert rep["point"] == point and rep["value"] == value


def test_oracle_never_contradicts_sufficiency():
    for name in CORPUS:
        so = run(["second-order", path(name)]).report
        if so["sufficient"].get("essential_local_minimizer_of_second_order"):
            assert not run(["oracle", path(name), "--radius", "1/2"]).report["found"], name
        orc = run(["oracle", path(name)]).report
        if orc["found"]:
            assert not so["sufficient"].get("essential_local_minimizer_of_second_order"), name


def test_surd_signs():
    x = Surd({2: 1}) - Surd.rational(Fraction(141, 100))
    assert x.sign() == 1
    y = Surd({2: 1}) - Surd.rational(Fraction(142, 100))
    assert y.sign() == -1
    assert (Surd({2: 1}) * Surd({2: 1}) - Surd.rational(2)).sign() == 0
    sym = load("abs_power_nlp").symbolic
    v = evaluate(sym.g[0], (Fraction(1, 4), Fraction(0)))
    assert isinstance(v.sign(), int)


def test_oracle_direction_scan():
    sym = load("linear_m_not_extended").symbolic
    res = grid_oracle(sym, (0, 0, 0), 1, 4, direction=(0, 1, 1))
    assert res.found and res.x == (0, Fraction(1, 4), Fraction(1, 4))
    res = grid_oracle(sym, (0, 0, 0), 1, 4, direction=(1, 0, 0))
    assert not res.found and "not a proof" in res.note


def test_text_format(capsys):
    assert main(["classify", path("linear_m_not_extended"), "--format", "text"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "M_stationarity" in out and "{" not in out


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "stationarity", "classify", path("strong_m_not_s")],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0 and json.loads(r.stdout)["command"] == "classify"


def test_outputs_are_deterministic():
    for name in ("linear_pivot_descent", "abs_power_nlp"):
        for sub in ("classify", "strong-m"):
            assert render(name, sub) == render(name, sub)


@pytest.mark.parametrize("name, sub", list(snapshot_cases()))
def test_snapshot(name, sub):
    with open(os.path.join(SNAP, f"{name}.{sub}.json")) as fh:
        want = fh.read()
    code, got = render(name, sub)
    assert code == EXIT_OK
    assert got == want
