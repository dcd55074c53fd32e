"""CLI `check` dispatch: one instance file per lemma."""

import json
from fractions import Fraction as F

import pytest

from conclab.cli import run
from conclab.dist import IntDist, uniform


def atoms(mu):
    return mu.to_json_obj()


SYM3 = atoms(IntDist([(-1, F(1, 4)), (0, F(1, 2)), (1, F(1, 4))]))
WIDE175 = atoms(uniform(range(-87, 88)))
RAMP175 = atoms(uniform(range(0, 175)))
WIDE1401 = atoms(uniform(range(-700, 701)))
RAMP1401 = atoms(uniform(range(0, 1401)))

INSTANCES = {
    "thm_tse": ({"alphas": ["1/2", "1/2"], "delta": "0", "window": [0, 1]}, "pass"),
    "logconcmode": (
        {"mu": atoms(uniform(range(100))), "i": 3, "gamma": "1/2"},
        "pass",
    ),
    "logconcdomination": (
        {"x": atoms(uniform(range(50))), "y": atoms(IntDist([(0, F(1))])), "eps": "1/100"},
        "pass",
    ),
    "few_dropped": ({"alphas": ["1/2"] * 40, "k": 0, "K": 2, "delta": "1/2"}, "pass"),
    "balanced_continuous": (
        {"alphas": ["1/2", "1/2"], "alpha": "1/2", "alpha_prime": "3/5"},
        "pass",
    ),
    "midsize_alpha_continuity": (
        {"K": 3, "alphas": ["4/9", "4/9"], "alphas_prime": ["7/18", "7/18"], "y": SYM3},
        "pass",
    ),
    "balanced_continuity_large": ({"K": 3, "ks": [3, 5], "y": SYM3}, "pass"),
    "peakednessl1": (
        {"x": RAMP1401, "ys": [WIDE1401], "z": WIDE1401, "eps": "9/10"},
        "pass",
    ),
    "peakednessl2": (
        {"x": RAMP175, "y": RAMP175, "x_prime": WIDE175, "y_prime": WIDE175, "eps": "2/5"},
        "pass",
    ),
    "odlyzko_richmond": ({"p": atoms(uniform([0, 1, 3])), "n": 60, "delta": "3/10"}, "pass"),
}


@pytest.mark.parametrize("lemma", sorted(INSTANCES))
def test_check_dispatch(lemma, tmp_path, capsys):
    instance, expected = INSTANCES[lemma]
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(instance))
    code = run(["check", lemma, "--instance", str(path)])
    obj = json.loads(capsys.readouterr().out)
    assert obj["name"] == lemma
    assert obj["outcome"] == expected
    assert code == 0


def test_check_not_applicable_still_exit_zero(tmp_path, capsys):
    instance = {"alphas": ["1/2"] * 4, "k": 1, "K": 2, "delta": "1/2"}
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(instance))
    assert run(["check", "few_dropped", "--instance", str(path)]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["outcome"] == "not-applicable"


def test_check_failure_exits_one(tmp_path, capsys):
    instance = {"p": atoms(uniform([0, 1, 3])), "n": 20, "delta": "3/10"}
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(instance))
    assert run(["check", "odlyzko_richmond", "--instance", str(path)]) == 1
    obj = json.loads(capsys.readouterr().out)
    assert obj["outcome"] == "fail"


def test_check_bad_instance_exits_two(tmp_path, capsys):
    path = tmp_path / "inst.json"
    path.write_text(json.dumps({"alphas": ["1/2"]}))
    assert run(["check", "few_dropped", "--instance", str(path)]) == 2
