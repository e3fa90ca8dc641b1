import json
import subprocess
import sys
from fractions import Fraction as Q
from io import StringIO
from pathlib import Path

import pytest

from graev import io
from graev.cli import main
from graev.oracles import free_norm_by_matches
from graev.product import product_norm_dp

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def run(*argv):
    out = StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def d(name):
    return str(DATA / name)


def test_rationals_round_trip():
    assert io.to_jsonable({"a": Q(3, 4), "b": [Q(2), 1]}) == {"a": "3/4", "b": ["2", 1]}
    assert json.loads(io.dump({"x": Q(-1, 3)})) == {"x": "-1/3"}


def test_read_space_adds_inverses():
    space = io.read_space(io.load_json(d("four_point_space.json")))
    assert len(space.points) == 7
    assert space.d(space.index("x"), space.index("x^-1")) == 1


def test_read_setup_and_words():
    setup = io.read_setup(io.load_json(d("s3_amalgam.json")))
    word = io.read_pword(io.load_json(d("s3_word.json")), setup)
    assert [setup.letter_label(x) for x in word] == ["G:(12)", "H:(13)"]
    assert io.read_pword(["G:(12)", "H:(13)"], setup) == word
    back = io.write_pword(word, setup)
    assert io.read_pword(back, setup) == word


def test_float_is_a_parse_error(tmp_path):
    bad = tmp_path / "f.json"
    bad.write_text(json.dumps({"points": ["e", "x"], "distances": [["0", 0.5], [0.5, "0"]]}))
    assert run("validate", bad)[0] == 2


def test_missing_file_is_a_parse_error():
    assert run("validate", "/nonexistent/space.json")[0] == 2


def test_validate_each_kind():
    for name, kind in [("four_point_space.json", "space"), ("s3_chain_metric.json", "metric"),
                       ("s3_amalgam.json", "setup"), ("hnn_a3.json", "hnn")]:
        code, text = run("validate", d(name))
        assert code == 0, name
        assert json.loads(text)["kind"] == kind


def test_validate_reports_a_bad_metric():
    code, text = run("validate", d("bad_metric.json"))
    assert code == 3
    assert json.loads(text)["ok"] is False


def test_free_norm_matches_the_oracle():
    code, text = run("norm", "--setup", d("four_point_space.json"), "--word", d("free_word.json"))
    assert code == 0
    space = io.read_space(io.load_json(d("four_point_space.json")))
    word = io.read_free_word(io.load_json(d("free_word.json")), space)
    assert Q(json.loads(text)["norm"]) == free_norm_by_matches(word, space)


def test_inline_word_and_bare_output():
    code, text = run("norm", "--setup", d("four_point_space.json"), "--word", "x x^-1", "--bare")
    assert (code, text) == (0, "0\n")


def test_scaled_norm_runs():
    code, text = run("norm", "--setup", d("scaled_space.json"), "--word", "x y", "--length-bound", "4", "--bare")
    assert code == 0
    assert Q(text.strip()) > 0


def test_product_norm_and_dist():
    setup = io.read_setup(io.load_json(d("s3_amalgam.json")))
    f = setup.evaluate(io.read_pword(io.load_json(d("s3_word.json")), setup))
    code, text = run("norm", "--setup", d("s3_amalgam.json"), "--word", d("s3_word.json"), "--bare")
    assert code == 0 and Q(text.strip()) == product_norm_dp(setup, f).value
    code, text = run("norm", "--setup", d("s3_amalgam.json"), "--word", d("s3_word.json"), "--bare",
                     "--method", "brute")
    assert Q(text.strip()) == product_norm_dp(setup, f).value
    code, text = run("dist", "--setup", d("s3_amalgam.json"), "--word", "G:(12)", "--other", "G:(12)", "--bare")
    assert (code, text) == (0, "0\n")


def test_word_outside_the_space_is_a_parse_error():
    assert run("norm", "--setup", d("four_point_space.json"), "--word", "w")[0] == 2


def test_dot_output():
    code, text = run("norm", "--setup", d("four_point_space.json"), "--word", d("free_word.json"), "--emit-dot", "-")
    assert code == 0
    assert text.startswith("digraph") and "->" in text


def test_forest_enumeration_and_check(tmp_path):
    code, text = run("forest", "--setup", d("s6_setup.json"), "--word", d("s6_word.json"), "--enumerate")
    assert code == 0
    res = json.loads(text)
    assert res["count"] == 2
    forest = {k: v for k, v in res["forests"][0].items() if k != "describe"}
    path = tmp_path / "forest.json"
    path.write_text(json.dumps(forest))
    code, text = run("forest", "--setup", d("s6_setup.json"), "--word", d("s6_word.json"), "--check", path)
    assert code == 0 and json.loads(text)["ok"]


def test_forest_budget_is_a_bound_error():
    code, _ = run("forest", "--setup", d("s6_setup.json"), "--word", d("s6_word.json"), "--enumerate",
                  "--limit", "1")
    assert code == 4


def test_forest_dot():
    code, text = run("forest", "--setup", d("s6_setup.json"), "--word", d("s6_word.json"), "--emit-dot", "-")
    assert code == 0 and text.count("digraph") == 1


def test_reduce_trace_ends_reduced():
    code, text = run("reduce-trace", "--setup", d("s3_amalgam.json"), "--alpha", d("reduce_alpha.json"),
                     "--zeta", d("reduce_zeta.json"))
    assert code == 0
    lines = [json.loads(x) for x in text.splitlines()]
    assert lines[-1]["reduced"] is True
    rhos = [Q(x["rho"]) for x in lines]
    assert rhos == sorted(rhos, reverse=True)


def test_reduce_trace_rejects_a_nontrivial_zeta():
    code, _ = run("reduce-trace", "--setup", d("s3_amalgam.json"), "--alpha", "G:(12)", "--zeta", "G:(12)")
    assert code == 3


def test_hnn_command():
    code, text = run("hnn", d("hnn_a3.json"))
    res = json.loads(text)
    assert code == 0
    assert res["stable_letter_norm"] == "1/2" and res["certified"]
    assert res["restriction_violations"] == [] and res["agreement"]["ok"]


def test_hnn_override_breaking_the_diameter_bound():
    assert run("hnn", d("hnn_a3.json"), "-K", "1/4")[0] == 3


def test_output_is_deterministic():
    argv = ("forest", "--setup", d("s6_setup.json"), "--word", d("s6_word.json"), "--enumerate")
    assert run(*argv) == run(*argv)


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "graev.cli", "norm", "--setup", d("four_point_space.json"),
                           "--word", "x", "--bare"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"


def test_selftest_quick():
    code, text = run("selftest", "--quick")
    assert code == 0
    assert all(line.startswith("PASS") for line in text.splitlines())
