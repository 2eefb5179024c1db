import io
import json
import subprocess
import sys
from fractions import Fraction as F
from importlib import resources

import pytest

from ptsmetrics import records
from ptsmetrics.cli import main

CORPUS = resources.files("ptsmetrics") / "corpus"


def corpus(name):
    return str(CORPUS / name)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_trace_example():
    code, out = run("trace", corpus("fig1.pts"), "t", "s_p", "--approach", "dis", "--sched", "det",
                    "--lambda", "1", "--depth", "2")
    assert code == 0 and out.startswith("value=1/2 ")


def test_json_is_byte_stable():
    argv = ("trace", corpus("fig2.pts"), "s", "t", "--approach", "dis", "--sched", "rand",
            "--json", "--param", "eps1=0.125", "--param", "eps2=1/4")
    first, second = run(*argv), run(*argv)
    assert first == second
    rec = json.loads(first[1])
    assert rec["value"] == "7/20" and rec["decimal"] == "0.350000"
    assert rec["spec"]["approach"] == "dis" and rec["spec"]["lambda"] == "1"
    assert first[1].count("\n") == 1


def test_test_subcommand_with_omega(tmp_path):
    omega = tmp_path / "w.pts"
    omega.write_text("omega o2 = 1/2\n")
    code, out = run("test", corpus("fig6.pts"), "s", "t", "--approach", "may",
                    "--omega", str(omega), "--json")
    assert code == 0 and json.loads(out)["value"] == "7/20"
    code, out = run("test", corpus("fig3.pts"), "t", "u", "--approach", "must", "--tests", "o1",
                    "--hemi", "left")
    assert code == 0 and out.startswith("value=1 ")


def test_separate_suite_file():
    code, out = run("test", corpus("fig3.pts"), "t", "u", "--suite", corpus("fig6.pts"),
                    "--approach", "may")
    assert code == 0


@pytest.mark.parametrize("eps, code", [("1/10", 1), ("2/5", 0), ("1", 0)])
def test_robust_exit_codes(eps, code):
    got, out = run("robust", corpus("fig1.pts") + ":t", corpus("fig1.pts") + ":s_p",
                   "--epsilon", eps, "--family", "tr-tbt", "--depth", "2")
    assert got == code


def test_robust_inconclusive_when_truncated():
    code, out = run("robust", corpus("fig1.pts") + ":t", corpus("fig1.pts") + ":fig1:s_p",
                    "--epsilon", "1/2", "--depth", "1")
    assert code == 2 and "status=inconclusive" in out


def test_robust_grid_is_inconclusive():
    code, _ = run("robust", corpus("fig1.pts") + ":t", corpus("fig1.pts") + ":s_p",
                  "--epsilon", "1", "--family", "tr-dis", "--sched", "rand", "--grid", "2")
    assert code == 2


def test_relation_exit_codes():
    assert run("relation", corpus("fig3.pts"), "s", "t", "--rel", "tr-sup")[0] == 0
    assert run("relation", corpus("fig3.pts"), "s", "t", "--rel", "tr-tbt")[0] == 1
    code, out = run("relation", corpus("fig3.pts"), "u", "t", "--rel", "te-must", "--tests", "o1",
                    "--kind", "preorder", "--json")
    assert code == 0 and json.loads(out)["holds"] is True


@pytest.mark.parametrize("argv", [
    ("trace", "F", "t", "s_p", "--approach", "tbt", "--grid", "4"),
    ("trace", "F", "t", "s_p", "--approach", "dis", "--sched", "det", "--grid", "4"),
    ("trace", "F", "t", "s_p", "--approach", "nope"),
    ("trace", "F", "t", "s_p", "--approach", "tbt", "--unknown"),
    ("trace", "F", "t", "s_p", "--approach", "tbt", "--lambda", "2"),
    ("trace", "F", "t", "s_p", "--approach", "tbt", "--depth", "0"),
    ("relation", "F", "t", "s_p", "--rel", "te-may", "--grid", "3"),
    ("properties", "--suite", "no-such-suite"),
    (),
])
def test_usage_errors(argv):
    argv = [corpus("fig1.pts") if a == "F" else a for a in argv]
    assert run(*argv)[0] == 64


def test_data_errors(tmp_path):
    bad = tmp_path / "bad.pts"
    bad.write_text("pts x\nstates s s1 s2\nactions a\ninit s\ntrans s a -> s1: 1/2, s2: 1/3\n")
    assert run("dot", str(bad))[0] == 65
    assert run("dot", str(tmp_path / "missing.pts"))[0] == 65
    assert run("trace", corpus("fig1.pts"), "t", "zz", "--approach", "tbt")[0] == 65
    assert run("test", corpus("fig1.pts"), "t", "s_p", "--approach", "may")[0] == 65
    assert run("trace", corpus("fig1.pts"), "t", "s_p", "--approach", "tbt",
               "--param", "q=1")[0] == 65


def test_cap_exceeded(monkeypatch):
    monkeypatch.setenv("PTSMETRICS_MAX_RESOLUTIONS", "2")
    assert run("trace", corpus("fig1.pts"), "t", "s_p", "--approach", "dis")[0] == 70


def test_compose_output(tmp_path):
    target = tmp_path / "zz.pts"
    assert run("compose", corpus("fig3.pts"), "zs", "zt", "-o", str(target))[0] == 0
    code, out = run("trace", str(target), "composed", "composed", "--approach", "tbt")
    assert code == 0 and out.startswith("value=0 ")


def test_dot_subcommand():
    code, out = run("dot", corpus("fig3.pts"))
    assert code == 0 and out == run("dot", corpus("fig3.pts"))[1] and "shape=point" in out


def test_properties_subcommand():
    code, out = run("properties", "--suite", "kernel:tr-sup", "--trials", "3", "--seed", "2",
                    "--json")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and {l["name"] for l in lines} == {"kernel:tr-sup-det", "kernel:tr-sup-rand"}
    assert run("properties", "--suite", "kernel:tr-sup", "--trials", "3", "--seed", "2",
               "--json") == (code, out)
    assert run("properties", "--suite", "selftest", "--trials", "2")[0] == 0


def test_examples_verify():
    code, out = run("examples", "--verify")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("examples match")
    assert "reference value 1/2" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ptsmetrics", "trace", corpus("fig3.pts"), "s",
                           "t", "--approach", "sup"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("value=0 ")


def test_record_helpers():
    assert records.fraction_str(F(4, 2)) == "2"
    assert records.fraction_str(F(-1, 3)) == "-1/3"
    assert records.decimal_str(F(1, 3)) == "0.333333"
    assert records.decimal_str(F(2, 3)) == "0.666667"
    assert records.jsonable({"trace": ("a", "b"), "v": F(1, 2)}) == {"trace": "a b", "v": "1/2"}
