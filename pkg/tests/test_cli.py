from pathlib import Path

import pytest
from click.testing import CliRunner

from canocyl.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(*args, env=None):
    return CliRunner().invoke(main, [str(a) for a in args], env=env)


def s(name):
    return SAMPLES / name


def test_delta():
    r = run("--graph", s("c6.graph"), "delta")
    assert r.exit_code == 0
    assert "delta 1" in r.output.splitlines()


def test_cylinder_report():
    r = run("--graph", s("c6.graph"), "--profile", s("delta1.profile"), "cylinder", "v0", "v2", "--l", "2")
    assert r.exit_code == 0
    body = [x for x in r.output.splitlines() if not x.startswith("#")]
    assert body[0] == "cyl v0 v2 l=2"
    assert [x for x in body if x.startswith("m ")] == ["m v0", "m v1", "m v2"]
    assert all(" | subdivision: " in x for x in body if x.startswith("witness"))


def test_slices_on_tripod():
    r = run("--graph", s("tripod.graph"), "--profile", s("tree.profile"), "slices", "l0_5", "l1_5")
    assert r.exit_code == 0
    assert "slice 5 : o" in r.output


def test_triangle():
    r = run("--graph", s("tripod.graph"), "--profile", s("tree.profile"), "triangle", "l0_5", "l1_5", "l2_5", "--n", "0")
    assert r.exit_code == 0
    assert "Hl2_5 size=1 : o" in r.output


def test_goodl_and_tracks():
    common = ["--presentation", s("torus.pres")]
    r = run("--graph", s("c8.graph"), "--profile", s("tree.profile"), *common,
            "--action", s("torus_rotation.action"), "goodl", "--offset", "0")
    assert r.exit_code == 0 and "l = 22" in r.output.splitlines()
    r = run("--graph", s("c6.graph"), "--profile", s("delta1.profile"), *common,
            "--action", s("torus_trivial.action"), "tracks")
    assert r.exit_code == 0
    assert "xprime white 1 black 1 edges 1" in r.output
    assert "h1_mod2 input 2 output 2 blue_killed 2" in r.output


def test_out_file(tmp_path):
    out = tmp_path / "rep.txt"
    r = run("--graph", s("c6.graph"), "--out", out, "delta")
    assert r.exit_code == 0 and r.output == ""
    assert "delta 1" in out.read_text()


def test_exit_input_error(tmp_path):
    assert run("--graph", tmp_path / "missing", "delta").exit_code == 1
    bad = tmp_path / "bad.graph"
    bad.write_text("v a\nq\n")
    assert run("--graph", bad, "delta").exit_code == 1
    assert run("cylinder", "a", "b").exit_code == 1
    assert run("--graph", s("c6.graph"), "cylinder", "v0", "zz").exit_code == 1
    assert run("--graph", s("c6.graph"), "channels", "v0", "v3", "0").exit_code == 1


def test_exit_budget():
    r = run("--graph", s("grid5.graph"), "--budget", "10", "cylinder", "g0_0", "g4_4")
    assert r.exit_code == 2
    r = run("--graph", s("grid5.graph"), "cylinder", "g0_0", "g4_4", env={"CANOCYL_BUDGET": "10"})
    assert r.exit_code == 2
    r = run("--graph", s("c6.graph"), "cylinder", "v0", "v3", env={"CANOCYL_BUDGET": "x"})
    assert r.exit_code == 1


def test_exit_invariant(tmp_path, monkeypatch):
    from canocyl import verify
    from canocyl.verify import Check

    monkeypatch.setattr(verify, "run_verify", lambda seed, extra: [Check("forced", False)])
    r = run("verify")
    assert r.exit_code == 3
    assert "check forced fail" in r.output


def test_invariant_error_exit_code(tmp_path):
    # a hole bound of zero cannot hold on the tripod
    r = run("--graph", s("tripod.graph"), "--profile", s("tree.profile"), "triangle", "l0_5", "l1_5", "l2_5",
            "--n", "0", "--kappa", "0")
    assert r.exit_code == 3


@pytest.mark.parametrize("seed", [0, 7])
def test_verify_deterministic(seed):
    a = run("--seed", seed, "verify")
    b = run("--seed", seed, "verify")
    assert a.exit_code == 0
    assert a.output == b.output
    assert f"# seed {seed}" in a.output


def test_header_records_configuration():
    r = run("--graph", s("c6.graph"), "--profile", s("delta1.profile"), "cylinder", "v0", "v3")
    lines = r.output.splitlines()
    assert lines[0] == "# canocyl report"
    assert "# arg x v0" in lines and "# profile neighbor_threshold = 1" in lines
