import json
import shutil
import subprocess

import pytest

from knotcone.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def doc(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_knot_verify(capsys):
    code, out = run(capsys, "knot", "torus:3", "--verify")
    assert code == 0
    assert out.strip() == '{"rank":11,"verify":"ok"}'


def test_dinv_trefoil(capsys):
    code, out = run(capsys, "dinv", "--knot", "torus:1", "--frame", "1", "--sym", "si")
    assert code == 0
    assert out.strip() == '{"d_lower":-2,"d_upper":-2}'


def test_dinv_rational_values_are_exact(capsys):
    code, d = doc(capsys, "dinv", "--knot", "fig8", "--frame", "2", "--sym", "sigma")
    assert code == 0
    assert d == {"d_lower": "-7/4", "d_upper": "1/4"}
    _, via_cone = doc(capsys, "dinv", "--knot", "fig8", "--frame", "2", "--sym", "sigma",
                      "--method", "cone")
    assert via_cone == d


def test_local_figure_eight_periodic(capsys):
    code, d = doc(capsys, "local", "--knot", "fig8", "--surgery", "1/2", "--sym", "periodic",
                  "--match-standard", "--bound", "4")
    assert code == 0
    assert d["class"] == "nontrivial"
    assert (d["d_lower"], d["d_upper"]) == (-2, 0)
    assert d["standard"]["text"] == "C(-, 1)"


def test_local_on_almost_input(capsys, tmp_path):
    from knotcone.local_equiv import build_standard
    path = tmp_path / "std.json"
    path.write_text(json.dumps(build_standard((-1, 2)).to_json()))
    code, d = doc(capsys, "local", "--input", str(path), "--match-standard", "--bound", "3")
    assert code == 0
    assert d["mode"] == "almost"
    assert d["d_lower"] is None
    assert d["standard"]["params"] == [-1, 2]


@pytest.mark.parametrize("argv", [
    ["knot", "fig8", "--maps"],
    ["cone", "--knot", "torus:2", "--frame", "2", "--sym", "si"],
    ["algebra", "--knot", "trefoil", "--frame", "1", "--box", "--equivariant", "--window=-1:1"],
    ["local", "--knot", "fig8", "--surgery", "1/2", "--sym", "sigma"],
])
def test_commands_are_idempotent(capsys, tmp_path, argv):
    code, first = run(capsys, *argv)
    assert code == 0
    path = tmp_path / "first.json"
    path.write_text(first)
    again = [argv[0], str(path)] if argv[0] == "knot" else [argv[0], "--input", str(path)]
    code, second = run(capsys, *again)
    assert code == 0
    assert second == first


def test_outputs_have_no_floats(capsys):
    _, out = run(capsys, "cone", "--knot", "torus:1", "--frame", "3")
    json.loads(out, parse_float=lambda s: pytest.fail(f"float {s} in output"))


def test_malformed_json_reports_location(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"complex":\n ]')
    code, d = doc(capsys, "local", "--input", str(bad))
    assert code == 2
    assert d["location"].endswith("bad.json:2:2")


@pytest.mark.parametrize("argv", [
    ["knot", "nosuchknot"],
    ["dinv", "--knot", "fig8", "--frame", "1", "--sym", "nosuchsym"],
    ["regress", "--filter", "nosuchcheck"],
])
def test_usage_errors(capsys, argv):
    code, d = doc(capsys, *argv)
    assert code == 2
    assert "error" in d


def test_too_narrow_window_is_a_verification_failure(capsys):
    code, d = doc(capsys, "cone", "--knot", "torus:2", "--frame", "1", "--truncate=0:0")
    assert code == 1


def test_missing_arguments_exit_2(capsys):
    code, d = doc(capsys, "cone")
    assert code == 2 and "--knot" in d["error"]
    with pytest.raises(SystemExit) as exc:
        main(["cone", "--frame"])
    assert exc.value.code == 2


def test_regress_filter(capsys):
    code, d = doc(capsys, "regress", "--filter", "lens")
    assert code == 0
    assert d["passed"] == 1 and d["failed"] == 0


def test_pretty_output(capsys):
    code, out = run(capsys, "--emit", "pretty", "regress", "--filter", "lens")
    assert code == 0
    assert "lens" in out


@pytest.mark.skipif(shutil.which("hfk") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["hfk", "knot", "torus:1", "--verify"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout) == {"rank": 3, "verify": "ok"}
