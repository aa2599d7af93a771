import io
import json

import pytest

from swhbf.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text)


def test_local_swh_json():
    code, data = run_json("local-swh", "--vars", "x,y", "-f", "x^3+y^2", "--wdeg", "6",
                          "--weights", "2,3")
    assert code == 0
    assert set(data) == {"input", "vars", "kind", "roots", "dims", "milnor", "diagnostics"}
    assert data["roots"] == [{"num": -7, "den": 6}, {"num": -5, "den": 6}]
    assert data["dims"] == {"-7/6": 1, "-5/6": 1}
    assert data["milnor"] == 2 and data["vars"] == ["x", "y"]


def test_text_outputs():
    assert run("global", "--vars", "x", "-f", "x")[1].strip() == "{-1}"
    assert run("global-reduced", "--vars", "x,y", "-f", "x^2+y^2")[1].strip() == "{-1}"
    assert run("local", "--vars", "x,y", "-f", "x^3+y^2")[1].strip() == "{-7/6, -5/6}"
    assert run("milnor", "--vars", "x,y", "-f", "x^3+y^4")[1].strip() == "6"
    code, text = run("poincare", "--wdeg", "30", "--weights", "10,3")
    assert code == 0 and "P(1) = 18" in text


def test_ann_and_cohom():
    code, data = run_json("ann", "--vars", "x,y", "-f", "x^2+y^2")
    assert code == 0 and data["diagnostics"]["basis"]
    code, data = run_json("cohom", "--vars", "x,y", "-f", "x^3+y^2", "--gamma", "-5/6")
    assert code == 0 and data["diagnostics"]["basis"] == ["1"]


def test_file_input(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("x^3 + y^2\n")
    code, data = run_json("global-reduced", "--vars", "x,y", "--file", str(p))
    assert code == 0 and data["input"] == "x^3 + y^2"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["global", "--vars", "x,y", "-f", "x y"], 2),
        (["cohom", "--vars", "x,y", "-f", "x^3+y^2", "--gamma", "1/0"], 2),
        (["local-swh", "--vars", "x,y", "-f", "x^3+y^2+1", "--wdeg", "6", "--weights", "2,3"], 3),
        (["local-swh", "--vars", "x,y", "-f", "x^3+y^2+x*y", "--wdeg", "6", "--weights", "2,3"], 3),
        (["cohom", "--vars", "x,y", "-f", "x^3+y^2", "--gamma", "-1/2"], 3),
        (["global", "--vars", "x", "--file", "/nonexistent/f"], 3),
        (["verify", "--entry", "NOPE"], 3),
        (["global", "--vars", "x,y", "-f", "x^3+y^2", "--budget", "0.000001"], 4),
        (["local-swh", "--vars", "x,y", "-f", "x^3+y^7+x*y^5", "--wdeg", "21", "--weights", "7,3",
          "--kmax", "0"], 5),
    ],
)
def test_exit_codes(argv, code, capsys):
    got, text = run(*argv, "--json")
    assert got == code
    err = json.loads(text)
    assert err["exit_code"] == code and err["error"]
    got, _ = run(*argv)
    assert got == code
    assert "swhbf:" in capsys.readouterr().err


def test_usage_error():
    assert run("frobnicate")[0] == 2


def test_weight_flags_on_pipeline_commands():
    plain = run("local", "--vars", "x,y", "-f", "x^3+y^2")[1]
    weighted = run("local", "--vars", "x,y", "-f", "x^3+y^2", "--wdeg", "6", "--weights", "2,3")
    assert weighted == (0, plain)
    code, data = run_json("global-reduced", "--vars", "x,y", "-f", "x^3+y^2", "--wdeg", "6",
                          "--weights", "2,3")
    assert code == 0 and [r["num"] for r in data["roots"]] == [-7, -5]
    assert run("ann", "--vars", "x,y", "-f", "x^3+y^2", "--wdeg", "6")[0] == 3
    assert run("global", "--vars", "x,y", "-f", "x^3+y^2", "--weights", "2,3")[0] == 3
    assert run("ann", "--vars", "x,y", "-f", "x^3+y^2", "--wdeg", "6", "--weights", "2,a")[0] == 2


def test_cohom_with_weights():
    code, data = run_json("cohom", "--vars", "x,y", "-f", "x^3+y^7+x*y^5", "--gamma", "-10/21",
                          "--wdeg", "21", "--weights", "7,3")
    assert code == 0 and data["diagnostics"]["basis"] == ["1"]
