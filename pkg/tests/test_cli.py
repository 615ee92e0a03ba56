import json
import subprocess
import sys

import pytest
import yaml

from loopcalc.builtins import NAMES, load_builtin
from loopcalc.cli import COMMANDS, main
from loopcalc.presentation import print_presentation


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_hodge_s3(capsys):
    code, out, _ = run(capsys, "hodge", "--model", "builtin:s3", "--max-degree", "7", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    (hodge,) = [s for s in doc["sections"] if s["title"].startswith("Hodge")]
    cells = {(p, w): d for p, w, d in hodge["data"]["cells"]}
    expected = {(2 * j, j): 1 for j in range(4)} | {(3 + 2 * j, j): 1 for j in range(3)}
    assert cells == expected


def test_gamma1_s3(capsys):
    code, out, _ = run(capsys, "gamma1", "--model", "builtin:s3", "--cocycle", "theta3", "--format", "json")
    assert code == 0
    (sec,) = json.loads(out)["sections"]
    assert sec["passed"]
    d = sec["data"]
    assert d["homological_degree"] == 5 and d["zero"] is False
    assert [s["weight"] for s in d["support"]] == [1]


def test_bv_verify_s2(capsys):
    code, out, _ = run(capsys, "bv-verify", "--model", "builtin:s2")
    assert code == 0
    assert "# overall: PASS" in out


@pytest.mark.parametrize("command", list(COMMANDS))
def test_text_and_json_carry_the_same_data(capsys, command):
    model = "builtin:s2"
    code_j, out_j, _ = run(capsys, command, "--model", model, "--format", "json")
    code_t, out_t, _ = run(capsys, command, "--model", model, "--format", "text")
    assert code_j == code_t == 0
    assert yaml.safe_load(out_t) == json.loads(out_j)


def test_report_is_deterministic(capsys):
    a = run(capsys, "report", "--model", "builtin:s2", "--format", "json")[1]
    b = run(capsys, "report", "--model", "builtin:s2", "--format", "json")[1]
    assert a == b


def test_report_is_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "loopcalc.cli", "report", "--model", "builtin:s3", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_report_contains_assumptions_and_presentation(capsys):
    code, out, _ = run(capsys, "report", "--model", "builtin:cp2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["assumptions"]) == 2
    (pres,) = [s for s in doc["sections"] if s["title"] == "presentation"]
    assert pres["data"]["text"] == print_presentation(load_builtin("cp2"))


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hodge"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense", "--model", "builtin:s2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["hodge", "--model", "builtin:s2", "--k", "1"])
    assert exc.value.code == 2


def test_model_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "betti", "--model", "builtin:nope")[0] == 2
    assert run(capsys, "betti", "--model", str(tmp_path / "missing.txt"))[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("generator v 2\ngenerator w 3\nd w = v + 1\n")
    code, _, err = run(capsys, "betti", "--model", str(bad))
    assert code == 2 and "line 3" in err
    assert run(capsys, "bv-verify", "--model", "builtin:cp2")[0] == 2
    assert run(capsys, "cartan-verify", "--model", "builtin:s3", "--cocycle", "nope")[0] == 2


def test_non_cocycle_in_file_exits_2(capsys, tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("generator v 2\ngenerator w 3\nd w = v^2\ndim 2\ncocycle bad degree -2: v -> 1\n")
    code, _, err = run(capsys, "cartan-verify", "--model", str(f))
    assert code == 2 and "w" in err


def _corrupt(text, line_prefix, new_line):
    lines = text.splitlines()
    idx = next(i for i, ln in enumerate(lines) if ln.startswith(line_prefix))
    lines[idx] = new_line
    return "\n".join(lines) + "\n"


@pytest.mark.parametrize(
    "prefix,replacement",
    [
        ("delta b*v =", "delta b*v = 2*v"),
        ("delta b*x^2 =", "delta b*x^2 = 3*x"),
        ("product b v =", "product b v = 2*b*v"),
        ("product x x =", "product x x = 0"),
    ],
)
def test_injected_violation_flips_exit_code(capsys, tmp_path, prefix, replacement):
    name = "s3" if "x" in prefix else "s2"
    text = print_presentation(load_builtin(name))
    f = tmp_path / f"{name}.txt"
    f.write_text(text)
    assert run(capsys, "bv-verify", "--model", str(f))[0] == 0
    f.write_text(_corrupt(text, prefix, replacement))
    code, _, err = run(capsys, "bv-verify", "--model", str(f))
    assert code == 1 and "FAILED" in err


def test_file_model_matches_builtin(capsys, tmp_path):
    f = tmp_path / "s2.txt"
    f.write_text(print_presentation(load_builtin("s2")))
    a = json.loads(run(capsys, "hodge", "--model", str(f), "--format", "json")[1])
    b = json.loads(run(capsys, "hodge", "--model", "builtin:s2", "--format", "json")[1])
    assert a["sections"] == b["sections"]


@pytest.mark.parametrize("name", NAMES)
def test_report_passes_for_every_builtin(capsys, name):
    assert run(capsys, "report", "--model", f"builtin:{name}", "--format", "json")[0] == 0


def test_console_script_module_entry():
    r = subprocess.run([sys.executable, "-m", "loopcalc.cli", "betti", "--model", "builtin:s3", "--max-degree", "4"], capture_output=True, text=True)
    assert r.returncode == 0 and "loop_betti" in r.stdout
