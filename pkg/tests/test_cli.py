import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qmconv.cli import main, parse_numbers

H = math.sqrt(0.5)
QT = [H, 0.0, 0.0, H]
CT = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def write_lines(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows))
    return str(path)


def floats(line):
    return [float(x) for x in line.split(",")]


# -- detect ---------------------------------------------------------------

def test_detect_basis_product(tmp_path, capsys):
    f = write_lines(tmp_path / "p.jsonl", [{"kind": "product", "p": [0, 1, 0, 0], "q": [0, 0, 1, 0],
                                            "r": [0, 0, 0, 1]}])
    code, out, _ = run(capsys, "detect", f)
    assert code == 0
    assert "multiplication: hamilton" in out.splitlines()


def test_detect_test_pair_transpose(tmp_path, capsys):
    f = write_lines(tmp_path / "p.jsonl", [{"kind": "q2m", "q": QT, "C": np.array(CT).T.tolist()}])
    code, out, _ = run(capsys, "detect", f)
    assert code == 0
    assert "map: CS" in out.splitlines()


def test_detect_full_table(tmp_path, capsys):
    rows = [{"kind": "product", "p": [0, 1, 0, 0], "q": [0, 0, 1, 0], "r": [0, 0, 0, -1]},
            {"kind": "q2m", "q": QT, "C": np.array(CT).T.tolist()},
            {"kind": "m2q", "C": CT, "q": [H, 0, 0, -H]}]
    code, out, _ = run(capsys, "detect", write_lines(tmp_path / "p.jsonl", rows))
    assert code == 0
    assert out.splitlines() == ["multiplication: shuster", "map: CS", "homomorphic: yes"]


def test_detect_scalar_last_file(tmp_path, capsys):
    rows = [{"order": "xyzw"}, {"kind": "q2m", "q": [0, 0, H, H], "C": CT}]
    code, out, _ = run(capsys, "detect", write_lines(tmp_path / "p.jsonl", rows))
    assert code == 0 and "map: CH" in out


def test_detect_empty_file(tmp_path, capsys):
    f = tmp_path / "empty.jsonl"
    f.write_text("")
    code, out, _ = run(capsys, "detect", str(f))
    assert code == 2
    assert "homomorphic: unknown" in out


def test_detect_non_discriminating(tmp_path, capsys):
    f = write_lines(tmp_path / "p.jsonl", [{"kind": "product", "p": [0, 1, 0, 0], "q": [0, 1, 0, 0],
                                            "r": [-1, 0, 0, 0]}])
    assert run(capsys, "detect", f)[0] == 2


def test_detect_inconsistent(tmp_path, capsys):
    rows = [{"kind": "product", "p": [0, 1, 0, 0], "q": [0, 0, 1, 0], "r": [0, 0, 0, s]} for s in (1, -1)]
    code, out, _ = run(capsys, "detect", write_lines(tmp_path / "p.jsonl", rows))
    assert code == 3
    assert out.startswith("multiplication: unknown")


def test_detect_not_a_rotation_map(tmp_path, capsys):
    f = write_lines(tmp_path / "p.jsonl", [{"kind": "q2m", "q": QT, "C": np.eye(3).tolist()}])
    assert run(capsys, "detect", f)[0] == 3


def test_detect_tolerance_flag(tmp_path, capsys):
    r = [0, 0, 1e-4, 1]
    f = write_lines(tmp_path / "p.jsonl", [{"kind": "product", "p": [0, 1, 0, 0], "q": [0, 0, 1, 0], "r": r}])
    assert run(capsys, "detect", f)[0] == 3
    assert run(capsys, "detect", f, "--tol", "1e-3")[0] == 0


@pytest.mark.parametrize("text", ["not json\n", '{"kind": "bogus"}\n', '{"kind": "q2m", "q": [1, 0, 0, 0]}\n'])
def test_detect_malformed(tmp_path, capsys, text):
    f = tmp_path / "bad.jsonl"
    f.write_text(text)
    code, _, err = run(capsys, "detect", str(f))
    assert code == 1 and err


def test_detect_missing_file(tmp_path, capsys):
    assert run(capsys, "detect", str(tmp_path / "nope.jsonl"))[0] == 1


# -- migrate --------------------------------------------------------------

def _dataset(path, header, records):
    return write_lines(path, [header] + records)


def _records(path):
    lines = path.read_text().splitlines()
    return json.loads(lines[0]), [json.loads(x) for x in lines[1:]]


def test_migrate_shuster_to_hamilton(tmp_path, capsys):
    src = _dataset(tmp_path / "in.jsonl", {"multiplication": "shuster", "map": "CS", "order": "wxyz"}, [QT])
    out = tmp_path / "out.jsonl"
    assert run(capsys, "migrate", src, "--to", "hamilton-ch", str(out))[0] == 0
    header, records = _records(out)
    assert header == {"multiplication": "hamilton", "map": "CH", "order": "wxyz"}
    assert records == [[H, 0.0, 0.0, -H]]


def test_migrate_same_convention_is_byte_identical(tmp_path, capsys):
    rng = np.random.default_rng(4)
    recs = rng.normal(size=(20, 4)).tolist()
    src = _dataset(tmp_path / "in.jsonl", {"multiplication": "hamilton", "map": "CH", "order": "wxyz"}, recs)
    out = tmp_path / "out.jsonl"
    assert run(capsys, "migrate", src, "--to", "hamilton-ch", str(out))[0] == 0
    assert out.read_text().splitlines()[1:] == (tmp_path / "in.jsonl").read_text().splitlines()[1:]


def test_migrate_xyzw_input(tmp_path, capsys):
    src = _dataset(tmp_path / "in.jsonl", {"multiplication": "hamilton", "map": "CH", "order": "xyzw"},
                   [[1, 2, 3, 4]])
    out = tmp_path / "out.jsonl"
    assert run(capsys, "migrate", src, "--to", "hamilton-ch", str(out))[0] == 0
    header, records = _records(out)
    assert header["order"] == "wxyz"
    assert records == [[4.0, 1.0, 2.0, 3.0]]


def test_migrate_roundtrip_via_cli(tmp_path, capsys):
    recs = np.random.default_rng(5).normal(size=(100, 4)).tolist()
    src = _dataset(tmp_path / "a.jsonl", {"multiplication": "shuster", "map": "CS"}, recs)
    assert run(capsys, "migrate", src, "--to", "hamilton-ch", str(tmp_path / "b.jsonl"))[0] == 0
    assert run(capsys, "migrate", str(tmp_path / "b.jsonl"), "--to", "shuster-cs", str(tmp_path / "c.jsonl"))[0] == 0
    _, back = _records(tmp_path / "c.jsonl")
    assert np.array(back).tobytes() == np.array(recs).tobytes()


def test_migrate_antihomomorphic_header(tmp_path, capsys):
    src = _dataset(tmp_path / "in.jsonl", {"multiplication": "hamilton", "map": "CS"}, [QT])
    assert run(capsys, "migrate", src, "--to", "hamilton-ch", str(tmp_path / "out.jsonl"))[0] == 4


def test_migrate_rejects_antihomomorphic_target(tmp_path, capsys):
    src = _dataset(tmp_path / "in.jsonl", {"multiplication": "hamilton", "map": "CH"}, [QT])
    assert run(capsys, "migrate", src, "--to", "hamilton-cs", str(tmp_path / "out.jsonl"))[0] == 1


def test_migrate_malformed(tmp_path, capsys):
    src = _dataset(tmp_path / "in.jsonl", {"multiplication": "hamilton", "map": "CH"}, [[1, 2, 3]])
    assert run(capsys, "migrate", src, "--to", "shuster-cs", str(tmp_path / "out.jsonl"))[0] == 1


def test_migrate_tool(tmp_path, capsys):
    src = tmp_path / "t.qm"
    src.write_text("in qdot: quat; in q: quat; in w: vec3;\nqdot == -0.5 * q *s pure(w)\n")
    out = tmp_path / "out.qm"
    assert run(capsys, "migrate", "--tool", str(src), "--to", "hamilton-ch", str(out))[0] == 0
    assert out.read_text().strip() == "in qdot: quat; in q: quat; in w: vec3; qdot == 0.5 * (q *h pure(w))"
    assert run(capsys, "migrate", "--tool", str(src), "--to", "hamilton-ch", "--method", "interface", str(out))[0] == 0
    assert out.read_text().strip() == \
        "in qdot: quat; in q: quat; in w: vec3; conj(qdot) == -0.5 * (conj(q) *s pure(w))"


def test_migrate_tool_antihomomorphic_source(tmp_path, capsys):
    src = tmp_path / "t.qm"
    src.write_text("in p: quat; in q: quat; p *h q")
    out = tmp_path / "out.qm"
    assert run(capsys, "migrate", "--tool", "--from", "hamilton-cs", str(src), "--to", "shuster-cs", str(out))[0] == 0
    assert out.read_text().strip() == "in p: quat; in q: quat; q *s p"


def test_migrate_tool_errors(tmp_path, capsys):
    src = tmp_path / "t.qm"
    src.write_text("in q: quat; imag(q)")
    assert run(capsys, "migrate", "--tool", str(src), "--to", "hamilton-ch", str(tmp_path / "o"))[0] == 1
    assert run(capsys, "migrate", "--tool", "--from", "shuster-cs", str(src), "--to", "hamilton-ch",
               str(tmp_path / "o"))[0] == 0
    assert (tmp_path / "o").read_text().strip() == "in q: quat; -imag(q)"
    src.write_text("in q: quat; q *h q *s q")
    code, _, err = run(capsys, "migrate", "--tool", str(src), "--to", "hamilton-ch", str(tmp_path / "o"))
    assert code == 1 and "column" in err


# -- convert --------------------------------------------------------------

def test_convert_quat_to_matrix(capsys):
    code, out, _ = run(capsys, "convert", "--from", "quat", "--to", "matrix", "--conv", "hamilton-ch",
                       "sqrt(0.5), 0, 0, sqrt(0.5)")
    assert code == 0
    rows = [floats(line) for line in out.splitlines()]
    assert np.max(np.abs(np.array(rows) - CT)) < 1e-15


def test_convert_rotvec_to_quat(capsys):
    code, out, _ = run(capsys, "convert", "--from", "rotvec", "--to", "quat", "--conv", "hamilton-ch",
                       "--alphaC", "1", "--alphaPhi", "1", "0,0,pi/2")
    assert code == 0
    assert np.max(np.abs(np.array(floats(out)) - QT)) < 1e-15
    code, out, _ = run(capsys, "convert", "--from", "rotvec", "--to", "quat", "--conv", "shuster-cs", "0,0,pi/2")
    assert np.max(np.abs(np.array(floats(out)) - [H, 0, 0, -H])) < 1e-15


def test_convert_prints_17_significant_digits(capsys):
    _, out, _ = run(capsys, "convert", "--from", "quat", "--to", "quat", "0.1, 0.2, 0.3, 0.4")
    assert out.strip() == "0.10000000000000001, 0.20000000000000001, 0.29999999999999999, 0.40000000000000002"
    assert floats(out) == [0.1, 0.2, 0.3, 0.4]


def test_convert_roundtrips(capsys):
    _, out, _ = run(capsys, "convert", "--from", "matrix", "--to", "quat", "--conv", "shuster-cs",
                    "0,-1,0; 1,0,0; 0,0,1")
    assert np.max(np.abs(np.array(floats(out)) - [H, 0, 0, -H])) < 1e-15
    _, out, _ = run(capsys, "convert", "--from", "matrix", "--to", "rotvec", "--alphaC", "-1",
                    "0,-1,0, 1,0,0, 0,0,1")
    assert np.max(np.abs(np.array(floats(out)) - [0, 0, -math.pi / 2])) < 1e-15
    _, out, _ = run(capsys, "convert", "--from", "quat", "--to", "rotvec", "--conv", "shuster-cs",
                    f"{H},0,0,{-H}")
    assert np.max(np.abs(np.array(floats(out)) - [0, 0, math.pi / 2])) < 1e-15


def test_convert_antihomomorphic_rotvec(capsys):
    assert run(capsys, "convert", "--from", "rotvec", "--to", "quat", "--conv", "hamilton-cs", "0,0,1")[0] == 4
    assert run(capsys, "convert", "--from", "quat", "--to", "rotvec", "--conv", "shuster-ch", "1,0,0,0")[0] == 4
    # matrices need no rotation-vector convention check
    assert run(capsys, "convert", "--from", "quat", "--to", "matrix", "--conv", "hamilton-cs", "1,0,0,0")[0] == 0


@pytest.mark.parametrize("argv", [
    ["--from", "quat", "--to", "matrix", "1,2,3,4"],
    ["--from", "quat", "--to", "matrix", "1,0,0"],
    ["--from", "matrix", "--to", "quat", "1,0,0,0,1,0,0,0,-1"],
    ["--from", "rotvec", "--to", "quat", "0,0,__import__('os')"],
    ["--from", "rotvec", "--to", "quat", "0,0,1/0"],
    ["--from", "rotvec", "--to", "quat", "--alphaC", "2", "0,0,1"],
    ["--from", "euler", "--to", "quat", "0,0,1"],
])
def test_convert_invalid(capsys, argv):
    assert run(capsys, "convert", *argv)[0] == 1


def test_parse_numbers():
    assert parse_numbers("pi, -pi/2, sqrt(2)**2", 3) == [math.pi, -math.pi / 2, 2.0000000000000004]
    with pytest.raises(ValueError):
        parse_numbers("1, 2", 3)
    with pytest.raises(ValueError):
        parse_numbers("nan", 1)
    with pytest.raises(ValueError):
        parse_numbers("1e999", 1)


# -- integrate ------------------------------------------------------------

def _csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_integrate_quarter_turn(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code, stdout, _ = run(capsys, "integrate", "--conv", "hamilton-ch", "--alphaC", "1", "--frame", "A",
                          "--omega", "0,0,1", "--t", "pi/2", "--dt", "1e-3", "--out", str(out))
    assert code == 0
    header, data = _csv(out)
    assert header == ["t", "q1", "q2", "q3", "q4"] + [f"m{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)]
    assert data[-1, 0] == math.pi / 2
    assert np.max(np.abs(data[-1, 1:5] - QT)) < 1e-6
    q_line = next(line for line in stdout.splitlines() if line.startswith("q:"))
    assert np.max(np.abs(np.array(floats(q_line[2:])) - QT)) < 1e-6


def test_integrate_shuster_quarter_turn(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    assert run(capsys, "integrate", "--conv", "shuster-cs", "--omega", "0,0,1", "--t", "pi/2",
               "--dt", "1e-3", "--out", str(out))[0] == 0
    _, data = _csv(out)
    assert np.max(np.abs(data[-1, 1:5] - [H, 0, 0, -H])) < 1e-6


def test_integrate_zero_duration(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    assert run(capsys, "integrate", "--omega", "0,0,1", "--t", "0", "--q0", "sqrt(0.5),0,0,sqrt(0.5)",
               "--out", str(out))[0] == 0
    _, data = _csv(out)
    assert data.shape == (1, 14)
    np.testing.assert_array_equal(data[0, 1:5], QT)


def test_integrate_to_stdout_keeps_csv_clean(capsys):
    code, out, err = run(capsys, "integrate", "--omega", "1,0,0", "--t", "0.01", "--dt", "0.005", "--out", "-")
    assert code == 0
    assert out.splitlines()[0].startswith("t,q1")
    assert len(out.splitlines()) == 4
    assert "q:" in err


@pytest.mark.parametrize("argv", [
    ["--omega", "0,0,1", "--t", "1", "--dt", "0", "--out", "-"],
    ["--omega", "0,0", "--t", "1", "--out", "-"],
    ["--omega", "0,0,1", "--t", "-1", "--out", "-"],
    ["--omega", "0,0,1", "--t", "1", "--frame", "C", "--out", "-"],
    ["--omega", "0,0,1", "--t", "1", "--q0", "1,1,0,0", "--out", "-"],
    ["--omega", "0,0,1", "--t", "1"],
])
def test_integrate_bad_flags(capsys, argv):
    assert run(capsys, "integrate", *argv)[0] == 1


def test_integrate_antihomomorphic(capsys):
    assert run(capsys, "integrate", "--conv", "hamilton-cs", "--omega", "0,0,1", "--t", "1", "--out", "-")[0] == 4


# -- check ----------------------------------------------------------------

def test_check_all_pass(capsys):
    code, out, _ = run(capsys, "check")
    assert code == 0
    lines = out.splitlines()
    assert all(line.startswith("PASS") for line in lines)
    assert len(lines) == 11


def test_check_is_deterministic(capsys):
    a = run(capsys, "check", "--seed", "3", "--group", "homomorphy,table1", "-v")
    b = run(capsys, "check", "--seed", "3", "--group", "homomorphy", "--group", "table1", "-v")
    assert a == b and a[0] == 0


def test_check_single_group(capsys):
    code, out, _ = run(capsys, "check", "--group", "table2")
    assert code == 0
    assert out.splitlines() == ["PASS table2 (6 checks)"]


def test_check_unknown_group(capsys):
    assert run(capsys, "check", "--group", "nope")[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmconv", "check", "--group", "basis"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "PASS basis (4 checks)"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
