import io
import json
from pathlib import Path

import pytest

from cliffqca.cli import run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_check_cluster():
    code, out, _ = call("check", "--input", str(SAMPLES / "cluster.unitary"))
    assert code == 0 and out.strip() == "λ⁻: yes, η: yes"


def test_witt_arf_form():
    code, out, _ = call("witt", "--input", str(SAMPLES / "arf.form"))
    assert code == 0 and out.strip() == "class 1 in Z/2"


def test_classify_shift():
    code, out, _ = call("classify", "--input", str(SAMPLES / "shift.unitary"))
    assert code == 0 and out.strip() == "class 0; witness circuit: X(z)"


def test_classify_json():
    code, out, _ = call("classify", "--input", str(SAMPLES / "cluster.unitary"), "--json")
    data = json.loads(out)
    assert code == 0 and data["group"] == "Z/2" and data["value"] == [1]


def test_boundary_prints_a_form():
    code, out, _ = call("boundary", "--input", str(SAMPLES / "cluster.unitary"))
    assert code == 0 and "kind=quadratic" in out and "class 1 in Z/2" in out


def test_pauli_conversion():
    code, out, _ = call("pauli", "--input", str(SAMPLES / "cluster.pauli"))
    assert code == 0 and "kind=unitary" in out


def test_representative_is_marked_as_certified():
    code, out, _ = call("representative", "--p", "3", "--dim", "3")
    assert code == 0 and "CERTIFIED BY CONSTRUCTION" in out


def test_ascend_then_check(tmp_path):
    code, out, _ = call("ascend", "--input", str(SAMPLES / "diag1_f3.form"), "--newvar", "z")
    assert code == 0
    f = tmp_path / "up.unitary"
    f.write_text(out)
    code, out, _ = call("check", "--input", str(f))
    assert code == 0 and "η: yes" in out


def test_parse_error_exit_code(tmp_path):
    f = tmp_path / "bad.unitary"
    f.write_text("p=3\nvars=z\nkind=unitary\nflavor=lambda-\nq=1\nz, w\n0, 1\n")
    code, _, err = call("check", "--input", str(f))
    assert code == 2 and f"{f}:6:4:" in err


def test_usage_errors_exit_two():
    assert call("witt")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("representative", "--p", "4", "--dim", "3")[0] == 2


def test_missing_file_is_a_usage_error(tmp_path):
    assert call("check", "--input", str(tmp_path / "nope"))[0] == 2


@pytest.mark.parametrize("b", ("2", "3"))
def test_coarse(b):
    code, out, _ = call("coarse", "--input", str(SAMPLES / "cluster.unitary"), "--b", b)
    assert code == 0 and f"q={b}" in out
