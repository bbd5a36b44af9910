import json

import pytest

from aisemiring.cli import run
from aisemiring.tables import WHICH, compute, render_text, to_dot


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_axioms(capsys):
    code, out, _ = call(capsys, "axioms", "SR6")
    assert code == 0 and "hold" in out


def test_check_holds_and_refutes(capsys):
    assert call(capsys, "check", "L2", "xy ≈ x")[0] == 0
    code, out, _ = call(capsys, "check", "L2x2", "xy = x", "--json")
    assert code == 1
    data = json.loads(out)
    assert data["holds"] is False and data["witness"]


def test_check_sampled_needs_seed(capsys):
    code, _, err = call(capsys, "check", "L2x3", "xy=yx", "--samples", "10")
    assert code == 2 and "seed" in err
    assert call(capsys, "check", "L2x3", "xy=yx", "--samples", "1000", "--seed", "1")[0] == 1


def test_parse_error_exit_code(capsys):
    code, _, err = call(capsys, "check", "L2", "x^0 = x")
    assert code == 2 and "position" in err


def test_unknown_semiring(capsys):
    assert call(capsys, "axioms", "Q9")[0] == 2


def test_capacity_exit_code(capsys):
    code, _, err = call(capsys, "check", "L2", "x1x2x3x4x5x6x7x8x9 = x1")
    assert code == 3 and "capacity" in err
    assert call(capsys, "matrix", "L2", "4", "--materialize")[0] == 3


def test_usage_error(capsys):
    assert run(["frobnicate"]) == 2
    capsys.readouterr()


def test_criterion(capsys):
    code, out, _ = call(capsys, "criterion", "D2", "xy ≈ yx", "--brute", "--json")
    data = json.loads(out)
    assert code == 0 and data["result"] and data["brute_force"]
    assert call(capsys, "criterion", "S60", "x = xx")[0] == 1


def test_order_and_dot(capsys):
    code, out, _ = call(capsys, "order", "SR6", "--json")
    assert code == 0 and len(json.loads(out)["edges"]) == 6
    code, out, _ = call(capsys, "order", "L2", "--dot")
    assert out.startswith("graph hasse")


def test_matrix_export(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, out, _ = call(capsys, "matrix", "N2", "2", "--out", str(path))
    assert code == 0 and "16 elements" in out
    assert len(json.loads(path.read_text())["elements"]) == 16
    assert call(capsys, "axioms", str(path))[0] == 0


def test_closure_and_iso(capsys):
    code, out, _ = call(capsys, "closure", "M2x2", "O", "A")
    assert code == 0 and set(out.split()) == set("OAPRZF")
    assert call(capsys, "iso", "S54", "M2x2", "--subset2", "R,O,F")[0] == 0
    assert call(capsys, "iso", "L2", "R2")[0] == 1


def test_embed(capsys, tmp_path):
    path = tmp_path / "phi.json"
    code, out, _ = call(capsys, "embed", "phi", "-n", "3", "--out", str(path))
    assert code == 0 and len(json.loads(path.read_text())["image"]) == 16
    assert call(capsys, "embed", "padding", "--base", "D2", "-n", "2")[0] == 0
    code, _, err = call(capsys, "embed", "padding", "--base", "L2", "-n", "2")
    assert code == 2 and "absorption" in err
    assert call(capsys, "embed", "constant", "-n", "2")[0] == 2


def test_basis(capsys):
    assert call(capsys, "basis", "M2x2", "B-SR6")[0] == 0
    assert call(capsys, "basis", "L2", "B-R2")[0] == 1


def test_agree(capsys):
    assert call(capsys, "agree", "M2", "D2")[0] == 2  # seed required
    code, out, _ = call(capsys, "agree", "M2x2", "SR6", "--seed", "3", "--samples", "100",
                        "--json")
    assert code == 0 and json.loads(out)["checked"] == 100


def test_derive(capsys):
    code, out, _ = call(capsys, "derive", "cor42", "--validate")
    assert code == 0 and "replay succeeded" in out
    code, out, _ = call(capsys, "derive", "x1x2x3x4 = x1x2x3x4 + x2x3x4", "--search",
                        "--basis", "B-SR6", "--json")
    assert code == 0 and json.loads(out)["found"]
    assert call(capsys, "derive", "xy = xy + x", "--search")[0] == 2


def test_derive_failing_script(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"start": "xy", "steps": [{"id": "F11", "dir": "fwd",
                                "subst": {"x1": "a", "x2": "b", "x3": "c", "x4": "d"}}],
                                "end": "xy"}))
    code, out, _ = call(capsys, "derive", str(path))
    assert code == 1 and "failed" in out


@pytest.mark.parametrize("which", WHICH)
def test_tables_diff_clean(capsys, which):
    code, out, _ = call(capsys, "tables", which, "--diff")
    assert code == 0 and "0 mismatches" in out


def test_tables_render():
    for which in WHICH:
        text = render_text(compute(which))
        assert text
    assert "--" in to_dot(compute("hasse-sr6"))
    with pytest.raises(ValueError):
        compute("table9")
