import json
from fractions import Fraction

from ptfwitness.circuits import mp
from ptfwitness.cli import main
from ptfwitness.core import FnTable, box
from ptfwitness.dual_or import build_psi
from ptfwitness.mixtures import ProductMixture
from ptfwitness.serialize import (
    circuit_from_json,
    dumps,
    matrix_from_csv,
    mixture_from_json,
    table_from_json,
)

F = Fraction


def test_table_roundtrip():
    t = FnTable(box([3]), {(0,): F(1, 3), (2,): F(-5, 7)})
    back = table_from_json(json.loads(dumps(t)))
    assert back == t


def test_rationals_never_floats():
    t = FnTable(box([2]), {(1,): F(1, 3)})
    text = dumps(t)
    assert "0.3" not in text and "1/3" in text


def test_mixture_roundtrip():
    lam = FnTable(box([2]), {(0,): F(1, 2), (1,): F(1, 2)})
    mix = ProductMixture({"a": lam}, [(F(1, 2), ("a", "a")), (F(1, 2), ("a", "a"))])
    back = mixture_from_json(json.loads(dumps(mix)))
    assert back.densify() == mix.densify()


def test_circuit_roundtrip():
    c = mp(2, 2)
    back = circuit_from_json(json.loads(dumps(c)))
    for p in [(0, 0, 0, 0), (1, 0, 0, 1), (1, 1, 1, 1)]:
        assert back.evaluate(p) == c.evaluate(p)


def test_certificate_serializes():
    _, cert = build_psi(4, 4, F(1, 3))
    text = dumps(cert)
    assert "orth_claimed" in text


def test_matrix_from_csv():
    m = matrix_from_csv("1, -1\n-1, 1\n")
    assert m == [[1, -1], [-1, 1]]


def test_cli_degthr_parity(capsys):
    code = main(["oracle", "degthr", "--fn", "parity", "--n", "3"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "3"


def test_cli_witness_dual_or(tmp_path, capsys):
    out = tmp_path / "w"
    code = main(["witness", "build", "dual-or", "--n", "16", "--eps", "1/3",
                 "--out", str(out)])
    assert code == 0
    assert "PASS" in capsys.readouterr().out
    manifest = json.loads((out / "manifest.json").read_text())
    assert "psi.json" in manifest["artifacts"]
    psi = table_from_json(json.loads((out / "psi.json").read_text()))
    assert psi.l1() == 1


def test_cli_manifest_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["witness", "build", "mp", "--m", "1", "--r", "2",
                     "--out", str(out)]) == 0
    ma = json.loads((a / "manifest.json").read_text())["artifacts"]
    mb = json.loads((b / "manifest.json").read_text())["artifacts"]
    assert ma == mb


def test_cli_verify(tmp_path, capsys):
    out = tmp_path / "w"
    main(["witness", "build", "rs-smooth", "--m", "1", "--r", "2", "--out", str(out)])
    capsys.readouterr()
    code = main(["verify", str(out / "Lambda.json")])
    assert code == 0
    assert "distribution = True" in capsys.readouterr().out


def test_cli_smooth_degthr(capsys):
    code = main(["oracle", "smooth-degthr", "--fn", "parity", "--n", "2",
                 "--gamma", "1/1"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "2"


def test_cli_density(capsys):
    code = main(["oracle", "density", "--fn", "parity", "--n", "2", "--cap", "2"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "1"


def test_cli_disc2(tmp_path, capsys):
    csv = tmp_path / "m.csv"
    csv.write_text("1 -1\n-1 1\n")
    code = main(["oracle", "disc2", "--csv", str(csv)])
    assert code == 0
    assert capsys.readouterr().out.strip() == "1/4"


def test_cli_bounds_formulas(capsys):
    code = main(["bounds", "formulas", "--ell", "2", "--m", "16",
                 "--degthr", "2", "--c", "1/8"])
    assert code == 0
    assert "disc_bound_value" in capsys.readouterr().out


def test_cli_amplify(tmp_path, capsys):
    code = main(["amplify", "--f", "x1", "--n", "1", "--m", "1", "--theta", "2",
                 "--out", str(tmp_path / "amp")])
    assert code == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_circuits_dot(tmp_path, capsys):
    dot = tmp_path / "c.dot"
    code = main(["circuits", "build", "mp", "--m", "2", "--r", "2",
                 "--dot", str(dot)])
    assert code == 0
    assert "digraph" in dot.read_text()
