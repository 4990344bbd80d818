import json
import shutil
from importlib import resources

import pytest

from qcost import gates as G
from qcost.circuit import Circuit
from qcost.cli import main
from qcost.formats import parse_circuit, write_circuit

FIXTURES = resources.files("qcost.data.fixtures")


def fixture(name):
    return str(FIXTURES.joinpath(name))


def last_cost(text, label):
    for line in text.splitlines():
        if line.strip().startswith(label):
            return int(line.split()[-1])
    raise AssertionError(f"{label!r} not in output:\n{text}")


def test_optimize_fredkin(tmp_path, capsys):
    out, rep = tmp_path / "f.real", tmp_path / "f.json"
    assert main(["optimize", fixture("fredkin_nct.real"), "-o", str(out), "--report", str(rep)]) == 0
    text = capsys.readouterr().out
    assert last_cost(text, "optimized quantum_cost") == 5
    assert last_cost(text, "raw quantum_cost") == 11
    data = json.loads(rep.read_text())
    assert data["quantum_cost"] == 5 and data["total_cost"] == 8
    assert len(parse_circuit(out.read_text())) == 5


def test_optimize_skip_preopt(tmp_path, capsys):
    args = ["optimize", fixture("fredkin_nct.real"), "--skip-pre-opt", "--out-dir", str(tmp_path)]
    assert main(args) == 0
    assert last_cost(capsys.readouterr().out, "optimized quantum_cost") <= 11


def test_optimize_is_deterministic(tmp_path):
    reports = []
    for k in range(2):
        rep = tmp_path / f"r{k}.json"
        main(["optimize", fixture("3_17.real"), "-o", str(tmp_path / f"o{k}.real"), "--report", str(rep)])
        reports.append(rep.read_bytes())
    assert reports[0] == reports[1]


def test_optimize_batch(tmp_path, capsys):
    files = [fixture("fredkin_nct.real"), fixture("3_17.real")]
    assert main(["optimize", *files, "--out-dir", str(tmp_path), "-j", "2"]) == 0
    text = capsys.readouterr().out
    assert text.index("fredkin_nct") < text.index("3_17")
    assert json.loads((tmp_path / "3_17.report.json").read_text())["quantum_cost"] == 7
    assert (tmp_path / "fredkin_nct.opt.real").exists()


def test_optimize_batch_rejects_single_output(tmp_path):
    files = [fixture("fredkin_nct.real"), fixture("3_17.real")]
    assert main(["optimize", *files, "-o", str(tmp_path / "x.real")]) == 2


def test_optimize_missing_and_malformed(tmp_path):
    assert main(["optimize", str(tmp_path / "nope.real")]) == 2
    bad = tmp_path / "bad.real"
    bad.write_text(".numvars 1\n.variables a\n.begin\nt4 a\n.end\n")
    assert main(["optimize", str(bad)]) == 2


def test_optimize_verification_failure(tmp_path, broken_merge):
    assert main(["optimize", fixture("toffoli.real"), "--out-dir", str(tmp_path)]) == 3


def test_optimize_extra_templates(tmp_path):
    tpl = tmp_path / "extra.tpl"
    tpl.write_text("template mine 2\nt2 a b\nt2 a b\nend\n")
    assert main(["optimize", fixture("toffoli.real"), "--out-dir", str(tmp_path), "--templates", str(tpl)]) == 0
    tpl.write_text("template mine 2\nt2 a b\nend\n")
    assert main(["optimize", fixture("toffoli.real"), "--out-dir", str(tmp_path), "--templates", str(tpl)]) == 2


@pytest.mark.parametrize("name,cost", [("toffoli.real", 5), ("swap_cnots.real", 1), ("peres.real", 4)])
def test_cost(name, cost, capsys):
    assert main(["cost", fixture(name)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["quantum_cost"] == cost


def test_cost_parse_error(tmp_path):
    bad = tmp_path / "bad.real"
    bad.write_text(".numvars 2\n.variables a b\n.begin\nt2 a a\n.end\n")
    assert main(["cost", str(bad)]) == 2


def write(tmp_path, name, c):
    p = tmp_path / name
    p.write_text(write_circuit(c))
    return str(p)


def test_check(tmp_path, capsys):
    tof = fixture("toffoli.real")
    ncv = write(tmp_path, "ncv.real", Circuit(3, [G.cv(1, 2), G.cnot(0, 1), G.cv_dag(1, 2), G.cnot(0, 1), G.cv(0, 2)]))
    assert main(["check", tof, ncv]) == 0
    assert main(["check", tof, write(tmp_path, "id.real", Circuit(3))]) == 1
    big = write(tmp_path, "big.real", Circuit(17, [G.x(0)]))
    assert main(["check", big, big]) == 4
    assert main(["check", tof, str(tmp_path / "missing.real")]) == 2
    assert main(["check", tof, fixture("swap_cnots.real")]) == 2


def test_check_primary_mode(tmp_path):
    from qcost.circuit import WireRole

    r = (WireRole("a"), WireRole("b", None, True))
    a = write(tmp_path, "a.real", Circuit(2, [G.x(1), G.x(0)], r))
    b = write(tmp_path, "b.real", Circuit(2, [G.x(0)], r))
    assert main(["check", a, b]) == 1
    assert main(["check", a, b, "--mode", "primary"]) == 0


def test_templates(tmp_path, capsys):
    assert main(["templates"]) == 0
    assert "fredkin-toffolis" in capsys.readouterr().out
    bad = tmp_path / "bad.tpl"
    bad.write_text("template broken 2\nt2 a b\nt2 b a\nend\n")
    assert main(["templates", "--file", str(bad)]) == 1
    assert main(["templates", "--file", str(tmp_path / "none.tpl")]) == 2


def test_bench(capsys):
    assert main(["bench"]) == 0
    out = capsys.readouterr().out
    for name in ("fredkin", "fredkin-no-preopt", "3_17", "toffoli", "peres", "swap"):
        assert any(line.split()[0] == name and "pass" in line for line in out.splitlines()[1:])


def test_bench_tampered_fixture(tmp_path, capsys):
    for f in FIXTURES.iterdir():
        if f.name.endswith(".real"):
            shutil.copy(str(f), tmp_path / f.name)
    (tmp_path / "toffoli.real").write_text(write_circuit(Circuit(3, [G.toffoli(0, 1, 2), G.toffoli(0, 2, 1)])))
    assert main(["bench", "--fixtures", str(tmp_path)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_bad_flags():
    with pytest.raises(SystemExit):
        main(["optimize", "x.real", "--max-iters", "0"])
    with pytest.raises(SystemExit):
        main([])
