import json

import pytest

from graphroots.cli import main
from graphroots.gadgets import gadget, gadget_square
from graphroots.io import read_graph, write_graph

PHI = "c x y z\nc x u v\nc y a b\n"


@pytest.fixture
def files(tmp_path):
    write_graph(gadget("G1").graph, tmp_path / "g1.json")
    write_graph(gadget("G2").graph, tmp_path / "g2.txt")
    write_graph(gadget_square(), tmp_path / "sq.json")
    (tmp_path / "phi.txt").write_text(PHI)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_girth_and_power(files, capsys):
    code, out = run(capsys, "girth", "--in", files / "g1.json")
    assert code == 0 and out.out.strip() == "5"
    run(capsys, "power", "--in", files / "g1.json", "--out", files / "p.json")
    assert read_graph(files / "p.json") == gadget_square()


def test_iso_exit_codes(files, capsys):
    assert run(capsys, "iso", files / "g1.json", files / "g2.txt")[0] == 1
    assert run(capsys, "iso", files / "g1.json", files / "g1.json")[0] == 0


def test_gadget_chain_square(files, capsys):
    out = files / "chain.json"
    assert run(capsys, "gadget", "chain", "--pattern", "12", "--attach", "1", "--square", "--out", out)[0] == 0
    assert read_graph(out).n == 31


def test_root_find_and_verify(files, capsys):
    code, out = run(capsys, "root", "find", "--in", files / "sq.json", "--girth-min", "5", "--out", files / "roots")
    assert code == 0 and out.out.startswith("2 root")
    stats = json.loads((files / "roots" / "stats.json").read_text())
    assert stats["count"] == 2 and stats["complete"]
    code, _ = run(capsys, "root", "verify", "--square", files / "sq.json", "--root", files / "g2.txt", "--girth-min", "5")
    assert code == 0
    code, out = run(capsys, "root", "verify", "--square", files / "sq.json", "--root", files / "g1.json", "--girth-min", "6")
    assert code == 1 and "girth" in out.out


def test_root_find_none(files, capsys):
    write_graph(read_graph(files / "g1.json"), files / "plain.json")
    code, out = run(capsys, "root", "find", "--in", files / "plain.json", "--girth-min", "5")
    assert code == 1 and out.out.startswith("0 root")


def test_root_find_deterministic(files, capsys):
    for d in ("a", "b"):
        run(capsys, "root", "find", "--in", files / "sq.json", "--girth-min", "5", "--out", files / d)
    for name in ("root0001.json", "root0002.json", "stats.json"):
        assert (files / "a" / name).read_bytes() == (files / "b" / name).read_bytes()


def test_reduce_roundtrip_extract(files, capsys):
    gphi, summary = files / "gphi.json", files / "summary.json"
    assert run(capsys, "reduce", "--in", files / "phi.txt", "--out", gphi, "--summary", summary)[0] == 0
    assert json.loads(summary.read_text())["expected"]["vertices"] == 160
    code, out = run(capsys, "roundtrip", "--in", files / "phi.txt", "--assign", "x=1,b=1", "--out", files / "h.json")
    assert code == 0 and "matches" in out.out
    code, out = run(capsys, "extract", "--gphi", gphi, "--root", files / "h.json", "--instance", files / "phi.txt")
    assert code == 0 and json.loads(out.out)["b"] is True


def test_roundtrip_unsatisfying(files, capsys):
    code, out = run(capsys, "roundtrip", "--in", files / "phi.txt", "--assign", "x=1,y=1")
    assert code == 1


def test_convert_and_dot(files, capsys):
    assert run(capsys, "convert", "--in", files / "g1.json", "--out", files / "g1.txt")[0] == 0
    assert run(capsys, "convert", "--in", files / "g1.txt", "--out", files / "g1.dot")[0] == 0
    assert "graph G {" in (files / "g1.dot").read_text()
    assert read_graph(files / "g1.txt") == gadget("G1").graph


def test_family(capsys):
    code, out = run(capsys, "family", "--k", "2", "--attach", "1")
    assert code == 0 and "classes=3" in out.out


def test_errors_exit_2(files, capsys):
    (files / "bad.txt").write_text("p x 1\n")
    code, out = run(capsys, "girth", "--in", files / "bad.txt")
    assert code == 2 and "line 1" in out.err
    code, out = run(capsys, "verify", "--suite", "bogus", "--workdir", files / "w")
    assert code == 2 and "unknown check" in out.err
    with pytest.raises(SystemExit) as exc:
        main(["root", "find", "--in", "x", "--girth-min", "2"])
    assert exc.value.code == 2


def test_verify_subset(files, capsys):
    code, out = run(capsys, "verify", "--suite", "A1,A2", "--workdir", files / "w")
    assert code == 0
    assert "A1: PASS" in out.out and "A2: PASS" in out.out
    assert json.loads((files / "w" / "report.json").read_text()) == {"A1": "PASS", "A2": "PASS"}
