import json

import pytest

from pbnpin import load_example
from pbnpin.cli import main, parse_target
from pbnpin.netparse import parse

FAS_LINES = """# cell-cycle walkthrough FAS
CycE -> Rb
Rb -> CycA
E2F -> CycA
CycA -> CycA
Cdh1 -> CycA
UbcH10 -> CycA
CycE -> p27
p27 -> p27
CycB -> Cdc20
UbcH10 -> UbcH10
Cdh1 -> CycB
"""


@pytest.fixture()
def cell_file(tmp_path):
    from pbnpin.netparse import serialize
    p = tmp_path / "cell.pbn"
    p.write_text(serialize(load_example("cell_cycle")))
    return p


def test_check(cell_file, capsys):
    assert main(["check", str(cell_file)]) == 0
    assert "9 nodes" in capsys.readouterr().out


def test_check_errors(tmp_path, capsys):
    bad = tmp_path / "bad.pbn"
    bad.write_text("node Gene { 0.5: Gene 0.499: !Gene }")
    assert main(["check", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "Gene" in err and "1:6" in err
    empty = tmp_path / "empty.pbn"
    empty.write_text("")
    assert main(["check", str(empty)]) == 2
    assert main(["check", str(tmp_path / "missing.pbn")]) == 2


def test_graph(cell_file, tmp_path, capsys):
    dot = tmp_path / "g.dot"
    assert main(["graph", str(cell_file), "--dot", str(dot)]) == 0
    out = capsys.readouterr().out
    assert "67 elementary cycles" in out
    assert "x3 -> x1;" in dot.read_text()


def test_graph_acyclic_and_two_cycle(tmp_path, capsys):
    p = tmp_path / "chain.pbn"
    p.write_text("node a { 1: 1 } node b { 1: a }")
    assert main(["graph", str(p)]) == 0
    assert "acyclic" in capsys.readouterr().out
    p.write_text("node a { 1: b } node b { 1: a }")
    main(["graph", str(p)])
    assert "a -> b -> a" in capsys.readouterr().out


def test_synthesize_with_fas_file(cell_file, tmp_path):
    fas = tmp_path / "fas.txt"
    fas.write_text(FAS_LINES)
    report = tmp_path / "r.json"
    dot = tmp_path / "r.dot"
    assert main(["synthesize", str(cell_file), "--fas", str(fas), "--report", str(report),
                 "--dot", str(dot)]) == 0
    r = json.loads(report.read_text())
    assert r["schema"] == 1
    assert r["stage1"]["pinned"] == ["Rb", "CycA", "p27", "Cdc20", "UbcH10", "CycB"]
    assert r["stage1"]["nonuniform"] == ["Rb"]
    assert r["stage1"]["controllers"]["Cdc20"]["m_odot"] == [2, 2, 2, 2]
    assert r["stage2"]["xi"] == 6
    assert r["verification"]["stable"] is True
    assert r["target"]["index"] == 60
    assert "color=red" in dot.read_text()


def test_synthesize_target_flag_and_caps(cell_file, capsys):
    assert main(["synthesize", str(cell_file), "--target", "Rb=0,E2F=0,CycE=0,CycA=0,p27=0,Cdc20=0,"
                 "Cdh1=0,UbcH10=0,CycB=0"]) == 0
    assert main(["synthesize", str(cell_file), "--fas", "min"]) == 3
    assert main(["synthesize", str(cell_file), "--max-nodes", "4"]) == 3
    assert main(["synthesize", str(cell_file), "--target", "Rb=1"]) == 2


def test_verify(cell_file, tmp_path):
    assert main(["verify", str(cell_file)]) == 1
    report = tmp_path / "r.json"
    assert main(["synthesize", str(cell_file), "--report", str(report)]) == 0
    controlled = tmp_path / "controlled.pbn"
    controlled.write_text(json.loads(report.read_text())["controlled_model"])
    assert main(["verify", str(controlled)]) == 0
    one = tmp_path / "one.pbn"
    one.write_text("node a { 1: a }")
    assert main(["verify", str(one), "--target", "1"]) == 1


def test_parse_target_forms():
    m = parse("node a { 1: a } node b { 1: b }")
    assert parse_target("a=1,b=0", m) == (1, 0)
    assert parse_target("a=1 b=0", m) == (1, 0)
    assert parse_target("10", m) == (1, 0)
