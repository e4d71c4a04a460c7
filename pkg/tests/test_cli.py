import json

import pytest

from qdisynth import analysis
from qdisynth.cli import analyze_netlist, main
from qdisynth.netlist import build_fixture, canonical_structure, parse_netlist, render_netlist
from qdisynth.synth import synth_dims

from conftest import AND3_BITS


@pytest.fixture
def files(tmp_path):
    (tmp_path / "and3.tt").write_text("n=3\n" + "".join(map(str, AND3_BITS)) + "\n")
    (tmp_path / "const0.tt").write_text("n=2\n0000\n")
    (tmp_path / "bad.tt").write_text("n=3\n0101\n")
    for name in ("fig3", "fig4", "fig5"):
        (tmp_path / f"{name}.nl").write_text(render_netlist(build_fixture(name)))
    return tmp_path


def test_synth_dims(files, capsys):
    out = files / "dims.nl"
    assert main(["synth", "--method", "dims", str(files / "and3.tt"), "-o", str(out)]) == 0
    nl = parse_netlist(out.read_text())
    assert sum(1 for g in nl.gates if g.kind.value == "C") == 8
    assert "minterms covered:        8" in capsys.readouterr().out


def test_synth_safe_is_fig5(files):
    out = files / "safe.nl"
    assert main(["synth", "--method", "safe", str(files / "and3.tt"), "-o", str(out)]) == 0
    assert canonical_structure(parse_netlist(out.read_text())) == canonical_structure(build_fixture("fig5"))


def test_synth_to_stdout(files, capsys):
    assert main(["synth", "--method", "fdims", str(files / "and3.tt")]) == 0
    captured = capsys.readouterr()
    assert canonical_structure(parse_netlist(captured.out)) == canonical_structure(build_fixture("fig4"))
    assert "underestimates" in captured.err


def test_synth_rejects_constant(files, capsys):
    assert main(["synth", "--method", "dims", str(files / "const0.tt")]) == 2
    assert "constant" in capsys.readouterr().err


def test_synth_parse_error_has_line(files, capsys):
    assert main(["synth", str(files / "bad.tt")]) == 2
    assert "line 2" in capsys.readouterr().err


def test_synth_cap_message(files, capsys, monkeypatch):
    monkeypatch.setenv("QDISYNTH_MAX_N", "2")
    assert main(["synth", str(files / "and3.tt")]) == 2
    assert "2^n = 8" in capsys.readouterr().err


def test_analyze_fig4_orphans(files, capsys):
    assert main(["analyze", "--mode", "orphans", "--phase", "set", str(files / "fig4.nl")]) == 1
    assert "4 of 8 rows with gate orphans" in capsys.readouterr().out


def test_analyze_fig3_clean(files, capsys):
    assert main(["analyze", "--mode", "orphans", str(files / "fig3.nl")]) == 0
    assert "0 of 8 rows" in capsys.readouterr().out


def test_analyze_indication(files, capsys):
    assert main(["analyze", "--mode", "indication", str(files / "fig3.nl")]) == 0
    assert "strong" in capsys.readouterr().out


def test_analyze_json(files, capsys):
    assert main(["analyze", "--format", "json", str(files / "fig4.nl")]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["orphans"]["orphan_rows"] == ["001", "011", "101", "111"]
    assert doc["indication"]["io_class"] == "strong"


def test_analyze_invalid_netlist(files, capsys):
    doc = json.loads((files / "fig4.nl").read_text())
    doc["gates"][1]["inputs"] = ["X20", "nowhere"]
    (files / "broken.nl").write_text(json.dumps(doc))
    assert main(["analyze", str(files / "broken.nl")]) == 2
    assert "undriven: nowhere" in capsys.readouterr().err


def test_round_trip_analysis_identical(files, capsys, and3):
    out = files / "dims.nl"
    main(["synth", str(files / "and3.tt"), "-o", str(out)])
    capsys.readouterr()
    main(["analyze", "--format", "json", str(out)])
    from_cli = capsys.readouterr().out
    in_memory, _ = analyze_netlist(synth_dims(and3), "all", "json", "both", False)
    assert from_cli == in_memory


def test_table1_default(capsys):
    assert main(["table1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 10
    assert "Orphan due to OR1↑" in lines[3]


def test_table1_json_equals_programmatic(capsys):
    assert main(["table1", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == json.loads(json.dumps(analysis.table1_data(), ensure_ascii=False))


def test_table1_reset(capsys):
    assert main(["table1", "--phase", "reset"]) == 0
    assert "reset phase" in capsys.readouterr().out


def test_simulate_fig4(files, capsys):
    assert main(["simulate", str(files / "fig4.nl"), "110"]) == 0
    lines = capsys.readouterr().out.splitlines()
    set_lines = [ln for ln in lines if ln.endswith(" set")]
    assert set_lines[-1] == "t=3 f0 rise set"


def test_simulate_spacer(files, capsys):
    assert main(["simulate", str(files / "fig3.nl"), "---"]) == 0
    assert capsys.readouterr().out == ""


def test_simulate_fig5_all_ones(files, capsys):
    assert main(["simulate", str(files / "fig5.nl"), "111"]) == 0
    gate_lines = [ln for ln in capsys.readouterr().out.splitlines() if " set" in ln and not ln.split()[1].startswith("X")]
    assert gate_lines == ["t=1 f1 rise set"]


def test_simulate_rails_and_json(files, capsys):
    assert main(["simulate", "--rails", "--format", "json", str(files / "fig4.nl"), "X30,X20,X11"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert {e["net"] for e in doc["set"]} >= {"OR1", "isf", "C3", "f0"}


@pytest.mark.parametrize("word", ["11", "1a1", "--"])
def test_simulate_malformed_codeword(files, capsys, word):
    assert main(["simulate", str(files / "fig4.nl"), word]) == 2


def test_fixture_command(tmp_path):
    out = tmp_path / "f.nl"
    assert main(["fixture", "fig4", "-o", str(out)]) == 0
    assert parse_netlist(out.read_text()) == build_fixture("fig4")


def test_verify_command(capsys):
    assert main(["verify", "--n", "2"]) == 0
    assert "checked 14 functions" in capsys.readouterr().out
    assert main(["verify", "--n", "4", "--samples", "5", "--seed", "3"]) == 0
