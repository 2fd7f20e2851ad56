import json
import subprocess
import sys

import pytest

from aimon.cli import run


def out_of(capsys, argv):
    code = run(argv)
    return code, capsys.readouterr()


def test_card(capsys):
    code, cap = out_of(capsys, ["card", "AO:5"])
    assert code == 0
    assert cap.out.splitlines() == ["240", "formula==enumeration: pass"]


def test_card_json(capsys):
    code, cap = out_of(capsys, ["card", "AM:5", "--format", "json"])
    doc = json.loads(cap.out)
    assert code == 0 and doc["schema"] == 1 and doc["formula"] == doc["enumeration"] == 454


def test_card_outside_formula(capsys):
    code, cap = out_of(capsys, ["card", "AM:2"])
    assert code == 0 and cap.out.splitlines() == ["4", "formula==enumeration: skipped"]
    assert run(["card", "AM:2", "--strict"]) == 1


def test_rank_exhaustive(capsys):
    code, cap = out_of(capsys, ["rank", "AO:4", "--exhaustive"])
    assert code == 0 and cap.out.splitlines()[0] == "rank = 4"


def test_rank_report(capsys):
    code, cap = out_of(capsys, ["rank", "AM:6"])
    assert code == 0 and cap.out.startswith("rank = 6")


def test_rank_budget(capsys):
    argv = ["rank", "AO:7", "--exhaustive", "--budget", "50"]
    code, cap = out_of(capsys, argv)
    assert code == 0 and "skipped(budget)" in cap.err
    assert run(argv + ["--strict"]) == 1


def test_cong_dot_interval(capsys, tmp_path):
    target = tmp_path / "am5.dot"
    assert run(["cong", "AM:5", "--format", "dot", "--out", str(target)]) == 0
    text = target.read_text()
    names = ["rees(F_3)", "theta(Q_4^o)", "theta(Q_4^e)", "theta(Q_4^o)+theta(Q_4^e)",
             "rees(F_4^o)", "rees(F_4^e)", "pi(Q_4^o)", "pi(Q_4^e)", "rees(F_4)"]
    for name in names:
        assert f'"{name}" [label=' in text
    edges = [l.strip() for l in text.splitlines() if "->" in l]
    inside = [e for e in edges if all(any(f'"{n}"' == part.strip(' ;') for n in names) for part in e.split("->"))]
    assert len(inside) == 12
    assert text.count("[label=") == 16


def test_cong_fails_on_ao3(capsys):
    code, cap = out_of(capsys, ["cong", "AO:3"])
    assert code == 1 and "classification: fail" in cap.out


def test_cong_generic_monoid(capsys):
    code, cap = out_of(capsys, ["cong", "POI:3", "--format", "json"])
    doc = json.loads(cap.out)
    assert code == 0 and doc["size"] == len(doc["congruences"])


def test_green_text_and_png(capsys, tmp_path):
    png = tmp_path / "j.png"
    code, cap = out_of(capsys, ["green", "AM:5", "--png", str(png)])
    assert code == 0 and "predicted profile: pass" in cap.out
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_green_dot(capsys):
    code, cap = out_of(capsys, ["green", "AO:4", "--format", "dot"])
    assert code == 0 and cap.out.count("->") == 6


def test_enum(capsys):
    code, cap = out_of(capsys, ["enum", "AO:2"])
    assert code == 0 and cap.out.splitlines() == ["[]", "[2 | 2]", "[1 | 1]", "[1 2 | 1 2]"]


def test_dot_verb(capsys, tmp_path):
    code, cap = out_of(capsys, ["dot", "AM:4", "--out", str(tmp_path)])
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["AM4_congruences.dot", "AM4_congruences.png", "AM4_jposet.dot", "AM4_jposet.png"]


@pytest.mark.parametrize("argv", [
    [], ["frobnicate", "AO:3"], ["card"], ["card", "XX:3"], ["card", "AO:x"],
    ["rank", "POI:3"], ["check-all", "AO:3"], ["enum", "AO:3", "--format", "dot"],
    ["card", "AO:3", "--n-max", "abc"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_check_all_small(capsys, tmp_path):
    code = run(["check-all", "--n-max", "4", "--samples", "200", "--out", str(tmp_path)])
    cap = capsys.readouterr()
    lines = [l for l in cap.out.splitlines() if l.startswith("criterion")]
    assert len(lines) == 8
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["schema"] == 1
    failing = [c["id"] for c in report["claims"] if c["status"] == "fail"]
    assert failing == ["cong.AOn.3.count", "cong.AOn.3.hasse", "cong.AOn.3.named", "cong.AOn.3.rees"]
    assert code == 1
    assert (tmp_path / "report.timings.json").exists()
    assert (tmp_path / "figures" / "AM5_congruences.png").exists()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "aimon", "card", "AO:3"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("16\n")
