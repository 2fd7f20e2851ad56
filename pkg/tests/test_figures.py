from aimon import congruences as cg
from aimon.figures import hasse_png, jposet_png, lattice_png
from aimon.green import jclass_profile
from aimon.monoids import MonoidId, MonoidSpec

PNG = b"\x89PNG\r\n\x1a\n"


def test_hasse_png(tmp_path):
    p = tmp_path / "chain.png"
    hasse_png(["a", "b", "c"], [("a", "b"), ("b", "c")], p, "chain")
    assert p.read_bytes()[:8] == PNG


def test_poset_and_lattice_png_deterministic(tmp_path):
    spec = MonoidSpec(MonoidId.AMn, 5)
    poset = jclass_profile(spec).poset
    lat = cg.verify_classification(spec).lattice
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    jposet_png(poset, a)
    jposet_png(poset, b)
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.png"
    lattice_png(lat, c, "AM_5")
    assert c.read_bytes()[:8] == PNG


def test_single_node(tmp_path):
    p = tmp_path / "one.png"
    hasse_png(["only"], [], p)
    assert p.stat().st_size > 0
