from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aimon import congruences as cg
from aimon.monoids import MonoidId, MonoidSpec, enumerate_monoid, reversal
from aimon.perm import PartialPerm, PreconditionError, ResourceError, all_partial_perms, reverse
from aimon.congruences import Congruence


def S(tag, n):
    return MonoidSpec(MonoidId(tag), n)


_ST = {}


def struct(tag, n):
    if (tag, n) not in _ST:
        _ST[tag, n] = cg.structure(S(tag, n))
    return _ST[tag, n]


def ideal(st_, name):
    (I,) = [I for I in cg.ideals(st_) if I.name == name]
    return I


def eps(n, pts):
    return PartialPerm.partial_identity(n, pts)


def brute_compatible(elems, labels):
    """Direct check of a ~ b => xa ~ xb and ax ~ bx over every x."""
    m = len(elems)
    items = list(elems)
    idx = {a: i for i, a in enumerate(items)}
    for a in range(m):
        for b in range(a + 1, m):
            if labels[a] != labels[b]:
                continue
            for x in items:
                if labels[idx[x * items[a]]] != labels[idx[x * items[b]]]:
                    return False
                if labels[idx[items[a] * x]] != labels[idx[items[b] * x]]:
                    return False
    return True


# -- ideals -------------------------------------------------------------------

def test_ideal_counts():
    assert sorted(I.name for I in cg.ideals(struct("AOn", 4))) == \
        ["I_0", "I_1", "I_2", "I_3", "I_3^e", "I_3^o", "I_4"]
    assert [I.name for I in cg.ideals(struct("AMn", 4))] == [f"F_{k}" for k in range(5)]
    assert len(cg.ideals(struct("AMn", 5))) == 8
    for I in cg.ideals(struct("AMn", 5)):
        assert cg.is_ideal(struct("AMn", 5).elems, I.members)


def test_ideal_generated_by():
    s = struct("AOn", 4)
    a = s.elems.index(eps(4, [1, 2]))
    assert cg.ideal_generated_by(s, a).name == "I_2"
    a = s.elems.index(eps(4, [2, 3, 4]))
    assert cg.ideal_generated_by(s, a).name == "I_3^o"


# -- named constructions -----------------------------------------------------------

def test_rees_examples():
    s = struct("AOn", 3)
    assert cg.rees(s, ideal(s, "I_0")) == Congruence.identity(s.elems)
    assert cg.rees(s, ideal(s, "I_3")) == Congruence.universal(s.elems)
    r = cg.rees(s, ideal(s, "I_1"))
    assert [len(b) for b in r.nontrivial_blocks()] == [10]
    assert r.block_count == len(s.elems) - 9


def test_rees_rejects_non_ideal():
    s = struct("AOn", 3)
    with pytest.raises(PreconditionError):
        cg.rees(s, [s.elems.identity_index()])


def test_theta_examples():
    s = struct("AMn", 4)
    t = cg.theta(s, "Q_4")
    blocks = sorted(t.nontrivial_blocks(), key=len)
    assert [len(b) for b in blocks] == [2, 105]
    assert {s.elems[i] for i in blocks[0]} == {PartialPerm.identity(4), reversal(4)}
    for n in range(3, 6):
        s = struct("AOn", n)
        assert cg.theta(s, "J_0") == Congruence.identity(s.elems)
    s = struct("AMn", 5)
    t = cg.theta(s, "Q_4^o")
    sizes = sorted(len(b) for b in t.nontrivial_blocks())
    assert sizes == [2] * 9 + [len(s.below("Q_4^o"))]
    assert len(s.below("Q_4^o")) == len(ideal(s, "F_3"))


def test_pi_equals_theta_on_chains():
    for n in (3, 4):
        s = struct("AMn", n)
        for lab in s.poset.class_labels:
            assert cg.pi(s, lab) == cg.theta(s, lab)


def test_pi_split_class():
    s = struct("AMn", 5)
    p = cg.pi(s, "Q_4^e")
    low = set(ideal(s, "F_3").members) | set(s.jclass("Q_4^o"))
    blocks = sorted(p.nontrivial_blocks(), key=len)
    assert set(blocks[-1]) == low
    assert [len(b) for b in blocks[:-1]] == [2, 2, 2, 2]
    assert all(set(b) <= set(s.jclass("Q_4^e")) for b in blocks[:-1])


def test_union_theta():
    s = struct("AMn", 5)
    u = cg.union_theta(s, "Q_4^o", "Q_4^e")
    assert cg.theta(s, "Q_4^o") < u and cg.theta(s, "Q_4^e") < u
    assert cg.union_theta(s, "Q_3", "Q_3") == cg.theta(s, "Q_3")
    assert (cg.theta(s, "Q_4^o") & cg.theta(s, "Q_4^e")) == cg.rees(s, ideal(s, "F_3"))


def test_named_congruences_compatible():
    for tag, n in (("AOn", 3), ("AOn", 4), ("AMn", 4), ("AMn", 5)):
        s = struct(tag, n)
        for name, c in cg.named_congruences(s).items():
            if name.startswith("pi(") and tag == "AOn":
                continue  # not claimed to be congruences of AO_n
            assert cg.is_compatible(c), name


def test_compatibility_against_brute_force():
    s = struct("AOn", 3)
    for name, c in cg.named_congruences(s).items():
        assert cg.is_compatible(c) == brute_compatible(s.elems, c.labels), name


def test_incompatible_partition_rejected():
    s = struct("AOn", 3)
    e = s.elems
    c = Congruence.from_blocks(e, [[e.identity_index(), e.index(eps(3, [1, 2]))]])
    assert not cg.is_compatible(c)
    with pytest.raises(AssertionError):
        cg.require_compatible(c)


# -- principal congruences -------------------------------------------------------------

def test_principal_trivial_pair():
    e = struct("AMn", 4).elems
    assert cg.principal_congruence(e, 5, 5) == Congruence.identity(e)


def test_principal_reversed_partial_identity():
    s = struct("AMn", 5)
    e3 = eps(5, [1, 2, 3])
    a, b = s.elems.index(e3), s.elems.index(reverse(e3))
    assert cg.principal_congruence(s.elems, a, b) == cg.theta(s, "Q_3")


@pytest.mark.parametrize("n", [3, 4])
def test_principal_partial_identities_give_rees(n):
    s = struct("AOn", n)
    e = s.elems
    subsets = [frozenset(c) for k in range(n + 1) for c in combinations(range(1, n + 1), k)]
    odd = []
    for Y in subsets:
        for Xs in subsets:
            if Xs < Y:
                a, b = e.index(eps(n, Xs)), e.index(eps(n, Y))
                p = cg.principal_congruence(e, a, b)
                if p != cg.rees(s, cg.ideal_generated_by(s, b)):
                    odd.append((sorted(Xs), sorted(Y)))
    # n = 3 has exactly one exception: id and id_{1,3} can be identified alone
    assert odd == ([([1, 3], [1, 2, 3])] if n == 3 else [])


@given(st.integers(0, 106), st.integers(0, 106))
def test_principal_is_least(a, b):
    s = struct("AMn", 4)
    lat = _lattice("AMn", 4)
    p = cg.principal_congruence(s.elems, a, b)
    assert p.related(a, b) and cg.is_compatible(p)
    for c in lat.congruences:
        if c.related(a, b):
            assert p <= c


# -- lattices ---------------------------------------------------------------------

_LAT = {}


def _lattice(tag, n):
    if (tag, n) not in _LAT:
        _LAT[tag, n] = cg.congruence_lattice(struct(tag, n).elems)
    return _LAT[tag, n]


@pytest.mark.parametrize("n", [4, 5])
def test_ao_lattice_all_rees(n):
    lat = _lattice("AOn", n)
    assert len(lat) == n + 3
    assert all(c.is_rees() for c in lat.congruences)


def test_ao3_extra_congruence():
    """AO_3 has a seventh congruence; it is checked here without the lattice engine."""
    s = struct("AOn", 3)
    lat = _lattice("AOn", 3)
    assert len(lat) == 7
    extra = [c for c in lat.congruences if not c.is_rees()]
    assert len(extra) == 1
    blocks = sorted([sorted(s.elems[i].img for i in b) for b in extra[0].nontrivial_blocks()], key=len)
    assert blocks[0] == [(1, 0, 3), (1, 2, 3)]
    assert set(blocks[1]) == {s.elems[i].img for i in ideal(s, "I_2^o").members}
    assert brute_compatible(s.elems, extra[0].labels)


@pytest.mark.parametrize("n,count", [(3, 4), (4, 7), (5, 16)])
def test_am_lattice_counts(n, count):
    assert len(_lattice("AMn", n)) == count


@pytest.mark.parametrize("key", [("AOn", 4), ("AMn", 4), ("AMn", 5)])
def test_lattice_closed(key):
    lat = _lattice(*key)
    assert lat.is_closed()
    e = lat.elems
    ident, omega = lat.index(Congruence.identity(e)), lat.index(Congruence.universal(e))
    assert lat.leq[ident].all() and lat.leq[:, omega].all()
    for c in lat.congruences:
        assert cg.is_compatible(c)


@pytest.mark.parametrize("n", [3, 4])
def test_idempotent_collapse(n):
    """If e ~ f for idempotents f < e, then e ~ empty; n = 3 has one exception."""
    s = struct("AOn", n)
    e = s.elems
    idem = [i for i in range(len(e)) if e[i] * e[i] == e[i]]
    zero = e.index(PartialPerm.empty(n))
    failures = 0
    for c in _lattice("AOn", n).congruences:
        for x in idem:
            for y in idem:
                if x != y and cg.natural_order(e[y], e[x]) and c.related(x, y) and not c.related(x, zero):
                    failures += 1
    assert failures == (1 if n == 3 else 0)


def test_lattice_cap():
    with pytest.raises(ResourceError):
        cg.congruence_lattice(struct("AMn", 5).elems, cap=100)


def test_classification_reports():
    rep = cg.verify_classification(S("AOn", 4))
    assert rep.ok and rep.all_rees and rep.lattice_size == 7
    assert rep.expected_size == 7 and not rep.hasse_extra
    rep = cg.verify_classification(S("AMn", 5))
    assert rep.ok and rep.interval == {"size": 9, "edges": 12, "ok": True}
    rep = cg.verify_classification(S("AMn", 3))
    assert rep.ok
    assert [rep.lattice.name(i) for i in np.argsort(rep.lattice.leq.sum(axis=0))] == \
        ["id", "rees(F_1)", "rees(F_2)", "omega"]
    rep = cg.verify_classification(S("AOn", 3))
    assert not rep.ok and rep.unnamed and rep.to_dict()["status"] == "fail"


def test_am_identities():
    for n in (4, 5, 6):
        nc = cg.named_congruences(struct("AMn", n))
        for c in cg._identity_checks(S("AMn", n), nc):
            assert c["status"] == "pass", c["identity"]


def test_idempotents_and_natural_order():
    idem = cg.idempotents(struct("AOn", 3).elems)
    assert {a for a in idem} == {a for a in all_partial_perms(3) if a * a == a}
    assert len(idem) == 8
    assert cg.natural_order(eps(3, [1, 2]), eps(3, [1, 2, 3]))
    assert not cg.natural_order(eps(3, [1, 2, 3]), eps(3, [1, 2]))
    assert cg.natural_order(eps(3, [2]), eps(3, [2]))


def test_output_formats():
    rep = cg.verify_classification(S("AMn", 5))
    doc = cg.lattice_json(rep.lattice)
    assert len(doc["congruences"]) == 16 and len(doc["hasse"]) == len(rep.lattice.covers())
    dot = cg.lattice_dot(rep.lattice)
    assert dot.startswith("digraph") and dot.count("->") == len(rep.lattice.covers())


# -- partition algebra ------------------------------------------------------------------

labels8 = st.lists(st.integers(0, 3), min_size=8, max_size=8)


@given(labels8, labels8)
def test_meet_join_bounds(x, y):
    e = enumerate_monoid(S("En", 3))
    a = Congruence(e, np.array(x))
    b = Congruence(e, np.array(y))
    m, j = a & b, a | b
    assert m <= a and m <= b and a <= j and b <= j
    for p in range(8):
        for q in range(8):
            assert m.related(p, q) == (a.related(p, q) and b.related(p, q))
    assert (a | a) == a and (a & a) == a
    assert j.block_count <= min(a.block_count, b.block_count)


def test_union_find():
    uf = cg.UnionFind(5)
    assert uf.union(0, 3) and not uf.union(3, 0)
    uf.union(1, 4)
    assert list(uf.labels()) == [0, 1, 2, 0, 1]
