from itertools import product

import pytest
from hypothesis import given

from aimon.perm import (
    Parity,
    PartialPerm,
    PreconditionError,
    all_partial_perms,
    completion,
    compose,
    format_perm,
    gaps,
    inverse,
    is_monotone,
    is_order_preserving,
    is_order_reversing,
    parse_perm,
    rank,
    restrict,
    reverse,
    sign,
)
from conftest import full_perms, partial_perms, same_n

P = PartialPerm.from_map


def X(n, i):
    return [k for k in range(1, n + 1) if k != i]


# -- examples ---------------------------------------------------------------

def test_compose_identity_and_empty():
    a = P(3, {1: 2, 3: 3})
    assert compose(PartialPerm.identity(3), a) == a
    assert compose(PartialPerm.empty(3), a) == PartialPerm.empty(3)


def test_compose_left_to_right():
    a = P(3, {1: 2, 3: 3})
    b = P(3, {2: 1, 3: 2})
    assert compose(a, b) == P(3, {1: 1, 3: 2})
    assert a * b == compose(a, b)


def test_inverse_examples():
    assert inverse(PartialPerm.identity(4)) == PartialPerm.identity(4)
    assert inverse(P(3, {1: 2, 3: 3})) == P(3, {2: 1, 3: 3})
    assert inverse(PartialPerm.empty(3)) == PartialPerm.empty(3)


def test_rank_examples():
    assert rank(PartialPerm.identity(5)) == 5
    assert rank(PartialPerm.empty(5)) == 0
    assert rank(P(3, {1: 2, 3: 3})) == 2


def test_gaps_examples():
    assert gaps(P(3, {1: 2, 2: 3})) == (3, 1)
    assert gaps(PartialPerm.monotone(4, X(4, 1), X(4, 3))) == (1, 3)
    assert gaps(P(2, {1: 1})) == (2, 2)


def test_gaps_needs_rank_n_minus_1():
    with pytest.raises(PreconditionError):
        gaps(PartialPerm.identity(3))


def test_completion_examples():
    c = completion(PartialPerm.monotone(3, [1, 2], [2, 3]))
    assert c == P(3, {1: 2, 2: 3, 3: 1})
    assert completion(P(3, {1: 1, 3: 3})) == PartialPerm.identity(3)
    for n in range(2, 6):
        for k in range(1, n + 1):
            assert completion(PartialPerm.partial_identity(n, X(n, k))) == PartialPerm.identity(n)


def test_sign_examples():
    assert sign(PartialPerm.identity(5)) is Parity.EVEN
    assert sign(PartialPerm.from_cycles(3, "(1 2 3)")) is Parity.EVEN
    assert sign(PartialPerm.from_cycles(4, "(1 4)(2 3)")) is Parity.EVEN
    assert sign(PartialPerm.from_cycles(3, "(1 2)")) is Parity.ODD


def test_sign_needs_full_permutation():
    with pytest.raises(PreconditionError):
        sign(P(3, {1: 1}))


def test_order_predicates():
    ident = PartialPerm.identity(3)
    assert is_order_preserving(ident) and not is_order_reversing(ident)
    rev = P(3, {1: 3, 2: 2, 3: 1})
    assert is_order_reversing(rev) and not is_order_preserving(rev)
    single = P(3, {1: 1})
    assert is_order_preserving(single) and is_order_reversing(single)
    assert not is_monotone(P(3, {1: 2, 2: 1, 3: 3}))


def test_reverse_examples():
    assert reverse(P(3, {1: 1, 2: 2})) == P(3, {1: 2, 2: 1})
    assert reverse(PartialPerm.partial_identity(3, X(3, 2))) == P(3, {1: 3, 3: 1})


def test_reverse_rejects_low_rank():
    with pytest.raises(PreconditionError):
        reverse(P(3, {2: 1}))
    with pytest.raises(PreconditionError):
        reverse(P(3, {1: 2, 2: 1, 3: 3}))


def test_construction_validates():
    with pytest.raises(ValueError):
        PartialPerm(3, (1, 1, 0))
    with pytest.raises(ValueError):
        PartialPerm(3, (4, 0, 0))
    with pytest.raises(ValueError):
        PartialPerm(3, (1, 2))


def test_text_format():
    a = P(3, {1: 2, 3: 3})
    assert format_perm(a) == "[1 3 | 2 3]"
    assert format_perm(PartialPerm.empty(3)) == "[]"
    assert parse_perm("[1 3 | 2 3]", 3) == a
    assert parse_perm("[]", 4) == PartialPerm.empty(4)
    with pytest.raises(ValueError):
        parse_perm("1 3 | 2 3", 3)
    with pytest.raises(ValueError):
        parse_perm("[1 1 | 2 3]", 3)


def test_all_partial_perms_count():
    # sum over k of C(n,k)^2 k!
    assert [sum(1 for _ in all_partial_perms(n)) for n in range(1, 6)] == [2, 7, 34, 209, 1546]


def test_canonical_order_is_lexicographic_on_img():
    items = sorted(all_partial_perms(3))
    assert [a.img for a in items] == sorted(a.img for a in items)


# -- properties ---------------------------------------------------------------

@given(same_n(3))
def test_associative(t):
    a, b, c = t
    assert (a * b) * c == a * (b * c)


@given(same_n(2))
def test_inverse_laws(t):
    a, b = t
    assert a * ~a * a == a
    assert ~(a * b) == ~b * ~a
    assert ~~a == a


@given(partial_perms())
def test_dom_im_rank(a):
    assert len(a.dom) == len(a.im) == a.rank
    assert (a * ~a) == PartialPerm.partial_identity(a.n, a.dom)


@given(same_n(2, full_perms, max_n=6))
def test_sign_multiplicative(t):
    s, u = t
    assert sign(s * u) == sign(s) * sign(u)


def test_sign_multiplicative_exhaustive():
    for n in range(1, 6):
        perms = [a for a in all_partial_perms(n) if a.rank == n]
        signs = {p: sign(p) for p in perms}
        for s, u in product(perms, perms):
            assert signs[s * u] == signs[s] * signs[u]


@given(partial_perms(min_n=2))
def test_completion_restricts_to_input(a):
    n = a.n
    top = restrict(a, sorted(a.dom)[: n - 1]) if a.rank >= n - 1 else None
    if top is None or top.rank != n - 1:
        return
    c = completion(top)
    assert c.rank == n
    assert restrict(c, top.dom) == top


def test_completion_restriction_exhaustive():
    for n in range(2, 7):
        for a in all_partial_perms(n):
            if a.rank == n - 1:
                assert restrict(completion(a), a.dom) == a


def test_completion_multiplicative_exhaustive():
    for n in range(2, 5):
        top = [a for a in all_partial_perms(n) if a.rank == n - 1]
        for a, b in product(top, top):
            if (a * b).rank == n - 1:
                assert completion(a * b) == completion(a) * completion(b)


def test_monotone_closure_exhaustive():
    for n in range(1, 5):
        mono = [a for a in all_partial_perms(n) if is_monotone(a)]
        for a, b in product(mono, mono):
            assert is_monotone(a * b)
            if is_order_preserving(a) and is_order_preserving(b):
                assert is_order_preserving(a * b)


@given(partial_perms(min_n=2))
def test_reverse_involution(a):
    if a.rank < 2 or not is_monotone(a):
        return
    r = reverse(a)
    assert reverse(r) == a
    assert r.dom == a.dom and r.im == a.im
    assert is_order_preserving(r) != is_order_preserving(a)


@given(partial_perms())
def test_text_roundtrip(a):
    assert parse_perm(format_perm(a), a.n) == a


@given(partial_perms())
def test_hashable_and_frozen(a):
    assert hash(a) == hash(PartialPerm(a.n, tuple(a.img)))
    with pytest.raises(Exception):
        a.n = 3
