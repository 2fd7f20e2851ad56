"""The inverse submonoids of I_n studied here, their membership tests and sizes.

Nine named families plus the general construction I_n(G) (all restrictions of
members of a permutation group G) are addressed by a :class:`MonoidSpec`.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial

import numpy as np

from .elements import ElementSet
from .perm import (
    DimensionError,
    Parity,
    PartialPerm,
    PreconditionError,
    ResourceError,
    completion,
    compose,
    gaps,
    is_monotone,
    is_order_preserving,
    is_order_reversing,
    sign,
)

ENUM_CAP = 8
FORMULA_CAP = 12


class FormulaDomainError(PreconditionError):
    """A closed-form count was requested outside the range where it holds."""


class MonoidId(enum.Enum):
    In = "In"
    Sn = "Sn"
    An = "An"
    En = "En"
    POIn = "POIn"
    PMIn = "PMIn"
    AIn = "AIn"
    AOn = "AOn"
    AMn = "AMn"
    InG = "InG"


_SHORT = {
    "I": MonoidId.In, "S": MonoidId.Sn, "A": MonoidId.An, "E": MonoidId.En,
    "POI": MonoidId.POIn, "PMI": MonoidId.PMIn, "AI": MonoidId.AIn,
    "AO": MonoidId.AOn, "AM": MonoidId.AMn, "InG": MonoidId.InG,
}
_SHORT_REV = {v: k for k, v in _SHORT.items()}


@dataclass(frozen=True)
class MonoidSpec:
    id: MonoidId
    n: int
    group_generators: tuple = field(default=())

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("chain size must be at least 2")
        if self.id is MonoidId.InG:
            for g in self.group_generators:
                if g.n != self.n or g.rank != self.n:
                    raise ValueError(f"group generator {g} is not a permutation of {{1..{self.n}}}")
        elif self.group_generators:
            raise ValueError("group generators are only meaningful for InG")

    def __str__(self):
        return format_spec(self)

    @property
    def name(self) -> str:
        return f"{_SHORT_REV[self.id]}_{self.n}"


def _format_cycles(p: PartialPerm) -> str:
    from .perm import cycles
    cs = [c for c in cycles(p) if len(c) > 1]
    if not cs:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)


def format_spec(spec: MonoidSpec) -> str:
    head = f"{_SHORT_REV[spec.id]}:{spec.n}"
    if spec.id is MonoidId.InG:
        gens = ",".join(_format_cycles(g) for g in spec.group_generators)
        head += f":[{gens}]"
    return head


def parse_spec(text: str) -> MonoidSpec:
    """Parse ``AO:5``, ``AM:7`` or ``InG:4:[(1 2),(1 2 3 4)]``."""
    m = re.fullmatch(r"\s*([A-Za-z]+)\s*:\s*(\d+)\s*(?::\s*\[(.*)\])?\s*", text)
    if not m:
        raise ValueError(f"bad monoid spec {text!r}")
    tag, n, gens = m.group(1), int(m.group(2)), m.group(3)
    key = tag if tag in _SHORT else tag.rstrip("n")
    if key not in _SHORT:
        raise ValueError(f"unknown monoid family {tag!r}")
    mid = _SHORT[key]
    if mid is MonoidId.InG:
        if gens is None:
            raise ValueError("InG needs a generator list, e.g. InG:4:[(1 2),(1 2 3 4)]")
        parts = re.findall(r"(?:\([^()]*\))+", gens)
        return MonoidSpec(mid, n, tuple(PartialPerm.from_cycles(n, p) for p in parts))
    if gens is not None:
        raise ValueError(f"{tag} does not take generators")
    return MonoidSpec(mid, n)


def reversal(n: int) -> PartialPerm:
    """The full order-reversing permutation k -> n+1-k."""
    return PartialPerm(n, tuple(range(n, 0, -1)))


# -- membership -----------------------------------------------------------

def _rank_n1_ao(a: PartialPerm) -> bool:
    d, i = gaps(a)
    return d % 2 == i % 2


def _rank_n1_am_reversing(a: PartialPerm) -> bool:
    d, i = gaps(a)
    if a.n % 4 in (0, 3):
        return d % 2 != i % 2
    return d % 2 == i % 2


def contains(spec: MonoidSpec, a: PartialPerm) -> bool:
    """Membership decided by the rank/gap-parity characterisations."""
    if a.n != spec.n:
        raise DimensionError(f"element on chain {a.n}, monoid on chain {spec.n}")
    n, r, mid = spec.n, a.rank, spec.id
    if mid is MonoidId.In:
        return True
    if mid is MonoidId.Sn:
        return r == n
    if mid is MonoidId.An:
        return r == n and sign(a) is Parity.EVEN
    if mid is MonoidId.En:
        return all(v == k + 1 for k, v in enumerate(a.img) if v)
    if mid is MonoidId.POIn:
        return is_order_preserving(a)
    if mid is MonoidId.PMIn:
        return is_monotone(a)
    if mid is MonoidId.AIn:
        if r <= n - 2:
            return True
        if r == n - 1:
            return sign(completion(a)) is Parity.EVEN
        return sign(a) is Parity.EVEN
    if mid is MonoidId.AOn:
        if not is_order_preserving(a):
            return False
        if r <= n - 2:
            return True
        if r == n:
            return a == PartialPerm.identity(n)
        return _rank_n1_ao(a)
    if mid is MonoidId.AMn:
        if not is_monotone(a):
            return False
        if r <= n - 2:
            return True
        if r == n:
            return a == PartialPerm.identity(n) or (a == reversal(n) and n % 4 in (0, 1))
        if is_order_preserving(a) and _rank_n1_ao(a):
            return True
        return is_order_reversing(a) and _rank_n1_am_reversing(a)
    if mid is MonoidId.InG:
        return _in_group_restrictions(spec, a)
    raise AssertionError(mid)


def _in_group_restrictions(spec: MonoidSpec, a: PartialPerm) -> bool:
    group = subgroup_closure(spec.n, spec.group_generators)
    return any(all(v == 0 or g.img[k] == v for k, v in enumerate(a.img)) for g in group)


def _inversion_parity(p: PartialPerm) -> int:
    v = p.img
    return sum(1 for x in range(len(v)) for y in range(x + 1, len(v)) if v[x] > v[y]) % 2


def _has_even_extension(a: PartialPerm) -> bool:
    n = a.n
    free_dom = [k for k, v in enumerate(a.img) if not v]
    free_im = sorted(set(range(1, n + 1)) - a.im)
    for arr in permutations(free_im):
        img = list(a.img)
        for k, v in zip(free_dom, arr):
            img[k] = v
        if _inversion_parity(PartialPerm(n, tuple(img))) == 0:
            return True
    return False


def _pairwise(a: PartialPerm, cmp) -> bool:
    pts = sorted(a.dom)
    return all(cmp(a(x), a(y)) for x, y in combinations(pts, 2))


def contains_by_oracle(spec: MonoidSpec, a: PartialPerm) -> bool:
    """Definitional membership: search the extensions of ``a`` to full permutations."""
    if a.n != spec.n:
        raise DimensionError(f"element on chain {a.n}, monoid on chain {spec.n}")
    if spec.n > ENUM_CAP:
        raise ResourceError(f"oracle capped at n <= {ENUM_CAP}")
    n, mid = spec.n, spec.id
    preserving = _pairwise(a, lambda x, y: x < y)
    reversing = _pairwise(a, lambda x, y: x > y)
    if mid is MonoidId.In:
        return True
    if mid is MonoidId.Sn:
        return a.rank == n
    if mid is MonoidId.An:
        return a.rank == n and _inversion_parity(a) == 0
    if mid is MonoidId.En:
        return all(a(x) == x for x in a.dom)
    if mid is MonoidId.POIn:
        return preserving
    if mid is MonoidId.PMIn:
        return preserving or reversing
    if mid is MonoidId.AIn:
        return _has_even_extension(a)
    if mid is MonoidId.AOn:
        return preserving and _has_even_extension(a)
    if mid is MonoidId.AMn:
        return (preserving or reversing) and _has_even_extension(a)
    if mid is MonoidId.InG:
        return _in_group_restrictions(spec, a)
    raise AssertionError(mid)


# -- enumeration ------------------------------------------------------------

_MONOTONE_FAMILIES = {MonoidId.En, MonoidId.POIn, MonoidId.PMIn, MonoidId.AOn, MonoidId.AMn}


def _monotone_candidates(n: int, with_reversing: bool):
    pts = range(1, n + 1)
    for k in range(n + 1):
        for dom in combinations(pts, k):
            for im in combinations(pts, k):
                yield PartialPerm.from_pairs(n, dom, im)
                if with_reversing and k >= 2:
                    yield PartialPerm.from_pairs(n, dom, im[::-1])


def _all_candidates(n: int):
    from .perm import all_partial_perms
    return all_partial_perms(n)


@lru_cache(maxsize=64)
def enumerate_monoid(spec: MonoidSpec, cap: int = ENUM_CAP) -> ElementSet:
    """All elements of the monoid in canonical order."""
    if spec.n > cap:
        raise ResourceError(f"enumeration capped at n <= {cap}, got {spec.n}")
    if spec.id is MonoidId.InG:
        return build_In_G(spec.n, spec.group_generators)
    if spec.id in _MONOTONE_FAMILIES:
        wide = spec.id in (MonoidId.PMIn, MonoidId.AMn)
        cands = _monotone_candidates(spec.n, wide)
    elif spec.id in (MonoidId.Sn, MonoidId.An):
        cands = (PartialPerm(spec.n, p) for p in permutations(range(1, spec.n + 1)))
    else:
        cands = _all_candidates(spec.n)
    return ElementSet(spec.n, (a for a in cands if contains(spec, a)))


def subgroup_closure(n: int, generators) -> tuple:
    """The permutation group generated by ``generators`` (breadth-first)."""
    gens = list(generators)
    for g in gens:
        if g.n != n or g.rank != n:
            raise PreconditionError(f"{g} is not a permutation of {{1..{n}}}")
    return _subgroup_closure_cached(n, tuple(g.img for g in gens))


@lru_cache(maxsize=32)
def _subgroup_closure_cached(n: int, gen_imgs: tuple) -> tuple:
    gens = [PartialPerm(n, g) for g in gen_imgs]
    ident = PartialPerm.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


def build_In_G(n: int, group_generators, cap: int = ENUM_CAP) -> ElementSet:
    """All restrictions of all members of the group generated by ``group_generators``."""
    if n > cap:
        raise ResourceError(f"I_n(G) construction capped at n <= {cap}")
    group = subgroup_closure(n, group_generators)
    imgs = np.array([g.img for g in group], dtype=np.int16)
    subsets = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(np.int16)
    out = (imgs[:, None, :] * subsets[None, :, :]).reshape(-1, n)
    return ElementSet.from_imgs(n, out)


# -- closed forms ------------------------------------------------------------

def _check_formula_n(n: int):
    if n > FORMULA_CAP:
        raise ResourceError(f"closed forms capped at n <= {FORMULA_CAP}")


def cardinality_formula(spec: MonoidSpec) -> int:
    n, mid = spec.n, spec.id
    _check_formula_n(n)
    if mid is MonoidId.In:
        return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))
    if mid is MonoidId.Sn:
        return factorial(n)
    if mid is MonoidId.An:
        return factorial(n) // 2
    if mid is MonoidId.En:
        return 2 ** n
    if mid is MonoidId.POIn:
        return comb(2 * n, n)
    if mid is MonoidId.PMIn:
        return 2 * comb(2 * n, n) - n * n - 1
    if mid is MonoidId.AIn:
        return (factorial(n) // 2 + factorial(n) * n // 2
                + sum(comb(n, k) ** 2 * factorial(k) for k in range(n - 1)))
    if mid is MonoidId.AOn:
        return comb(2 * n, n) - n * n // 2
    if mid is MonoidId.AMn:
        if n < 3:
            raise FormulaDomainError("the AM_n count holds for n >= 3 only; enumerate AM_2 instead")
        corr = {0: 1, 1: 0, 2: 2, 3: 2}[n % 4]
        return 2 * comb(2 * n, n) - 2 * n * n - corr
    raise FormulaDomainError(f"no closed form for {spec.name}")


def _level_formula(spec: MonoidSpec, k: int):
    n, mid = spec.n, spec.id
    if mid is MonoidId.POIn:
        return comb(n, k) ** 2
    if mid is MonoidId.PMIn:
        return 1 if k == 0 else n * n if k == 1 else 2 * comb(n, k) ** 2
    if mid is MonoidId.In:
        return comb(n, k) ** 2 * factorial(k)
    if mid is MonoidId.En:
        return comb(n, k)
    if mid in (MonoidId.Sn, MonoidId.An):
        if k < n:
            return 0
        return factorial(n) if mid is MonoidId.Sn else factorial(n) // 2
    if mid is MonoidId.AIn:
        if k <= n - 2:
            return comb(n, k) ** 2 * factorial(k)
        return factorial(n) * n // 2 if k == n - 1 else factorial(n) // 2
    if mid is MonoidId.AOn:
        if k <= n - 2:
            return comb(n, k) ** 2
        if k == n:
            return 1
        return n * n // 2 if n % 2 == 0 else (n * n + 1) // 2
    if mid is MonoidId.AMn:
        if n < 3 and k == n - 1:
            return None
        if k <= n - 2:
            return 1 if k == 0 else n * n if k == 1 else 2 * comb(n, k) ** 2
        if k == n:
            return 2 if n % 4 in (0, 1) else 1
        return n * n + 1 if n % 4 == 1 else n * n
    return None


def rank_level_count(spec: MonoidSpec, k: int, by_enumeration: bool = False) -> int:
    """Number of elements of rank exactly ``k``."""
    if not 0 <= k <= spec.n:
        raise PreconditionError(f"rank {k} outside 0..{spec.n}")
    if not by_enumeration:
        v = _level_formula(spec, k)
        if v is not None:
            return v
    elems = enumerate_monoid(spec)
    return int((elems.ranks == k).sum())
