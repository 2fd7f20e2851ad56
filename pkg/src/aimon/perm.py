"""Partial permutations of the chain {1 < 2 < ... < n}.

A partial permutation is stored as a tuple ``img`` of length ``n`` where
``img[k-1]`` is the image of ``k`` and ``0`` marks a point outside the domain.
Maps are applied left to right: ``compose(a, b)`` sends ``x`` to ``(x a) b``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

MAX_N = 12


class DimensionError(ValueError):
    """Operands live on chains of different sizes."""


class PreconditionError(ValueError):
    """An operation was called outside the inputs it is defined for."""


class ResourceError(RuntimeError):
    """A computation was refused because it exceeds a configured cap."""


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1

    def __mul__(self, other: "Parity") -> "Parity":
        return Parity((self.value + other.value) % 2)

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class PartialPerm:
    n: int
    img: tuple

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"chain size {self.n} outside 1..{MAX_N}")
        if len(self.img) != self.n:
            raise ValueError(f"img has length {len(self.img)}, expected {self.n}")
        seen = set()
        for v in self.img:
            if not 0 <= v <= self.n:
                raise ValueError(f"image value {v} outside 0..{self.n}")
            if v:
                if v in seen:
                    raise ValueError(f"not injective: {v} is hit twice")
                seen.add(v)

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_map(cls, n: int, mapping: dict) -> "PartialPerm":
        img = [0] * n
        for x, y in mapping.items():
            if not 1 <= x <= n:
                raise ValueError(f"domain point {x} outside 1..{n}")
            img[x - 1] = y
        return cls(n, tuple(img))

    @classmethod
    def from_pairs(cls, n: int, dom: Sequence[int], im: Sequence[int]) -> "PartialPerm":
        if len(dom) != len(im):
            raise ValueError("domain and image lists differ in length")
        return cls.from_map(n, dict(zip(dom, im)))

    @classmethod
    def identity(cls, n: int) -> "PartialPerm":
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "PartialPerm":
        return cls(n, (0,) * n)

    @classmethod
    def partial_identity(cls, n: int, points: Iterable[int]) -> "PartialPerm":
        pts = set(points)
        return cls(n, tuple(k if k in pts else 0 for k in range(1, n + 1)))

    @classmethod
    def monotone(cls, n: int, dom: Iterable[int], im: Iterable[int],
                 reversing: bool = False) -> "PartialPerm":
        """The unique order-preserving (or order-reversing) map from ``dom`` onto ``im``."""
        d = sorted(dom)
        i = sorted(im, reverse=reversing)
        if len(d) != len(i):
            raise ValueError("domain and image have different sizes")
        return cls.from_pairs(n, d, i)

    @classmethod
    def from_cycles(cls, n: int, text: str) -> "PartialPerm":
        """Parse cycle notation such as ``(1 2)(3 4 5)`` into a full permutation."""
        img = list(range(1, n + 1))
        for cyc in re.findall(r"\(([^()]*)\)", text):
            pts = [int(t) for t in re.split(r"[\s,]+", cyc.strip()) if t]
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a - 1] = b
        return cls(n, tuple(img))

    # -- views ----------------------------------------------------------

    @property
    def dom(self) -> frozenset:
        return frozenset(k + 1 for k, v in enumerate(self.img) if v)

    @property
    def im(self) -> frozenset:
        return frozenset(v for v in self.img if v)

    @property
    def rank(self) -> int:
        return sum(1 for v in self.img if v)

    def __call__(self, x: int) -> int:
        """Image of ``x``, or 0 when ``x`` is outside the domain."""
        return self.img[x - 1]

    def __mul__(self, other: "PartialPerm") -> "PartialPerm":
        return compose(self, other)

    def __invert__(self) -> "PartialPerm":
        return inverse(self)

    def __lt__(self, other: "PartialPerm") -> bool:
        return (self.n, self.img) < (other.n, other.img)

    def __str__(self):
        return format_perm(self)

    def __repr__(self):
        return f"PartialPerm({self.n}, {format_perm(self)!r})"


def _check_same(a: PartialPerm, b: PartialPerm):
    if a.n != b.n:
        raise DimensionError(f"chain sizes differ: {a.n} != {b.n}")


def compose(a: PartialPerm, b: PartialPerm) -> PartialPerm:
    _check_same(a, b)
    bi = b.img
    return PartialPerm(a.n, tuple(bi[v - 1] if v else 0 for v in a.img))


def inverse(a: PartialPerm) -> PartialPerm:
    img = [0] * a.n
    for k, v in enumerate(a.img):
        if v:
            img[v - 1] = k + 1
    return PartialPerm(a.n, tuple(img))


def rank(a: PartialPerm) -> int:
    return a.rank


def gaps(a: PartialPerm) -> tuple:
    """Return ``(d, i)``: the point missing from the domain and from the image."""
    if a.rank != a.n - 1:
        raise PreconditionError(f"gaps need rank n-1 = {a.n - 1}, got rank {a.rank}")
    full = set(range(1, a.n + 1))
    (d,) = full - a.dom
    (i,) = full - a.im
    return d, i


def completion(a: PartialPerm) -> PartialPerm:
    d, i = gaps(a)
    img = list(a.img)
    img[d - 1] = i
    return PartialPerm(a.n, tuple(img))


def cycles(p: PartialPerm) -> list:
    if p.rank != p.n:
        raise PreconditionError("cycle decomposition needs a full permutation")
    seen = set()
    out = []
    for start in range(1, p.n + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = p(start)
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p(x)
        out.append(tuple(cyc))
    return out


def sign(p: PartialPerm) -> Parity:
    """Parity of a full permutation, read off its cycle count."""
    if p.rank != p.n:
        raise PreconditionError(f"sign needs a full permutation, got rank {p.rank}")
    return Parity((p.n - len(cycles(p))) % 2)


def _sorted_graph(a: PartialPerm) -> list:
    return [v for v in a.img if v]


def is_order_preserving(a: PartialPerm) -> bool:
    ys = _sorted_graph(a)
    return all(x < y for x, y in zip(ys, ys[1:]))


def is_order_reversing(a: PartialPerm) -> bool:
    ys = _sorted_graph(a)
    return all(x > y for x, y in zip(ys, ys[1:]))


def is_monotone(a: PartialPerm) -> bool:
    return is_order_preserving(a) or is_order_reversing(a)


def reverse(a: PartialPerm) -> PartialPerm:
    """The monotone map with the same domain and image but the opposite orientation."""
    if a.rank < 2:
        raise PreconditionError("reverse is only defined for rank >= 2")
    if is_order_preserving(a):
        return PartialPerm.monotone(a.n, a.dom, a.im, reversing=True)
    if is_order_reversing(a):
        return PartialPerm.monotone(a.n, a.dom, a.im)
    raise PreconditionError("reverse needs a monotone map")


def restrict(p: PartialPerm, points: Iterable[int]) -> PartialPerm:
    pts = set(points)
    return PartialPerm(p.n, tuple(v if k + 1 in pts else 0 for k, v in enumerate(p.img)))


def all_partial_perms(n: int):
    """Every injective partial map on {1..n}, grouped by domain then image subset."""
    from itertools import permutations
    pts = range(1, n + 1)
    for k in range(n + 1):
        for dom in combinations(pts, k):
            for im in combinations(pts, k):
                for arr in permutations(im):
                    yield PartialPerm.from_pairs(n, dom, arr)


# -- text format --------------------------------------------------------

def format_perm(a: PartialPerm) -> str:
    """Two-row bracket notation: ``[1 3 | 2 3]`` means 1->2, 3->3; ``[]`` is the empty map."""
    dom = [k + 1 for k, v in enumerate(a.img) if v]
    if not dom:
        return "[]"
    top = " ".join(str(x) for x in dom)
    bottom = " ".join(str(a.img[x - 1]) for x in dom)
    return f"[{top} | {bottom}]"


_BRACKET = re.compile(r"^\s*\[(.*)\]\s*$")


def parse_perm(text: str, n: int) -> PartialPerm:
    m = _BRACKET.match(text)
    if not m:
        raise ValueError(f"not in bracket notation: {text!r}")
    body = m.group(1).strip()
    if not body:
        return PartialPerm.empty(n)
    if "|" not in body:
        raise ValueError(f"missing '|' separator: {text!r}")
    top, bottom = body.split("|", 1)
    dom = [int(t) for t in top.split()]
    im = [int(t) for t in bottom.split()]
    if len(dom) != len(im):
        raise ValueError(f"rows differ in length: {text!r}")
    if len(set(dom)) != len(dom):
        raise ValueError(f"repeated domain point: {text!r}")
    return PartialPerm.from_pairs(n, dom, im)
