"""Canonically ordered sets of partial permutations with vectorised products.

Every element is encoded as an integer key (its image tuple read as a base
``n+1`` numeral, most significant digit first), so sorting keys reproduces the
lexicographic order on image tuples and ``np.searchsorted`` gives O(log m)
lookup of whole batches of products.
"""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .perm import DimensionError, PartialPerm, PreconditionError, ResourceError

TABLE_CAP = 4000


def key_weights(n: int) -> np.ndarray:
    return (n + 1) ** np.arange(n - 1, -1, -1, dtype=np.int64)


def encode(imgs: np.ndarray, n: int) -> np.ndarray:
    return imgs.astype(np.int64) @ key_weights(n)


def extend(imgs: np.ndarray) -> np.ndarray:
    """Prepend a zero column so that ``ext[:, v]`` is the image of ``v`` (0 stays 0)."""
    imgs = np.atleast_2d(imgs)
    return np.concatenate([np.zeros((imgs.shape[0], 1), dtype=imgs.dtype), imgs], axis=1)


def compose_batch(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Row-wise products ``left[k] * right[k]`` (left applied first)."""
    ext = extend(right)
    return np.take_along_axis(ext, left.astype(np.intp), axis=1)


class ElementSet:
    """A deduplicated, canonically sorted collection of partial permutations on one chain."""

    def __init__(self, n: int, elements: Iterable[PartialPerm]):
        self.n = n
        uniq = {}
        for a in elements:
            if a.n != n:
                raise DimensionError(f"element on chain {a.n} in a set on chain {n}")
            uniq[a.img] = a
        imgs = np.array(sorted(uniq), dtype=np.int16).reshape(-1, n)
        self._imgs = imgs
        self.keys = encode(imgs, n)
        self.elements = tuple(uniq[tuple(int(v) for v in row)] for row in imgs)

    @classmethod
    def from_imgs(cls, n: int, imgs: np.ndarray) -> "ElementSet":
        self = cls.__new__(cls)
        imgs = np.asarray(imgs, dtype=np.int16).reshape(-1, n)
        keys = encode(imgs, n)
        keys, pos = np.unique(keys, return_index=True)
        self.n = n
        self._imgs = imgs[pos]
        self.keys = keys
        self.elements = tuple(PartialPerm(n, tuple(int(v) for v in row)) for row in self._imgs)
        return self

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> PartialPerm:
        return self.elements[i]

    def __contains__(self, a: PartialPerm) -> bool:
        return a.n == self.n and self.lookup_keys(encode(np.array([a.img]), self.n))[0] >= 0

    def __eq__(self, other):
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.keys, other.keys)

    def __repr__(self):
        return f"ElementSet(n={self.n}, size={len(self)})"

    @property
    def imgs(self) -> np.ndarray:
        return self._imgs

    @cached_property
    def ext(self) -> np.ndarray:
        return extend(self._imgs)

    @cached_property
    def ranks(self) -> np.ndarray:
        return (self._imgs > 0).sum(axis=1)

    @cached_property
    def dom_masks(self) -> np.ndarray:
        bits = 1 << np.arange(self.n, dtype=np.int64)
        return (self._imgs > 0).astype(np.int64) @ bits

    @cached_property
    def im_masks(self) -> np.ndarray:
        out = np.zeros(len(self), dtype=np.int64)
        for k in range(self.n):
            col = self._imgs[:, k].astype(np.int64)
            out |= np.where(col > 0, np.left_shift(1, np.maximum(col - 1, 0)), 0)
        return out

    def index(self, a: PartialPerm) -> int:
        i = int(self.lookup_keys(encode(np.array([a.img]), self.n))[0])
        if i < 0:
            raise KeyError(f"{a} is not in this set")
        return i

    def lookup_keys(self, keys: np.ndarray) -> np.ndarray:
        """Indices of ``keys`` in this set, -1 where absent."""
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, len(self.keys) - 1)
        hit = self.keys[pos] == keys
        return np.where(hit, pos, -1)

    def lookup_imgs(self, imgs: np.ndarray) -> np.ndarray:
        return self.lookup_keys(encode(imgs, self.n))

    def inverse_index(self) -> np.ndarray:
        """For each element, the index of its inverse (-1 if the inverse is missing)."""
        inv = np.zeros_like(self._imgs)
        rows = np.repeat(np.arange(len(self)), self.n)
        cols = self._imgs.ravel().astype(np.intp)
        pts = np.tile(np.arange(1, self.n + 1, dtype=self._imgs.dtype), len(self))
        keep = cols > 0
        inv[rows[keep], cols[keep] - 1] = pts[keep]
        return self.lookup_imgs(inv)

    def row(self, i: int) -> np.ndarray:
        """Indices of ``self[i] * x`` for every ``x`` in the set."""
        prods = self.ext[:, self._imgs[i].astype(np.intp)]
        return self.lookup_imgs(prods)

    def col(self, i: int) -> np.ndarray:
        """Indices of ``x * self[i]`` for every ``x`` in the set."""
        prods = self.ext[i][self._imgs.astype(np.intp)]
        return self.lookup_imgs(prods)

    def right_action(self, gens: Sequence[PartialPerm]) -> np.ndarray:
        """``out[i, g] = index(self[i] * gens[g])``; -1 where the product leaves the set."""
        out = np.empty((len(self), len(gens)), dtype=np.int64)
        for g, a in enumerate(gens):
            ext = np.array((0,) + a.img, dtype=np.int16)
            out[:, g] = self.lookup_imgs(ext[self._imgs.astype(np.intp)])
        return out

    def left_action(self, gens: Sequence[PartialPerm]) -> np.ndarray:
        """``out[i, g] = index(gens[g] * self[i])``."""
        out = np.empty((len(self), len(gens)), dtype=np.int64)
        for g, a in enumerate(gens):
            cols = np.array(a.img, dtype=np.intp)
            out[:, g] = self.lookup_imgs(self.ext[:, cols])
        return out

    def table(self, cap: int = TABLE_CAP) -> np.ndarray:
        """Full multiplication table ``T[i, j] = index(self[i] * self[j])``."""
        cached = getattr(self, "_table", None)
        if cached is not None:
            return cached
        if len(self) > cap:
            raise ResourceError(f"multiplication table for {len(self)} elements exceeds cap {cap}")
        m = len(self)
        t = np.empty((m, m), dtype=np.int32)
        for i in range(m):
            t[i] = self.row(i)
        self._table = t
        return t

    def is_closed(self) -> bool:
        """Closed under products (checked row by row, no table kept)."""
        for i in range(len(self)):
            if (self.row(i) < 0).any():
                return False
        return True

    def is_inverse_closed(self) -> bool:
        return bool((self.inverse_index() >= 0).all())

    def require_closed(self):
        if not self.is_closed():
            raise PreconditionError("element set is not closed under composition")

    def closure_mask(self, gens: Sequence[int], seed: Optional[int] = None) -> np.ndarray:
        """Members of the submonoid generated by the elements at indices ``gens``."""
        acts = self.right_action([self[g] for g in gens]) if len(gens) else np.empty((len(self), 0), np.int64)
        seen = np.zeros(len(self), dtype=bool)
        start = self.identity_index() if seed is None else seed
        seen[start] = True
        frontier = np.array([start])
        while len(frontier):
            nxt = acts[frontier].ravel()
            nxt = nxt[nxt >= 0]
            nxt = np.unique(nxt[~seen[nxt]])
            seen[nxt] = True
            frontier = nxt
        return seen

    def generating_indices(self) -> tuple:
        """An irredundant generating set, chosen greedily from the highest ranks down."""
        cached = getattr(self, "_gens", None)
        if cached is not None:
            return cached
        order = np.lexsort((np.arange(len(self)), -self.ranks))
        gens = []
        seen = self.closure_mask(gens)
        for i in order:
            if not seen[i]:
                gens.append(int(i))
                seen = self.closure_mask(gens)
        for g in list(gens):
            rest = [x for x in gens if x != g]
            if self.closure_mask(rest).all():
                gens = rest
        self._gens = tuple(gens)
        return self._gens

    def subset(self, mask: np.ndarray) -> "ElementSet":
        return ElementSet.from_imgs(self.n, self._imgs[np.asarray(mask)])

    def identity_index(self) -> int:
        return self.index(PartialPerm.identity(self.n))

    def strings(self) -> list:
        return [str(a) for a in self.elements]
