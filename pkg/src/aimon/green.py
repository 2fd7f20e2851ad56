"""Green's relations and the J-class order of an enumerated monoid."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .elements import ElementSet
from .monoids import MonoidId, MonoidSpec, enumerate_monoid
from .perm import PreconditionError, gaps


def _group_rows(mat: np.ndarray) -> np.ndarray:
    """Label rows of a boolean matrix by equality, numbering labels in order of first row."""
    packed = np.packbits(mat, axis=1)
    view = np.ascontiguousarray(packed).view(np.dtype((np.void, packed.shape[1])))
    _, inv = np.unique(view.ravel(), return_inverse=True)
    return _renumber(inv.ravel())


def _renumber(labels: np.ndarray) -> np.ndarray:
    """Relabel so class ids appear in increasing order of their first member."""
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inv.ravel()].astype(np.int64)


def _classes(labels: np.ndarray) -> list:
    k = int(labels.max()) + 1 if len(labels) else 0
    out = [[] for _ in range(k)]
    for i, c in enumerate(labels.tolist()):
        out[c].append(i)
    return out


@dataclass
class GreenStructure:
    elements: ElementSet
    l_class: np.ndarray
    r_class: np.ndarray
    h_class: np.ndarray
    j_class: np.ndarray
    j_below: np.ndarray  # j_below[a, b]: J_a <= J_b
    classes: dict = field(default_factory=dict)

    def n_classes(self, rel: str) -> int:
        return len(self.classes[rel])


def green_structure(elems: ElementSet) -> GreenStructure:
    """Generic L, R, H, J computation from left/right principal ideals."""
    m = len(elems)
    left = np.zeros((m, m), dtype=bool)   # left[a] = M a
    right = np.zeros((m, m), dtype=bool)  # right[a] = a M
    for i in range(m):
        r = elems.row(i)
        c = elems.col(i)
        if (r < 0).any() or (c < 0).any():
            raise PreconditionError("element set is not closed under composition")
        right[i, r] = True
        left[i, c] = True
    lab_l = _group_rows(left)
    lab_r = _group_rows(right)
    del right

    # one-step graph on L-classes; a representative suffices since the right
    # products of another member y*a of the class are left multiples of a*x
    nl = int(lab_l.max()) + 1
    reps = np.array([np.flatnonzero(lab_l == c)[0] for c in range(nl)])
    src, dst = [], []
    for c, a in enumerate(reps):
        tgt = np.unique(np.concatenate([lab_l[left[a]], lab_l[elems.row(int(a))]]))
        src.append(np.full(len(tgt), c))
        dst.append(tgt)
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(nl, nl))
    _, scc = connected_components(graph, directed=True, connection="strong")
    lab_j = _renumber(scc[lab_l])

    # J-order: reachability in the condensation
    nj = int(lab_j.max()) + 1
    jl = lab_j[reps]
    adj = np.zeros((nj, nj), dtype=bool)
    adj[jl[src], jl[dst]] = True
    np.fill_diagonal(adj, True)
    reach = adj
    while True:
        nxt = (reach.astype(np.int32) @ reach.astype(np.int32)) > 0
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    # reach[a, b]: b is reachable from a, i.e. J_b <= J_a
    below = reach.T.copy()

    lab_h = _renumber(lab_l * (int(lab_r.max()) + 1) + lab_r)
    gs = GreenStructure(elems, lab_l, lab_r, lab_h, lab_j, below)
    gs.classes = {k: _classes(v) for k, v in
                  (("L", lab_l), ("R", lab_r), ("H", lab_h), ("J", lab_j))}
    return gs


def characterized_classes(elems: ElementSet) -> tuple:
    """L and R labels from image and domain equality (valid for inverse submonoids of I_n)."""
    return _renumber(elems.im_masks), _renumber(elems.dom_masks)


@dataclass
class JPoset:
    class_labels: list
    leq: np.ndarray
    ranks: list
    members: list

    def __len__(self):
        return len(self.class_labels)

    def index(self, label: str) -> int:
        return self.class_labels.index(label)

    def covers(self) -> list:
        """Covering pairs (lower, upper) as index pairs, in a fixed order."""
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        out = []
        for a in range(len(self)):
            for b in range(len(self)):
                if lt[a, b] and not any(lt[a, c] and lt[c, b] for c in range(len(self))):
                    out.append((a, b))
        return sorted(out, key=lambda e: (self._key(e[0]), self._key(e[1])))

    def _key(self, i):
        return (self.ranks[i], self.class_labels[i])

    def hasse_edges(self) -> list:
        return [(self.class_labels[a], self.class_labels[b]) for a, b in self.covers()]

    def is_antisymmetric(self) -> bool:
        both = self.leq & self.leq.T
        return bool(np.array_equal(both, np.eye(len(self), dtype=bool)))

    def minimum(self) -> Optional[int]:
        for i in range(len(self)):
            if self.leq[i].all():
                return i
        return None

    def maximum(self) -> Optional[int]:
        for i in range(len(self)):
            if self.leq[:, i].all():
                return i
        return None


def _family_prefix(spec: Optional[MonoidSpec]):
    if spec is None:
        return None
    return {MonoidId.AOn: "J", MonoidId.AMn: "Q"}.get(spec.id)


def _class_label(prefix, n, rank, split, rep):
    if rank == n - 1 and split:
        d, _ = gaps(rep)
        return f"{prefix}_{rank}^{'o' if d % 2 else 'e'}"
    return f"{prefix}_{rank}"


def j_poset(gs: GreenStructure, spec: Optional[MonoidSpec] = None) -> JPoset:
    """J-classes ordered by ideal containment, labelled by rank (and gap parity) for AO/AM."""
    elems = gs.elements
    members = gs.classes["J"]
    ranks = [int(elems.ranks[c[0]]) for c in members]
    prefix = _family_prefix(spec)
    n = elems.n
    if prefix is not None:
        split = ranks.count(n - 1) > 1
        labels = [_class_label(prefix, n, r, split, elems[c[0]]) for r, c in zip(ranks, members)]
    else:
        labels = None
    order = sorted(range(len(members)), key=lambda i: (ranks[i], labels[i] if labels else "", members[i][0]))
    if labels is None:
        labels = [None] * len(members)
        for pos, i in enumerate(order):
            labels[i] = f"J{pos}"
    perm = np.array(order)
    return JPoset([labels[i] for i in order], gs.j_below[np.ix_(perm, perm)],
                  [ranks[i] for i in order], [members[i] for i in order])


def profile_of(gs: GreenStructure, poset: JPoset) -> list:
    rows = []
    for label, mem in zip(poset.class_labels, poset.members):
        mem = np.array(mem)
        hs = np.unique(gs.h_class[mem], return_counts=True)[1]
        rows.append({
            "label": label,
            "size": int(len(mem)),
            "l_classes": int(len(np.unique(gs.l_class[mem]))),
            "r_classes": int(len(np.unique(gs.r_class[mem]))),
            "max_h": int(hs.max()),
        })
    return rows


def _row(label, size, lr, h):
    return {"label": label, "size": size, "l_classes": lr, "r_classes": lr, "max_h": h}


def predicted_profile(spec: MonoidSpec) -> Optional[list]:
    """The J-class table predicted by the closed-form descriptions, or None for other families."""
    n = spec.n
    up, down = (n + 1) // 2, n // 2
    if spec.id is MonoidId.AOn:
        rows = [_row(f"J_{k}", comb(n, k) ** 2, comb(n, k), 1) for k in range(n - 1)]
        rows += [_row(f"J_{n-1}^e", down ** 2, down, 1), _row(f"J_{n-1}^o", up ** 2, up, 1)]
        rows.append(_row(f"J_{n}", 1, 1, 1))
        return rows
    if spec.id is MonoidId.AMn:
        if n < 3:
            return None
        rows = []
        for k in range(n - 1):
            if k == 0:
                rows.append(_row("Q_0", 1, 1, 1))
            elif k == 1:
                rows.append(_row("Q_1", n * n, n, 1))
            else:
                rows.append(_row(f"Q_{k}", 2 * comb(n, k) ** 2, comb(n, k), 2))
        if n % 4 in (0, 3):
            rows.append(_row(f"Q_{n-1}", n * n, n, 1))
        else:
            rows += [_row(f"Q_{n-1}^e", 2 * down ** 2, down, 2),
                     _row(f"Q_{n-1}^o", 2 * up ** 2, up, 2)]
        units = 2 if n % 4 in (0, 1) else 1
        rows.append(_row(f"Q_{n}", units, 1, units))
        return rows
    return None


def predicted_hasse_edges(spec: MonoidSpec) -> Optional[list]:
    """Covering pairs of the J-order: a chain, with two incomparable classes at rank n-1 when split."""
    prof = predicted_profile(spec)
    if prof is None:
        return None
    n = spec.n
    levels = {}
    for r in prof:
        k = int(r["label"].split("_")[1].split("^")[0])
        levels.setdefault(k, []).append(r["label"])
    edges = []
    for k in range(n):
        for lo in levels[k]:
            for hi in levels[k + 1]:
                edges.append((lo, hi))
    return edges


def _sort_rows(rows):
    return sorted(rows, key=lambda r: r["label"])


@dataclass
class ProfileResult:
    spec: MonoidSpec
    computed: list
    predicted: Optional[list]
    poset: JPoset

    @property
    def matches(self) -> Optional[bool]:
        if self.predicted is None:
            return None
        return _sort_rows(self.computed) == _sort_rows(self.predicted)

    def diff(self) -> list:
        if self.predicted is None:
            return []
        a = {r["label"]: r for r in self.computed}
        b = {r["label"]: r for r in self.predicted}
        out = []
        for lab in sorted(set(a) | set(b)):
            if a.get(lab) != b.get(lab):
                out.append({"label": lab, "computed": a.get(lab), "predicted": b.get(lab)})
        return out

    def to_json(self) -> str:
        return json.dumps(self.computed, indent=2)


def jclass_profile(spec: MonoidSpec) -> ProfileResult:
    elems = enumerate_monoid(spec)
    gs = green_structure(elems)
    poset = j_poset(gs, spec)
    return ProfileResult(spec, profile_of(gs, poset), predicted_profile(spec), poset)


def _dot_id(label: str) -> str:
    return '"' + label.replace('"', '\\"') + '"'


def export_dot(poset: JPoset, name: str = "jposet", sizes: Optional[dict] = None) -> str:
    """Hasse diagram as a Graphviz digraph, lower class pointing to its cover."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    order = sorted(range(len(poset)), key=poset._key)
    for i in order:
        lab = poset.class_labels[i]
        attrs = f'label="{lab}"'
        if sizes is not None and lab in sizes:
            attrs = f'label="{lab}\\n{sizes[lab]}"'
        lines.append(f"  {_dot_id(lab)} [{attrs}];")
    for a, b in poset.hasse_edges():
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
