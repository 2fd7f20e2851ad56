"""The verification suite: every claim computed, compared exactly, and collected in a report."""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import congruences as cg
from . import genrank as gr
from .elements import extend
from .green import jclass_profile, predicted_hasse_edges
from .monoids import (
    MonoidId,
    MonoidSpec,
    cardinality_formula,
    contains,
    contains_by_oracle,
    enumerate_monoid,
)
from .perm import PartialPerm, ResourceError, all_partial_perms

SCHEMA = 1
CRITERIA = {
    1: "cardinalities",
    2: "membership characterisation vs oracle",
    3: "Green profiles and J-order shapes",
    4: "congruence lattices",
    5: "generating sets",
    6: "ranks",
    7: "factorisation lemmas and identities",
    8: "structural sanity",
}


@dataclass
class Claim:
    id: str
    criterion: int
    anchor: str
    n: Optional[int]
    expected: object
    computed: object
    status: str
    millis: int = 0

    def to_dict(self) -> dict:
        return {"id": self.id, "criterion": self.criterion, "anchor": self.anchor, "n": self.n,
                "expected": self.expected, "computed": self.computed, "status": self.status}


@dataclass
class Suite:
    n_max: int = 8
    long: bool = False
    seed: int = 0
    samples: int = 10_000
    claims: list = field(default_factory=list)
    pending: dict = field(default_factory=dict)

    def add(self, cid, criterion, anchor, n, fn: Callable[[], tuple]):
        # claims about the same object share cached work, so they form one sequential batch
        batch = cid.rsplit(".", 1)[0] if cid.startswith("cong.") or cid.startswith("green.") else cid
        if cid.startswith("sanity.") and cid.endswith(".compatible"):
            batch = "cong." + cid.split(".", 1)[1].rsplit(".", 1)[0]
        self.pending.setdefault(batch, []).append((cid, criterion, anchor, n, fn))

    def run(self, jobs: int = 1):
        def work(items):
            out = []
            for cid, criterion, anchor, n, fn in items:
                t0 = time.perf_counter()
                try:
                    expected, computed = fn()
                    status = "pass" if expected == computed else "fail"
                except ResourceError as exc:
                    expected, computed, status = None, str(exc), "skipped(budget)"
                ms = int(round((time.perf_counter() - t0) * 1000))
                out.append(Claim(cid, criterion, anchor, n, expected, computed, status, ms))
            return out

        batches = list(self.pending.values())
        self.pending = {}
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(work, batches))
        else:
            results = [work(b) for b in batches]
        for r in results:
            self.claims.extend(r)
        self.claims.sort(key=lambda c: (c.criterion, c.id))

    def ns(self, lo, hi):
        return range(lo, min(hi, self.n_max) + 1)


def _spec(tag, n):
    return MonoidSpec(MonoidId(tag), n)


# -- 1 ----------------------------------------------------------------------------------

def cardinality_claims(s: Suite):
    ranges = [("AOn", 2, 8), ("AMn", 3, 8), ("AIn", 2, 7), ("POIn", 2, 7), ("PMIn", 2, 7)]
    for tag, lo, hi in ranges:
        for n in s.ns(lo, hi):
            sp = _spec(tag, n)
            s.add(f"card.{tag}.{n}", 1, "closed-form size equals enumeration", n,
                  lambda sp=sp: (cardinality_formula(sp), len(enumerate_monoid(sp))))


# -- 2 ----------------------------------------------------------------------------------

def random_partial_perms(n: int, count: int, rng) -> list:
    """Random elements of I_n: a uniform rank, then a uniform domain, image and bijection."""
    out = []
    for _ in range(count):
        k = int(rng.integers(0, n + 1))
        dom = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        im = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        out.append(PartialPerm.from_pairs(n, [int(x) for x in dom], [int(y) for y in im]))
    return out


def _disagreements(tag, n, elements):
    sp = _spec(tag, n)
    return sum(1 for a in elements if contains(sp, a) != contains_by_oracle(sp, a))


def membership_claims(s: Suite):
    tags = ("AIn", "AOn", "AMn")
    for n in s.ns(2, 5):
        universe = list(all_partial_perms(n))
        for tag in tags:
            s.add(f"member.{tag}.{n}.exhaustive", 2, "characterisation agrees with even-extension oracle", n,
                  lambda tag=tag, n=n, u=universe: (0, _disagreements(tag, n, u)))
    rng = np.random.default_rng(s.seed)
    for n in s.ns(6, 7):
        sample = random_partial_perms(n, s.samples, rng)
        for tag in tags:
            s.add(f"member.{tag}.{n}.sampled", 2, f"characterisation agrees with oracle on {s.samples} samples", n,
                  lambda tag=tag, n=n, u=sample: (0, _disagreements(tag, n, u)))


# -- 3 ----------------------------------------------------------------------------------

def _norm_rows(rows):
    return sorted(rows, key=lambda r: r["label"])


def green_claims(s: Suite):
    for tag in ("AOn", "AMn"):
        for n in s.ns(3, 7):
            sp = _spec(tag, n)
            res = {}

            def prof(sp=sp, res=res):
                res["r"] = jclass_profile(sp)
                return _norm_rows(res["r"].predicted), _norm_rows(res["r"].computed)

            s.add(f"green.{tag}.{n}.profile", 3, "J-class sizes, L/R-class counts and H-class sizes", n, prof)

            def hasse(sp=sp, res=res):
                r = res.get("r") or jclass_profile(sp)
                return [list(e) for e in sorted(predicted_hasse_edges(sp))], \
                    [list(e) for e in sorted(r.poset.hasse_edges())]

            s.add(f"green.{tag}.{n}.hasse", 3, "covering pairs of the J-order", n, hasse)


# -- 4 ----------------------------------------------------------------------------------

def _am_count(n):
    return {0: 2 * n - 1, 1: 2 * n + 6, 2: 2 * n + 5, 3: 2 * n - 2}[n % 4]


def congruence_claims(s: Suite):
    ao_hi = 6 if s.long else 5
    for tag, lo, hi in (("AOn", 3, ao_hi), ("AMn", 3, 6)):
        for n in s.ns(lo, hi):
            sp = _spec(tag, n)
            box = {}

            def rep(sp=sp, box=box):
                if "r" not in box:
                    box["r"] = cg.verify_classification(sp)
                return box["r"]

            expected = n + 3 if tag == "AOn" else _am_count(n)
            s.add(f"cong.{tag}.{n}.count", 4, "number of congruences", n,
                  lambda rep=rep, e=expected: (e, rep().lattice_size))
            if tag == "AOn":
                s.add(f"cong.{tag}.{n}.rees", 4, "every congruence is a Rees congruence", n,
                      lambda rep=rep: (True, rep().all_rees))
            s.add(f"cong.{tag}.{n}.named", 4, "lattice equals the named list, no extras, no collisions", n,
                  lambda rep=rep: ({"missing": [], "unnamed": 0, "duplicates": []},
                                   {"missing": rep().missing, "unnamed": len(rep().unnamed),
                                    "duplicates": rep().duplicates}))
            s.add(f"cong.{tag}.{n}.hasse", 4, "covering pairs of the congruence lattice", n,
                  lambda rep=rep: ({"missing": [], "extra": []},
                                   {"missing": rep().hasse_missing, "extra": rep().hasse_extra}))
            if tag == "AMn":
                s.add(f"cong.{tag}.{n}.identities", 4, "inclusion and meet identities among named congruences", n,
                      lambda rep=rep: ([], [c["identity"] for c in rep().identities if c["status"] != "pass"]))
                if n % 4 in (1, 2):
                    s.add(f"cong.{tag}.{n}.interval", 4, "interval between the top two proper Rees congruences", n,
                          lambda rep=rep: ({"size": 9, "edges": 12, "ok": True}, rep().interval))
            # criterion 8 shares the constructed congruences
            s.add(f"sanity.{tag}.{n}.compatible", 8, "every constructed congruence is compatible", n,
                  lambda rep=rep: ([], rep().incompatible))


# -- 5 ----------------------------------------------------------------------------------

def generation_claims(s: Suite):
    for n in s.ns(3, 7):
        s.add(f"gen.x.AOn.{n}", 5, "x_1..x_n generate AO_n", n,
              lambda n=n: (True, gr.verify_generates(gr.make_family("x", n), _spec("AOn", n))))
    for n in [k for k in (4, 5, 8, 9) if k <= s.n_max][:3]:
        s.add(f"gen.x+h.AMn.{n}", 5, "AO_n together with h generates AM_n", n,
              lambda n=n: (True, gr.verify_generates(gr.make_family("x", n) + gr.make_family("h", n),
                                                     _spec("AMn", n))))
    for n in [k for k in (6, 10) if k <= s.n_max]:
        s.add(f"gen.x+h_i.AMn.{n}", 5, "AO_n together with h_1..h_n generates AM_n", n,
              lambda n=n: (True, gr.verify_generates(gr.make_family("x", n) + gr.make_family("h_i", n),
                                                     _spec("AMn", n))))
    for r, ns in ((0, (4, 8)), (1, (5, 9)), (2, (6, 10)), (3, (3, 7))):
        for n in [k for k in ns if k <= s.n_max]:
            s.add(f"gen.AM{r}set.{n}", 5, f"minimum generating set for n = {r} mod 4", n,
                  lambda n=n, r=r: (True, gr.verify_generates(gr.make_family(f"AM{r}set", n), _spec("AMn", n))))


# -- 6 ----------------------------------------------------------------------------------

def _am_rank(n):
    return {0: n // 2 + 1, 1: (n + 1) // 2 + 1, 2: n, 3: n}[n % 4]


def rank_claims(s: Suite):
    for n in s.ns(3, 7):
        s.add(f"rank.AOn.{n}.bounds", 6, "lower bound from unavoidable domains meets generating set size", n,
              lambda n=n: (n, gr.rank_lower_bound_report(_spec("AOn", n))["rank"]))
    for n in s.ns(3, 4):
        s.add(f"rank.AOn.{n}.exhaustive", 6, "smallest generating subset by exhaustive search", n,
              lambda n=n: (n, gr.exhaustive_rank(_spec("AOn", n), n).value))
    for n in s.ns(3, 5):
        s.add(f"rank.AMn.{n}.exhaustive", 6, "smallest generating subset by exhaustive search", n,
              lambda n=n: (_am_rank(n), gr.exhaustive_rank(_spec("AMn", n), _am_rank(n)).value))
    for n in s.ns(6, 8):
        s.add(f"rank.AMn.{n}.bounds", 6, "lower bound from unavoidable domains and units meets generating set size", n,
              lambda n=n: (_am_rank(n), gr.rank_lower_bound_report(_spec("AMn", n))["rank"]))
    for n in s.ns(3, 3):
        for tag in ("AOn", "AMn"):
            s.add(f"rank.{tag}.{n}.full_pool", 6, "exhaustive search over the whole monoid agrees with the top-rank pool", n,
                  lambda n=n, tag=tag: (3, gr.exhaustive_rank(_spec(tag, n), 3, full_pool=True).value))


# -- 7 ----------------------------------------------------------------------------------

def completion_multiplicativity_failures(n: int) -> int:
    """Count pairs of rank-(n-1) maps whose product has rank n-1 but completion is not multiplicative."""
    top = [a for a in all_partial_perms(n) if a.rank == n - 1]
    imgs = np.array([a.img for a in top], dtype=np.int64)
    full = np.arange(1, n + 1)
    comp = imgs.copy()
    for r in range(len(top)):
        d = np.flatnonzero(imgs[r] == 0)[0]
        comp[r, d] = np.setdiff1d(full, imgs[r])[0]
    ext_imgs = extend(imgs)
    ext_comp = extend(comp)
    bad = 0
    for r in range(len(top)):
        prod = ext_imgs[:, imgs[r]]                 # a_r * b for every b
        ok_rank = (prod > 0).sum(axis=1) == n - 1
        cprod = ext_comp[:, comp[r]]                # completion(a_r) * completion(b)
        d = np.argmin(prod, axis=1)
        pc = prod.copy()
        missing = cprod[np.arange(len(top)), d]
        pc[np.arange(len(top)), d] = missing
        # pc agrees with cprod off d by construction; it is a completion iff it is a permutation
        is_perm = np.sort(pc, axis=1).tolist()
        good = np.array([row == list(full) for row in is_perm]) & (pc == cprod).all(axis=1)
        bad += int((ok_rank & ~good).sum())
    return bad


def lemma_claims(s: Suite):
    for n in s.ns(2, 5):
        s.add(f"lemma.completion.{n}", 7, "completion of a product is the product of completions", n,
              lambda n=n: (0, completion_multiplicativity_failures(n)))
    for n in s.ns(4, 5):
        for k in range(n - 2):
            s.add(f"lemma.rank_step.{n}.{k}", 7, "rank-k elements are products of rank-(k+1) elements", n,
                  lambda n=n, k=k: (True, gr.rank_step_closure(n, k)))
        for lem in gr.LEMMAS:
            def run(n=n, lem=lem):
                inputs = gr.admissible_inputs(lem, n)
                failed = [str(a) for a in inputs if not gr.factorization_witness(lem, a).found]
                return {"inputs": len(inputs), "failed": []}, {"inputs": len(inputs), "failed": failed}
            s.add(f"lemma.{lem}.{n}", 7, "factorisation witness found for every admissible input", n, run)
    for n in s.ns(3, 8):
        s.add(f"identities.{n}", 7, "conjugation by h and the derived word identities", n,
              lambda n=n: ([], [c["identity"] for c in gr.conjugation_identities(n) if c["status"] == "fail"]))


# -- 8 ----------------------------------------------------------------------------------

def sanity_claims(s: Suite):
    tags = ("InG", "In", "Sn", "An", "En", "POIn", "PMIn", "AIn", "AOn", "AMn")
    for tag in tags:
        if tag == "InG":
            continue
        for n in s.ns(2, 6 if tag not in ("In", "AIn") else 5):
            def run(tag=tag, n=n):
                e = enumerate_monoid(_spec(tag, n))
                return {"closed": True, "inverse_closed": True}, \
                    {"closed": e.is_closed(), "inverse_closed": e.is_inverse_closed()}
            s.add(f"sanity.{tag}.{n}.closed", 8, "enumerated set closed under product and inverse", n, run)


GROUPS = (cardinality_claims, membership_claims, green_claims, congruence_claims,
          generation_claims, rank_claims, lemma_claims, sanity_claims)


def run_all(n_max: int = 8, long: bool = False, seed: int = 0, samples: int = 10_000,
            criteria: Optional[set] = None, jobs: int = 1) -> Suite:
    s = Suite(n_max=n_max, long=long, seed=seed, samples=samples)
    for group in GROUPS:
        group(s)
    if criteria:
        s.pending = {k: [c for c in v if c[1] in criteria] for k, v in s.pending.items()}
        s.pending = {k: v for k, v in s.pending.items() if v}
    s.run(jobs)
    return s


def report_dict(s: Suite) -> dict:
    by = {}
    for c in s.claims:
        st = by.setdefault(c.criterion, {"pass": 0, "fail": 0, "skipped(budget)": 0})
        st[c.status] += 1
    return {
        "schema": SCHEMA,
        "suite": "check-all",
        "n_max": s.n_max,
        "long": s.long,
        "seed": s.seed,
        "samples": s.samples,
        "criteria": {str(k): {"title": CRITERIA[k], **by.get(k, {"pass": 0, "fail": 0, "skipped(budget)": 0})}
                     for k in sorted(CRITERIA)},
        "claims": [c.to_dict() for c in s.claims],
    }


def report_json(s: Suite) -> str:
    return json.dumps(report_dict(s), indent=2, sort_keys=False) + "\n"


def timings_json(s: Suite) -> str:
    return json.dumps({"schema": SCHEMA, "millis": {c.id: c.millis for c in s.claims}}, indent=2) + "\n"
