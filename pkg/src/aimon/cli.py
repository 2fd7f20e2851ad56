"""Command-line driver: aimon VERB SPEC [options]."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks
from . import congruences as cg
from . import genrank as gr
from .green import export_dot, jclass_profile
from .monoids import (
    FormulaDomainError,
    MonoidId,
    cardinality_formula,
    enumerate_monoid,
    format_spec,
    parse_spec,
)
from .perm import ResourceError, format_perm

VERBS = ("enum", "card", "green", "cong", "rank", "check-all", "dot")
NEEDS_SPEC = {"enum", "card", "green", "cong", "rank", "dot"}
AO_AM_ONLY = {"rank"}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aimon", description="Verification workbench for AI_n, AO_n and AM_n.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("spec", nargs="?", help="monoid, e.g. AO:5, AM:7, InG:4:[(1 2),(1 2 3 4)]")
    p.add_argument("--format", choices=("json", "text", "dot"), default="text")
    p.add_argument("--out", help="output file (or directory for check-all and figures)")
    p.add_argument("--png", help="also render a Hasse diagram PNG here (green, cong)")
    p.add_argument("--n-max", type=int, default=8, help="largest n used by check-all")
    p.add_argument("--long", action="store_true", help="include long-running claims (AO_6 congruences)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for sampled membership checks")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--jobs", type=int, default=1, help="concurrent claim batches in check-all")
    p.add_argument("--strict", action="store_true", help="budget skips count as failures")
    p.add_argument("--exhaustive", action="store_true", help="rank: search subsets exhaustively")
    p.add_argument("--max-size", type=int, help="rank: largest subset size tried")
    p.add_argument("--full-pool", action="store_true", help="rank: search over the whole monoid")
    p.add_argument("--budget", type=int, default=gr.RANK_BUDGET, help="rank: maximum subsets examined")
    p.add_argument("--cap", type=int, default=cg.LATTICE_CAP, help="cong: largest monoid for the lattice")
    return p


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _status_code(ok: bool, skipped: bool, strict: bool) -> int:
    if not ok:
        return 1
    return 1 if skipped and strict else 0


# -- verbs ---------------------------------------------------------------------------

def cmd_enum(args, spec) -> int:
    elems = enumerate_monoid(spec)
    if args.format == "json":
        _emit(json.dumps({"schema": 1, "monoid": format_spec(spec), "size": len(elems),
                          "elements": [format_perm(a) for a in elems]}, indent=2) + "\n", args.out)
    else:
        _emit("".join(format_perm(a) + "\n" for a in elems), args.out)
    return 0


def cmd_card(args, spec) -> int:
    try:
        formula = cardinality_formula(spec)
    except FormulaDomainError:
        formula = None
    try:
        count = len(enumerate_monoid(spec))
    except ResourceError:
        count = None
    if formula is None and count is None:
        raise UsageError(f"no closed form or enumeration available for {format_spec(spec)}")
    value = formula if formula is not None else count
    if formula is None or count is None:
        check = "skipped"
    else:
        check = "pass" if formula == count else "fail"
    if args.format == "json":
        _emit(json.dumps({"schema": 1, "monoid": format_spec(spec), "formula": formula,
                          "enumeration": count, "status": check}, indent=2) + "\n", args.out)
    else:
        _emit(f"{value}\nformula==enumeration: {check}\n", args.out)
    return _status_code(check != "fail", check == "skipped", args.strict)


def cmd_green(args, spec) -> int:
    res = jclass_profile(spec)
    sizes = {r["label"]: r["size"] for r in res.computed}
    if args.format == "dot":
        _emit(export_dot(res.poset, "jposet", sizes), args.out)
    elif args.format == "json":
        _emit(json.dumps({"schema": 1, "monoid": format_spec(spec), "profile": res.computed,
                          "hasse": [list(e) for e in res.poset.hasse_edges()],
                          "predicted_match": res.matches, "diff": res.diff()}, indent=2) + "\n", args.out)
    else:
        lines = [f"{'class':<10}{'size':>8}{'L':>6}{'R':>6}{'|H|':>5}"]
        for r in res.computed:
            lines.append(f"{r['label']:<10}{r['size']:>8}{r['l_classes']:>6}{r['r_classes']:>6}{r['max_h']:>5}")
        lines.append("covers: " + ", ".join(f"{a} < {b}" for a, b in res.poset.hasse_edges()))
        if res.matches is not None:
            lines.append(f"predicted profile: {'pass' if res.matches else 'fail'}")
        _emit("\n".join(lines) + "\n", args.out)
    if args.png:
        from .figures import jposet_png
        jposet_png(res.poset, args.png, f"J-order of {format_spec(spec)}")
    return 0 if res.matches is not False else 1


def cmd_cong(args, spec) -> int:
    classified = spec.id in (MonoidId.AOn, MonoidId.AMn)
    if classified:
        rep = cg.verify_classification(spec, args.cap)
        lat = rep.lattice
    else:
        rep = None
        lat = cg.congruence_lattice(enumerate_monoid(spec), args.cap)
        st = cg.structure(enumerate_monoid(spec), spec)
        index = {c: i for i, c in enumerate(lat.congruences)}
        for name, c in sorted(cg.named_congruences(st).items()):
            if c in index:
                lat.names.setdefault(index[c], []).append(name)
    if args.format == "dot":
        _emit(cg.lattice_dot(lat), args.out)
    elif args.format == "json":
        doc = {"schema": 1, "monoid": format_spec(spec), "size": len(lat), **cg.lattice_json(lat)}
        if rep is not None:
            doc["classification"] = rep.to_dict()
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        lines = [f"{len(lat)} congruences"]
        for i, c in enumerate(lat.congruences):
            lines.append(f"  {lat.name(i):<32} {c.block_count} blocks")
            if i not in lat.names and rep is not None:
                shown = [[format_perm(lat.elems[x]) for x in b] for b in c.nontrivial_blocks()]
                lines.append(f"    not in the named list; non-singleton blocks: {shown}")
        if rep is not None:
            lines.append(f"classification: {'pass' if rep.ok else 'fail'}")
            for key in ("missing", "unnamed", "duplicates", "hasse_missing", "hasse_extra", "incompatible"):
                val = getattr(rep, key)
                if val:
                    lines.append(f"  {key}: {val}")
            if rep.interval is not None:
                lines.append(f"  interval: {rep.interval['size']} nodes, {rep.interval['edges']} covers")
        _emit("\n".join(lines) + "\n", args.out)
    if args.png:
        from .figures import lattice_png
        lattice_png(lat, args.png, f"congruences of {format_spec(spec)}")
    return 0 if rep is None or rep.ok else 1


def cmd_rank(args, spec) -> int:
    if args.exhaustive:
        size = args.max_size or spec.n
        res = gr.exhaustive_rank(spec, size, full_pool=args.full_pool, budget=args.budget)
        if args.format == "json":
            _emit(json.dumps({"schema": 1, **res.to_dict()}, indent=2) + "\n", args.out)
        else:
            lines = [f"rank = {res.value}"]
            if res.witness:
                lines.append("witness: " + ", ".join(res.witness))
            _emit("\n".join(lines) + "\n", args.out)
        return 0 if isinstance(res.value, int) else 1
    rep = gr.rank_lower_bound_report(spec)
    if args.format == "json":
        _emit(json.dumps({"schema": 1, **rep}, indent=2) + "\n", args.out)
    else:
        lines = [f"rank = {rep['rank'] if rep['rank'] is not None else 'undetermined'}",
                 f"lower bound: {rep['lower_bound']} ({rep['argument']})",
                 f"upper bound: {rep['upper_bound']} via {', '.join(rep['generating_set'])}"]
        for c in rep["domain_checks"]:
            lines.append(f"  without domains {'/'.join(c['domains'])}: {c['missing']} of {c['removed']} unreachable")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if rep["status"] == "pass" else 1


def cmd_dot(args, spec) -> int:
    """Write both Hasse diagrams (J-order and, when feasible, congruences) as DOT plus PNG."""
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    tag = format_spec(spec).replace(":", "")
    res = jclass_profile(spec)
    sizes = {r["label"]: r["size"] for r in res.computed}
    (out / f"{tag}_jposet.dot").write_text(export_dot(res.poset, "jposet", sizes))
    from .figures import jposet_png, lattice_png
    jposet_png(res.poset, out / f"{tag}_jposet.png", f"J-order of {format_spec(spec)}")
    written = [f"{tag}_jposet.dot", f"{tag}_jposet.png"]
    try:
        if spec.id in (MonoidId.AOn, MonoidId.AMn):
            lat = cg.verify_classification(spec, args.cap).lattice
        else:
            lat = cg.congruence_lattice(enumerate_monoid(spec), args.cap)
        (out / f"{tag}_congruences.dot").write_text(cg.lattice_dot(lat))
        lattice_png(lat, out / f"{tag}_congruences.png", f"congruences of {format_spec(spec)}")
        written += [f"{tag}_congruences.dot", f"{tag}_congruences.png"]
    except ResourceError as exc:
        print(f"congruence lattice skipped: {exc}", file=sys.stderr)
        if args.strict:
            return 1
    print("\n".join(str(out / w) for w in written))
    return 0


def cmd_check_all(args) -> int:
    suite = checks.run_all(n_max=args.n_max, long=args.long, seed=args.seed,
                           samples=args.samples, jobs=args.jobs)
    report = checks.report_json(suite)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report)
        (out / "report.timings.json").write_text(checks.timings_json(suite))
        _figures(out)
    if args.format == "json" and not args.out:
        sys.stdout.write(report)
    else:
        for k, title in checks.CRITERIA.items():
            mine = [c for c in suite.claims if c.criterion == k]
            fails = [c for c in mine if c.status == "fail"]
            skips = [c for c in mine if c.status != "pass" and c.status != "fail"]
            verdict = "FAIL" if fails else ("SKIP" if skips and not [c for c in mine if c.status == "pass"] else "PASS")
            print(f"criterion {k} [{title}]: {verdict} ({len(mine) - len(fails) - len(skips)}/{len(mine)} pass"
                  + (f", {len(skips)} skipped" if skips else "") + ")")
            for c in fails:
                print(f"    fail {c.id}: expected {json.dumps(c.expected)} computed {json.dumps(c.computed)}")
            for c in skips:
                print(f"    skipped {c.id}: {c.computed}")
    failed = any(c.status == "fail" for c in suite.claims)
    skipped = any(c.status == "skipped(budget)" for c in suite.claims)
    return _status_code(not failed, skipped, args.strict)


def _figures(out: Path):
    """Hasse PNGs and DOT files for a few representative monoids next to the report."""
    from .figures import jposet_png, lattice_png
    fig = out / "figures"
    fig.mkdir(exist_ok=True)
    for text in ("AO:5", "AM:5", "AM:6"):
        spec = parse_spec(text)
        tag = text.replace(":", "")
        res = jclass_profile(spec)
        sizes = {r["label"]: r["size"] for r in res.computed}
        (fig / f"{tag}_jposet.dot").write_text(export_dot(res.poset, "jposet", sizes))
        jposet_png(res.poset, fig / f"{tag}_jposet.png", f"J-order of {text}")
        lat = cg.verify_classification(spec).lattice
        (fig / f"{tag}_congruences.dot").write_text(cg.lattice_dot(lat))
        lattice_png(lat, fig / f"{tag}_congruences.png", f"congruences of {text}")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.verb == "check-all":
            if args.spec:
                raise UsageError("check-all takes no monoid")
            return cmd_check_all(args)
        if not args.spec:
            raise UsageError(f"{args.verb} needs a monoid, e.g. AO:5")
        spec = parse_spec(args.spec)
        if args.verb in AO_AM_ONLY and spec.id not in (MonoidId.AOn, MonoidId.AMn):
            raise UsageError(f"{args.verb} is defined for AO and AM only")
        if args.verb == "dot" and args.format != "text":
            raise UsageError("dot writes DOT and PNG files; --format does not apply")
        if args.format == "dot" and args.verb not in ("green", "cong"):
            raise UsageError("--format dot applies to green and cong")
        return {"enum": cmd_enum, "card": cmd_card, "green": cmd_green, "cong": cmd_cong,
                "rank": cmd_rank, "dot": cmd_dot}[args.verb](args, spec)
    except (UsageError, ValueError) as exc:  # DimensionError and PreconditionError included
        print(f"aimon: error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"skipped(budget): {exc}", file=sys.stderr)
        return 1 if args.strict else 0


def main():
    sys.exit(run())
