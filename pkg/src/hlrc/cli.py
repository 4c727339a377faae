"""Command-line surface: params, build, encode, erase, recover, verify, simulate.

Every command is deterministic given its inputs and --seed; all reports are
canonical JSON so repeated runs are byte-identical.  Verify exits 0 only when
every requested check passed; a failed check exits 1 and a skipped check
(budget) exits 2 -- a skip is never a pass.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import fiber as fiber_mod
from . import fileio
from . import oracle as oracle_mod
from . import rm as rm_mod
from .errors import HlrcError
from .recovery import (
    ErasureWord,
    check_structure,
    hierarchical_recover,
)
from .rng import SplitMix64
from .sim import ErasureModel, run_trials

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_SKIPPED = 2

ALL_CHECKS = ("dimension", "distance", "hierarchy", "embedding", "availability")


def _load_spec(path: str) -> fileio.CodeSpecFile:
    return fileio.parse_spec(Path(path).read_text())


def _parse_model(text: str) -> ErasureModel:
    parts = text.split(":")
    if parts[0] == "iid" and len(parts) == 2:
        return ErasureModel(kind="iid", epsilon=float(parts[1]))
    if parts[0] == "fixed" and len(parts) == 2:
        return ErasureModel(kind="fixed_weight", weight=int(parts[1]))
    if parts[0] == "burst" and len(parts) == 3:
        return ErasureModel(kind="group_burst", level=int(parts[1]), extra=int(parts[2]))
    raise HlrcError(
        f"bad --model {text!r}; use iid:<eps> | fixed:<w> | burst:<level>:<extra>"
    )


# -- params ---------------------------------------------------------------------


def _params_doc(sf: fileio.CodeSpecFile) -> dict:
    code = fileio.build_from_spec(sf)
    structure = fileio.structure_from_spec(sf, code)
    doc: dict = {
        "family": sf.family,
        "parameters": sf.params,
        "n": {"value": code.n, "provenance": "construction"},
        "k": {
            "value": code.k,
            "formula": code.dimension_formula,
            "provenance": "rank-verified",
            "matches_formula": code.rank_matches_formula,
        },
    }
    notes: list[str] = []
    if sf.family == "rm":
        spec = code.spec
        n, k, d = rm_mod.rm_params(spec)
        doc["d"] = {"value": d, "provenance": "formula-exact"}
    else:
        fp = fiber_mod.fiber_params(code.spec)
        prov = {
            "family-exact": "formula-exact",
            "family-lower-bound": "formula-lower-bound",
            "generic-unverified": "lower-bound-unverified",
        }[fp.d_provenance]
        doc["d"] = {"value": fp.d_lower, "provenance": prov}
        doc["localities"] = list(fp.localities)
        doc["fiber_sizes"] = list(fp.fiber_sizes)
        doc["rho"] = list(fp.rho)
        doc["split_points"] = fp.split_points
        notes.extend(fp.notes)
        if fp.warning:
            notes.append(fp.warning)
    levels = []
    for j, lp in enumerate(structure.levels, start=1):
        entry = {
            "level": j,
            "n": lp.n,
            "s": lp.s,
            "delta": lp.delta,
            "availability": lp.availability,
        }
        if lp.availability_ambient is not None:
            entry["availability_ambient"] = lp.availability_ambient
            notes.append(
                f"level {j}: ambient availability figure "
                f"{lp.availability_ambient} is flagged: {lp.availability_note}"
            )
        levels.append(entry)
    doc["hierarchy"] = levels
    doc["notes"] = notes
    return doc


def _print_params(doc: dict) -> None:
    print(f"family      {doc['family']}  {doc['parameters']}")
    print(f"n           {doc['n']['value']:<8} [{doc['n']['provenance']}]")
    k = doc["k"]
    match = "" if k["matches_formula"] else f"  ** rank {k['value']} != formula {k['formula']} **"
    print(f"k           {k['value']:<8} [{k['provenance']}]{match}")
    print(f"d           {doc['d']['value']:<8} [{doc['d']['provenance']}]")
    if "localities" in doc:
        print(f"localities  {doc['localities']}  (rho {doc['rho']}, fibers {doc['fiber_sizes']})")
    for lv in doc["hierarchy"]:
        amb = (
            f"  availability_ambient={lv['availability_ambient']} (flagged)"
            if "availability_ambient" in lv
            else ""
        )
        print(
            f"level {lv['level']}     n={lv['n']} s={lv['s']} delta={lv['delta']} "
            f"availability={lv['availability']}{amb}"
        )
    for note in doc["notes"]:
        print(f"note        {note}")


def cmd_params(args) -> int:
    sf = _load_spec(args.spec)
    doc = _params_doc(sf)
    _print_params(doc)
    if args.out:
        fileio.write_report(doc, args.out)
    return EXIT_OK


# -- build / encode / erase / recover ----------------------------------------------


def cmd_build(args) -> int:
    sf = _load_spec(args.spec)
    code = fileio.build_from_spec(sf)
    fileio.write_code(code, sf, args.out)
    print(f"wrote {args.out}: n={code.n} k={code.k}")
    return EXIT_OK


def cmd_encode(args) -> int:
    code, _sf = fileio.read_code(args.code)
    message = fileio.read_message(args.message)
    word = ErasureWord.from_codeword(code.encode(message))
    fileio.write_word(word, args.out)
    print(f"wrote {args.out}: {code.n} symbols")
    return EXIT_OK


def cmd_erase(args) -> int:
    word = fileio.read_word(args.word)
    if (args.pattern is None) == (args.model is None):
        raise HlrcError("erase needs exactly one of --pattern or --model")
    if args.pattern is not None:
        positions = [int(x) for x in args.pattern.split(",") if x != ""]
        bad = [p for p in positions if not 0 <= p < len(word.values)]
        if bad:
            raise HlrcError(f"pattern positions out of range: {bad}")
        word.erase(positions)
    else:
        model = _parse_model(args.model)
        if model.kind == "group_burst":
            raise HlrcError("burst erasure needs a structure; use simulate for that model")
        rng = SplitMix64(args.seed)
        n = len(word.values)
        if model.kind == "iid":
            threshold = int(round(model.epsilon * 2.0**64))
            word.erase([p for p in range(n) if rng.next_u64() < threshold])
        else:
            word.erase(rng.sample_distinct(model.weight, n))
    fileio.write_word(word, args.out)
    print(f"wrote {args.out}: {len(word.erased_positions())} erasures")
    return EXIT_OK


def cmd_recover(args) -> int:
    code, sf = fileio.read_code(args.code)
    word = fileio.read_word(args.word)
    if len(word.values) != code.n:
        raise HlrcError(f"word length {len(word.values)} != code length {code.n}")
    structure = fileio.structure_from_spec(sf, code)
    recovered, report = hierarchical_recover(
        word, structure, target="all", fallback=args.fallback
    )
    fileio.write_word(recovered, args.out)
    doc = {
        "success": report.success,
        "residual": list(report.residual),
        "symbols_accessed": report.symbols_accessed,
        "rounds": report.rounds,
        "ml_fallback_used": report.ml_fallback_used,
        "recoveries_by_level": {str(k): v for k, v in sorted(report.per_level.items())},
        "positions": {
            str(pos): {
                "level": rec.level,
                "direction": rec.direction,
                "symbols_read": rec.symbols_read,
                "group": list(rec.group),
            }
            for pos, rec in sorted(report.recovered.items())
        },
    }
    if args.report:
        fileio.write_report(doc, args.report)
    print(
        f"wrote {args.out}: success={report.success} "
        f"residual={len(report.residual)} symbols={report.symbols_accessed}"
    )
    return EXIT_OK if report.success else EXIT_FAIL


# -- verify ----------------------------------------------------------------------


def _verify_dimension(code) -> dict:
    rank = oracle_mod.dimension_rank(code)
    ok = rank == code.dimension_formula
    return {
        "status": "pass" if ok else "fail",
        "rank": rank,
        "formula": code.dimension_formula,
    }


def _verify_distance(code, sf, budget) -> dict:
    q = code.field.q
    total = q**code.num_basis
    if total > budget:
        return {
            "status": "skipped",
            "reason": f"{total} codewords exceed budget {budget}",
        }
    res = oracle_mod.min_distance_bruteforce(code, budget=budget)
    if sf.family == "rm":
        spec = code.spec
        expected = (q - spec.v) * q ** (spec.m - 1)
        ok = res.d == expected
        kind = "exact"
    else:
        fp = fiber_mod.fiber_params(code.spec)
        expected = fp.d_lower
        if fp.d_provenance == "family-exact":
            ok = res.d == expected
            kind = "exact"
        else:
            ok = res.d >= expected
            kind = "lower-bound"
    return {
        "status": "pass" if ok else "fail",
        "oracle_d": res.d,
        "expected": expected,
        "comparison": kind,
        "witness_message": list(res.witness) if not ok else None,
    }


def _verify_hierarchy(code, sf, budget) -> dict:
    structure = fileio.structure_from_spec(sf, code)
    chk = check_structure(structure)
    detail: dict = {
        "structure": "pass" if chk.passed else "fail",
        "violations": chk.violations[:10],
        "levels": [],
    }
    overall = "pass" if chk.passed else "fail"
    for lev in range(1, structure.H + 1):
        delta = structure.levels[lev - 1].delta
        seen_keys = set()
        patterns = 0
        failures = None
        skipped = None
        for sup in structure.supports[lev - 1]:
            if sup.posset in seen_keys:
                continue
            seen_keys.add(sup.posset)
            total = sum(
                math.comb(len(sup.positions), w) for w in range(1, delta)
            )
            if patterns + total > budget:
                skipped = f"pattern budget {budget} exhausted at level {lev}"
                break
            res = oracle_mod.exhaustive_erasure_check(
                code,
                sup.positions,
                delta - 1,
                decoder="peeling",
                structure=structure,
                level=lev,
                budget=budget,
            )
            patterns += res.patterns_checked
            if not res.passed:
                failures = list(res.counterexample)
                break
        entry = {
            "level": lev,
            "delta": delta,
            "patterns_checked": patterns,
        }
        if failures is not None:
            entry["status"] = "fail"
            entry["counterexample"] = failures
            overall = "fail"
        elif skipped is not None:
            entry["status"] = "skipped"
            entry["reason"] = skipped
            if overall == "pass":
                overall = "skipped"
        else:
            entry["status"] = "pass"
        detail["levels"].append(entry)
    detail["status"] = overall
    return detail


def _verify_embedding(code) -> dict:
    rep = fiber_mod.verify_rm_embedding(code)
    return {
        "status": "pass" if rep.passed else "fail",
        "num_variables": rep.num_variables,
        "degree_bound": rep.degree_bound,
        "max_basis_degree": rep.max_basis_degree,
        "basis_monomials_ok": rep.basis_monomials_ok,
        "points_distinct": rep.points_distinct,
        "supports_axis_parallel": rep.supports_axis_parallel,
    }


def _verify_availability(code, sf) -> dict:
    structure = fileio.structure_from_spec(sf, code)
    ok = True
    levels = []
    for lev in range(1, structure.H + 1):
        declared = structure.levels[lev - 1].availability
        counts = {
            len(sup.groups.get(anchor, []))
            for sup in structure.supports[lev - 1]
            for anchor in sup.positions
        }
        level_ok = counts == {declared}
        ok = ok and level_ok
        entry = {
            "level": lev,
            "declared": declared,
            "observed": sorted(counts),
            "ok": level_ok,
        }
        amb = structure.levels[lev - 1].availability_ambient
        if amb is not None:
            entry["ambient_formula"] = amb
            entry["ambient_note"] = structure.levels[lev - 1].availability_note
        levels.append(entry)
    return {"status": "pass" if ok else "fail", "levels": levels}


def cmd_verify(args) -> int:
    sf = _load_spec(args.spec)
    code = fileio.build_from_spec(sf)
    requested = (
        list(ALL_CHECKS) if args.checks == "all" else args.checks.split(",")
    )
    for c in requested:
        if c not in ALL_CHECKS:
            raise HlrcError(f"unknown check {c!r}; choose from {ALL_CHECKS} or all")
    if sf.family == "rm":
        if "embedding" in requested and args.checks != "all":
            raise HlrcError("embedding check applies to fiber families only")
        requested = [c for c in requested if c != "embedding"]
    results: dict = {}
    for check in requested:
        if check == "dimension":
            results[check] = _verify_dimension(code)
        elif check == "distance":
            results[check] = _verify_distance(code, sf, args.budget)
        elif check == "hierarchy":
            results[check] = _verify_hierarchy(code, sf, args.budget)
        elif check == "embedding":
            results[check] = _verify_embedding(code)
        elif check == "availability":
            results[check] = _verify_availability(code, sf)
    statuses = [r["status"] for r in results.values()]
    overall = (
        "fail" if "fail" in statuses else "skipped" if "skipped" in statuses else "pass"
    )
    doc = {"spec": sf.params, "family": sf.family, "checks": results, "overall": overall}
    text = fileio.report_text(doc)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    return {"pass": EXIT_OK, "fail": EXIT_FAIL, "skipped": EXIT_SKIPPED}[overall]


# -- simulate --------------------------------------------------------------------


def cmd_simulate(args) -> int:
    sf = _load_spec(args.spec)
    if args.trials < 1:
        raise HlrcError("trials must be >= 1")
    code = fileio.build_from_spec(sf)
    structure = fileio.structure_from_spec(sf, code)
    model = _parse_model(args.model)
    stats = run_trials(code, structure, model, args.trials, args.seed, fallback=args.fallback)
    doc = {
        "spec": sf.params,
        "family": sf.family,
        "code": {"n": code.n, "k": code.k},
        "stats": stats.to_dict(),
    }
    text = fileio.report_text(doc)
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    return EXIT_OK


# -- entry point ------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hlrc",
        description="hierarchical locally recoverable codes: build, verify, simulate",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print the parameter table for a code spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", help="also write the table as JSON")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("build", help="build a code and write the code file")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("encode", help="encode a message file to a word file")
    p.add_argument("--code", required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("erase", help="apply an erasure pattern or model to a word")
    p.add_argument("--word", required=True)
    p.add_argument("--pattern", help="comma-separated positions")
    p.add_argument("--model", help="iid:<eps> | fixed:<w>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_erase)

    p = sub.add_parser("recover", help="run hierarchical recovery on a masked word")
    p.add_argument("--code", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="write the recovery report as JSON")
    p.add_argument("--fallback", action="store_true", help="enable full-code solve fallback")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("verify", help="run verification checks against a spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--checks", default="all", help=f"comma list from {','.join(ALL_CHECKS)}")
    p.add_argument("--budget", type=int, default=oracle_mod.DEFAULT_CODEWORD_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="run seeded erasure-recovery trials")
    p.add_argument("--spec", required=True)
    p.add_argument("--model", required=True, help="iid:<eps> | fixed:<w> | burst:<level>:<extra>")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fallback", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except HlrcError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
