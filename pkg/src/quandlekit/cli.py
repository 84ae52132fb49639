"""Command line front end: validate, analyze, construct, search, admissible.

Exit codes: 0 success (or a "not ruled out" verdict), 1 domain-negative
(invalid table, ruled-out profile), 2 usage, parameter, parse, or I/O error.
JSON output is key-sorted and schema-versioned; identical inputs produce
byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .construct import (
    GaloisField,
    affine_quandle,
    galois_affine_quandle,
    shq_family,
)
from .core import ValidationResult, parse_qdl, write_qdl
from .errors import (
    InvalidQuandleError,
    ParseError,
    QuandleKitError,
)
from .search import SearchSpec, save_search_result, search_by_profile
from .shq import check_profile_admissible, classify_shq, verify_main_theorem
from .structure import enumerate_subquandles, is_connected, is_latin, profile

_VERSION = "0.1.0"


def _parse_profile(text: str) -> tuple[int, ...]:
    try:
        lengths = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise QuandleKitError(f"profile must be comma-separated integers, got {text!r}")
    return lengths


def _load(path: str):
    text = Path(path).read_text()
    return parse_qdl(text)


def _emit_json(payload: dict, out: str | None) -> None:
    blob = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(blob)
    else:
        sys.stdout.write(blob)


def cmd_validate(args) -> int:
    text = Path(args.path).read_text()
    try:
        q = parse_qdl(text)
        result = ValidationResult(ok=True, order=q.n)
    except InvalidQuandleError as exc:
        result = exc.result
    if args.json:
        _emit_json(
            {
                "schema": "quandlekit.validate/1",
                "ok": result.ok,
                "order": result.order if result.ok else None,
                "error": result.error,
                "witness": list(result.witness),
            },
            None,
        )
    else:
        print(result)
    return 0 if result.ok else 1


def cmd_analyze(args) -> int:
    q = _load(args.path)
    prof = profile(q)
    params = classify_shq(q)
    report = {
        "schema": "quandlekit.analyze/1",
        "order": q.n,
        "valid": True,
        "connected": is_connected(q),
        "latin": is_latin(q),
        "profile": {
            "structures": [list(s.lengths) for s in prof.structures],
            "connected_form": list(prof.connected_form.lengths)
            if prof.connected_form
            else None,
        },
        "shq": params.as_dict() if params else None,
    }
    theorem = None
    if args.verify_main_theorem:
        theorem = verify_main_theorem(q, max_order=args.max_order)
        report["main_theorem"] = theorem.as_dict()
    inventory = None
    if args.subquandles:
        inventory = enumerate_subquandles(q, max_order=args.max_order)
        classes = []
        for rep, members in inventory.classes().items():
            entry = inventory.entries[rep]
            classes.append(
                {
                    "order": entry.order,
                    "profile": [list(s.lengths) for s in entry.profile.structures],
                    "count": len(members),
                }
            )
        report["subquandles"] = {"count": len(inventory.entries), "classes": classes}
    if args.json or args.out:
        _emit_json(report, args.out)
        return 0
    print(f"order: {q.n}")
    print(f"connected: {'yes' if report['connected'] else 'no'}")
    print(f"latin: {'yes' if report['latin'] else 'no'}")
    print(f"profile: {prof}")
    if params:
        print(f"shq: ell={params.ell} c={params.c} p={params.p} a={params.a}")
    else:
        print("shq: no")
    if theorem is not None:
        if theorem.all_passed:
            print(f"main theorem: PASS ({len(theorem.checks)} checks)")
        elif not theorem.is_shq:
            print("main theorem: FAIL (not an SHQ)")
        else:
            first = next(c.name for c in theorem.checks if not c.passed)
            print(f"main theorem: FAIL ({first})")
    if inventory is not None:
        print(
            f"subquandles: {len(inventory.entries)} total, "
            f"{len(inventory.classes())} classes"
        )
        for rep, members in inventory.classes().items():
            entry = inventory.entries[rep]
            print(
                f"  order {entry.order} profile {entry.profile}: {len(members)}"
            )
    return 0


def cmd_construct(args) -> int:
    if args.kind == "affine":
        q = affine_quandle(args.m, args.h, max_order=args.max_order)
    elif args.kind == "shq-family":
        q = shq_family(args.p, args.c, max_order=args.max_order)
    elif args.kind == "galois":
        q = galois_affine_quandle(args.p, args.a, args.multiplier, max_order=args.max_order)
    else:  # cyclic: multiplier is a generator of the field's unit group
        field = GaloisField(args.p, args.a)
        q = galois_affine_quandle(
            args.p, args.a, field.multiplicative_generator(), max_order=args.max_order
        )
    write_qdl(q, args.out)
    print(f"profile: {profile(q)}")
    return 0


def cmd_search(args) -> int:
    spec = SearchSpec(_parse_profile(args.profile))
    result = search_by_profile(
        spec, max_order=args.max_order, workers=args.workers, dedup=args.dedup
    )
    if args.out:
        manifest = save_search_result(result, args.out)
    else:
        manifest = {
            "schema": "quandlekit.search/1",
            "profile": list(spec.lengths),
            "order": spec.order,
            "count": len(result.quandles),
            "iso_classes": [list(c) for c in result.iso_classes],
            "stats": result.stats.as_dict(),
        }
    if args.json:
        _emit_json(manifest, None)
        return 0
    line = f"found {len(result.quandles)} quandles with profile {args.profile}"
    if args.dedup:
        line += f" in {len(result.iso_classes)} isomorphism classes"
    print(line)
    return 0


def cmd_admissible(args) -> int:
    verdict = check_profile_admissible(_parse_profile(args.profile))
    if args.json:
        _emit_json(
            {
                "schema": "quandlekit.admissible/1",
                "lengths": list(verdict.lengths),
                "ruled_out": verdict.ruled_out,
                "reason": verdict.reason,
                "detail": verdict.detail,
                "index": verdict.index,
            },
            None,
        )
    elif verdict.ruled_out:
        print(f"RuledOut ({verdict.reason}: {verdict.detail})")
    else:
        print("NotRuledOut")
    return 1 if verdict.ruled_out else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quandlekit", description="Finite quandle toolkit."
    )
    parser.add_argument("--version", action="version", version=f"quandlekit {_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a .qdl table against the axioms")
    p_val.add_argument("path")
    p_val.add_argument("--json", action="store_true")
    p_val.set_defaults(func=cmd_validate)

    p_an = sub.add_parser("analyze", help="profile, connectivity, SHQ structure")
    p_an.add_argument("path")
    p_an.add_argument("--json", action="store_true")
    p_an.add_argument("--out", help="write the JSON report to this file")
    p_an.add_argument("--subquandles", action="store_true")
    p_an.add_argument("--verify-main-theorem", action="store_true")
    p_an.add_argument("--max-order", type=int, default=None)
    p_an.set_defaults(func=cmd_analyze)

    p_con = sub.add_parser("construct", help="build a quandle and write it out")
    kinds = p_con.add_subparsers(dest="kind", required=True)
    k_aff = kinds.add_parser("affine", help="a*b = h*a + (1-h)*b mod m")
    k_aff.add_argument("--m", type=int, required=True)
    k_aff.add_argument("--h", type=int, required=True)
    k_fam = kinds.add_parser("shq-family", help="affine over Z_(p^(c-1)), lifted root")
    k_fam.add_argument("--p", type=int, required=True)
    k_fam.add_argument("--c", type=int, required=True)
    k_gal = kinds.add_parser("galois", help="affine over GF(p^a) with a multiplier")
    k_gal.add_argument("--p", type=int, required=True)
    k_gal.add_argument("--a", type=int, required=True)
    k_gal.add_argument("--multiplier", type=int, required=True)
    k_cyc = kinds.add_parser("cyclic", help="galois with a unit-group generator")
    k_cyc.add_argument("--p", type=int, required=True)
    k_cyc.add_argument("--a", type=int, required=True)
    for k in (k_aff, k_fam, k_gal, k_cyc):
        k.add_argument("--out", required=True)
        k.add_argument("--max-order", type=int, default=None)
        k.set_defaults(func=cmd_construct)

    p_se = sub.add_parser("search", help="all connected quandles with a profile")
    p_se.add_argument("--profile", required=True, help='e.g. "1,2,6"')
    p_se.add_argument("--max-order", type=int, default=None)
    p_se.add_argument("--dedup", action="store_true", help="group by isomorphism")
    p_se.add_argument("--workers", type=int, default=1)
    p_se.add_argument("--out", help="write .qdl files and manifest.json here")
    p_se.add_argument("--json", action="store_true")
    p_se.set_defaults(func=cmd_search)

    p_ad = sub.add_parser("admissible", help="can an SHQ with this profile exist?")
    p_ad.add_argument("--profile", required=True)
    p_ad.add_argument("--json", action="store_true")
    p_ad.set_defaults(func=cmd_admissible)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidQuandleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except QuandleKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
