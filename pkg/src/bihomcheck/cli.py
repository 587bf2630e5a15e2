"""Command-line interface.

Exit codes: 0 when the requested check passes overall, 1 when at least one
verdict fails, 2 for anything else (inapplicable results, usage errors,
malformed input). Malformed input never produces a traceback.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bundle import AlgebraBundle
from .catalog import entries as catalog_entries
from .catalog import get_entry, summary_table, verify_all, verify_entry
from .construct import (
    TwistSpec,
    derivation_tbp,
    np_commutator,
    pre_lie_from_derivation,
    tensor_bundle,
    ternary_from_derivation,
    ternary_from_involution,
    ternary_from_product,
    yau_twist,
)
from .engine import ExponentTuple, check_identity
from .errors import BihomError
from .fileio import load_bundle, load_identity_file, report_to_json, save_bundle
from .rng import SplitRng
from .structures import (
    REGISTRY,
    Report,
    check_consequence_suite,
    check_overlap_tbp_bp,
    check_power_suite,
    check_structure,
    check_ternary_overlap,
    IDENTITIES,
)


def _color_enabled() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _mark(status: str) -> str:
    if _color_enabled():
        color = {"pass": "\x1b[32m", "fail": "\x1b[31m", "inapplicable": "\x1b[33m"}[status]
        return f"{color}{status.upper()}\x1b[0m"
    return status.upper()


def _print_report(report: Report) -> None:
    print(f"bundle {report.bundle} | {report.structure} | mode {report.mode}")
    for v in report.verdicts:
        line = f"  {v.identity:32s} {_mark(v.status)}"
        if v.reason:
            line += f"  ({v.reason})"
        print(line)
        if v.counterexample is not None:
            ce = v.counterexample
            print(f"      at basis tuple {ce.basis_tuple}, residual {list(ce.residual)}")
            if ce.point:
                shown = ", ".join(f"{k}={v}" for k, v in ce.point.items())
                print(f"      point {shown}")
    for note in report.notes:
        print(f"  note: {note}")
    print(f"  overall: {_mark(report.overall)}")


def _exit_code(overall: str) -> int:
    return {"pass": 0, "fail": 1}.get(overall, 2)


def _write_report(report: Report, path, bundle_hash=None) -> None:
    Path(path).write_text(report_to_json(report, bundle_hash), encoding="utf-8")


def _sample_points(bundle: AlgebraBundle, samples: int, seed: int) -> list:
    rng = SplitRng(seed).child("points")
    params = bundle.ring.params
    points = []
    attempts = 0
    while len(points) < samples:
        attempts += 1
        if attempts > 1000 * samples:
            raise BihomError(
                "could not sample constraint-satisfying points; "
                "use `catalog verify` for catalog entries with branch data"
            )
        point = {p: Fraction(rng.randint(-10, 10)) for p in params}
        if bundle.ring.check_point(point) is None:
            points.append(point)
    return points


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    bundle = load_bundle(args.bundle)
    if args.structure not in REGISTRY and args.structure != "tbp-nlie":
        raise BihomError(
            f"unknown structure {args.structure!r}; known: {', '.join(sorted(REGISTRY))}, tbp-nlie"
        )
    if args.mode == "sampled":
        points = _sample_points(bundle, args.samples, args.seed)
        report = check_structure(args.structure, bundle, "sampled", points, seed=args.seed)
    else:
        report = check_structure(args.structure, bundle, "symbolic")
    _print_report(report)
    if args.report:
        _write_report(report, args.report, bundle.content_hash())
    return _exit_code(report.overall)


def cmd_identities(args) -> int:
    bundle = load_bundle(args.bundle)
    if args.set == "thm25":
        report = check_consequence_suite(bundle)
    elif args.set == "eq2.20":
        report = check_overlap_tbp_bp(bundle)
    elif args.set == "eq3.15":
        report = check_ternary_overlap(bundle)
    elif args.set == "eq3.3":
        verdict = check_identity(IDENTITIES["power-fixed"], bundle, "power-fixed")
        report = Report(bundle.label(), "eq3.3", "symbolic", [verdict])
    elif args.set == "eq3.18":
        verdict = check_identity(IDENTITIES["invol-compat"], bundle, "invol-compat")
        report = Report(bundle.label(), "eq3.18", "symbolic", [verdict])
    elif args.set == "lemma31":
        exps = None
        if args.exponents:
            exps = [ExponentTuple.from_seq([int(x) for x in e.split(",")]) for e in args.exponents]
        report = check_power_suite(bundle, exps, seed=args.seed)
    else:
        raise BihomError(f"unknown identity set {args.set!r}")
    _print_report(report)
    if args.report:
        _write_report(report, args.report, bundle.content_hash())
    return _exit_code(report.overall)


def _parse_twist(value: str) -> TwistSpec:
    # e.g. "mul=a,b" or "br=a^2,b^-1"
    if "=" not in value:
        raise BihomError(f"bad twist spec {value!r} (want op=map[,map...])")
    op_name, slots_text = value.split("=", 1)
    slots = []
    for piece in slots_text.split(","):
        piece = piece.strip()
        if "^" in piece:
            name, power = piece.split("^", 1)
            slots.append((name, int(power)))
        else:
            slots.append((piece, 1))
    return TwistSpec(op_name.strip(), tuple(slots))


def cmd_construct(args) -> int:
    bundle = load_bundle(args.bundle)
    require = not args.allow_hypothesis_failures
    kind = args.kind
    if kind == "derivation-tbp":
        out = derivation_tbp(bundle, args.derivation, args.map_a, args.map_b, require=require)
    elif kind == "pre-lie":
        out = pre_lie_from_derivation(bundle, args.derivation, args.map_a, args.map_b, require=require)
    elif kind == "np-commutator":
        out = np_commutator(bundle, require=require)
    elif kind == "ternary-d":
        out = ternary_from_derivation(bundle, args.derivation, require=require)
    elif kind == "ternary-f":
        out = ternary_from_involution(bundle, args.involution, require=require)
    elif kind == "ternary-m":
        out = ternary_from_product(bundle, require=require)
    elif kind == "twist":
        if not args.twist:
            raise BihomError("twist needs at least one --op spec, e.g. --op mul=a,b")
        out = yau_twist(bundle, [_parse_twist(v) for v in args.twist], require=require)
    else:
        raise BihomError(f"unknown construction {kind!r}")
    save_bundle(out, args.output)
    warnings = (out.provenance or {}).get("warnings", ())
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if (out.provenance or {}).get("invol_compat") is not None:
        print(f"ternary compatibility condition: {out.provenance['invol_compat']}")
    print(f"wrote {args.output}")
    return 0


def cmd_tensor(args) -> int:
    a = load_bundle(args.left)
    b = load_bundle(args.right)
    out = tensor_bundle(a, b, args.kind, require=True)
    save_bundle(out, args.output)
    for w in (out.provenance or {}).get("warnings", ()):
        print(f"warning: {w}", file=sys.stderr)
    print(f"wrote {args.output}")
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        print("entry  case  params        status")
        print("-----  ----  ------------  -------------")
        for entry_id in sorted(catalog_entries()):
            e = catalog_entries()[entry_id]
            params = ",".join(e.bundle.ring.params)
            print(f"{entry_id:5d}  {e.case:4s}  {params:12s}  {e.status}")
        return 0
    if args.action == "show":
        e = get_entry(args.entry)
        data = e.bundle.canonical_dict()
        data["catalog"] = {
            "id": e.entry_id,
            "case": e.case,
            "status": e.status,
            "given_br_slots": [list(s) for s in e.given_br_slots],
            "completion": None
            if e.completion is None
            else {
                "entries": [
                    [s[0], s[1], c, v.text()]
                    for s in sorted(e.completion)
                    for c, v in enumerate(e.completion[s])
                    if not v.is_zero()
                ]
            },
            "branches": [dict(b) for b in e.branches],
        }
        print(json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True))
        return 0
    # verify
    ids = _parse_entry_range(args.entries) if args.entries else None
    reports = verify_all(args.mode, samples=args.samples, seed=args.seed, ids=ids)
    print(summary_table(reports))
    if args.report:
        payload = {
            "tool_version": __version__,
            "mode": args.mode,
            "seed": args.seed,
            "reports": [r.to_dict() for r in reports],
        }
        Path(args.report).write_text(
            json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    failing = [
        r for r in reports
        if get_entry(int(r.bundle.replace("entry", ""))).status == "asserted-pass"
        and r.overall != "pass"
    ]
    return 1 if failing else 0


def _parse_entry_range(text: str) -> list:
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if "-" in piece:
            lo, hi = piece.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(piece))
    return out


def cmd_dsl(args) -> int:
    bundle = load_bundle(args.bundle)
    identities = load_identity_file(args.idl_file)
    verdicts = [
        check_identity(ident, bundle, identity_id)
        for identity_id, ident in identities.items()
    ]
    report = Report(bundle.label(), f"dsl:{Path(args.idl_file).name}", "symbolic", verdicts)
    _print_report(report)
    return _exit_code(report.overall)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bihomcheck",
        description="Exact verification of twisted multilinear algebra structures.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run a named structure's axiom checks on a bundle")
    p.add_argument("bundle")
    p.add_argument("--structure", required=True)
    p.add_argument("--mode", choices=("symbolic", "sampled"), default="symbolic")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the report as JSON to this path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("identities", help="run one of the named identity suites")
    p.add_argument("bundle")
    p.add_argument(
        "--set",
        required=True,
        choices=("thm25", "lemma31", "eq2.20", "eq3.3", "eq3.15", "eq3.18"),
    )
    p.add_argument(
        "--exponents",
        action="append",
        help="exponent tuple m,n,l,s,p,q,k,t for the lemma31 templates "
        "(repeatable; use --exponents=-2,0,... when the first value is negative)",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("construct", help="apply a construction to a bundle")
    p.add_argument(
        "kind",
        choices=(
            "derivation-tbp",
            "pre-lie",
            "np-commutator",
            "ternary-d",
            "ternary-f",
            "ternary-m",
            "twist",
        ),
    )
    p.add_argument("bundle")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--derivation", default="D", help="name of the derivation map")
    p.add_argument("--involution", default="f", help="name of the involution map")
    p.add_argument("--map-a", default="a")
    p.add_argument("--map-b", default="b")
    p.add_argument(
        "--op",
        dest="twist",
        action="append",
        help="twist spec op=map[,map...], powers allowed (e.g. br=a,b^-1)",
    )
    p.add_argument(
        "--allow-hypothesis-failures",
        action="store_true",
        help="record violated hypotheses as warnings instead of refusing",
    )
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("tensor", help="tensor product of two bundles")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--kind", required=True, choices=("bp-tbp", "pre-lie-poisson"))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("catalog", help="list, show or verify the shipped catalog")
    catalog_sub = p.add_subparsers(dest="action", required=True)
    pl = catalog_sub.add_parser("list")
    pl.set_defaults(func=cmd_catalog, action="list")
    ps = catalog_sub.add_parser("show")
    ps.add_argument("entry", type=int)
    ps.set_defaults(func=cmd_catalog, action="show")
    pv = catalog_sub.add_parser("verify")
    pv.add_argument("--entries", help="range like 24-26 or list like 1,5,7")
    pv.add_argument("--mode", choices=("symbolic", "sampled"), default="symbolic")
    pv.add_argument("--samples", type=int, default=5)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--report")
    pv.set_defaults(func=cmd_catalog, action="verify")

    p = sub.add_parser("dsl", help="check identities from a .idl file on a bundle")
    dsl_sub = p.add_subparsers(dest="action", required=True)
    pc = dsl_sub.add_parser("check")
    pc.add_argument("idl_file")
    pc.add_argument("bundle")
    pc.set_defaults(func=cmd_dsl)

    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; keep both
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BihomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
