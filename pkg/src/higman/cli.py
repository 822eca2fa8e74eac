"""Batch command-line surface.

Commands: analyze, construct, search-rds, search-linked-system,
verify-linked, tables.  `analyze` exit codes: 0 uniform Higmanian,
1 Higmanian but not uniform, 2 not Higmanian, 3 unreadable/malformed file,
4 scheme-axiom failure, 5 internal verdict inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import constructions, higmanian, schemes
from .constructions import ConstructionError
from .groups import GroupError, build_family, prime_power
from .higmanian import VerdictInconsistencyError

EXIT_UNIFORM = 0
EXIT_NON_UNIFORM = 1
EXIT_NOT_HIGMANIAN = 2
EXIT_BAD_FILE = 3
EXIT_BAD_SCHEME = 4
EXIT_INCONSISTENT = 5

PARABOLIC_LIST_RANK_LIMIT = 12


@dataclass
class AnalysisReport:
    input: str
    v: int = 0
    rank: int = 0
    parabolics: list = field(default_factory=list)
    higmanian: bool = False
    rejection: str | None = None
    params: tuple | None = None
    spectral: dict | None = None
    verdicts: dict | None = None
    verdict_details: dict | None = None
    consistent: bool | None = None
    timings: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, default=str)


def _verdict_details(bundle: higmanian.VerdictBundle) -> dict:
    definition = {}
    for size, res in bundle.definition_details.items():
        definition[f"classes_of_{size}"] = {
            "ok": res.ok, "cork": res.cork, "witness": res.witness,
            "coefficients_consistent": res.coefficients_consistent}
    dismantle = {}
    for size, res in bundle.dismantle_details.items():
        dismantle[f"classes_of_{size}"] = {
            "ok": res.ok, "witness": res.witness,
            "exhaustive": res.exhaustive,
            "unions_checked": res.unions_checked}
    return {"definition": definition, "dismantlable": dismantle}


def _spectral_dict(bundle: higmanian.VerdictBundle) -> dict:
    eigen = bundle.eigen
    x1, x3 = eigen.P[1][2], eigen.P[3][2]
    return {
        "D": x1.D,
        "x1": str(x1),
        "x3": str(x3),
        "multiplicities": [str(m) for m in eigen.multiplicities],
        "valencies": list(eigen.valencies),
        "q_higmanian": bundle.q_higmanian,
        "q_certificates": [
            {"ordering": list(ordering), "l": l, "f": f}
            for ordering, l, f in bundle.q_certificates],
        "rhs_candidates": [str(c) for c in bundle.rhs_candidates],
    }


def analyze_scheme(scheme: schemes.SchemeTable, descriptor: str,
                   strict: bool = True, oracle: bool = False,
                   seed: int = 0) -> tuple[AnalysisReport, int]:
    """Shared analysis driver for the CLI and the library."""
    report = AnalysisReport(input=descriptor, v=scheme.v, rank=scheme.rank)
    t0 = time.perf_counter()
    if scheme.rank <= PARABOLIC_LIST_RANK_LIMIT:
        for parab in schemes.parabolics(scheme):
            report.parabolics.append({
                "classes": parab.num_classes,
                "class_size": parab.n_class,
                "colors": sorted(parab.colors)})
    report.timings["parabolics_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    det = higmanian.detect_higmanian(scheme, strict=strict)
    report.timings["detection_s"] = time.perf_counter() - t0
    if not det:
        report.rejection = det.reason
        return report, EXIT_NOT_HIGMANIAN
    report.higmanian = True
    report.params = det.params.astuple()

    t0 = time.perf_counter()
    try:
        bundle = higmanian.verdict_bundle(scheme, strict=strict, seed=seed,
                                          oracle=oracle)
    except VerdictInconsistencyError as exc:
        b = exc.bundle
        report.verdicts = {
            "criterion": b.criterion, "definition": b.definition,
            "q_higmanian": b.q_higmanian, "dismantlable": b.dismantlable}
        report.verdict_details = _verdict_details(b)
        report.consistent = False
        report.spectral = _spectral_dict(b)
        report.timings["verdicts_s"] = time.perf_counter() - t0
        return report, EXIT_INCONSISTENT
    report.timings["verdicts_s"] = time.perf_counter() - t0
    report.verdicts = {
        "criterion": bundle.criterion, "definition": bundle.definition,
        "q_higmanian": bundle.q_higmanian, "dismantlable": bundle.dismantlable}
    report.verdict_details = _verdict_details(bundle)
    report.consistent = True
    report.spectral = _spectral_dict(bundle)
    if bundle.oracle is not None:
        report.spectral["oracle_max_abs_error"] = bundle.oracle.max_abs_error
    return report, EXIT_UNIFORM if bundle.uniform else EXIT_NON_UNIFORM


def _print_report(report: AnalysisReport, as_json: bool) -> None:
    if as_json:
        print(report.to_json())
        return
    print(f"input: {report.input}")
    print(f"points: {report.v}  rank: {report.rank}")
    if report.parabolics:
        parts = ", ".join(
            f"{p['classes']}x{p['class_size']} (colors {p['colors']})"
            for p in report.parabolics)
        print(f"parabolics: {parts}")
    if not report.higmanian:
        print(f"not Higmanian: {report.rejection}")
        return
    print(f"Higmanian parameters (f,m,n,k,t): {report.params}")
    sp = report.spectral or {}
    print(f"eigenvalues: x1 = {sp.get('x1')}, x3 = {sp.get('x3')} "
          f"(D = {sp.get('D')})")
    print(f"multiplicities: {sp.get('multiplicities')}")
    print(f"criterion right-hand sides: {sp.get('rhs_candidates')}")
    v = report.verdicts or {}
    print("verdicts: " + "  ".join(f"{k}={v[k]}" for k in sorted(v)))
    if report.consistent is False:
        print("FATAL: verdicts disagree")
    elif v.get("criterion"):
        print("uniform: yes (all four routes agree)")
    else:
        print("uniform: no (all four routes agree)")


def cmd_analyze(args) -> int:
    try:
        matrix, declared_rank = schemes.parse_scheme_file(args.file)
    except (OSError, schemes.SchemeParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FILE
    try:
        scheme = schemes.validate(matrix)
        if scheme.rank != declared_rank:
            raise schemes.SchemeError(
                f"header says rank {declared_rank}, matrix has rank "
                f"{scheme.rank}")
    except schemes.SchemeError as exc:
        print(f"not a scheme: {exc}", file=sys.stderr)
        return EXIT_BAD_SCHEME
    report, code = analyze_scheme(scheme, args.file,
                                  strict=not args.no_strict_higmanian,
                                  oracle=args.oracle, seed=args.seed)
    _print_report(report, args.json)
    return code


def cmd_construct(args) -> int:
    family = args.family.lower()
    try:
        if family == "q8cp":
            _expect_params(args.params, 1, "construct q8cp <r>")
            con = constructions.construct_family(
                "q8cp", r=args.params[0], max_space=args.max_search)
        elif family == "heis":
            _expect_params(args.params, 2, "construct heis <q> <r>")
            con = constructions.construct_family(
                "heis", q=args.params[0], r=args.params[1],
                max_space=args.max_search)
        elif family == "ea":
            _expect_params(args.params, 3, "construct ea <q> <r> <j>")
            con = constructions.construct_family(
                "ea", q=args.params[0], r=args.params[1], j=args.params[2],
                max_space=args.max_search)
        else:
            print(f"error: unknown family {args.family!r} "
                  f"(expected q8cp | heis | ea)", file=sys.stderr)
            return EXIT_BAD_FILE
    except (ConstructionError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FILE

    scheme = con.result.scheme
    out = args.output or _default_scheme_name(family, args.params)
    schemes.write_scheme(scheme, out)
    print(f"group: {con.result.product_group.name} "
          f"(order {con.result.product_group.order})")
    print(f"linked system parameters: {con.system.params} "
          f"(formula {con.table1_expected}, "
          f"match: {'yes' if con.table1_match else 'NO'})")
    print(f"associate group: order {con.associate.order}, expected "
          f"{con.associate_expected_spec}, "
          f"match: {'yes' if con.associate_match else 'NO'}")
    print(f"detected parameters: {con.result.detection.params} "
          f"(formula {con.table2_expected}, "
          f"match: {'yes' if con.table2_match else 'NO'})")
    print(f"scheme written to {out}")
    ok = con.table1_match and con.table2_match and con.associate_match
    return 0 if ok else 1


def _default_scheme_name(family: str, params: list[int]) -> str:
    return family + "_" + "_".join(str(p) for p in params) + ".scheme"


def _expect_params(params: list[int], n: int, usage: str) -> None:
    if len(params) != n:
        raise ConstructionError(f"usage: {usage}")


def _parse_subgroup(G, spec: str):
    if spec == "center":
        return G.center()
    try:
        elements = [int(tok) for tok in spec.split(",")]
    except ValueError:
        raise GroupError(f"bad subgroup spec {spec!r}; use 'center' or "
                         f"comma-separated element indices") from None
    return G.subgroup(elements)


def cmd_search_rds(args) -> int:
    try:
        G = build_family(args.groupspec)
        N = _parse_subgroup(G, args.forbidden)
        found = constructions.search_semiregular_rds(
            G, N, max_space=args.max_search)
    except (GroupError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FILE
    for rds in found:
        print(" ".join(str(x) for x in rds))
    print(f"found {len(found)} semiregular RDS transversals in "
          f"{args.groupspec} relative to a subgroup of order {N.order}",
          file=sys.stderr)
    return 0


def cmd_search_linked(args) -> int:
    try:
        G = build_family(args.groupspec)
        N = _parse_subgroup(G, args.forbidden)
        system = constructions.search_linked_system(
            G, N, args.w, max_space=args.max_search)
    except (GroupError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FILE
    if system is None:
        print("no closed linked system found", file=sys.stderr)
        return 1
    _print_linked(system)
    if args.output:
        constructions.write_linked_system(system, args.output)
        print(f"written to {args.output}")
    return 0


def _print_linked(system) -> None:
    print(f"parameters (m,n,k,lambda,w,mu,nu): {system.params}")
    print(f"sign branch of (mu, nu): {system.branch or 'n/a'}")
    for i, s in enumerate(system.sets):
        print(f"X_{i}: {' '.join(str(x) for x in s)}")
    print(f"chi: {list(system.chi)}")
    try:
        assoc = constructions.associate_group(system)
    except ConstructionError as exc:
        print(f"associate group: n/a ({exc})")
        return
    print(f"associate group: order {assoc.order}, "
          f"abelian: {assoc.is_abelian()}, "
          f"element orders {sorted(assoc.element_orders())}")


def cmd_verify_linked(args) -> int:
    try:
        system = constructions.read_linked_system(args.file)
    except (OSError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FILE
    except ConstructionError as exc:
        print(f"invalid linked system: {exc}", file=sys.stderr)
        return EXIT_BAD_SCHEME
    _print_linked(system)
    return 0


TABLE_GRID = (
    ("q8cp", None, 1, None),
    ("q8cp", None, 2, None),
    ("q8cp", None, 3, None),
    ("heis", 3, 1, None),
    ("heis", 3, 2, None),
    ("heis", 5, 1, None),
    ("ea", 2, 1, 1),
    ("ea", 3, 1, 1),
    ("ea", 4, 1, 2),
    ("ea", 9, 1, 1),
)

TABLES_ORDER_LIMIT = 512


def _point_label(family, q, r, j) -> str:
    bits = [family]
    if q is not None:
        bits.append(f"q={q}")
    if r is not None:
        bits.append(f"r={r}")
    if j is not None:
        bits.append(f"j={j}")
    return " ".join(bits)


def _scheme_order(family, q, r, j) -> int:
    if family == "q8cp":
        return 3 * 2 ** (2 * r + 1)
    if family == "heis":
        return q ** (2 * r + 1) * (q + 1)
    p, _ = prime_power(q)
    return q ** (2 * r + 1) * p ** j


def cmd_tables(args) -> int:
    failures = 0
    for family, q, r, j in TABLE_GRID:
        label = _point_label(family, q, r, j)
        try:
            constructions.table1_params(family, q, r, j)
        except ConstructionError as exc:
            print(f"{label}: SKIP ({exc})")
            continue
        order = _scheme_order(family, q, r, j)
        if order > TABLES_ORDER_LIMIT:
            print(f"{label}: SKIP (scheme order {order} > "
                  f"{TABLES_ORDER_LIMIT})")
            continue
        try:
            con = constructions.construct_family(
                family, q=q, r=r, j=j, max_space=args.max_search)
        except ConstructionError as exc:
            print(f"{label}: SKIP ({exc})")
            continue
        bundle = higmanian.verdict_bundle(con.result.scheme, seed=args.seed)
        ok = (con.table1_match and con.table2_match and con.associate_match
              and bundle.consistent and bundle.uniform)
        status = "match" if ok else "MISMATCH"
        print(f"{label}: {status}  linked {con.system.params} "
              f"(formula {con.table1_expected})  scheme "
              f"{con.result.detection.params.astuple()} "
              f"(formula {con.table2_expected.astuple()})  "
              f"group {con.result.product_group.name} order "
              f"{con.result.product_group.order}  uniform={bundle.uniform}")
        if not ok:
            failures += 1
    return 0 if not failures else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="higman",
        description="Construct and analyze Higmanian association schemes.")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="analyze a scheme file")
    pa.add_argument("file")
    pa.add_argument("--json", action="store_true")
    pa.add_argument("--oracle", action="store_true",
                    help="cross-check exact spectra numerically")
    pa.add_argument("--no-strict-higmanian", action="store_true",
                    help="analyze schemes with extra nontrivial parabolics")
    pa.add_argument("--seed", type=int, default=0)
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("construct", help="build a family instance")
    pc.add_argument("family", help="q8cp | heis | ea")
    pc.add_argument("params", type=int, nargs="*")
    pc.add_argument("-o", "--output")
    pc.add_argument("--max-search", type=int, default=1 << 24)
    pc.set_defaults(func=cmd_construct)

    pr = sub.add_parser("search-rds", help="enumerate semiregular RDSs")
    pr.add_argument("groupspec")
    pr.add_argument("forbidden", help="'center' or comma-separated indices")
    pr.add_argument("--max-search", type=int, default=1 << 24)
    pr.set_defaults(func=cmd_search_rds)

    pl = sub.add_parser("search-linked-system",
                        help="find a closed linked system")
    pl.add_argument("groupspec")
    pl.add_argument("forbidden")
    pl.add_argument("w", type=int)
    pl.add_argument("-o", "--output")
    pl.add_argument("--max-search", type=int, default=1 << 24)
    pl.set_defaults(func=cmd_search_linked)

    pv = sub.add_parser("verify-linked", help="verify a linked-system file")
    pv.add_argument("file")
    pv.set_defaults(func=cmd_verify_linked)

    pt = sub.add_parser("tables", help="reproduce the parameter tables")
    pt.add_argument("--max-search", type=int, default=1 << 24)
    pt.add_argument("--seed", type=int, default=0)
    pt.set_defaults(func=cmd_tables)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
