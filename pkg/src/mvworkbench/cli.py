"""Command line surface for the workbench.

Subcommands: compile (formula source to a piecewise linear function
document), check-sss (strong semisimplicity verdict for a closed set),
ideal-member (multiplier search for f against the principal ideal of g),
tangent-scan (per-sequence tangent lines with optional SVG), and verify
(re-run the exact checks recorded in emitted certificates, without any
re-search).

The first stdout line of every command and the exit codes are a stable
machine contract:

    0  success / SSS / MEMBER / all certificates verified
    1  NOT-SSS / NOT-MEMBER / a certificate failed verification
    2  syntax or validation error in an input file
    3  arity error
    4  UNKNOWN verdict
    5  the set description is empty
    6  SVG requested for a set that is not two-dimensional

WORKBENCH_THREADS (integer >= 1) caps the worker threads used for batch
per-sequence scanning; results are merged in input order, so the output
does not depend on the thread count.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from mvworkbench import textdoc
from mvworkbench.closedsets import ClosedSetDesc, DescriptionError, Trivalent
from mvworkbench.decide import (
    DEFAULT_CAP,
    DOMINANCE_KMAX,
    DominanceTable,
    NotSssWitness,
    decide_sss,
    ideal_membership,
    verify_fact_chain,
)
from mvworkbench.formulas import ArityError, FormulaError, parse as parse_formula
from mvworkbench.mcnaughton import (
    CalculusError,
    ConstructionError,
    PLFunction,
    ZeroLocus,
    compile_formula,
    pl_equal,
    pl_leq,
    pl_violation,
    truncated_multiple,
    zeroset,
)
from mvworkbench.polytopes import Polytope
from mvworkbench.rationals import (
    dot,
    format_point,
    format_rational,
    norm_sq,
    parse_rational,
    sub,
)
from mvworkbench.svgplot import render_scene
from mvworkbench.tangents import (
    DEFAULT_LAMBDA_MAX,
    TangentWitness,
    is_outgoing,
    limit_direction,
)
from mvworkbench.textdoc import (
    CoverCert,
    DocumentError,
    EmptySetError,
    MembershipCert,
    Record,
    WitnessCert,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_ARITY = 3
EXIT_UNKNOWN = 4
EXIT_EMPTY = 5
EXIT_SVG = 6

SEQUENCE_SAMPLE = 1000


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _thread_count() -> int:
    raw = os.environ.get("WORKBENCH_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise CliError(
            f"WORKBENCH_THREADS must be an integer >= 1, got {raw!r}", EXIT_PARSE
        ) from None
    if n < 1:
        raise CliError(f"WORKBENCH_THREADS must be >= 1, got {n}", EXIT_PARSE)
    return n


def _map_ordered(fn, items):
    """Apply fn to items, fanning out when WORKBENCH_THREADS allows it."""
    items = list(items)
    threads = _thread_count()
    if threads == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


# --- input loading -----------------------------------------------------------


def _read_document(path: str):
    try:
        return textdoc.read_document(path)
    except FileNotFoundError:
        raise CliError(f"{path}: no such file", EXIT_PARSE) from None
    except EmptySetError as e:
        raise CliError(f"{path}: {e}", EXIT_EMPTY) from None
    except DocumentError as e:
        raise CliError(f"{path}: {e}", EXIT_PARSE) from None


def _load_set(path: str) -> ClosedSetDesc:
    records = _read_document(path)
    rec = _single(records, "closedset", path)
    return rec.payload


def _single(records, rtype: str, path: str) -> Record:
    try:
        return textdoc.single_record(records, rtype, path)
    except DocumentError as e:
        raise CliError(str(e), EXIT_PARSE) from None


def _load_function(path: str, arity: int) -> PLFunction:
    """A plfunction document, or a formula document compiled at its arity."""
    records = _read_document(path)
    funcs = [rec for rec in records if rec.rtype == "plfunction"]
    if len(funcs) == 1:
        f = funcs[0].payload
    elif not funcs:
        rec = _single(records, "formula", path)
        f = compile_formula(rec.payload.term, rec.payload.arity)
    else:
        raise CliError(
            f"{path}: expected one plfunction or formula record", EXIT_PARSE
        )
    if f.arity != arity:
        raise CliError(
            f"{path}: function has arity {f.arity}, the set has arity {arity}",
            EXIT_ARITY,
        )
    return f


# --- compile -----------------------------------------------------------------


def _cmd_compile(args) -> int:
    if args.arity < 1:
        raise CliError(f"arity must be >= 1, got {args.arity}", EXIT_ARITY)
    try:
        with open(args.formula, encoding="utf-8") as fh:
            source = fh.read()
    except FileNotFoundError:
        raise CliError(f"{args.formula}: no such file", EXIT_PARSE) from None
    try:
        term = parse_formula(source, max_arity=args.arity)
    except ArityError as e:
        raise CliError(str(e), EXIT_ARITY) from None
    except FormulaError as e:
        raise CliError(str(e), EXIT_PARSE) from None
    f = compile_formula(term, args.arity)
    print(f"COMPILED arity={f.arity} cells={len(f.pieces)}")
    if args.out:
        textdoc.write_document(args.out, (textdoc.plfunction_record("compiled", f),))
        print(f"wrote: {args.out}")
    return EXIT_OK


# --- check-sss ---------------------------------------------------------------


def _witness_records(X: ClosedSetDesc, w: NotSssWitness) -> tuple[Record, ...]:
    cert = WitnessCert(
        set_name="set",
        g_name="g",
        j_name="j",
        x=w.x,
        u=w.u,
        lam=w.lam,
        sequence_index=w.sequence_index,
        rows=tuple(w.dominance),
    )
    return (
        textdoc.closedset_record("set", X),
        textdoc.plfunction_record("g", w.g),
        textdoc.plfunction_record("j", w.j),
        textdoc.witness_certificate_record("witness", cert),
    )


def _emit_svg(path: str, X: ClosedSetDesc, report) -> None:
    if X.arity != 2:
        raise CliError(
            f"SVG output needs a two-dimensional set, this one has arity {X.arity}",
            EXIT_SVG,
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_scene(X, report))


def _cmd_check_sss(args) -> int:
    X = _load_set(args.set)
    kmax = min(args.kmax, args.cap)
    verdict = decide_sss(X, kmax=kmax, lam_max=args.lam_max)
    if verdict.verdict == "sss":
        print("SSS")
    elif verdict.verdict == "not_sss":
        print("NOT-SSS")
    else:
        print("UNKNOWN")
    print(f"reason: {verdict.reason}")
    w = verdict.witness
    if w is not None:
        u = "(" + ",".join(str(c) for c in w.u) + ")"
        print(
            f"witness: x={format_point(w.x)} u={u} "
            f"λ={format_rational(w.lam)} sequence={w.sequence_index}"
        )
        indices = [row.index for row in w.dominance if row.index is not None]
        print(
            f"dominance: {len(w.dominance)} rows, max index "
            f"{max(indices) if indices else '-'}"
        )
    for blocker in verdict.blockers:
        print(f"blocker: {blocker}")
    if args.emit_witness:
        if w is None:
            print("witness-file: (no witness to emit)")
        else:
            textdoc.write_document(args.emit_witness, _witness_records(X, w))
            print(f"witness-file: {args.emit_witness}")
    if args.svg:
        _emit_svg(args.svg, X, verdict.report)
        print(f"svg-file: {args.svg}")
    if verdict.verdict == "sss":
        return EXIT_OK
    if verdict.verdict == "not_sss":
        return EXIT_NEGATIVE
    return EXIT_UNKNOWN


# --- ideal-member ------------------------------------------------------------


def _membership_records(
    X: ClosedSetDesc, f: PLFunction, g: PLFunction, res
) -> tuple[Record, ...]:
    cert = MembershipCert(
        set_name="set",
        f_name="f",
        g_name="g",
        verdict=res.verdict,
        k=res.k,
        multiple_name="multiple" if res.multiple is not None else None,
        rows=tuple(res.dominance) if res.dominance is not None else (),
        reason=res.reason,
    )
    records = [
        textdoc.closedset_record("set", X),
        textdoc.plfunction_record("f", f),
        textdoc.plfunction_record("g", g),
    ]
    if res.multiple is not None:
        records.append(textdoc.plfunction_record("multiple", res.multiple))
    records.append(textdoc.membership_certificate_record("membership", cert))
    return tuple(records)


def _cmd_ideal_member(args) -> int:
    X = _load_set(args.set)
    f = _load_function(args.f, X.arity)
    g = _load_function(args.g, X.arity)
    res = ideal_membership(f, g, X, cap=args.cap)
    if res.verdict == "member":
        print(f"MEMBER k={res.k}")
    elif res.verdict == "not_member":
        print("NOT-MEMBER")
    else:
        print("UNKNOWN")
        print(f"reason: {res.reason}")
    records = _membership_records(X, f, g, res)
    if args.emit_certificate:
        textdoc.write_document(args.emit_certificate, records)
        print(f"certificate: {args.emit_certificate}")
    else:
        print("certificate: -")
        sys.stdout.write(textdoc.document_text(records))
    if res.verdict == "member":
        return EXIT_OK
    if res.verdict == "not_member":
        return EXIT_NEGATIVE
    return EXIT_UNKNOWN


# --- tangent-scan ------------------------------------------------------------


def _poly_str(coeffs: tuple[int, ...]) -> str:
    """Render an integer polynomial in λ, highest degree first."""
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if terms else "")
        mag = abs(c)
        if power == 0:
            body = str(mag)
        else:
            var = "λ" if power == 1 else f"λ^{power}"
            body = var if mag == 1 else f"{mag}{var}"
        terms.append(sign + body)
    return "".join(terms) if terms else "0"


def _scan_sequence(X: ClosedSetDesc, lam_max: Fraction, index: int) -> TangentWitness:
    seq = X.sequences[index]
    direction = limit_direction(seq)
    outgoing = None
    if direction.kind == "rational":
        uvec = tuple(Fraction(c) for c in direction.vector)
        outgoing = is_outgoing(X, seq.limit, uvec, lam_max)
    return TangentWitness(index, seq.limit, direction, outgoing)


def _scan_line(tw: TangentWitness) -> str:
    head = f"x={format_point(tw.x)}"
    direction = tw.direction
    if direction.kind == "irrational":
        return f"{head} IRRATIONAL (minimal poly {_poly_str(direction.minimal_poly)})"
    if direction.kind == "undetermined":
        return f"{head} DIRECTION-UNDETERMINED ({direction.reason})"
    u = "(" + ",".join(str(c) for c in direction.vector) + ")"
    outgoing = tw.outgoing
    if outgoing.kind == "yes":
        return f"{head} u={u} RATIONAL OUTGOING λ={format_rational(outgoing.lam)}"
    if outgoing.kind == "no":
        return f"{head} u={u} RATIONAL NOT-OUTGOING (segment blocked)"
    if outgoing.kind == "all_aligned":
        return f"{head} u={u} RATIONAL NOT-OUTGOING (all terms aligned)"
    return f"{head} u={u} RATIONAL UNDETERMINED ({outgoing.reason})"


def _cmd_tangent_scan(args) -> int:
    X = _load_set(args.set)
    if args.svg and X.arity != 2:
        raise CliError(
            f"SVG output needs a two-dimensional set, this one has arity {X.arity}",
            EXIT_SVG,
        )
    witnesses = _map_ordered(
        lambda i: _scan_sequence(X, args.lam_max, i), range(len(X.sequences))
    )
    if not witnesses:
        print("no sequence witnesses")
    for tw in witnesses:
        print(_scan_line(tw))
    if args.svg:
        _emit_svg(args.svg, X, witnesses)
        print(f"svg-file: {args.svg}")
    return EXIT_OK


# --- verify ------------------------------------------------------------------


def _resolve(records, name: str, rtype: str, problems: list[str]):
    try:
        return textdoc.find_record(records, name, rtype).payload
    except DocumentError as e:
        problems.append(str(e))
        return None


def _kg_value(g: PLFunction, k: int, p) -> Fraction:
    return min(Fraction(1), k * g.value(p))


def _check_rows(
    rows, X: ClosedSetDesc, f: PLFunction, g: PLFunction, problems: list[str]
) -> None:
    """Exact re-check of dominance rows: provenance, values, and violation."""
    for row in rows:
        where = f"row k={row.k}"
        if row.index is None:
            if X.membership(row.point) is not Trivalent.YES:
                problems.append(f"{where}: point not certified in the set")
                continue
        else:
            hits = [
                seq
                for seq in X.sequences
                if row.index >= seq.first_index
                and seq.point_at(row.index) == row.point
            ]
            if not hits:
                problems.append(f"{where}: no sequence has this point at i={row.index}")
                continue
        fv = f.value(row.point)
        kgv = _kg_value(g, row.k, row.point)
        if fv != row.f_value:
            problems.append(f"{where}: recorded f value {row.f_value}, actual {fv}")
        if kgv != row.kg_value:
            problems.append(f"{where}: recorded kg value {row.kg_value}, actual {kgv}")
        if not fv > kgv:
            problems.append(f"{where}: f does not exceed min(1, k*g) at the point")


def _check_zero_sets(cert: WitnessCert, g: PLFunction, j: PLFunction) -> list[str]:
    """zeroset(g) must be exactly the witness segment, zeroset(j) exactly {x}."""
    problems: list[str] = []
    end = tuple(xi + cert.lam * Fraction(ui) for xi, ui in zip(cert.x, cert.u))
    segment = Polytope.from_points((cert.x, end))
    covered: list[tuple[Fraction, Fraction]] = []
    for part in zeroset(g).parts:
        if not segment.contains_polytope(part):
            problems.append("zeroset(g) leaves the witness segment")
            break
        clipped = part.clip_segment(cert.x, end)
        if clipped:
            ts = sorted(_segment_param(p, cert.x, end) for p in clipped)
            covered.append((ts[0], ts[-1]))
    else:
        reach = Fraction(0)
        for lo, hi in sorted(covered):
            if lo > reach:
                break
            reach = max(reach, hi)
        if reach < 1:
            problems.append("zeroset(g) does not cover the witness segment")
    zj = zeroset(j).parts
    if not zj or any(not (p.is_point() and p.vertices[0] == cert.x) for p in zj):
        problems.append("zeroset(j) is not exactly the base point")
    return problems


def _segment_param(p, a, b) -> Fraction:
    d = sub(b, a)
    return dot(sub(p, a), d) / norm_sq(d)


def _verify_witness(cert: WitnessCert, records) -> list[str]:
    problems: list[str] = []
    X = _resolve(records, cert.set_name, "closedset", problems)
    g = _resolve(records, cert.g_name, "plfunction", problems)
    j = _resolve(records, cert.j_name, "plfunction", problems)
    if problems:
        return problems
    if not 0 <= cert.sequence_index < len(X.sequences):
        return [f"sequence index {cert.sequence_index} out of range"]
    ks = sorted(row.k for row in cert.rows)
    if ks != list(range(1, len(ks) + 1)):
        problems.append("dominance rows do not cover k = 1..kmax")
    problems.extend(_check_zero_sets(cert, g, j))
    _check_rows(cert.rows, X, j, g, problems)
    witness = NotSssWitness(
        x=cert.x,
        u=cert.u,
        lam=cert.lam,
        g=g,
        j=j,
        dominance=DominanceTable(cert.rows),
        sequence_index=cert.sequence_index,
    )
    for check in verify_fact_chain(witness, X):
        if not check.passed:
            problems.append(f"fact {check.name} failed: {check.detail}")
    return problems


def _verify_membership(cert: MembershipCert, records) -> list[str]:
    problems: list[str] = []
    X = _resolve(records, cert.set_name, "closedset", problems)
    f = _resolve(records, cert.f_name, "plfunction", problems)
    g = _resolve(records, cert.g_name, "plfunction", problems)
    if problems:
        return problems
    if cert.verdict == "member":
        if cert.k is None or cert.multiple_name is None:
            return ["member certificate needs k and the multiple record"]
        multiple = _resolve(records, cert.multiple_name, "plfunction", problems)
        if problems:
            return problems
        if not pl_equal(multiple, truncated_multiple(g, cert.k)):
            problems.append("multiple record is not min(1, k*g)")
        if X.polyparts and not pl_leq(
            f, multiple, region=ZeroLocus(X.arity, X.polyparts)
        ):
            problems.append("f exceeds the multiple on a polytope part")
        for seq in X.sequences:
            pts = [seq.limit] + [
                seq.point_at(i)
                for i in range(seq.first_index, seq.first_index + SEQUENCE_SAMPLE)
            ]
            for p in pts:
                if f.value(p) > multiple.value(p):
                    problems.append(
                        f"f exceeds the multiple at {format_point(p)}"
                    )
                    break
    elif cert.verdict == "not_member":
        if not cert.rows:
            problems.append("not-member certificate has no dominance rows")
        _check_rows(cert.rows, X, f, g, problems)
    return problems


def _verify_cover(cert: CoverCert, records) -> list[str]:
    problems: list[str] = []
    X = _resolve(records, cert.set_name, "closedset", problems)
    f = _resolve(records, cert.f_name, "plfunction", problems)
    g = _resolve(records, cert.g_name, "plfunction", problems)
    if problems:
        return problems
    if X.arity != 1:
        return ["cover certificates apply to one-dimensional sets"]
    if cert.entries and cert.m != max(e.multiplier for e in cert.entries):
        problems.append("recorded m is not the largest entry multiplier")
    for e in cert.entries:
        tag = f"entry at {format_point(e.x)}"
        if not e.lo < e.x[0] < e.hi:
            problems.append(f"{tag}: anchor outside its window")
            continue
        if X.membership(e.x) is not Trivalent.YES:
            problems.append(f"{tag}: anchor not certified in the set")
        kg = truncated_multiple(g, e.multiplier)
        wlo, whi = max(e.lo, Fraction(0)), min(e.hi, Fraction(1))
        if wlo > whi:
            continue
        window = Polytope.from_points(((wlo,), (whi,)))
        for part in X.polyparts:
            piece = part.intersect(window)
            if piece is None:
                continue
            bad = pl_violation(f, kg, region=ZeroLocus(1, (piece,)))
            if bad is None:
                continue
            if e.lo < bad[0] < e.hi or not piece.is_point():
                problems.append(
                    f"{tag}: f exceeds min(1, m*g) at {format_point(bad)}"
                )
    # Pointwise claim at every enumerable set point, then interval coverage.
    # One representative failure suffices for the verdict.
    for ep in X.enumerate_points(SEQUENCE_SAMPLE):
        p = ep.point
        holders = [e for e in cert.entries if e.lo < p[0] < e.hi]
        if not holders:
            problems.append(f"set point {format_point(p)} is in no entry window")
            break
        if all(f.value(p) > _kg_value(g, e.multiplier, p) for e in holders):
            problems.append(
                f"f exceeds min(1, m*g) at {format_point(p)} in every window"
            )
            break
    for part in X.polyparts:
        xs = [v[0] for v in part.vertices]
        reach, end = min(xs), max(xs)
        for _ in range(len(cert.entries) + 1):
            if reach > end:
                break
            inside = [e for e in cert.entries if e.lo < reach < e.hi]
            if not inside:
                problems.append(
                    f"interval point {format_rational(reach)} is uncovered"
                )
                break
            reach = max(e.hi for e in inside)
    return problems


def _cmd_verify(args) -> int:
    records = _read_document(args.document)
    certs = [rec for rec in records if rec.rtype == "certificate"]
    if not certs:
        print("no certificates to verify")
        return EXIT_OK
    failed = False
    for rec in certs:
        payload = rec.payload
        if isinstance(payload, WitnessCert):
            problems = _verify_witness(payload, records)
        elif isinstance(payload, MembershipCert):
            if payload.verdict == "unknown":
                print(f"SKIPPED {rec.name}: unknown verdicts make no exact claim")
                continue
            problems = _verify_membership(payload, records)
        elif isinstance(payload, CoverCert):
            problems = _verify_cover(payload, records)
        else:
            problems = [f"unsupported certificate payload {type(payload).__name__}"]
        if problems:
            failed = True
            print(f"FAILED {rec.name}: {problems[0]}")
            for extra in problems[1:8]:
                print(f"    {extra}")
            if len(problems) > 8:
                print(f"    ... and {len(problems) - 8} more problems")
        else:
            print(f"VERIFIED {rec.name}")
    return EXIT_NEGATIVE if failed else EXIT_OK


# --- argument parsing ----------------------------------------------------------


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational literal {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvwb",
        description="Exact workbench for piecewise linear logic over the unit cube",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a formula to a plfunction document")
    p.add_argument("--formula", required=True, help="file with the formula source")
    p.add_argument("--arity", required=True, type=int, help="number of variables")
    p.add_argument("--out", help="write the compiled plfunction document here")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("check-sss", help="decide strong semisimplicity of a set")
    p.add_argument("--set", required=True, help="closedset document")
    p.add_argument(
        "--kmax",
        type=int,
        default=DOMINANCE_KMAX,
        help="dominance table depth for a NOT-SSS witness",
    )
    p.add_argument(
        "--cap",
        type=int,
        default=DEFAULT_CAP,
        help="largest multiplier any certificate may use",
    )
    p.add_argument(
        "--lam-max",
        type=_rational_arg,
        default=DEFAULT_LAMBDA_MAX,
        help="longest tangent segment the analysis will certify",
    )
    p.add_argument("--emit-witness", help="write the full witness document here")
    p.add_argument("--svg", help="draw the set and tangents (arity 2 only)")
    p.set_defaults(func=_cmd_check_sss)

    p = sub.add_parser("ideal-member", help="decide f <= min(1, k*g) on the set")
    p.add_argument("--f", required=True, help="plfunction or formula document")
    p.add_argument("--g", required=True, help="plfunction or formula document")
    p.add_argument("--set", required=True, help="closedset document")
    p.add_argument(
        "--cap", type=int, default=DEFAULT_CAP, help="multiplier search cap"
    )
    p.add_argument(
        "--emit-certificate",
        help="write the certificate document here instead of stdout",
    )
    p.set_defaults(func=_cmd_ideal_member)

    p = sub.add_parser("tangent-scan", help="tangent verdicts for every sequence")
    p.add_argument("--set", required=True, help="closedset document")
    p.add_argument(
        "--lam-max",
        type=_rational_arg,
        default=DEFAULT_LAMBDA_MAX,
        help="longest tangent segment the analysis will certify",
    )
    p.add_argument("--svg", help="draw the set and tangents (arity 2 only)")
    p.set_defaults(func=_cmd_tangent_scan)

    p = sub.add_parser("verify", help="re-check the exact claims of certificates")
    p.add_argument("document", help="workbench document with certificate records")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (DescriptionError, DocumentError, CalculusError, ConstructionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
