"""Workbench document format: typed records in a line-based UTF-8 text file.

A document starts with the header line "workbench 1" and holds a list of
named records. Each record opens with "<type> <name>" at column zero and
continues with two-space indented "key: value" lines; blank lines separate
records and full-line "#" comments are skipped. Record types are formula,
plfunction, closedset, cone, verdict, and certificate. Rationals are
written "p/q" with an optional sign on p (bare "p" means p/1), points as
"(a,b,...)", integer lists space-separated, and integer polynomials as
space-separated coefficients in ascending degree with "z" for the zero
polynomial.

Printing is canonical and parsing is strict: unknown record types or keys
are rejected with the offending line number, and parse(print(records))
returns equal records. Certificates reference the functions and the set
they talk about by record name, so a certificate travels in one document
with everything needed to re-verify it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from mvworkbench.closedsets import (
    ClosedSetDesc,
    DescriptionError,
    LinearRecurrenceSchema,
    ProbeSequence,
    RationalFunctionSchema,
)
from mvworkbench.decide import CoverEntry, DominanceRow
from mvworkbench.formulas import Formula, FormulaError, parse as parse_formula
from mvworkbench.formulas import serialize as serialize_formula
from mvworkbench.mcnaughton import AffineMap, CalculusError, PLFunction, validate
from mvworkbench.polytopes import Polytope
from mvworkbench.rationals import (
    Point,
    format_point,
    format_rational,
    parse_point,
    parse_rational,
)
from mvworkbench.simplicial import Complex, Simplex
from mvworkbench.tangents import Cone

HEADER = "workbench 1"

RECORD_TYPES = ("formula", "plfunction", "closedset", "cone", "verdict", "certificate")

CERT_WITNESS = "not-sss-witness"
CERT_MEMBERSHIP = "ideal-membership"
CERT_COVER = "cover-1d"


class DocumentError(ValueError):
    """A document that cannot be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class EmptySetError(DocumentError):
    """A closedset record with no polytopes and no sequences."""


@dataclass(frozen=True)
class FormulaRecord:
    arity: int
    term: Formula


@dataclass(frozen=True)
class VerdictRecord:
    verdict: str
    reason: str


@dataclass(frozen=True)
class WitnessCert:
    """Serialized NotSssWitness with g, j, and the set referenced by name."""

    set_name: str
    g_name: str
    j_name: str
    x: Point
    u: tuple[int, ...]
    lam: Fraction
    sequence_index: int
    rows: tuple[DominanceRow, ...]


@dataclass(frozen=True)
class MembershipCert:
    """Serialized IdealMembershipResult; the multiple travels as a record."""

    set_name: str
    f_name: str
    g_name: str
    verdict: str
    k: int | None = None
    multiple_name: str | None = None
    rows: tuple[DominanceRow, ...] = ()
    reason: str | None = None


@dataclass(frozen=True)
class CoverCert:
    """Serialized 1-D cover certificate for f against g on the named set."""

    set_name: str
    f_name: str
    g_name: str
    m: int
    entries: tuple[CoverEntry, ...]


Payload = object


@dataclass(frozen=True)
class Record:
    rtype: str
    name: str
    payload: Payload
    line: int = field(default=0, compare=False)


# --- scalar syntax ---------------------------------------------------------


def _format_ints(vals: Sequence[int]) -> str:
    return " ".join(str(v) for v in vals)


def _parse_ints(text: str, line: int) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError:
        raise DocumentError(f"expected integers, got {text!r}", line) from None


def _format_poly(p: Sequence[int]) -> str:
    return _format_ints(p) if p else "z"


def _parse_poly(text: str, line: int) -> tuple[int, ...]:
    s = text.strip()
    if s == "z":
        return ()
    return _parse_ints(s, line)


def _format_polys(ps: Sequence[Sequence[int]]) -> str:
    return " ; ".join(_format_poly(p) for p in ps)


def _parse_polys(text: str, line: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_parse_poly(part, line) for part in text.split(";"))


def _parse_point_checked(text: str, line: int) -> Point:
    try:
        return parse_point(text)
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError(str(e), line) from None


def _parse_rational_checked(text: str, line: int) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"bad rational literal {text!r}", line) from None


def _parse_int_checked(text: str, line: int) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise DocumentError(f"expected an integer, got {text!r}", line) from None


def _split_fields(text: str, line: int, want: Sequence[str]) -> list[str]:
    """Split "a ... | b ... | c ..." and strip the expected leading words."""
    parts = [p.strip() for p in text.split("|")]
    if len(parts) != len(want):
        raise DocumentError(
            f"expected {len(want)} '|'-separated fields ({', '.join(want)})", line
        )
    out = []
    for part, head in zip(parts, want):
        if not part.startswith(head + " ") and part != head:
            raise DocumentError(f"field must start with {head!r}: {part!r}", line)
        out.append(part[len(head) :].strip())
    return out


# --- record writers --------------------------------------------------------


def formula_record(name: str, arity: int, term: Formula) -> Record:
    return Record("formula", name, FormulaRecord(arity, term))


def plfunction_record(name: str, f: PLFunction) -> Record:
    return Record("plfunction", name, f)


def closedset_record(name: str, X: ClosedSetDesc) -> Record:
    return Record("closedset", name, X)


def cone_record(name: str, cone: Cone) -> Record:
    return Record("cone", name, cone)


def verdict_record(name: str, verdict: str, reason: str) -> Record:
    return Record("verdict", name, VerdictRecord(verdict, reason))


def witness_certificate_record(
    name: str, cert: WitnessCert
) -> Record:
    return Record("certificate", name, cert)


def membership_certificate_record(name: str, cert: MembershipCert) -> Record:
    return Record("certificate", name, cert)


def cover_certificate_record(name: str, cert: CoverCert) -> Record:
    return Record("certificate", name, cert)


def _emit_formula(out: list[str], rec: FormulaRecord) -> None:
    out.append(f"  arity: {rec.arity}")
    out.append(f"  term: {serialize_formula(rec.term)}")


def _emit_plfunction(out: list[str], f: PLFunction) -> None:
    out.append(f"  arity: {f.arity}")
    for cell, piece in zip(f.complex.cells, f.pieces):
        verts = " ".join(format_point(v) for v in cell.vertices)
        row = _format_ints(piece.coeffs + (piece.const,))
        out.append(f"  cell: {verts} | {row}")


def _emit_sequence(out: list[str], seq: ProbeSequence) -> None:
    head = f"limit {format_point(seq.limit)} | first {seq.first_index}"
    sch = seq.schema
    if isinstance(sch, RationalFunctionSchema):
        out.append(
            "  sequence: ratfun | "
            + head
            + f" | num {_format_polys(sch.numerators)}"
            + f" | den {_format_polys(sch.denominators)}"
        )
    else:
        out.append(
            "  sequence: linrec | "
            + head
            + f" | ncoeffs {_format_ints(sch.numerator_coeffs)}"
            + f" | ninits {_format_polys(sch.numerator_inits)}"
            + f" | dcoeffs {_format_ints(sch.denominator_coeffs)}"
            + f" | dinits {_format_ints(sch.denominator_inits)}"
        )


def _emit_closedset(out: list[str], X: ClosedSetDesc) -> None:
    out.append(f"  arity: {X.arity}")
    for part in X.polyparts:
        out.append("  polytope: " + " ".join(format_point(v) for v in part.vertices))
    for seq in X.sequences:
        _emit_sequence(out, seq)


def _emit_cone(out: list[str], cone: Cone) -> None:
    out.append(f"  apex: {format_point(cone.apex)}")
    out.append(f"  axis: {format_point(cone.axis)}")
    out.append(f"  height: {format_rational(cone.height)}")
    out.append(f"  cos: {format_rational(cone.cos_half_angle)}")


def _emit_verdict(out: list[str], rec: VerdictRecord) -> None:
    out.append(f"  verdict: {rec.verdict}")
    out.append(f"  reason: {rec.reason}")


def _emit_row(out: list[str], row: DominanceRow) -> None:
    i = "-" if row.index is None else str(row.index)
    out.append(
        f"  row: k {row.k} | i {i} | w {format_point(row.point)}"
        f" | f {format_rational(row.f_value)} | kg {format_rational(row.kg_value)}"
    )


def _emit_certificate(out: list[str], cert: Payload) -> None:
    if isinstance(cert, WitnessCert):
        out.append(f"  kind: {CERT_WITNESS}")
        out.append(f"  set: {cert.set_name}")
        out.append(f"  g: {cert.g_name}")
        out.append(f"  j: {cert.j_name}")
        out.append(f"  x: {format_point(cert.x)}")
        out.append(f"  u: {_format_ints(cert.u)}")
        out.append(f"  lambda: {format_rational(cert.lam)}")
        out.append(f"  sequence-index: {cert.sequence_index}")
        for row in cert.rows:
            _emit_row(out, row)
    elif isinstance(cert, MembershipCert):
        out.append(f"  kind: {CERT_MEMBERSHIP}")
        out.append(f"  set: {cert.set_name}")
        out.append(f"  f: {cert.f_name}")
        out.append(f"  g: {cert.g_name}")
        out.append(f"  verdict: {cert.verdict}")
        if cert.k is not None:
            out.append(f"  k: {cert.k}")
        if cert.multiple_name is not None:
            out.append(f"  multiple: {cert.multiple_name}")
        if cert.reason is not None:
            out.append(f"  reason: {cert.reason}")
        for row in cert.rows:
            _emit_row(out, row)
    elif isinstance(cert, CoverCert):
        out.append(f"  kind: {CERT_COVER}")
        out.append(f"  set: {cert.set_name}")
        out.append(f"  f: {cert.f_name}")
        out.append(f"  g: {cert.g_name}")
        out.append(f"  m: {cert.m}")
        for e in cert.entries:
            out.append(
                f"  entry: x {format_point(e.x)} | lo {format_rational(e.lo)}"
                f" | hi {format_rational(e.hi)} | m {e.multiplier} | tag {e.tag}"
            )
    else:
        raise DocumentError(f"unserializable certificate payload {type(cert)!r}")


def document_text(records: Sequence[Record]) -> str:
    out = [HEADER]
    for rec in records:
        out.append("")
        out.append(f"{rec.rtype} {rec.name}")
        if rec.rtype == "formula":
            _emit_formula(out, rec.payload)
        elif rec.rtype == "plfunction":
            _emit_plfunction(out, rec.payload)
        elif rec.rtype == "closedset":
            _emit_closedset(out, rec.payload)
        elif rec.rtype == "cone":
            _emit_cone(out, rec.payload)
        elif rec.rtype == "verdict":
            _emit_verdict(out, rec.payload)
        elif rec.rtype == "certificate":
            _emit_certificate(out, rec.payload)
        else:
            raise DocumentError(f"unknown record type {rec.rtype!r}")
    out.append("")
    return "\n".join(out)


# --- record parsers ---------------------------------------------------------


@dataclass
class _Raw:
    rtype: str
    name: str
    line: int
    fields: list[tuple[str, str, int]]  # (key, value, line)

    def one(self, key: str) -> tuple[str, int]:
        hits = [(v, ln) for k, v, ln in self.fields if k == key]
        if len(hits) != 1:
            raise DocumentError(
                f"record {self.name!r} needs exactly one {key!r} line", self.line
            )
        return hits[0]

    def opt(self, key: str) -> tuple[str, int] | None:
        hits = [(v, ln) for k, v, ln in self.fields if k == key]
        if len(hits) > 1:
            raise DocumentError(
                f"record {self.name!r} has repeated {key!r} line", self.line
            )
        return hits[0] if hits else None

    def many(self, key: str) -> list[tuple[str, int]]:
        return [(v, ln) for k, v, ln in self.fields if k == key]

    def check_keys(self, allowed: set[str]) -> None:
        for k, _, ln in self.fields:
            if k not in allowed:
                raise DocumentError(
                    f"unknown key {k!r} in {self.rtype} record", ln
                )


def _parse_formula_record(raw: _Raw) -> FormulaRecord:
    raw.check_keys({"arity", "term"})
    arity_text, aline = raw.one("arity")
    term_text, tline = raw.one("term")
    arity = _parse_int_checked(arity_text, aline)
    try:
        term = parse_formula(term_text, max_arity=arity)
    except FormulaError as e:
        raise DocumentError(str(e), tline) from None
    return FormulaRecord(arity, term)


def _parse_plfunction_record(raw: _Raw) -> PLFunction:
    raw.check_keys({"arity", "cell"})
    arity_text, aline = raw.one("arity")
    n = _parse_int_checked(arity_text, aline)
    pairs = []
    for text, ln in raw.many("cell"):
        left, bar, right = text.partition("|")
        if not bar:
            raise DocumentError("cell line needs 'vertices | coefficients'", ln)
        verts = [_parse_point_checked(tok, ln) for tok in left.split()]
        row = _parse_ints(right, ln)
        if len(row) != n + 1:
            raise DocumentError(f"coefficient row needs {n + 1} integers", ln)
        try:
            pairs.append((Simplex(verts), AffineMap(row[:-1], row[-1])))
        except (ValueError, CalculusError) as e:
            raise DocumentError(str(e), ln) from None
    if not pairs:
        raise DocumentError(f"plfunction {raw.name!r} has no cells", raw.line)
    pairs.sort(key=lambda cm: cm[0].vertices)
    try:
        f = PLFunction(Complex(n, [c for c, _ in pairs]), [m for _, m in pairs])
        validate(f)
    except (ValueError, CalculusError, AssertionError) as e:
        raise DocumentError(f"invalid plfunction {raw.name!r}: {e}", raw.line) from None
    return f


def _parse_sequence_line(text: str, ln: int) -> ProbeSequence:
    kind, bar, rest = text.partition("|")
    kind = kind.strip()
    if kind == "ratfun":
        limit_t, first_t, num_t, den_t = _split_fields(
            rest, ln, ("limit", "first", "num", "den")
        )
        schema = RationalFunctionSchema(
            numerators=_parse_polys(num_t, ln), denominators=_parse_polys(den_t, ln)
        )
    elif kind == "linrec":
        limit_t, first_t, nc_t, ni_t, dc_t, di_t = _split_fields(
            rest, ln, ("limit", "first", "ncoeffs", "ninits", "dcoeffs", "dinits")
        )
        schema = LinearRecurrenceSchema(
            numerator_coeffs=_parse_ints(nc_t, ln),
            numerator_inits=_parse_polys(ni_t, ln),
            denominator_coeffs=_parse_ints(dc_t, ln),
            denominator_inits=_parse_ints(di_t, ln),
        )
    else:
        raise DocumentError(f"unknown sequence schema {kind!r}", ln)
    return ProbeSequence(
        limit=_parse_point_checked(limit_t, ln),
        schema=schema,
        first_index=_parse_int_checked(first_t, ln),
    )


def _parse_closedset_record(raw: _Raw) -> ClosedSetDesc:
    raw.check_keys({"arity", "polytope", "sequence"})
    arity_text, aline = raw.one("arity")
    n = _parse_int_checked(arity_text, aline)
    parts = []
    for text, ln in raw.many("polytope"):
        verts = [_parse_point_checked(tok, ln) for tok in text.split()]
        if not verts:
            raise DocumentError("polytope line needs at least one vertex", ln)
        parts.append(Polytope.from_points(verts))
    try:
        seqs = [_parse_sequence_line(text, ln) for text, ln in raw.many("sequence")]
    except DescriptionError as e:
        raise DocumentError(str(e), raw.line) from None
    if not parts and not seqs:
        raise EmptySetError(f"closedset {raw.name!r} describes the empty set", raw.line)
    try:
        return ClosedSetDesc(n, tuple(parts), tuple(seqs))
    except DescriptionError as e:
        raise DocumentError(str(e), raw.line) from None


def _parse_cone_record(raw: _Raw) -> Cone:
    raw.check_keys({"apex", "axis", "height", "cos"})
    apex_t, al = raw.one("apex")
    axis_t, xl = raw.one("axis")
    h_t, hl = raw.one("height")
    c_t, cl = raw.one("cos")
    try:
        return Cone(
            apex=_parse_point_checked(apex_t, al),
            axis=_parse_point_checked(axis_t, xl),
            height=_parse_rational_checked(h_t, hl),
            cos_half_angle=_parse_rational_checked(c_t, cl),
        )
    except ValueError as e:
        raise DocumentError(str(e), raw.line) from None


def _parse_verdict_record(raw: _Raw) -> VerdictRecord:
    raw.check_keys({"verdict", "reason"})
    verdict, _ = raw.one("verdict")
    reason, _ = raw.one("reason")
    return VerdictRecord(verdict, reason)


def _parse_row(text: str, ln: int) -> DominanceRow:
    k_t, i_t, w_t, f_t, kg_t = _split_fields(text, ln, ("k", "i", "w", "f", "kg"))
    return DominanceRow(
        k=_parse_int_checked(k_t, ln),
        index=None if i_t == "-" else _parse_int_checked(i_t, ln),
        point=_parse_point_checked(w_t, ln),
        f_value=_parse_rational_checked(f_t, ln),
        kg_value=_parse_rational_checked(kg_t, ln),
    )


def _parse_certificate_record(raw: _Raw) -> Payload:
    kind, _ = raw.one("kind")
    if kind == CERT_WITNESS:
        raw.check_keys(
            {"kind", "set", "g", "j", "x", "u", "lambda", "sequence-index", "row"}
        )
        x_t, xl = raw.one("x")
        u_t, ul = raw.one("u")
        lam_t, ll = raw.one("lambda")
        si_t, sl = raw.one("sequence-index")
        return WitnessCert(
            set_name=raw.one("set")[0],
            g_name=raw.one("g")[0],
            j_name=raw.one("j")[0],
            x=_parse_point_checked(x_t, xl),
            u=_parse_ints(u_t, ul),
            lam=_parse_rational_checked(lam_t, ll),
            sequence_index=_parse_int_checked(si_t, sl),
            rows=tuple(_parse_row(text, ln) for text, ln in raw.many("row")),
        )
    if kind == CERT_MEMBERSHIP:
        raw.check_keys(
            {"kind", "set", "f", "g", "verdict", "k", "multiple", "reason", "row"}
        )
        k_field = raw.opt("k")
        mult = raw.opt("multiple")
        reason = raw.opt("reason")
        return MembershipCert(
            set_name=raw.one("set")[0],
            f_name=raw.one("f")[0],
            g_name=raw.one("g")[0],
            verdict=raw.one("verdict")[0],
            k=None if k_field is None else _parse_int_checked(*k_field),
            multiple_name=None if mult is None else mult[0],
            rows=tuple(_parse_row(text, ln) for text, ln in raw.many("row")),
            reason=None if reason is None else reason[0],
        )
    if kind == CERT_COVER:
        raw.check_keys({"kind", "set", "f", "g", "m", "entry"})
        entries = []
        for text, ln in raw.many("entry"):
            x_t, lo_t, hi_t, m_t, tag = _split_fields(
                text, ln, ("x", "lo", "hi", "m", "tag")
            )
            entries.append(
                CoverEntry(
                    x=_parse_point_checked(x_t, ln),
                    lo=_parse_rational_checked(lo_t, ln),
                    hi=_parse_rational_checked(hi_t, ln),
                    multiplier=_parse_int_checked(m_t, ln),
                    tag=tag,
                )
            )
        return CoverCert(
            set_name=raw.one("set")[0],
            f_name=raw.one("f")[0],
            g_name=raw.one("g")[0],
            m=_parse_int_checked(*raw.one("m")),
            entries=tuple(entries),
        )
    raise DocumentError(f"unknown certificate kind {kind!r}", raw.line)


_PARSERS = {
    "formula": _parse_formula_record,
    "plfunction": _parse_plfunction_record,
    "closedset": _parse_closedset_record,
    "cone": _parse_cone_record,
    "verdict": _parse_verdict_record,
    "certificate": _parse_certificate_record,
}


def parse_document(text: str) -> tuple[Record, ...]:
    lines = text.split("\n")
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx >= len(lines) or lines[idx].strip() != HEADER:
        raise DocumentError(f"document must start with {HEADER!r}", idx + 1)
    idx += 1
    raws: list[_Raw] = []
    current: _Raw | None = None
    for lineno, line in enumerate(lines[idx:], start=idx + 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            current = None
            continue
        if line.startswith("  "):
            if current is None:
                raise DocumentError("indented line outside any record", lineno)
            key, colon, value = stripped.partition(":")
            if not colon:
                raise DocumentError("record line must look like 'key: value'", lineno)
            current.fields.append((key.strip(), value.strip(), lineno))
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise DocumentError(
                f"record header must be '<type> <name>': {stripped!r}", lineno
            )
        rtype, name = tokens
        if rtype not in RECORD_TYPES:
            raise DocumentError(f"unknown record type {rtype!r}", lineno)
        current = _Raw(rtype, name, lineno, [])
        raws.append(current)
    records = []
    seen: set[str] = set()
    for raw in raws:
        if raw.name in seen:
            raise DocumentError(f"duplicate record name {raw.name!r}", raw.line)
        seen.add(raw.name)
        records.append(Record(raw.rtype, raw.name, _PARSERS[raw.rtype](raw), raw.line))
    return tuple(records)


def read_document(path: str) -> tuple[Record, ...]:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def write_document(path: str, records: Sequence[Record]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(document_text(records))


def find_record(records: Sequence[Record], name: str, rtype: str) -> Record:
    for rec in records:
        if rec.name == name:
            if rec.rtype != rtype:
                raise DocumentError(
                    f"record {name!r} is a {rec.rtype}, expected {rtype}", rec.line
                )
            return rec
    raise DocumentError(f"no {rtype} record named {name!r}")


def single_record(records: Sequence[Record], rtype: str, path: str) -> Record:
    hits = [rec for rec in records if rec.rtype == rtype]
    if len(hits) != 1:
        raise DocumentError(
            f"{path}: expected exactly one {rtype} record, found {len(hits)}"
        )
    return hits[0]
