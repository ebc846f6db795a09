"""Terms of Łukasiewicz logic: parsing, serialization, evaluation.

Concrete syntax is fully parenthesized, so there is no precedence table:

    formula := "0" | "1" | var | "!" formula | "(" formula op formula ")"
    op      := "+" | "*" | "&" | "|" | "->"
    var     := "x" positive-integer

"+" is truncated addition, "*" truncated multiplication, "&" pointwise min,
"|" pointwise max, "->" residuation min(1, 1-a+b). Whitespace is
insignificant. Min and Max are primitive nodes, not derived MV terms; the
usual identities relating them to + and * are checked by the test suite
instead of being baked into the AST.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union


class FormulaError(ValueError):
    """Base class for frontend errors."""


class ParseError(FormulaError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ArityError(FormulaError):
    """A valuation or declared arity does not cover every variable."""


@dataclass(frozen=True, slots=True)
class Const:
    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise FormulaError(f"constant must be 0 or 1, got {self.bit}")


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise FormulaError(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True, slots=True)
class Neg:
    child: "Formula"


@dataclass(frozen=True, slots=True)
class OPlus:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class OTimes:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Min:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Max:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Union[Const, Var, Neg, OPlus, OTimes, Min, Max, Implies]

_BINARY = {OPlus: "+", OTimes: "*", Min: "&", Max: "|", Implies: "->"}
_OP_NODE = {op: node for node, op in _BINARY.items()}


def serialize(f: Formula) -> str:
    if isinstance(f, Const):
        return str(f.bit)
    if isinstance(f, Var):
        return f"x{f.index}"
    if isinstance(f, Neg):
        return "!" + serialize(f.child)
    op = _BINARY[type(f)]
    return f"({serialize(f.left)} {op} {serialize(f.right)})"


def max_var(f: Formula) -> int:
    """Largest variable index used; 0 for a variable-free term."""
    if isinstance(f, Var):
        return f.index
    if isinstance(f, Neg):
        return max_var(f.child)
    if isinstance(f, Const):
        return 0
    return max(max_var(f.left), max_var(f.right))


def variables(f: Formula) -> set[int]:
    if isinstance(f, Var):
        return {f.index}
    if isinstance(f, Neg):
        return variables(f.child)
    if isinstance(f, Const):
        return set()
    return variables(f.left) | variables(f.right)


# --- tokenizer -------------------------------------------------------------

_Token = tuple[str, object, int, int]  # kind, payload, line, column


def _tokens(text: str) -> Iterator[_Token]:
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        start_col = col
        if ch in "()!+*&|01":
            kind = {
                "(": "lparen", ")": "rparen", "!": "bang", "+": "+",
                "*": "*", "&": "&", "|": "|", "0": "const", "1": "const",
            }[ch]
            payload = int(ch) if kind == "const" else None
            yield kind, payload, line, start_col
            i += 1
            col += 1
            continue
        if ch == "-":
            if text.startswith("->", i):
                yield "->", None, line, start_col
                i += 2
                col += 2
                continue
            raise ParseError("expected '->'", line, start_col)
        if ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            digits = text[i + 1 : j]
            if not digits:
                raise ParseError("variable needs a numeric index", line, start_col)
            index = int(digits)
            if index == 0:
                raise ParseError("variable index 0 is not allowed", line, start_col)
            yield "var", index, line, start_col
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    yield "eof", None, line, col


class _Parser:
    def __init__(self, text: str):
        self._toks = list(_tokens(text))
        self._pos = 0

    def _peek(self) -> _Token:
        return self._toks[self._pos]

    def _next(self) -> _Token:
        tok = self._toks[self._pos]
        self._pos += 1
        return tok

    def formula(self) -> Formula:
        kind, payload, line, col = self._next()
        if kind == "const":
            return Const(payload)
        if kind == "var":
            return Var(payload)
        if kind == "bang":
            return Neg(self.formula())
        if kind == "lparen":
            left = self.formula()
            op_kind, _, op_line, op_col = self._next()
            node = _OP_NODE.get(op_kind)
            if node is None:
                raise ParseError(
                    f"expected an operator, got {op_kind!r}", op_line, op_col
                )
            right = self.formula()
            close, _, cl_line, cl_col = self._next()
            if close != "rparen":
                raise ParseError("expected ')'", cl_line, cl_col)
            return node(left, right)
        raise ParseError(f"unexpected token {kind!r}", line, col)

    def finish(self, f: Formula) -> Formula:
        kind, _, line, col = self._peek()
        if kind != "eof":
            raise ParseError(f"trailing input starting with {kind!r}", line, col)
        return f


def parse(text: str, max_arity: int | None = None) -> Formula:
    """Parse a term; optionally reject variables beyond a declared arity."""
    parser = _Parser(text)
    f = parser.finish(parser.formula())
    if max_arity is not None and max_var(f) > max_arity:
        raise ArityError(
            f"term uses x{max_var(f)} but declared arity is {max_arity}"
        )
    return f


# --- evaluation ------------------------------------------------------------

_ZERO = Fraction(0)
_ONE = Fraction(1)


def evaluate(f: Formula, valuation: Sequence) -> Fraction:
    """Value of the term at a rational point of the unit cube."""
    vals = [Fraction(c) for c in valuation]
    for c in vals:
        if not (0 <= c <= 1):
            raise FormulaError(f"valuation coordinate {c} outside [0,1]")
    need = max_var(f)
    if need > len(vals):
        raise ArityError(f"term uses x{need} but valuation has {len(vals)} slots")

    def go(node: Formula) -> Fraction:
        if isinstance(node, Const):
            return _ONE if node.bit else _ZERO
        if isinstance(node, Var):
            return vals[node.index - 1]
        if isinstance(node, Neg):
            return 1 - go(node.child)
        a = go(node.left)
        b = go(node.right)
        if isinstance(node, OPlus):
            return min(_ONE, a + b)
        if isinstance(node, OTimes):
            return max(_ZERO, a + b - 1)
        if isinstance(node, Min):
            return min(a, b)
        if isinstance(node, Max):
            return max(a, b)
        return min(_ONE, 1 - a + b)

    return go(f)


# --- kernel program --------------------------------------------------------

_OPCODE = {OPlus: 3, OTimes: 4, Min: 5, Max: 6, Implies: 7}


def to_program(f: Formula) -> tuple[tuple[int, int], ...]:
    """Postfix opcode program for kernels.eval_formula_scaled.

    Opcodes: 0 const (arg = bit), 1 variable (arg = zero-based index),
    2 negation, 3 truncated sum, 4 truncated product, 5 min, 6 max,
    7 implication. Left operand is pushed before the right one.
    """
    out: list[tuple[int, int]] = []

    def go(node: Formula):
        if isinstance(node, Const):
            out.append((0, node.bit))
        elif isinstance(node, Var):
            out.append((1, node.index - 1))
        elif isinstance(node, Neg):
            go(node.child)
            out.append((2, 0))
        else:
            go(node.left)
            go(node.right)
            out.append((_OPCODE[type(node)], 0))

    go(f)
    return tuple(out)
