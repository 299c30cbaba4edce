"""Tiny expression language for metric / 1-form / charge coefficients.

Grammar (recursive descent, '^' right-associative, unary minus lives in
``base`` so it binds the base of a power, not the power itself)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' factor)?
    base   := number | symbol | func '(' expr ')' | '(' expr ')' | '-' base

Symbols are the coordinates ``x0 .. x{N-1}`` with ``t`` as an alias for
``x0``.  The function set is closed: sin cos tan exp log sqrt tanh atan.
Evaluation is generic over plain floats and jets, so coefficient fields can
be differentiated to any order the jet layer supports.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import jets
from .errors import EvaluationError, ParseError

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "tanh", "atan")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Coord:
    index: int


@dataclass(frozen=True)
class Neg:
    child: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "ExprAst"


ExprAst = Num | Coord | Neg | BinOp | Call


# -- convenience constructors (used by the warped-product factory) -----------

def num(v):
    v = float(v)
    return Neg(Num(-v)) if v < 0 else Num(v)


def coord(i):
    return Coord(i)


def add(a, b):
    return BinOp("+", a, b)


def sub(a, b):
    return BinOp("-", a, b)


def mul(a, b):
    return BinOp("*", a, b)


def div(a, b):
    return BinOp("/", a, b)


def powx(a, b):
    return BinOp("^", a, b)


def call(func, a):
    return Call(func, a)


ZERO = Num(0.0)
ONE = Num(1.0)


# -- tokenizer + parser -------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source, dimension):
        self.tokens = _tokenize(source)
        self.dimension = dimension
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", pos)
        self.advance()

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.factor())
            else:
                return node

    def factor(self):
        node = self.base()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            node = BinOp("^", node, self.factor())
        return node

    def base(self):
        kind, text, pos = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            return self._name(text, pos)
        if kind == "op" and text == "-":
            return Neg(self.base())
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {text!r}", pos)

    def _name(self, text, pos):
        if text in FUNCTIONS:
            self.expect_op("(")
            arg = self.expr()
            self.expect_op(")")
            return Call(text, arg)
        if text == "t":
            return Coord(0)
        m = re.fullmatch(r"x(\d+)", text)
        if m:
            index = int(m.group(1))
            if index >= self.dimension:
                raise ParseError(
                    f"coordinate index out of range: x{index} with "
                    f"dimension {self.dimension}", pos)
            return Coord(index)
        raise ParseError(f"unknown symbol {text!r}", pos)


def parse(source, dimension):
    """Parse ``source`` into an ExprAst, validating coordinate indices."""
    if not source.strip():
        raise ParseError("empty input", 0)
    p = _Parser(source, dimension)
    node = p.expr()
    kind, text, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {text!r}", pos)
    return node


# -- evaluation ---------------------------------------------------------------

def _apply(func, v):
    r = jets.real(v)
    if func == "log" and r <= 0.0:
        raise EvaluationError(f"log of non-positive argument {r}")
    if func == "sqrt" and r < 0.0:
        raise EvaluationError(f"sqrt of negative argument {r}")
    if func == "tan" and abs(jets.real(jets.cos(r))) < 1e-300:
        raise EvaluationError("tan evaluated at a pole")
    return getattr(jets, func)(v)


def evaluate(ast, coords):
    """Evaluate ``ast`` on float- or jet-valued coordinates."""
    if isinstance(ast, Num):
        return ast.value
    if isinstance(ast, Coord):
        if ast.index >= len(coords):
            raise EvaluationError(
                f"coordinate x{ast.index} outside vector of length "
                f"{len(coords)}")
        return coords[ast.index]
    if isinstance(ast, Neg):
        return -evaluate(ast.child, coords)
    if isinstance(ast, Call):
        return _apply(ast.func, evaluate(ast.arg, coords))
    left = evaluate(ast.left, coords)
    right = evaluate(ast.right, coords)
    op = ast.op
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        if jets.real(right) == 0.0:
            raise EvaluationError("division by zero")
        return left / right
    # power: integer exponents work for any base, fractional need base > 0
    e = jets.real(right)
    b = jets.real(left)
    if e != int(e):
        if b <= 0.0:
            raise EvaluationError(
                f"non-integer power of non-positive base {b}")
        return jets.exp(right * jets.log(left))
    if b == 0.0 and e < 0:
        raise EvaluationError("zero raised to a negative power")
    if isinstance(right, jets.Jet):
        return jets.exp(right * jets.log(left))
    return jets.powf(left, e)


# -- pretty printer -----------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}
_ATOM = 9


def _prec(ast):
    if isinstance(ast, (Num, Coord, Call)):
        return _ATOM
    if isinstance(ast, Neg):
        return 4
    return _PREC[ast.op]


def _fmt_num(v):
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def pretty(ast):
    """Render ``ast`` as source that parses back to a structurally equal
    tree."""
    if isinstance(ast, Num):
        return _fmt_num(ast.value)
    if isinstance(ast, Coord):
        return f"x{ast.index}"
    if isinstance(ast, Call):
        return f"{ast.func}({pretty(ast.arg)})"
    if isinstance(ast, Neg):
        inner = pretty(ast.child)
        if _prec(ast.child) < _ATOM and not isinstance(ast.child, Neg):
            inner = f"({inner})"
        return f"-{inner}"
    op = ast.op
    lp, rp = _prec(ast.left), _prec(ast.right)
    left, right = pretty(ast.left), pretty(ast.right)
    if op == "^":
        # left operand is a grammar 'base': parenthesize anything composite
        if lp < _ATOM and not isinstance(ast.left, Neg):
            left = f"({left})"
        if rp < _PREC["^"] and not isinstance(ast.right, Neg):
            right = f"({right})"
        return f"{left}^{right}"
    base = _PREC[op]
    if lp < base:
        left = f"({left})"
    if rp <= base:
        # parser builds left-associated chains; keep right subtrees explicit
        right = f"({right})"
    return f"{left} {op} {right}" if op in "+-" else f"{left}{op}{right}"
