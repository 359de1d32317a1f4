"""Input expressions: tokenizer, Pratt parser, canonical printer and evaluator.

Grammar (``^`` binds tighter than unary minus, exponents are integers)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' int)?
    int     := ['-'] INTEGER | '(' ['-'] INTEGER ')'
    atom    := INTEGER | 'x' | 'zeta(' INTEGER ')' | 'root(' rational ',' INTEGER ')'
             | '(' expr ')'
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .field import (
    FieldDescriptor,
    RadicalMonomial,
    factor_rational,
    field_for,
    is_p_smooth,
    monomial_value,
    p_exponent_for,
    root_of_unity,
)
from .ratfun import RationalFunction


class ExprSyntaxError(SyntaxError):
    """Malformed input; ``offset`` is the 0-based character position."""

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.msg = message
        self.offset = offset
        self.text = text

    def __str__(self):
        return f"{self.msg} at offset {self.offset}"


class UnsupportedConstruct(ValueError):
    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Zeta:
    n: int


@dataclass(frozen=True)
class Root:
    c: Fraction
    n: int


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


Expr = Union[Num, Var, Zeta, Root, Neg, BinOp, Pow]


# ---------------------------------------------------------------------------
# tokens


@dataclass(frozen=True)
class Token:
    kind: str  # 'int', 'name', 'op', 'end'
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            out.append(Token("int", src[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(Token("name", src[i:j], i))
            i = j
        elif ch in "+-*/^(),":
            out.append(Token("op", ch, i))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", i, src)
    out.append(Token("end", "", len(src)))
    return out


# ---------------------------------------------------------------------------
# parser

_BINARY = {"+": 10, "-": 10, "*": 20, "/": 20}
_UNARY_BP = 25
_POW_BP = 30


class _Parser:
    def __init__(self, src: str, p: int):
        self.src = src
        self.p = p
        self.toks = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text or tok.kind == "end":
            raise ExprSyntaxError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.pos, self.src)
        return tok

    def parse(self) -> Expr:
        if self.peek().kind == "end":
            raise ExprSyntaxError("empty expression", 0, self.src)
        node = self.expr(0)
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.pos, self.src)
        return node

    def expr(self, min_bp: int) -> Expr:
        left = self.prefix()
        while True:
            tok = self.peek()
            if tok.kind != "op":
                break
            if tok.text == "^":
                if _POW_BP < min_bp:
                    break
                self.next()
                left = Pow(left, self.exponent())
                continue
            bp = _BINARY.get(tok.text)
            if bp is None or bp <= min_bp:
                break
            self.next()
            right = self.expr(bp)
            left = BinOp(tok.text, left, right)
        return left

    def prefix(self) -> Expr:
        tok = self.next()
        if tok.kind == "op" and tok.text in "+-":
            operand = self.expr(_UNARY_BP)
            return Neg(operand) if tok.text == "-" else operand
        if tok.kind == "int":
            return Num(int(tok.text))
        if tok.kind == "op" and tok.text == "(":
            node = self.expr(0)
            self.expect(")")
            return node
        if tok.kind == "name":
            if tok.text == "x":
                return Var()
            if tok.text == "zeta":
                self.expect("(")
                n = self.integer()
                if n < 1:
                    raise UnsupportedConstruct("zeta order must be positive", tok.pos)
                self.expect(")")
                return Zeta(n)
            if tok.text == "root":
                self.expect("(")
                c = Fraction(self.integer())
                if self.peek().text == "/":
                    self.next()
                    d = self.integer()
                    if d == 0:
                        raise ExprSyntaxError("zero denominator in root radicand", self.peek().pos, self.src)
                    c = c / d
                self.expect(",")
                n = self.integer()
                self.expect(")")
                if c <= 0:
                    raise UnsupportedConstruct("root needs a positive radicand", tok.pos)
                if n < 1 or not is_p_smooth(n, self.p) or self.p ** p_exponent_for(n, self.p) != n:
                    raise UnsupportedConstruct(f"root index {n} is not a power of p={self.p}", tok.pos)
                return Root(c, n)
            raise ExprSyntaxError(f"unknown name {tok.text!r}", tok.pos, self.src)
        raise ExprSyntaxError(f"unexpected {tok.text or 'end of input'!r}", tok.pos, self.src)

    def integer(self) -> int:
        tok = self.next()
        if tok.kind != "int":
            raise ExprSyntaxError("expected an integer", tok.pos, self.src)
        return int(tok.text)

    def exponent(self) -> int:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            sign = -1 if self.peek().text == "-" else 1
            if self.peek().text in "+-" and self.peek().kind == "op":
                self.next()
            n = self.integer()
            self.expect(")")
            return sign * n
        sign = 1
        if tok.kind == "op" and tok.text in "+-":
            self.next()
            sign = -1 if tok.text == "-" else 1
        if self.peek().kind != "int":
            raise ExprSyntaxError("exponents must be integer literals", self.peek().pos, self.src)
        return sign * self.integer()


def parse(src: str, p: int) -> Expr:
    if p < 2:
        raise ValueError("p must be at least 2")
    return _Parser(src, p).parse()


# ---------------------------------------------------------------------------
# canonical printing

_PREC = {"+": 10, "-": 10, "*": 20, "/": 20}


def render_expr(node: Expr) -> str:
    return _render(node, 0)


def _render(node: Expr, ctx: int) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Zeta):
        return f"zeta({node.n})"
    if isinstance(node, Root):
        return f"root({node.c},{node.n})"
    if isinstance(node, Neg):
        s = "-" + _render(node.operand, _UNARY_BP)
        return f"({s})" if ctx > 10 else s
    if isinstance(node, Pow):
        base = _render(node.base, _POW_BP + 1)
        exp = str(node.exp) if node.exp >= 0 else f"({node.exp})"
        return f"{base}^{exp}"
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        left = _render(node.left, prec)
        right = _render(node.right, prec + 1)
        s = f"{left} {node.op} {right}" if prec == 10 else f"{left}{node.op}{right}"
        return f"({s})" if prec < ctx else s
    raise TypeError(node)


# ---------------------------------------------------------------------------
# evaluation


def _monomials(node: Expr, p: int, out: list) -> list:
    if isinstance(node, Zeta):
        out.append(root_of_unity(node.n, 1, p))
    elif isinstance(node, Root):
        rad = {q: Fraction(e, node.n) for q, e in factor_rational(node.c).items()}
        out.append(RadicalMonomial.make(p, radical=rad))
    elif isinstance(node, (Neg,)):
        _monomials(node.operand, p, out)
    elif isinstance(node, Pow):
        _monomials(node.base, p, out)
    elif isinstance(node, BinOp):
        _monomials(node.left, p, out)
        _monomials(node.right, p, out)
    return out


def input_field(node: Expr, p: int) -> FieldDescriptor:
    return field_for(_monomials(node, p, []), p)


def evaluate(node: Expr, p: int, field: FieldDescriptor | None = None) -> RationalFunction:
    F = field or input_field(node, p)
    return _eval(node, F, p)


def _eval(node: Expr, F: FieldDescriptor, p: int) -> RationalFunction:
    if isinstance(node, Num):
        return RationalFunction.constant(F, node.value)
    if isinstance(node, Var):
        return RationalFunction.x(F)
    if isinstance(node, Zeta):
        return RationalFunction.constant(F, monomial_value(root_of_unity(node.n, 1, p), F))
    if isinstance(node, Root):
        rad = {q: Fraction(e, node.n) for q, e in factor_rational(node.c).items()}
        return RationalFunction.constant(F, monomial_value(RadicalMonomial.make(p, radical=rad), F))
    if isinstance(node, Neg):
        return -_eval(node.operand, F, p)
    if isinstance(node, Pow):
        base = _eval(node.base, F, p)
        if node.exp < 0 and base.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return base**node.exp
    if isinstance(node, BinOp):
        a = _eval(node.left, F, p)
        b = _eval(node.right, F, p)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b.is_zero():
            raise ZeroDivisionError("division by zero in the input")
        return a / b
    raise TypeError(node)


def parse_function(src: str, p: int) -> tuple[Expr, RationalFunction]:
    node = parse(src, p)
    return node, evaluate(node, p)
