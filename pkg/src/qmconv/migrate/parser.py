"""Concrete syntax for tools.

Grammar (``#`` starts a comment)::

    program  := decl* expr ';'?
    decl     := 'in' NAME ':' ('quat' | 'real' | 'vec3') ';'
    expr     := sum ('==' sum)?
    sum      := product (('+' | '-') product)*
    product  := unary (('*h' | '*s' | '*') unary)*
    unary    := '-' unary | atom
    atom     := NUMBER | NAME | 'i' | 'j' | 'k' | FUNC '(' expr ')'
              | '(' num ',' num ',' num ',' num ')'     # quaternion literal
              | '[' num ',' num ',' num ']'             # vec3 literal
              | '(' expr ')'

``*h`` is Hamilton's product, ``*s`` Shuster's, and ``*`` scales by a real.
A unary minus written directly before a number literal is folded into it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from ..errors import DslSyntaxError, DslTypeError, MixedMultiplication
from ..quat_core import HAMILTON, SHUSTER, I, J, K, Quaternion
from .expr import (
    BOOL,
    FUNCTIONS,
    QUAT,
    REAL,
    Add,
    ConstQuat,
    ConstReal,
    ConstVec3,
    Eq,
    Expr,
    Mul,
    Neg,
    Scale,
    Tool,
    Type,
    Var,
    type_of,
)

BASIS = {"i": I, "j": J, "k": K}
KEYWORDS = {"in"}
RESERVED = KEYWORDS | set(BASIS) | set(FUNCTIONS)

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<mul>\*[hs](?![A-Za-z0-9_]))
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|[-+*()\[\],;:])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        for nl in re.finditer("\n", m.group()):
            line += 1
            line_start = pos + nl.end()
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.decls: dict = {}
        self.star = None

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def error(self, msg, tok: Optional[Token] = None, cls=DslSyntaxError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.column)

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def typed(self, build, tok: Token) -> Expr:
        # Builds a node and type-checks it, attaching the operator position.
        try:
            node = build()
            type_of(node, root=isinstance(node, Eq))
        except DslTypeError as exc:
            raise self.error(str(exc), tok, DslTypeError) from None
        return node

    def program(self) -> Tool:
        while self.tok.text == "in":
            self.decl()
        if self.tok.kind == "eof":
            raise self.error("expected an expression")
        expr = self.expr()
        if self.tok.text == ";":
            self.advance()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return Tool(expr, tuple(self.decls.items()))

    def decl(self):
        self.expect("in")
        tok = self.tok
        if tok.kind != "name" or tok.text in RESERVED:
            raise self.error(f"expected an input name, found {tok.text!r}")
        self.advance()
        self.expect(":")
        type_tok = self.advance()
        try:
            t = Type(type_tok.text)
        except ValueError:
            raise self.error(f"unknown type {type_tok.text!r}", type_tok) from None
        if t is BOOL:
            raise self.error("inputs cannot be bool", type_tok)
        if tok.text in self.decls:
            raise self.error(f"duplicate input {tok.text!r}", tok, DslTypeError)
        self.decls[tok.text] = t
        self.expect(";")

    def expr(self) -> Expr:
        lhs = self.sum()
        if self.tok.text == "==":
            op = self.advance()
            rhs = self.sum()
            return self.typed(lambda: Eq(lhs, rhs), op)
        return lhs

    def sum(self) -> Expr:
        lhs = self.product()
        while self.tok.text in ("+", "-"):
            op = self.advance()
            rhs = self.product()
            if op.text == "-":
                rhs = Neg(rhs)
            lhs = self.typed(lambda: Add(lhs, rhs), op)
        return lhs

    def product(self) -> Expr:
        lhs = self.unary()
        while self.tok.kind == "mul" or self.tok.text == "*":
            op = self.advance()
            rhs = self.unary()
            if op.kind == "mul":
                star = HAMILTON if op.text == "*h" else SHUSTER
                if self.star is not None and star is not self.star:
                    raise self.error("a tool must use a single quaternion multiplication",
                                     op, MixedMultiplication)
                self.star = star
                lhs = self.typed(lambda: Mul(star, lhs, rhs), op)
            else:
                lhs = self.scale(lhs, rhs, op)
        return lhs

    def scale(self, lhs, rhs, op) -> Expr:
        try:
            lt, rt = type_of(lhs, False), type_of(rhs, False)
        except DslTypeError as exc:
            raise self.error(str(exc), op, DslTypeError) from None
        if lt is REAL:
            return Scale(lhs, rhs)
        if rt is REAL:
            return Scale(rhs, lhs)
        hint = "; use *h or *s for quaternion products" if lt is QUAT and rt is QUAT else ""
        raise self.error(f"'*' needs a real operand, got {lt.value} and {rt.value}{hint}", op, DslTypeError)

    def unary(self) -> Expr:
        if self.tok.text == "-":
            op = self.advance()
            if self.tok.kind == "number":
                return ConstReal(-float(self.advance().text))
            arg = self.unary()
            return self.typed(lambda: Neg(arg), op)
        return self.atom()

    def signed_number(self) -> float:
        sign = 1.0
        if self.tok.text == "-":
            self.advance()
            sign = -1.0
        if self.tok.kind != "number":
            raise self.error(f"expected a number, found {self.tok.text!r}")
        return sign * float(self.advance().text)

    def literal(self, close: str, n: int) -> List[float]:
        values = [self.signed_number()]
        while len(values) < n:
            self.expect(",")
            values.append(self.signed_number())
        self.expect(close)
        return values

    def _is_quat_literal(self) -> bool:
        # '(' followed by a signed number and a comma
        off = 1
        if self.peek(off).text == "-":
            off += 1
        return self.peek(off).kind == "number" and self.peek(off + 1).text == ","

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return ConstReal(float(tok.text))
        if tok.text == "[":
            self.advance()
            return ConstVec3(tuple(self.literal("]", 3)))
        if tok.text == "(":
            if self._is_quat_literal():
                self.advance()
                return ConstQuat(Quaternion(*self.literal(")", 4)))
            self.advance()
            inner = self.expr()
            if isinstance(inner, Eq):
                raise self.error("'==' is only allowed at the root of a tool", tok, DslTypeError)
            self.expect(")")
            return inner
        if tok.kind == "name":
            self.advance()
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                cls = FUNCTIONS[tok.text]
                return self.typed(lambda: cls(arg), tok)
            if tok.text in BASIS:
                return ConstQuat(BASIS[tok.text])
            if tok.text in KEYWORDS:
                raise self.error("declarations must precede the expression", tok)
            if tok.text not in self.decls:
                raise self.error(f"undeclared variable {tok.text!r}", tok, DslTypeError)
            return Var(tok.text, self.decls[tok.text])
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse(text: str) -> Tool:
    """Parse a program into a type-checked :class:`Tool`.

    Raises DslSyntaxError, DslTypeError or MixedMultiplication with the
    offending line and column.
    """
    return _Parser(text).program()


# -- printing -------------------------------------------------------------

from .expr import FUNCTION_NAMES  # noqa: E402


def _num(x: float) -> str:
    return repr(float(x))


def _quat_literal(q: Quaternion) -> str:
    for name, b in BASIS.items():
        if q == b:
            return name
    return "(" + ", ".join(_num(c) for c in q) + ")"


def _fmt(e: Expr, min_prec: int) -> str:
    if isinstance(e, Eq):
        s, prec = f"{_fmt(e.lhs, 1)} == {_fmt(e.rhs, 1)}", 0
    elif isinstance(e, Add):
        if isinstance(e.rhs, Neg) and not isinstance(e.rhs.arg, ConstReal):
            s = f"{_fmt(e.lhs, 1)} - {_fmt(e.rhs.arg, 2)}"
        else:
            s = f"{_fmt(e.lhs, 1)} + {_fmt(e.rhs, 2)}"
        prec = 1
    elif isinstance(e, Mul):
        s, prec = f"{_fmt(e.lhs, 2)} {e.star.symbol} {_fmt(e.rhs, 3)}", 2
    elif isinstance(e, Scale):
        s, prec = f"{_fmt(e.factor, 2)} * {_fmt(e.operand, 3)}", 2
    elif isinstance(e, Neg):
        if isinstance(e.arg, ConstReal):
            s = f"-({_num(e.arg.value)})"
        else:
            s = "-" + _fmt(e.arg, 3)
        prec = 3
    elif isinstance(e, ConstReal):
        s, prec = _num(e.value), 4
    elif isinstance(e, ConstQuat):
        s, prec = _quat_literal(e.value), 4
    elif isinstance(e, ConstVec3):
        s, prec = "[" + ", ".join(_num(c) for c in e.value) + "]", 4
    elif isinstance(e, Var):
        s, prec = e.name, 4
    else:
        s, prec = f"{FUNCTION_NAMES[type(e)]}({_fmt(e.arg, 0)})", 4
    return f"({s})" if prec < min_prec else s


def to_source(tool_or_expr) -> str:
    """Render a Tool (or bare expression) in the concrete syntax."""
    if isinstance(tool_or_expr, Tool):
        decls = "".join(f"in {name}: {t.value}; " for name, t in tool_or_expr.inputs)
        return decls + _fmt(tool_or_expr.expr, 0)
    return _fmt(tool_or_expr, 0)
