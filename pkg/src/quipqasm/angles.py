"""Constant angle expressions.

Gate parameters in OpenQASM are written as small arithmetic expressions over
literals, the constants ``pi``/``tau``/``euler`` and a handful of built-in
math functions.  This module keeps them as a tiny immutable AST so that the
reader/writer pair can round-trip them verbatim, while :func:`evaluate` folds
them to a double whenever a pass or the oracle needs a number.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

__all__ = [
    "AngleError",
    "BinOp",
    "Const",
    "Expr",
    "FuncCall",
    "Neg",
    "Num",
    "CONSTANTS",
    "FUNCTIONS",
    "contains_call",
    "evaluate",
    "format_float",
    "fold",
    "parse_angle_expr",
    "parse_expr",
    "parse_expr_tokens",
    "render",
]


class AngleError(ValueError):
    """Raised for malformed or non-constant angle expressions."""

    def __init__(self, message: str, offset: int | None = None) -> None:
        super().__init__(message if offset is None else f"{message} (at offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str  # canonical spelling: "pi", "tau" or "euler"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / **
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class FuncCall:
    name: str
    args: tuple["Expr", ...]


Expr = Union[Num, Const, Neg, BinOp, FuncCall]

CONSTANTS: dict[str, float] = {"pi": math.pi, "tau": math.tau, "euler": math.e}
_CONST_ALIASES = {"π": "pi", "τ": "tau", "ℇ": "euler"}


def _ceiling(x: float) -> float:
    return float(math.ceil(x))


def _floor(x: float) -> float:
    return float(math.floor(x))


def _mod(a: float, b: float) -> float:
    if b == 0:
        raise AngleError("mod by zero")
    return math.fmod(a, b)


FUNCTIONS: dict[str, tuple[int, Callable[..., float]]] = {
    "sin": (1, math.sin),
    "cos": (1, math.cos),
    "tan": (1, math.tan),
    "arcsin": (1, math.asin),
    "arccos": (1, math.acos),
    "arctan": (1, math.atan),
    "exp": (1, math.exp),
    "log": (1, math.log),
    "ln": (1, math.log),
    "sqrt": (1, math.sqrt),
    "ceiling": (1, _ceiling),
    "floor": (1, _floor),
    "mod": (2, _mod),
    "pow": (2, math.pow),
}

# ---------------------------------------------------------------------------
# evaluation


def evaluate(expr: Expr) -> float:
    """Fold ``expr`` to a float, raising :class:`AngleError` on domain errors."""
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Const):
        return CONSTANTS[expr.name]
    if isinstance(expr, Neg):
        return -evaluate(expr.operand)
    if isinstance(expr, BinOp):
        a, b = evaluate(expr.left), evaluate(expr.right)
        try:
            if expr.op == "+":
                return a + b
            if expr.op == "-":
                return a - b
            if expr.op == "*":
                return a * b
            if expr.op == "/":
                return a / b
            if expr.op == "**":
                return float(a**b)
        except ZeroDivisionError as exc:
            raise AngleError("division by zero") from exc
        except (OverflowError, TypeError) as exc:
            raise AngleError(f"cannot evaluate {a} {expr.op} {b}") from exc
        raise AngleError(f"unknown operator {expr.op!r}")
    if isinstance(expr, FuncCall):
        arity, fn = FUNCTIONS[expr.name]
        args = [evaluate(a) for a in expr.args]
        try:
            value = fn(*args)
        except (ValueError, OverflowError) as exc:
            raise AngleError(f"domain error in {expr.name}({', '.join(map(repr, args))})") from exc
        return float(value)
    raise TypeError(f"not an angle expression: {expr!r}")


def fold(expr: Expr) -> Num:
    """Constant-fold an expression into a single literal (``-0.0`` becomes ``0.0``)."""
    value = evaluate(expr)
    if not math.isfinite(value):
        raise AngleError(f"angle evaluates to a non-finite value: {value}")
    return Num(value + 0.0)


def contains_call(expr: Expr) -> bool:
    if isinstance(expr, FuncCall):
        return True
    if isinstance(expr, Neg):
        return contains_call(expr.operand)
    if isinstance(expr, BinOp):
        return contains_call(expr.left) or contains_call(expr.right)
    return False


# ---------------------------------------------------------------------------
# rendering

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "**": 4}
_NEG_PREC = 3


def format_float(value: float) -> str:
    """Shortest round-trippable decimal spelling of ``value``."""
    if not math.isfinite(value):
        raise AngleError(f"cannot render non-finite angle {value}")
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _prec(expr: Expr) -> int:
    if isinstance(expr, BinOp):
        return _PREC[expr.op]
    if isinstance(expr, Neg):
        return _NEG_PREC
    if isinstance(expr, Num) and (expr.value < 0 or math.copysign(1.0, expr.value) < 0):
        return _NEG_PREC
    return 5


def render(expr: Expr) -> str:
    """Render an expression back to OpenQASM surface syntax."""
    if isinstance(expr, Num):
        return format_float(expr.value)
    if isinstance(expr, Const):
        return expr.name
    if isinstance(expr, Neg):
        inner = render(expr.operand)
        if _prec(expr.operand) <= _NEG_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(expr, BinOp):
        p = _PREC[expr.op]
        left, right = render(expr.left), render(expr.right)
        if expr.op == "**":
            # right associative: parenthesise a left operand of equal precedence
            if _prec(expr.left) <= p:
                left = f"({left})"
            if _prec(expr.right) < p:
                right = f"({right})"
        else:
            if _prec(expr.left) < p:
                left = f"({left})"
            if _prec(expr.right) <= p:
                right = f"({right})"
        return f"{left} {expr.op} {right}"
    if isinstance(expr, FuncCall):
        return f"{expr.name}({', '.join(render(a) for a in expr.args)})"
    raise TypeError(f"not an angle expression: {expr!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_πτℇ][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise AngleError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        kind = m.lastgroup
        assert kind is not None
        tokens.append((kind, m.group(kind).strip(), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _ExprParser:
    """Precedence climbing: ``+ -`` < ``* /`` < unary minus < ``**`` (right assoc)."""

    def __init__(self, tokens: list[tuple[str, str, int]]) -> None:
        self.tokens = tokens
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text, pos = self.take()
        if text != value or kind != "op":
            raise AngleError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def parse(self) -> Expr:
        expr = self.additive()
        kind, text, pos = self.peek()
        if kind != "eof":
            raise AngleError(f"unexpected token {text!r}", pos)
        return expr

    def additive(self) -> Expr:
        left = self.multiplicative()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            left = BinOp(op, left, self.multiplicative())
        return left

    def multiplicative(self) -> Expr:
        left = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            operand = self.unary()
            if isinstance(operand, Num):
                return Num(-operand.value)
            return Neg(operand)
        if kind == "op" and text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.peek()[0] == "op" and self.peek()[1] == "**":
            self.take()
            return BinOp("**", base, self.unary())
        return base

    def primary(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            name = _CONST_ALIASES.get(text, text)
            if name in CONSTANTS:
                return Const(name)
            if name in FUNCTIONS:
                self.expect("(")
                args = [self.additive()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.additive())
                self.expect(")")
                arity = FUNCTIONS[name][0]
                if len(args) != arity:
                    raise AngleError(f"{name} expects {arity} argument(s), got {len(args)}", pos)
                return FuncCall(name, tuple(args))
            raise AngleError(f"non-constant subexpression {text!r}", pos)
        if kind == "op" and text == "(":
            inner = self.additive()
            self.expect(")")
            return inner
        raise AngleError(f"expected an expression, found {text or 'end of input'!r}", pos)


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an expression tree without folding it."""
    return _ExprParser(_tokenize(text)).parse()


def parse_expr_tokens(tokens: list[tuple[str, str, int]]) -> Expr:
    """Parse a pre-lexed token list of ``(kind, text, offset)`` triples.

    Kinds are ``num``, ``name`` and ``op``; a trailing ``eof`` token is
    appended automatically when missing.
    """
    if not tokens or tokens[-1][0] != "eof":
        end = tokens[-1][2] + len(tokens[-1][1]) if tokens else 0
        tokens = [*tokens, ("eof", "", end)]
    return _ExprParser(tokens).parse()


def parse_angle_expr(text: str) -> float:
    """Parse and constant-fold an angle expression, e.g. ``"pi / 2"``."""
    return fold(parse_expr(text)).value
