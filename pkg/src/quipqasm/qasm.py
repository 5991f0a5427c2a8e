"""Reader and writer for the OpenQASM 2.0 / 3 subset.

The subset: a version header, includes, ``qubit``/``bit`` (``qreg``/``creg``)
declarations, gate applications with ``ctrl``/``negctrl``/``inv``/``pow``
modifier chains, ``measure``, ``reset``, runtime-function calls and constant
angle expressions.  ``parse_qasm(write_qasm(p))`` reproduces ``p``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .angles import AngleError, evaluate, parse_expr_tokens, render
from .ir import (
    CTRL,
    INV,
    LIBRARY_VERSIONS,
    NEGCTRL,
    POW,
    QUIPFUNCS,
    Call,
    Declaration,
    GateApply,
    Measure,
    Modifier,
    Operand,
    QasmProgram,
    Reset,
    validate,
)

__all__ = [
    "BUNDLED_LIBRARY_DIR",
    "DialectError",
    "QasmError",
    "QasmSyntaxError",
    "include_search_path",
    "parse_qasm",
    "resolve_include",
    "write_qasm",
]

BUNDLED_LIBRARY_DIR = Path(__file__).resolve().parent / "data"
BUILTIN_LIBRARIES = frozenset({"stdgates.inc", "qelib1.inc"})
ENV_INCLUDE_PATH = "LINGUA_INCLUDE_PATH"


class QasmError(ValueError):
    """Any input error, with an optional ``(line, column)`` position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.message, self.line, self.column = message, line, column


class QasmSyntaxError(QasmError):
    pass


class DialectError(QasmError):
    """A construct that the selected OpenQASM version does not offer."""


# ---------------------------------------------------------------------------
# include resolution


def include_search_path(extra: Iterable[str | os.PathLike] = ()) -> list[Path]:
    """Directories searched for include files: ``extra``, then ``$LINGUA_INCLUDE_PATH``, then the bundled ones."""
    dirs = [Path(p) for p in extra]
    env = os.environ.get(ENV_INCLUDE_PATH, "")
    dirs += [Path(p) for p in env.split(os.pathsep) if p]
    dirs.append(BUNDLED_LIBRARY_DIR)
    return dirs


def resolve_include(name: str, search_path: Sequence[Path] | None = None) -> Path | None:
    """Location of an include file, or ``None`` (the two standard libraries are built in)."""
    for d in search_path if search_path is not None else include_search_path():
        candidate = Path(d) / name
        if candidate.is_file():
            return candidate
    return None


# ---------------------------------------------------------------------------
# lexer


@dataclass(frozen=True)
class Token:
    kind: str  # ident, num, str, op, eof
    text: str
    offset: int
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>//[^\n]*|/\*.*?\*/)"
    r"|(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_πτℇ][A-Za-z0-9_]*)"
    r"|(?P<str>\"[^\"\n]*\")"
    r"|(?P<op>\*\*|->|[;,()\[\]@=+\-*/])",
    re.S,
)


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise QasmSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        assert kind is not None
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), pos, line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", pos, line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# parser

_MODIFIER_WORDS = (CTRL, NEGCTRL, INV, POW)


class _Parser:
    def __init__(self, text: str, search_path: Sequence[Path] | None) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.search_path = search_path
        self.version = "3"
        self.includes: list[str] = []
        self.decls: list[Declaration] = []
        self.names: set[str] = set()
        self.stmts: list = []
        self.seen_body = False

    # token helpers -------------------------------------------------------
    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None, cls=QasmSyntaxError) -> QasmError:
        tok = tok or self.peek()
        return cls(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind not in ("op", "ident"):
            found = tok.text or "end of input"
            return_err = self.error(f"expected {text!r}, found {found!r}", tok)
            raise return_err
        return self.take()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return self.take()

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("op", "ident")

    # grammar -------------------------------------------------------------
    def parse(self) -> QasmProgram:
        self.header()
        while self.peek().kind != "eof":
            self.item()
        prog = QasmProgram(self.version, tuple(self.includes), tuple(self.decls), tuple(self.stmts))
        diags = validate(prog)
        if diags:
            d = diags[0]
            pos = self.stmts[d.index].pos if d.index >= 0 else None
            line, col = pos if pos else (None, None)
            raise QasmError(d.reason, line, col)
        return prog

    def header(self) -> None:
        tok = self.peek()
        if not (tok.kind == "ident" and tok.text == "OPENQASM"):
            raise self.error("expected the version header 'OPENQASM <version>;'", tok)
        self.take()
        v = self.expect_kind("num", "a version number")
        if v.text in ("3", "3.0"):
            self.version = "3"
        elif v.text == "2.0" or v.text == "2":
            self.version = "2.0"
        else:
            raise self.error(f"unsupported OpenQASM version {v.text}", v, DialectError)
        self.expect(";")

    def item(self) -> None:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "include":
            self.include()
            return
        self.seen_body = True
        if tok.kind == "ident" and tok.text in ("qubit", "bit"):
            self.declaration_3(tok)
        elif tok.kind == "ident" and tok.text in ("qreg", "creg"):
            self.declaration_2(tok)
        elif tok.kind == "ident" and tok.text == "reset":
            self.take()
            target = self.operand()
            self.expect(";")
            self.stmts.append(Reset(target, (tok.line, tok.col)))
        elif tok.kind == "ident" and tok.text == "measure":
            self.take()
            src = self.operand()
            self.expect("->")
            dst = self.operand()
            self.expect(";")
            self.stmts.append(Measure(src, dst, (tok.line, tok.col)))
        elif tok.kind == "ident" and self._is_assignment():
            self.assignment(tok)
        elif tok.kind == "ident" and tok.text in QUIPFUNCS and self.peek(1).text == "(":
            self.call(tok, None)
        elif tok.kind == "ident":
            self.gate(tok)
        else:
            raise self.error(f"expected a statement, found {tok.text or 'end of input'!r}", tok)

    def include(self) -> None:
        tok = self.take()
        if self.seen_body:
            raise self.error("include statements must precede declarations and statements", tok)
        name_tok = self.expect_kind("str", "a quoted file name")
        self.expect(";")
        name = name_tok.text[1:-1]
        if name not in LIBRARY_VERSIONS:
            if resolve_include(name, self.search_path) is not None:
                raise self.error(f"include {name!r} is not a supported library", name_tok)
            raise self.error(f"unknown include {name!r}", name_tok)
        if name not in BUILTIN_LIBRARIES and resolve_include(name, self.search_path) is None:
            raise self.error(f"include {name!r} not found on the include path", name_tok)
        if LIBRARY_VERSIONS[name] != self.version:
            raise self.error(f"include {name!r} is not available in OpenQASM {self.version}", name_tok, DialectError)
        if name not in self.includes:
            self.includes.append(name)

    def _declare(self, kind: str, name_tok: Token, size: int | None) -> None:
        name = name_tok.text
        if name in self.names:
            raise self.error(f"duplicate declaration {name!r}", name_tok)
        if size is not None and size <= 0:
            raise self.error(f"register {name!r} must have positive size", name_tok)
        self.names.add(name)
        self.decls.append(Declaration(kind, name, size))

    def declaration_3(self, tok: Token) -> None:
        if self.version == "2.0":
            raise self.error(f"'{tok.text}' declarations need OpenQASM 3 (use qreg/creg)", tok, DialectError)
        self.take()
        size = None
        if self.at("["):
            self.take()
            size = int(self.expect_kind("num", "a register size").text)
            self.expect("]")
        name_tok = self.expect_kind("ident", "a register name")
        self._declare(tok.text, name_tok, size)
        if tok.text == "bit" and self.at("="):
            self.take()
            m = self.expect("measure")
            src = self.operand()
            self.stmts.append(Measure(src, Operand(name_tok.text), (m.line, m.col)))
        self.expect(";")

    def declaration_2(self, tok: Token) -> None:
        self.take()
        name_tok = self.expect_kind("ident", "a register name")
        size = None
        if self.at("["):
            self.take()
            size_tok = self.expect_kind("num", "a register size")
            if not size_tok.text.isdigit():
                raise self.error("register size must be an integer", size_tok)
            size = int(size_tok.text)
            self.expect("]")
        elif self.version == "2.0":
            raise self.error(f"'{tok.text}' needs a size in OpenQASM 2.0", self.peek())
        self.expect(";")
        self._declare("qubit" if tok.text == "qreg" else "bit", name_tok, size)

    def _is_assignment(self) -> bool:
        if self.peek(1).text == "=":
            return True
        return (
            self.peek(1).text == "["
            and self.peek(2).kind == "num"
            and self.peek(3).text == "]"
            and self.peek(4).text == "="
        )

    def assignment(self, tok: Token) -> None:
        dst = self.operand()
        self.expect("=")
        nxt = self.peek()
        if nxt.kind == "ident" and nxt.text == "measure":
            if self.version == "2.0":
                raise self.error("assignment syntax needs OpenQASM 3 (use measure q -> c)", nxt, DialectError)
            self.take()
            src = self.operand()
            self.expect(";")
            self.stmts.append(Measure(src, dst, (tok.line, tok.col)))
            return
        if nxt.kind == "ident" and nxt.text in QUIPFUNCS:
            self.call(tok, dst)
            return
        raise self.error("expected 'measure' or a runtime function call", nxt)

    def call(self, start: Token, result: Operand | None) -> None:
        name_tok = self.take()
        if self.version == "2.0":
            raise self.error("function calls need OpenQASM 3", name_tok, DialectError)
        self.expect("(")
        args = [self.operand()]
        while self.at(","):
            self.take()
            args.append(self.operand())
        self.expect(")")
        self.expect(";")
        self.stmts.append(Call(name_tok.text, tuple(args), result, (start.line, start.col)))

    def operand(self) -> Operand:
        name_tok = self.expect_kind("ident", "an operand")
        if name_tok.text not in self.names:
            raise self.error(f"undeclared operand {name_tok.text!r}", name_tok)
        index = None
        if self.at("["):
            self.take()
            idx = self.expect_kind("num", "an index")
            if not idx.text.isdigit():
                raise self.error("index must be a non-negative integer", idx)
            index = int(idx.text)
            self.expect("]")
        return Operand(name_tok.text, index)

    def modifiers(self) -> list[Modifier]:
        mods: list[Modifier] = []
        while self.peek().kind == "ident" and self.peek().text in _MODIFIER_WORDS:
            tok = self.take()
            if self.version == "2.0":
                raise self.error(f"the '{tok.text}' modifier needs OpenQASM 3", tok, DialectError)
            if tok.text in (CTRL, NEGCTRL):
                count = 1
                if self.at("("):
                    self.take()
                    n = self.expect_kind("num", "a control count")
                    if not n.text.isdigit() or int(n.text) < 1:
                        raise self.error("control count must be a positive integer", n)
                    count = int(n.text)
                    self.expect(")")
                mods.extend(Modifier(tok.text) for _ in range(count))
            elif tok.text == INV:
                mods.append(Modifier(INV))
            else:
                self.expect("(")
                expr_tok = self.peek()
                exprs = self.expr_list()
                if len(exprs) != 1:
                    raise self.error("pow takes exactly one exponent", expr_tok)
                try:
                    value = evaluate(exprs[0])
                except AngleError as exc:
                    raise self.error(str(exc), expr_tok) from None
                if not float(value).is_integer():
                    raise self.error(
                        f"non-integer power {value!r} is not supported (only integer exponents are)", expr_tok
                    )
                mods.append(Modifier(POW, int(value)))
            self.expect("@")
        return mods

    def expr_list(self) -> list:
        """Comma-separated expressions up to the matching ``)`` (which is consumed)."""
        groups: list[list[Token]] = [[]]
        depth = 0
        while True:
            tok = self.take()
            if tok.kind == "eof":
                raise self.error("unterminated parameter list", tok)
            if tok.text == "(" and tok.kind == "op":
                depth += 1
            elif tok.text == ")" and tok.kind == "op":
                if depth == 0:
                    break
                depth -= 1
            elif tok.text == "," and tok.kind == "op" and depth == 0:
                groups.append([])
                continue
            elif tok.text == ";":
                raise self.error("unterminated parameter list", tok)
            groups[-1].append(tok)
        exprs = []
        for group in groups:
            if not group:
                raise self.error("empty parameter", self.tokens[self.i - 1])
            triples = []
            for t in group:
                kind = {"num": "num", "ident": "name", "op": "op"}.get(t.kind)
                if kind is None:
                    raise self.error(f"unexpected {t.text!r} in expression", t)
                triples.append((kind, t.text, t.offset))
            try:
                exprs.append(parse_expr_tokens(triples))
            except AngleError as exc:
                bad = next((t for t in group if t.offset == exc.offset), group[0])
                raise QasmSyntaxError(str(exc).split(" (at offset")[0], bad.line, bad.col) from None
        return exprs

    def gate(self, start: Token) -> None:
        mods = self.modifiers()
        name_tok = self.expect_kind("ident", "a gate name")
        table = QasmProgram(self.version, tuple(self.includes)).gate_table()
        if name_tok.text not in table:
            raise self.error(f"unknown gate {name_tok.text!r}", name_tok)
        params: list = []
        if self.at("("):
            self.take()
            params = self.expr_list()
        operands = []
        if not self.at(";"):
            operands.append(self.operand())
            while self.at(","):
                self.take()
                operands.append(self.operand())
        self.expect(";")
        self.stmts.append(
            GateApply(name_tok.text, tuple(params), tuple(operands), tuple(mods), (start.line, start.col))
        )


def parse_qasm(
    text: str,
    dialect: str | None = None,
    include_path: Sequence[str | os.PathLike] | None = None,
) -> QasmProgram:
    """Parse OpenQASM text; ``dialect`` (``"2.0"``/``"3"``), when given, must match the header."""
    search = include_search_path(include_path or ())
    prog = _Parser(text, search).parse()
    if dialect is not None and _canon_version(dialect) != prog.version:
        raise DialectError(f"expected OpenQASM {dialect}, found OpenQASM {prog.version}", 1, 1)
    return prog


def _canon_version(v: str) -> str:
    return "3" if str(v) in ("3", "3.0") else "2.0" if str(v) in ("2", "2.0") else str(v)


# ---------------------------------------------------------------------------
# writer


def _modifier_text(m: Modifier) -> str:
    return f"pow({m.arg}) @ " if m.kind == POW else f"{m.kind} @ "


def _statement_text(stmt, version: str) -> str:
    if isinstance(stmt, GateApply):
        if version == "2.0" and stmt.modifiers:
            raise DialectError(f"cannot write modifiers on {stmt.name!r} in OpenQASM 2.0")
        head = "".join(_modifier_text(m) for m in stmt.modifiers) + stmt.name
        if stmt.params:
            head += "(" + ", ".join(render(p) for p in stmt.params) + ")"
        if stmt.operands:
            head += " " + ", ".join(map(str, stmt.operands))
        return head + ";"
    if isinstance(stmt, Measure):
        if version == "2.0":
            return f"measure {stmt.src} -> {stmt.dst};"
        return f"{stmt.dst} = measure {stmt.src};"
    if isinstance(stmt, Reset):
        return f"reset {stmt.target};"
    if isinstance(stmt, Call):
        if version == "2.0":
            raise DialectError(f"cannot write the call {stmt.name!r} in OpenQASM 2.0")
        call = f"{stmt.name}({', '.join(map(str, stmt.operands))});"
        return call if stmt.result is None else f"{stmt.result} = {call}"
    raise TypeError(f"not a statement: {stmt!r}")


def _declaration_text(d: Declaration, version: str) -> str:
    if version == "2.0":
        if d.size is None:
            raise DialectError(f"scalar register {d.name!r} cannot be written in OpenQASM 2.0")
        return f"{'qreg' if d.kind == 'qubit' else 'creg'} {d.name}[{d.size}];"
    return f"{d.kind} {d.name};" if d.size is None else f"{d.kind}[{d.size}] {d.name};"


def write_qasm(program: QasmProgram, dialect: str | None = None) -> str:
    """Render ``program`` (in its own version unless ``dialect`` is given)."""
    version = _canon_version(dialect) if dialect is not None else program.version
    if version not in ("2.0", "3"):
        raise DialectError(f"unsupported OpenQASM version {version!r}")
    lines = [f"OPENQASM {version};"]
    lines += [f'include "{inc}";' for inc in program.includes]
    lines += [f"// {note}" for note in program.notes]
    body = [_declaration_text(d, version) for d in program.declarations]
    stmts = [_statement_text(s, version) for s in program.statements]
    if body:
        lines += [""] + body
    if stmts:
        lines += [""] + stmts
    return "\n".join(lines) + "\n"
