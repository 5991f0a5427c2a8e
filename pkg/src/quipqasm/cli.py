"""Command-line front door: one subcommand per tool, composable through pipes.

Every program-transforming subcommand reads ``--in`` (default stdin) and
writes ``--out`` (default stdout); only the resulting program text goes to
stdout, diagnostics go to stderr.  Exit codes: 0 success, 1 input error
(syntax, lifetimes, unsupported construct, failed law/catalog check),
2 internal invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence

from .angles import AngleError
from .catalog import CatalogError, verify_catalog
from .dfa import DFAError
from .harness import LAWS, conformance
from .ir import QasmProgram, QuipCircuit, WireTypeError
from .passes import (
    PassError,
    elim_ctrls,
    elim_ctrls_qasm,
    elim_funs,
    elim_invs,
    elim_pows,
    load_lsc_config,
    reg_merge,
    to_lsc,
    to_qasm2,
)
from .qasm import QasmError, parse_qasm, write_qasm
from .quipper import QuipperSyntaxError, parse_quip, write_quip
from .translate import TranslationError, qasm_to_quip, quip_to_qasm

__all__ = ["build_parser", "main", "run_tool"]

INPUT_ERRORS = (
    QasmError,
    QuipperSyntaxError,
    DFAError,
    TranslationError,
    PassError,
    WireTypeError,
    AngleError,
    CatalogError,
)


class InputError(Exception):
    """Raised for unreadable input files and wrong input languages."""


def _is_qasm(text: str) -> bool:
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("//"):
            continue
        return stripped.startswith("OPENQASM")
    return False


def read_program(text: str, include_path: Sequence[str] = ()) -> QasmProgram | QuipCircuit:
    """Parse OpenQASM (recognised by its header) or Quipper ASCII."""
    if _is_qasm(text):
        return parse_qasm(text, include_path=include_path)
    return parse_quip(text)


def _qasm(obj, tool: str) -> QasmProgram:
    if not isinstance(obj, QasmProgram):
        raise InputError(f"{tool} expects an OpenQASM program")
    return obj


def _quip(obj, tool: str) -> QuipCircuit:
    if not isinstance(obj, QuipCircuit):
        raise InputError(f"{tool} expects a Quipper circuit")
    return obj


def _legacy(program: QasmProgram) -> QasmProgram:
    return to_qasm2(elim_funs(elim_pows(elim_invs(program))))


def _elim_ctrls(obj, args) -> QasmProgram | QuipCircuit:
    return elim_ctrls_qasm(obj) if isinstance(obj, QasmProgram) else elim_ctrls(obj)


def _quip_to_qasm(obj, args) -> QasmProgram:
    program = quip_to_qasm(_quip(obj, "quip-to-qasm"))
    return _legacy(program) if args.legacy else program


def _qasm_to_quip(obj, args) -> QuipCircuit:
    program = _qasm(obj, "qasm-to-quip")
    if args.legacy and program.version != "2.0":
        raise InputError("qasm-to-quip --legacy expects an OpenQASM 2.0 program")
    return qasm_to_quip(program)


def _to_lsc(obj, args) -> QasmProgram:
    try:
        config = load_lsc_config(args.config) if args.config else None
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"bad whitelist configuration {args.config}: {exc}") from None
    return to_lsc(_qasm(obj, "to-lsc"), config)


def _qasm_pass(name: str, fn: Callable[[QasmProgram], QasmProgram]):
    return lambda obj, args: fn(_qasm(obj, name))


#: name -> (transformer, help text)
TOOLS: dict[str, tuple[Callable, str]] = {
    "elim-ctrls": (_elim_ctrls, "remove multiply-controlled gates (Quipper in, Quipper out; OpenQASM is round-tripped)"),
    "elim-invs": (_qasm_pass("elim-invs", elim_invs), "remove inv modifiers"),
    "elim-pows": (_qasm_pass("elim-pows", elim_pows), "unroll pow modifiers"),
    "elim-funs": (_qasm_pass("elim-funs", elim_funs), "evaluate function calls in gate angles"),
    "qasm-to-quip": (_qasm_to_quip, "translate OpenQASM to Quipper ASCII"),
    "quip-to-qasm": (_quip_to_qasm, "translate Quipper ASCII to OpenQASM 3"),
    "reg-merge": (_qasm_pass("reg-merge", reg_merge), "merge all registers into q[N] and c[M]"),
    "to-lsc": (_to_lsc, "lower an OpenQASM 2.0 program to the lattice-surgery gate subset"),
    "to-qasm2": (_qasm_pass("to-qasm2", to_qasm2), "convert OpenQASM 3 to OpenQASM 2.0"),
}


def run_tool(name: str, text: str, *, legacy: bool = False, config: str | None = None,
             include_path: Sequence[str] = ()) -> str:
    """The text a tool subcommand would print for ``text`` (the in-process composition unit)."""
    fn, _ = TOOLS[name]
    args = argparse.Namespace(legacy=legacy, config=config)
    result = fn(read_program(text, include_path), args)
    return write_qasm(result) if isinstance(result, QasmProgram) else write_quip(result)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quipqasm",
        description="OpenQASM 2.0/3 <-> Quipper ASCII transpiler tools.",
        epilog="Include files are searched in -I directories, then $LINGUA_INCLUDE_PATH, then the bundled libraries.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, (_, help_text) in TOOLS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--in", dest="input", metavar="FILE", help="input file (default: stdin)")
        p.add_argument("--out", dest="output", metavar="FILE", help="output file (default: stdout)")
        p.add_argument("-I", "--include-path", action="append", default=[], metavar="DIR",
                       help="extra directory for include files (repeatable)")
        if name in ("quip-to-qasm", "qasm-to-quip"):
            p.add_argument("--legacy", action="store_true",
                           help="use OpenQASM 2.0 (output for quip-to-qasm, input for qasm-to-quip)")
        if name == "to-lsc":
            p.add_argument("--config", metavar="JSON", help="gate whitelist configuration (default: bundled)")
    p = sub.add_parser("conformance", help="check the translation laws on generated programs",
                       description="Check the translation laws on a generated corpus; exit 1 on any failure.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100, help="corpus seeds (each yields several programs)")
    p.add_argument("--laws", default=",".join(LAWS), help=f"comma-separated subset of: {', '.join(LAWS)}")
    sub.add_parser("verify-catalog", help="check every decomposition rule against the matrix oracle",
                   description="Check every decomposition rule against the matrix oracle; exit 1 on any failure.")
    return parser


def _read_input(path: str | None) -> tuple[str, str]:
    if path is None:
        return sys.stdin.read(), "<stdin>"
    try:
        return Path(path).read_text(encoding="utf-8"), path
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write_output(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _run(args: argparse.Namespace) -> int:
    if args.command == "conformance":
        laws = [n.strip() for n in args.laws.split(",") if n.strip()]
        unknown = [n for n in laws if n not in LAWS]
        if unknown:
            raise InputError(f"unknown law(s): {', '.join(unknown)}")
        report = conformance(args.seed, args.samples, laws)
        print(report.summary())
        return 0 if report.ok else 1
    if args.command == "verify-catalog":
        report = verify_catalog()
        print(report)
        return 0 if report.ok else 1
    text, source = _read_input(args.input)
    try:
        out = run_tool(args.command, text, legacy=getattr(args, "legacy", False),
                       config=getattr(args, "config", None), include_path=args.include_path)
    except INPUT_ERRORS as exc:
        raise InputError(f"{source}: {type(exc).__name__}: {exc}") from None
    _write_output(args.output, out)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    prog = f"quipqasm {args.command}"
    try:
        return _run(args)
    except InputError as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:  # downstream closed the pipe
        return 0
    except Exception as exc:  # any other failure is a broken internal invariant
        print(f"{prog}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
