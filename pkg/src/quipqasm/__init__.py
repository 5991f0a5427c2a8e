"""OpenQASM 2.0/3 <-> Quipper ASCII transpiler toolkit with a dense-matrix oracle.

The package is a set of single-purpose transformers over two sibling IRs
(:class:`QasmProgram` and :class:`QuipCircuit`), each also exposed as a CLI
subcommand so that they compose through pipes.
"""

from __future__ import annotations

from .catalog import lookup, verify_catalog
from .dfa import DFAError, DoubleInit, TermBeforeInit, UseAfterTerm, UseBeforeInit, check_circuit
from .harness import check_laws, conformance, gen_qasm, gen_quip
from .ir import QasmProgram, QuipCircuit, normalize, structural_eq
from .oracle import circuit_matrix, eq_upto_phase, operator
from .passes import (
    PassError,
    elim_ctrls,
    elim_ctrls_qasm,
    elim_funs,
    elim_invs,
    elim_pows,
    reg_merge,
    to_lsc,
    to_qasm2,
)
from .qasm import QasmError, parse_qasm, write_qasm
from .quipper import QuipperSyntaxError, parse_quip, write_quip
from .translate import TranslationError, qasm_to_quip, quip_to_qasm

__version__ = "0.1.0"

__all__ = [
    "DFAError",
    "DoubleInit",
    "PassError",
    "QasmError",
    "QasmProgram",
    "QuipCircuit",
    "QuipperSyntaxError",
    "TermBeforeInit",
    "TranslationError",
    "UseAfterTerm",
    "UseBeforeInit",
    "check_circuit",
    "check_laws",
    "circuit_matrix",
    "conformance",
    "elim_ctrls",
    "elim_ctrls_qasm",
    "elim_funs",
    "elim_invs",
    "elim_pows",
    "eq_upto_phase",
    "gen_qasm",
    "gen_quip",
    "lookup",
    "normalize",
    "operator",
    "parse_qasm",
    "parse_quip",
    "quip_to_qasm",
    "qasm_to_quip",
    "reg_merge",
    "structural_eq",
    "to_lsc",
    "to_qasm2",
    "verify_catalog",
    "write_qasm",
    "write_quip",
]
