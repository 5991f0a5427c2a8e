"""Shared intermediate representation for both language families.

Two sibling IRs live here:

* :class:`QasmProgram` -- a flat OpenQASM program (version header, includes,
  register declarations and a statement list).  Gate applications keep their
  surface name (``cx`` vs ``ctrl @ x``) so the reader/writer pair can round-trip
  them exactly; :func:`resolve_gate` maps a name onto a :class:`GateKind`
  plus a count of implicit leading controls.
* :class:`QuipCircuit` -- a Quipper-style circuit over integer-indexed wires
  carrying :class:`WireType` values, with unitary gates and wire-management
  operations (``QInit0``, ``QMeas`` ...).

Everything is immutable; passes build new values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence, Union

from .angles import Expr, Num, fold

# ---------------------------------------------------------------------------
# gate kinds


class GateKind(Enum):
    """Closed enumeration of gate shapes (parameters live on the application)."""

    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    S = "S"
    SDG = "Sdg"
    T = "T"
    TDG = "Tdg"
    SX = "SX"
    IX = "IX"
    OMEGA = "Omega"
    E = "E"
    W = "W"
    SWAP = "Swap"
    RX = "Rx"
    RY = "Ry"
    RZ = "Rz"
    P = "P"
    EXPZ = "ExpZ"
    RGATE = "RGate"
    U = "U"
    U1 = "U1"
    U2 = "U2"
    U3 = "U3"
    CU = "CU"
    GPHASE = "GPhase"

    @property
    def arity(self) -> int:
        """Number of target wires (controls excluded)."""
        return _ARITY.get(self, 1)

    @property
    def nparams(self) -> int:
        return _NPARAMS.get(self, 0)

    @property
    def self_inverse(self) -> bool:
        return self in SELF_INVERSE


_ARITY = {GateKind.W: 2, GateKind.SWAP: 2, GateKind.GPHASE: 0}
_NPARAMS = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.P: 1,
    GateKind.EXPZ: 1,
    GateKind.RGATE: 1,
    GateKind.U: 3,
    GateKind.U1: 1,
    GateKind.U2: 2,
    GateKind.U3: 3,
    GateKind.CU: 4,
    GateKind.GPHASE: 1,
}

SELF_INVERSE = frozenset({GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.SWAP, GateKind.W})

#: Gate kinds with a native Quipper spelling.
QUIPPER_KINDS = frozenset(
    {
        GateKind.X,
        GateKind.Y,
        GateKind.Z,
        GateKind.H,
        GateKind.S,
        GateKind.T,
        GateKind.SX,
        GateKind.IX,
        GateKind.OMEGA,
        GateKind.E,
        GateKind.W,
        GateKind.SWAP,
        GateKind.EXPZ,
        GateKind.RGATE,
        GateKind.GPHASE,
    }
)

#: Quipper ``QGate["..."]`` names; ``X`` is also accepted on input.
QUIPPER_GATE_NAMES: dict[GateKind, str] = {
    GateKind.X: "not",
    GateKind.Y: "Y",
    GateKind.Z: "Z",
    GateKind.H: "H",
    GateKind.S: "S",
    GateKind.T: "T",
    GateKind.SX: "V",
    GateKind.IX: "iX",
    GateKind.OMEGA: "omega",
    GateKind.E: "E",
    GateKind.W: "W",
    GateKind.SWAP: "swap",
}
QUIPPER_ROTATION_NAMES: dict[GateKind, str] = {
    GateKind.EXPZ: "exp(-i%Z)",
    GateKind.RGATE: "R(2pi/%)",
}

# ---------------------------------------------------------------------------
# OpenQASM gate-name tables


@dataclass(frozen=True)
class GateSpec:
    """A surface gate name resolved to a kind plus implicit leading controls."""

    kind: GateKind
    controls: int = 0

    @property
    def operand_count(self) -> int:
        return self.controls + self.kind.arity


K = GateKind

STDGATES: dict[str, GateSpec] = {
    "p": GateSpec(K.P),
    "phase": GateSpec(K.P),
    "x": GateSpec(K.X),
    "y": GateSpec(K.Y),
    "z": GateSpec(K.Z),
    "h": GateSpec(K.H),
    "s": GateSpec(K.S),
    "sdg": GateSpec(K.SDG),
    "t": GateSpec(K.T),
    "tdg": GateSpec(K.TDG),
    "sx": GateSpec(K.SX),
    "rx": GateSpec(K.RX),
    "ry": GateSpec(K.RY),
    "rz": GateSpec(K.RZ),
    "cx": GateSpec(K.X, 1),
    "cy": GateSpec(K.Y, 1),
    "cz": GateSpec(K.Z, 1),
    "cp": GateSpec(K.P, 1),
    "cphase": GateSpec(K.P, 1),
    "crx": GateSpec(K.RX, 1),
    "cry": GateSpec(K.RY, 1),
    "crz": GateSpec(K.RZ, 1),
    "ch": GateSpec(K.H, 1),
    "cu": GateSpec(K.CU, 1),
    "swap": GateSpec(K.SWAP),
    "ccx": GateSpec(K.X, 2),
    "cswap": GateSpec(K.SWAP, 1),
    "u1": GateSpec(K.U1),
    "u2": GateSpec(K.U2),
    "u3": GateSpec(K.U3),
}

# In the legacy library ``rz`` is defined through ``u1`` and therefore acts as
# the phase gate; ``U`` is the legacy three-angle unitary, i.e. ``u3``.
QELIB1: dict[str, GateSpec] = {
    "u3": GateSpec(K.U3),
    "u2": GateSpec(K.U2),
    "u1": GateSpec(K.U1),
    "cx": GateSpec(K.X, 1),
    "x": GateSpec(K.X),
    "y": GateSpec(K.Y),
    "z": GateSpec(K.Z),
    "h": GateSpec(K.H),
    "s": GateSpec(K.S),
    "sdg": GateSpec(K.SDG),
    "t": GateSpec(K.T),
    "tdg": GateSpec(K.TDG),
    "rx": GateSpec(K.RX),
    "ry": GateSpec(K.RY),
    "rz": GateSpec(K.P),
    "cz": GateSpec(K.Z, 1),
    "cy": GateSpec(K.Y, 1),
    "ch": GateSpec(K.H, 1),
    "ccx": GateSpec(K.X, 2),
    "crz": GateSpec(K.RZ, 1),
    "cu1": GateSpec(K.U1, 1),
    "cu3": GateSpec(K.U3, 1),
}

QUIPGATES: dict[str, GateSpec] = {
    "omega": GateSpec(K.OMEGA),
    "E": GateSpec(K.E),
    "iX": GateSpec(K.IX),
    "W": GateSpec(K.W),
    "expZ": GateSpec(K.EXPZ),
    "rGate": GateSpec(K.RGATE),
}

#: Preferred OpenQASM 3 spelling of each kind (without implicit controls).
CANONICAL_NAMES: dict[GateKind, str] = {
    K.X: "x",
    K.Y: "y",
    K.Z: "z",
    K.H: "h",
    K.S: "s",
    K.SDG: "sdg",
    K.T: "t",
    K.TDG: "tdg",
    K.SX: "sx",
    K.IX: "iX",
    K.OMEGA: "omega",
    K.E: "E",
    K.W: "W",
    K.SWAP: "swap",
    K.RX: "rx",
    K.RY: "ry",
    K.RZ: "rz",
    K.P: "p",
    K.EXPZ: "expZ",
    K.RGATE: "rGate",
    K.U: "U",
    K.U1: "u1",
    K.U2: "u2",
    K.U3: "u3",
    K.CU: "cu",
    K.GPHASE: "gphase",
}

BKPGATES: dict[str, GateSpec] = {
    "sx": GateSpec(K.SX),
    "swap": GateSpec(K.SWAP),
    "cswap": GateSpec(K.SWAP, 1),
    "crx": GateSpec(K.RX, 1),
    "cry": GateSpec(K.RY, 1),
}

BUILTINS_3: dict[str, GateSpec] = {
    "U": GateSpec(K.U),
    "gphase": GateSpec(K.GPHASE),
}
BUILTINS_2: dict[str, GateSpec] = {
    "U": GateSpec(K.U3),
    "CX": GateSpec(K.X, 1),
}

#: Runtime function names recognised in call statements.
QUIPFUNCS: dict[str, tuple[str, str | None]] = {
    # name: (operand type, result type)
    "QInit0": ("qubit", None),
    "QInit1": ("qubit", None),
    "QTerm0": ("qubit", None),
    "QTerm1": ("qubit", None),
    "QDiscard": ("qubit", None),
    "QMeas": ("qubit", "bit"),
    "CInit0": ("bit", None),
    "CInit1": ("bit", None),
    "CTerm0": ("bit", None),
    "CTerm1": ("bit", None),
    "CDiscard": ("bit", None),
}

LIBRARY_VERSIONS: dict[str, str] = {
    "stdgates.inc": "3",
    "quipgates.inc": "3",
    "quipfuncs.inc": "3",
    "qelib1.inc": "2.0",
    "bkpgates.inc": "2.0",
}
LIBRARY_GATES: dict[str, dict[str, GateSpec]] = {
    "stdgates.inc": STDGATES,
    "quipgates.inc": QUIPGATES,
    "quipfuncs.inc": {},
    "qelib1.inc": QELIB1,
    "bkpgates.inc": BKPGATES,
}


def gate_table(version: str, includes: Iterable[str]) -> dict[str, GateSpec]:
    """All gate names visible in a program with the given header."""
    table = dict(BUILTINS_2 if version == "2.0" else BUILTINS_3)
    for inc in includes:
        for name, spec in LIBRARY_GATES.get(inc, {}).items():
            table.setdefault(name, spec)
    return table


def resolve_gate(name: str, version: str, includes: Iterable[str] = ()) -> GateSpec | None:
    return gate_table(version, includes).get(name)


# ---------------------------------------------------------------------------
# OpenQASM program IR

CTRL = "ctrl"
NEGCTRL = "negctrl"
INV = "inv"
POW = "pow"


@dataclass(frozen=True)
class Modifier:
    """One entry of a modifier chain; ``arg`` is the exponent for ``pow``."""

    kind: str
    arg: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (CTRL, NEGCTRL, INV, POW):
            raise ValueError(f"unknown modifier {self.kind!r}")
        if (self.kind == POW) != (self.arg is not None):
            raise ValueError("pow modifiers (and only they) carry an integer exponent")

    @property
    def is_control(self) -> bool:
        return self.kind in (CTRL, NEGCTRL)


@dataclass(frozen=True)
class Operand:
    name: str
    index: int | None = None

    def __str__(self) -> str:
        return self.name if self.index is None else f"{self.name}[{self.index}]"


@dataclass(frozen=True)
class GateApply:
    name: str
    params: tuple[Expr, ...] = ()
    operands: tuple[Operand, ...] = ()
    modifiers: tuple[Modifier, ...] = ()
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    @property
    def control_modifiers(self) -> int:
        return sum(1 for m in self.modifiers if m.is_control)


@dataclass(frozen=True)
class Measure:
    src: Operand
    dst: Operand
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Reset:
    target: Operand
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    name: str
    operands: tuple[Operand, ...]
    result: Operand | None = None
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


Statement = Union[GateApply, Measure, Reset, Call]


@dataclass(frozen=True)
class Declaration:
    kind: str  # "qubit" or "bit"
    name: str
    size: int | None = None  # None: scalar register

    @property
    def length(self) -> int:
        return 1 if self.size is None else self.size

    def elements(self) -> list[Operand]:
        if self.size is None:
            return [Operand(self.name)]
        return [Operand(self.name, i) for i in range(self.size)]


@dataclass(frozen=True)
class QasmProgram:
    version: str = "3"
    includes: tuple[str, ...] = ()
    declarations: tuple[Declaration, ...] = ()
    statements: tuple[Statement, ...] = ()
    notes: tuple[str, ...] = ()

    def declaration(self, name: str) -> Declaration | None:
        for d in self.declarations:
            if d.name == name:
                return d
        return None

    def qubits(self) -> list[Operand]:
        """All qubit elements, flattened in declaration order."""
        return [op for d in self.declarations if d.kind == "qubit" for op in d.elements()]

    def bits(self) -> list[Operand]:
        return [op for d in self.declarations if d.kind == "bit" for op in d.elements()]

    def gate_table(self) -> dict[str, GateSpec]:
        return gate_table(self.version, self.includes)


@dataclass(frozen=True)
class Diagnostic:
    index: int  # statement index, or -1 for header/declaration problems
    reason: str

    def __str__(self) -> str:
        where = "header" if self.index < 0 else f"statement {self.index}"
        return f"{where}: {self.reason}"


def statement_operands(stmt: Statement) -> tuple[Operand, ...]:
    """Every operand mentioned by ``stmt`` (results included)."""
    if isinstance(stmt, GateApply):
        return stmt.operands
    if isinstance(stmt, Measure):
        return (stmt.src, stmt.dst)
    if isinstance(stmt, Reset):
        return (stmt.target,)
    return stmt.operands + ((stmt.result,) if stmt.result is not None else ())


def validate(program: QasmProgram) -> list[Diagnostic]:
    """Check the structural invariants of ``program``; an empty list means valid."""
    diags: list[Diagnostic] = []
    v = program.version
    if v not in ("2.0", "3"):
        diags.append(Diagnostic(-1, f"unsupported version {v!r}"))
    for inc in program.includes:
        if inc not in LIBRARY_VERSIONS:
            diags.append(Diagnostic(-1, f"unknown include {inc!r}"))
        elif LIBRARY_VERSIONS[inc] != v:
            diags.append(Diagnostic(-1, f"include {inc!r} is not available in OpenQASM {v}"))
    decls: dict[str, Declaration] = {}
    table = program.gate_table()
    for d in program.declarations:
        if d.name in decls:
            diags.append(Diagnostic(-1, f"duplicate declaration {d.name!r}"))
        if d.kind not in ("qubit", "bit"):
            diags.append(Diagnostic(-1, f"bad declaration kind {d.kind!r}"))
        if d.size is not None and d.size <= 0:
            diags.append(Diagnostic(-1, f"register {d.name!r} must have positive size"))
        if d.size is None and v == "2.0":
            diags.append(Diagnostic(-1, f"scalar register {d.name!r} is not expressible in OpenQASM 2.0"))
        if d.name in QUIPFUNCS:
            diags.append(Diagnostic(-1, f"register name {d.name!r} shadows a runtime function"))
        decls[d.name] = d

    def check_operand(i: int, op: Operand, want: str) -> None:
        d = decls.get(op.name)
        if d is None:
            diags.append(Diagnostic(i, f"undeclared operand {op.name!r}"))
            return
        if d.kind != want:
            diags.append(Diagnostic(i, f"operand {op} is a {d.kind}, expected a {want}"))
        if op.index is None and d.size is not None:
            diags.append(Diagnostic(i, f"broadcast over register {op.name!r} is not supported"))
        if op.index is not None:
            if d.size is None:
                diags.append(Diagnostic(i, f"scalar register {op.name!r} cannot be indexed"))
            elif not 0 <= op.index < d.size:
                diags.append(Diagnostic(i, f"index {op.index} out of range for {op.name!r}[{d.size}]"))

    for i, stmt in enumerate(program.statements):
        if isinstance(stmt, GateApply):
            spec = table.get(stmt.name)
            if spec is None:
                diags.append(Diagnostic(i, f"unknown gate {stmt.name!r}"))
                continue
            if v == "2.0" and stmt.modifiers:
                diags.append(Diagnostic(i, "gate modifiers are not available in OpenQASM 2.0"))
            if len(stmt.params) != spec.kind.nparams:
                diags.append(
                    Diagnostic(i, f"gate {stmt.name!r} takes {spec.kind.nparams} parameter(s), got {len(stmt.params)}")
                )
            want = spec.operand_count + stmt.control_modifiers
            if len(stmt.operands) != want:
                diags.append(
                    Diagnostic(i, f"arity mismatch: {stmt.name!r} with {stmt.control_modifiers} control modifier(s) "
                               f"expects {want} operand(s), got {len(stmt.operands)}")
                )
            for op in stmt.operands:
                check_operand(i, op, "qubit")
            if len(set(stmt.operands)) != len(stmt.operands):
                diags.append(Diagnostic(i, "repeated operand in gate application"))
        elif isinstance(stmt, Measure):
            check_operand(i, stmt.src, "qubit")
            check_operand(i, stmt.dst, "bit")
        elif isinstance(stmt, Reset):
            check_operand(i, stmt.target, "qubit")
        elif isinstance(stmt, Call):
            sig = QUIPFUNCS.get(stmt.name)
            if sig is None:
                diags.append(Diagnostic(i, f"unknown function {stmt.name!r}"))
                continue
            if v == "2.0":
                diags.append(Diagnostic(i, "function calls are not available in OpenQASM 2.0"))
            if "quipfuncs.inc" not in program.includes:
                diags.append(Diagnostic(i, f"function {stmt.name!r} requires include \"quipfuncs.inc\""))
            if len(stmt.operands) != 1:
                diags.append(Diagnostic(i, f"{stmt.name} takes exactly one argument"))
            for op in stmt.operands:
                check_operand(i, op, sig[0])
            if (stmt.result is None) != (sig[1] is None):
                diags.append(Diagnostic(i, f"{stmt.name} result assignment mismatch"))
            if stmt.result is not None and sig[1] is not None:
                check_operand(i, stmt.result, sig[1])
        else:
            diags.append(Diagnostic(i, f"unknown statement {stmt!r}"))
    return diags


# ---------------------------------------------------------------------------
# Quipper circuit IR


class WireType(Enum):
    QBIT = "Qbit"
    CBIT = "Cbit"


@dataclass(frozen=True)
class Control:
    wire: int
    positive: bool = True

    def __str__(self) -> str:
        return f"{'+' if self.positive else '-'}{self.wire}"


@dataclass(frozen=True)
class Unitary:
    """A (possibly controlled, possibly inverted) unitary gate.

    A global phase is represented with ``kind=GPHASE`` and no target wires.
    """

    kind: GateKind
    wires: tuple[int, ...]
    params: tuple[float, ...] = ()
    controls: tuple[Control, ...] = ()
    inverted: bool = False

    def all_wires(self) -> tuple[int, ...]:
        return self.wires + tuple(c.wire for c in self.controls)


def gphase(angle: float, controls: Sequence[Control] = (), inverted: bool = False) -> Unitary:
    return Unitary(GateKind.GPHASE, (), (angle,), tuple(controls), inverted)


# name: (DFA event, required type before or None, resulting type or None)
WIRE_OPS: dict[str, tuple[str, WireType | None, WireType | None]] = {
    "QInit0": ("Init", None, WireType.QBIT),
    "QInit1": ("Init", None, WireType.QBIT),
    "QTerm0": ("Term", WireType.QBIT, None),
    "QTerm1": ("Term", WireType.QBIT, None),
    "QDiscard": ("Term", WireType.QBIT, None),
    "QMeas": ("Use", WireType.QBIT, WireType.CBIT),
    "CInit0": ("Init", None, WireType.CBIT),
    "CInit1": ("Init", None, WireType.CBIT),
    "CTerm0": ("Term", WireType.CBIT, None),
    "CTerm1": ("Term", WireType.CBIT, None),
    "CDiscard": ("Term", WireType.CBIT, None),
}


@dataclass(frozen=True)
class WireOp:
    """Wire management: preparation, termination, discarding and measurement."""

    op: str
    wire: int

    def __post_init__(self) -> None:
        if self.op not in WIRE_OPS:
            raise ValueError(f"unknown wire operation {self.op!r}")

    @property
    def event(self) -> str:
        return WIRE_OPS[self.op][0]


QuipGate = Union[Unitary, WireOp]


def gate_wires(gate: QuipGate) -> tuple[int, ...]:
    return gate.all_wires() if isinstance(gate, Unitary) else (gate.wire,)


@dataclass(frozen=True)
class QuipCircuit:
    inputs: tuple[tuple[int, WireType], ...] = ()
    gates: tuple[QuipGate, ...] = ()
    outputs: tuple[tuple[int, WireType], ...] = ()

    @classmethod
    def build(cls, inputs: Iterable[tuple[int, WireType]], gates: Iterable[QuipGate]) -> "QuipCircuit":
        """Construct a circuit, inferring the outputs from inputs and gates."""
        ins = tuple(sorted(inputs))
        gs = tuple(gates)
        return cls(ins, gs, infer_outputs(ins, gs))

    @property
    def input_map(self) -> dict[int, WireType]:
        return dict(self.inputs)

    @property
    def output_map(self) -> dict[int, WireType]:
        return dict(self.outputs)

    def wires(self) -> list[int]:
        seen = dict.fromkeys(w for w, _ in self.inputs)
        for g in self.gates:
            seen.update(dict.fromkeys(gate_wires(g)))
        return sorted(seen)


class WireTypeError(ValueError):
    """A gate is applied to a wire of the wrong type (or to a dead wire)."""

    def __init__(self, message: str, wire: int, index: int) -> None:
        super().__init__(f"gate {index}, wire {wire}: {message}")
        self.wire = wire
        self.index = index


def infer_outputs(
    inputs: Iterable[tuple[int, WireType]], gates: Iterable[QuipGate]
) -> tuple[tuple[int, WireType], ...]:
    """Track wire types through ``gates`` and return the live wires at the end.

    Raises :class:`WireTypeError` for type mismatches and for uses of wires
    that are not live; the finer-grained lifetime diagnosis is the job of the
    wire automaton in :mod:`quipqasm.dfa`.
    """
    live: dict[int, WireType] = dict(inputs)
    for i, g in enumerate(gates):
        if isinstance(g, Unitary):
            wires = g.all_wires()
            if len(set(wires)) != len(wires):
                raise WireTypeError("wire repeated within a single gate", wires[0], i)
            for w in wires:
                t = live.get(w)
                if t is None:
                    raise WireTypeError("gate applied to a wire that is not live", w, i)
                if t is not WireType.QBIT:
                    raise WireTypeError("unitary gate applied to a Cbit wire", w, i)
            continue
        event, before, after = WIRE_OPS[g.op]
        t = live.get(g.wire)
        if event == "Init":
            if t is not None:
                raise WireTypeError(f"{g.op} on a wire that is already live", g.wire, i)
        else:
            if t is None:
                raise WireTypeError(f"{g.op} on a wire that is not live", g.wire, i)
            if t is not before:
                raise WireTypeError(f"{g.op} expects a {before.value} wire, found {t.value}", g.wire, i)
        if after is None:
            del live[g.wire]
        else:
            live[g.wire] = after
    return tuple(sorted(live.items()))


# ---------------------------------------------------------------------------
# normalisation and structural equality


def _canon_float(x: float) -> float:
    return float(x) + 0.0


def _first_use_order(program: QasmProgram) -> list[Declaration]:
    used: dict[str, None] = {}
    for stmt in program.statements:
        for op in statement_operands(stmt):
            used.setdefault(op.name, None)
    by_name = {d.name: d for d in program.declarations}
    ordered = [by_name[n] for n in used if n in by_name]
    ordered += [d for d in program.declarations if d.name not in used]
    return ordered


def _normalize_qasm(program: QasmProgram, alpha: bool) -> QasmProgram:
    decls = _first_use_order(program)
    rename: dict[str, str] = {}
    if alpha:
        rename = {d.name: f"r{i}" for i, d in enumerate(decls)}
    ren = lambda op: op if not alpha else Operand(rename.get(op.name, op.name), op.index)  # noqa: E731

    stmts: list[Statement] = []
    for s in program.statements:
        if isinstance(s, GateApply):
            params = tuple(fold(p) for p in s.params)
            stmts.append(GateApply(s.name, params, tuple(ren(o) for o in s.operands), s.modifiers))
        elif isinstance(s, Measure):
            stmts.append(Measure(ren(s.src), ren(s.dst)))
        elif isinstance(s, Reset):
            stmts.append(Reset(ren(s.target)))
        else:
            res = ren(s.result) if s.result is not None else None
            stmts.append(Call(s.name, tuple(ren(o) for o in s.operands), res))
    new_decls = tuple(replace(d, name=rename.get(d.name, d.name)) for d in decls)
    return QasmProgram(program.version, tuple(sorted(set(program.includes))), new_decls, tuple(stmts))


def _normalize_quip(circuit: QuipCircuit, alpha: bool) -> QuipCircuit:
    mapping: dict[int, int] = {}
    if alpha:
        for w, _ in sorted(circuit.inputs):
            mapping[w] = len(mapping)
        for g in circuit.gates:
            for w in gate_wires(g):
                if w not in mapping:
                    mapping[w] = len(mapping)
    m = lambda w: mapping.get(w, w)  # noqa: E731

    gates: list[QuipGate] = []
    for g in circuit.gates:
        if isinstance(g, Unitary):
            gates.append(
                Unitary(
                    g.kind,
                    tuple(m(w) for w in g.wires),
                    tuple(_canon_float(p) for p in g.params),
                    tuple(Control(m(c.wire), c.positive) for c in g.controls),
                    g.inverted,
                )
            )
        else:
            gates.append(WireOp(g.op, m(g.wire)))
    ins = tuple(sorted((m(w), t) for w, t in circuit.inputs))
    outs = tuple(sorted((m(w), t) for w, t in circuit.outputs))
    return QuipCircuit(ins, tuple(gates), outs)


def normalize(obj, alpha: bool = False):
    """Canonical form of a program or circuit.

    For OpenQASM programs: includes sorted, declarations ordered by first use,
    every angle folded to a literal and notes dropped.  For circuits: inputs and
    outputs sorted and angles canonicalised.  With ``alpha=True`` register names
    (respectively wire indices) are replaced by canonical ones -- inputs first,
    then other wires by first appearance.
    """
    if isinstance(obj, QasmProgram):
        return _normalize_qasm(obj, alpha)
    if isinstance(obj, QuipCircuit):
        return _normalize_quip(obj, alpha)
    raise TypeError(f"cannot normalise {type(obj).__name__}")


def structural_eq(a, b, alpha: bool = False) -> bool:
    """Equality of normalised forms; ``alpha`` also identifies renamings."""
    if type(a) is not type(b):
        return False
    return normalize(a, alpha) == normalize(b, alpha)


def is_close_angle(a: float, b: float, tol: float = 1e-9) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)


__all__ = [
    "BKPGATES",
    "BUILTINS_2",
    "BUILTINS_3",
    "CANONICAL_NAMES",
    "CTRL",
    "Call",
    "Control",
    "Declaration",
    "Diagnostic",
    "GateApply",
    "GateKind",
    "GateSpec",
    "INV",
    "LIBRARY_GATES",
    "LIBRARY_VERSIONS",
    "Measure",
    "Modifier",
    "NEGCTRL",
    "Num",
    "Operand",
    "POW",
    "QELIB1",
    "QUIPFUNCS",
    "QUIPGATES",
    "QUIPPER_GATE_NAMES",
    "QUIPPER_KINDS",
    "QUIPPER_ROTATION_NAMES",
    "QasmProgram",
    "QuipCircuit",
    "QuipGate",
    "Reset",
    "SELF_INVERSE",
    "STDGATES",
    "Statement",
    "Unitary",
    "WIRE_OPS",
    "WireOp",
    "WireType",
    "WireTypeError",
    "gate_table",
    "gate_wires",
    "gphase",
    "infer_outputs",
    "normalize",
    "resolve_gate",
    "statement_operands",
    "structural_eq",
    "validate",
]
