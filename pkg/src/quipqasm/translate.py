"""The two central translators: Quipper -> OpenQASM 3 and OpenQASM -> Quipper.

``quip_to_qasm`` keeps every Quipper gate as one OpenQASM statement: input
wires become the array ``input_qwires`` (``input_cwires`` for classical
inputs), every other wire gets ``qtmp_k``/``ctmp_k`` shadow registers on
demand, and wire management is written as calls to the runtime functions of
``quipfuncs.inc``.  ``qasm_to_quip`` reads those calls back as native wire
operations, which is how a round translation recovers the ancillas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .angles import Num, evaluate
from .catalog import CatalogError, inverse_sequence, lookup, rules_for
from .dfa import DFAError, ShadowMap, WireReport, check_circuit, shadow_alloc
from .ir import (
    CANONICAL_NAMES,
    CTRL,
    INV,
    NEGCTRL,
    POW,
    QUIPFUNCS,
    QUIPPER_KINDS,
    Call,
    Control,
    Declaration,
    GateApply,
    GateKind,
    Measure,
    Modifier,
    Operand,
    QasmProgram,
    QuipCircuit,
    QuipGate,
    Reset,
    Unitary,
    WIRE_OPS,
    WireOp,
    WireType,
    WireTypeError,
    validate,
)

K = GateKind

__all__ = [
    "QasmToQuip",
    "QuipToQasm",
    "TranslationError",
    "expand_gate_apply",
    "qasm_to_quip",
    "quip_to_qasm",
    "render_qasm3",
]

QUIP_TO_QASM_INCLUDES = ("stdgates.inc", "quipgates.inc", "quipfuncs.inc")


class TranslationError(ValueError):
    """The input cannot be translated (unsupported construct or invalid lifetimes)."""


# ---------------------------------------------------------------------------
# Quipper gates as OpenQASM 3 statements

#: (kind, trailing positive controls) -> first-class OpenQASM 3 name
FIRST_CLASS_NAMES: dict[tuple[GateKind, int], str] = {
    (K.X, 1): "cx",
    (K.X, 2): "ccx",
    (K.Y, 1): "cy",
    (K.Z, 1): "cz",
    (K.H, 1): "ch",
    (K.SWAP, 1): "cswap",
    (K.P, 1): "cp",
    (K.RZ, 1): "crz",
}


def _control_mods(controls: Sequence[Control]) -> tuple[Modifier, ...]:
    return tuple(Modifier(CTRL if c.positive else NEGCTRL) for c in controls)


def render_qasm3(g: Unitary, operand_of) -> GateApply:
    """One OpenQASM 3 statement for a Quipper gate.

    Trailing positive controls are folded into a first-class name where one
    exists (``cx``, ``ccx``, ``cz``, ...); the rest become ``ctrl``/``negctrl``
    modifiers.  A controlled global phase whose last control is positive is
    written as a phase gate on that control (``p``/``cp``); ``R(2pi/k)`` is
    written as the phase ``2*pi/2**k`` on its target, and a controlled ``expZ(t)``
    as ``crz(2t)``.
    """
    kind, params, controls, targets = g.kind, tuple(g.params), tuple(g.controls), tuple(g.wires)
    if kind is K.RGATE:
        kind, params = K.P, (_rgate_angle(params[0]),)
    if kind is K.GPHASE and controls and controls[-1].positive:
        kind, targets, controls = K.P, (controls[-1].wire,), controls[:-1]
    if kind is K.EXPZ and controls and controls[-1].positive:
        kind, params = K.RZ, (2 * params[0],)  # exp(-i t Z) = Rz(2t), so controlled it is crz
    inverted = g.inverted
    name = CANONICAL_NAMES[kind]
    if inverted and kind in (K.S, K.T):
        name, inverted = ("sdg" if kind is K.S else "tdg"), False
    absorbed = 0
    for n in (2, 1):
        if (kind, n) in FIRST_CLASS_NAMES and name == CANONICAL_NAMES[kind]:
            if len(controls) >= n and all(c.positive for c in controls[len(controls) - n :]):
                name, absorbed = FIRST_CLASS_NAMES[(kind, n)], n
                break
    mods = _control_mods(controls[: len(controls) - absorbed])
    if inverted:
        mods = mods + (Modifier(INV),)
    wires = [c.wire for c in controls] + list(targets)
    return GateApply(name, tuple(Num(float(p) + 0.0) for p in params), tuple(operand_of(w) for w in wires), mods)


def _rgate_angle(k: float) -> float:
    return 2 * math.pi / 2.0 ** float(k)


# ---------------------------------------------------------------------------
# Quipper -> OpenQASM 3


@dataclass
class QuipToQasm:
    """Translator state: the shadow map and the automaton report are kept for inspection."""

    circuit: QuipCircuit
    shadows: ShadowMap = field(default_factory=ShadowMap)
    report: WireReport | None = None
    program: QasmProgram | None = None

    def run(self) -> QasmProgram:
        try:
            self.report = check_circuit(self.circuit)
        except DFAError as exc:
            raise TranslationError(str(exc)) from exc
        qin = [w for w, t in self.circuit.inputs if t is WireType.QBIT]
        cin = [w for w, t in self.circuit.inputs if t is WireType.CBIT]
        decls: list[Declaration] = []
        if qin:
            decls.append(Declaration("qubit", "input_qwires", len(qin)))
        if cin:
            decls.append(Declaration("bit", "input_cwires", len(cin)))
        for i, w in enumerate(qin):
            self.shadows.bind(w, Operand("input_qwires", i), WireType.QBIT)
        for i, w in enumerate(cin):
            self.shadows.bind(w, Operand("input_cwires", i), WireType.CBIT)
        stmts = []
        for g in self.circuit.gates:
            stmts.append(self._statement(g))
        decls += [Declaration(kind, name) for kind, name in self.shadows.allocated]
        self.program = QasmProgram("3", QUIP_TO_QASM_INCLUDES, tuple(decls), tuple(stmts))
        diags = validate(self.program)
        if diags:  # pragma: no cover - invariant
            raise AssertionError(f"translator produced an invalid program: {diags[0]}")
        return self.program

    def _statement(self, g: QuipGate):
        if isinstance(g, Unitary):
            if g.kind not in QUIPPER_KINDS:
                raise TranslationError(f"unsupported Quipper gate {g.kind.value}")
            return render_qasm3(g, self.shadows.carrier)
        op = g.op
        if op in ("QInit0", "QInit1"):
            _, ref = shadow_alloc(self.shadows, g.wire, WireType.QBIT)
            return Call(op, (ref,))
        if op in ("CInit0", "CInit1"):
            _, ref = shadow_alloc(self.shadows, g.wire, WireType.CBIT)
            return Call(op, (ref,))
        if op == "QMeas":
            q = self.shadows.carrier(g.wire)
            _, c = shadow_alloc(self.shadows, g.wire, WireType.CBIT)
            return Call("QMeas", (q,), c)
        return Call(op, (self.shadows.carrier(g.wire),))


def quip_to_qasm(circuit: QuipCircuit) -> QasmProgram:
    return QuipToQasm(circuit).run()


# ---------------------------------------------------------------------------
# OpenQASM -> Quipper


def _modifier_effect(mods: Sequence[Modifier]) -> tuple[list[bool], bool, int]:
    """Control polarities (in operand order), inversion parity and the total power."""
    polarity = [m.kind == CTRL for m in mods if m.is_control]
    inverted = sum(1 for m in mods if m.kind == INV) % 2 == 1
    power = 1
    for m in mods:
        if m.kind == POW:
            power *= int(m.arg)  # type: ignore[arg-type]
    return polarity, inverted, power


def expand_gate_apply(stmt: GateApply, program: QasmProgram, wire_of) -> list[Unitary]:
    """Quipper gates realising one OpenQASM gate application exactly."""
    spec = program.gate_table().get(stmt.name)
    if spec is None:
        raise TranslationError(f"unknown gate {stmt.name!r}")
    polarity, inverted, power = _modifier_effect(stmt.modifiers)
    wires = [wire_of(o) for o in stmt.operands]
    nmod = len(polarity)
    controls = tuple(Control(w, p) for w, p in zip(wires[:nmod], polarity))
    controls += tuple(Control(w) for w in wires[nmod : nmod + spec.controls])
    targets = tuple(wires[nmod + spec.controls :])
    params = tuple(evaluate(p) for p in stmt.params)
    if power < 0:
        inverted, power = not inverted, -power
    if spec.kind in QUIPPER_KINDS and spec.kind is not K.RGATE:
        if spec.kind is K.GPHASE:
            one: list[Unitary] = [Unitary(K.GPHASE, (), params, controls, inverted)]
        else:
            one = [Unitary(spec.kind, targets, params, controls, inverted)]
    else:
        try:
            if spec.kind is K.U1:
                # u1 is the phase gate: read it as one so phases at pi/4 multiples stay snappable
                rule = lookup(K.P, len(controls), False, "quipper", params)
            elif spec.kind is K.RGATE:
                # read as the phase it denotes, matching how the other direction writes it
                rule = rules_for("rgate-as-controlled-phase")
            else:
                rule = lookup(spec.kind, len(controls), False, "quipper", params)
        except CatalogError as exc:
            raise TranslationError(str(exc)) from exc
        body = rule.expand(params, controls, targets)  # type: ignore[union-attr]
        one = inverse_sequence(body) if inverted else body  # type: ignore[assignment]
    return one * power


@dataclass
class QasmToQuip:
    """Translator state; ``wires`` records the wire each register element is bound to.

    Elements whose first mention is a use (or that are never mentioned) are the
    circuit inputs and get wires ``0..k-1``, qubits before bits, in declaration
    order.  Elements linked by ``c = QMeas(q)`` form one class sharing a home
    wire; a preparation goes to the home wire unless it is live, in which case
    (like every ``measure`` ancilla) it gets a never-used wire.  Termination
    unbinds all elements sitting on the wire.
    """

    program: QasmProgram
    wires: dict[Operand, int | None] = field(default_factory=dict)
    report: WireReport | None = None
    circuit: QuipCircuit | None = None

    def run(self) -> QuipCircuit:
        prog = self.program
        diags = validate(prog)
        if diags:
            raise TranslationError(str(diags[0]))
        self._gates: list[QuipGate] = []
        self._live: dict[int, WireType] = {}
        self._owner: dict[int, Operand] = {}  # bit element holding a live Cbit wire
        inputs = self._bind_inputs()
        reads = self._result_reads()
        for index, stmt in enumerate(prog.statements):
            if isinstance(stmt, GateApply):
                wire_of = {o: self._use(o, index) for o in stmt.operands}
                for g in expand_gate_apply(stmt, prog, wire_of.__getitem__):
                    self._emit(g)
            elif isinstance(stmt, Reset):
                w = self._use(stmt.target, index)
                self._emit(WireOp("QDiscard", w))
                self._emit(WireOp("QInit0", w))
                self.wires[stmt.target] = w
            elif isinstance(stmt, Measure):
                w = self._use(stmt.src, index)
                self._drop_old_result(stmt.dst)
                anc = self._fresh()
                self._emit(WireOp("QInit0", anc))
                self._emit(Unitary(K.X, (anc,), (), (Control(w),)))
                self._emit(WireOp("QMeas", anc))
                self._bind_bit(stmt.dst, anc)
                if index not in reads:
                    self._emit(WireOp("CDiscard", anc))
            else:
                self._call(stmt, index)
        try:
            self.report = check_circuit(inputs, self._gates)
            self.circuit = QuipCircuit.build(inputs, self._gates)
        except (DFAError, WireTypeError) as exc:
            raise TranslationError(str(exc)) from exc
        return self.circuit

    # -- helpers ----------------------------------------------------------
    def _bind_inputs(self) -> list[tuple[int, WireType]]:
        first: dict[Operand, str] = {}
        parent: dict[Operand, Operand] = {}

        def root(op: Operand) -> Operand:
            while parent.get(op, op) != op:
                op = parent[op]
            return op

        for stmt in self.program.statements:
            for op, event in _mentions(stmt):
                first.setdefault(op, event)
            if isinstance(stmt, Call) and stmt.result is not None:
                a, b = root(stmt.operands[0]), root(stmt.result)
                if a != b:
                    parent[b] = a
        self._root = root
        self._home: dict[Operand, int] = {}
        inputs: list[tuple[int, WireType]] = []
        for kind, wtype in (("qubit", WireType.QBIT), ("bit", WireType.CBIT)):
            for d in self.program.declarations:
                if d.kind != kind:
                    continue
                for op in d.elements():
                    if first.get(op, "Use") == "Use":
                        w = len(inputs)
                        inputs.append((w, wtype))
                        self.wires[op] = w
                        self._live[w] = wtype
                        self._home.setdefault(root(op), w)
                        if wtype is WireType.CBIT:
                            self._owner[w] = op
        self._next = len(inputs)
        for d in self.program.declarations:
            for op in d.elements():
                if root(op) not in self._home:
                    self._home[root(op)] = self._fresh()
        return inputs

    def _fresh(self) -> int:
        w = self._next
        self._next += 1
        return w

    def _init_wire(self, op: Operand) -> int:
        w = self._home[self._root(op)]
        return self._fresh() if w in self._live else w

    def _emit(self, g: QuipGate) -> None:
        self._gates.append(g)
        if isinstance(g, Unitary):
            return
        event, _, after = WIRE_OPS[g.op]
        if event == "Term":
            self._live.pop(g.wire, None)
            self._owner.pop(g.wire, None)
            for op, w in self.wires.items():
                if w == g.wire:
                    self.wires[op] = None
        elif after is not None:
            self._live[g.wire] = after

    def _use(self, op: Operand, index: int) -> int:
        w = self.wires.get(op)
        if w is None:
            state = "after termination" if op in self.wires else "before preparation"
            raise TranslationError(f"statement {index}: {op} is used {state}")
        return w

    def _bind_bit(self, bit: Operand, w: int) -> None:
        self.wires[bit] = w
        self._owner[w] = bit

    def _drop_old_result(self, dst: Operand) -> None:
        """Discard the classical wire a bit currently holds before it is overwritten."""
        w = self.wires.get(dst)
        if w is not None and self._owner.get(w) == dst:
            self._emit(WireOp("CDiscard", w))

    def _result_reads(self) -> set[int]:
        """Indices of measurements whose result is read (by a call) before being overwritten."""
        read: set[int] = set()
        pending: dict[Operand, int] = {}
        for i, stmt in enumerate(self.program.statements):
            if isinstance(stmt, Call):
                for op in stmt.operands:
                    if op in pending:
                        read.add(pending.pop(op))
                if stmt.result is not None:
                    pending.pop(stmt.result, None)
            elif isinstance(stmt, Measure):
                pending[stmt.dst] = i
        return read

    def _call(self, stmt: Call, index: int) -> None:
        name = stmt.name
        if name not in QUIPFUNCS:
            raise TranslationError(f"unsupported call {name!r}")
        (arg,) = stmt.operands
        event, _, after = WIRE_OPS[name]
        if event == "Init":
            w = self.wires.get(arg)
            if w is None or self._live.get(w) is not after:
                w = self._init_wire(arg)
            self.wires[arg] = w
            self._emit(WireOp(name, w))
            if after is WireType.CBIT:
                self._owner[w] = arg
            return
        w = self._use(arg, index)
        if name == "QMeas":
            assert stmt.result is not None
            self._drop_old_result(stmt.result)
            self._emit(WireOp(name, w))
            self._bind_bit(stmt.result, w)
            return
        self._emit(WireOp(name, w))


def _mentions(stmt) -> list[tuple[Operand, str]]:
    """``(element, first-event)`` pairs for the elements a statement mentions, in order."""
    if isinstance(stmt, GateApply):
        return [(o, "Use") for o in stmt.operands]
    if isinstance(stmt, Reset):
        return [(stmt.target, "Use")]
    if isinstance(stmt, Measure):
        return [(stmt.src, "Use"), (stmt.dst, "Bind")]
    event = "Init" if WIRE_OPS[stmt.name][0] == "Init" else "Use"
    out = [(o, event) for o in stmt.operands]
    if stmt.result is not None:
        out.append((stmt.result, "Bind"))
    return out


def qasm_to_quip(program: QasmProgram) -> QuipCircuit:
    return QasmToQuip(program).run()

