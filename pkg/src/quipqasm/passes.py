"""Program-to-program pipeline tools.

``elim_ctrls`` works on Quipper circuits; every other pass rewrites an
OpenQASM program.  All passes are pure functions and are idempotent.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib.resources import files
from typing import Callable, Iterable, Sequence

from .angles import Expr, Neg, Num, contains_call, evaluate, render
from .catalog import (
    BASE,
    ELIM_ADMITTED,
    CatalogError,
    effective_controls,
    eighth_turns,
    inverse_gate,
    inverse_sequence,
    lookup,
    rules_for,
)
from .ir import (
    CANONICAL_NAMES,
    CTRL,
    INV,
    POW,
    QUIPPER_KINDS,
    Call,
    Control,
    Declaration,
    GateApply,
    GateKind,
    GateSpec,
    Measure,
    Modifier,
    Operand,
    QasmProgram,
    QuipCircuit,
    QuipGate,
    Reset,
    Unitary,
    WireOp,
    gate_table,
    validate,
)

K = GateKind

__all__ = [
    "LscConfig",
    "PassError",
    "control_census",
    "elim_ctrls",
    "elim_ctrls_qasm",
    "elim_funs",
    "elim_invs",
    "elim_pows",
    "load_lsc_config",
    "lower_gate",
    "modifier_census",
    "reg_merge",
    "to_lsc",
    "to_qasm2",
]


class PassError(ValueError):
    """A pass cannot rewrite its input (precondition violated or catalog hole)."""


# ---------------------------------------------------------------------------
# control elimination (Quipper IR)

_TWO_CONTROL_FIGURES = {
    K.X: "cc-x-four-ancillas",
    K.Z: "cc-z-four-ancillas",
    K.IX: "cc-ix-one-ancilla",
}
_SNAP_RULES = {K.P: "phase-snap", K.U1: "u1-snap", K.GPHASE: "gphase-snap"}
_MAX_DEPTH = 64


def _flip_negative(g: Unitary) -> list[QuipGate] | None:
    """``g`` with negative controls conjugated by X, or ``None`` if all are positive."""
    neg = [c.wire for c in g.controls if not c.positive]
    if not neg:
        return None
    flips = [Unitary(K.X, (w,)) for w in neg]
    positive = replace(g, controls=tuple(Control(c.wire) for c in g.controls))
    return flips + [positive] + flips


def _admitted(g: Unitary) -> bool:
    n = effective_controls(g)
    if n == 0:
        return g.kind in QUIPPER_KINDS
    return (g.kind, n) in ELIM_ADMITTED and all(c.positive for c in g.controls)


def _snap_rule(g: Unitary):
    """Phase rule for a controlled phase at a multiple of pi/4, if any."""
    name = _SNAP_RULES.get(g.kind)
    if name is None or effective_controls(g) < 1 or eighth_turns(g.params[0]) is None:
        return None
    return rules_for(name)


def _allocate(live: set[int], count: int) -> tuple[int, ...]:
    out: list[int] = []
    w = 0
    while len(out) < count:
        if w not in live:
            out.append(w)
        w += 1
    return tuple(out)


def _elim_list(gates: Iterable[QuipGate], live: set[int], depth: int) -> list[QuipGate]:
    out: list[QuipGate] = []
    for g in gates:
        if isinstance(g, WireOp):
            if g.event == "Init":
                live.add(g.wire)
            elif g.event == "Term":
                live.discard(g.wire)
            out.append(g)
        else:
            out.extend(_elim_one(g, live, depth))
    return out


def _elim_one(g: Unitary, live: set[int], depth: int) -> list[QuipGate]:
    if depth > _MAX_DEPTH:
        raise PassError(f"control elimination does not terminate on {g.kind.value}")
    flipped = _flip_negative(g)
    if flipped is not None:
        return _elim_list(flipped, live, depth + 1)
    snap = _snap_rule(g)
    if snap is None and _admitted(g):
        return [g]
    if g.inverted and not g.kind.self_inverse:
        plain = replace(g, inverted=False)
        return inverse_sequence(_elim_one(plain, live, depth + 1))
    n = effective_controls(g)
    if snap is not None:
        rule = snap
    elif n == 2 and g.kind in _TWO_CONTROL_FIGURES:
        rule = rules_for(_TWO_CONTROL_FIGURES[g.kind])
    elif n >= 2:
        try:
            rule = rules_for(f"toffoli-like-reduce-{g.kind.value.lower()}")
        except CatalogError:
            raise PassError(f"no control reduction for {g.kind.value} with {n} controls") from None
    else:
        try:
            found = lookup(g.kind, n, False, "quipper", g.params)
        except CatalogError as exc:
            raise PassError(f"cannot eliminate controls of {g.kind.value}: {exc}") from None
        if found == BASE:  # pragma: no cover - admitted gates returned above
            return [g]
        rule = found  # type: ignore[assignment]
    if g.kind is K.GPHASE:
        controls, targets = g.controls, ()
    else:
        controls, targets = g.controls, g.wires
    ancillas = _allocate(live | set(g.all_wires()), rule.ancillas)
    body = rule.instantiate(g.params, controls, targets, ancillas)
    return _elim_list(body, live, depth + 1)


def elim_ctrls(circuit: QuipCircuit) -> QuipCircuit:
    """Reduce every gate to the admitted control counts (at most one effective control).

    Negative controls are conjugated by X; two-control X, Z and iX use their
    ancilla figures; other multiply-controlled gates shed one control at a
    time through a Toffoli-like gate and one ancilla; single-controlled gates
    then use their single-control rules.  Controlled phases that are
    multiples of pi/4 become named Clifford+T gates first.  Ancillas take the
    smallest wire indices that are not live at that point.
    """
    live = {w for w, _ in circuit.inputs}
    gates = _elim_list(circuit.gates, live, 0)
    return QuipCircuit.build(circuit.inputs, gates)


def elim_ctrls_qasm(program: QasmProgram) -> QasmProgram:
    """Control elimination for an OpenQASM program, via a round trip through Quipper."""
    from .translate import qasm_to_quip, quip_to_qasm

    return quip_to_qasm(elim_ctrls(qasm_to_quip(program)))


def control_census(circuit: QuipCircuit) -> Counter:
    """``(kind, effective controls)`` counts of the unitary gates of ``circuit``."""
    return Counter((g.kind, effective_controls(g)) for g in circuit.gates if isinstance(g, Unitary))


# ---------------------------------------------------------------------------
# modifier passes (OpenQASM IR)


def _require_gates(program: QasmProgram) -> dict[str, GateSpec]:
    diags = validate(program)
    if diags:
        raise PassError(str(diags[0]))
    return program.gate_table()


def _negate(e: Expr) -> Expr:
    if isinstance(e, Num):
        return Num(-e.value + 0.0)
    if isinstance(e, Neg):
        return e.operand
    return Neg(e)


def _name_for(kind: GateKind, table: dict[str, GateSpec]) -> str:
    name = CANONICAL_NAMES[kind]
    if name not in table or table[name] != GateSpec(kind):
        raise PassError(f"no gate name for {kind.value} in this program's libraries")
    return name


def _inverse_statements(stmt: GateApply, spec: GateSpec, mods: tuple[Modifier, ...],
                        table: dict[str, GateSpec]) -> list[GateApply]:
    """The statements realising ``inv @ stmt`` (with the other modifiers kept)."""
    if spec.kind.self_inverse:
        return [replace(stmt, modifiers=mods)]
    negated = {K.RX, K.RY, K.RZ, K.P, K.U1, K.EXPZ, K.GPHASE}
    if spec.kind in negated:
        return [replace(stmt, params=(_negate(stmt.params[0]),), modifiers=mods)]
    try:
        seq = inverse_gate(spec.kind, [evaluate(p) for p in stmt.params])
    except CatalogError as exc:
        raise PassError(str(exc)) from None
    if len(seq) == 1 and seq[0][0] is spec.kind:
        # same shape with new angles (cu, u3, ...): keep the surface name
        return [replace(stmt, params=tuple(Num(float(p) + 0.0) for p in seq[0][1]), modifiers=mods)]
    if len(seq) > 1 and any(m.kind == POW for m in mods):
        # a gate sequence cannot carry a pow modifier: unroll the power here
        k = math.prod(int(m.arg) for m in mods if m.kind == POW)  # type: ignore[arg-type]
        rest = tuple(m for m in mods if m.kind != POW)
        if k < 0:
            return [replace(stmt, modifiers=rest)] * -k
        return _inverse_statements(stmt, spec, rest, table) * k
    # implicit controls of the surface name become explicit modifiers when the name changes
    ctrl_mods = mods + (Modifier(CTRL),) * spec.controls
    ncontrol_ops = stmt.control_modifiers + spec.controls
    controls, targets = stmt.operands[:ncontrol_ops], stmt.operands[ncontrol_ops:]
    out = []
    for kind, params in seq:
        name = _name_for(kind, table)
        if kind is K.GPHASE:
            if not ncontrol_ops:
                out.append(GateApply(name, (Num(params[0]),), (), ()))
            else:
                out.append(GateApply(name, (Num(params[0]),), controls, ctrl_mods))
        else:
            out.append(GateApply(name, tuple(Num(float(p) + 0.0) for p in params), controls + targets, ctrl_mods))
    return out


def elim_invs(program: QasmProgram) -> QasmProgram:
    """Remove every ``inv`` modifier.

    ``inv`` commutes with ``ctrl``/``negctrl`` and ``pow``; the inverse of
    the base gate is taken from the inverse table (self-inverse gates just
    drop the modifier, rotations negate their angle, ``s``/``t`` become
    ``sdg``/``tdg``, ``u2`` becomes ``u3``, ...).
    """
    table = _require_gates(program)
    stmts = []
    for s in program.statements:
        if not isinstance(s, GateApply) or not any(m.kind == INV for m in s.modifiers):
            stmts.append(s)
            continue
        parity = sum(1 for m in s.modifiers if m.kind == INV) % 2
        mods = tuple(m for m in s.modifiers if m.kind != INV)
        if not parity:
            stmts.append(replace(s, modifiers=mods))
            continue
        spec = table[s.name]
        stmts.extend(_inverse_statements(s, spec, mods, table))
    return replace(program, statements=tuple(stmts))


def elim_pows(program: QasmProgram) -> QasmProgram:
    """Unroll ``pow(k)`` modifiers: ``k`` copies, none for ``k = 0``, ``inv`` copies for ``k < 0``."""
    _require_gates(program)
    stmts = []
    for s in program.statements:
        if not isinstance(s, GateApply) or not any(m.kind == POW for m in s.modifiers):
            stmts.append(s)
            continue
        k = 1
        for m in s.modifiers:
            if m.kind == POW:
                if not isinstance(m.arg, int):  # pragma: no cover - rejected by the parser
                    raise PassError("non-integer power")
                k *= m.arg
        mods = tuple(m for m in s.modifiers if m.kind != POW)
        if k < 0:
            mods = (Modifier(INV),) + mods
        stmts.extend([replace(s, modifiers=mods)] * abs(k))
    return replace(program, statements=tuple(stmts))


def _fold_param(e: Expr) -> Expr:
    if not contains_call(e):
        return e
    try:
        return Num(evaluate(e) + 0.0)
    except Exception as exc:  # domain errors
        raise PassError(f"cannot evaluate {render(e)}: {exc}") from None


def elim_funs(program: QasmProgram) -> QasmProgram:
    """Replace every angle that calls a built-in function by its value."""
    stmts = []
    for s in program.statements:
        if isinstance(s, GateApply) and any(contains_call(p) for p in s.params):
            s = replace(s, params=tuple(_fold_param(p) for p in s.params))
        stmts.append(s)
    return replace(program, statements=tuple(stmts))


def modifier_census(program: QasmProgram) -> Counter:
    """Counts of each modifier kind over all statements."""
    return Counter(m.kind for s in program.statements if isinstance(s, GateApply) for m in s.modifiers)


# ---------------------------------------------------------------------------
# register merging


def _remap_statement(s, f: Callable[[Operand], Operand]):
    if isinstance(s, GateApply):
        return replace(s, operands=tuple(map(f, s.operands)))
    if isinstance(s, Measure):
        return replace(s, src=f(s.src), dst=f(s.dst))
    if isinstance(s, Reset):
        return replace(s, target=f(s.target))
    return replace(s, operands=tuple(map(f, s.operands)), result=None if s.result is None else f(s.result))


def reg_merge(program: QasmProgram) -> QasmProgram:
    """Replace all qubit registers by one array ``q`` and all bit registers by one array ``c``.

    Elements are numbered in declaration order; the mapping is recorded as
    comment notes (``phi -> q[0]``).  A program that already consists of at
    most the two arrays ``q`` and ``c`` is returned unchanged.
    """
    qdecls = [d for d in program.declarations if d.kind == "qubit"]
    cdecls = [d for d in program.declarations if d.kind == "bit"]
    merged = (
        len(qdecls) <= 1 and len(cdecls) <= 1
        and all(d.name == "q" and d.size is not None for d in qdecls)
        and all(d.name == "c" and d.size is not None for d in cdecls)
    )
    if merged:
        return program
    mapping: dict[Operand, Operand] = {}
    notes = []
    for elems, reg in ((program.qubits(), "q"), (program.bits(), "c")):
        for i, op in enumerate(elems):
            mapping[op] = Operand(reg, i)
            notes.append(f"{op} -> {reg}[{i}]")
    decls = []
    if qdecls:
        decls.append(Declaration("qubit", "q", len(program.qubits())))
    if cdecls:
        decls.append(Declaration("bit", "c", len(program.bits())))
    stmts = tuple(_remap_statement(s, mapping.__getitem__) for s in program.statements)
    return replace(program, declarations=tuple(decls), statements=stmts, notes=program.notes + tuple(notes))


# ---------------------------------------------------------------------------
# lowering to a fixed gate vocabulary


@dataclass(frozen=True)
class Rendering:
    """How a (kind, raw control count) is written: gate name and parameter map."""

    name: str | None  # None: dropped (a global phase)
    params: Callable[[tuple[float, ...]], tuple[float, ...]] = lambda p: p
    phase_only: bool = False  # equal to the gate only up to a global phase


def _same(p):
    return p


QASM2_RENDER: dict[tuple[GateKind, int], Rendering] = {
    (K.X, 0): Rendering("x"), (K.Y, 0): Rendering("y"), (K.Z, 0): Rendering("z"), (K.H, 0): Rendering("h"),
    (K.S, 0): Rendering("s"), (K.SDG, 0): Rendering("sdg"), (K.T, 0): Rendering("t"),
    (K.TDG, 0): Rendering("tdg"), (K.RX, 0): Rendering("rx"), (K.RY, 0): Rendering("ry"),
    (K.RZ, 0): Rendering("rz", phase_only=True), (K.P, 0): Rendering("u1"), (K.U1, 0): Rendering("u1"),
    (K.U3, 0): Rendering("u3"), (K.U, 0): Rendering("u3"), (K.U2, 0): Rendering("u2"),
    (K.EXPZ, 0): Rendering("rz", lambda p: (2 * p[0],), phase_only=True),
    (K.X, 1): Rendering("cx"), (K.X, 2): Rendering("ccx"), (K.Y, 1): Rendering("cy"), (K.Z, 1): Rendering("cz"),
    (K.H, 1): Rendering("ch"), (K.RZ, 1): Rendering("crz"), (K.P, 1): Rendering("cu1"),
    (K.U1, 1): Rendering("cu1"), (K.U3, 1): Rendering("cu3"), (K.U, 1): Rendering("cu3"),
    (K.EXPZ, 1): Rendering("crz", lambda p: (2 * p[0],)),
    (K.GPHASE, 0): Rendering(None, phase_only=True), (K.GPHASE, 1): Rendering("u1"),
    (K.GPHASE, 2): Rendering("cu1"),
}


@dataclass(frozen=True)
class LscConfig:
    gates: tuple[str, ...]
    measure: bool = True
    reset: bool = False
    version: str = "2.0"
    includes: tuple[str, ...] = ("qelib1.inc",)

    def renderings(self) -> dict[tuple[GateKind, int], Rendering]:
        table = gate_table(self.version, self.includes)
        out: dict[tuple[GateKind, int], Rendering] = {(K.GPHASE, 0): Rendering(None, phase_only=True)}
        for name in self.gates:
            spec = table.get(name)
            if spec is None:
                raise PassError(f"whitelisted gate {name!r} is not in {', '.join(self.includes)}")
            out[(spec.kind, spec.controls)] = Rendering(name)
        return out


@lru_cache(maxsize=None)
def load_lsc_config(path: str | None = None) -> LscConfig:
    """The lattice-surgery whitelist (bundled ``lsc_whitelist.json`` unless ``path`` is given)."""
    if path is None:
        text = (files("quipqasm") / "data" / "lsc_whitelist.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    raw = json.loads(text)
    return LscConfig(
        gates=tuple(raw["gates"]),
        measure=bool(raw.get("measure", True)),
        reset=bool(raw.get("reset", False)),
        version=str(raw.get("version", "2.0")),
        includes=tuple(raw.get("includes", ["qelib1.inc"])),
    )


def _raw_controls(g: Unitary) -> int:
    return len(g.controls)


def _uninvert(g: Unitary) -> list[Unitary]:
    """Non-inverted gates (with ``g``'s controls) whose product is ``g``."""
    if not g.inverted:
        return [g]
    if g.kind.self_inverse:
        return [replace(g, inverted=False)]
    try:
        seq = inverse_gate(g.kind, g.params)
    except CatalogError as exc:
        raise PassError(str(exc)) from None
    return [Unitary(k, () if k is K.GPHASE else g.wires, p, g.controls) for k, p in seq]


def lower_gate(
    g: Unitary,
    render: dict[tuple[GateKind, int], Rendering],
    targets: Sequence[str],
    snap: bool = False,
    depth: int = 0,
) -> list[Unitary]:
    """Rewrite ``g`` (no ancillas) into gates that ``render`` can write.

    Rules are taken from the catalog in the order of ``targets``; with
    ``snap`` phases at multiples of pi/4 become named Clifford+T gates first.
    """
    if depth > _MAX_DEPTH:
        raise PassError(f"cannot lower {g.kind.value}: the rewrite rules cycle without reaching the output gate set")
    if g.inverted:
        return [h for part in _uninvert(g) for h in lower_gate(part, render, targets, snap, depth + 1)]
    flipped = _flip_negative(g)
    if flipped is not None:
        return [h for part in flipped for h in lower_gate(part, render, targets, snap, depth + 1)]  # type: ignore[arg-type]
    n_raw = _raw_controls(g)
    if snap:
        rule = _snap_for_lowering(g)
        if rule is not None:
            body = rule.expand(g.params, g.controls, g.wires)
            return [h for part in body for h in lower_gate(part, render, targets, snap, depth + 1)]  # type: ignore[arg-type]
    if (g.kind, n_raw) in render:
        return [g]
    try:
        found = lookup(g.kind, effective_controls(g), False, tuple(targets), g.params, allow_ancillas=False)
    except CatalogError as exc:
        raise PassError(f"cannot lower {g.kind.value} with {n_raw} control(s): {exc}") from None
    if found == BASE:
        raise PassError(f"no spelling for {g.kind.value} with {n_raw} control(s)")
    body = found.expand(g.params, g.controls, g.wires)  # type: ignore[union-attr]
    return [h for part in body for h in lower_gate(part, render, targets, snap, depth + 1)]  # type: ignore[arg-type]


def _snap_for_lowering(g: Unitary):
    if g.kind not in (K.P, K.U1, K.GPHASE, K.RZ, K.EXPZ) or not g.params:
        return None
    if g.kind is K.GPHASE:
        if not g.controls:
            return None
        return rules_for("gphase-snap") if eighth_turns(g.params[0]) is not None else None
    if g.kind in (K.RZ, K.EXPZ):
        if g.controls:
            return None
        name = "rz-snap" if g.kind is K.RZ else "expz-snap"
        rule = rules_for(name)
        return rule if rule.applies(g.params) else None  # type: ignore[misc]
    rule = rules_for(_SNAP_RULES[g.kind])
    return rule if rule.applies(g.params) else None  # type: ignore[misc]


def _render(gates: list[Unitary], operand: Callable[[int], Operand],
            render: dict[tuple[GateKind, int], Rendering]) -> list[GateApply]:
    out = []
    for g in gates:
        r = render[(g.kind, len(g.controls))]
        if r.name is None:
            continue
        params = tuple(Num(float(v) + 0.0) for v in r.params(tuple(g.params)))
        wires = [c.wire for c in g.controls] + list(g.wires)
        out.append(GateApply(r.name, params, tuple(operand(w) for w in wires)))
    return out


def _statement_gate(s: GateApply, spec: GateSpec) -> tuple[Unitary, list[Operand]]:
    """A gate application as one Quipper-style gate on local wires ``0..k-1``."""
    if any(m.kind in (INV, POW) for m in s.modifiers):
        raise PassError(f"residual {'/'.join(sorted({m.kind for m in s.modifiers if not m.is_control}))} "
                        f"modifier on {s.name!r}; run elim-invs and elim-pows first")
    if any(contains_call(p) for p in s.params):
        raise PassError(f"function call in the parameters of {s.name!r}; run elim-funs first")
    operands = list(s.operands)
    polarity = [m.kind == CTRL for m in s.modifiers if m.is_control] + [True] * spec.controls
    controls = tuple(Control(i, p) for i, p in enumerate(polarity))
    targets = tuple(range(len(polarity), len(operands)))
    return Unitary(spec.kind, targets, tuple(evaluate(p) for p in s.params), controls), operands


def _lower_statement(s: GateApply, spec: GateSpec, render, targets, snap, out_table) -> list[GateApply]:
    g, operands = _statement_gate(s, spec)
    # already a gate of the output vocabulary: keep it verbatim (parameters included)
    if not s.modifiers and s.name in out_table and out_table[s.name] == spec and (spec.kind, spec.controls) in render \
            and not (snap and _snap_for_lowering(g) is not None):
        return [s]
    lowered = lower_gate(g, render, targets, snap)
    return _render(lowered, operands.__getitem__, render)


class _QubitStates:
    """Known computational-basis values of qubits (``None`` when unknown)."""

    def __init__(self) -> None:
        self.values: dict[Operand, int | None] = {}

    def get(self, q: Operand) -> int | None:
        return self.values.get(q, 0)  # registers start in |0>

    def set(self, q: Operand, v: int | None) -> None:
        self.values[q] = v


def _array_operand(op: Operand, scalars: set[str]) -> Operand:
    return Operand(op.name, 0) if op.name in scalars else op


def _lower_program(program: QasmProgram, render, targets, snap: bool, *, allow_reset: bool,
                   out_version: str, out_includes: tuple[str, ...]) -> QasmProgram:
    table = _require_gates(program)
    out_table = gate_table(out_version, out_includes)
    scalars = {d.name for d in program.declarations if d.size is None}
    arr = lambda op: _array_operand(op, scalars)  # noqa: E731
    decls = tuple(Declaration(d.kind, d.name, d.length) for d in program.declarations)
    state = _QubitStates()
    stmts: list = []

    def reset(q: Operand) -> None:
        if not allow_reset:
            raise PassError(f"qubit {q} would need a reset, which the target does not allow")
        stmts.append(Reset(q))

    for s in program.statements:
        if isinstance(s, GateApply):
            spec = table[s.name]
            lowered = _lower_statement(s, spec, render, targets, snap, out_table)
            stmts.extend(replace(g, operands=tuple(map(arr, g.operands))) for g in lowered)
            for op in s.operands:
                state.set(arr(op), None)
        elif isinstance(s, Measure):
            stmts.append(Measure(arr(s.src), arr(s.dst)))
            state.set(arr(s.src), None)
        elif isinstance(s, Reset):
            reset(arr(s.target))
            state.set(arr(s.target), 0)
        else:
            name = s.name
            q = arr(s.operands[0])
            if name in ("QInit0", "QInit1"):
                want = int(name[-1])
                have = state.get(q)
                if have is None:
                    reset(q)
                    have = 0
                if have != want:
                    stmts.extend(_render([Unitary(K.X, (0,))], lambda _w: q, render))
                state.set(q, want)
            elif name in ("QTerm0", "QTerm1"):
                state.set(q, int(name[-1]))
            elif name == "QDiscard":
                state.set(q, None)
            elif name == "QMeas":
                assert s.result is not None
                stmts.append(Measure(q, arr(s.result)))
                state.set(q, None)
            elif name == "CInit1":
                raise PassError("CInit1 has no counterpart in the target dialect")
            # CInit0 / CTerm* / CDiscard: classical bookkeeping with no effect on the state
    return QasmProgram(out_version, out_includes, decls, tuple(stmts), program.notes)


def to_qasm2(program: QasmProgram) -> QasmProgram:
    """Rewrite into OpenQASM 2.0 over ``qelib1.inc``.

    ``ctrl``/``negctrl`` modifiers are resolved (negative controls by X
    conjugation), gates missing from the legacy library are rewritten with
    the backport rules, runtime calls are lowered (``QMeas`` to ``measure``,
    ``QInit`` to nothing, ``x`` or ``reset`` depending on what is known about
    the qubit) and scalar registers become one-element arrays.
    """
    if program.version.startswith("2"):
        if not any(isinstance(s, Call) for s in program.statements):
            table = program.gate_table()
            if all(isinstance(s, (Measure, Reset)) or (s.name in QASM2_NAMES and not s.modifiers
                                                       and table[s.name] == QASM2_NAMES[s.name])
                   for s in program.statements):
                return program
    return _lower_program(program, QASM2_RENDER, ("qasm2", "qasm3", "quipper"), False, allow_reset=True,
                          out_version="2.0", out_includes=("qelib1.inc",))


QASM2_NAMES = gate_table("2.0", ("qelib1.inc",))


def to_lsc(program: QasmProgram, config: LscConfig | None = None) -> QasmProgram:
    """Restrict a merged program to the lattice-surgery whitelist.

    Requires a single qubit array and at most one bit array (run
    ``reg_merge`` first).  Phases at multiples of pi/4 become Clifford+T
    gates; any other rotation angle is an error.
    """
    config = config or load_lsc_config()
    qdecls = [d for d in program.declarations if d.kind == "qubit"]
    cdecls = [d for d in program.declarations if d.kind == "bit"]
    if len(qdecls) != 1 or len(cdecls) > 1:
        raise PassError("to-lsc needs exactly one qubit register and at most one bit register; run reg-merge first")
    if not config.measure and any(isinstance(s, Measure) or (isinstance(s, Call) and s.name == "QMeas")
                                  for s in program.statements):
        raise PassError("measurement is not in the configured whitelist")
    render = config.renderings()
    return _lower_program(program, render, ("lsc", "qasm2", "qasm3", "quipper"), True,
                          allow_reset=config.reset, out_version=config.version, out_includes=config.includes)
