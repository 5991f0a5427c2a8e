"""Reader and writer for Quipper's ASCII circuit format.

Grammar (one item per line, blank lines ignored)::

    Inputs: 0:Qbit, 1:Cbit            (or "Inputs: none")
    QGate["not"](2) with controls=[+0,-1]
    QGate["S"]*(0)                    ("*" after the name marks an inverse)
    QGate["H"](0) with inverse        (accepted on input, written as "*")
    QGate["swap"](1,2)
    QRot["exp(-i%Z)",0.5](1)          (expZ; "R(2pi/%)" for rGate)
    GPhase[0.785] with controls=[+0]  ("GPhase() with t=0.785" is also read)
    QInit0(3)  QTerm1(3)  QDiscard(3)  QMeas(3)  CInit0(4)  CTerm0(4)  CDiscard(4)
    Outputs: 0:Qbit, 3:Cbit

The ``Outputs:`` line is checked against the outputs inferred from the gates;
inverse flags are kept verbatim, including on self-inverse gates.
"""

from __future__ import annotations

import math
import re

from .dfa import check_circuit
from .ir import (
    QUIPPER_GATE_NAMES,
    QUIPPER_ROTATION_NAMES,
    WIRE_OPS,
    Control,
    GateKind,
    QuipCircuit,
    Unitary,
    WireOp,
    WireType,
    infer_outputs,
)

__all__ = ["QuipperSyntaxError", "parse_quip", "write_quip"]


class QuipperSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


_GATE_BY_NAME = {name: kind for kind, name in QUIPPER_GATE_NAMES.items()}
_GATE_BY_NAME["X"] = GateKind.X
_ROT_BY_NAME = {name: kind for kind, name in QUIPPER_ROTATION_NAMES.items()}

_FLOAT = r"[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?"
_QGATE = re.compile(r'QGate\["(?P<name>[^"]+)"\](?P<star>\*?)\((?P<wires>[^)]*)\)(?P<rest>.*)$')
_QROT = re.compile(rf'QRot\["(?P<name>[^"]+)",\s*(?P<param>{_FLOAT})\](?P<star>\*?)\((?P<wires>[^)]*)\)(?P<rest>.*)$')
_GPHASE = re.compile(rf"GPhase\[(?P<param>{_FLOAT})\](?P<star>\*?)(?P<rest>.*)$")
_GPHASE_T = re.compile(rf"GPhase\(\)(?P<star>\*?)\s+with\s+t=(?P<param>{_FLOAT})(?P<rest>.*)$")
_WIREOP = re.compile(r"(?P<op>[A-Za-z0-9]+)\((?P<wire>\d+)\)\s*$")
_CONTROLS = re.compile(r"\s*with\s+controls=\[(?P<ctrls>[^\]]*)\]")
_INVERSE = re.compile(r"\s*with\s+inverse")
_TYPED = re.compile(r"^(\d+):(Qbit|Cbit)$")


def _wire_list(text: str, line: int, col: int) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    if not parts:
        raise QuipperSyntaxError("gate needs at least one wire", line, col)
    out = []
    for p in parts:
        if not p.isdigit():
            raise QuipperSyntaxError(f"bad wire index {p!r}", line, col)
        out.append(int(p))
    return tuple(out)


def _parse_rest(rest: str, line: int, col: int) -> tuple[tuple[Control, ...], bool]:
    controls: tuple[Control, ...] = ()
    inverted = False
    pos = 0
    while pos < len(rest):
        if not rest[pos:].strip():
            break
        m = _CONTROLS.match(rest, pos)
        if m:
            if controls:
                raise QuipperSyntaxError("duplicate controls clause", line, col + pos)
            items = [c.strip() for c in m.group("ctrls").split(",") if c.strip()]
            parsed = []
            for item in items:
                if len(item) < 2 or item[0] not in "+-" or not item[1:].isdigit():
                    raise QuipperSyntaxError(f"bad control {item!r}", line, col + pos)
                parsed.append(Control(int(item[1:]), item[0] == "+"))
            if not parsed:
                raise QuipperSyntaxError("empty controls list", line, col + pos)
            controls = tuple(parsed)
            pos = m.end()
            continue
        m = _INVERSE.match(rest, pos)
        if m:
            inverted = True
            pos = m.end()
            continue
        raise QuipperSyntaxError(f"unexpected text {rest[pos:].strip()!r}", line, col + pos)
    return controls, inverted


def _parse_types(text: str, line: int) -> tuple[tuple[int, WireType], ...]:
    text = text.strip()
    if text in ("", "none"):
        return ()
    out = []
    for item in text.split(","):
        m = _TYPED.match(item.strip())
        if not m:
            raise QuipperSyntaxError(f"bad wire declaration {item.strip()!r}", line)
        out.append((int(m.group(1)), WireType(m.group(2))))
    wires = [w for w, _ in out]
    if len(set(wires)) != len(wires):
        raise QuipperSyntaxError("wire declared twice", line)
    return tuple(sorted(out))


def _parse_gate(text: str, line: int, col: int):
    m = _QGATE.match(text)
    if m:
        name = m.group("name")
        kind = _GATE_BY_NAME.get(name)
        if kind is None:
            raise QuipperSyntaxError(f"unknown gate {name!r}", line, col)
        wires = _wire_list(m.group("wires"), line, col)
        if len(wires) != kind.arity:
            raise QuipperSyntaxError(f"gate {name!r} takes {kind.arity} wire(s), got {len(wires)}", line, col)
        controls, inv = _parse_rest(m.group("rest"), line, col + m.start("rest"))
        return Unitary(kind, wires, (), controls, inv or bool(m.group("star")))
    m = _QROT.match(text)
    if m:
        name = m.group("name")
        kind = _ROT_BY_NAME.get(name)
        if kind is None:
            raise QuipperSyntaxError(f"unknown rotation {name!r}", line, col)
        wires = _wire_list(m.group("wires"), line, col)
        if len(wires) != 1:
            raise QuipperSyntaxError(f"rotation {name!r} takes one wire", line, col)
        controls, inv = _parse_rest(m.group("rest"), line, col + m.start("rest"))
        return Unitary(kind, wires, (float(m.group("param")),), controls, inv or bool(m.group("star")))
    m = _GPHASE.match(text) or _GPHASE_T.match(text)
    if m:
        controls, inv = _parse_rest(m.group("rest"), line, col + m.start("rest"))
        return Unitary(GateKind.GPHASE, (), (float(m.group("param")),), controls, inv or bool(m.group("star")))
    m = _WIREOP.match(text)
    if m and m.group("op") in WIRE_OPS:
        return WireOp(m.group("op"), int(m.group("wire")))
    raise QuipperSyntaxError(f"unrecognised line {text!r}", line, col)


def parse_quip(text: str, check_lifetimes: bool = True) -> QuipCircuit:
    """Parse Quipper ASCII; wire lifetimes are checked by the automaton unless disabled."""
    inputs = None
    outputs = None
    gates = []
    out_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        if outputs is not None:
            raise QuipperSyntaxError("content after the Outputs line", lineno, col)
        if stripped.startswith("Inputs:"):
            if inputs is not None:
                raise QuipperSyntaxError("duplicate Inputs line", lineno, col)
            inputs = _parse_types(stripped[len("Inputs:"):], lineno)
            continue
        if inputs is None:
            raise QuipperSyntaxError("expected an Inputs line", lineno, col)
        if stripped.startswith("Outputs:"):
            outputs = _parse_types(stripped[len("Outputs:"):], lineno)
            out_line = lineno
            continue
        gates.append(_parse_gate(stripped, lineno, col))
    if inputs is None:
        raise QuipperSyntaxError("missing Inputs line", 1)
    if outputs is None:
        raise QuipperSyntaxError("missing Outputs line", max(1, len(text.splitlines())))
    if check_lifetimes:
        check_circuit(inputs, gates)
    inferred = infer_outputs(inputs, gates)
    if inferred != outputs:
        raise QuipperSyntaxError(
            f"Outputs line disagrees with the inferred outputs {_types_text(inferred)}", out_line
        )
    return QuipCircuit(inputs, tuple(gates), outputs)


def _types_text(items) -> str:
    return ", ".join(f"{w}:{t.value}" for w, t in items) if items else "none"


def _param_text(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot write non-finite parameter {x}")
    return repr(x + 0.0)


def _gate_text(g) -> str:
    if isinstance(g, WireOp):
        return f"{g.op}({g.wire})"
    star = "*" if g.inverted else ""
    if g.kind is GateKind.GPHASE:
        head = f"GPhase[{_param_text(g.params[0])}]{star}"
    elif g.kind in QUIPPER_ROTATION_NAMES:
        head = f'QRot["{QUIPPER_ROTATION_NAMES[g.kind]}",{_param_text(g.params[0])}]{star}({",".join(map(str, g.wires))})'
    elif g.kind in QUIPPER_GATE_NAMES:
        head = f'QGate["{QUIPPER_GATE_NAMES[g.kind]}"]{star}({",".join(map(str, g.wires))})'
    else:
        raise ValueError(f"{g.kind.value} has no Quipper spelling; decompose it first")
    if g.controls:
        head += f" with controls=[{','.join(map(str, g.controls))}]"
    return head


def write_quip(circuit: QuipCircuit) -> str:
    """Render a circuit; ``parse_quip(write_quip(c)) == c``."""
    lines = [f"Inputs: {_types_text(circuit.inputs)}"]
    lines += [_gate_text(g) for g in circuit.gates]
    lines.append(f"Outputs: {_types_text(circuit.outputs)}")
    return "\n".join(lines) + "\n"
