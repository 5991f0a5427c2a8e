"""Dense matrix semantics for small circuits.

Conventions
-----------
* Wire/qubit ``0`` of a matrix is its most significant bit, so a basis label
  ``|b0 b1 ... b(n-1)>`` indexes row ``int("b0b1...", 2)``.
* A gate sequence ``g1; g2`` denotes ``M(g2) @ M(g1)``.
* ``C(G)`` is the block matrix ``[[I, 0], [0, G]]``; negative controls are the
  X-conjugated version.

The simulator works column-wise on the basis of the circuit *inputs* and keeps
an explicit tensor over the currently live wires, which makes ancilla
preparation (a new tensor factor) and termination (an asserted projection)
exact.  The result of :func:`operator` is in general an isometry from input
wires to output wires; :func:`circuit_matrix` is the square special case.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np

from .angles import evaluate
from .ir import (
    CTRL,
    INV,
    NEGCTRL,
    POW,
    Call,
    GateApply,
    GateKind,
    Measure,
    QasmProgram,
    QuipCircuit,
    Reset,
    Unitary,
    WireOp,
    WireType,
)

K = GateKind

#: Largest square unitary :func:`circuit_matrix` will build (128 x 128).
MAX_WIRES = 7
#: Largest number of simultaneously live wires the column-wise simulator accepts.
MAX_LIVE_WIRES = 12

SQRT2 = math.sqrt(2.0)


class OracleError(ValueError):
    """The oracle cannot give semantics to the object (size, non-unitarity, ...)."""


class NonUnitaryError(OracleError):
    """A measurement, discard or reset was reached."""


class DirtyAncillaError(OracleError):
    """An ancilla was terminated in a state other than the asserted one."""


# ---------------------------------------------------------------------------
# elementary matrices

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
S = np.diag([1, 1j]).astype(complex)
T = np.diag([1, cmath.exp(1j * math.pi / 4)])
SX = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2
IX = np.array([[0, 1j], [1j, 0]], dtype=complex)
OMEGA = cmath.exp(1j * math.pi / 4) * I2
#: ``E = H S^3 omega^3`` -- order of the Clifford cycle gate, cube = identity.
E = H @ S @ S @ S * cmath.exp(3j * math.pi / 4)
W = np.array(
    [
        [1, 0, 0, 0],
        [0, 1 / SQRT2, 1 / SQRT2, 0],
        [0, 1 / SQRT2, -1 / SQRT2, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def p_gate(a: float) -> np.ndarray:
    return np.diag([1, cmath.exp(1j * a)])


def rz(a: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * a), cmath.exp(0.5j * a)])


def rx(a: float) -> np.ndarray:
    c, s = math.cos(a / 2), math.sin(a / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(a: float) -> np.ndarray:
    c, s = math.cos(a / 2), math.sin(a / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def u_gate(theta: float, phi: float, lam: float) -> np.ndarray:
    """The OpenQASM 3 ``U`` gate."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ]
    )


def u3_gate(theta: float, phi: float, lam: float) -> np.ndarray:
    return cmath.exp(-0.5j * (phi + lam)) * u_gate(theta, phi, lam)


_FIXED = {
    K.X: X,
    K.Y: Y,
    K.Z: Z,
    K.H: H,
    K.S: S,
    K.SDG: S.conj().T,
    K.T: T,
    K.TDG: T.conj().T,
    K.SX: SX,
    K.IX: IX,
    K.OMEGA: OMEGA,
    K.E: E,
    K.W: W,
    K.SWAP: SWAP,
}


def gate_matrix(kind: GateKind, params: Sequence[float] = ()) -> np.ndarray:
    """Matrix of an uncontrolled, non-inverted gate of the given kind."""
    if len(params) != kind.nparams:
        raise OracleError(f"{kind.value} takes {kind.nparams} parameter(s), got {len(params)}")
    if kind in _FIXED:
        return _FIXED[kind].copy()
    p = [float(x) for x in params]
    if kind is K.RX:
        return rx(p[0])
    if kind is K.RY:
        return ry(p[0])
    if kind is K.RZ:
        return rz(p[0])
    if kind in (K.P, K.U1):
        return p_gate(p[0])
    if kind is K.EXPZ:
        return rz(2 * p[0])
    if kind is K.RGATE:
        return p_gate(2 * math.pi / 2.0 ** p[0])
    if kind is K.U:
        return u_gate(*p)
    if kind is K.U3:
        return u3_gate(*p)
    if kind is K.U2:
        return u3_gate(math.pi / 2, p[0], p[1])
    if kind is K.CU:
        return cmath.exp(1j * p[3]) * u_gate(p[0], p[1], p[2])
    if kind is K.GPHASE:
        return np.array([[cmath.exp(1j * p[0])]])
    raise OracleError(f"no semantics for {kind}")  # pragma: no cover


# ---------------------------------------------------------------------------
# matrix algebra


def kron(*ms: np.ndarray) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out


def adjoint(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m @ adjoint(m) - np.eye(m.shape[0])))) <= tol


def controlled(m: np.ndarray, polarity: Sequence[bool] = (True,), check: bool = True) -> np.ndarray:
    """``C(m)`` with one control per entry of ``polarity`` (``False`` = negative).

    The first control is the most significant wire.
    """
    m = np.asarray(m, dtype=complex)
    if check and not is_unitary(m):
        raise OracleError("controlled() needs a unitary argument")
    k, d = len(polarity), m.shape[0]
    out = np.eye(d << k, dtype=complex)
    b = 0
    for pos in polarity:
        b = (b << 1) | int(pos)
    out[b * d : (b + 1) * d, b * d : (b + 1) * d] = m
    return out


def mpow(m: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        return np.linalg.matrix_power(adjoint(m), -k)
    return np.linalg.matrix_power(m, k)


def phase_deviation(a: np.ndarray, b: np.ndarray) -> tuple[float, complex]:
    """``(max |a - c*b|, c)`` for the unit scalar ``c`` read off the largest entry of ``b``."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise OracleError(f"shape mismatch {a.shape} vs {b.shape}")
    flat = np.argmax(np.abs(b))
    ref = b.flat[flat]
    if abs(ref) < 1e-300:
        return float(np.max(np.abs(a), initial=0.0)), 1.0 + 0j
    c = a.flat[flat] / ref
    c = c / abs(c) if abs(c) > 1e-300 else 1.0 + 0j
    return float(np.max(np.abs(a - c * b), initial=0.0)), complex(c)


def eq_upto_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff ``a = c*b`` within ``tol`` (max-entry norm) for a unit scalar ``c``."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return phase_deviation(a, b)[0] <= tol


def eq_exact(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and float(np.max(np.abs(a - b), initial=0.0)) <= tol


def ancilla_deviation(full: np.ndarray, target: np.ndarray, ancilla_start: Sequence[int]) -> float:
    """Largest deviation of ``full (|b> (x) |anc>)`` from ``(target |b>) (x) |anc>``.

    ``full`` acts on ``n + k`` wires with the ``k`` ancillas last.
    """
    full, target = np.asarray(full), np.asarray(target)
    k = len(ancilla_start)
    n_dim = target.shape[0]
    if full.shape != (n_dim << k, n_dim << k):
        raise OracleError(f"dimension mismatch: full {full.shape}, target {target.shape}, {k} ancilla(s)")
    anc = 0
    for bit in ancilla_start:
        anc = (anc << 1) | int(bit)
    cols = full[:, [(b << k) | anc for b in range(n_dim)]]
    ket = np.zeros(1 << k, dtype=complex)
    ket[anc] = 1
    expected = np.kron(target, ket.reshape(-1, 1))
    return float(np.max(np.abs(cols - expected), initial=0.0))


def ancilla_identity_check(
    full: np.ndarray, target: np.ndarray, ancilla_start: Sequence[int], tol: float = 1e-10
) -> bool:
    """Check that ``full`` acts as ``target`` and returns its ancillas clean."""
    return ancilla_deviation(full, target, ancilla_start) <= tol


def dump_csv(matrix: np.ndarray, path: str | Path) -> None:
    """Write ``matrix`` as CSV, one ``re+imj`` cell per entry (debugging aid)."""
    rows = [",".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row) for row in np.asarray(matrix)]
    Path(path).write_text("\n".join(rows) + "\n")


# ---------------------------------------------------------------------------
# operations on a live-wire tensor


@dataclass(frozen=True)
class Op:
    """A neutral oracle instruction: a matrix on labelled wires, or a wire event."""

    kind: str  # "gate", "init", "term", "stop"
    wires: tuple[Hashable, ...] = ()
    matrix: np.ndarray | None = None
    value: int = 0


class _Simulator:
    def __init__(self, inputs: Sequence[Hashable]) -> None:
        self.live: list[Hashable] = list(inputs)
        n = len(self.live)
        if n > MAX_WIRES:
            raise OracleError(f"{n} input wires exceed the oracle cap of {MAX_WIRES}")
        self.state = np.eye(1 << n, dtype=complex).reshape((2,) * n + (1 << n,))

    def _axis(self, wire: Hashable) -> int:
        try:
            return self.live.index(wire)
        except ValueError:
            raise OracleError(f"wire {wire!r} is not live") from None

    def gate(self, matrix: np.ndarray, wires: Sequence[Hashable]) -> None:
        k = len(wires)
        if k == 0:
            self.state = self.state * matrix[0, 0]
            return
        axes = [self._axis(w) for w in wires]
        g = matrix.reshape((2,) * (2 * k))
        st = np.tensordot(g, self.state, axes=(list(range(k, 2 * k)), axes))
        self.state = np.moveaxis(st, list(range(k)), axes)

    def init(self, wire: Hashable, value: int) -> None:
        if wire in self.live:
            raise OracleError(f"wire {wire!r} initialised while live")
        if len(self.live) + 1 > MAX_LIVE_WIRES:
            raise OracleError(f"more than {MAX_LIVE_WIRES} live wires")
        ket = np.zeros(2, dtype=complex)
        ket[value] = 1
        st = np.multiply.outer(self.state, ket)  # new wire axis last
        self.state = np.moveaxis(st, -1, len(self.live))
        self.live.append(wire)

    def term(self, wire: Hashable, value: int | None, tol: float) -> None:
        ax = self._axis(wire)
        if value is not None:
            other = np.take(self.state, 1 - value, axis=ax)
            dirt = float(np.max(np.abs(other), initial=0.0))
            if dirt > tol:
                raise DirtyAncillaError(f"ancilla {wire!r} not in |{value}> at termination (residual {dirt:.3g})")
            self.state = np.take(self.state, value, axis=ax)
        else:
            raise NonUnitaryError(f"discard of wire {wire!r}")
        self.live.pop(ax)

    def is_zero(self, wire: Hashable, tol: float) -> bool:
        other = np.take(self.state, 1, axis=self._axis(wire))
        return float(np.max(np.abs(other), initial=0.0)) <= tol

    def result(self, outputs: Sequence[Hashable]) -> np.ndarray:
        if sorted(map(repr, outputs)) != sorted(map(repr, self.live)):
            raise OracleError(f"requested outputs {list(outputs)} differ from live wires {self.live}")
        perm = [self.live.index(w) for w in outputs] + [len(self.live)]
        st = np.transpose(self.state, perm)
        return st.reshape(1 << len(outputs), -1)


def _controlled_by_others(op: Op, wire: Hashable) -> bool:
    """Whether ``op`` only reads the wires other than ``wire`` (block diagonal in them)."""
    k = len(op.wires)
    a = op.wires.index(wire)
    t = op.matrix.reshape((2,) * (2 * k))  # type: ignore[union-attr]
    for idx in np.argwhere(np.abs(t) > 1e-12):
        if any(idx[b] != idx[k + b] for b in range(k) if b != a):
            return False
    return True


def _gadget_start(ops: list[Op], stop: int) -> int:
    """Start of the measurement gadget ending at ``ops[stop]`` (``stop`` if there is none).

    A gadget is a run of gates that only write the measured wire, entangling
    it with wires they merely read.
    """
    if not ops[stop].wires:
        return stop
    w = ops[stop].wires[0]
    j = stop
    while j > 0 and ops[j - 1].kind == "gate" and w in ops[j - 1].wires and _controlled_by_others(ops[j - 1], w):
        j -= 1
    return j


def run_ops(
    ops: Iterable[Op],
    inputs: Sequence[Hashable],
    outputs: Sequence[Hashable] | None = None,
    *,
    stop_at_measure: bool = False,
    tol: float = 1e-9,
    zero_inputs: Sequence[Hashable] = (),
) -> tuple[np.ndarray, list[Hashable]]:
    """Execute neutral ops; returns the (isometry) matrix and its output wires.

    Output wires default to the live wires sorted by their ``repr``-stable order
    of liveness (inputs first, then wires in order of birth).
    """
    ops = list(ops)
    stop = next((i for i, op in enumerate(ops) if op.kind == "stop"), len(ops))
    if stop < len(ops) and not stop_at_measure:
        raise NonUnitaryError("measurement or discard in a unitary context")
    start = _gadget_start(ops, stop) if stop < len(ops) else stop
    sim = _Simulator([w for w in inputs if w not in set(zero_inputs)])
    for w in zero_inputs:
        sim.init(w, 0)
    for i, op in enumerate(ops[:stop]):
        if i == start:
            # the measured wire is dropped from the prefix when it enters the
            # gadget freshly prepared, or kept when it is known to be |0>
            w = ops[stop].wires[0]
            if i > 0 and ops[i - 1].kind == "init" and ops[i - 1].wires[0] == w:
                sim.term(w, ops[i - 1].value, tol)
                break
            if w in sim.live and sim.is_zero(w, tol):
                break
            start = -1
        if op.kind == "gate":
            assert op.matrix is not None
            sim.gate(op.matrix, op.wires)
        elif op.kind == "init":
            sim.init(op.wires[0], op.value)
        elif op.kind == "term":
            sim.term(op.wires[0], op.value, tol)
    outs = list(sim.live) if outputs is None else list(outputs)
    return sim.result(outs), outs


# ---------------------------------------------------------------------------
# lowering of the two IRs to neutral ops


def unitary_matrix(g: Unitary) -> np.ndarray:
    """Matrix of a Quipper gate on ``controls + wires`` (controls first)."""
    m = gate_matrix(g.kind, g.params)
    if g.inverted:
        m = adjoint(m)
    if g.controls:
        m = controlled(m, [c.positive for c in g.controls], check=False)
    return m


def quip_ops(circuit: QuipCircuit) -> list[Op]:
    ops: list[Op] = []
    types = dict(circuit.inputs)
    for g in circuit.gates:
        if isinstance(g, Unitary):
            wires = tuple(c.wire for c in g.controls) + g.wires
            ops.append(Op("gate", wires, unitary_matrix(g)))
            continue
        assert isinstance(g, WireOp)
        op = g.op
        if op in ("QInit0", "QInit1"):
            ops.append(Op("init", (g.wire,), value=int(op[-1])))
            types[g.wire] = WireType.QBIT
        elif op in ("QTerm0", "QTerm1"):
            ops.append(Op("term", (g.wire,), value=int(op[-1])))
            types.pop(g.wire, None)
        elif op in ("QMeas", "QDiscard"):
            ops.append(Op("stop", (g.wire,)))
            types.pop(g.wire, None)
        # classical wire bookkeeping does not touch the quantum state
    return ops


def apply_matrix(spec_kind: GateKind, implicit_controls: int, params: Sequence[float], modifiers) -> np.ndarray:
    """Matrix of an OpenQASM gate application (modifier controls first)."""
    m = gate_matrix(spec_kind, params)
    if implicit_controls:
        m = controlled(m, [True] * implicit_controls, check=False)
    for mod in reversed(modifiers):
        if mod.kind == INV:
            m = adjoint(m)
        elif mod.kind == POW:
            m = mpow(m, mod.arg)
        elif mod.kind == CTRL:
            m = controlled(m, [True], check=False)
        elif mod.kind == NEGCTRL:
            m = controlled(m, [False], check=False)
    return m


def qasm_ops(program: QasmProgram) -> tuple[list[Op], list[Hashable]]:
    """Neutral ops for ``program`` plus its inferred input qubits.

    Qubits whose first event is a ``QInit`` call are ancillas; all others are
    inputs, listed in declaration order.
    """
    table = program.gate_table()
    first_init: dict[Hashable, bool] = {}
    for s in program.statements:
        if isinstance(s, Call) and s.name.startswith("Q") and s.operands:
            first_init.setdefault(s.operands[0], s.name.startswith("QInit"))
        elif isinstance(s, GateApply):
            for o in s.operands:
                first_init.setdefault(o, False)
        elif isinstance(s, Measure):
            first_init.setdefault(s.src, False)
        elif isinstance(s, Reset):
            first_init.setdefault(s.target, False)
    inputs = [q for q in program.qubits() if not first_init.get(q, False)]

    ops: list[Op] = []
    for s in program.statements:
        if isinstance(s, GateApply):
            spec = table.get(s.name)
            if spec is None:
                raise OracleError(f"unknown gate {s.name!r}")
            params = [evaluate(p) for p in s.params]
            ops.append(Op("gate", tuple(s.operands), apply_matrix(spec.kind, spec.controls, params, s.modifiers)))
        elif isinstance(s, Measure):
            ops.append(Op("stop", (s.src,)))
        elif isinstance(s, Reset):
            ops.append(Op("stop"))
        elif isinstance(s, Call):
            n = s.name
            if n in ("QInit0", "QInit1"):
                ops.append(Op("init", (s.operands[0],), value=int(n[-1])))
            elif n in ("QTerm0", "QTerm1"):
                ops.append(Op("term", (s.operands[0],), value=int(n[-1])))
            elif n in ("QMeas", "QDiscard"):
                ops.append(Op("stop", (s.operands[0],)))
    return ops, inputs


def operator(
    obj: QuipCircuit | QasmProgram,
    *,
    outputs: Sequence[Hashable] | None = None,
    stop_at_measure: bool = False,
    tol: float = 1e-9,
    zero_inputs: Sequence[Hashable] = (),
) -> tuple[np.ndarray, list[Hashable], list[Hashable]]:
    """Isometry denoted by ``obj`` as ``(matrix, input wires, output wires)``.

    Quipper inputs are taken in ascending wire order (classical wires are
    ignored); OpenQASM inputs in declaration order.  With ``stop_at_measure``
    the semantics is that of the prefix before the first non-unitary element,
    where a measurement gadget (a fresh or |0> wire written by gates that are
    controlled by the other wires, then measured) counts as part of the
    measurement.  ``zero_inputs`` are input wires held at |0> (they are
    excluded from the returned input list).
    """
    if isinstance(obj, QuipCircuit):
        inputs: list[Hashable] = [w for w, t in sorted(obj.inputs) if t is WireType.QBIT]
        ops = quip_ops(obj)
    elif isinstance(obj, QasmProgram):
        ops, inputs = qasm_ops(obj)
    else:
        raise TypeError(f"no semantics for {type(obj).__name__}")
    matrix, outs = run_ops(ops, inputs, outputs, stop_at_measure=stop_at_measure, tol=tol, zero_inputs=zero_inputs)
    return matrix, [w for w in inputs if w not in set(zero_inputs)], outs


def circuit_matrix(obj: QuipCircuit | QasmProgram, wire_order: Sequence[Hashable] | None = None) -> np.ndarray:
    """Square unitary of a measurement-free circuit or program.

    ``wire_order`` fixes both the input and output basis order; by default it
    is the natural input order.  Ancillas must be returned clean.
    """
    matrix, inputs, outs = operator(obj, outputs=wire_order)
    if wire_order is not None and list(wire_order) != list(inputs):
        # re-order the input side to match
        n = len(inputs)
        perm = [list(inputs).index(w) for w in wire_order]
        matrix = matrix.reshape((1 << n,) + (2,) * n)
        matrix = np.transpose(matrix, [0] + [1 + p for p in perm]).reshape(1 << n, 1 << n)
    elif sorted(map(repr, outs)) != sorted(map(repr, inputs)):
        raise OracleError("circuit is not square: outputs differ from inputs")
    else:
        n = len(inputs)
        perm = [list(outs).index(w) for w in inputs]
        matrix = matrix.reshape((2,) * n + (1 << n,))
        matrix = np.transpose(matrix, perm + [n]).reshape(1 << n, 1 << n)
    return matrix


def sequence_matrix(gates: Sequence[Unitary | WireOp], n: int) -> np.ndarray:
    """Matrix of a gate list on wires ``0..n-1`` (ancillas, if any, must be clean)."""
    circ = QuipCircuit.build([(w, WireType.QBIT) for w in range(n)], gates)
    return circuit_matrix(circ)


__all__ = [
    "DirtyAncillaError",
    "E",
    "H",
    "I2",
    "IX",
    "MAX_LIVE_WIRES",
    "MAX_WIRES",
    "NonUnitaryError",
    "OMEGA",
    "Op",
    "OracleError",
    "S",
    "SWAP",
    "SX",
    "T",
    "W",
    "X",
    "Y",
    "Z",
    "adjoint",
    "ancilla_deviation",
    "ancilla_identity_check",
    "apply_matrix",
    "circuit_matrix",
    "controlled",
    "dump_csv",
    "eq_exact",
    "eq_upto_phase",
    "gate_matrix",
    "is_unitary",
    "kron",
    "mpow",
    "operator",
    "p_gate",
    "phase_deviation",
    "quip_ops",
    "qasm_ops",
    "run_ops",
    "rx",
    "ry",
    "rz",
    "sequence_matrix",
    "u3_gate",
    "u_gate",
    "unitary_matrix",
]
