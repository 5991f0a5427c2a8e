"""Random program generators and checkers for the translation laws.

Every generator is deterministic per seed.  ``check_laws`` runs a set of
named laws over a corpus and reports pass/fail counts together with shrunk
counterexamples (gate deletion first, then wire deletion).

The semantic laws (preservation and fluency) use the matrix oracle, so they
are only checked on measurement-free programs of at most four qubits.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from . import oracle
from .angles import BinOp, Const, Expr, FuncCall, Neg, Num, evaluate
from .catalog import eighth_turns, inverse_sequence
from .dfa import check_circuit
from .ir import (
    CTRL,
    INV,
    NEGCTRL,
    POW,
    QUIPPER_KINDS,
    Call,
    Control,
    Declaration,
    GateApply,
    GateKind,
    Measure,
    Modifier,
    QasmProgram,
    QuipCircuit,
    Reset,
    Unitary,
    WireOp,
    WireType,
    gate_wires,
    normalize,
    statement_operands,
    structural_eq,
    validate,
)
from .passes import (
    PassError,
    _admitted,
    elim_ctrls,
    elim_ctrls_qasm,
    elim_funs,
    elim_invs,
    elim_pows,
    modifier_census,
    reg_merge,
    to_lsc,
    to_qasm2,
)
from .qasm import parse_qasm, write_qasm
from .quipper import parse_quip, write_quip
from .translate import qasm_to_quip, quip_to_qasm

K = GateKind

__all__ = [
    "Counterexample",
    "LAWS",
    "Law",
    "LawReport",
    "LawResult",
    "LawViolation",
    "check_laws",
    "conformance",
    "gen_qasm",
    "gen_quip",
    "shrink",
]

ORACLE_QUBITS = 4
PHASE_TOL = 1e-9

# ---------------------------------------------------------------------------
# generators


def _angle(rng: random.Random) -> float:
    r = rng.random()
    if r < 0.3:
        return rng.randint(-8, 8) * math.pi / 4
    return round(rng.uniform(-math.pi, math.pi), rng.choice((2, 4, 17)))


def _gen_params(rng: random.Random, kind: GateKind) -> tuple[float, ...]:
    if kind is K.RGATE:
        return (float(rng.randint(1, 4)),)
    return tuple(_angle(rng) for _ in range(kind.nparams))


def _pick_controls(rng: random.Random, pool: list[int], limit: int) -> tuple[Control, ...]:
    k = min(len(pool), rng.choices((0, 1, 2, 3), weights=(50, 30, 15, 5))[0], limit)
    return tuple(Control(w, rng.random() < 0.75) for w in rng.sample(pool, k))


def _random_unitary(rng: random.Random, qubits: list[int], must_touch: int | None = None) -> Unitary | None:
    kinds = sorted(QUIPPER_KINDS, key=lambda k: k.value)
    for _ in range(20):
        kind = rng.choice(kinds)
        if kind.arity > len(qubits):
            continue
        targets = rng.sample(qubits, kind.arity)
        rest = [w for w in qubits if w not in targets]
        controls = _pick_controls(rng, rest, 3)
        g = Unitary(kind, tuple(targets), _gen_params(rng, kind), controls, rng.random() < 0.2)
        if must_touch is not None and must_touch not in g.all_wires():
            continue
        return g
    return None


def gen_quip(
    seed: int,
    size: int | None = None,
    *,
    max_wires: int = 6,
    oracle_mode: bool = False,
) -> QuipCircuit:
    """A random circuit that the wire automaton accepts.

    In ``oracle_mode`` the circuit is measurement-free, has at most four
    inputs, and every ancilla is prepared, used, uncomputed and terminated.
    """
    rng = random.Random(seed)
    if size is None:
        size = rng.randint(1, 24)
    max_wires = min(max_wires, 6)
    n_in = rng.randint(1, ORACLE_QUBITS if oracle_mode else max_wires)
    inputs = []
    for w in range(n_in):
        cbit = not oracle_mode and rng.random() < 0.15
        inputs.append((w, WireType.CBIT if cbit else WireType.QBIT))
    live: dict[int, WireType] = dict(inputs)
    gates: list = []
    while len(gates) < size:
        qubits = sorted(w for w, t in live.items() if t is WireType.QBIT)
        cbits = sorted(w for w, t in live.items() if t is WireType.CBIT)
        free = [w for w in range(max_wires) if w not in live]
        r = rng.random()
        if oracle_mode:
            if r < 0.12 and free and size - len(gates) >= 4 and qubits:
                a = free[0]
                body: list = []
                for _ in range(rng.randint(1, 2)):
                    g = _random_unitary(rng, qubits + [a], must_touch=a)
                    if g is not None:
                        body.append(g)
                gates += [WireOp("QInit0", a)] + body + inverse_sequence(body) + [WireOp("QTerm0", a)]
                continue
            g = _random_unitary(rng, qubits) if qubits else Unitary(K.GPHASE, (), (_angle(rng),))
            gates.append(g if g is not None else Unitary(K.GPHASE, (), (_angle(rng),)))
            continue
        if r < 0.7 and qubits:
            g = _random_unitary(rng, qubits)
            if g is not None:
                gates.append(g)
            continue
        options: list[tuple[str, int]] = []
        options += [(op, w) for w in free for op in ("QInit0", "QInit1", "CInit0", "CInit1")]
        options += [(op, w) for w in qubits for op in ("QTerm0", "QTerm1", "QDiscard", "QMeas")]
        options += [(op, w) for w in cbits for op in ("CTerm0", "CTerm1", "CDiscard")]
        if not options:
            gates.append(Unitary(K.GPHASE, (), (_angle(rng),)))
            continue
        op, w = rng.choice(options)
        gates.append(WireOp(op, w))
        event = gates[-1].event
        if op == "QMeas":
            live[w] = WireType.CBIT
        elif event == "Init":
            live[w] = WireType.QBIT if op.startswith("Q") else WireType.CBIT
        else:
            del live[w]
    return QuipCircuit.build(inputs, gates)


_REG_NAMES = ("q", "r", "anc", "data", "phi", "x")
_BIT_NAMES = ("c", "m", "out")
_FUNCS_3 = ("sin", "cos", "arctan", "exp", "sqrt")
_FUNCS_2 = ("sin", "cos", "exp", "sqrt")
_CLIFFORD_T = {K.X, K.Y, K.Z, K.H, K.S, K.SDG, K.T, K.TDG, K.SWAP}


def _gen_expr(rng: random.Random, version: str, depth: int = 0, allow_calls: bool = True) -> Expr:
    r = rng.random()
    if depth >= 2 or r < 0.45:
        return Num(round(rng.uniform(0, 3), rng.choice((1, 3, 6))))
    if r < 0.65:
        return BinOp(rng.choice("*/"), Const("pi"), Num(float(rng.randint(1, 8))))
    if r < 0.75:
        return Neg(_gen_expr(rng, version, depth + 1, allow_calls))
    if r < 0.88 or not allow_calls:
        return BinOp(rng.choice("+-*"), _gen_expr(rng, version, depth + 1, allow_calls),
                     _gen_expr(rng, version, depth + 1, allow_calls))
    fn = rng.choice(_FUNCS_3 if version == "3" else _FUNCS_2)
    return FuncCall(fn, (Num(round(rng.uniform(0.1, 1.0), 3)),))


def gen_qasm(
    seed: int,
    size: int | None = None,
    *,
    version: str = "3",
    oracle_mode: bool = False,
    clifford_t: bool = False,
    calls: bool = True,
) -> QasmProgram:
    """A random valid program.

    ``oracle_mode`` keeps it measurement-free on at most four qubits;
    ``clifford_t`` restricts gates to Clifford+T names and phases at multiples
    of pi/4; ``calls`` (OpenQASM 3 only) allows the runtime wire functions,
    used so that the result is accepted by the wire automaton.
    """
    rng = random.Random(seed)
    if size is None:
        size = rng.randint(1, 24)
    nq = rng.randint(1, ORACLE_QUBITS if oracle_mode else 6)
    names = rng.sample(_REG_NAMES, rng.randint(1, min(3, nq)))
    cuts = sorted(rng.sample(range(1, nq), len(names) - 1)) if len(names) > 1 else []
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [nq])]
    decls = []
    for name, n in zip(names, sizes):
        scalar = version == "3" and n == 1 and rng.random() < 0.5
        decls.append(Declaration("qubit", name, None if scalar else n))
    if not oracle_mode:
        for name in rng.sample(_BIT_NAMES, rng.randint(0, 2)):
            n = rng.randint(1, 3)
            scalar = version == "3" and n == 1 and rng.random() < 0.5
            decls.append(Declaration("bit", name, None if scalar else n))
    if version == "3":
        includes = ["stdgates.inc"]
        if rng.random() < 0.5 and not clifford_t:
            includes.append("quipgates.inc")
        use_calls = calls and not oracle_mode and rng.random() < 0.5
        if use_calls:
            includes.append("quipfuncs.inc")
    else:
        includes = ["qelib1.inc"] + (["bkpgates.inc"] if rng.random() < 0.4 and not clifford_t else [])
        use_calls = False
    prog = QasmProgram(version, tuple(includes), tuple(decls))
    table = prog.gate_table()
    qubits = prog.qubits()
    bits = prog.bits()
    gate_names = sorted(table)
    if clifford_t:
        gate_names = [n for n in gate_names if table[n].kind in _CLIFFORD_T and table[n].controls <= 1]
        gate_names += [n for n in ("p", "u1", "rz") if n in table and table[n].controls == 0]
    # wire states for the runtime calls: "fresh", "live", "dead"
    state = {q: "fresh" for q in qubits}
    stmts: list = []
    while len(stmts) < size:
        r = rng.random()
        if not oracle_mode and bits and r < 0.1:
            q = rng.choice(qubits)
            if state[q] == "dead":
                continue
            state[q] = "live"
            stmts.append(Measure(q, rng.choice(bits)))
            continue
        if not oracle_mode and r < 0.15:
            q = rng.choice(qubits)
            if state[q] == "dead":
                continue
            state[q] = "live"
            stmts.append(Reset(q))
            continue
        if use_calls and r < 0.3:
            q = rng.choice(qubits)
            if state[q] in ("fresh", "dead") and rng.random() < 0.7:
                stmts.append(Call(rng.choice(("QInit0", "QInit1")), (q,)))
                state[q] = "live"
            elif state[q] != "dead":
                op = rng.choice(("QTerm0", "QTerm1", "QDiscard", "QMeas"))
                if op == "QMeas":
                    if not bits:
                        continue
                    stmts.append(Call("QMeas", (q,), rng.choice(bits)))
                    stmts.append(Call("CDiscard", (stmts[-1].result,)))
                    state[q] = "dead"
                else:
                    stmts.append(Call(op, (q,)))
                    state[q] = "dead"
            continue
        name = rng.choice(gate_names)
        spec = table[name]
        usable = [q for q in qubits if state[q] != "dead"]
        mods: list[Modifier] = []
        if version == "3" and rng.random() < 0.35:
            for _ in range(rng.randint(1, 2)):
                m = rng.random()
                if m < 0.4:
                    mods.append(Modifier(CTRL if rng.random() < 0.7 else NEGCTRL))
                elif m < 0.7 and not clifford_t:
                    mods.append(Modifier(INV))
                elif not clifford_t:
                    mods.append(Modifier(POW, rng.choice((-2, -1, 0, 2, 3))))
        count = spec.operand_count + sum(1 for m in mods if m.is_control)
        if count > len(usable):
            continue
        ops = tuple(rng.sample(usable, count))
        if clifford_t and spec.kind in (K.P, K.U1, K.RZ):
            params: tuple[Expr, ...] = (BinOp("*", Num(float(rng.randint(-7, 7))), BinOp("/", Const("pi"), Num(4.0))),)
        else:
            params = tuple(_gen_expr(rng, version, allow_calls=not clifford_t) for _ in range(spec.kind.nparams))
        for q in ops:
            state[q] = "live"
        stmts.append(GateApply(name, params, ops, tuple(mods)))
    prog = replace(prog, statements=tuple(stmts))
    diags = validate(prog)
    if diags:  # pragma: no cover - generator invariant
        raise AssertionError(f"generator produced an invalid program: {diags[0]}")
    return prog


# ---------------------------------------------------------------------------
# laws


class LawViolation(AssertionError):
    """Raised by a law check; the message explains the failure."""


class NotApplicable(Exception):
    """The law does not speak about this corpus element."""


@dataclass(frozen=True)
class Writers:
    """Serialisers used by the laws (replaceable for fault injection)."""

    qasm: Callable[[QasmProgram], str] = write_qasm
    quip: Callable[[QuipCircuit], str] = write_quip


@dataclass(frozen=True)
class Law:
    name: str
    applies_to: type
    check: Callable[[object, Writers], None]
    description: str = ""


def _eq(a, b, what: str, alpha: bool = True) -> None:
    if not structural_eq(a, b, alpha=alpha):
        raise LawViolation(f"{what}: structures differ")


def _qasm_retraction(p: QasmProgram, w: Writers) -> None:
    again = parse_qasm(w.qasm(p))
    _eq(again, p, "parse(write(P)) != P", alpha=False)


def _quip_retraction(c: QuipCircuit, w: Writers) -> None:
    again = parse_quip(w.quip(c))
    _eq(again, c, "parse(write(C)) != C", alpha=False)


def _io_qasm(p: QasmProgram, w: Writers) -> QasmProgram:
    return parse_qasm(w.qasm(p))


def _io_quip(c: QuipCircuit, w: Writers) -> QuipCircuit:
    return parse_quip(w.quip(c))


def _ta(c: QuipCircuit, w: Writers) -> QasmProgram:
    return _io_qasm(quip_to_qasm(_io_quip(c, w)), w)


def _tb(p: QasmProgram, w: Writers) -> QuipCircuit:
    return _io_quip(qasm_to_quip(_io_qasm(p, w)), w)


def _reflexive_quip(c: QuipCircuit, w: Writers) -> None:
    a = _ta(c, w)
    _eq(_ta(_tb(a, w), w), a, "Ta(Tb(Ta(C))) != Ta(C)")


def _reflexive_qasm(p: QasmProgram, w: Writers) -> None:
    b = _tb(p, w)
    _eq(_tb(_ta(b, w), w), b, "Tb(Ta(Tb(P))) != Tb(P)")


def _idempotent_quip(c: QuipCircuit, w: Writers) -> None:
    once = _tb(_ta(c, w), w)
    twice = _tb(_ta(once, w), w)
    _eq(twice, once, "(Tb.Ta)^2 != Tb.Ta")
    if len(w.quip(twice)) != len(w.quip(once)):
        raise LawViolation("file size grew on the second round trip")


def _idempotent_qasm(p: QasmProgram, w: Writers) -> None:
    once = _ta(_tb(p, w), w)
    twice = _ta(_tb(once, w), w)
    _eq(twice, once, "(Ta.Tb)^2 != Ta.Tb")
    if len(w.qasm(twice)) != len(w.qasm(once)):
        raise LawViolation("file size grew on the second round trip")


def _recovery_quip(c: QuipCircuit, w: Writers) -> None:
    before = check_circuit(c)
    after = check_circuit(_tb(_ta(c, w), w))
    if (before.input_arity, before.output_arity) != (after.input_arity, after.output_arity):
        raise LawViolation("round translation changed the input or output arity")
    spans = lambda r: sorted((iv.birth, -1 if iv.death is None else iv.death) for iv in r.intervals)  # noqa: E731
    if spans(before) != spans(after):
        raise LawViolation("round translation changed the ancilla birth/death intervals")


def _oracle_ready(obj) -> np.ndarray:
    """The oracle matrix of ``obj``; raises :class:`NotApplicable` outside the oracle's class."""
    if isinstance(obj, QasmProgram):
        if len(obj.qubits()) > ORACLE_QUBITS or any(isinstance(s, (Measure, Reset, Call)) for s in obj.statements):
            raise NotApplicable
    else:
        qin = [x for x, t in obj.inputs if t is WireType.QBIT]
        if len(qin) > ORACLE_QUBITS or len(qin) != len(obj.inputs) or obj.inputs != obj.outputs:
            raise NotApplicable
        if any(isinstance(g, WireOp) and g.op not in ("QInit0", "QTerm0") for g in obj.gates):
            raise NotApplicable
    try:
        return oracle.circuit_matrix(obj)
    except oracle.OracleError:
        raise NotApplicable from None


def _same_semantics(reference: np.ndarray, b, what: str) -> None:
    """``b`` agrees with ``reference`` up to phase.

    A call-free OpenQASM ``b`` may carry extra qubits after the reference's
    ones (the ancillas of control elimination once lowered to plain qubits);
    these start in |0> and must end in |0>.
    """
    n = reference.shape[0].bit_length() - 1
    if (isinstance(b, QasmProgram) and len(b.qubits()) > n
            and not any(isinstance(s, Call) for s in b.statements)):
        qubits = b.qubits()
        m, _, _ = oracle.operator(b, outputs=qubits, zero_inputs=qubits[n:])
        blocks = m.reshape(1 << n, -1, 1 << n)
        leak = float(np.abs(blocks[:, 1:, :]).max()) if blocks.shape[1] > 1 else 0.0
        if leak > PHASE_TOL:
            raise LawViolation(f"{what}: ancillas not returned to |0> (residual {leak:.3g})")
        mb = blocks[:, 0, :]
    else:
        mb = oracle.circuit_matrix(b)
    if reference.shape != mb.shape:
        raise LawViolation(f"{what}: operator shapes {reference.shape} and {mb.shape} differ")
    dev, _ = oracle.phase_deviation(reference, mb)
    if dev > PHASE_TOL:
        raise LawViolation(f"{what}: oracle deviation {dev:.3g}")


#: Each pass applied on its own to the source program.
SINGLE_PASSES: tuple[tuple[str, Callable[[QasmProgram], QasmProgram]], ...] = (
    ("elim_invs", elim_invs),
    ("elim_pows", elim_pows),
    ("elim_funs", elim_funs),
    ("reg_merge", reg_merge),
    ("elim_ctrls", elim_ctrls_qasm),
)

#: The full pipeline, checked after every stage.
PIPELINE: tuple[tuple[str, Callable[[QasmProgram], QasmProgram]], ...] = (
    ("elim_ctrls", elim_ctrls_qasm),
    ("elim_invs", elim_invs),
    ("elim_pows", elim_pows),
    ("elim_funs", elim_funs),
    ("reg_merge", reg_merge),
    ("to_qasm2", to_qasm2),
    ("to_lsc", to_lsc),
)


def _preservation_qasm(p: QasmProgram, w: Writers) -> None:
    ref = _oracle_ready(p)
    _same_semantics(ref, qasm_to_quip(p), "Tb")
    _same_semantics(ref, quip_to_qasm(qasm_to_quip(p)), "Ta.Tb")
    for name, f in SINGLE_PASSES:
        _same_semantics(ref, f(p), name)
    stage = p
    for name, f in PIPELINE:
        try:
            stage = f(stage)
        except PassError as exc:
            # arbitrary angles are not exactly reducible to the Clifford+T whitelist
            if f is to_lsc and "cannot lower" in str(exc) and not is_clifford_t(p):
                return
            raise
        _same_semantics(ref, stage, f"pipeline up to {name}")


def is_clifford_t(p: QasmProgram) -> bool:
    """Whether every gate is a Clifford+T gate (phases at multiples of pi/4), controls allowed."""
    table = p.gate_table()
    for s in p.statements:
        if not isinstance(s, GateApply):
            continue
        if any(not m.is_control for m in s.modifiers):
            return False
        spec = table[s.name]
        if spec.kind in (K.P, K.U1, K.RZ):
            if eighth_turns(evaluate(s.params[0])) is None:
                return False
            if spec.kind is K.RZ and (s.modifiers or spec.controls):
                return False  # a controlled rz(pi/4) has pi/8 phases
        elif spec.kind not in _CLIFFORD_T:
            return False
    return True


def _preservation_quip(c: QuipCircuit, w: Writers) -> None:
    ref = _oracle_ready(c)
    _same_semantics(ref, quip_to_qasm(c), "Ta")
    _same_semantics(ref, qasm_to_quip(quip_to_qasm(c)), "Tb.Ta")
    once = elim_ctrls(c)
    _same_semantics(ref, once, "elim_ctrls")
    _same_semantics(ref, quip_to_qasm(once), "Ta.elim_ctrls")


def _fluency_qasm(p: QasmProgram, w: Writers) -> None:
    _same_semantics(_oracle_ready(p), _io_qasm(p, w), "parse(write(P))")


def _fluency_quip(c: QuipCircuit, w: Writers) -> None:
    _same_semantics(_oracle_ready(c), _io_quip(c, w), "parse(write(C))")


def _fixpoint_qasm(p: QasmProgram, w: Writers) -> None:
    for name, f in (("elim_invs", elim_invs), ("elim_pows", elim_pows), ("elim_funs", elim_funs)):
        once = f(p)
        _eq(f(once), once, f"{name} is not idempotent", alpha=False)
    _eq(normalize(normalize(p)), normalize(p), "normalize is not idempotent", alpha=False)
    census = modifier_census(elim_invs(p))
    if census[INV]:
        raise LawViolation("inv modifiers remain after elim_invs")
    if modifier_census(elim_pows(p))[POW]:
        raise LawViolation("pow modifiers remain after elim_pows")
    once = elim_ctrls_qasm(p)
    _eq(elim_ctrls_qasm(once), once, "elim_ctrls is not idempotent")
    census = modifier_census(once)
    if census[CTRL] or census[NEGCTRL]:
        raise LawViolation("ctrl modifiers remain after elim_ctrls")


def _fixpoint_quip(c: QuipCircuit, w: Writers) -> None:
    once = elim_ctrls(c)
    _eq(elim_ctrls(once), once, "elim_ctrls is not idempotent", alpha=False)
    _eq(normalize(normalize(c)), normalize(c), "normalize is not idempotent", alpha=False)
    leftover = [g for g in once.gates if isinstance(g, Unitary) and not _admitted(g)]
    if leftover:
        raise LawViolation(f"{leftover[0].kind.value} with {len(leftover[0].controls)} control(s) remains after elim_ctrls")


LAWS: dict[str, tuple[Law, ...]] = {
    "retraction": (
        Law("retraction", QasmProgram, _qasm_retraction, "parse . write = id"),
        Law("retraction", QuipCircuit, _quip_retraction, "parse . write = id"),
    ),
    "reflexive": (
        Law("reflexive", QuipCircuit, _reflexive_quip, "Ta Tb Ta = Ta"),
        Law("reflexive", QasmProgram, _reflexive_qasm, "Tb Ta Tb = Tb"),
    ),
    "idempotence": (
        Law("idempotence", QuipCircuit, _idempotent_quip, "(Tb Ta)^2 = Tb Ta, no growth"),
        Law("idempotence", QasmProgram, _idempotent_qasm, "(Ta Tb)^2 = Ta Tb, no growth"),
    ),
    "recovery": (Law("recovery", QuipCircuit, _recovery_quip, "Tb Ta keeps arities and ancilla intervals"),),
    "preservation": (
        Law("preservation", QasmProgram, _preservation_qasm, "oracle equal before/after Tb, each pass and each pipeline stage"),
        Law("preservation", QuipCircuit, _preservation_quip, "oracle equal before/after Ta and elim_ctrls"),
    ),
    "fluency": (
        Law("fluency", QasmProgram, _fluency_qasm, "write/read preserves the oracle semantics"),
        Law("fluency", QuipCircuit, _fluency_quip, "write/read preserves the oracle semantics"),
    ),
    "fixpoint": (
        Law("fixpoint", QasmProgram, _fixpoint_qasm, "passes and normalize are idempotent"),
        Law("fixpoint", QuipCircuit, _fixpoint_quip, "elim_ctrls and normalize are idempotent"),
    ),
}


# ---------------------------------------------------------------------------
# shrinking


def _violates(law: Law, obj, writers: Writers) -> str | None:
    try:
        law.check(obj, writers)
    except NotApplicable:
        return None
    except LawViolation as exc:
        return str(exc)
    except Exception as exc:  # a crash is a failure too
        return f"{type(exc).__name__}: {exc}"
    return None


def _valid(obj) -> bool:
    try:
        if isinstance(obj, QasmProgram):
            return not validate(obj) and (not any(isinstance(s, Call) for s in obj.statements) or _tb_ok(obj))
        QuipCircuit.build(obj.inputs, obj.gates)
        check_circuit(obj)
        return True
    except Exception:
        return False


def _tb_ok(p: QasmProgram) -> bool:
    try:
        qasm_to_quip(p)
        return True
    except Exception:
        return False


def _delete_gate(obj, i: int):
    if isinstance(obj, QasmProgram):
        return replace(obj, statements=obj.statements[:i] + obj.statements[i + 1 :])
    gates = obj.gates[:i] + obj.gates[i + 1 :]
    try:
        return QuipCircuit.build(obj.inputs, gates)
    except Exception:
        return None


def _delete_wire(obj, target):
    if isinstance(obj, QasmProgram):
        decls = tuple(d for d in obj.declarations if d.name != target)
        stmts = tuple(s for s in obj.statements if all(o.name != target for o in statement_operands(s)))
        return replace(obj, declarations=decls, statements=stmts)
    inputs = tuple((w, t) for w, t in obj.inputs if w != target)
    gates = tuple(g for g in obj.gates if target not in gate_wires(g))
    try:
        return QuipCircuit.build(inputs, gates)
    except Exception:
        return None


def _wire_names(obj) -> list:
    if isinstance(obj, QasmProgram):
        return [d.name for d in obj.declarations]
    return obj.wires()


def _size(obj) -> int:
    return len(obj.statements) if isinstance(obj, QasmProgram) else len(obj.gates)


def _signature(message: str | None) -> str | None:
    return None if message is None else message.split(":")[0]


def shrink(law: Law, obj, writers: Writers = Writers()):
    """Smallest variant of ``obj`` (by gate, then wire deletion) that fails ``law`` the same way."""
    want = _signature(_violates(law, obj, writers))
    if want is None:
        return obj
    progress = True
    while progress:
        progress = False
        i = 0
        while i < _size(obj):
            cand = _delete_gate(obj, i)
            if cand is not None and _valid(cand) and _signature(_violates(law, cand, writers)) == want:
                obj, progress = cand, True
            else:
                i += 1
        for wname in list(_wire_names(obj)):
            cand = _delete_wire(obj, wname)
            if cand is not None and _valid(cand) and _signature(_violates(law, cand, writers)) == want:
                obj, progress = cand, True
    return obj


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Counterexample:
    law: str
    index: int
    message: str
    original: str
    shrunk: str


@dataclass
class LawResult:
    law: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return self.passed + self.failed


@dataclass
class LawReport:
    results: dict[str, LawResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.failed == 0 for r in self.results.values())

    def summary(self) -> str:
        lines = []
        for name, r in sorted(self.results.items()):
            lines.append(f"{name:14s} passed={r.passed} failed={r.failed} skipped={r.skipped}")
            for cx in r.counterexamples[:3]:
                lines.append(f"  #{cx.index}: {cx.message}")
                lines.extend("    " + ln for ln in cx.shrunk.splitlines())
        return "\n".join(lines)


def _text(obj, writers: Writers) -> str:
    try:
        return writers.qasm(obj) if isinstance(obj, QasmProgram) else writers.quip(obj)
    except Exception:
        return repr(obj)


def check_laws(
    corpus: Iterable,
    laws: Sequence[str] | None = None,
    *,
    writers: Writers | None = None,
    shrink_failures: bool = True,
    max_counterexamples: int = 5,
) -> LawReport:
    """Check the named laws (all by default) on every element of ``corpus``."""
    writers = writers or Writers()
    names = list(LAWS) if laws is None else list(laws)
    unknown = [n for n in names if n not in LAWS]
    if unknown:
        raise KeyError(f"unknown law(s): {', '.join(unknown)}")
    report = LawReport({n: LawResult(n) for n in names})
    for index, obj in enumerate(corpus):
        for n in names:
            res = report.results[n]
            for law in LAWS[n]:
                if not isinstance(obj, law.applies_to):
                    continue
                try:
                    law.check(obj, writers)
                    res.passed += 1
                except NotApplicable:
                    res.skipped += 1
                except Exception as exc:
                    res.failed += 1
                    if len(res.counterexamples) < max_counterexamples:
                        small = shrink(law, obj, writers) if shrink_failures else obj
                        msg = str(exc) if isinstance(exc, LawViolation) else f"{type(exc).__name__}: {exc}"
                        res.counterexamples.append(
                            Counterexample(n, index, msg, _text(obj, writers), _text(small, writers))
                        )
    return report


def corpus(seed: int, samples: int) -> list:
    """The standard generated corpus: both dialects, circuits and oracle-sized programs."""
    rng = random.Random(seed)
    out: list = []
    for _ in range(samples):
        s = rng.randrange(1 << 30)
        out.append(gen_qasm(s, version="3"))
        out.append(gen_qasm(s, version="2.0"))
        out.append(gen_quip(s))
        out.append(gen_qasm(s, version="3", oracle_mode=True))
        out.append(gen_quip(s, oracle_mode=True))
        out.append(gen_qasm(s, version="3", oracle_mode=True, clifford_t=True))
    return out


def conformance(seed: int = 0, samples: int = 100, laws: Sequence[str] | None = None) -> LawReport:
    """Run the laws over the standard generated corpus."""
    return check_laws(corpus(seed, samples), laws)
