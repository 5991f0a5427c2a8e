from __future__ import annotations

import numpy as np
import pytest

from quipqasm.dfa import check_circuit
from quipqasm.harness import gen_qasm, gen_quip
from quipqasm.ir import Call, Control, GateApply, GateKind, Measure, Operand, QuipCircuit, Unitary, WireOp, WireType, structural_eq
from quipqasm.oracle import eq_upto_phase, operator
from quipqasm.qasm import parse_qasm, write_qasm
from quipqasm.quipper import parse_quip
from quipqasm.translate import TranslationError, qasm_to_quip, quip_to_qasm

K = GateKind
Q, C = WireType.QBIT, WireType.CBIT
STD = 'OPENQASM 3;\ninclude "stdgates.inc";\n'


def quip(text: str) -> QuipCircuit:
    return parse_quip(text)


def test_running_example_shape(qpe_quip):
    p = quip_to_qasm(qpe_quip)
    decls = {d.name: (d.kind, d.size) for d in p.declarations}
    assert decls["input_qwires"] == ("qubit", 4)
    assert {n for n in decls if n.startswith("qtmp_")} == {"qtmp_0", "qtmp_1", "qtmp_2"}
    assert {n for n in decls if n.startswith("ctmp_")} == {"ctmp_0", "ctmp_1", "ctmp_2"}
    calls = [s.name for s in p.statements if isinstance(s, Call)]
    assert calls == ["QInit0", "QMeas", "CDiscard"] * 3
    # state preparation, phase estimation, inverse transform and readout stay in order
    names = [s.name for s in p.statements if isinstance(s, GateApply)]
    assert names[:4] == ["x", "h", "h", "h"] and names.count("cp") == 3


def test_empty_circuit_gives_declarations_only():
    p = quip_to_qasm(quip("Inputs: 0:Qbit\nOutputs: 0:Qbit\n"))
    assert p.statements == () and [d.name for d in p.declarations] == ["input_qwires"]


def test_ancilla_pair_uses_a_temporary():
    p = quip_to_qasm(quip("Inputs: 0:Qbit\nQInit0(1)\nQTerm0(1)\nOutputs: 0:Qbit\n"))
    assert p.statements == (Call("QInit0", (Operand("qtmp_0"),)), Call("QTerm0", (Operand("qtmp_0"),)))


def test_measurement_reuses_its_classical_shadow():
    text = "Inputs: 0:Qbit\nQMeas(0)\nCDiscard(0)\nQInit0(0)\nQMeas(0)\nOutputs: 0:Cbit\n"
    p = quip_to_qasm(quip(text))
    results = [s.result for s in p.statements if isinstance(s, Call) and s.name == "QMeas"]
    assert results == [Operand("ctmp_0"), Operand("ctmp_0")]
    assert sum(1 for d in p.declarations if d.name.startswith("ctmp_")) == 1
    assert structural_eq(qasm_to_quip(p), quip(text), alpha=True)


def test_unsupported_wire_lifetime_is_rejected():
    bad = QuipCircuit((( 0, Q),), (WireOp("QInit0", 0),), ((0, Q),))
    with pytest.raises(ValueError):
        quip_to_qasm(bad)


def test_declaration_only_program():
    c = qasm_to_quip(parse_qasm("OPENQASM 3;\nqubit[2] q;\nqubit r;\n"))
    assert c.inputs == ((0, Q), (1, Q), (2, Q)) and c.gates == ()


def test_measure_becomes_an_entangling_gadget():
    c = qasm_to_quip(parse_qasm(STD + "qubit q;\nbit c;\nh q;\nc = measure q;\n"))
    init, cx, meas, discard = c.gates[1:]
    anc = init.wire
    assert init == WireOp("QInit0", anc)
    assert cx == Unitary(K.X, (anc,), controls=(Control(0),))
    assert meas == WireOp("QMeas", anc) and discard == WireOp("CDiscard", anc)
    assert c.outputs == ((0, Q),)


def test_reset_is_discard_then_init():
    c = qasm_to_quip(parse_qasm(STD + "qubit q;\nh q;\nreset q;\nh q;\n"))
    assert c.gates[1:3] == (WireOp("QDiscard", 0), WireOp("QInit0", 0))
    assert check_circuit(c).intervals[0].birth == 2


def test_runtime_calls_map_back_to_wire_operations():
    text = STD + 'include "quipfuncs.inc";\nqubit q;\nqubit a;\nbit m;\nQInit0(a);\ncx q, a;\nm = QMeas(a);\nCDiscard(m);\n'
    c = qasm_to_quip(parse_qasm(text))
    ops = [g.op for g in c.gates if isinstance(g, WireOp)]
    assert ops == ["QInit0", "QMeas", "CDiscard"]
    assert c.inputs == ((0, Q),)


@pytest.mark.parametrize(
    "body",
    [
        'include "quipfuncs.inc";\nqubit q;\nQTerm0(q);\nh q;\n',
        'include "quipfuncs.inc";\nqubit q;\nh q;\nQInit0(q);\n',
    ],
)
def test_lifetime_errors(body):
    with pytest.raises(TranslationError):
        qasm_to_quip(parse_qasm(STD + body))


def test_phase_rotations_become_controlled_phases(qpe_qasm):
    c = qasm_to_quip(qpe_qasm)
    phases = [g for g in c.gates if isinstance(g, Unitary) and g.kind is K.GPHASE]
    assert len(phases) == 3 and all(len(g.controls) == 2 and g.inverted for g in phases)
    assert [g.params[0] for g in phases] == pytest.approx([np.pi / 2, np.pi / 4, np.pi / 2])


def test_running_example_round_translation(qpe_qasm, qpe_quip):
    c = qasm_to_quip(qpe_qasm)
    assert structural_eq(qasm_to_quip(quip_to_qasm(c)), c, alpha=True)
    p = quip_to_qasm(qpe_quip)
    assert structural_eq(quip_to_qasm(qasm_to_quip(p)), p, alpha=True)
    a, _, _ = operator(qpe_qasm, stop_at_measure=True)
    b, _, _ = operator(c, stop_at_measure=True)
    assert eq_upto_phase(a, b, tol=1e-9)


def test_measurement_written_back():
    p = parse_qasm(STD + "qubit q;\nbit c;\nc = measure q;\nh q;\n")
    back = quip_to_qasm(qasm_to_quip(p))
    assert not any(isinstance(s, Measure) for s in back.statements)
    assert any(isinstance(s, Call) and s.name == "QMeas" for s in back.statements)


@pytest.mark.parametrize("seed", range(150))
def test_reflexive_and_idempotent_on_generated_programs(seed):
    c = gen_quip(seed)
    t1 = quip_to_qasm(c)
    assert structural_eq(quip_to_qasm(qasm_to_quip(t1)), t1, alpha=True)
    p = gen_qasm(seed)
    t2 = qasm_to_quip(p)
    assert structural_eq(qasm_to_quip(quip_to_qasm(t2)), t2, alpha=True)
    once = quip_to_qasm(t2)
    assert structural_eq(quip_to_qasm(qasm_to_quip(once)), once, alpha=True)
    assert len(write_qasm(quip_to_qasm(qasm_to_quip(once)))) <= len(write_qasm(once))


@pytest.mark.parametrize("seed", range(150))
def test_ancilla_data_survives_round_translation(seed):
    c = gen_quip(seed)
    back = qasm_to_quip(quip_to_qasm(c))
    r1, r2 = check_circuit(c), check_circuit(back)
    assert (r1.input_arity, r1.output_arity) == (r2.input_arity, r2.output_arity)
    assert sorted((iv.birth, iv.death) for iv in r1.intervals) == sorted((iv.birth, iv.death) for iv in r2.intervals)
