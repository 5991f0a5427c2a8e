from __future__ import annotations

import math

import pytest

from quipqasm.angles import Num, evaluate
from quipqasm.harness import gen_qasm, gen_quip, is_clifford_t
from quipqasm.ir import CTRL, INV, POW, GateApply, Modifier, Operand, QasmProgram, normalize, structural_eq
from quipqasm.oracle import circuit_matrix, eq_upto_phase, operator
from quipqasm.passes import (
    PassError,
    _admitted,
    control_census,
    elim_ctrls,
    elim_ctrls_qasm,
    elim_funs,
    elim_invs,
    elim_pows,
    load_lsc_config,
    modifier_census,
    reg_merge,
    to_lsc,
    to_qasm2,
)
from quipqasm.qasm import parse_qasm, write_qasm
from quipqasm.quipper import parse_quip

H3 = 'OPENQASM 3;\ninclude "stdgates.inc";\n'
H2 = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def q3(body: str) -> QasmProgram:
    return parse_qasm(H3 + body)


def gates(p: QasmProgram) -> list[str]:
    return [f"{s.name} {', '.join(map(str, s.operands))}" for s in p.statements if isinstance(s, GateApply)]


def same_semantics(a, b) -> bool:
    return eq_upto_phase(circuit_matrix(a), circuit_matrix(b), tol=1e-9)


# -- control elimination -------------------------------------------------------


def test_controlled_hadamard():
    c = parse_quip('Inputs: 0:Qbit, 1:Qbit\nQGate["H"](1) with controls=[+0]\nOutputs: 0:Qbit, 1:Qbit\n')
    out = elim_ctrls(c)
    assert len(out.gates) == 7 and all(_admitted(g) for g in out.gates)
    assert same_semantics(c, out)


def test_toffoli_uses_four_ancillas():
    c = parse_quip('Inputs: 0:Qbit, 1:Qbit, 2:Qbit\nQGate["not"](2) with controls=[+0,+1]\n'
                   'Outputs: 0:Qbit, 1:Qbit, 2:Qbit\n')
    out = elim_ctrls(c)
    assert [g.op for g in out.gates if hasattr(g, "op")] == ["QInit0"] * 4 + ["QTerm0"] * 4
    assert max(n for _, n in control_census(out)) == 1
    assert same_semantics(c, out)


def test_uncontrolled_gate_is_a_fixpoint():
    c = parse_quip('Inputs: 0:Qbit\nQGate["not"](0)\nOutputs: 0:Qbit\n')
    assert elim_ctrls(c) == c


@pytest.mark.parametrize("seed", range(40))
def test_elim_ctrls_on_generated_circuits(seed):
    c = gen_quip(seed, oracle_mode=True)
    out = elim_ctrls(c)
    assert all(_admitted(g) for g in out.gates if hasattr(g, "kind"))
    assert structural_eq(elim_ctrls(out), out)
    a, ins_a, _ = operator(c)
    b, ins_b, _ = operator(out)
    assert ins_a == ins_b and eq_upto_phase(a, b, tol=1e-9)


def test_elim_ctrls_on_qasm_leaves_no_control_modifiers():
    p = q3("qubit[3] q;\nctrl(2) @ h q[0], q[1], q[2];\n")
    out = elim_ctrls_qasm(p)
    assert modifier_census(out)[CTRL] == 0


# -- inverse, power and function elimination -------------------------------------


@pytest.mark.parametrize(
    "src, want",
    [
        ("inv @ rx(0.3) q;", ["rx(-0.3)"]),
        ("inv @ x q;", ["x"]),
        ("inv @ s q;", ["sdg"]),
        ("inv @ u2(0.1, 0.2) q;", [f"u3({-math.pi / 2!r}, -0.2, -0.1)"]),
        ("inv @ sx q;", ["sx", "x"]),
    ],
)
def test_elim_invs_examples(src, want):
    p = elim_invs(q3("qubit q;\n" + src + "\n"))
    assert [line.rsplit(" ", 1)[0] for line in write_qasm(p).strip().split("\n\n")[-1].splitlines()] == want
    assert same_semantics(q3("qubit q;\n" + src + "\n"), p)


def test_elim_invs_distributes_over_sequences():
    p = q3("qubit[2] q;\ninv @ ctrl @ sx q[0], q[1];\n")
    out = elim_invs(p)
    assert modifier_census(out)[INV] == 0
    assert same_semantics(p, out)


def test_elim_pows_examples():
    p = elim_pows(q3("qubit phi;\nqubit[3] x;\npow(2) @ ctrl @ t x[1], phi;\n"))
    assert p.statements == (GateApply("t", (), (Operand("x", 1), Operand("phi")), (Modifier(CTRL),)),) * 2
    assert elim_pows(q3("qubit q;\npow(0) @ s q;\n")).statements == ()
    neg = elim_pows(q3("qubit q;\npow(-1) @ s q;\n"))
    assert neg.statements[0].modifiers == (Modifier(INV),)
    assert gates(elim_invs(neg)) == ["sdg q"]
    assert modifier_census(neg)[POW] == 0


@pytest.mark.parametrize("src, value", [("rz(2*arcsin(1)) q;", math.pi), ("rz(cos(pi/3)) q;", 0.5),
                                        ("rz(exp(0) + ln(1)) q;", 1.0)])
def test_elim_funs_examples(src, value):
    (s,) = elim_funs(q3("qubit q;\n" + src + "\n")).statements
    assert isinstance(s.params[0], Num) and evaluate(s.params[0]) == pytest.approx(value, abs=1e-15)


def test_elim_funs_fixpoint_without_calls():
    p = q3("qubit q;\nrz(pi / 2) q;\n")
    assert elim_funs(p) == p


@pytest.mark.parametrize("seed", range(60))
def test_elim_passes_are_idempotent(seed):
    p = gen_qasm(seed)
    for f in (elim_invs, elim_pows, elim_funs, reg_merge):
        once = f(p)
        assert normalize(f(once)) == normalize(once)
    assert modifier_census(elim_invs(p))[INV] == 0
    assert modifier_census(elim_pows(p))[POW] == 0


# -- register merging and dialect conversion ----------------------------------------


def test_reg_merge_layout():
    p = reg_merge(q3("qubit phi;\nqubit[3] x;\nbit c;\ncx phi, x[2];\nc = measure x[0];\n"))
    assert [(d.kind, d.name, d.size) for d in p.declarations] == [("qubit", "q", 4), ("bit", "c", 1)]
    assert gates(p)[0] == "cx q[0], q[3]"
    assert "// phi -> q[0]" in write_qasm(p) and "// x[2] -> q[3]" in write_qasm(p)


def test_reg_merge_degenerate_cases():
    assert reg_merge(q3("")).declarations == ()
    merged = reg_merge(q3("qubit[2] q;\nh q[1];\n"))
    assert structural_eq(merged, q3("qubit[2] q;\nh q[1];\n"))


def test_to_qasm2_examples():
    p = to_qasm2(q3("qubit[2] q;\nsx q[0];\nswap q[0], q[1];\nx q[0];\n"))
    assert p.version == "2.0"
    assert gates(p) == ["h q[0]", "s q[0]", "h q[0]", "cx q[0], q[1]", "cx q[1], q[0]", "cx q[0], q[1]", "x q[0]"]
    assert parse_qasm(write_qasm(p), dialect="2.0") == p


def test_to_qasm2_measure_syntax():
    text = write_qasm(to_qasm2(q3("qubit[1] q;\nbit[1] c;\nc[0] = measure q[0];\n")))
    assert "measure q[0] -> c[0];" in text and "qreg q[1];" in text and "creg c[1];" in text


def test_to_qasm2_rejects_modifiers():
    with pytest.raises(PassError):
        to_qasm2(q3("qubit q;\ninv @ t q;\n"))


def test_legacy_output_never_contains_modifiers(qpe_qasm):
    text = write_qasm(to_qasm2(elim_funs(elim_pows(elim_invs(qpe_qasm)))))
    for token in ("ctrl", "negctrl", "inv @", "pow("):
        assert token not in text


def test_to_lsc_examples():
    config = load_lsc_config()
    p = to_lsc(parse_qasm(H2 + "qreg q[2];\ny q[0];\ncz q[0], q[1];\n"))
    assert gates(p) == ["z q[0]", "x q[0]", "h q[1]", "cx q[0], q[1]", "h q[1]"]
    assert {s.name for s in p.statements} <= set(config.gates)
    white = parse_qasm(H2 + "qreg q[2];\nh q[0];\ncx q[0], q[1];\nt q[1];\n")
    assert to_lsc(white) == white


def test_to_lsc_rejects_arbitrary_angles():
    with pytest.raises(PassError, match="cannot lower"):
        to_lsc(parse_qasm(H2 + "qreg q[1];\nrx(0.3) q[0];\n"))


def test_controlled_phase_gates_lower_without_ancillas(qpe_qasm):
    legacy = to_qasm2(elim_funs(elim_pows(elim_invs(qpe_qasm))))
    assert [s.name for s in legacy.statements if isinstance(s, GateApply)].count("cu1") == 7 + 3
    a, _, _ = operator(qpe_qasm, stop_at_measure=True)
    b, _, _ = operator(legacy, stop_at_measure=True)
    assert eq_upto_phase(a, b, tol=1e-9)


@pytest.mark.parametrize("seed", range(30))
def test_clifford_t_programs_reach_the_whitelist(seed):
    p = gen_qasm(seed, oracle_mode=True, clifford_t=True)
    legacy = to_qasm2(reg_merge(elim_funs(elim_pows(elim_invs(elim_ctrls_qasm(p))))))
    try:
        out = to_lsc(legacy)
    except PassError as exc:
        # only programs with phases finer than pi/4 may be refused
        assert "cannot lower" in str(exc) and not is_clifford_t(legacy)
        return
    assert {s.name for s in out.statements} <= set(load_lsc_config().gates)
    if len(legacy.qubits()) <= 7:
        a, _, _ = operator(legacy)
        b, _, _ = operator(out)
        assert eq_upto_phase(a, b, tol=1e-9)
