from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quipqasm.ir import Control, GateKind, QuipCircuit, Unitary, WireOp, WireType
from quipqasm.oracle import (
    DirtyAncillaError,
    H,
    I2,
    OMEGA,
    OracleError,
    S,
    X,
    Z,
    ancilla_identity_check,
    circuit_matrix,
    controlled,
    dump_csv,
    eq_upto_phase,
    gate_matrix,
    is_unitary,
    kron,
    operator,
    p_gate,
    sequence_matrix,
    u_gate,
)
from quipqasm.qasm import parse_qasm

K = GateKind
Q = WireType.QBIT


def ket(bits: str) -> np.ndarray:
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def random_unitary(rng: np.random.Generator, n: int = 1) -> np.ndarray:
    z = rng.normal(size=(1 << n, 1 << n)) + 1j * rng.normal(size=(1 << n, 1 << n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


ANGLES = [0.0, 0.3, -1.7, math.pi]


@pytest.mark.parametrize("kind", list(K))
def test_semantics_table_is_unitary(kind):
    for a in ANGLES:
        assert is_unitary(gate_matrix(kind, (a,) * kind.nparams))


def test_kron_examples():
    assert np.array_equal(kron(I2, X), np.block([[X, 0 * X], [0 * X, X]]))
    assert np.array_equal(kron(ket("0"), ket("11")).ravel(), ket("011"))
    rng = np.random.default_rng(1)
    m, n = random_unitary(rng), random_unitary(rng, 2)
    psi, phi = random_unitary(rng)[:, 0], random_unitary(rng, 2)[:, 0]
    assert np.allclose(kron(m, n) @ kron(psi, phi).ravel(), kron(m @ psi, n @ phi).ravel())


def test_controlled_examples():
    cx = controlled(X)
    assert np.array_equal(cx @ ket("10"), ket("11")) and np.array_equal(cx @ ket("11"), ket("10"))
    assert np.array_equal(controlled(I2), np.eye(4))
    ccx = controlled(controlled(X))
    for b in range(8):
        bits = format(b, "03b")
        want = bits[:2] + (str(1 - int(bits[2])) if bits[:2] == "11" else bits[2])
        assert np.array_equal(ccx @ ket(bits), ket(want))
    with pytest.raises(OracleError):
        controlled(np.array([[1, 1], [0, 1]]))


def test_negative_control_is_x_conjugation():
    assert np.allclose(controlled(H, (False,)), kron(X, I2) @ controlled(H) @ kron(X, I2))


def test_sequence_order_and_small_circuits():
    assert np.allclose(sequence_matrix([Unitary(K.H, (0,))], 1), H)
    assert np.allclose(sequence_matrix([Unitary(K.H, (0,)), Unitary(K.H, (0,))], 1), np.eye(2), atol=1e-12)
    # g1 ; g2 denotes M(g2) . M(g1)
    m = sequence_matrix([Unitary(K.H, (0,)), Unitary(K.S, (0,))], 1)
    assert np.allclose(m, S @ H)
    # wire 0 is the most significant bit
    assert np.allclose(sequence_matrix([Unitary(K.X, (0,))], 2), kron(X, I2))


def test_global_phase_equality():
    assert eq_upto_phase(OMEGA, I2) and not np.allclose(OMEGA, I2)
    assert np.allclose(OMEGA, cmath.exp(1j * math.pi / 4) * I2)
    assert not eq_upto_phase(X, Z)
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = random_unitary(rng, 2)
        c = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        assert eq_upto_phase(m, c * m, tol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_phase_equality_is_an_equivalence(seed):
    rng = np.random.default_rng(seed)
    a = random_unitary(rng)
    b = cmath.exp(1j * rng.uniform(0, 6.3)) * a
    c = cmath.exp(1j * rng.uniform(0, 6.3)) * b
    assert eq_upto_phase(a, a) and eq_upto_phase(b, a) and eq_upto_phase(a, c)


def test_ancilla_identity_check():
    rng = np.random.default_rng(3)
    u = random_unitary(rng, 2)
    assert ancilla_identity_check(kron(u, I2), u, [0])
    assert ancilla_identity_check(kron(u, I2, I2), u, [1, 0])
    assert not ancilla_identity_check(kron(u, X), u, [0])
    with pytest.raises(OracleError):
        ancilla_identity_check(kron(u, I2), u, [0, 0])


def test_controlled_t_with_an_ancilla():
    # Toffoli onto a fresh ancilla, T on it, uncompute: a clean controlled-T
    toffoli = Unitary(K.X, (2,), controls=(Control(0), Control(1)))
    gates = [toffoli, Unitary(K.T, (2,)), toffoli]
    full = sequence_matrix(gates, 3)
    ct = controlled(gate_matrix(K.T))
    assert ancilla_identity_check(full, ct, [0])


@settings(max_examples=100, deadline=None)
@given(st.floats(-7, 7), st.floats(-7, 7), st.floats(-7, 7))
def test_u_factorisation(theta, phi, lam):
    # the scalar is e^{-i theta/2}; the opposite sign only holds up to global phase
    rhs = cmath.exp(-1j * theta / 2) * p_gate(phi + math.pi / 2) @ H @ p_gate(theta) @ H @ p_gate(lam - math.pi / 2)
    assert np.max(np.abs(u_gate(theta, phi, lam) - rhs)) <= 1e-10


def test_phase_gate_special_values():
    assert np.max(np.abs(p_gate(math.pi / 2) - S)) <= 1e-15
    assert np.max(np.abs(p_gate(-math.pi / 2) - S.conj().T)) <= 1e-15


def test_parametric_conventions():
    assert np.allclose(gate_matrix(K.EXPZ, (0.4,)), gate_matrix(K.RZ, (0.8,)))
    assert np.allclose(gate_matrix(K.RGATE, (3.0,)), p_gate(2 * math.pi / 8))
    u2 = gate_matrix(K.U2, (0.2, 0.5))
    assert np.allclose(u2, cmath.exp(-0.35j) * u_gate(math.pi / 2, 0.2, 0.5))


def test_qasm_and_quipper_prefixes_agree(qpe_qasm, qpe_quip):
    a, ins_a, _ = operator(qpe_qasm, stop_at_measure=True)
    b, ins_b, _ = operator(qpe_quip, stop_at_measure=True)
    assert len(ins_a) == len(ins_b) == 4
    assert eq_upto_phase(a, b, tol=1e-9)


def test_measurement_free_qasm_program():
    p = parse_qasm('OPENQASM 3;\ninclude "stdgates.inc";\nqubit[2] q;\nh q[0];\ncx q[0], q[1];\n')
    assert np.allclose(circuit_matrix(p), controlled(X) @ kron(H, I2))


def test_rejections():
    with pytest.raises(DirtyAncillaError):
        circuit_matrix(QuipCircuit.build([(0, Q)], [WireOp("QInit0", 1), Unitary(K.H, (1,)), WireOp("QTerm0", 1)]))
    with pytest.raises(OracleError):
        circuit_matrix(QuipCircuit.build([(0, Q)], [WireOp("QMeas", 0)]))
    with pytest.raises(OracleError):
        gate_matrix(K.RX, ())


def test_dump_csv(tmp_path):
    dump_csv(H, tmp_path / "h.csv")
    rows = (tmp_path / "h.csv").read_text().splitlines()
    assert len(rows) == 2 and rows[0].count(",") == 1
