from __future__ import annotations

import cmath
import math
from importlib.resources import files

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quipqasm.catalog import (
    BASE,
    LIBRARY_FILES,
    REJECTED_VARIANTS,
    RULES,
    CatalogError,
    check_rule,
    inverse_gate,
    library_text,
    lookup,
    new_controls,
    rules_for,
    verify_catalog,
)
from quipqasm.ir import Control, GateKind, Unitary
from quipqasm.oracle import (
    H,
    S,
    ancilla_identity_check,
    controlled,
    eq_upto_phase,
    gate_matrix,
    rz,
    sequence_matrix,
    u_gate,
)

K = GateKind
X = gate_matrix(K.X)


def test_every_rule_verifies():
    report = verify_catalog()
    assert report.ok, str(report)
    assert report.max_deviation(exact=True) <= 1e-12
    assert report.max_deviation(exact=False) <= 1e-10
    assert len(report.checks) == len(RULES)


@pytest.mark.parametrize("rule", RULES, ids=lambda r: r.name)
def test_rule_has_no_new_controls(rule):
    check = check_rule(rule)
    assert check.ok and check.new_controls == ()


@pytest.mark.parametrize("rule", REJECTED_VARIANTS, ids=lambda r: r.name)
def test_rejected_variants_fail_the_oracle(rule):
    assert not check_rule(rule).ok


def test_new_controls_detects_added_controls():
    rule = rules_for("c-t-one-ancilla")
    body = [Unitary(K.H, (2,), controls=(Control(0), Control(1)))]
    assert new_controls(rule, body, 1) == ["H with 2 control(s)"]


@pytest.mark.parametrize("name", LIBRARY_FILES)
def test_shipped_libraries_match_the_catalog(name):
    assert (files("quipqasm") / "data" / name).read_text() == library_text(name)


def test_basis_change_shape():
    body = rules_for("rx-basis-change").expand((0.7,), (), (0,))
    assert [g.kind for g in body] == [K.H, K.EXPZ, K.H]
    assert body[1].params == (0.35,)
    cbody = rules_for("rx-basis-change").expand((0.7,), (Control(0),), (1,))
    assert [bool(g.controls) for g in cbody] == [False, True, False]


def test_ccx_with_four_ancillas():
    rule = rules_for("cc-x-four-ancillas")
    body = rule.expand((), (Control(0), Control(1)), (2,), (3, 4, 5, 6))
    full = sequence_matrix(body, 7)
    assert ancilla_identity_check(full, controlled(controlled(X)), [0, 0, 0, 0])


@pytest.mark.parametrize("kind, root", [(K.X, K.SX), (K.Z, K.S), (K.S, K.T)])
def test_square_root_control(kind, root):
    body = rules_for(f"sqrt-control-{kind.value.lower()}").expand((), (Control(0), Control(1)), (2,))
    assert {g.kind for g in body} <= {root, K.X}
    assert np.allclose(sequence_matrix(body, 3), controlled(controlled(gate_matrix(kind))))


def test_lookup_examples():
    assert lookup(K.W, 0, target="qasm3").name.startswith("w-")
    c_omega = lookup(K.OMEGA, 1)
    assert c_omega.name == "c-omega-as-t"
    assert lookup(K.T, 1).name == "c-t-one-ancilla"
    assert lookup(K.IX, 0, target="qasm3").name == "ix-xsxsx"
    assert [g.kind for g in rules_for("ix-xsxsx").expand((), (), (0,))] == [K.X, K.S, K.X, K.S, K.X]
    assert lookup(K.X, 1) == BASE
    with pytest.raises(CatalogError):
        lookup(K.CU, 0, target="lsc")


def test_controlled_omega_is_a_phase_on_the_control():
    body = rules_for("c-omega-as-t").expand((), (Control(0),), (1,))
    assert all(0 in g.all_wires() and 1 not in g.all_wires() for g in body)


def _product(seq, dim: int) -> np.ndarray:
    out = np.eye(dim, dtype=complex)
    for k, p in seq:
        m = gate_matrix(k, p)
        out = (m[0, 0] * out) if k is K.GPHASE else m @ out
    return out


@pytest.mark.parametrize("kind", [k for k in K if k is not K.GPHASE])
def test_inverse_table_is_involutive(kind):
    rng = np.random.default_rng(5)
    params = tuple(rng.uniform(-3, 3, kind.nparams))
    m = gate_matrix(kind, params)
    d = m.shape[0]
    inverse = inverse_gate(kind, params)
    assert np.allclose(_product(inverse, d) @ m, np.eye(d))
    twice = np.eye(d, dtype=complex)
    for k, p in inverse:
        twice = twice @ _product(inverse_gate(k, p), d)
    assert np.allclose(twice, m)


@settings(max_examples=100, deadline=None)
@given(st.floats(-7, 7), st.floats(-7, 7), st.floats(-7, 7))
def test_u_closed_form(theta, phi, lam):
    body = rz(phi) @ S @ H @ rz(theta) @ H @ S.conj().T @ rz(lam)
    # the scalar is e^{i(phi+lambda)/2}; with an extra e^{i theta} only phase equality remains
    assert np.max(np.abs(u_gate(theta, phi, lam) - cmath.exp(0.5j * (phi + lam)) * body)) <= 1e-10
    assert eq_upto_phase(u_gate(theta, phi, lam), cmath.exp(1j * theta) * body)


def test_u2_up_to_phase():
    phi, lam = 0.4, -1.3
    body = rz(phi) @ S @ H @ S @ H @ S.conj().T @ rz(lam)
    assert eq_upto_phase(gate_matrix(K.U2, (phi, lam)), body)
    assert not eq_upto_phase(gate_matrix(K.U2, (phi, lam)), rz(phi) @ S @ H @ rz(lam))


def test_omega_conflict_resolved_by_the_oracle():
    assert check_rule(rules_for("omega-phase-flip")).ok
    assert not check_rule(rules_for("omega-flip-with-negated-phase")).ok
    assert math.isclose(np.angle(gate_matrix(K.OMEGA)[0, 0]), math.pi / 4)
