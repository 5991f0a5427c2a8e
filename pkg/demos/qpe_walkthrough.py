"""Walk the bundled phase-estimation circuit through every tool.

Run with ``python3 demos/qpe_walkthrough.py``.  Each step prints what it
produced and checks the result against the matrix oracle.
"""

from __future__ import annotations

from importlib.resources import files

import numpy as np

from quipqasm import (
    check_circuit,
    elim_ctrls,
    elim_funs,
    elim_invs,
    elim_pows,
    normalize,
    operator,
    parse_quip,
    qasm_to_quip,
    quip_to_qasm,
    reg_merge,
    structural_eq,
    to_lsc,
    to_qasm2,
    write_qasm,
    write_quip,
)
from quipqasm.ir import Operand
from quipqasm.oracle import phase_deviation


def banner(title: str) -> None:
    print(f"\n== {title} ==")


def main() -> None:
    text = (files("quipqasm") / "data" / "qpe.quip").read_text()
    circuit = parse_quip(text)

    banner("1. Quipper source")
    print(f"{len(circuit.gates)} gates, inputs {[w for w, _ in circuit.inputs]}")
    report = check_circuit(circuit)
    print(f"input arity {report.input_arity}")
    print("ancilla lifetimes (wire, init, term):",
          [(iv.wire, iv.birth, iv.death) for iv in report.intervals])

    banner("2. Prefix semantics from |0000>")
    matrix, _, _ = operator(circuit, stop_at_measure=True)
    state = matrix[:, 0]
    best = int(np.argmax(np.abs(state)))
    print(f"most likely basis state {best:04b} with probability {abs(state[best]) ** 2:.6f}")

    banner("3. Quipper -> OpenQASM 3 -> Quipper")
    program = quip_to_qasm(circuit)
    print(write_qasm(program))
    back = qasm_to_quip(program)
    again = quip_to_qasm(back)
    print("T_a . T_b . T_a == T_a (up to renaming):",
          structural_eq(normalize(again), normalize(program), alpha=True))

    banner("4. Pipeline down to the lattice-surgery subset")
    lowered = to_lsc(to_qasm2(reg_merge(elim_funs(elim_pows(elim_invs(quip_to_qasm(elim_ctrls(circuit))))))))
    out = write_qasm(lowered)
    gate_lines = [line for line in out.splitlines() if line and not line.startswith(("OPENQASM", "include", "qreg", "creg", "measure", "//"))]
    print(f"{len(gate_lines)} gate statements; gate set {sorted({g.split()[0].split('(')[0] for g in gate_lines})}")

    qubits = [Operand("q", i) for i in range(7)]
    full, _, _ = operator(lowered, stop_at_measure=True, zero_inputs=qubits[4:], outputs=qubits)
    blocks = full.reshape(16, 8, 16)
    dev, _ = phase_deviation(matrix, blocks[:, 0, :])
    print(f"ancilla leak {np.abs(blocks[:, 1:, :]).max():.1e}, deviation from source {dev:.1e}")

    banner("5. Quipper after elim-ctrls (first lines)")
    print("\n".join(write_quip(elim_ctrls(circuit)).splitlines()[:8]))


if __name__ == "__main__":
    main()
