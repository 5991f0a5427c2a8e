from __future__ import annotations

import pytest

from quipqasm.dfa import check_circuit
from quipqasm.harness import (
    LAWS,
    Writers,
    _violates,
    check_laws,
    conformance,
    corpus,
    gen_qasm,
    gen_quip,
    shrink,
)
from quipqasm.ir import QuipCircuit, Unitary, validate
from quipqasm.oracle import operator
from quipqasm.qasm import write_qasm
from quipqasm.quipper import write_quip


def test_generation_is_deterministic():
    assert gen_qasm(17) == gen_qasm(17) and gen_quip(17) == gen_quip(17)
    assert write_qasm(gen_qasm(17)) != write_qasm(gen_qasm(18))


def test_size_one_gives_a_single_statement():
    assert len(gen_qasm(0, 1).statements) == 1
    assert len([g for g in gen_quip(0, 1).gates if isinstance(g, Unitary)]) == 1


def test_thousand_programs_validate():
    for seed in range(1000):
        assert validate(gen_qasm(seed, version="3" if seed % 2 else "2.0")) == []


def test_generated_circuits_pass_the_automaton():
    for seed in range(300):
        check_circuit(gen_quip(seed))


@pytest.mark.parametrize("seed", range(20))
def test_oracle_mode_is_small_and_measurement_free(seed):
    for obj in (gen_qasm(seed, oracle_mode=True), gen_quip(seed, oracle_mode=True)):
        m, ins, _ = operator(obj)
        assert len(ins) <= 4 and m.shape[1] == 1 << len(ins)


def test_all_laws_hold_on_a_small_corpus():
    report = conformance(seed=3, samples=10)
    assert report.ok, report.summary()
    assert set(report.results) == set(LAWS)
    assert all(r.passed > 0 for r in report.results.values())


def test_report_is_deterministic():
    a = check_laws(corpus(5, 3), ["retraction", "idempotence"])
    b = check_laws(corpus(5, 3), ["retraction", "idempotence"])
    assert a.summary() == b.summary()


def _dropping_writer(p) -> str:
    """Loses the last gate application: a deliberately broken OpenQASM writer."""
    lines = write_qasm(p).rstrip("\n").split("\n")
    for i in range(len(lines) - 1, -1, -1):
        if lines[i] and not lines[i].startswith(("OPENQASM", "include", "qubit", "bit", "//")) and "measure" not in lines[i]:
            del lines[i]
            break
    return "\n".join(lines) + "\n"


def test_broken_writer_yields_shrunk_counterexamples():
    broken = Writers(qasm=_dropping_writer, quip=write_quip)
    report = check_laws(corpus(1, 4), ["retraction"], writers=broken)
    result = report.results["retraction"]
    assert result.failed > 0 and result.counterexamples
    cx = result.counterexamples[0]
    assert len(cx.shrunk) <= len(cx.original)


def test_shrinking_preserves_the_failure():
    broken = Writers(qasm=_dropping_writer, quip=write_quip)
    (law,) = [law for law in LAWS["retraction"] if law.applies_to.__name__ == "QasmProgram"]
    p = gen_qasm(11, 12, calls=False)
    assert _violates(law, p, broken) is not None
    small = shrink(law, p, broken)
    assert _violates(law, small, broken) is not None
    assert len(small.statements) <= 1


def test_broken_quipper_writer_is_caught():
    def swap_star(c: QuipCircuit) -> str:
        return write_quip(c).replace("]*(", "](")

    broken = Writers(qasm=write_qasm, quip=swap_star)
    circuits = [c for c in (gen_quip(s) for s in range(60)) if "]*(" in write_quip(c)]
    assert circuits
    report = check_laws(circuits, ["retraction"], writers=broken)
    assert report.results["retraction"].failed == len(circuits)


def test_unknown_law_is_rejected():
    with pytest.raises(KeyError):
        check_laws([], ["commutativity"])
