from __future__ import annotations

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quipqasm.dfa import (
    DoubleInit,
    Event,
    Interval,
    ShadowMap,
    TermBeforeInit,
    UseAfterTerm,
    UseBeforeInit,
    WireState,
    check_circuit,
    dfa_step,
    run_dfa,
    shadow_alloc,
)
from quipqasm.harness import gen_quip
from quipqasm.ir import Operand, WireType
from quipqasm.quipper import parse_quip

F, LI, LA, D = WireState.FRESH, WireState.LIVE_INPUT, WireState.LIVE_ANCILLA, WireState.DEAD
INIT, TERM, USE = Event.INIT, Event.TERM, Event.USE


@pytest.mark.parametrize(
    "state, event, after",
    [(F, USE, LI), (F, INIT, LA), (LI, USE, LI), (LA, USE, LA), (LI, TERM, D), (LA, TERM, D), (D, INIT, LA)],
)
def test_edges(state, event, after):
    assert dfa_step(state, event) is after


@pytest.mark.parametrize(
    "state, event, error",
    [(LI, INIT, DoubleInit), (LA, INIT, DoubleInit), (D, USE, UseAfterTerm), (D, TERM, UseAfterTerm),
     (F, TERM, TermBeforeInit)],
)
def test_missing_edges(state, event, error):
    with pytest.raises(error):
        dfa_step(state, event)


@pytest.mark.parametrize(
    "body, error, wire, index",
    [
        ("QInit0(0)", DoubleInit, 0, 0),
        ('QGate["H"](3)', UseBeforeInit, 3, 0),
        ('QTerm0(1)\nQGate["H"](0) with controls=[+1]', UseAfterTerm, 1, 1),
        ('QGate["H"](0)\nQTerm0(5)', TermBeforeInit, 5, 1),
        ("QInit0(2)\nQInit1(2)", DoubleInit, 2, 1),
    ],
)
def test_named_errors_carry_wire_and_index(body, error, wire, index):
    with pytest.raises(error) as info:
        parse_quip(f"Inputs: 0:Qbit, 1:Qbit\n{body}\nOutputs: 0:Qbit, 1:Qbit\n")
    assert (info.value.wire, info.value.index) == (wire, index)
    assert error.__name__ in str(info.value)


def test_reset_is_accepted():
    c = parse_quip("Inputs: 0:Qbit\nQDiscard(0)\nQInit0(0)\nOutputs: 0:Qbit\n")
    report = check_circuit(c)
    assert report.input_arity == 1 and report.output_arity == 1
    assert report.intervals == (Interval(0, 1, None),)


def test_arity_inference_without_a_header():
    events = [(0, "a", USE), (1, "b", INIT), (2, "a", TERM), (3, "b", USE), (4, "c", USE)]
    report = run_dfa(events)
    assert report.inputs == ("a", "c") and report.outputs == ("b", "c")
    assert report.intervals == (Interval("b", 1, None),)


def test_intervals_of_the_running_example(qpe_quip):
    report = check_circuit(qpe_quip)
    assert report.input_arity == report.output_arity == 4
    assert [(iv.wire, iv.birth, iv.death) for iv in report.intervals] == [(4, 17, 20), (5, 21, 24), (6, 25, 28)]


@pytest.mark.parametrize("seed", range(200))
def test_generated_circuits_are_accepted(seed):
    c = gen_quip(seed)
    report = check_circuit(c)
    assert report.output_arity == len(c.outputs)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(list(Event)), max_size=12))
def test_single_wire_language(events):
    """Accepted words: an optional input phase (Use+ Term) followed by ancilla phases (Init Use* Term)."""
    state, ok = F, True
    for e in events:
        try:
            state = dfa_step(state, e)
        except ValueError:
            ok = False
            break
    word = "".join({INIT: "i", TERM: "t", USE: "u"}[e] for e in events)
    assert ok == bool(re.fullmatch(r"u+|(u+t)?(iu*t)*(iu*)?", word))


def test_shadow_allocation_is_lazy_and_permanent():
    smap = ShadowMap()
    smap, c0 = shadow_alloc(smap, 0, WireType.CBIT)
    assert c0 == Operand("ctmp_0")
    smap, again = shadow_alloc(smap, 0, WireType.CBIT)
    assert again == c0
    smap, q0 = shadow_alloc(smap, 0, WireType.QBIT)
    assert q0 == Operand("qtmp_0") and smap.carrier(0) == q0
    smap, _ = shadow_alloc(smap, 0, WireType.CBIT)
    assert smap.get(0).qreg == q0 and smap.get(0).creg == c0
    assert smap.allocated == [("bit", "ctmp_0"), ("qubit", "qtmp_0")]
