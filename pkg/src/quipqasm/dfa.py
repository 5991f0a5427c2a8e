"""Wire lifetimes: the per-wire automaton and the shadow-register map.

Every wire moves through four states driven by three events::

    Fresh --Use--> LiveInput        Fresh --Init--> LiveAncilla
    Live* --Use--> (same)           Live* --Term--> Dead
    Dead  --Init--> LiveAncilla     (a reset: termination then preparation)

Every other edge is an error.  The automaton tells inputs (first event
``Use``) from ancillas (first event ``Init``) and outputs (live at the end),
which is what lets a translated program recover Quipper's ancilla structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Sequence

from .ir import Operand, QuipCircuit, Unitary, WireType

__all__ = [
    "DFAError",
    "DoubleInit",
    "Event",
    "Interval",
    "ShadowMap",
    "TermBeforeInit",
    "UseAfterTerm",
    "UseBeforeInit",
    "WireReport",
    "WireState",
    "check_circuit",
    "circuit_events",
    "dfa_step",
    "run_dfa",
    "shadow_alloc",
]


class WireState(Enum):
    FRESH = "Fresh"
    LIVE_INPUT = "LiveInput"
    LIVE_ANCILLA = "LiveAncilla"
    DEAD = "Dead"

    @property
    def live(self) -> bool:
        return self in (WireState.LIVE_INPUT, WireState.LIVE_ANCILLA)


class Event(Enum):
    INIT = "Init"
    TERM = "Term"
    USE = "Use"


class DFAError(ValueError):
    """A missing edge of the wire automaton.

    ``wire`` and ``index`` (position of the offending event) are filled in by
    :func:`run_dfa`; :func:`dfa_step` alone raises with them unset.
    """

    name = "DFAError"

    def __init__(self, state: WireState, event: Event, wire: Hashable = None, index: int | None = None) -> None:
        self.state, self.event, self.wire, self.index = state, event, wire, index
        where = "" if wire is None else f" on wire {wire}" + ("" if index is None else f" at event {index}")
        super().__init__(f"{self.name}{where}: no {event.value} edge from {state.value}")

    def at(self, wire: Hashable, index: int) -> "DFAError":
        return type(self)(self.state, self.event, wire, index)


class DoubleInit(DFAError):
    name = "DoubleInit"


class UseBeforeInit(DFAError):
    name = "UseBeforeInit"


class UseAfterTerm(DFAError):
    name = "UseAfterTerm"


class TermBeforeInit(DFAError):
    name = "TermBeforeInit"


_EDGES: dict[tuple[WireState, Event], WireState] = {
    (WireState.FRESH, Event.USE): WireState.LIVE_INPUT,
    (WireState.FRESH, Event.INIT): WireState.LIVE_ANCILLA,
    (WireState.LIVE_INPUT, Event.USE): WireState.LIVE_INPUT,
    (WireState.LIVE_ANCILLA, Event.USE): WireState.LIVE_ANCILLA,
    (WireState.LIVE_INPUT, Event.TERM): WireState.DEAD,
    (WireState.LIVE_ANCILLA, Event.TERM): WireState.DEAD,
    (WireState.DEAD, Event.INIT): WireState.LIVE_ANCILLA,
}


def dfa_step(state: WireState, event: Event) -> WireState:
    """One transition; raises the named :class:`DFAError` for a missing edge."""
    nxt = _EDGES.get((state, event))
    if nxt is not None:
        return nxt
    if event is Event.INIT:
        raise DoubleInit(state, event)
    if event is Event.TERM:
        if state is WireState.FRESH:
            raise TermBeforeInit(state, event)
        raise UseAfterTerm(state, event)
    raise UseAfterTerm(state, event)  # Dead + Use


@dataclass(frozen=True)
class Interval:
    """One ancilla lifetime: event index of birth and of death (``None`` if it outlives the circuit)."""

    wire: Hashable
    birth: int
    death: int | None


@dataclass(frozen=True)
class WireReport:
    inputs: tuple[Hashable, ...]
    outputs: tuple[Hashable, ...]
    intervals: tuple[Interval, ...]
    states: dict = field(compare=False, default_factory=dict)

    @property
    def input_arity(self) -> int:
        return len(self.inputs)

    @property
    def output_arity(self) -> int:
        return len(self.outputs)


def run_dfa(
    events: Iterable[tuple[int, Hashable, Event]],
    inputs: Sequence[Hashable] | None = None,
) -> WireReport:
    """Run the automaton over ``(index, wire, event)`` triples.

    With ``inputs`` given (strict mode, e.g. a Quipper header), exactly those
    wires start live, and a ``Use`` of any other fresh wire is
    :class:`UseBeforeInit`.  Without it, a wire whose first event is ``Use``
    is inferred to be an input.
    """
    states: dict[Hashable, WireState] = {}
    order: list[Hashable] = []
    births: dict[Hashable, int] = {}
    intervals: list[Interval] = []
    input_set = set(inputs) if inputs is not None else None
    if inputs is not None:
        for w in inputs:
            states[w] = WireState.LIVE_INPUT
            order.append(w)
    found_inputs: list[Hashable] = list(inputs or [])
    for index, wire, event in events:
        state = states.get(wire, WireState.FRESH)
        if state is WireState.FRESH and wire not in order:
            order.append(wire)
        if input_set is not None and state is WireState.FRESH and event is Event.USE:
            raise UseBeforeInit(state, event, wire, index)
        try:
            nxt = dfa_step(state, event)
        except DFAError as exc:
            raise exc.at(wire, index) from None
        if state is WireState.FRESH and nxt is WireState.LIVE_INPUT:
            found_inputs.append(wire)
        if nxt is WireState.LIVE_ANCILLA and not state.live:
            births[wire] = index
        if nxt is WireState.DEAD and state is WireState.LIVE_ANCILLA:
            intervals.append(Interval(wire, births.pop(wire), index))
        states[wire] = nxt
    for w, b in births.items():
        intervals.append(Interval(w, b, None))
    outputs = tuple(w for w in order if states.get(w, WireState.FRESH).live)
    intervals.sort(key=lambda iv: (iv.birth, str(iv.wire)))
    return WireReport(tuple(found_inputs), outputs, tuple(intervals), dict(states))


def circuit_events(circuit: QuipCircuit) -> list[tuple[int, int, Event]]:
    """Automaton events of a Quipper circuit, one index per gate."""
    out: list[tuple[int, int, Event]] = []
    for i, g in enumerate(circuit.gates):
        if isinstance(g, Unitary):
            out.extend((i, w, Event.USE) for w in g.all_wires())
        else:
            out.append((i, g.wire, Event(g.event)))
    return out


def check_circuit(circuit: QuipCircuit | tuple, gates: Sequence | None = None, strict: bool = True) -> WireReport:
    """Run the automaton over a circuit (or over ``inputs, gates``)."""
    if gates is not None:
        inputs = [w for w, _ in circuit]  # type: ignore[union-attr]
        circuit = QuipCircuit(tuple(circuit), tuple(gates), ())  # type: ignore[arg-type]
    else:
        inputs = [w for w, _ in circuit.inputs]  # type: ignore[union-attr]
    return run_dfa(circuit_events(circuit), inputs if strict else None)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# shadow registers


@dataclass
class Shadow:
    qreg: Operand | None = None
    creg: Operand | None = None
    current: WireType = WireType.QBIT


@dataclass
class ShadowMap:
    """Each wire's quantum and classical carrier registers.

    Shadows are allocated lazily and never reclaimed: once a wire has a
    ``qtmp``/``ctmp`` register, every later phase of that wire reuses it.
    """

    shadows: dict[int, Shadow] = field(default_factory=dict)
    allocated: list[tuple[str, str]] = field(default_factory=list)  # (kind, name) in allocation order
    counters: dict[str, int] = field(default_factory=lambda: {"qtmp": 0, "ctmp": 0})

    def bind(self, wire: int, ref: Operand, wtype: WireType) -> None:
        sh = self.shadows.setdefault(wire, Shadow())
        if wtype is WireType.QBIT:
            sh.qreg = ref
        else:
            sh.creg = ref
        sh.current = wtype

    def carrier(self, wire: int) -> Operand:
        sh = self.shadows[wire]
        ref = sh.qreg if sh.current is WireType.QBIT else sh.creg
        assert ref is not None
        return ref

    def get(self, wire: int) -> Shadow | None:
        return self.shadows.get(wire)


def shadow_alloc(smap: ShadowMap, wire: int, needed: WireType) -> tuple[ShadowMap, Operand]:
    """Return the wire's register of type ``needed``, declaring ``qtmp_k``/``ctmp_k`` if it has none.

    The wire's current carrier becomes the returned register.
    """
    sh = smap.shadows.setdefault(wire, Shadow(current=needed))
    existing = sh.qreg if needed is WireType.QBIT else sh.creg
    if existing is None:
        prefix = "qtmp" if needed is WireType.QBIT else "ctmp"
        name = f"{prefix}_{smap.counters[prefix]}"
        smap.counters[prefix] += 1
        smap.allocated.append(("qubit" if needed is WireType.QBIT else "bit", name))
        existing = Operand(name)
        if needed is WireType.QBIT:
            sh.qreg = existing
        else:
            sh.creg = existing
    sh.current = needed
    return smap, existing
