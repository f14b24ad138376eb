"""
JSON and DOT renderings of mixed automata.

Subsets are keyed as ``{b,c}`` in declared test order, symbols are written
as program names or ``b`` / ``~b``. All output is sorted so identical
automata give identical bytes.
"""

import json
import logging
from typing import Dict, Iterator, List, Optional

from app.core.errors import InvalidInput, UnknownIdentifier
from app.models.automaton import MixedAutomaton
from app.models.expressions import pretty
from app.models.schemas import AutomatonSchema, TransitionSchema
from app.models.strings import Alphabet, Literal, Program, Symbol
from app.services.automata_service import DerivativeAutomaton, symbols_at

logger = logging.getLogger(__name__)


def symbol_text(symbol: Symbol) -> str:
    return symbol.name if isinstance(symbol, Program) else str(symbol)


def parse_symbol(text: str, alphabet: Alphabet) -> Symbol:
    name = text.strip()
    positive = not name.startswith("~")
    name = name.lstrip("~").strip()
    if positive and alphabet.is_program(name):
        return Program(name)
    if alphabet.is_test(name):
        return Literal(name, positive)
    raise UnknownIdentifier(name, 0)


def dump_json(model) -> str:
    return json.dumps(model.model_dump(mode="json", exclude_none=True), sort_keys=True, indent=2)


def automaton_to_schema(m: MixedAutomaton, start: Optional[str] = None,
                        legend: Optional[Dict[str, str]] = None) -> AutomatonSchema:
    alphabet = m.alphabet
    transitions: List[TransitionSchema] = []
    for state in m.all_states():
        for symbol in symbols_at(alphabet, m.subset_of(state)):
            target = m.transitions.get((state, symbol))
            if target is not None:
                transitions.append(
                    TransitionSchema(source=state, symbol=symbol_text(symbol), target=target)
                )
    return AutomatonSchema(
        tests=list(alphabet.tests),
        programs=list(alphabet.programs),
        states={
            alphabet.format_subset(subset): list(m.states_at(subset))
            for subset in alphabet.subsets()
            if m.states_at(subset)
        },
        output={state: int(m.accepting(state)) for state in sorted(m.output)},
        transitions=transitions,
        start=start,
        legend=legend,
    )


def derivative_automaton_to_schema(built: DerivativeAutomaton) -> AutomatonSchema:
    legend = {state: pretty(nf) for state, (_, nf) in built.legend.items()}
    return automaton_to_schema(built.automaton, built.start, legend)


def automaton_from_schema(schema: AutomatonSchema) -> MixedAutomaton:
    alphabet = Alphabet.of(schema.tests, schema.programs)
    states = {alphabet.parse_subset(key): tuple(ids) for key, ids in schema.states.items()}
    known = {state for ids in states.values() for state in ids}
    transitions = {}
    for edge in schema.transitions:
        if edge.source not in known or edge.target not in known:
            raise InvalidInput(f"transition {edge.source} -{edge.symbol}-> {edge.target} uses an unknown state")
        transitions[(edge.source, parse_symbol(edge.symbol, alphabet))] = edge.target
    output = {state: bool(bit) for state, bit in schema.output.items()}
    logger.debug("loaded automaton with %d states and %d transitions", len(known), len(transitions))
    return MixedAutomaton(alphabet, states, output, transitions)


def _quote(text: str) -> str:
    return '"{}"'.format(text.replace("\\", "\\\\").replace('"', r"\""))


def to_dot(m: MixedAutomaton, legend: Optional[Dict[str, str]] = None,
           start: Optional[str] = None) -> Iterator[str]:
    """One cluster per subset; accepting program states are double circles."""
    alphabet = m.alphabet
    yield "digraph mixed {\n"
    yield "  rankdir=LR;\n"
    for n, subset in enumerate(alphabet.subsets()):
        ids = m.states_at(subset)
        if not ids:
            continue
        yield f"  subgraph cluster_{n} {{\n"
        yield f"    label={_quote(alphabet.format_subset(subset))};\n"
        for state in ids:
            shape = "doublecircle" if m.accepting(state) else "circle"
            attrs = [f"shape={shape}"]
            if legend and state in legend:
                attrs.append(f"tooltip={_quote(legend[state])}")
            yield f"    {_quote(state)} [{' '.join(attrs)}];\n"
        yield "  }\n"
    if start is not None:
        yield "  __start [shape=point];\n"
        yield f"  __start -> {_quote(start)};\n"
    for state in m.all_states():
        for symbol in symbols_at(alphabet, m.subset_of(state)):
            target = m.transitions.get((state, symbol))
            if target is not None:
                yield f"  {_quote(state)} -> {_quote(target)} [label={_quote(symbol_text(symbol))}];\n"
    if legend:
        for state in m.all_states():
            if state in legend:
                yield f"  // {state}: {legend[state]}\n"
    yield "}\n"
