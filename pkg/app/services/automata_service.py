"""
Mixed automata: validation, acceptance, relation checkers, completion of
pseudo-bisimulations and the derivative automaton of an expression.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Set, Tuple

from app.core.config import settings
from app.core.errors import (
    A1Violation,
    A2Violation,
    AlphabetError,
    AutomatonError,
    InternalInvariantViolation,
    InvalidInput,
    StateCapExceeded,
    TypeMismatch,
)
from app.models.automaton import (
    BisimFamily,
    MixedAutomaton,
    PseudoBisimFamily,
    StateMap,
    family_size,
    restrict_to_chain,
)
from app.models.expressions import MixedExpr, pretty
from app.models.strings import (
    EMPTY,
    Alphabet,
    ExprType,
    Literal,
    MixedString,
    Program,
    Subset,
    Symbol,
    lit_set,
    ordered_literals,
    reference_linearization,
    types_of,
)
from app.services.derivatives import DerivativeService
from app.services.language_oracle import FiniteMixedLanguage, LanguageOracle, tests_with_base
from app.services.normal_form import normalize

logger = logging.getLogger(__name__)


def symbols_at(alphabet: Alphabet, subset: Subset) -> List[Symbol]:
    if not subset:
        return [Program(p) for p in alphabet.programs]
    return ordered_literals(subset, alphabet)


# Validation

def find_violation(m: MixedAutomaton) -> Optional[AutomatonError]:
    """The first A1 or A2 counterexample of ``m``, or None.

    A2 is checked by comparing, at every state and for every test over its
    subset, the reference ordering with each ordering that reads one literal
    first and the rest in reference order. That suffices by induction on the
    subset size: an ordering starting with literal l continues from the
    successor by l, where all orderings of the remaining literals already
    agree, so it ends where the "l first" ordering ends.
    """
    alphabet = m.alphabet
    seen: Dict[str, Subset] = {}
    for subset in alphabet.subsets():
        for state in m.states_at(subset):
            if state in seen:
                return InvalidInput(f"state {state} is listed under two subsets")
            seen[state] = subset
    for subset in m.states:
        if not subset <= alphabet.full:
            return InvalidInput(f"subset {sorted(subset)} is not over the declared tests")
    for state, subset in seen.items():
        if not subset and state not in m.output:
            return InvalidInput(f"program state {state} has no output")
        if subset and state in m.output:
            return InvalidInput(f"state {state} is not a program state but has an output")

    for (state, symbol), target in m.transitions.items():
        subset = seen.get(state)
        if subset is None:
            return A1Violation(state, symbol, "unknown source state")
        if symbol not in symbols_at(alphabet, subset):
            return A1Violation(state, symbol, f"symbol not allowed at {alphabet.format_subset(subset)}")
    for state, subset in seen.items():
        for symbol in symbols_at(alphabet, subset):
            target = m.transitions.get((state, symbol))
            if target is None:
                return A1Violation(state, symbol, "missing transition")
            expected = alphabet.full if not subset else subset - {symbol.base}
            if seen.get(target) != expected:
                return A1Violation(
                    state, symbol, f"target {target} is not in S_{alphabet.format_subset(expected)}"
                )

    for subset in alphabet.subsets():
        if len(subset) < 2:
            continue
        for state in m.states_at(subset):
            for test in tests_with_base(subset, alphabet):
                reference = test.ordered(alphabet)
                end = m.run(state, reference)
                for first in reference[1:]:
                    other = (first,) + tuple(l for l in reference if l != first)
                    if m.run(state, other) != end:
                        return A2Violation(state, test.format(alphabet), reference, other)
    return None


def validate(m: MixedAutomaton) -> bool:
    """Raise the first A1 or A2 violation of ``m``."""
    violation = find_violation(m)
    if violation is not None:
        raise violation
    return True


# Acceptance

def accepts(m: MixedAutomaton, state: str, sigma: MixedString) -> bool:
    """Membership of ``sigma`` from ``state``, read in reference literal order."""
    alphabet = m.alphabet
    subset = m.subset_of(state)
    if subset is None:
        raise InvalidInput(f"unknown state {state}")
    if ExprType(subset, EMPTY) not in types_of(sigma, alphabet):
        raise TypeMismatch(
            f"{sigma.format(alphabet)} cannot be read from a state in "
            f"S_{alphabet.format_subset(subset)}"
        )
    end = m.run(state, reference_linearization(sigma, alphabet))
    return m.subset_of(end) == EMPTY and m.accepting(end)


def _walk(m: MixedAutomaton, state: str, elements: tuple, max_len: int) -> Iterator[MixedString]:
    subset = m.subset_of(state)
    if not subset:
        yield from _walk_program_state(m, state, elements, max_len)
        return
    if len(elements) >= max_len:
        return
    for test in tests_with_base(subset, m.alphabet):
        end = m.run(state, test.ordered(m.alphabet))
        yield from _walk_program_state(m, end, elements + (test,), max_len)


def _walk_program_state(m: MixedAutomaton, state: str, elements: tuple,
                        max_len: int) -> Iterator[MixedString]:
    if m.accepting(state):
        yield MixedString(elements)
    if elements and isinstance(elements[-1], Program):
        return
    if len(elements) >= max_len:
        return
    for name in m.alphabet.programs:
        program = Program(name)
        yield from _walk(m, m.step(state, program), elements + (program,), max_len)


def accepted_language_bounded(m: MixedAutomaton, state: str, max_len: int) -> FiniteMixedLanguage:
    """Every accepted string from ``state`` with at most ``max_len`` elements."""
    subset = m.subset_of(state)
    if subset is None:
        raise InvalidInput(f"unknown state {state}")
    strings = frozenset(_walk(m, state, (), max_len))
    return FiniteMixedLanguage(strings, m.alphabet, ExprType(subset, EMPTY))


# Homomorphisms and bisimulations

def check_homomorphism(m: MixedAutomaton, m2: MixedAutomaton, f: StateMap) -> bool:
    for state in m.all_states():
        subset = m.subset_of(state)
        image = f.get(state)
        if image is None or m2.subset_of(image) != subset:
            return False
        if not subset and m.accepting(state) != m2.accepting(image):
            return False
        for symbol in symbols_at(m.alphabet, subset):
            if f.get(m.step(state, symbol)) != m2.step(image, symbol):
                return False
    return True


def homomorphism_graph(m: MixedAutomaton, f: StateMap) -> BisimFamily:
    return {
        subset: frozenset((s, f[s]) for s in m.states_at(subset))
        for subset in m.alphabet.subsets()
        if m.states_at(subset)
    }


def _pair_ok(m, m2, subset: Subset, s: str, s2: str) -> bool:
    return m.subset_of(s) == subset and m2.subset_of(s2) == subset


def check_bisimulation(m: MixedAutomaton, m2: MixedAutomaton, r: BisimFamily) -> bool:
    """Outputs agree and every related pair steps to related pairs."""
    alphabet = m.alphabet
    for subset, relation in r.items():
        for s, s2 in relation:
            if not _pair_ok(m, m2, subset, s, s2):
                return False
            if not subset:
                if m.accepting(s) != m2.accepting(s2):
                    return False
                for name in alphabet.programs:
                    program = Program(name)
                    pair = (m.step(s, program), m2.step(s2, program))
                    if pair not in r.get(alphabet.full, frozenset()):
                        return False
            else:
                for literal in ordered_literals(subset, alphabet):
                    pair = (m.step(s, literal), m2.step(s2, literal))
                    if pair not in r.get(subset - {literal.base}, frozenset()):
                        return False
    return True


def check_pseudo_bisimulation(m: MixedAutomaton, m2: MixedAutomaton, r: PseudoBisimFamily) -> bool:
    """Like check_bisimulation, but only along the chain of test prefixes."""
    alphabet = m.alphabet
    chain = alphabet.chain()
    if len(r) != len(chain):
        return False
    for i, relation in enumerate(r):
        for s, s2 in relation:
            if not _pair_ok(m, m2, chain[i], s, s2):
                return False
            if i == 0:
                if m.accepting(s) != m2.accepting(s2):
                    return False
                for name in alphabet.programs:
                    program = Program(name)
                    if (m.step(s, program), m2.step(s2, program)) not in r[-1]:
                        return False
            else:
                for literal in ordered_literals({alphabet.tests[i - 1]}, alphabet):
                    if (m.step(s, literal), m2.step(s2, literal)) not in r[i - 1]:
                        return False
    return True


def chain_index(subset: Subset, alphabet: Alphabet) -> int:
    """Largest i with the first i tests contained in ``subset``."""
    i = 0
    while i < len(alphabet.tests) and alphabet.tests[i] in subset:
        i += 1
    return i


def exhaustive_sequences(bases: Subset, alphabet: Alphabet) -> List[Tuple[Literal, ...]]:
    """Every ordering of one literal per base, over every choice of polarities."""
    ordered = alphabet.ordered(bases)
    sequences = []
    for signs in itertools.product((True, False), repeat=len(ordered)):
        literals = [Literal(b, sign) for b, sign in zip(ordered, signs)]
        sequences.extend(itertools.permutations(literals))
    return sequences


def complete_pseudo(m: MixedAutomaton, m2: MixedAutomaton, r: PseudoBisimFamily) -> BisimFamily:
    """Extend a pseudo-bisimulation to a bisimulation with the same chain relations."""
    alphabet = m.alphabet
    for automaton in (m, m2):
        violation = find_violation(automaton)
        if violation is not None:
            raise InvalidInput(f"completion needs valid automata: {violation.message}")
    if not check_pseudo_bisimulation(m, m2, r):
        raise InvalidInput("the given family is not a pseudo-bisimulation")

    completed: BisimFamily = {}
    for subset in alphabet.subsets():
        i = chain_index(subset, alphabet)
        rest = subset - frozenset(alphabet.tests[:i])
        if not rest:
            completed[subset] = frozenset(r[i])
            continue
        sequences = exhaustive_sequences(rest, alphabet)
        completed[subset] = frozenset(
            (s, s2)
            for s in m.states_at(subset)
            for s2 in m2.states_at(subset)
            if all((m.run(s, seq), m2.run(s2, seq)) in r[i] for seq in sequences)
        )
    if not check_bisimulation(m, m2, completed):
        # possible only when partial tests are not path independent
        raise InvalidInput("completed family is not a bisimulation; partial tests are order dependent")
    logger.info("completed pseudo-bisimulation to %d related pairs", family_size(completed))
    return completed


def pseudo_from_bisim(r: BisimFamily, alphabet: Alphabet) -> PseudoBisimFamily:
    return restrict_to_chain(r, alphabet.chain())


def greatest_pseudo_bisimulation(m: MixedAutomaton, m2: MixedAutomaton) -> PseudoBisimFamily:
    """Largest pseudo-bisimulation, by refinement from the full relations."""
    alphabet = m.alphabet
    chain = alphabet.chain()
    relations: List[Set[Tuple[str, str]]] = [
        {(s, s2) for s in m.states_at(a) for s2 in m2.states_at(a)} for a in chain
    ]
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for i, relation in enumerate(relations):
            keep = set(relation)
            for s, s2 in relation:
                if i == 0:
                    ok = m.accepting(s) == m2.accepting(s2) and all(
                        (m.step(s, Program(p)), m2.step(s2, Program(p))) in relations[-1]
                        for p in alphabet.programs
                    )
                else:
                    ok = all(
                        (m.step(s, l), m2.step(s2, l)) in relations[i - 1]
                        for l in lit_set({alphabet.tests[i - 1]})
                    )
                if not ok:
                    keep.discard((s, s2))
            if keep != relation:
                relations[i] = keep
                changed = True
    logger.debug("greatest pseudo-bisimulation stable after %d rounds", rounds)
    return [frozenset(rel) for rel in relations]


# Example automaton

def sample_automaton() -> MixedAutomaton:
    """The two-test example automaton with its sink states made explicit.

    From s1_b it accepts {b} and {b}p{b,~c}; from s1_e it accepts eps and
    p{b,~c}.
    """
    alphabet = Alphabet.of(["b", "c"], ["p", "q"])
    b, nb, c, nc = Literal("b"), Literal("b", False), Literal("c"), Literal("c", False)
    p, q = Program("p"), Program("q")
    states = {
        frozenset(): ("s1_e", "s2_e", "sink_e"),
        frozenset({"b"}): ("s1_b", "s2_b", "sink_b"),
        frozenset({"c"}): ("s2_c", "sink_c"),
        frozenset({"b", "c"}): ("s2_bc", "sink_bc"),
    }
    output = {"s1_e": True, "s2_e": True, "sink_e": False}
    edges = [
        ("s1_b", b, "s1_e"), ("s1_b", nb, "sink_e"),
        ("s1_e", p, "s2_bc"), ("s1_e", q, "sink_bc"),
        ("s2_bc", b, "s2_c"), ("s2_bc", nc, "s2_b"),
        ("s2_bc", nb, "sink_c"), ("s2_bc", c, "sink_b"),
        ("s2_c", nc, "s2_e"), ("s2_c", c, "sink_e"),
        ("s2_b", b, "s2_e"), ("s2_b", nb, "sink_e"),
        ("s2_e", p, "sink_bc"), ("s2_e", q, "sink_bc"),
        ("sink_bc", b, "sink_c"), ("sink_bc", nb, "sink_c"),
        ("sink_bc", c, "sink_b"), ("sink_bc", nc, "sink_b"),
        ("sink_b", b, "sink_e"), ("sink_b", nb, "sink_e"),
        ("sink_c", c, "sink_e"), ("sink_c", nc, "sink_e"),
        ("sink_e", p, "sink_bc"), ("sink_e", q, "sink_bc"),
    ]
    transitions = {(src, symbol): dst for src, symbol, dst in edges}
    return MixedAutomaton(alphabet, states, output, transitions)


# Derivative automaton

@dataclass(frozen=True)
class DerivativeAutomaton:
    automaton: MixedAutomaton
    start: str
    expr_type: ExprType
    # state id -> (subset, normal form)
    legend: Dict[str, Tuple[Subset, MixedExpr]]

    def state_of(self, subset: Subset, nf: MixedExpr) -> Optional[str]:
        for state, key in self.legend.items():
            if key == (subset, nf):
                return state
        return None

    def index(self) -> Dict[Tuple[Subset, MixedExpr], str]:
        return {key: state for state, key in self.legend.items()}


class DerivativeAutomatonBuilder:
    """Explores normalized derivatives breadth first from one expression."""

    def __init__(self, alphabet: Alphabet, derivatives: DerivativeService = None):
        self.alphabet = alphabet
        self.derivatives = derivatives or DerivativeService(alphabet)

    def build(self, e: MixedExpr, t: ExprType, state_cap: int = None) -> DerivativeAutomaton:
        """Explore normalized derivatives breadth first from ``e``, up to ``state_cap`` states."""
        state_cap = state_cap or settings.DEFAULT_STATE_CAP
        if not self.alphabet.tests:
            raise AlphabetError("derivative automata need at least one primitive test")
        if t.target:
            raise TypeMismatch(f"automata are built only for types A->{{}}, not {t.format(self.alphabet)}")
        self.derivatives.checker.check_type(e, t)

        root = (t.source, normalize(e))
        ids: Dict[Tuple[Subset, MixedExpr], str] = {root: "s0"}
        queue = deque([root])
        transitions: Dict[Tuple[str, Symbol], str] = {}
        output: Dict[str, bool] = {}
        while queue:
            key = queue.popleft()
            subset, nf = key
            source_id = ids[key]
            if not subset:
                output[source_id] = self.derivatives.nullable(nf)
            for symbol in symbols_at(self.alphabet, subset):
                target_subset = self.alphabet.full if not subset else subset - {symbol.base}
                target = (target_subset, self.derivatives.derivative(nf, subset, symbol))
                if target not in ids:
                    if len(ids) >= state_cap:
                        raise StateCapExceeded(state_cap)
                    ids[target] = f"s{len(ids)}"
                    queue.append(target)
                transitions[(source_id, symbol)] = ids[target]

        states: Dict[Subset, List[str]] = {}
        for (subset, _), state in ids.items():
            states.setdefault(subset, []).append(state)
        automaton = MixedAutomaton(
            self.alphabet,
            {subset: tuple(sorted(group, key=lambda s: int(s[1:]))) for subset, group in states.items()},
            output,
            transitions,
        )
        violation = find_violation(automaton)
        if violation is not None:
            raise InternalInvariantViolation(
                f"derivative automaton of {pretty(e)} is not a mixed automaton: {violation.message}",
                violation,
            )
        logger.info("derivative automaton of %s has %d states", pretty(e), len(ids))
        legend = {state: key for key, state in ids.items()}
        return DerivativeAutomaton(automaton, "s0", t, legend)


def derivative_automaton(e: MixedExpr, t: ExprType, alphabet: Alphabet,
                         state_cap: int = None) -> DerivativeAutomaton:
    return DerivativeAutomatonBuilder(alphabet).build(e, t, state_cap)


def language_homomorphism_mismatches(built: DerivativeAutomaton, max_len: int,
                                     oracle: LanguageOracle = None) -> List[str]:
    """States whose bounded accepted language differs from M of their expression."""
    alphabet = built.automaton.alphabet
    oracle = oracle or LanguageOracle(alphabet)
    mismatches = []
    for state, (subset, nf) in built.legend.items():
        expected = oracle.m_bounded(nf, ExprType(subset, EMPTY), max_len)
        actual = accepted_language_bounded(built.automaton, state, max_len)
        if expected.strings != actual.strings:
            mismatches.append(state)
    return mismatches
