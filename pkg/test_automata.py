import pytest

from conftest import ALPHA, fixture_path
from app.core.errors import A2Violation, AlphabetError, InvalidInput, StateCapExceeded, TypeMismatch
from app.models.automaton import MixedAutomaton, family_size
from app.models.expressions import ONE, ZERO, Prod, Prog, lit
from app.models.schemas import AutomatonSchema
from app.models.strings import EMPTY, EPSILON, Alphabet, ExprType, Literal, Program, lit_set, parse_string
from app.services.automata_service import (
    DerivativeAutomatonBuilder,
    accepted_language_bounded,
    accepts,
    chain_index,
    check_bisimulation,
    check_homomorphism,
    check_pseudo_bisimulation,
    complete_pseudo,
    derivative_automaton,
    exhaustive_sequences,
    find_violation,
    greatest_pseudo_bisimulation,
    homomorphism_graph,
    language_homomorphism_mismatches,
    pseudo_from_bisim,
    validate,
)
from app.services.exporters import (
    automaton_from_schema,
    automaton_to_schema,
    derivative_automaton_to_schema,
    dump_json,
    to_dot,
)
from app.services.language_oracle import LanguageOracle
from app.services.normal_form import normalize
from app.services.parser import parse

b, nb, c, nc = Literal("b"), Literal("b", False), Literal("c"), Literal("c", False)


def order_dependent_automaton():
    alphabet = Alphabet.of(["b", "c"], ["p"])
    states = {
        frozenset({"b", "c"}): ("x",),
        frozenset({"b"}): ("y_b",),
        frozenset({"c"}): ("y_c",),
        frozenset(): ("z1", "z2"),
    }
    transitions = {
        ("x", b): "y_c", ("x", nb): "y_c",
        ("x", c): "y_b", ("x", nc): "y_b",
        ("y_c", c): "z1", ("y_c", nc): "z1",
        ("y_b", b): "z2", ("y_b", nb): "z2",
        ("z1", Program("p")): "x", ("z2", Program("p")): "x",
    }
    return MixedAutomaton(alphabet, states, {"z1": True, "z2": False}, transitions)


# Validation

def test_example_automaton_is_valid(example_automaton):
    assert validate(example_automaton)


def test_order_dependent_automaton_is_rejected():
    with pytest.raises(A2Violation) as info:
        validate(order_dependent_automaton())
    assert info.value.state == "x"
    assert info.value.orderings == ((b, c), (c, b))


def test_automaton_without_tests_is_valid():
    alphabet = Alphabet.of([], ["p"])
    m = MixedAutomaton(alphabet, {EMPTY: ("s",)}, {"s": True}, {("s", Program("p")): "s"})
    assert find_violation(m) is None


def test_missing_and_misplaced_transitions(example_automaton):
    transitions = dict(example_automaton.transitions)
    del transitions[("s1_b", nb)]
    broken = MixedAutomaton(example_automaton.alphabet, example_automaton.states,
                            example_automaton.output, transitions)
    assert "missing transition" in find_violation(broken).message

    transitions = dict(example_automaton.transitions)
    transitions[("s1_b", nb)] = "s2_b"
    broken = MixedAutomaton(example_automaton.alphabet, example_automaton.states,
                            example_automaton.output, transitions)
    assert "A1" in find_violation(broken).message


# Acceptance

def test_example_acceptance(bc, example_automaton):
    assert accepts(example_automaton, "s1_b", parse_string("{b}p{b,~c}", bc))
    assert accepts(example_automaton, "s1_e", EPSILON)
    assert not accepts(example_automaton, "sink_e", EPSILON)
    assert not accepts(example_automaton, "s1_b", parse_string("{~b}", bc))
    with pytest.raises(TypeMismatch):
        accepts(example_automaton, "s1_b", EPSILON)


def test_example_languages(example_automaton):
    assert accepted_language_bounded(example_automaton, "s1_b", 6).lines() == ["{b}", "{b}p{b,~c}"]
    assert accepted_language_bounded(example_automaton, "s1_e", 6).lines() == ["eps", "p{b,~c}"]
    assert accepted_language_bounded(example_automaton, "s1_b", 5).lines() == ["{b}", "{b}p{b,~c}"]
    for sink in ("sink_e", "sink_b", "sink_c", "sink_bc"):
        assert len(accepted_language_bounded(example_automaton, sink, 6)) == 0


# Homomorphisms and bisimulations

def test_identity_homomorphism(example_automaton):
    identity = {s: s for s in example_automaton.all_states()}
    assert check_homomorphism(example_automaton, example_automaton, identity)
    graph = homomorphism_graph(example_automaton, identity)
    assert check_bisimulation(example_automaton, example_automaton, graph)


def test_homomorphism_must_preserve_outputs(example_automaton):
    f = {s: s for s in example_automaton.all_states()}
    f["s1_e"] = "sink_e"
    assert not check_homomorphism(example_automaton, example_automaton, f)


def test_bisimulation_rejects_different_outputs(example_automaton):
    r = {EMPTY: frozenset({("s1_e", "sink_e")})}
    assert not check_bisimulation(example_automaton, example_automaton, r)


def test_pseudo_bisimulation_checks(example_automaton):
    assert check_pseudo_bisimulation(example_automaton, example_automaton, [frozenset()] * 3)
    r = [frozenset(), frozenset({("s1_b", "s1_b")}), frozenset()]
    assert not check_pseudo_bisimulation(example_automaton, example_automaton, r)


def test_sinks_are_bisimilar(example_automaton):
    r = greatest_pseudo_bisimulation(example_automaton, example_automaton)
    assert ("sink_e", "s2_e") not in r[0]
    assert ("s2_b", "s2_b") in r[1]
    completed = complete_pseudo(example_automaton, example_automaton, r)
    assert check_bisimulation(example_automaton, example_automaton, completed)
    assert ("sink_c", "sink_c") in completed[frozenset({"c"})]


def test_chain_index_and_exhaustive_sequences(bc):
    assert chain_index(frozenset({"c"}), bc) == 0
    assert chain_index(frozenset({"b"}), bc) == 1
    assert chain_index(frozenset({"b", "c"}), bc) == 2
    assert len(exhaustive_sequences(frozenset({"b", "c"}), bc)) == 8
    assert exhaustive_sequences(EMPTY, bc) == [()]


def test_completion_requires_a_pseudo_bisimulation(example_automaton):
    r = [frozenset(), frozenset({("s1_b", "s1_b")}), frozenset()]
    with pytest.raises(InvalidInput):
        complete_pseudo(example_automaton, example_automaton, r)


def test_completion_with_one_test_returns_the_input(only_b):
    t = ExprType.of({"b"}, set())
    m1 = derivative_automaton(parse("b p ~b + ~b", only_b), t, only_b).automaton
    m2 = derivative_automaton(parse("~b + b p [b]", only_b), t, only_b).automaton
    r = greatest_pseudo_bisimulation(m1, m2)
    completed = complete_pseudo(m1, m2, r)
    assert [completed[subset] for subset in only_b.chain()] == r


def test_completion_of_random_pseudo_bisimulations(bc, generator):
    completed_count = 0
    for _ in range(60):
        e1, t = generator.to_empty(depth=4)
        e2 = generator.expr(t.source, EMPTY, 4)
        m1 = derivative_automaton(e1, t, bc).automaton
        m2 = derivative_automaton(e2, t, bc).automaton
        r = greatest_pseudo_bisimulation(m1, m2)
        assert check_pseudo_bisimulation(m1, m2, r)
        completed = complete_pseudo(m1, m2, r)
        assert check_bisimulation(m1, m2, completed)
        assert pseudo_from_bisim(completed, bc) == r
        completed_count += 1
    assert completed_count >= 50


def closed_sub_relation(m1, m2, seed, alphabet):
    """The least family holding ``seed`` and closed under chain steps."""
    chain = alphabet.chain()
    relations = [set() for _ in chain]
    todo = [seed]
    while todo:
        level, s, s2 = todo.pop()
        if (s, s2) in relations[level]:
            continue
        relations[level].add((s, s2))
        if level == 0:
            steps = [(len(chain) - 1, Program(name)) for name in alphabet.programs]
        else:
            steps = [(level - 1, literal) for literal in lit_set({alphabet.tests[level - 1]})]
        for target, symbol in steps:
            todo.append((target, m1.step(s, symbol), m2.step(s2, symbol)))
    return [frozenset(rel) for rel in relations]


def test_completion_of_smaller_pseudo_bisimulations(bc, generator):
    tried = 0
    for n in range(60):
        e1, t = generator.to_empty(depth=4)
        e2 = e1 if n % 2 == 0 else generator.expr(t.source, EMPTY, 4)
        m1 = derivative_automaton(e1, t, bc).automaton
        m2 = derivative_automaton(e2, t, bc).automaton
        greatest = greatest_pseudo_bisimulation(m1, m2)
        levels = [i for i, rel in enumerate(greatest) if rel]
        if not levels:
            continue
        level = levels[0] if greatest[0] else generator.rng.choice(levels)
        s, s2 = min(greatest[level])
        r = closed_sub_relation(m1, m2, (level, s, s2), bc)
        assert check_pseudo_bisimulation(m1, m2, r)
        assert all(rel <= big for rel, big in zip(r, greatest))
        completed = complete_pseudo(m1, m2, r)
        assert check_bisimulation(m1, m2, completed)
        assert pseudo_from_bisim(completed, bc) == r
        largest = complete_pseudo(m1, m2, greatest)
        assert all(pairs <= largest[subset] for subset, pairs in completed.items())
        assert family_size(completed) <= family_size(largest)
        tried += 1
    assert tried >= 30


# Derivative automata

def test_derivative_automaton_of_zero(only_b):
    built = derivative_automaton(ZERO, ExprType.of({"b"}, set()), only_b)
    m = built.automaton
    assert len(m.all_states()) == 2
    assert not any(m.accepting(s) for s in m.states_at(EMPTY))


def test_derivative_automaton_of_a_literal(only_b):
    built = derivative_automaton(lit("b"), ExprType.of({"b"}, set()), only_b)
    m = built.automaton
    program_states = {built.legend[s][1]: s for s in m.states_at(EMPTY)}
    assert set(program_states) == {ONE, ZERO}
    assert m.accepting(program_states[ONE])
    assert not m.accepting(program_states[ZERO])
    assert m.step(built.start, b) == program_states[ONE]


def test_alpha_automaton(bc, alpha, b_to_empty):
    built = derivative_automaton(alpha, b_to_empty, bc)
    assert validate(built.automaton)
    alpha_tail = parse("([b] c q)* ~c " + ALPHA, bc)
    for name in ("p", "q"):
        assert built.state_of(EMPTY, normalize(Prod(Prog(name), alpha_tail))) is not None
    assert accepted_language_bounded(built.automaton, built.start, 2).lines() == ["{~b}"]
    assert language_homomorphism_mismatches(built, 4) == []


def test_random_derivative_automata_validate_and_match_the_oracle(bc, generator):
    oracle = LanguageOracle(bc)
    for _ in range(60):
        e, t = generator.to_empty(depth=4)
        built = derivative_automaton(e, t, bc)
        assert find_violation(built.automaton) is None
        assert language_homomorphism_mismatches(built, 3, oracle) == []


def test_derivative_automaton_errors(bc, alpha, b_to_empty):
    with pytest.raises(StateCapExceeded):
        derivative_automaton(alpha, b_to_empty, bc, state_cap=3)
    with pytest.raises(TypeMismatch):
        derivative_automaton(ONE, ExprType.of({"b"}, {"b"}), bc)
    no_tests = Alphabet.of([], ["p"])
    with pytest.raises(AlphabetError):
        DerivativeAutomatonBuilder(no_tests).build(ONE, ExprType.of(set(), set()))


# Export

def test_example_fixture_round_trips(example_automaton):
    with open(fixture_path("sample_automaton.json"), encoding="utf-8") as handle:
        schema = AutomatonSchema.model_validate_json(handle.read())
    loaded = automaton_from_schema(schema)
    assert loaded == example_automaton
    exported = dump_json(automaton_to_schema(loaded))
    assert automaton_from_schema(AutomatonSchema.model_validate_json(exported)) == example_automaton
    assert dump_json(automaton_to_schema(example_automaton)) == exported


def test_dot_export_has_one_cluster_per_subset(bc, alpha, b_to_empty):
    built = derivative_automaton(alpha, b_to_empty, bc)
    schema = derivative_automaton_to_schema(built)
    dot = "".join(to_dot(built.automaton, schema.legend, built.start))
    assert dot.startswith("digraph mixed {")
    assert dot.count("subgraph cluster_") == 4
    assert "doublecircle" in dot
    assert '__start -> "s0"' in dot
    assert dot == "".join(to_dot(built.automaton, schema.legend, built.start))
