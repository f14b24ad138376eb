import os
import random

import pytest

from app.models.expressions import ONE, ZERO, Lit, MixedExpr, Prod, Prog, Star, Sum
from app.models.strings import EMPTY, Alphabet, ExprType, Literal, Subset
from app.services.automata_service import sample_automaton
from app.services.parser import parse

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")

ALPHA = "(b p ([b] c q)* ~c)* ~b"
BETA = "b p ([b] c q + b ~c p)* ~c ~b + ~b"
ALPHA_DERIVATIVE = "p ([b] c q)* ~c (b p ([b] c q)* ~c)* ~b"


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


class ExpressionGenerator:
    """Random expressions built to have a requested type."""

    def __init__(self, alphabet: Alphabet, seed: int, leaf_chance: float = 0.35):
        self.alphabet = alphabet
        self.rng = random.Random(seed)
        self.leaf_chance = leaf_chance
        self.subsets = alphabet.subsets()

    def random_literal(self, base: str) -> Lit:
        return Lit(Literal(base, self.rng.random() < 0.5))

    def connector(self, source: Subset, target: Subset) -> MixedExpr:
        """Some expression typed source -> target made of literals and programs."""
        factors = []
        if not target <= source:
            factors.extend(self.random_literal(b) for b in self.alphabet.ordered(source))
            factors.append(Prog(self.rng.choice(self.alphabet.programs)))
            source = self.alphabet.full
        rest = list(self.alphabet.ordered(source - target))
        self.rng.shuffle(rest)
        factors.extend(self.random_literal(b) for b in rest)
        if not factors:
            return ONE
        expr = factors[-1]
        for factor in reversed(factors[:-1]):
            expr = Prod(factor, expr)
        return expr

    def leaf(self, source: Subset, target: Subset) -> MixedExpr:
        roll = self.rng.random()
        if roll < 0.08:
            return ZERO
        if source == target and roll < 0.3:
            return ONE
        return self.connector(source, target)

    def expr(self, source: Subset, target: Subset, depth: int) -> MixedExpr:
        if depth <= 0 or self.rng.random() < self.leaf_chance:
            return self.leaf(source, target)
        choice = self.rng.random()
        if choice < 0.3:
            return Sum(self.expr(source, target, depth - 1), self.expr(source, target, depth - 1))
        if choice < 0.8 or source != target:
            mid = self.rng.choice(self.subsets)
            return Prod(self.expr(source, mid, depth - 1), self.expr(mid, target, depth - 1))
        return Star(self.expr(source, source, depth - 1))

    def typed(self, depth: int = 5):
        t = ExprType(self.rng.choice(self.subsets), self.rng.choice(self.subsets))
        return self.expr(t.source, t.target, depth), t

    def to_empty(self, depth: int = 5):
        t = ExprType(self.rng.choice(self.subsets), EMPTY)
        return self.expr(t.source, EMPTY, depth), t


@pytest.fixture
def bc() -> Alphabet:
    return Alphabet.of(["b", "c"], ["p", "q"])


@pytest.fixture
def only_b() -> Alphabet:
    return Alphabet.of(["b"], ["p"])


@pytest.fixture
def alpha(bc):
    return parse(ALPHA, bc)


@pytest.fixture
def beta(bc):
    return parse(BETA, bc)


@pytest.fixture
def b_to_empty() -> ExprType:
    return ExprType.of({"b"}, set())


@pytest.fixture
def example_automaton():
    return sample_automaton()


@pytest.fixture
def generator(bc):
    return ExpressionGenerator(bc, seed=20240611)
