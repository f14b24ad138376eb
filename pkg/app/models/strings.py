"""
Alphabets, literals, tests and mixed strings.

A mixed string alternates primitive programs and tests. Tests are sets of
literals with distinct bases; every test strictly inside a string must mention
every primitive test of the alphabet. Concatenation is partial and returns
``UNDEFINED`` instead of raising, since language concatenation silently drops
undefined pairs.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Set, Tuple, Union

from app.core.errors import (
    AlphabetError,
    AlternationViolation,
    IncompleteInteriorTest,
    KatSyntaxError,
    UnknownIdentifier,
)

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED_WORDS = frozenset({"eps", "skip", "abort", "if", "then", "else", "while", "do"})

Subset = FrozenSet[str]
EMPTY: Subset = frozenset()


@dataclass(frozen=True)
class Alphabet:
    """Declared programs and primitive tests; test order is significant."""

    tests: Tuple[str, ...]
    programs: Tuple[str, ...]

    def __post_init__(self):
        for name in self.tests + self.programs:
            if not IDENTIFIER.match(name):
                raise AlphabetError(f"'{name}' is not a valid identifier")
            if name in RESERVED_WORDS:
                raise AlphabetError(f"'{name}' is a reserved word")
        if len(set(self.tests)) != len(self.tests):
            raise AlphabetError("primitive tests are declared twice")
        if len(set(self.programs)) != len(self.programs):
            raise AlphabetError("programs are declared twice")
        overlap = set(self.tests) & set(self.programs)
        if overlap:
            raise AlphabetError(f"identifiers used as both test and program: {sorted(overlap)}")

    @classmethod
    def of(cls, tests: Iterable[str], programs: Iterable[str]) -> "Alphabet":
        return cls(tuple(tests), tuple(programs))

    @property
    def full(self) -> Subset:
        return frozenset(self.tests)

    def is_test(self, name: str) -> bool:
        return name in self.tests

    def is_program(self, name: str) -> bool:
        return name in self.programs

    def test_index(self, name: str) -> int:
        return self.tests.index(name)

    def ordered(self, subset: Iterable[str]) -> Tuple[str, ...]:
        """The members of ``subset`` in declared test order."""
        return tuple(sorted(subset, key=self.test_index))

    def subset_order(self, subset: Subset) -> Tuple[int, Tuple[int, ...]]:
        """Sort key for the canonical subset order: size, then positions."""
        return len(subset), tuple(sorted(self.test_index(b) for b in subset))

    def subsets(self) -> List[Subset]:
        every = [
            frozenset(combo)
            for size in range(len(self.tests) + 1)
            for combo in itertools.combinations(self.tests, size)
        ]
        return sorted(every, key=self.subset_order)

    def chain(self) -> List[Subset]:
        """A_0 ⊆ A_1 ⊆ ... ⊆ A_n, the prefixes of the declared test order."""
        return [frozenset(self.tests[:i]) for i in range(len(self.tests) + 1)]

    def format_subset(self, subset: Iterable[str]) -> str:
        return "{" + ",".join(self.ordered(subset)) + "}"

    def parse_subset(self, text: str) -> Subset:
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise KatSyntaxError(f"expected a subset like {{b,c}}, got '{text}'", 0)
        names = [part.strip() for part in body[1:-1].split(",") if part.strip()]
        for name in names:
            if not self.is_test(name):
                raise UnknownIdentifier(name, text.find(name))
        return frozenset(names)


@dataclass(frozen=True)
class Literal:
    base: str
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.base, not self.positive)

    def __str__(self) -> str:
        return self.base if self.positive else f"~{self.base}"


@dataclass(frozen=True)
class Program:
    name: str

    def __str__(self) -> str:
        return self.name


Symbol = Union[Program, Literal]


@dataclass(frozen=True)
class Test:
    """A nonempty conjunction of literals over distinct bases."""

    # not a pytest test class
    __test__ = False

    literals: FrozenSet[Literal]

    def __post_init__(self):
        if not self.literals:
            raise AlphabetError("a test needs at least one literal")
        if len({lit.base for lit in self.literals}) != len(self.literals):
            raise AlphabetError(f"test {sorted(map(str, self.literals))} repeats a base")

    @classmethod
    def of(cls, *literals: Literal) -> "Test":
        if len({lit.base for lit in literals}) != len(literals):
            raise AlphabetError(f"test {[str(l) for l in literals]} repeats a base")
        return cls(frozenset(literals))

    @property
    def base(self) -> Subset:
        return frozenset(lit.base for lit in self.literals)

    def union(self, other: "Test") -> "Test":
        return Test(self.literals | other.literals)

    def ordered(self, alphabet: Alphabet) -> Tuple[Literal, ...]:
        return tuple(sorted(self.literals, key=lambda lit: alphabet.test_index(lit.base)))

    def format(self, alphabet: Alphabet) -> str:
        return "{" + ",".join(str(lit) for lit in self.ordered(alphabet)) + "}"

    def __len__(self) -> int:
        return len(self.literals)


StringElement = Union[Program, Test]


def base_of(element: StringElement) -> Subset:
    return element.base if isinstance(element, Test) else EMPTY


@dataclass(frozen=True)
class ExprType:
    """A type A -> B shared by strings, languages and expressions."""

    source: Subset
    target: Subset

    @classmethod
    def of(cls, source: Iterable[str], target: Iterable[str]) -> "ExprType":
        return cls(frozenset(source), frozenset(target))

    def format(self, alphabet: Alphabet) -> str:
        return f"{alphabet.format_subset(self.source)}->{alphabet.format_subset(self.target)}"


@dataclass(frozen=True)
class MixedString:
    elements: Tuple[StringElement, ...] = ()

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[StringElement]:
        return iter(self.elements)

    @property
    def is_empty(self) -> bool:
        return not self.elements

    def format(self, alphabet: Alphabet) -> str:
        if not self.elements:
            return "eps"
        return "".join(
            el.format(alphabet) if isinstance(el, Test) else el.name for el in self.elements
        )


EPSILON = MixedString(())


class _Undefined(enum.Enum):
    UNDEFINED = "undefined"

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "UNDEFINED"


UNDEFINED = _Undefined.UNDEFINED


def lit_set(subset: Iterable[str]) -> FrozenSet[Literal]:
    """All literals over ``subset``: {b, ~b : b in subset}."""
    return frozenset(Literal(b, sign) for b in subset for sign in (True, False))


def ordered_literals(subset: Iterable[str], alphabet: Alphabet) -> List[Literal]:
    """lit(subset) in display order: declared base order, positive first."""
    return [Literal(b, sign) for b in alphabet.ordered(subset) for sign in (True, False)]


def first_violation(elements: Sequence[StringElement], alphabet: Alphabet):
    """Return the error describing the first broken condition, or None."""
    for index, element in enumerate(elements):
        if isinstance(element, Program) and not alphabet.is_program(element.name):
            return UnknownIdentifier(element.name, index)
        if isinstance(element, Test):
            for lit in element.literals:
                if not alphabet.is_test(lit.base):
                    return UnknownIdentifier(lit.base, index)
        if index > 0 and isinstance(element, Test) == isinstance(elements[index - 1], Test):
            return AlternationViolation(index)
    for index in range(1, len(elements) - 1):
        element = elements[index]
        if isinstance(element, Test) and element.base != alphabet.full:
            return IncompleteInteriorTest(index)
    return None


def is_mixed_string(elements: Sequence[StringElement], alphabet: Alphabet) -> bool:
    return first_violation(elements, alphabet) is None


def mk_string(elements: Iterable[StringElement], alphabet: Alphabet) -> MixedString:
    elements = tuple(elements)
    error = first_violation(elements, alphabet)
    if error is not None:
        raise error
    return MixedString(elements)


def concat(s1: MixedString, s2: MixedString, alphabet: Alphabet) -> Union[MixedString, _Undefined]:
    if s1.is_empty:
        return s2
    if s2.is_empty:
        return s1
    last, first = s1.elements[-1], s2.elements[0]
    last_is_test, first_is_test = isinstance(last, Test), isinstance(first, Test)
    if last_is_test != first_is_test:
        combined = s1.elements + s2.elements
    elif last_is_test and not (last.base & first.base):
        combined = s1.elements[:-1] + (last.union(first),) + s2.elements[1:]
    else:
        return UNDEFINED
    if not is_mixed_string(combined, alphabet):
        return UNDEFINED
    return MixedString(combined)


def admits_type(s: MixedString, expr_type: ExprType, alphabet: Alphabet) -> bool:
    source, target = expr_type.source, expr_type.target
    if s.is_empty:
        return source == target
    if len(s) == 1:
        element = s.elements[0]
        if isinstance(element, Program):
            return not source and target == alphabet.full
        base = element.base
        return not (target & base) and source == base | target
    return source == base_of(s.elements[0]) and target == alphabet.full - base_of(s.elements[-1])


def types_of(s: MixedString, alphabet: Alphabet) -> FrozenSet[ExprType]:
    if s.is_empty:
        return frozenset(ExprType(a, a) for a in alphabet.subsets())
    if len(s) == 1:
        element = s.elements[0]
        if isinstance(element, Program):
            return frozenset({ExprType(EMPTY, alphabet.full)})
        base = element.base
        return frozenset(
            ExprType(base | a, a) for a in alphabet.subsets() if not (a & base)
        )
    return frozenset({ExprType(base_of(s.elements[0]), alphabet.full - base_of(s.elements[-1]))})


def linearizations(s: MixedString, alphabet: Alphabet) -> Set[Tuple[Symbol, ...]]:
    pieces = []
    for element in s.elements:
        if isinstance(element, Program):
            pieces.append([(element,)])
        else:
            pieces.append(list(itertools.permutations(element.ordered(alphabet))))
    return {tuple(itertools.chain.from_iterable(choice)) for choice in itertools.product(*pieces)}


def reference_linearization(s: MixedString, alphabet: Alphabet) -> Tuple[Symbol, ...]:
    """The linearization that lists each test's literals in declared order."""
    out: List[Symbol] = []
    for element in s.elements:
        if isinstance(element, Program):
            out.append(element)
        else:
            out.extend(element.ordered(alphabet))
    return tuple(out)


def string_from_symbols(symbols: Sequence[Symbol], alphabet: Alphabet) -> MixedString:
    """Group maximal literal runs into tests and validate the result."""
    elements: List[StringElement] = []
    run: List[Literal] = []
    for symbol in symbols:
        if isinstance(symbol, Literal):
            run.append(symbol)
            continue
        if run:
            elements.append(Test.of(*run))
            run = []
        elements.append(symbol)
    if run:
        elements.append(Test.of(*run))
    return mk_string(elements, alphabet)


_STRING_TOKEN = re.compile(r"\s*(?:(?P<test>\{[^}]*\})|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))")


def parse_string(text: str, alphabet: Alphabet) -> MixedString:
    """Read the textual notation (``eps``, ``{b,~c}``, bare programs)."""
    body = text.strip()
    if body in ("", "eps"):
        return EPSILON
    elements: List[StringElement] = []
    position = 0
    while position < len(body):
        match = _STRING_TOKEN.match(body, position)
        if not match:
            raise KatSyntaxError(f"unexpected character '{body[position]}'", position)
        if match.group("test") is not None:
            literals = []
            for part in match.group("test")[1:-1].split(","):
                part = part.strip()
                positive = not part.startswith("~")
                name = part.lstrip("~").strip()
                if not alphabet.is_test(name):
                    raise UnknownIdentifier(name, match.start("test"))
                literals.append(Literal(name, positive))
            elements.append(Test.of(*literals))
        else:
            name = match.group("ident")
            if not alphabet.is_program(name):
                raise UnknownIdentifier(name, match.start("ident"))
            elements.append(Program(name))
        position = match.end()
    return mk_string(elements, alphabet)
