"""
Finite mixed languages and the bounded interpretation of expressions.

Every property of the syntactic operators is tested against this module,
so it works directly on sets of strings and never looks at derivatives.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

from app.core.errors import IllTyped, TypeMismatch
from app.models.expressions import Lit, MixedExpr, One, Prod, Prog, Star, Sum, Zero, pretty
from app.models.strings import (
    EPSILON,
    Alphabet,
    ExprType,
    Literal,
    MixedString,
    Program,
    Subset,
    Symbol,
    UNDEFINED,
    Test,
    admits_type,
    concat,
)
from app.services.type_system import TypeChecker

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteMixedLanguage:
    strings: FrozenSet[MixedString]
    alphabet: Alphabet = field(compare=False)
    declared_type: Optional[ExprType] = None

    def __post_init__(self):
        if self.declared_type is not None:
            for s in self.strings:
                if not admits_type(s, self.declared_type, self.alphabet):
                    raise TypeMismatch(
                        f"{s.format(self.alphabet)} does not have type "
                        f"{self.declared_type.format(self.alphabet)}"
                    )

    @classmethod
    def of(cls, strings: Iterable[MixedString], alphabet: Alphabet,
           declared_type: Optional[ExprType] = None) -> "FiniteMixedLanguage":
        return cls(frozenset(strings), alphabet, declared_type)

    def __contains__(self, s: MixedString) -> bool:
        return s in self.strings

    def __len__(self) -> int:
        return len(self.strings)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> List[MixedString]:
        return sorted(self.strings, key=lambda s: (len(s), s.format(self.alphabet)))

    def up_to(self, max_len: int) -> "FiniteMixedLanguage":
        return FiniteMixedLanguage(
            frozenset(s for s in self.strings if len(s) <= max_len), self.alphabet, self.declared_type
        )

    def lines(self) -> List[str]:
        return [s.format(self.alphabet) for s in self.sorted()]


def _concat_sets(first: Iterable[MixedString], second: Iterable[MixedString],
                 alphabet: Alphabet, max_len: Optional[int] = None) -> Set[MixedString]:
    second = list(second)
    out = set()
    for s1 in first:
        for s2 in second:
            joined = concat(s1, s2, alphabet)
            if joined is UNDEFINED:
                continue
            if max_len is None or len(joined) <= max_len:
                out.add(joined)
    return out


def lang_concat(l1: FiniteMixedLanguage, l2: FiniteMixedLanguage) -> FiniteMixedLanguage:
    declared = None
    if l1.declared_type and l2.declared_type and l1.declared_type.target == l2.declared_type.source:
        declared = ExprType(l1.declared_type.source, l2.declared_type.target)
    return FiniteMixedLanguage(
        frozenset(_concat_sets(l1.strings, l2.strings, l1.alphabet)), l1.alphabet, declared
    )


def lang_union(l1: FiniteMixedLanguage, l2: FiniteMixedLanguage) -> FiniteMixedLanguage:
    declared = l1.declared_type if l1.declared_type == l2.declared_type else None
    return FiniteMixedLanguage(l1.strings | l2.strings, l1.alphabet, declared)


def lang_power(language: FiniteMixedLanguage, n: int) -> FiniteMixedLanguage:
    if n == 1:
        return language
    declared = language.declared_type
    if declared is not None and declared.source != declared.target:
        declared = None
    result: Set[MixedString] = {EPSILON}
    for _ in range(n):
        result = _concat_sets(result, language.strings, language.alphabet)
    return FiniteMixedLanguage(frozenset(result), language.alphabet, declared)


def t_op(language: FiniteMixedLanguage) -> FiniteMixedLanguage:
    tests = frozenset(
        s for s in language.strings if len(s) == 1 and isinstance(s.elements[0], Test)
    )
    return FiniteMixedLanguage(tests, language.alphabet, language.declared_type)


def eps_op(language: FiniteMixedLanguage) -> FiniteMixedLanguage:
    return FiniteMixedLanguage(language.strings & {EPSILON}, language.alphabet, language.declared_type)


def deriv_lang(language: FiniteMixedLanguage, x: Symbol) -> FiniteMixedLanguage:
    """Residual {s : x s in L} for a program or a single-literal test."""
    declared = language.declared_type
    alphabet = language.alphabet
    out = set()
    if isinstance(x, Program):
        if declared is not None and declared.source:
            raise TypeMismatch(f"program derivative of a language typed from {sorted(declared.source)}")
        for s in language.strings:
            if s.elements and s.elements[0] == x:
                out.add(MixedString(s.elements[1:]))
        new_type = ExprType(alphabet.full, declared.target) if declared else None
    else:
        if declared is not None and x.base not in declared.source:
            raise TypeMismatch(f"literal {x} is not over the source tests {sorted(declared.source)}")
        for s in language.strings:
            if not s.elements or not isinstance(s.elements[0], Test):
                continue
            head = s.elements[0]
            if x not in head.literals:
                continue
            if len(head) == 1:
                out.add(MixedString(s.elements[1:]))
            else:
                out.add(MixedString((Test(head.literals - {x}),) + s.elements[1:]))
        new_type = ExprType(declared.source - {x.base}, declared.target) if declared else None
    return FiniteMixedLanguage(frozenset(out), alphabet, new_type)


class LanguageOracle:
    """Brute-force bounded interpretation M of mixed expressions."""

    def __init__(self, alphabet: Alphabet, checker: TypeChecker = None):
        self.alphabet = alphabet
        self.checker = checker or TypeChecker(alphabet)

    def m_bounded(self, e: MixedExpr, t: ExprType, max_len: int) -> FiniteMixedLanguage:
        """Strings of ``e`` at type ``t`` with at most ``max_len`` elements, by enumeration."""
        if max_len < 0:
            raise ValueError("max_len must be nonnegative")
        if not self.checker.has_type(e, t):
            raise IllTyped(pretty(e), t.format(self.alphabet))
        memo: Dict[MixedExpr, FrozenSet[MixedString]] = {}
        strings = self._m(e, max_len, memo)
        return FiniteMixedLanguage(strings, self.alphabet, t)

    def _m(self, e: MixedExpr, n: int, memo: Dict) -> FrozenSet[MixedString]:
        cached = memo.get(e)
        if cached is not None:
            return cached
        if isinstance(e, Zero):
            result = frozenset()
        elif isinstance(e, One):
            result = frozenset({EPSILON})
        elif isinstance(e, Prog):
            result = frozenset({MixedString((Program(e.name),))}) if n >= 1 else frozenset()
        elif isinstance(e, Lit):
            result = frozenset({MixedString((Test.of(e.literal),))}) if n >= 1 else frozenset()
        elif isinstance(e, Sum):
            result = self._m(e.left, n, memo) | self._m(e.right, n, memo)
        elif isinstance(e, Prod):
            result = frozenset(
                _concat_sets(self._m(e.left, n, memo), self._m(e.right, n, memo), self.alphabet, n)
            )
        elif isinstance(e, Star):
            result = self._star(self._m(e.inner, n, memo), n)
        else:
            raise TypeError(f"not a mixed expression: {e!r}")
        memo[e] = result
        return result

    def _star(self, body: FrozenSet[MixedString], n: int) -> FrozenSet[MixedString]:
        reached = {EPSILON}
        frontier = {EPSILON}
        rounds = 0
        while frontier:
            grown = _concat_sets(body, frontier, self.alphabet, n) - reached
            reached |= grown
            frontier = grown
            rounds += 1
        logger.debug("star fixpoint reached after %d rounds with %d strings", rounds, len(reached))
        return frozenset(reached)


def tests_with_base(subset: Subset, alphabet: Alphabet) -> List[Test]:
    """Every test whose base is exactly ``subset``, positive polarities first."""
    bases = alphabet.ordered(subset)
    if not bases:
        return []
    return [
        Test(frozenset(Literal(b, sign) for b, sign in zip(bases, signs)))
        for signs in itertools.product((True, False), repeat=len(bases))
    ]


def enumerate_strings(alphabet: Alphabet, t: ExprType, max_len: int) -> FiniteMixedLanguage:
    """All mixed strings of type ``t`` with at most ``max_len`` elements."""
    full = alphabet.full
    programs = [Program(p) for p in alphabet.programs]
    found: Set[MixedString] = set()
    if t.source == t.target:
        found.add(EPSILON)
    if max_len >= 1:
        if t.target <= t.source and t.source - t.target:
            found.update(MixedString((test,)) for test in tests_with_base(t.source - t.target, alphabet))
        if not t.source and t.target == full:
            found.update(MixedString((p,)) for p in programs)
    for length in range(2, max_len + 1):
        first_is_test = bool(t.source)
        kinds = [(i % 2 == 0) == first_is_test for i in range(length)]
        last_is_test = kinds[-1]
        if last_is_test and not full - t.target:
            continue
        if not last_is_test and t.target != full:
            continue
        choices = []
        for index, is_test in enumerate(kinds):
            if not is_test:
                choices.append(programs)
            elif index == 0:
                choices.append(tests_with_base(t.source, alphabet))
            elif index == length - 1:
                choices.append(tests_with_base(full - t.target, alphabet))
            else:
                choices.append(tests_with_base(full, alphabet))
        found.update(MixedString(tuple(combo)) for combo in itertools.product(*choices))
    return FiniteMixedLanguage(frozenset(found), alphabet, t)
