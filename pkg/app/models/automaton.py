"""
Mixed automata and the relation families compared between them.

States are opaque string ids, unique across all subsets, so hand-built and
derivative automata share one representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.models.strings import Alphabet, Subset, Symbol

StatePair = Tuple[str, str]
BisimFamily = Dict[Subset, FrozenSet[StatePair]]
# index i relates states over the first i tests of the declared order
PseudoBisimFamily = List[FrozenSet[StatePair]]
StateMap = Dict[str, str]


@dataclass(frozen=True)
class MixedAutomaton:
    alphabet: Alphabet
    states: Mapping[Subset, Tuple[str, ...]]
    output: Mapping[str, bool]
    transitions: Mapping[Tuple[str, Symbol], str]
    _subset_of: Dict[str, Subset] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: Dict[str, Subset] = {}
        for subset, ids in self.states.items():
            for state in ids:
                index.setdefault(state, subset)
        object.__setattr__(self, "_subset_of", index)

    def subset_of(self, state: str) -> Optional[Subset]:
        return self._subset_of.get(state)

    def states_at(self, subset: Subset) -> Tuple[str, ...]:
        return tuple(self.states.get(subset, ()))

    def all_states(self) -> List[str]:
        return [s for subset in self.alphabet.subsets() for s in self.states_at(subset)]

    def accepting(self, state: str) -> bool:
        return bool(self.output.get(state, False))

    def step(self, state: str, symbol: Symbol) -> str:
        return self.transitions[(state, symbol)]

    def run(self, state: str, symbols: Iterable[Symbol]) -> str:
        for symbol in symbols:
            state = self.step(state, symbol)
        return state


def family_from_pairs(pairs: Iterable[Tuple[Subset, str, str]]) -> BisimFamily:
    family: Dict[Subset, set] = {}
    for subset, s1, s2 in pairs:
        family.setdefault(subset, set()).add((s1, s2))
    return {subset: frozenset(rel) for subset, rel in family.items()}


def family_size(family: BisimFamily) -> int:
    return sum(len(rel) for rel in family.values())


def restrict_to_chain(family: BisimFamily, chain: Sequence[Subset]) -> PseudoBisimFamily:
    return [family.get(subset, frozenset()) for subset in chain]
