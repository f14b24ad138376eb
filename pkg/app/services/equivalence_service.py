"""
Equivalence of mixed expressions typed A -> {} by syntactic bisimulation.

Pairs of normal forms are explored breadth first from the two inputs. A pair
over the empty subset must agree on the empty string and moves on by program
derivatives; any other pair moves on by literal derivatives. A closed
relation is the equivalence certificate; a disagreement yields the shortest
counterexample the search can find.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple, Union

from app.core.config import settings
from app.core.errors import (
    AlphabetError,
    InternalInvariantViolation,
    KatError,
    StateCapExceeded,
    TypeMismatch,
)
from app.models.automaton import BisimFamily, PseudoBisimFamily, family_from_pairs
from app.models.expressions import MixedExpr, pretty
from app.models.schemas import CertificateSchema, Side, VerdictKind, VerdictSchema
from app.models.strings import (
    EMPTY,
    Alphabet,
    ExprType,
    MixedString,
    Subset,
    Symbol,
    admits_type,
    string_from_symbols,
)
from app.services.automata_service import DerivativeAutomaton, DerivativeAutomatonBuilder
from app.services.derivatives import DerivativeService
from app.services.language_oracle import LanguageOracle
from app.services.normal_form import normalize
from app.services.parser import parse, parse_type

logger = logging.getLogger(__name__)

ExprPair = Tuple[MixedExpr, MixedExpr]


@dataclass(frozen=True)
class SyntacticBisimulation:
    alphabet: Alphabet
    expr_type: ExprType
    root: ExprPair
    pairs: Dict[Subset, FrozenSet[ExprPair]] = field(hash=False)

    def pair_count(self) -> int:
        return sum(len(rel) for rel in self.pairs.values())

    def without(self, subset: Subset, pair: ExprPair) -> "SyntacticBisimulation":
        pairs = dict(self.pairs)
        pairs[subset] = pairs.get(subset, frozenset()) - {pair}
        return SyntacticBisimulation(self.alphabet, self.expr_type, self.root, pairs)


@dataclass(frozen=True)
class Equivalent:
    certificate: SyntacticBisimulation


@dataclass(frozen=True)
class Inequivalent:
    counterexample: MixedString
    side: Side
    path: Tuple[Symbol, ...] = ()


EquivalenceVerdict = Union[Equivalent, Inequivalent]


def counterexample_string(path, t: ExprType, alphabet: Alphabet) -> MixedString:
    """Group literal runs of a derivative path into tests."""
    try:
        sigma = string_from_symbols(path, alphabet)
    except KatError as exc:
        raise InternalInvariantViolation(f"derivative path {list(map(str, path))} is not a mixed string", exc) from exc
    if not admits_type(sigma, t, alphabet):
        raise InternalInvariantViolation(
            f"counterexample {sigma.format(alphabet)} does not have type {t.format(alphabet)}"
        )
    return sigma


class EquivalenceService:
    def __init__(self, alphabet: Alphabet, derivatives: DerivativeService = None):
        self.alphabet = alphabet
        self.derivatives = derivatives or DerivativeService(alphabet)
        self.checker = self.derivatives.checker

    def _successors(self, subset: Subset, f1: MixedExpr, f2: MixedExpr):
        target = self.alphabet.full if not subset else None
        for symbol in self.derivatives.symbols(subset):
            next_subset = target if target is not None else subset - {symbol.base}
            yield symbol, next_subset, (
                self.derivatives.derivative(f1, subset, symbol),
                self.derivatives.derivative(f2, subset, symbol),
            )

    def _check_inputs(self, e1: MixedExpr, e2: MixedExpr, t: ExprType) -> None:
        if not self.alphabet.tests:
            raise AlphabetError("equivalence needs at least one primitive test")
        if t.target:
            raise TypeMismatch(f"equivalence is decided only at types A->{{}}, not {t.format(self.alphabet)}")
        self.checker.check_type(e1, t)
        self.checker.check_type(e2, t)

    def decide_equiv(self, e1: MixedExpr, e2: MixedExpr, t: ExprType,
                     state_cap: int = None, verify: bool = True) -> EquivalenceVerdict:
        """Equivalent with a certificate, or Inequivalent with a verified counterexample."""
        state_cap = state_cap or settings.DEFAULT_STATE_CAP
        self._check_inputs(e1, e2, t)
        root = (normalize(e1), normalize(e2))
        logger.info("deciding %s == %s at %s", pretty(root[0]), pretty(root[1]), t.format(self.alphabet))

        visited = {(t.source,) + root}
        relation: Dict[Subset, set] = {t.source: {root}}
        queue = deque([(t.source, root, ())])
        while queue:
            subset, (f1, f2), path = queue.popleft()
            if not subset:
                left, right = self.derivatives.nullable(f1), self.derivatives.nullable(f2)
                if left != right:
                    sigma = counterexample_string(path, t, self.alphabet)
                    side = Side.LEFT if left else Side.RIGHT
                    logger.info("inequivalent after %d pairs: %s only on the %s",
                                len(visited), sigma.format(self.alphabet), side.value)
                    if verify:
                        self._verify_counterexample(e1, e2, t, sigma, side)
                    return Inequivalent(sigma, side, path)
            for symbol, next_subset, pair in self._successors(subset, f1, f2):
                key = (next_subset,) + pair
                if key in visited:
                    continue
                if len(visited) >= state_cap:
                    raise StateCapExceeded(state_cap)
                visited.add(key)
                relation.setdefault(next_subset, set()).add(pair)
                logger.debug("pair %s | %s at %s", pretty(pair[0]), pretty(pair[1]),
                             self.alphabet.format_subset(next_subset))
                queue.append((next_subset, pair, path + (symbol,)))

        certificate = SyntacticBisimulation(
            self.alphabet, t, root, {s: frozenset(rel) for s, rel in relation.items()}
        )
        logger.info("equivalent; certificate has %d pairs", certificate.pair_count())
        return Equivalent(certificate)

    def _verify_counterexample(self, e1, e2, t, sigma: MixedString, side: Side) -> None:
        oracle = LanguageOracle(self.alphabet, self.checker)
        in_left = sigma in oracle.m_bounded(e1, t, len(sigma))
        in_right = sigma in oracle.m_bounded(e2, t, len(sigma))
        if in_left == in_right or in_left != (side == Side.LEFT):
            raise InternalInvariantViolation(
                f"counterexample {sigma.format(self.alphabet)} does not separate the inputs"
            )

    def check_certificate(self, cert: SyntacticBisimulation) -> bool:
        """True iff the root pair is present and every pair's derivatives are related."""
        alphabet = self.alphabet
        t = cert.expr_type
        if t.target or cert.root not in cert.pairs.get(t.source, frozenset()):
            return False
        try:
            for subset, pairs in cert.pairs.items():
                at = ExprType(subset, EMPTY)
                for f1, f2 in pairs:
                    if not (self.checker.has_type(f1, at) and self.checker.has_type(f2, at)):
                        return False
                    if normalize(f1) != f1 or normalize(f2) != f2:
                        return False
                    if not subset and self.derivatives.nullable(f1) != self.derivatives.nullable(f2):
                        return False
                    for _, next_subset, pair in self._successors(subset, f1, f2):
                        if pair not in cert.pairs.get(next_subset, frozenset()):
                            return False
        except KatError as exc:
            logger.info("certificate rejected: %s", exc.message)
            return False
        return True

    # Certificates on the wire

    def certificate_to_schema(self, cert: SyntacticBisimulation) -> CertificateSchema:
        alphabet = self.alphabet
        return CertificateSchema(
            tests=list(alphabet.tests),
            programs=list(alphabet.programs),
            type=cert.expr_type.format(alphabet),
            pairs={
                alphabet.format_subset(subset): sorted([pretty(f1), pretty(f2)] for f1, f2 in cert.pairs[subset])
                for subset in alphabet.subsets()
                if subset in cert.pairs
            },
        )

    def certificate_from_schema(self, schema: CertificateSchema,
                                root: Optional[ExprPair] = None) -> SyntacticBisimulation:
        """Rebuild a certificate; without ``root`` the first pair at the source is used."""
        alphabet = self.alphabet
        t = parse_type(schema.type, alphabet)
        pairs: Dict[Subset, FrozenSet[ExprPair]] = {}
        for key, texts in schema.pairs.items():
            subset = alphabet.parse_subset(key)
            pairs[subset] = frozenset(
                (normalize(parse(a, alphabet)), normalize(parse(b, alphabet))) for a, b in texts
            )
        if root is None:
            source_pairs = schema.pairs.get(alphabet.format_subset(t.source), [])
            if not source_pairs:
                raise TypeMismatch("certificate has no pair at the source of its type")
            a, b = source_pairs[0]
            root = (normalize(parse(a, alphabet)), normalize(parse(b, alphabet)))
        else:
            root = (normalize(root[0]), normalize(root[1]))
        return SyntacticBisimulation(alphabet, t, root, pairs)

    def verdict_to_schema(self, verdict: EquivalenceVerdict, t: ExprType) -> VerdictSchema:
        """Wire form of a verdict for JSON output."""
        if isinstance(verdict, Equivalent):
            return VerdictSchema(
                verdict=VerdictKind.EQUIVALENT,
                type=t.format(self.alphabet),
                pair_count=verdict.certificate.pair_count(),
                certificate=self.certificate_to_schema(verdict.certificate),
            )
        return VerdictSchema(
            verdict=VerdictKind.INEQUIVALENT,
            type=t.format(self.alphabet),
            counterexample=verdict.counterexample.format(self.alphabet),
            side=verdict.side,
        )

    # Transport onto derivative automata

    def derivative_automata(self, cert: SyntacticBisimulation,
                            state_cap: int = None) -> Tuple[DerivativeAutomaton, DerivativeAutomaton]:
        builder = DerivativeAutomatonBuilder(self.alphabet, self.derivatives)
        return (
            builder.build(cert.root[0], cert.expr_type, state_cap),
            builder.build(cert.root[1], cert.expr_type, state_cap),
        )

    def bisimulation_from_certificate(self, cert: SyntacticBisimulation,
                                      first: DerivativeAutomaton,
                                      second: DerivativeAutomaton) -> BisimFamily:
        """Map certificate pairs onto the states of the two derivative automata."""
        index1, index2 = first.index(), second.index()
        triples = []
        for subset, pairs in cert.pairs.items():
            for f1, f2 in pairs:
                s1, s2 = index1.get((subset, f1)), index2.get((subset, f2))
                if s1 is None or s2 is None:
                    raise InternalInvariantViolation(
                        f"certificate pair {pretty(f1)} | {pretty(f2)} is not a pair of automaton states"
                    )
                triples.append((subset, s1, s2))
        return family_from_pairs(triples)

    def pseudo_bisimulation_from_certificate(self, cert: SyntacticBisimulation,
                                             first: DerivativeAutomaton,
                                             second: DerivativeAutomaton) -> PseudoBisimFamily:
        """The transported family restricted to the chain of test prefixes."""
        family = self.bisimulation_from_certificate(cert, first, second)
        return [family.get(subset, frozenset()) for subset in self.alphabet.chain()]


def decide_equiv(e1: MixedExpr, e2: MixedExpr, t: ExprType, alphabet: Alphabet,
                 state_cap: int = None) -> EquivalenceVerdict:
    return EquivalenceService(alphabet).decide_equiv(e1, e2, t, state_cap)


def check_certificate(cert: SyntacticBisimulation) -> bool:
    return EquivalenceService(cert.alphabet).check_certificate(cert)
