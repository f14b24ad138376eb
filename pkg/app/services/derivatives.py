"""
Syntactic operators on typed mixed expressions: the test part, the empty
string check and the program and literal derivatives.
"""

import logging
from typing import Dict, Tuple, Union

from app.core.errors import InternalInvariantViolation, KatError, TypeMismatch
from app.models.expressions import (
    ONE,
    ZERO,
    Lit,
    MixedExpr,
    One,
    Prod,
    Prog,
    Star,
    Sum,
    Zero,
    pretty,
)
from app.models.strings import EMPTY, Alphabet, ExprType, Literal, Program, Subset, Symbol
from app.services.normal_form import normalize, simplify
from app.services.type_system import TypeChecker, TypeDerivation

logger = logging.getLogger(__name__)


def t_hat(e: MixedExpr) -> MixedExpr:
    if isinstance(e, Prog):
        return ZERO
    if isinstance(e, Sum):
        return Sum(t_hat(e.left), t_hat(e.right))
    if isinstance(e, Prod):
        return Prod(t_hat(e.left), t_hat(e.right))
    if isinstance(e, Star):
        return Star(t_hat(e.inner))
    return e


def eps_hat(e: MixedExpr) -> MixedExpr:
    """Always ZERO or ONE."""
    if isinstance(e, (One, Star)):
        return ONE
    if isinstance(e, Sum):
        return ONE if ONE in (eps_hat(e.left), eps_hat(e.right)) else ZERO
    if isinstance(e, Prod):
        return ONE if eps_hat(e.left) == ONE and eps_hat(e.right) == ONE else ZERO
    return ZERO


def d_hat(derivation: TypeDerivation, x: Symbol) -> MixedExpr:
    """Derivative of the derivation's expression by a program or literal."""
    source = derivation.expr_type.source
    if isinstance(x, Program):
        if source:
            raise TypeMismatch(
                f"program derivative needs an expression typed from {{}}, not {sorted(source)}"
            )
    elif x.base not in source:
        raise TypeMismatch(f"literal {x} is not over the source tests {sorted(source)}")
    return _derive(derivation, x)


def _derive(d: TypeDerivation, x: Symbol) -> MixedExpr:
    e = d.expr
    if isinstance(e, (Zero, One)):
        return ZERO
    if isinstance(e, Prog):
        return ONE if isinstance(x, Program) and x.name == e.name else ZERO
    if isinstance(e, Lit):
        return ONE if isinstance(x, Literal) and x == e.literal else ZERO
    if isinstance(e, Sum):
        return Sum(_derive(d.children[0], x), _derive(d.children[1], x))
    if isinstance(e, Star):
        return Prod(_derive(d.children[0], x), e)
    left_d, right_d = d.children
    head = Prod(_derive(left_d, x), e.right)
    if isinstance(x, Program):
        if d.mid or eps_hat(e.left) == ZERO:
            return head
        return Sum(head, _derive(right_d, x))
    if x.base not in d.mid:
        return head
    # simplified, the test part of the left factor no longer mentions x
    tests = simplify(t_hat(e.left))
    if isinstance(tests, Zero):
        return head
    return Sum(head, Prod(tests, _derive(right_d, x)))


def derived_type(t: ExprType, x: Symbol, alphabet: Alphabet) -> ExprType:
    if isinstance(x, Program):
        return ExprType(alphabet.full, t.target)
    return ExprType(t.source - {x.base}, t.target)


class DerivativeService:
    """Normalized derivatives of normal forms typed A -> {}, cached per state."""

    def __init__(self, alphabet: Alphabet, checker: TypeChecker = None):
        self.alphabet = alphabet
        self.checker = checker or TypeChecker(alphabet)
        self._derivations: Dict[Tuple[MixedExpr, Subset], TypeDerivation] = {}
        self._derivatives: Dict[Tuple[MixedExpr, Subset, Symbol], MixedExpr] = {}

    def derivation(self, nf: MixedExpr, subset: Subset) -> TypeDerivation:
        key = (nf, subset)
        if key not in self._derivations:
            try:
                self._derivations[key] = self.checker.check_type(nf, ExprType(subset, EMPTY))
            except KatError as exc:
                raise InternalInvariantViolation(
                    f"derivative {pretty(nf)} lost its type {self.alphabet.format_subset(subset)}->{{}}",
                    exc,
                ) from exc
        return self._derivations[key]

    def derivative(self, nf: MixedExpr, subset: Subset, x: Union[Program, Literal]) -> MixedExpr:
        """Normalized derivative of a state, computed once per (state, subset, symbol)."""
        key = (nf, subset, x)
        cached = self._derivatives.get(key)
        if cached is None:
            cached = normalize(d_hat(self.derivation(nf, subset), x))
            self._derivatives[key] = cached
            logger.debug("D_%s(%s) = %s", x, pretty(nf), pretty(cached))
        return cached

    def nullable(self, nf: MixedExpr) -> bool:
        return eps_hat(nf) == ONE

    def symbols(self, subset: Subset):
        """Programs at the empty subset, otherwise lit(subset) in display order."""
        if not subset:
            return [Program(p) for p in self.alphabet.programs]
        return [
            Literal(b, sign) for b in self.alphabet.ordered(subset) for sign in (True, False)
        ]
