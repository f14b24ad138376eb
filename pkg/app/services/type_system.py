"""
Type inference and type derivations for mixed expressions.

A type is a pair A -> B of subsets of the primitive tests. ``infer_types``
returns every derivable pair; ``check_type`` builds one derivation, choosing
for each product the first intermediate set in the canonical subset order.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

from app.core.errors import Untypeable
from app.models.expressions import Lit, MixedExpr, One, Prod, Prog, Star, Sum, Zero, pretty
from app.models.strings import EMPTY, Alphabet, ExprType, Subset

logger = logging.getLogger(__name__)

TypeSet = FrozenSet[ExprType]


@dataclass(frozen=True)
class TypeDerivation:
    expr: MixedExpr
    expr_type: ExprType
    children: Tuple["TypeDerivation", ...] = ()
    # intermediate set chosen for a product node
    mid: Optional[Subset] = None


class TypeChecker:
    """Memoizing type checker bound to one alphabet."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._subsets = alphabet.subsets()
        self._cache: Dict[MixedExpr, TypeSet] = {}
        self._all = frozenset(ExprType(a, b) for a in self._subsets for b in self._subsets)
        self._diagonal = frozenset(ExprType(a, a) for a in self._subsets)

    def infer_types(self, e: MixedExpr) -> TypeSet:
        cached = self._cache.get(e)
        if cached is None:
            cached = self._infer(e)
            self._cache[e] = cached
        return cached

    def _infer(self, e: MixedExpr) -> TypeSet:
        if isinstance(e, Zero):
            return self._all
        if isinstance(e, One):
            return self._diagonal
        if isinstance(e, Prog):
            return frozenset({ExprType(EMPTY, self.alphabet.full)})
        if isinstance(e, Lit):
            base = e.literal.base
            return frozenset(
                ExprType(x, x - {base}) for x in self._subsets if base in x
            )
        if isinstance(e, Sum):
            return self.infer_types(e.left) & self.infer_types(e.right)
        if isinstance(e, Prod):
            return compose(self.infer_types(e.left), self.infer_types(e.right))
        if isinstance(e, Star):
            return frozenset(t for t in self.infer_types(e.inner) if t.source == t.target)
        raise TypeError(f"not a mixed expression: {e!r}")

    def has_type(self, e: MixedExpr, t: ExprType) -> bool:
        return t in self.infer_types(e)

    def check_type(self, e: MixedExpr, t: ExprType) -> TypeDerivation:
        """One derivation of ``e : t``, or Untypeable."""
        if not self.has_type(e, t):
            raise Untypeable(pretty(e), t.format(self.alphabet))
        return self._derive(e, t)

    def _derive(self, e: MixedExpr, t: ExprType) -> TypeDerivation:
        if isinstance(e, Sum):
            return TypeDerivation(e, t, (self._derive(e.left, t), self._derive(e.right, t)))
        if isinstance(e, Star):
            return TypeDerivation(e, t, (self._derive(e.inner, t),))
        if isinstance(e, Prod):
            left_types, right_types = self.infer_types(e.left), self.infer_types(e.right)
            for mid in self._subsets:
                first, second = ExprType(t.source, mid), ExprType(mid, t.target)
                if first in left_types and second in right_types:
                    return TypeDerivation(
                        e, t, (self._derive(e.left, first), self._derive(e.right, second)), mid
                    )
            raise Untypeable(pretty(e), t.format(self.alphabet))
        return TypeDerivation(e, t)


def compose(first: TypeSet, second: TypeSet) -> TypeSet:
    by_source: Dict[Subset, list] = {}
    for t in second:
        by_source.setdefault(t.source, []).append(t.target)
    return frozenset(
        ExprType(t.source, target) for t in first for target in by_source.get(t.target, ())
    )
