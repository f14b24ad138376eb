"""
Canonical forms of mixed expressions.

Inside stars, sums are flattened, stripped of 0, deduplicated and sorted;
products are flattened, right-nested, and lose their 1 factors (a 0 factor
absorbs the product); 0* and 1* fold to 1. At the top level, products are
also distributed over sums up to and including the first program of each
summand, so the expression becomes a sorted set of monomials. Factors after
that program stay simplified but undistributed; literal derivatives never
reach past a program.
"""

import functools
from typing import List, Tuple

from app.core.config import settings
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
)

# factors of one summand, and whether a program has been reached
Monomial = Tuple[Tuple[MixedExpr, ...], bool]

_RANK = {Zero: 0, One: 1, Lit: 2, Prog: 3, Prod: 4, Star: 5, Sum: 6}


def _spine(e: MixedExpr, kind: type) -> List[MixedExpr]:
    """Operands of a nest of ``kind`` nodes, left to right."""
    out, stack = [], [e]
    while stack:
        node = stack.pop()
        if isinstance(node, kind):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def _sum_terms(e: MixedExpr) -> List[MixedExpr]:
    return _spine(e, Sum)


def _factors(e: MixedExpr) -> List[MixedExpr]:
    return _spine(e, Prod)


@functools.lru_cache(maxsize=settings.NORMAL_FORM_CACHE_SIZE)
def sort_key(e: MixedExpr) -> tuple:
    """Total order on simplified expressions: constructor rank, then names, then operands."""
    rank = _RANK[type(e)]
    if isinstance(e, Lit):
        return (rank, e.literal.base, 0 if e.literal.positive else 1)
    if isinstance(e, Prog):
        return (rank, e.name)
    if isinstance(e, Sum):
        return (rank, tuple(sort_key(t) for t in _sum_terms(e)))
    if isinstance(e, Prod):
        return (rank, tuple(sort_key(f) for f in _factors(e)))
    if isinstance(e, Star):
        return (rank, sort_key(e.inner))
    return (rank,)


def build_sum(terms: List[MixedExpr]) -> MixedExpr:
    unique = sorted(set(terms) - {ZERO}, key=sort_key)
    if not unique:
        return ZERO
    result = unique[-1]
    for term in reversed(unique[:-1]):
        result = Sum(term, result)
    return result


def build_product(factors: List[MixedExpr]) -> MixedExpr:
    if any(isinstance(f, Zero) for f in factors):
        return ZERO
    kept = [f for f in factors if not isinstance(f, One)]
    if not kept:
        return ONE
    result = kept[-1]
    for factor in reversed(kept[:-1]):
        result = Prod(factor, result)
    return result


@functools.lru_cache(maxsize=settings.NORMAL_FORM_CACHE_SIZE)
def simplify(e: MixedExpr) -> MixedExpr:
    """ACI and unit/annihilator simplification without distribution."""
    if isinstance(e, Sum):
        return build_sum([t for term in _sum_terms(e) for t in _sum_terms(simplify(term))])
    if isinstance(e, Prod):
        return build_product([f for factor in _factors(e) for f in _factors(simplify(factor))])
    if isinstance(e, Star):
        inner = simplify(e.inner)
        if isinstance(inner, (Zero, One)):
            return ONE
        return Star(inner)
    return e


def monomials(e: MixedExpr) -> List[Monomial]:
    """The summands of ``e``; [] is 0 and [((), False)] is 1.

    Once a summand holds a program, the factors that follow it are appended
    as simplified tail factors instead of being expanded.
    """
    if isinstance(e, Zero):
        return []
    if isinstance(e, One):
        return [((), False)]
    if isinstance(e, Prog):
        return [((e,), True)]
    if isinstance(e, Sum):
        return [m for term in _sum_terms(e) for m in monomials(term)]
    if isinstance(e, Prod):
        result: List[Monomial] = []
        right = None
        for factors, closed in monomials(e.left):
            if closed:
                tail = simplify(e.right)
                if not isinstance(tail, Zero):
                    result.append((factors + tuple(_factors(tail)), True))
                continue
            if right is None:
                right = monomials(e.right)
            result.extend((factors + more, after) for more, after in right)
        return result
    if isinstance(e, Star):
        folded = simplify(e)
        return [((), False)] if isinstance(folded, One) else [((folded,), False)]
    return [((e,), False)]


@functools.lru_cache(maxsize=settings.NORMAL_FORM_CACHE_SIZE)
def normalize(e: MixedExpr) -> MixedExpr:
    return build_sum([build_product(list(factors)) for factors, _ in monomials(e)])


def aci_equal(e1: MixedExpr, e2: MixedExpr) -> bool:
    return normalize(e1) == normalize(e2)
