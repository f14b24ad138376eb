"""
Mixed expressions: 0, 1, programs, literals, sums, products and stars.

Nodes are frozen dataclasses so they hash structurally and can key the
memo tables of the type checker and the derivative cache.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from app.models.strings import Literal


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Prog:
    name: str


@dataclass(frozen=True)
class Lit:
    literal: Literal


@dataclass(frozen=True)
class Sum:
    left: "MixedExpr"
    right: "MixedExpr"


@dataclass(frozen=True)
class Prod:
    left: "MixedExpr"
    right: "MixedExpr"


@dataclass(frozen=True)
class Star:
    inner: "MixedExpr"


MixedExpr = Union[Zero, One, Prog, Lit, Sum, Prod, Star]

ZERO = Zero()
ONE = One()


def lit(base: str, positive: bool = True) -> Lit:
    return Lit(Literal(base, positive))


def is_test_sugar(e: MixedExpr) -> bool:
    """True for b + ~b, printed as [b]."""
    return (
        isinstance(e, Sum)
        and isinstance(e.left, Lit)
        and isinstance(e.right, Lit)
        and e.left.literal.base == e.right.literal.base
        and e.left.literal.positive
        and not e.right.literal.positive
    )


def _plain_sum(e: MixedExpr) -> bool:
    return isinstance(e, Sum) and not is_test_sugar(e)


def pretty(e: MixedExpr) -> str:
    """Print ``e`` so that parsing the text gives back the same tree."""
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, One):
        return "1"
    if isinstance(e, Prog):
        return e.name
    if isinstance(e, Lit):
        return str(e.literal)
    if isinstance(e, Sum):
        if is_test_sugar(e):
            return f"[{e.left.literal.base}]"
        # right-nested spines are walked, not recursed into
        parts = []
        node = e
        while _plain_sum(node):
            left = pretty(node.left)
            parts.append(f"({left})" if _plain_sum(node.left) else left)
            node = node.right
        parts.append(pretty(node))
        return " + ".join(parts)
    if isinstance(e, Prod):
        parts = []
        node = e
        while isinstance(node, Prod):
            left = pretty(node.left)
            if _plain_sum(node.left) or isinstance(node.left, Prod):
                left = f"({left})"
            parts.append(left)
            node = node.right
        last = pretty(node)
        parts.append(f"({last})" if _plain_sum(node) else last)
        return " ".join(parts)
    if isinstance(e, Star):
        inner = pretty(e.inner)
        if isinstance(e.inner, Prod) or _plain_sum(e.inner):
            inner = f"({inner})"
        return f"{inner}*"
    raise TypeError(f"not a mixed expression: {e!r}")
