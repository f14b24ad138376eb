"""
Exception hierarchy shared by every service.

Each error carries the process exit status the command line reports for it.
Undefined string concatenation and inequivalent expressions are ordinary
results, not errors.
"""

from typing import Any, Optional, Sequence


class KatError(Exception):
    """Root of all reported failures."""

    exit_code: int = 2

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class AlphabetError(KatError):
    pass


# Mixed strings

class MixedStringError(KatError):
    def __init__(self, message: str, index: int):
        super().__init__(f"{message} at index {index}")
        self.index = index


class AlternationViolation(MixedStringError):
    def __init__(self, index: int):
        super().__init__("two programs or two tests are adjacent", index)


class IncompleteInteriorTest(MixedStringError):
    def __init__(self, index: int):
        super().__init__("interior test does not mention every primitive test", index)


# Text syntax

class ParseError(KatError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class KatSyntaxError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    def __init__(self, identifier: str, position: int):
        super().__init__(f"unknown identifier '{identifier}'", position)
        self.identifier = identifier


# Typing

class TypeMismatch(KatError):
    pass


class IllTyped(KatError):
    def __init__(self, expr: Any, expr_type: Any):
        super().__init__(f"expression {expr} does not have type {expr_type}")
        self.expr = expr
        self.expr_type = expr_type


class Untypeable(IllTyped):
    pass


# Automata

class AutomatonError(KatError):
    pass


class A1Violation(AutomatonError):
    def __init__(self, state: Any, symbol: Any, detail: str = ""):
        message = f"transition of state {state} on {symbol} breaks A1"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.state = state
        self.symbol = symbol


class A2Violation(AutomatonError):
    def __init__(self, state: Any, test: Any, first: Sequence[Any], second: Sequence[Any]):
        super().__init__(
            f"state {state} is not path independent on test {test}: "
            f"orderings {' '.join(map(str, first))} and {' '.join(map(str, second))} disagree"
        )
        self.state = state
        self.test = test
        self.orderings = (tuple(first), tuple(second))


class InvalidInput(AutomatonError):
    pass


class StateCapExceeded(KatError):
    exit_code = 3

    def __init__(self, cap: int):
        super().__init__(f"state cap of {cap} exceeded")
        self.cap = cap


# While front end

class CompileError(KatError):
    pass


class GuardOutsidePending(CompileError):
    def __init__(self, guard: Any, pending: Any):
        super().__init__(f"guard {guard} tests outside the pending set {pending}")
        self.guard = guard
        self.pending = pending


class UnproductiveLoopBody(CompileError):
    def __init__(self, guard: Any, pending: Any, out_pending: Any):
        super().__init__(
            f"body of loop on {guard} leaves {out_pending} pending, "
            f"which does not cover {pending}"
        )
        self.guard = guard


class NegatedGuardDisjunction(CompileError):
    def __init__(self, guard: Any):
        super().__init__(f"negating guard {guard} needs a disjunction, which is unsupported")
        self.guard = guard


class InternalInvariantViolation(KatError):
    exit_code = 4

    def __init__(self, message: str, detail: Optional[Any] = None):
        super().__init__(message)
        self.detail = detail
