"""
Compilation of while-programs into typed mixed expressions.

The compiler threads the set of primitive tests that are still pending, i.e.
not yet tested since the last program. A program must be preceded by a full
test, so pending tests are padded with ``[b]`` before it; after a program
every test is pending again.

    skip          -> 1                                   pending unchanged
    abort         -> 0                                   pending unchanged
    p             -> pad(pending) p                      all tests pending
    s1; s2        -> c1 c2
    if g ...      -> T(g) c1 + T(~g) c2                  branches padded to a common set
    while g do s  -> (T(g) c pad(out \\ pending))* T(~g)  pending minus base(g)
"""

import logging
from typing import FrozenSet, List, NamedTuple, Optional

from app.core.errors import (
    GuardOutsidePending,
    InternalInvariantViolation,
    KatSyntaxError,
    NegatedGuardDisjunction,
    UnknownIdentifier,
    UnproductiveLoopBody,
)
from app.models.expressions import ONE, ZERO, Lit, MixedExpr, One, Prod, Prog, Star, Sum, pretty
from app.models.programs import Abort, Guard, If, Prim, Seq, Skip, While, WhileProgram, format_guard
from app.models.strings import Alphabet, ExprType, Literal, Subset, Test
from app.services.lexer import TokenStream, tokenize
from app.services.type_system import TypeChecker

logger = logging.getLogger(__name__)

_KEYWORDS = ("skip", "abort", "if", "then", "else", "while", "do")


class CompileResult(NamedTuple):
    expr: MixedExpr
    out_pending: FrozenSet[str]


class ProgramParser:
    """
    program := stmt (';' stmt)* ';'?
    stmt    := 'skip' | 'abort' | IDENT | block
             | 'if' guard 'then' stmt ('else' stmt)?
             | 'while' guard 'do' stmt
    block   := '{' program '}'
    guard   := '~'? IDENT ('&' '~'? IDENT)*
    """

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet

    def parse(self, text: str) -> WhileProgram:
        stream = TokenStream(tokenize(text))
        if stream.at("EOF"):
            raise KatSyntaxError("empty program", 0)
        prog = self._program(stream, closing="EOF")
        stream.expect_end()
        return prog

    def _program(self, stream: TokenStream, closing: str) -> WhileProgram:
        statements = [self._statement(stream)]
        while stream.at(";"):
            stream.advance()
            if stream.at(closing):
                break
            statements.append(self._statement(stream))
        prog = statements[-1]
        for stmt in reversed(statements[:-1]):
            prog = Seq(stmt, prog)
        return prog

    def _statement(self, stream: TokenStream) -> WhileProgram:
        token = stream.current
        if stream.at("{"):
            stream.advance()
            if stream.at("}"):
                stream.advance()
                return Skip()
            prog = self._program(stream, closing="}")
            stream.expect("}")
            return prog
        if stream.at_keyword("skip"):
            stream.advance()
            return Skip()
        if stream.at_keyword("abort"):
            stream.advance()
            return Abort()
        if stream.at_keyword("if"):
            stream.advance()
            guard = self._guard(stream)
            stream.expect_keyword("then")
            then = self._statement(stream)
            otherwise: WhileProgram = Skip()
            if stream.at_keyword("else"):
                stream.advance()
                otherwise = self._statement(stream)
            return If(guard, then, otherwise)
        if stream.at_keyword("while"):
            stream.advance()
            guard = self._guard(stream)
            stream.expect_keyword("do")
            return While(guard, self._statement(stream))
        if token.kind == "IDENT" and token.text not in _KEYWORDS:
            stream.advance()
            if not self.alphabet.is_program(token.text):
                raise UnknownIdentifier(token.text, token.position)
            return Prim(token.text)
        found = token.text or "end of input"
        raise KatSyntaxError(f"expected a statement but found '{found}'", token.position)

    def _guard(self, stream: TokenStream) -> Guard:
        start = stream.current.position
        literals: List[Literal] = [self._literal(stream)]
        while stream.at("&"):
            stream.advance()
            literals.append(self._literal(stream))
        if len({lit.base for lit in literals}) != len(literals):
            raise KatSyntaxError("guard mentions a test twice", start)
        return Test(frozenset(literals))

    def _literal(self, stream: TokenStream) -> Literal:
        positive = True
        if stream.at("~"):
            stream.advance()
            positive = False
        token = stream.expect("IDENT")
        if not self.alphabet.is_test(token.text):
            raise UnknownIdentifier(token.text, token.position)
        return Literal(token.text, positive)


def parse_program(text: str, alphabet: Alphabet) -> WhileProgram:
    return ProgramParser(alphabet).parse(text)


def _flatten(e: MixedExpr) -> List[MixedExpr]:
    if isinstance(e, Prod):
        return _flatten(e.left) + _flatten(e.right)
    return [] if isinstance(e, One) else [e]


def _product(*factors: MixedExpr) -> MixedExpr:
    # right nested; units are dropped and the empty product is 1
    kept = [f for factor in factors for f in _flatten(factor)]
    if not kept:
        return ONE
    expr = kept[-1]
    for factor in reversed(kept[:-1]):
        expr = Prod(factor, expr)
    return expr


class WhileCompiler:
    def __init__(self, alphabet: Alphabet, checker: Optional[TypeChecker] = None):
        self.alphabet = alphabet
        self.checker = checker or TypeChecker(alphabet)

    def pad(self, subset: Subset) -> MixedExpr:
        """``[b]`` for each b in the subset, in declared order."""
        return _product(*(
            Sum(Lit(Literal(name, True)), Lit(Literal(name, False)))
            for name in self.alphabet.ordered(subset)
        ))

    def guard_expr(self, guard: Guard) -> MixedExpr:
        return _product(*(Lit(lit) for lit in guard.ordered(self.alphabet)))

    def negated_guard_expr(self, guard: Guard) -> MixedExpr:
        if len(guard) > 1:
            raise NegatedGuardDisjunction(format_guard(guard, self.alphabet))
        (literal,) = guard.literals
        return Lit(literal.negate())

    def _check_guard(self, guard: Guard, pending: Subset) -> None:
        if not guard.base <= pending:
            raise GuardOutsidePending(format_guard(guard, self.alphabet), self.alphabet.format_subset(pending))

    def compile(self, prog: WhileProgram, pending: Subset) -> CompileResult:
        """Compile ``prog`` with ``pending`` tests still to read; the result carries the pending set after it."""
        pending = frozenset(pending)
        result = self._compile(prog, pending)
        expected = ExprType(pending, result.out_pending)
        if expected not in self.checker.infer_types(result.expr):
            raise InternalInvariantViolation(
                f"compiled expression {pretty(result.expr)} does not have type {expected.format(self.alphabet)}"
            )
        logger.info("compiled to %s at %s", pretty(result.expr), expected.format(self.alphabet))
        return result

    def _compile(self, prog: WhileProgram, pending: Subset) -> CompileResult:
        if isinstance(prog, Skip):
            return CompileResult(ONE, pending)
        if isinstance(prog, Abort):
            return CompileResult(ZERO, pending)
        if isinstance(prog, Prim):
            return CompileResult(_product(self.pad(pending), Prog(prog.name)), self.alphabet.full)
        if isinstance(prog, Seq):
            first = self._compile(prog.first, pending)
            second = self._compile(prog.second, first.out_pending)
            return CompileResult(_product(first.expr, second.expr), second.out_pending)
        if isinstance(prog, If):
            return self._compile_if(prog, pending)
        if isinstance(prog, While):
            return self._compile_while(prog, pending)
        raise InternalInvariantViolation(f"unknown program node {prog!r}")

    def _compile_if(self, prog: If, pending: Subset) -> CompileResult:
        self._check_guard(prog.guard, pending)
        negated = self.negated_guard_expr(prog.guard)
        inner = pending - prog.guard.base
        then = self._compile(prog.then, inner)
        otherwise = self._compile(prog.otherwise, inner)
        out = then.out_pending & otherwise.out_pending
        expr = Sum(
            _product(self.guard_expr(prog.guard), then.expr, self.pad(then.out_pending - out)),
            _product(negated, otherwise.expr, self.pad(otherwise.out_pending - out)),
        )
        return CompileResult(expr, out)

    def _compile_while(self, prog: While, pending: Subset) -> CompileResult:
        self._check_guard(prog.guard, pending)
        negated = self.negated_guard_expr(prog.guard)
        body = self._compile(prog.body, pending - prog.guard.base)
        if not pending <= body.out_pending:
            raise UnproductiveLoopBody(
                format_guard(prog.guard, self.alphabet),
                self.alphabet.format_subset(pending),
                self.alphabet.format_subset(body.out_pending),
            )
        loop = Star(_product(self.guard_expr(prog.guard), body.expr, self.pad(body.out_pending - pending)))
        return CompileResult(Prod(loop, negated), pending - prog.guard.base)


def compile_program(prog: WhileProgram, pending: Subset, alphabet: Alphabet) -> CompileResult:
    return WhileCompiler(alphabet).compile(prog, pending)
