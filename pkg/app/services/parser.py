"""
Parser for mixed expressions and types.

    sum     := product ('+' sum)?
    product := postfix ('.'? product)?
    postfix := atom '*'*
    atom    := '0' | '1' | IDENT | '~' IDENT | '(' sum ')' | '[' IDENT ']'

Sums and products nest to the right. ``[b]`` expands to ``(b + ~b)``.
Nothing is simplified while parsing.
"""

import logging

from app.core.errors import KatSyntaxError, UnknownIdentifier
from app.models.expressions import ONE, ZERO, Lit, MixedExpr, Prod, Prog, Star, Sum
from app.models.strings import Alphabet, ExprType, Literal, Subset
from app.services.lexer import TokenStream, tokenize

logger = logging.getLogger(__name__)

_ATOM_START = ("NUMBER", "IDENT", "~", "(", "[")


class ExpressionParser:
    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet

    def parse(self, text: str) -> MixedExpr:
        stream = TokenStream(tokenize(text))
        if stream.at("EOF"):
            raise KatSyntaxError("empty expression", 0)
        expr = self._sum(stream)
        stream.expect_end()
        return expr

    def _sum(self, stream: TokenStream) -> MixedExpr:
        left = self._product(stream)
        if stream.at("+"):
            stream.advance()
            return Sum(left, self._sum(stream))
        return left

    def _product(self, stream: TokenStream) -> MixedExpr:
        left = self._postfix(stream)
        if stream.at("."):
            stream.advance()
            return Prod(left, self._product(stream))
        if stream.at(*_ATOM_START):
            return Prod(left, self._product(stream))
        return left

    def _postfix(self, stream: TokenStream) -> MixedExpr:
        expr = self._atom(stream)
        while stream.at("*"):
            stream.advance()
            expr = Star(expr)
        return expr

    def _atom(self, stream: TokenStream) -> MixedExpr:
        token = stream.current
        if token.kind == "NUMBER":
            stream.advance()
            if token.text == "0":
                return ZERO
            if token.text == "1":
                return ONE
            raise KatSyntaxError(f"only 0 and 1 are constants, found '{token.text}'", token.position)
        if token.kind == "IDENT":
            stream.advance()
            if self.alphabet.is_program(token.text):
                return Prog(token.text)
            if self.alphabet.is_test(token.text):
                return Lit(Literal(token.text, True))
            raise UnknownIdentifier(token.text, token.position)
        if token.kind == "~":
            stream.advance()
            return Lit(Literal(self._test_name(stream), False))
        if token.kind == "(":
            stream.advance()
            expr = self._sum(stream)
            stream.expect(")")
            return expr
        if token.kind == "[":
            stream.advance()
            name = self._test_name(stream)
            stream.expect("]")
            return Sum(Lit(Literal(name, True)), Lit(Literal(name, False)))
        found = token.text or "end of input"
        raise KatSyntaxError(f"unexpected '{found}'", token.position)

    def _test_name(self, stream: TokenStream) -> str:
        token = stream.expect("IDENT")
        if not self.alphabet.is_test(token.text):
            raise UnknownIdentifier(token.text, token.position)
        return token.text


def parse(text: str, alphabet: Alphabet) -> MixedExpr:
    return ExpressionParser(alphabet).parse(text)


def _subset(stream: TokenStream, alphabet: Alphabet) -> Subset:
    stream.expect("{")
    names = []
    while not stream.at("}"):
        token = stream.expect("IDENT")
        if not alphabet.is_test(token.text):
            raise UnknownIdentifier(token.text, token.position)
        names.append(token.text)
        if not stream.at("}"):
            stream.expect(",")
    stream.expect("}")
    return frozenset(names)


def parse_type(text: str, alphabet: Alphabet) -> ExprType:
    """Read ``{b,c} -> {}``."""
    stream = TokenStream(tokenize(text))
    source = _subset(stream, alphabet)
    stream.expect("->")
    target = _subset(stream, alphabet)
    stream.expect_end()
    return ExprType(source, target)
