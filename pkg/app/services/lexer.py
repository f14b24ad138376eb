import re
from dataclasses import dataclass
from typing import List, Sequence

from app.core.errors import KatSyntaxError


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


_TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("SPACE", r"\s+"),
    ("ARROW", r"->"),
    ("NUMBER", r"[0-9]+"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("PUNCT", r"[~()\[\]{}+.*;,&]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


def tokenize(text: str) -> List[Token]:
    """Split expression, type and program text; comments run from '#' to end of line."""
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if not match:
            raise KatSyntaxError(f"unexpected character '{text[position]}'", position)
        kind = match.lastgroup
        if kind not in ("COMMENT", "SPACE"):
            value = match.group()
            tokens.append(Token(value if kind in ("PUNCT", "ARROW") else kind, value, position))
        position = match.end()
    tokens.append(Token("EOF", "", len(text)))
    return tokens


class TokenStream:
    """Cursor over a token list shared by the expression and program parsers."""

    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def at(self, *kinds: str) -> bool:
        return self.current.kind in kinds

    def at_keyword(self, word: str) -> bool:
        return self.current.kind == "IDENT" and self.current.text == word

    def advance(self) -> Token:
        token = self.current
        if token.kind != "EOF":
            self.index += 1
        return token

    def expect(self, kind: str) -> Token:
        if self.current.kind != kind:
            found = self.current.text or "end of input"
            raise KatSyntaxError(f"expected '{kind}' but found '{found}'", self.current.position)
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            found = self.current.text or "end of input"
            raise KatSyntaxError(f"expected '{word}' but found '{found}'", self.current.position)
        return self.advance()

    def expect_end(self) -> None:
        if not self.at("EOF"):
            raise KatSyntaxError(f"unexpected '{self.current.text}'", self.current.position)
