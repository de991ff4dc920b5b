from __future__ import annotations

import enum
import re
from typing import NamedTuple

from ..errors import LexError

KEYWORDS = frozenset({"metaclass", "metapackage", "extends", "isabstract", "end", "entity"})
SYMBOLS = frozenset("()[]:;*=")


class Kind(enum.Enum):
    AT_NAME = "AtName"
    NAME = "Name"
    SYMBOL = "Symbol"
    KEYWORD = "Keyword"


class Token(NamedTuple):
    kind: Kind
    lexeme: str
    span: tuple[int, int]

    def __repr__(self):
        return f"{self.kind.value}({self.lexeme!r})@{self.span[0]}:{self.span[1]}"


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def tokenize(text: str) -> list[Token]:
    """Split source text into tokens; ``//`` starts a comment running to end of line."""
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line, col = line + 1, 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        span = (line, col)
        if ch == "@":
            m = _IDENT.match(text, i + 1)
            if not m:
                raise LexError("'@' must be followed by a name", span)
            tokens.append(Token(Kind.AT_NAME, m.group(), span))
            col += m.end() - i
            i = m.end()
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            kind = Kind.KEYWORD if word in KEYWORDS else Kind.NAME
            tokens.append(Token(kind, word, span))
            col += m.end() - i
            i = m.end()
            continue
        if ch in SYMBOLS:
            tokens.append(Token(Kind.SYMBOL, ch, span))
            i += 1
            col += 1
            continue
        raise LexError(f"unexpected character {ch!r}", span)
    return tokens
