"""Tokenizer for ``.acm`` model source."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexError

KEYWORDS = frozenset({"class", "private", "end", "create", "terminate", "if", "else", "switch", "case"})

# Longest match first.
SYMBOLS = (
    "[=]",
    "==", "<=", ">=", "&&", "||",
    "=", "<", ">", "+", "-", "*", "/", "^",
    ";", ",", "(", ")", "[", "]", ".", "'",
)

IDENT = "identifier"
KEYWORD = "keyword"
REAL = "real-literal"
STRING = "string-literal"
SYMBOL = "symbol"
EOF = "eof"

_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        return repr(self.text)


def _is_ident_start(ch: str) -> bool:
    return ch == "_" or ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or ch.isdigit()


def lex(source: str) -> list[Token]:
    """Split ``source`` into tokens. ``//`` comments and whitespace are dropped.

    The returned list never contains an EOF marker; the parser adds its own.
    """
    tokens: list[Token] = []
    i, n = 0, len(source)
    line, col = 1, 1

    def advance(k: int) -> None:
        nonlocal i, line, col
        for ch in source[i:i + k]:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        i += k

    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f":
            advance(1)
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            advance((n if j < 0 else j) - i)
            continue
        start_line, start_col = line, col
        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            text = source[i:j]
            tokens.append(Token(KEYWORD if text in KEYWORDS else IDENT, text, start_line, start_col))
            advance(j - i)
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == ".":
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    while k < n and source[k].isdigit():
                        k += 1
                    j = k
            tokens.append(Token(REAL, source[i:j], start_line, start_col))
            advance(j - i)
            continue
        if ch == '"':
            j = i + 1
            chars: list[str] = []
            while True:
                if j >= n or source[j] == "\n":
                    raise LexError("unterminated string literal", start_line, start_col)
                c = source[j]
                if c == '"':
                    break
                if c == "\\" and j + 1 < n and source[j + 1] in _ESCAPES:
                    chars.append(_ESCAPES[source[j + 1]])
                    j += 2
                    continue
                chars.append(c)
                j += 1
            tokens.append(Token(STRING, "".join(chars), start_line, start_col))
            advance(j + 1 - i)
            continue
        for sym in SYMBOLS:
            if source.startswith(sym, i):
                tokens.append(Token(SYMBOL, sym, start_line, start_col))
                advance(len(sym))
                break
        else:
            raise LexError(f"unexpected character {ch!r}", start_line, start_col)
    return tokens
