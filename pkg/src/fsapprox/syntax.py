"""Tokenizer shared by the CFG and APSG readers.

Both notations use the same lexical layer: lowercase category names,
capitalized variables, backquoted terminals, ``%`` line comments and a
small set of punctuation marks.
"""

import re
from dataclasses import dataclass

from .errors import GrammarSyntaxError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<arrow>=>)
  | (?P<terminal>`[^\s,.|%()\[\]#=`!]+)
  | (?P<name>[a-z][A-Za-z0-9_]*(?:\#[A-Za-z0-9_]+=[A-Za-z0-9_]+)*'*)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<value>[0-9][A-Za-z0-9_]*)
  | (?P<punct>[#\[\](),.|=!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "var", "value", "terminal", "arrow", "punct" or "eof"
    text: str
    line: int
    column: int

    def describe(self):
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise GrammarSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            body = m.group()
            if kind == "terminal":
                body = body[1:]
            tokens.append(Token(kind, body, line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    """Cursor over a token list with the usual peek/expect helpers."""

    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self, offset=0):
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, kind, text=None):
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def accept(self, kind, text=None):
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind, text=None, what=None):
        tok = self.peek()
        if tok.kind == kind and (text is None or tok.text == text):
            return self.next()
        wanted = what or (repr(text) if text else kind)
        raise self.error(f"expected {wanted}, found {tok.describe()}", tok)

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return GrammarSyntaxError(message, tok.line, tok.column)
