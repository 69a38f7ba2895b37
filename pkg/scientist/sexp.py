"""A minimal reader for the fully parenthesized prefix notation used to
store trees.

Symbols are runs of characters other than whitespace and parentheses.
`read` returns nested `SList`/`Symbol` nodes carrying source positions so
that the tree builders in `xft` and `qmat` can report precise errors.
"""
from collections import namedtuple

from .exceptions import ParseError

Symbol = namedtuple("Symbol", "name position")
SList = namedtuple("SList", "items position")

# token kinds
OPEN, CLOSE, SYMBOL, END = "(", ")", "symbol", "end of input"


def tokenize(text):
    """Yield (kind, value, position) tuples, ending with an END token."""
    i = 0
    length = len(text)
    while i < length:
        char = text[i]
        if char.isspace():
            i += 1
        elif char in "()":
            yield char, char, i
            i += 1
        else:
            start = i
            while i < length and not text[i].isspace() and text[i] not in "()":
                i += 1
            yield SYMBOL, text[start:i], start
    yield END, None, length


class _Reader(object):
    def __init__(self, text):
        self.tokens = list(tokenize(text))
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        token = self.tokens[self.index]
        if token[0] != END:
            self.index += 1
        return token

    def read_form(self):
        kind, value, position = self.next()
        if kind == SYMBOL:
            return Symbol(value, position)
        if kind == OPEN:
            items = []
            while self.peek()[0] not in (CLOSE, END):
                items.append(self.read_form())
            kind, _, end_position = self.next()
            if kind != CLOSE:
                raise ParseError("unterminated list", end_position, "')' or operand")
            return SList(tuple(items), position)
        if kind == CLOSE:
            raise ParseError("unexpected ')'", position, "symbol or '('")
        raise ParseError("unexpected end of input", position, "symbol or '('")


def read(text):
    """Read exactly one form from `text`."""
    reader = _Reader(text)
    form = reader.read_form()
    kind, value, position = reader.peek()
    if kind != END:
        raise ParseError("trailing input {!r}".format(value), position, "end of input")
    return form
