"""Parser for the sequence and function description language.

Sequences::

    const(c)  affine(a,b)  prefix(v1,...,vk);<tail>  periodic(v1,...,vk)
    dec(n)    cex(n)       sum(<s1>,<s2>)            shift(<s>,d)

Functions::

    f2:<expr in i,j>      f3:<expr in i,j,k>

where an expression is built from naturals, the variables, ``+``, ``*``
(or ``·``), ``-`` (truncated subtraction), ``/`` (floor division, x/0 = 0),
``^`` (power) and the calls ``min(a,b)``, ``max(a,b)``, ``monus(a,b)``.
Whitespace is ignored everywhere.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .sequences import (
    VARIABLES, Affine, Cex, Const, Dec, MultiFunction, Periodic, Prefix, Sequence, Shift, Sum,
)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", "*" if m.group(3) == "·" else m.group(3), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def fail(self, expected, message=None):
        kind, value, pos = self.tok
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(message or f"unexpected {found}", pos, expected)

    def accept(self, value):
        if self.tok[0] in ("op", "name") and self.tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            self.fail({value})

    def number(self):
        kind, value, _ = self.tok
        if kind != "num":
            self.fail({"<natural>"})
        self.i += 1
        return value

    def numbers(self):
        values = [self.number()]
        while self.accept(","):
            values.append(self.number())
        return values

    def finish(self):
        if self.tok[0] != "end":
            self.fail({"<end>"})


_SEQ_HEADS = {"const", "affine", "prefix", "periodic", "dec", "cex", "sum", "shift"}


def _sequence(p: _Parser) -> Sequence:
    kind, head, pos = p.tok
    if kind != "name" or head not in _SEQ_HEADS:
        p.fail(_SEQ_HEADS)
    p.i += 1
    p.expect("(")
    if head == "const":
        seq = Const(p.number())
    elif head == "affine":
        a = p.number()
        p.expect(",")
        seq = Affine(a, p.number())
    elif head == "periodic":
        seq = Periodic(p.numbers())
    elif head == "dec":
        seq = Dec(p.number())
    elif head == "cex":
        n = p.number()
        if n < 1:
            raise ParseError("cex(n) needs n >= 1", pos, ())
        seq = Cex(n)
    elif head == "prefix":
        values = p.numbers()
        p.expect(")")
        p.expect(";")
        return Prefix(values, _sequence(p))
    elif head == "sum":
        left = _sequence(p)
        p.expect(",")
        seq = Sum(left, _sequence(p))
    else:
        base = _sequence(p)
        p.expect(",")
        seq = Shift(base, p.number())
    p.expect(")")
    return seq


def parse_sequence(text: str) -> Sequence:
    """Parse a sequence description, e.g. ``"prefix(3,1,4);const(0)"``."""
    p = _Parser(text)
    seq = _sequence(p)
    p.finish()
    return seq


# expression grammar (lowest precedence first):
#   sum   := prod (('+' | '-') prod)*
#   prod  := power (('*' | '/') power)*
#   power := atom ('^' power)?
#   atom  := natural | variable | call '(' sum ',' sum ')' | '(' sum ')'

_CALLS = ("min", "max", "monus")


def _expr(p, arity):
    node = _prod(p, arity)
    while p.tok[0] == "op" and p.tok[1] in "+-":
        op = p.tok[1]
        p.i += 1
        node = (op, node, _prod(p, arity))
    return node


def _prod(p, arity):
    node = _power(p, arity)
    while p.tok[0] == "op" and p.tok[1] in "*/":
        op = p.tok[1]
        p.i += 1
        node = (op, node, _power(p, arity))
    return node


def _power(p, arity):
    node = _atom(p, arity)
    if p.accept("^"):
        node = ("^", node, _power(p, arity))
    return node


def _atom(p, arity):
    kind, value, _ = p.tok
    variables = VARIABLES[:arity]
    if kind == "num":
        p.i += 1
        return ("num", value)
    if kind == "name" and value in variables:
        p.i += 1
        return ("var", variables.index(value))
    if kind == "name" and value in _CALLS:
        p.i += 1
        p.expect("(")
        left = _expr(p, arity)
        p.expect(",")
        right = _expr(p, arity)
        p.expect(")")
        return (value, left, right)
    if p.accept("("):
        node = _expr(p, arity)
        p.expect(")")
        return node
    p.fail({"<natural>", "(", *variables, *_CALLS})


def parse_function(text: str) -> MultiFunction:
    """Parse ``f2:<expr>`` or ``f3:<expr>`` into a :class:`MultiFunction`."""
    p = _Parser(text)
    kind, head, _ = p.tok
    if kind != "name" or head not in ("f2", "f3"):
        p.fail({"f2", "f3"})
    p.i += 1
    p.expect(":")
    arity = int(head[1])
    tree = _expr(p, arity)
    p.finish()
    return MultiFunction.from_expr(arity, tree)


def parse_expr(text: str, arity: int):
    """Parse a bare expression (no ``f2:`` header) into a tree."""
    p = _Parser(text)
    tree = _expr(p, arity)
    p.finish()
    return tree
