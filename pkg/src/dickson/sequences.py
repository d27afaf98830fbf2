"""Total sequences N -> N, functions N^k -> N, and evaluation budgets.

Every concrete sequence is immutable; evaluating one is a pure function of
the index.  Engine calls meter evaluations through a :class:`Budget` so that
a computation whose bound is astronomically large fails with
:class:`~dickson.errors.BudgetExhausted` instead of hanging.
"""

from __future__ import annotations

import operator
from typing import Callable, Sequence as _Seq

from .errors import BudgetExhausted, NotNatural

DEFAULT_BUDGET = 10**7


class Budget:
    """Mutable evaluation counter owned by a single engine call."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int = DEFAULT_BUDGET):
        if limit < 0:
            raise ValueError("budget must be nonnegative")
        self.limit = limit
        self.used = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExhausted(self.limit, self.used)

    @property
    def remaining(self) -> int:
        return max(self.limit - self.used, 0)

    @classmethod
    def coerce(cls, budget: "Budget | int | None") -> "Budget":
        if budget is None:
            return cls()
        if isinstance(budget, Budget):
            return budget
        return cls(int(budget))

    def __repr__(self):
        return f"Budget(limit={self.limit}, used={self.used})"


def _natural(value, where):
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise NotNatural(f"{where} produced {value!r}, not a natural number")
    return value


def _check_index(n):
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"sequence index must be a natural number, got {n!r}")


class Sequence:
    """Base class; subclasses implement ``_at`` and ``describe``."""

    def __call__(self, n: int) -> int:
        if type(n) is not int or n < 0:
            _check_index(n)
        value = self._at(n)
        if type(value) is not int or value < 0:
            _natural(value, self.describe())
        return value

    def _at(self, n: int) -> int:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def shift(self, d: int) -> "Sequence":
        return Shift(self, d)

    def take(self, count: int) -> list[int]:
        return [self(n) for n in range(count)]

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()}>"


class Const(Sequence):
    def __init__(self, c: int):
        self.c = _natural(c, "const")

    def _at(self, n):
        return self.c

    def describe(self):
        return f"const({self.c})"


class Affine(Sequence):
    def __init__(self, a: int, b: int):
        self.a = _natural(a, "affine")
        self.b = _natural(b, "affine")

    def _at(self, n):
        return self.a * n + self.b

    def describe(self):
        return f"affine({self.a},{self.b})"


class Prefix(Sequence):
    """Finite explicit prefix followed by ``tail`` (the tail restarts at 0)."""

    def __init__(self, values: _Seq[int], tail: Sequence):
        self.values = tuple(_natural(v, "prefix") for v in values)
        self.tail = tail

    def _at(self, n):
        if n < len(self.values):
            return self.values[n]
        return self.tail(n - len(self.values))

    def describe(self):
        body = ",".join(map(str, self.values))
        return f"prefix({body});{self.tail.describe()}"


class Periodic(Sequence):
    def __init__(self, values: _Seq[int]):
        if not values:
            raise ValueError("periodic needs at least one value")
        self.values = tuple(_natural(v, "periodic") for v in values)

    def _at(self, n):
        return self.values[n % len(self.values)]

    def describe(self):
        return "periodic(" + ",".join(map(str, self.values)) + ")"


class Dec(Sequence):
    """n, n-1, ..., 1, 0, 0, ..."""

    def __init__(self, n: int):
        self.n = _natural(n, "dec")

    def _at(self, t):
        return self.n - t if t < self.n else 0

    def describe(self):
        return f"dec({self.n})"


class Cex(Sequence):
    """Member n >= 1 of the family (n, n-1, ..., 1, n+1, n+2, ...).

    No single pair of indices is good for every member of this family.
    """

    def __init__(self, n: int):
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValueError("cex(n) needs n >= 1")
        self.n = n

    def _at(self, t):
        return self.n - t if t < self.n else t + 1

    def describe(self):
        return f"cex({self.n})"


class Sum(Sequence):
    def __init__(self, left: Sequence, right: Sequence):
        self.left = left
        self.right = right

    def _at(self, n):
        return self.left(n) + self.right(n)

    def describe(self):
        return f"sum({self.left.describe()},{self.right.describe()})"


class Shift(Sequence):
    """Zero-copy tail view: ``Shift(s, d)(n) == s(n + d)``."""

    def __new__(cls, base: Sequence, offset: int):
        if isinstance(base, Shift):
            offset = offset + base.offset
            base = base.base
        self = super().__new__(cls)
        self.base = base
        self.offset = offset
        return self

    def __init__(self, base, offset):
        _check_index(self.offset)

    def _at(self, n):
        return self.base(n + self.offset)

    def describe(self):
        return f"shift({self.base.describe()},{self.offset})"


class Rule(Sequence):
    """Black-box sequence given by a Python callable, memoized per instance.

    Totality of ``fn`` cannot be checked; a rule that loops forever will hang
    the caller regardless of the budget.
    """

    def __init__(self, fn: Callable[[int], int], name: str = "rule"):
        self.fn = fn
        self.name = name
        self._memo: dict[int, int] = {}

    def _at(self, n):
        try:
            return self._memo[n]
        except KeyError:
            value = self._memo[n] = _natural(self.fn(n), self.name)
            return value

    def describe(self):
        return f"<{self.name}>"


class Coloring(Sequence):
    """A 2-coloring of N, i.e. a sequence with values in {0, 1}."""

    def __init__(self, base: Sequence):
        self.base = base

    def _at(self, n):
        value = self.base(n)
        if value not in (0, 1):
            raise NotNatural(f"coloring {self.base.describe()} gave color {value} at {n}")
        return value

    def describe(self):
        return self.base.describe()


def evaluate(seq: Sequence, n: int, budget: Budget | None = None) -> int:
    """Evaluate ``seq`` at ``n``, charging one unit to ``budget``."""
    if budget is not None:
        budget.spend()
    return seq(n)


# -- functions N^k -> N ------------------------------------------------------

VARIABLES = ("i", "j", "k")


def monus(a: int, b: int) -> int:
    """Truncated subtraction on naturals."""
    return a - b if a > b else 0


def _floordiv(a, b):
    return a // b if b else 0


_BINARY = {
    "+": operator.add,
    "-": monus,
    "*": operator.mul,
    "/": _floordiv,
    "^": operator.pow,
    "min": min,
    "max": max,
    "monus": monus,
}


def compile_expr(node) -> Callable[[tuple], int]:
    """Turn an expression tree from :mod:`dickson.dsl` into a closure."""
    tag = node[0]
    if tag == "num":
        value = node[1]
        return lambda args: value
    if tag == "var":
        index = node[1]
        return lambda args: args[index]
    op = _BINARY[tag]
    left = compile_expr(node[1])
    right = compile_expr(node[2])
    return lambda args: op(left(args), right(args))


def render_expr(node) -> str:
    tag = node[0]
    if tag == "num":
        return str(node[1])
    if tag == "var":
        return VARIABLES[node[1]]
    if tag in ("min", "max", "monus"):
        return f"{tag}({render_expr(node[1])},{render_expr(node[2])})"
    return f"({render_expr(node[1])}{tag}{render_expr(node[2])})"


class MultiFunction:
    """Total function N^arity -> N (arity 2 or 3)."""

    def __init__(self, arity: int, fn: Callable[..., int], text: str | None = None):
        if arity not in (2, 3):
            raise ValueError("arity must be 2 or 3")
        self.arity = arity
        self.fn = fn
        self.text = text

    @classmethod
    def from_expr(cls, arity, tree):
        compiled = compile_expr(tree)
        return cls(arity, lambda *args: compiled(args), f"f{arity}:{render_expr(tree)}")

    def __call__(self, *point: int) -> int:
        if len(point) != self.arity:
            raise TypeError(f"expected {self.arity} arguments, got {len(point)}")
        for x in point:
            _check_index(x)
        return _natural(self.fn(*point), self.describe())

    def at(self, point, budget: Budget | None = None) -> int:
        if budget is not None:
            budget.spend()
        return self(*point)

    def describe(self) -> str:
        return self.text or f"<f{self.arity}>"

    def __repr__(self):
        return f"<MultiFunction {self.describe()}>"
