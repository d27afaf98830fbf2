"""Witness and bound extraction for the finite cases of Dickson's lemma.

Each proof step is a generator.  It yields ``(sequence, index)`` to evaluate
a point and yields another generator to run a sub-step.  :func:`_drive`
executes the steps on an explicit stack, so an astronomically long
repetition ends in :class:`~dickson.errors.BudgetExhausted` rather than in
Python's recursion limit.

The repetition schemes:

* ``(1, 2)``: first non-descent; bound ``alpha(0) + 1``.
* ``(1, l)``: run ``(1, l-1)`` on ``N = alpha(i^(1)) + 2`` consecutive tails,
  pick a non-descent among the blocks' first indices, splice.
* ``(k, 2)``, k >= 2 (vertical): run ``(k-1, L)`` on tails of the first k-1
  sequences, where ``L`` is 3 and then one more than the last sequence's
  value at the previous block's first index; stop when that value drops
  (a pair inside the block), otherwise find a ``(k-1, 2)`` pair among the
  first indices, along which the last sequence already weakly increases.
* ``(k, l)``, k >= 2, l >= 3 (horizontal): run ``(k, 2)`` on tails, then
  ``(k, l-1)`` on the sequences restricted to the pairs' first components,
  and close with the second component of the last chosen pair.

Blocks at cumulative offsets ``M_1 + ... + M_j`` are disjoint up to their
shared endpoints, so all indices strictly increase.  Repetition is never cut
short: a derived sequence is harvested up to the inner step's bound, so the
certificate's bound is the one the proof defines, not merely the last index
the search happened to read.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .certificate import BoundCertificate, GoodSet, first_ascent
from .errors import InternalError
from .sequences import Budget, Sequence, Shift


class _Lazy(Sequence):
    """Engine-internal sequence whose values come from running proof steps."""

    def __init__(self):
        self.memo: dict[int, int] = {}

    def _at(self, n):
        raise TypeError("derived sequences are evaluated by the engine only")

    def produce(self, n):
        raise NotImplementedError


class _Drop(Exception):
    def __init__(self, owner, round_index):
        self.owner = owner
        self.round_index = round_index


def _drive(root, budget: Budget, probe: list):
    stack = [root]
    value = None
    error = None
    spend = budget.spend
    while True:
        gen = stack[-1]
        try:
            if error is not None:
                exc, error = error, None
                req = gen.throw(exc)
            else:
                req = gen.send(value)
        except StopIteration as stop:
            stack.pop()
            value = stop.value
            if not stack:
                return value
            continue
        except _Drop as drop:
            stack.pop()
            if not stack:
                raise InternalError("unhandled drop signal") from drop
            error = drop
            continue
        if type(req) is tuple:
            seq, n = req
            if type(seq) is Shift:
                n += seq.offset
                seq = seq.base
            if isinstance(seq, _Lazy):
                if n in seq.memo:
                    spend()
                    value = seq.memo[n]
                else:
                    stack.append(seq.produce(n))
                    value = None
            else:
                spend()
                if n > probe[0]:
                    probe[0] = n
                value = seq(n)
        else:
            stack.append(req)
            value = None


def _tail(view, offset):
    if offset == 0:
        return view
    return tuple(Shift(s, offset) for s in view)


def _dl(view, l):
    k = len(view)
    if k == 1:
        return _dl_1_2(view) if l == 2 else _dl_1_l(view, l)
    return _vertical(view) if l == 2 else _horizontal(view, l)


def _dl_1_2(view):
    seq = view[0]
    first = yield (seq, 0)
    prev, i = first, 0
    while True:
        nxt = yield (seq, i + 1)
        if prev <= nxt:
            break
        prev, i = nxt, i + 1
    if i > first:
        raise InternalError(f"non-descent at {i} beyond alpha(0) = {first}")
    return {
        "kind": "dl_1_2", "k": 1, "l": 2, "indices": [i, i + 1], "bound": first + 1,
        "trace": [
            {"sym": "alpha(0)", "val": first},
            {"sym": "i", "val": i},
            {"sym": "M", "val": first + 1},
        ],
    }


def _block_entries(blocks):
    return [
        {"sym": "M_j", "j": j, "offset": b["offset"], "val": b["node"]["bound"], "cert": b["node"]}
        for j, b in enumerate(blocks, 1)
    ]


def _dl_1_l(view, l):
    seq = view[0]
    blocks = []
    offset = 0
    n_rounds = None
    while n_rounds is None or len(blocks) < n_rounds:
        node = yield _dl(_tail(view, offset), l - 1)
        blocks.append({"offset": offset, "node": node, "first": offset + node["indices"][0]})
        if n_rounds is None:
            n_rounds = (yield (seq, blocks[0]["first"])) + 2
        offset += node["bound"]
    values = []
    for b in blocks:
        values.append((yield (seq, b["first"])))
    s = first_ascent(values)
    if s + 1 >= len(blocks):
        raise InternalError("no ascent among the block heads")
    nxt = blocks[s + 1]
    indices = [blocks[s]["first"]] + [nxt["offset"] + x for x in nxt["node"]["indices"]]
    trace = [{"sym": "i^(1)", "val": blocks[0]["first"]}, {"sym": "N", "val": n_rounds}]
    trace += _block_entries(blocks)
    trace += [{"sym": "k", "val": s + 1}, {"sym": "M", "val": offset}]
    return {"kind": "dl_1_l", "k": 1, "l": l, "indices": indices, "bound": offset, "trace": trace}


class _Harvest:
    """Successive applications of a sub-step on tails at cumulative offsets.

    In vertical mode the last sequence steers the length of the next round
    and a drop in its value raises :class:`_Drop`.
    """

    def __init__(self, view, vertical):
        self.vertical = vertical
        self.base = view[:-1] if vertical else view
        self.steer = view[-1] if vertical else None
        self.blocks = []
        self.offset = 0

    def ensure(self, n):
        while len(self.blocks) <= n:
            if self.vertical:
                length = 3 if not self.blocks else self.blocks[-1]["steer"] + 1
            else:
                length = 2
            node = yield _dl(_tail(self.base, self.offset), length)
            block = {
                "offset": self.offset, "len": length, "node": node,
                "first": self.offset + node["indices"][0],
                "second": self.offset + node["indices"][1],
            }
            self.blocks.append(block)
            self.offset += node["bound"]
            if self.vertical:
                block["steer"] = yield (self.steer, block["first"])
                if block["steer"] + 2 <= length:
                    raise _Drop(self, len(self.blocks) - 1)


class _Heads(_Lazy):
    """Values of one sequence at the first indices of harvested blocks."""

    def __init__(self, harvest, seq):
        super().__init__()
        self.harvest = harvest
        self.seq = seq

    def produce(self, n):
        yield self.harvest.ensure(n)
        value = yield (self.seq, self.harvest.blocks[n]["first"])
        self.memo[n] = value
        return value

    def describe(self):
        return f"heads({self.seq.describe()})"


def _vertical(view):
    k = len(view)
    harvest = _Harvest(view, vertical=True)
    heads = tuple(_Heads(harvest, s) for s in harvest.base)
    inner = drop_at = None
    try:
        inner = yield _dl(heads, 2)
        yield harvest.ensure(inner["bound"])
    except _Drop as drop:
        if drop.owner is not harvest:
            raise
        drop_at = drop.round_index
    blocks = harvest.blocks
    trace = [
        {"sym": "M_j", "j": j, "offset": b["offset"], "len": b["len"], "steer": b["steer"],
         "val": b["node"]["bound"], "cert": b["node"]}
        for j, b in enumerate(blocks, 1)
    ]
    if k == 2:
        trace.append({"sym": "N", "val": (yield (view[0], blocks[0]["first"])) + 2})
    if drop_at is not None:
        last = blocks[drop_at]
        block = [last["offset"] + x for x in last["node"]["indices"]]
        steer_values = []
        for x in block:
            steer_values.append((yield (harvest.steer, x)))
        t = first_ascent(steer_values)
        if t + 1 >= len(block):
            raise InternalError("drop did not force a pair inside the block")
        indices = [block[t], block[t + 1]]
        trace.append({"sym": "drop", "j": drop_at + 1, "t": t})
    else:
        if len(blocks) != inner["bound"] + 1:
            raise InternalError("inner step read past its own bound")
        indices = [blocks[t]["first"] for t in inner["indices"]]
        trace.append({"sym": "inner", "cert": inner})
        if k > 2:
            trace.append({"sym": "N", "val": inner["bound"] + 1})
    trace += [{"sym": "K", "val": len(blocks)}, {"sym": "M", "val": harvest.offset}]
    return {"kind": "dl_k_2", "k": k, "l": 2, "indices": indices, "bound": harvest.offset, "trace": trace}


def _horizontal(view, l):
    k = len(view)
    harvest = _Harvest(view, vertical=False)
    heads = tuple(_Heads(harvest, s) for s in view)
    inner = yield _dl(heads, l - 1)
    yield harvest.ensure(inner["bound"])
    blocks = harvest.blocks
    if len(blocks) != inner["bound"] + 1:
        raise InternalError("inner step read past its own bound")
    picks = inner["indices"]
    indices = [blocks[t]["first"] for t in picks] + [blocks[picks[-1]]["second"]]
    trace = _block_entries(blocks)
    trace += [
        {"sym": "inner", "cert": inner},
        {"sym": "K", "val": len(blocks)},
        {"sym": "M", "val": harvest.offset},
    ]
    return {"kind": "dl_k_l", "k": k, "l": l, "indices": indices, "bound": harvest.offset, "trace": trace}


class _WindowSum(_Lazy):
    """m -> a(m) + a(m+1) + ... + a(m+n-1)."""

    def __init__(self, seq, n):
        super().__init__()
        self.seq = seq
        self.n = n

    def produce(self, m):
        total = 0
        for j in range(self.n):
            total += yield (self.seq, m + j)
        self.memo[m] = total
        return total

    def describe(self):
        return f"window({self.seq.describe()},{self.n})"


def _gap_pair(seq, n):
    beta = _WindowSum(seq, n)
    node = yield _dl_1_2((beta,))
    i = node["indices"][0]
    beta0 = node["trace"][0]["val"]
    return {
        "kind": "gap_pair", "k": 1, "l": 2, "indices": [i, i + n], "bound": beta0,
        "trace": [
            {"sym": "n", "val": n},
            {"sym": "beta(0)", "val": beta0},
            {"sym": "i", "val": i},
            {"sym": "beta", "cert": node},
            {"sym": "M", "val": beta0},
        ],
    }


# -- public API --------------------------------------------------------------

def _execute(gen, budget):
    budget = Budget.coerce(budget)
    probe = [0]
    start = budget.used
    node = _drive(gen, budget, probe)
    meta = {"budget": budget.limit, "evals": budget.used - start}
    return BoundCertificate.from_node(node, probe[0], meta)


def _validated(seqs, l):
    seqs = tuple(seqs)
    if not seqs:
        raise ValueError("need at least one sequence")
    if l < 2:
        raise ValueError("witness length l must be at least 2")
    return seqs


def dl_k_l(seqs: Iterable[Sequence], l: int, budget=None) -> tuple[GoodSet, BoundCertificate]:
    """Indices i_1 < ... < i_l <= bound on which every sequence weakly increases."""
    view = _validated(seqs, l)
    cert = _execute(_dl(view, l), budget)
    return GoodSet(cert.indices, len(view)), cert


def dl_1_2(a: Sequence, budget=None) -> tuple[GoodSet, BoundCertificate]:
    """Least i with a(i) <= a(i+1); always i < a(0) + 1, the bound."""
    return dl_k_l([a], 2, budget)


def dl_1_l(a: Sequence, l: int, budget=None):
    return dl_k_l([a], l, budget)


def dl_2_2(a: Sequence, b: Sequence, budget=None):
    return dl_k_l([a, b], 2, budget)


def dl_2_l(a: Sequence, b: Sequence, l: int, budget=None):
    return dl_k_l([a, b], l, budget)


@dataclass(frozen=True)
class GapPair:
    i: int
    n: int
    bound: int
    certificate: BoundCertificate


def gap_pair(a: Sequence, n: int, budget=None) -> GapPair:
    """Index i <= a(0) + ... + a(n-1) with a(i) <= a(i+n).

    Found as the first non-descent of the window sums of width n, whose
    ascents are exactly the distance-n good pairs of ``a``.
    """
    if n < 1:
        raise ValueError("distance n must be positive")
    cert = _execute(_gap_pair(a, n), budget)
    return GapPair(cert.indices[0], n, cert.bound, cert)
