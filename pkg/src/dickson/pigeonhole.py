"""Monochromatic runs: 2-colorings of N via DL(1, l), and the finite pigeonhole."""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import dl_1_l
from .sequences import Budget, Coloring, Sequence, Shift, evaluate


@dataclass(frozen=True)
class MonoRun:
    indices: tuple[int, ...]
    color: int
    bound: int = 0
    rounds: tuple = field(default=(), compare=False)

    def to_dict(self):
        return {"kind": "mono_run", "indices": list(self.indices), "color": self.color,
                "bound": self.bound, "rounds": [list(r) for r in self.rounds]}


@dataclass(frozen=True)
class NotAllBelow:
    index: int
    value: int

    def to_dict(self):
        return {"kind": "not_all_below", "index": self.index, "value": self.value}


def ph2_from_dl(chi: Sequence, l: int, budget=None) -> MonoRun:
    """l indices of equal color under a 2-coloring of N.

    Each round runs DL*(1, l) on the coloring from just past the previous
    round's last index.  A round ending in color 0 is all zeros; otherwise
    its last index has color 1, and l such rounds give l indices of color 1.
    """
    if l < 2:
        raise ValueError("l must be at least 2")
    budget = Budget.coerce(budget)
    chi = chi if isinstance(chi, Coloring) else Coloring(chi)
    offset = 0
    tops = []
    rounds = []
    bound = 0
    for _ in range(l):
        good, cert = dl_1_l(Shift(chi, offset), l, budget)
        indices = tuple(offset + x for x in good.indices)
        bound = offset + cert.bound
        rounds.append(indices)
        if evaluate(chi, indices[-1], budget) == 0:
            return MonoRun(indices, 0, bound, tuple(rounds))
        tops.append(indices[-1])
        offset = indices[-1] + 1
    return MonoRun(tuple(tops), 1, bound, tuple(rounds))


def mono_run(a: Sequence, M: int, l: int, budget=None) -> MonoRun | NotAllBelow:
    """Inspect the first K = (l-1)M + 1 terms of ``a``.

    If all lie below M, some value repeats l times: return the first value
    to reach l occurrences.  Otherwise return the first term >= M.
    """
    if M < 0 or l < 1:
        raise ValueError("need M >= 0 and l >= 1")
    budget = Budget.coerce(budget)
    K = (l - 1) * M + 1
    values = []
    for n in range(K):
        v = evaluate(a, n, budget)
        if v >= M:
            return NotAllBelow(n, v)
        values.append(v)
    seen: dict[int, list[int]] = {}
    for n, v in enumerate(values):
        positions = seen.setdefault(v, [])
        positions.append(n)
        if len(positions) == l:
            return MonoRun(tuple(positions), v, K - 1)
    raise AssertionError("pigeonhole failed")  # unreachable: K terms, M values
