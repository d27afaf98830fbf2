"""Brute-force oracles used to cross-check the engine.

Nothing here relies on the engine's proof steps: witnesses are found by
direct search over a finite horizon, so agreement between the two is
meaningful evidence that the extracted bounds are sound.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .certificate import GoodSet
from .dsl import parse_sequence
from .engine import dl_k_l, gap_pair
from .errors import HorizonTooLarge
from .sequences import Budget, Cex, Const, Dec, Prefix, Sequence, evaluate

DEFAULT_WORK_CAP = 10**6


@dataclass(frozen=True)
class OracleReport:
    minimal_witness: GoodSet | None
    horizon: int
    extracted_bound: int | None = None
    evals: int = 0

    @property
    def minimal_last_index(self) -> int | None:
        return None if self.minimal_witness is None else self.minimal_witness.indices[-1]

    @property
    def tight(self) -> bool:
        return self.minimal_last_index is not None and self.minimal_last_index == self.extracted_bound

    def to_dict(self):
        w = self.minimal_witness
        return {
            "kind": "oracle",
            "minimal_witness": None if w is None else list(w.indices),
            "horizon": self.horizon,
            "extracted_bound": self.extracted_bound,
            "tight": self.tight,
            "evals": self.evals,
        }


def _check_work(horizon, l, work_cap):
    candidates = math.comb(horizon + 1, l)
    if candidates > work_cap:
        raise HorizonTooLarge(horizon, l, candidates, work_cap)


def _table(seqs, horizon, budget):
    return [tuple(evaluate(s, n, budget) for s in seqs) for n in range(horizon + 1)]


def _le(u, v):
    return all(x <= y for x, y in zip(u, v))


def minimal_good_set(seqs, l: int, horizon: int, extracted_bound: int | None = None,
                     work_cap: int = DEFAULT_WORK_CAP, budget=None) -> OracleReport:
    """Good set with the least possible last index <= horizon, or None.

    Among the good sets ending at that index the lexicographically least one
    is returned.  A horizon below l - 1 simply admits no witness.
    """
    seqs = tuple(seqs)
    if l < 1:
        raise ValueError("l must be positive")
    _check_work(horizon, l, work_cap)
    budget = Budget.coerce(budget)
    start = budget.used
    rows = _table(seqs, horizon, budget)
    # longest[e]: length of the longest good chain ending at e
    longest = []
    for e, v in enumerate(rows):
        longest.append(1 + max((longest[x] for x in range(e) if _le(rows[x], v)), default=0))
    end = next((e for e, n in enumerate(longest) if n >= l), None)
    witness = None
    if end is not None:
        # reach[x]: longest good chain from x that finishes exactly at end
        reach = [0] * (end + 1)
        reach[end] = 1
        for x in range(end - 1, -1, -1):
            best = max((reach[y] for y in range(x + 1, end + 1) if reach[y] and _le(rows[x], rows[y])),
                       default=0)
            reach[x] = best + 1 if best else 0
        chosen = []
        for need in range(l, 0, -1):
            lo = chosen[-1] + 1 if chosen else 0
            if need == 1:
                chosen.append(end)
                break
            chosen.append(next(
                y for y in range(lo, end)
                if reach[y] >= need and (not chosen or _le(rows[chosen[-1]], rows[y]))
            ))
        witness = GoodSet(tuple(chosen), len(seqs))
    return OracleReport(witness, horizon, extracted_bound, budget.used - start)


def minimal_good_set_exhaustive(seqs, l: int, horizon: int, work_cap: int = DEFAULT_WORK_CAP,
                                budget=None) -> GoodSet | None:
    """Same answer as :func:`minimal_good_set` by plain enumeration of l-subsets."""
    seqs = tuple(seqs)
    _check_work(horizon, l, work_cap)
    rows = _table(seqs, horizon, Budget.coerce(budget))
    best = None
    for combo in itertools.combinations(range(horizon + 1), l):
        if all(_le(rows[a], rows[b]) for a, b in zip(combo, combo[1:])):
            if best is None or (combo[-1], combo) < (best[-1], best):
                best = combo
    return None if best is None else GoodSet(best, len(seqs))


def minimal_gap_index(a: Sequence, n: int, horizon: int, budget=None) -> int | None:
    """Least i <= horizon with a(i) <= a(i + n)."""
    budget = Budget.coerce(budget)
    for i in range(horizon + 1):
        if evaluate(a, i, budget) <= evaluate(a, i + n, budget):
            return i
    return None


# -- the counterexample family ------------------------------------------------

@dataclass(frozen=True)
class FamilyVerdict:
    n_max: int
    pairs_checked: int
    pairs_refuted: int
    first_failure: tuple[int, int] | None

    @property
    def ok(self) -> bool:
        return self.first_failure is None and self.pairs_refuted == self.pairs_checked

    def to_dict(self):
        return {
            "kind": "counterexample_family",
            "n_max": self.n_max,
            "pairs_checked": self.pairs_checked,
            "pairs_refuted": self.pairs_refuted,
            "first_failure": None if self.first_failure is None else list(self.first_failure),
            "verdict": "refuted all pairs" if self.ok else "family check failed",
        }


def counterexample_family_check(n_max: int) -> FamilyVerdict:
    """Confirm no pair i < j <= n_max is good for member j + 1 of the family."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    checked = refuted = 0
    failure = None
    for j in range(1, n_max + 1):
        member = Cex(j + 1)
        for i in range(j):
            checked += 1
            if member(i) > 1 and member(j) == 1:
                refuted += 1
            elif failure is None:
                failure = (i, j)
    return FamilyVerdict(n_max, checked, refuted, failure)


# -- tightness tables ------------------------------------------------------------

CSV_HEADER = ("family", "param", "l", "extracted_bound", "minimal_last_index", "tight", "evals")

_NAMED = {
    "dec": Dec,
    "const": Const,
    "step": lambda n: Prefix([1] + [0] * n, Const(0)),
}


def family_member(family: str, param: int) -> list[Sequence]:
    """Sequences of one family member.

    ``family`` is a named family (dec, const, step) or a DSL template in
    which ``{n}`` stands for the parameter; ``|`` separates several sequences.
    """
    if family in _NAMED:
        return [_NAMED[family](param)]
    if "{n}" not in family:
        raise ValueError(f"unknown family {family!r}: use dec, const, step or a template with {{n}}")
    return [parse_sequence(part.replace("{n}", str(param))) for part in family.split("|")]


@dataclass(frozen=True)
class TightnessRow:
    family: str
    param: int
    l: int
    extracted_bound: int
    minimal_last_index: int | None
    evals: int
    horizon: int
    truncated: bool

    @property
    def tight(self) -> bool:
        return self.minimal_last_index == self.extracted_bound

    def csv_fields(self):
        return (self.family, self.param, self.l, self.extracted_bound,
                "" if self.minimal_last_index is None else self.minimal_last_index,
                "true" if self.tight else "false", self.evals)


def _shrink(horizon, l, work_cap):
    while horizon >= 0 and math.comb(horizon + 1, l) > work_cap:
        horizon -= 1
    return horizon


def _tightness_point(args):
    family, param, l, op, budget_limit, work_cap = args
    budget = Budget(budget_limit)
    seqs = family_member(family, param)
    if op == "gap":
        result = gap_pair(seqs[0], param, budget)
        bound = result.bound
        minimal = minimal_gap_index(seqs[0], param, bound, budget)
        return TightnessRow(family, param, l, bound, minimal, budget.used, bound, False)
    _, cert = dl_k_l(seqs, l, budget)
    horizon = _shrink(cert.bound, l, work_cap)
    report = minimal_good_set(seqs, l, horizon, cert.bound, work_cap, budget)
    return TightnessRow(family, param, l, cert.bound, report.minimal_last_index, budget.used,
                        horizon, horizon < cert.bound)


def tightness_experiment(family: str, params, l: int = 2, op: str = "witness", jobs: int = 1,
                         budget: int = 10**6, work_cap: int = DEFAULT_WORK_CAP) -> list[TightnessRow]:
    """One row per parameter: extracted bound against the oracle's minimum.

    ``op="witness"`` compares the DL*(k, l) bound with the least last index of
    any good set; ``op="gap"`` compares the distance-``param`` gap bound with
    the least good i.  When the oracle's horizon has to be cut to respect the
    work cap the row is marked ``truncated``.  Rows come back in parameter
    order whatever ``jobs`` is.
    """
    if op not in ("witness", "gap"):
        raise ValueError("op must be 'witness' or 'gap'")
    tasks = [(family, p, l, op, budget, work_cap) for p in params]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_tightness_point, tasks))
    return [_tightness_point(t) for t in tasks]


def rows_to_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
    return out.getvalue()
