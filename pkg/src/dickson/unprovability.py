"""Constructive witnesses that no single linearization of the product order works.

Given candidate functions f : N^2 -> N (or a pair f1, f2 : N^3 -> N), the
constructors below return points on which the candidates weakly increase
although no earlier point lies below a later one in the product order.
Every constructor re-checks its output by evaluating the candidates afresh
and raises :class:`~dickson.errors.InternalError` if the check fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .certificate import canonical_json, first_ascent
from .engine import dl_1_2
from .errors import InternalError, RunTooShort
from .pigeonhole import MonoRun, mono_run
from .sequences import Budget, MultiFunction, Sequence, Shift


def below(p, q) -> bool:
    """Product order: p <= q in every coordinate."""
    return all(a <= b for a, b in zip(p, q))


# -- the dichotomy lemma -----------------------------------------------------

@dataclass(frozen=True)
class EqualRun:
    which: str
    indices: tuple[int, ...]
    value: int


@dataclass(frozen=True)
class Crossing:
    """``M <= first(n) <= second(m)``; orientation ``"a<=b"`` or ``"b<=a"``."""

    orientation: str
    n: int
    m: int
    first_value: int
    second_value: int


@dataclass(frozen=True)
class DichotomyResult:
    outcome: EqualRun | Crossing
    bound_B: int
    K: int
    M: int
    rounds: int

    def to_dict(self):
        d = {"kind": "dichotomy", "bound_B": self.bound_B, "K": self.K, "M": self.M,
             "rounds": self.rounds}
        o = self.outcome
        if isinstance(o, EqualRun):
            d["variant"] = {"type": "equal_run", "which": o.which,
                            "indices": list(o.indices), "value": o.value}
        else:
            d["variant"] = {"type": "crossing", "orientation": o.orientation, "n": o.n,
                            "m": o.m, "first_value": o.first_value,
                            "second_value": o.second_value}
        return d


def dichotomy_lemma(a: Sequence, b: Sequence, M: int, l: int, budget=None) -> DichotomyResult:
    """Either l equal values below M in a or in b, or a crossing above M.

    Blocks of K = (l-1)M + 1 terms are inspected in turn.  A block of ``a``
    (checked first) or of ``b`` lying entirely below M yields an equal run.
    Otherwise the first term >= M of each block is kept, and after
    a(n_1) + 1 blocks the first ascent of a(n_1), b(m_1), a(n_2), b(m_2), ...
    is a crossing.  Every index stays below K * (a(n_1) + 1).
    """
    if l < 2 or M < 0:
        raise ValueError("need l > 1 and M >= 0")
    budget = Budget.coerce(budget)
    K = (l - 1) * M + 1
    heads_a, heads_b = [], []
    rounds = None
    r = 0
    while rounds is None or r < rounds:
        offset = r * K
        for which, seq, heads in (("a", a, heads_a), ("b", b, heads_b)):
            found = mono_run(Shift(seq, offset), M, l, budget)
            if isinstance(found, MonoRun):
                run = EqualRun(which, tuple(offset + x for x in found.indices), found.color)
                bound = K * (heads_a[0][1] + 1) if heads_a else K
                return DichotomyResult(run, bound, K, M, r + 1)
            heads.append((offset + found.index, found.value))
        if rounds is None:
            rounds = heads_a[0][1] + 1
        r += 1
    gamma = []
    for (n, va), (m, vb) in zip(heads_a, heads_b):
        gamma += [va, vb]
    i = first_ascent(gamma)
    t, odd = divmod(i, 2)
    if t + odd >= len(heads_a):
        raise InternalError("crossing fell outside the inspected blocks")
    if odd:
        (n, first), (m, second) = heads_b[t], heads_a[t + 1]
        crossing = Crossing("b<=a", n, m, first, second)
    else:
        (n, first), (m, second) = heads_a[t], heads_b[t]
        crossing = Crossing("a<=b", n, m, first, second)
    return DichotomyResult(crossing, K * rounds, K, M, rounds)


# -- chains in N^2 -----------------------------------------------------------

@dataclass(frozen=True)
class WitnessChain:
    points: tuple[tuple[int, int], ...]
    f_values: tuple[int, ...]
    floor_m: int
    parity: int | None = None
    steps: tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self):
        d = {"points": [list(p) for p in self.points], "f_values": list(self.f_values),
             "floor_m": self.floor_m, "steps": list(self.steps)}
        if self.parity is not None:
            d["parity"] = self.parity
        return d


def chain_violations(f: MultiFunction, points, floor_m: int) -> list[str]:
    """Re-evaluate f and list every violated chain condition (empty if valid)."""
    problems = []
    values = [f(*p) for p in points]
    for r in range(len(points) - 1):
        if values[r] > values[r + 1]:
            problems.append(f"f decreases from {points[r]} to {points[r + 1]}")
    for r in range(len(points)):
        for s in range(r + 1, len(points)):
            if below(points[r], points[s]):
                problems.append(f"{points[r]} <= {points[s]} in the product order")
    for p in points:
        if min(p) < floor_m:
            problems.append(f"{p} has a coordinate below {floor_m}")
    return problems


class _Ray(Sequence):
    """n -> f(m, m+n+1) along the vertical ray, or f(m+n+1, m) along the horizontal."""

    def __init__(self, f, m, vertical):
        self.f, self.m, self.vertical = f, m, vertical

    def point(self, n):
        m = self.m
        return (m, m + n + 1) if self.vertical else (m + n + 1, m)

    def _at(self, n):
        return self.f(*self.point(n))

    def describe(self):
        return f"ray({self.f.describe()},{self.m},{'up' if self.vertical else 'right'})"


class _Zigzag(Sequence):
    """f(m+1, m), f(m, m+1), f(m+2, m), f(m, m+2), ..."""

    def __init__(self, f, m):
        self.f, self.m = f, m

    def point(self, i):
        n, odd = divmod(i, 2)
        m = self.m
        return (m, m + n + 1) if odd else (m + n + 1, m)

    def _at(self, i):
        return self.f(*self.point(i))

    def describe(self):
        return f"zigzag({self.f.describe()},{self.m})"


def _chain(f, l, m, budget):
    if l == 2:
        zig = _Zigzag(f, m)
        good, _ = dl_1_2(zig, budget)
        i = good.indices[0]
        points = (zig.point(i), zig.point(i + 1))
        return points, i % 2, [f"zigzag ascent at {i}"]
    if l == 3:
        prefix = [(m + 1, m + 1)]
        steps = []
    else:
        prefix, _, steps = _chain(f, l - 2, m + 1, budget)
        prefix = list(prefix)
    budget.spend()
    M = f(*prefix[-1])
    up, right = _Ray(f, m, True), _Ray(f, m, False)
    result = dichotomy_lemma(up, right, M, l, budget)
    o = result.outcome
    if isinstance(o, EqualRun):
        ray = up if o.which == "a" else right
        points = tuple(ray.point(n) for n in reversed(o.indices))
        steps = steps + [f"l={l}: equal run of {l} on the {'vertical' if o.which == 'a' else 'horizontal'} ray"]
    else:
        first, second = (up, right) if o.orientation == "a<=b" else (right, up)
        points = tuple(prefix) + (first.point(o.n), second.point(o.m))
        steps = steps + [f"l={l}: crossing {o.orientation} above M={M}"]
    return points, None, steps


def incomparable_chain(f: MultiFunction, l: int, m: int = 0, budget=None) -> WitnessChain:
    """l points with coordinates >= m, f weakly increasing along them,
    and no point lying below a later one."""
    if f.arity != 2:
        raise ValueError("incomparable_chain needs a function of two arguments")
    if l < 2:
        raise ValueError("l must be greater than 1")
    budget = Budget.coerce(budget)
    points, parity, steps = _chain(f, l, m, budget)
    problems = chain_violations(f, points, m)
    if problems or len(points) != l:
        raise InternalError(f"chain for {f.describe()} failed its re-check: {problems}")
    return WitnessChain(points, tuple(f(*p) for p in points), m, parity, tuple(steps))


# -- pairs of triples in N^3 -------------------------------------------------

@dataclass(frozen=True)
class TripleWitness:
    lhs: tuple[int, int, int]
    rhs: tuple[int, int, int]
    f1_values: tuple[int, int]
    f2_values: tuple[int, int]
    branch: str
    swapped: bool
    steps: int

    def to_dict(self):
        return {"lhs": list(self.lhs), "rhs": list(self.rhs),
                "f1_values": list(self.f1_values), "f2_values": list(self.f2_values),
                "branch": self.branch, "swapped": self.swapped, "steps": self.steps}


def triple_violations(f1, f2, lhs, rhs) -> list[str]:
    problems = []
    if f1(*lhs) > f1(*rhs):
        problems.append("f1 decreases")
    if f2(*lhs) > f2(*rhs):
        problems.append("f2 decreases")
    if below(lhs, rhs):
        problems.append(f"{lhs} <= {rhs} in the product order")
    return problems


def _embed(zero_at, i, j):
    if zero_at == 0:
        return (0, i, j)
    if zero_at == 1:
        return (i, 0, j)
    return (i, j, 0)


def _basic_step(g1, g2, start, floor, budget):
    """Pair (p, q) with g1, g2 weakly increasing from p to q and p not below q.

    Requires g1(start) == 0 and ``start`` non-zero.  Both returned triples
    are non-zero.
    """
    c = next(idx for idx, x in enumerate(start) if x > 0)
    budget.spend()
    target = g2(*start)
    if target == 0:
        other = 2 if c != 2 else 1
        return start, tuple(1 if idx == other else 0 for idx in range(3))
    face = MultiFunction(2, lambda i, j: g1(*_embed(c, i, j)))
    chain = incomparable_chain(face, target + 1, floor, budget)
    points = [_embed(c, i, j) for i, j in chain.points]
    values = []
    for p in points:
        budget.spend()
        values.append(g2(*p))
    for p, v in zip(points, values):
        if v >= target:
            return start, p
    seen = {}
    for s, v in enumerate(values):
        if v in seen:
            return points[seen[v]], points[s]
        seen[v] = s
    raise InternalError("no repeated value among target+1 values below target")


def _shifted_down(f, amount):
    return lambda *p: max(f(*p) - amount, 0)


def incomparable_triples(f1: MultiFunction, f2: MultiFunction, floor: int = 1, budget=None) -> TripleWitness:
    """Triples p, q with f1(p) <= f1(q), f2(p) <= f2(q), and p not below q.

    ``floor`` (>= 1) is the least coordinate used by the inner 2-d chains.
    """
    if f1.arity != 3 or f2.arity != 3:
        raise ValueError("incomparable_triples needs two functions of three arguments")
    if floor < 1:
        raise ValueError("floor must be positive")
    budget = Budget.coerce(budget)
    start = (1, 0, 0)
    v1, v2 = f1.at(start, budget), f2.at(start, budget)
    if v1 == 0 and v2 == 0:
        branch = "both-zero"
    elif v1 == 0 or v2 == 0:
        branch = "zero/positive"
    else:
        branch = "both-positive"
    swapped = v2 == 0 < v1 if branch == "zero/positive" else v1 > v2
    steps = 0
    # min(f1, f2) at the start strictly decreases each time round.
    for _ in range(min(v1, v2) + 1):
        if v1 == 0:
            lhs, rhs = _basic_step(f1, f2, start, floor, budget)
            break
        if v2 == 0:
            lhs, rhs = _basic_step(f2, f1, start, floor, budget)
            break
        low = min(v1, v2)
        h1, h2 = (f2, f1) if v1 > v2 else (f1, f2)
        p, q = _basic_step(_shifted_down(h1, low), _shifted_down(h2, low), start, floor, budget)
        steps += 1
        at_p = (f1.at(p, budget), f2.at(p, budget))
        at_q = (f1.at(q, budget), f2.at(q, budget))
        if min(at_p) >= low:
            if min(at_q) >= low:
                lhs, rhs = p, q
                break
            start, (v1, v2) = q, at_q
        else:
            start, (v1, v2) = p, at_p
    else:
        raise InternalError("descent on the minimum value did not terminate")
    problems = triple_violations(f1, f2, lhs, rhs)
    if problems:
        raise InternalError(f"triples failed their re-check: {problems}")
    return TripleWitness(
        tuple(lhs), tuple(rhs), (f1(*lhs), f1(*rhs)), (f2(*lhs), f2(*rhs)), branch, swapped, steps,
    )


# -- refutation reports --------------------------------------------------------

def one_step_refute_2d(f: MultiFunction, l: int, trials: int = 1, m: int = 0, budget=None) -> dict:
    """Chains at floors m .. m + trials - 1, each defeating f as a linearization."""
    if trials < 1:
        raise ValueError("trials must be positive")
    budget = Budget.coerce(budget)
    witnesses = []
    for floor in range(m, m + trials):
        chain = incomparable_chain(f, l, floor, budget)
        witnesses.append({"m": floor, **chain.to_dict()})
    return {
        "kind": "refutation", "variant": "2d", "candidate": f.describe(), "l": l,
        "trials": trials, "witnesses": witnesses,
        "message": (f"candidate {f.describe()} cannot serve as a one-step reduction: "
                    f"it weakly increases along each chain below, yet no point of a chain "
                    f"lies below a later one"),
    }


def one_step_refute_3d(f1: MultiFunction, f2: MultiFunction, trials: int = 1, budget=None) -> dict:
    """Triple witnesses with inner floors 1 .. trials."""
    if trials < 1:
        raise ValueError("trials must be positive")
    budget = Budget.coerce(budget)
    witnesses = []
    for floor in range(1, trials + 1):
        w = incomparable_triples(f1, f2, floor, budget)
        witnesses.append({"floor": floor, **w.to_dict()})
    return {
        "kind": "refutation", "variant": "3d", "candidates": [f1.describe(), f2.describe()],
        "trials": trials, "witnesses": witnesses,
        "message": (f"candidates {f1.describe()}, {f2.describe()} cannot serve as a one-step "
                    f"reduction: both weakly increase from lhs to rhs, yet lhs is not below rhs"),
    }


def report_json(report: dict) -> str:
    return canonical_json(report)


# -- finite refuters -----------------------------------------------------------

@dataclass(frozen=True)
class AscentViolation:
    """``position`` is where the claimed run breaks: either its value is not
    below n (clause ``"not-below"``) or it does not exceed its predecessor
    (clause ``"not-increasing"``)."""

    position: int
    clause: str


def bounded_ascent_refute(n: int, claimed) -> AscentViolation:
    """Locate the failure in a claimed run strictly increasing and below n.

    Reverses the first n+1 terms behind a leading n and takes the first
    non-descent, which must exist within n+1 steps.
    """
    claimed = list(claimed)
    if len(claimed) <= n:
        raise RunTooShort(f"a run of length {len(claimed)} can stay below {n}")
    reversed_run = [n] + claimed[n::-1]
    i = first_ascent(reversed_run)
    if i == 0:
        return AscentViolation(n, "not-below")
    return AscentViolation(n - i + 1, "not-increasing")


@dataclass(frozen=True)
class LexViolation:
    """``f(0, t) >= f(0, t+1)`` (clause ``"increase"``) or ``f(0, t) >= f(1, 0)``
    (clause ``"order"``), refuting f as an order embedding of the
    lexicographic order."""

    t: int
    clause: str
    probes: int
    values: tuple[int, ...]
    f_1_0: int

    def to_dict(self):
        return {"kind": "lex_violation", "t": self.t, "clause": self.clause,
                "probes": self.probes, "values": list(self.values), "f(1,0)": self.f_1_0}


def lex_embed_refute(f: MultiFunction, budget=None) -> LexViolation:
    if f.arity != 2:
        raise ValueError("lex_embed_refute needs a function of two arguments")
    budget = Budget.coerce(budget)
    top = f.at((1, 0), budget)
    values = [f.at((0, 0), budget)]
    for t in range(top + 1):
        values.append(f.at((0, t + 1), budget))
        if values[t] >= values[t + 1]:
            return LexViolation(t, "increase", len(values), tuple(values), top)
        if values[t] >= top:
            return LexViolation(t, "order", len(values), tuple(values), top)
    raise InternalError("strictly increasing ray stayed below f(1,0)")
