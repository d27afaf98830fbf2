"""Good index sets, bound certificates, canonical JSON, and the certificate checker.

A certificate is a tree.  Each node records the witness indices of one
application of a proof step, the bound it extracted, and a trace whose
entries are tagged with the symbol they stand for (``N``, ``M_j``, ``K`` ...).
Sub-applications sit inside trace entries under ``"cert"``, with indices
relative to the node's own coordinates: a block at ``offset`` sees the tail
starting there, and an ``inner`` node sees the sequence of first indices
harvested by its parent.

:func:`check_certificate` walks the tree, re-evaluating the input sequences
at the recorded indices and recomputing every traced quantity from them.  It
never reruns the engine's search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence as _Seq

from .sequences import Sequence


@dataclass(frozen=True)
class GoodSet:
    indices: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError(f"indices must strictly increase: {self.indices}")

    @property
    def l(self):
        return len(self.indices)

    def is_good_for(self, seqs: _Seq[Sequence]) -> bool:
        return all(
            s(a) <= s(b) for s in seqs for a, b in zip(self.indices, self.indices[1:])
        )


def canonical_json(obj) -> str:
    """Sorted keys, no whitespace, integers only."""
    _reject_floats(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _reject_floats(obj):
    if isinstance(obj, float):
        raise TypeError("canonical form forbids floats")
    if isinstance(obj, dict):
        for value in obj.values():
            _reject_floats(value)
    elif isinstance(obj, (list, tuple)):
        for value in obj:
            _reject_floats(value)


@dataclass(frozen=True)
class BoundCertificate:
    kind: str
    k: int
    l: int
    indices: tuple[int, ...]
    bound: int
    trace: list = field(compare=False)
    max_index_probed: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_node(cls, node, max_index_probed, meta=None):
        return cls(
            node["kind"], node["k"], node["l"], tuple(node["indices"]), node["bound"],
            node["trace"], max_index_probed, dict(meta or {}),
        )

    def node(self) -> dict:
        return {
            "kind": self.kind, "k": self.k, "l": self.l,
            "indices": list(self.indices), "bound": self.bound, "trace": self.trace,
        }

    def to_dict(self) -> dict:
        d = self.node()
        d["max_index_probed"] = self.max_index_probed
        if self.meta:
            d["meta"] = self.meta
        return d

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["kind"], d["k"], d["l"], tuple(d["indices"]), d["bound"], d["trace"],
            d.get("max_index_probed", 0), d.get("meta", {}),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def replace(self, **changes) -> "BoundCertificate":
        d = self.to_dict()
        d.update(changes)
        return BoundCertificate.from_dict(d)


@dataclass
class Verdict:
    ok: bool
    failures: list[str]

    @property
    def clauses(self) -> set[str]:
        return {f.split(":", 1)[0] for f in self.failures}

    def to_dict(self):
        return {"kind": "verdict", "ok": self.ok, "failures": list(self.failures)}


def first_ascent(values: _Seq[int]) -> int:
    """Least s with values[s] <= values[s+1], the list extended by its last value."""
    for s in range(len(values) - 1):
        if values[s] <= values[s + 1]:
            return s
    return len(values) - 1


# -- checker -----------------------------------------------------------------

View = Callable[[int], tuple]


class _Malformed(Exception):
    pass


def _entries(node, sym):
    return [e for e in node["trace"] if e.get("sym") == sym]


def _one(node, sym):
    found = _entries(node, sym)
    if len(found) != 1:
        raise _Malformed(f"expected exactly one {sym!r} entry in {node['kind']} trace")
    return found[0]


def _shifted(view: View, offset: int) -> View:
    return lambda n: view(n + offset)


def _project(view: View, width: int) -> View:
    return lambda n: view(n)[:width]


def _derived(view: View, positions: list[int], width: int) -> View:
    def at(n):
        if n >= len(positions):
            raise _Malformed(f"inner step reads harvested position {n} of only {len(positions)}")
        return view(positions[n])[:width]
    return at


class _Checker:
    def __init__(self):
        self.failures: list[str] = []

    def fail(self, clause, path, message):
        self.failures.append(f"{clause}: {path or 'root'}: {message}")

    def node(self, node, view: View, k: int, l: int, path: str):
        kind = node.get("kind")
        if node.get("k") != k or node.get("l") != l:
            self.fail("shape", path, f"expected (k,l)=({k},{l}), found ({node.get('k')},{node.get('l')})")
            return
        indices = list(node["indices"])
        bound = node["bound"]
        if len(indices) != (2 if kind == "gap_pair" else l):
            self.fail("shape", path, f"{len(indices)} indices for l={l}")
            return
        if any(x < 0 for x in indices) or any(b <= a for a, b in zip(indices, indices[1:])):
            self.fail("order", path, f"indices {indices} not strictly increasing naturals")
            return
        values = [view(x) for x in indices]
        for r in range(len(indices) - 1):
            bad = [c for c in range(k) if values[r][c] > values[r + 1][c]]
            if bad:
                self.fail("goodness", path,
                          f"sequence(s) {bad} decrease from index {indices[r]} to {indices[r + 1]}")
        limit = indices[0] if kind == "gap_pair" else indices[-1]
        if limit > bound:
            self.fail("bound", path, f"index {limit} exceeds bound {bound}")
        handler = getattr(self, "_" + str(kind), None)
        if handler is None:
            self.fail("shape", path, f"unknown kind {kind!r}")
            return
        handler(node, view, k, l, indices, bound, path)

    def _sum_check(self, node, blocks, bound, path):
        total = 0
        for j, entry in enumerate(blocks, 1):
            if entry.get("j") != j or entry["offset"] != total:
                self.fail("trace", path, f"block {j} at offset {entry['offset']}, expected {total}")
            if entry["val"] != entry["cert"]["bound"]:
                self.fail("trace", path, f"M_{j} = {entry['val']} but its sub-bound is {entry['cert']['bound']}")
            total += entry["cert"]["bound"]
        recorded = _one(node, "M")["val"]
        if recorded != total:
            self.fail("trace", path, f"M recorded as {recorded}, blocks sum to {total}")
        if bound != total:
            self.fail("bound", path, f"bound {bound} differs from derived bound {total}")
        return total

    def _dl_1_2(self, node, view, k, l, indices, bound, path):
        a0 = view(0)[0]
        if _one(node, "alpha(0)")["val"] != a0:
            self.fail("trace", path, f"alpha(0) recorded wrongly (is {a0})")
        if _one(node, "M")["val"] != a0 + 1:
            self.fail("trace", path, f"M must be alpha(0)+1 = {a0 + 1}")
        if bound != a0 + 1:
            self.fail("bound", path, f"bound {bound} differs from alpha(0)+1 = {a0 + 1}")
        i = _one(node, "i")["val"]
        if indices != [i, i + 1]:
            self.fail("trace", path, f"indices {indices} are not (i, i+1) for i = {i}")
        for t in range(min(i, a0 + 1)):
            if view(t)[0] <= view(t + 1)[0]:
                self.fail("trace", path, f"{t} precedes i = {i} and is already an ascent")
                break

    def _gap_pair(self, node, view, k, l, indices, bound, path):
        n = _one(node, "n")["val"]
        beta0 = sum(view(j)[0] for j in range(n))
        if _one(node, "beta(0)")["val"] != beta0 or bound != beta0:
            self.fail("bound", path, f"bound must equal beta(0) = {beta0}")
        i = _one(node, "i")["val"]
        if indices != [i, i + n]:
            self.fail("trace", path, f"indices {indices} are not (i, i+{n})")
        beta = lambda m: (sum(view(m + j)[0] for j in range(n)),)
        self.node(_one(node, "beta")["cert"], beta, 1, 2, path + "/beta")

    def _dl_1_l(self, node, view, k, l, indices, bound, path):
        blocks = _entries(node, "M_j")
        if not blocks:
            raise _Malformed("dl_1_l without blocks")
        for j, entry in enumerate(blocks, 1):
            self.node(entry["cert"], _shifted(view, entry["offset"]), 1, l - 1, f"{path}/M_{j}")
        self._sum_check(node, blocks, bound, path)
        firsts = [e["offset"] + e["cert"]["indices"][0] for e in blocks]
        if _one(node, "i^(1)")["val"] != firsts[0]:
            self.fail("trace", path, "i^(1) is not the first index of the first block")
        n_rounds = view(firsts[0])[0] + 2
        if _one(node, "N")["val"] != n_rounds or len(blocks) != n_rounds:
            self.fail("trace", path, f"N must be alpha(i^(1))+2 = {n_rounds}, with {len(blocks)} blocks")
            return
        s = first_ascent([view(f)[0] for f in firsts])
        if _one(node, "k")["val"] != s + 1:
            self.fail("trace", path, f"selected block k should be {s + 1}")
        nxt = blocks[s + 1]
        expected = [firsts[s]] + [nxt["offset"] + x for x in nxt["cert"]["indices"]]
        if indices != expected:
            self.fail("trace", path, f"indices {indices} are not the splice {expected}")

    def _dl_k_2(self, node, view, k, l, indices, bound, path):
        rounds = _entries(node, "M_j")
        if not rounds:
            raise _Malformed("dl_k_2 without rounds")
        base = _project(view, k - 1)
        firsts, steers = [], []
        length = 3
        for j, entry in enumerate(rounds, 1):
            if entry.get("len") != length:
                self.fail("trace", path, f"round {j} length {entry.get('len')}, expected {length}")
                return
            self.node(entry["cert"], _shifted(base, entry["offset"]), k - 1, length, f"{path}/M_{j}")
            first = entry["offset"] + entry["cert"]["indices"][0]
            steer = view(first)[k - 1]
            if entry.get("steer") != steer:
                self.fail("trace", path, f"round {j} steering value recorded wrongly (is {steer})")
            dropped = steer + 2 <= length
            if dropped and j < len(rounds):
                self.fail("trace", path, f"round {j} already forces a pair but repetition continued")
            firsts.append(first)
            steers.append(steer)
            length = steer + 1
        self._sum_check(node, rounds, bound, path)
        last_drop = steers[-1] + 2 <= rounds[-1]["len"]
        if _one(node, "K")["val"] != len(rounds):
            self.fail("trace", path, f"K must be the number of rounds, {len(rounds)}")
        if k == 2:
            n_rounds = view(firsts[0])[0] + 2
            if _one(node, "N")["val"] != n_rounds or len(rounds) > n_rounds:
                self.fail("trace", path, f"N must be alpha(i_1^(1))+2 = {n_rounds} and K <= N")
        drops = _entries(node, "drop")
        if drops:
            if not last_drop:
                self.fail("trace", path, "drop recorded but the last round does not drop")
                return
            last = rounds[-1]
            block = [last["offset"] + x for x in last["cert"]["indices"]]
            t = first_ascent([view(x)[k - 1] for x in block])
            if drops[0].get("t") != t or t + 1 >= len(block):
                self.fail("trace", path, f"drop pair position should be {t}")
                return
            if indices != [block[t], block[t + 1]]:
                self.fail("trace", path, f"indices {indices} are not the drop pair")
            return
        if last_drop:
            self.fail("trace", path, "last round drops but no drop outcome is recorded")
            return
        inner = _one(node, "inner")["cert"]
        self.node(inner, _derived(view, firsts, k - 1), k - 1, 2, path + "/inner")
        if len(rounds) != inner["bound"] + 1:
            self.fail("trace", path, f"K must be inner bound + 1 = {inner['bound'] + 1}")
        if k > 2 and _one(node, "N")["val"] != inner["bound"] + 1:
            self.fail("trace", path, "N must be inner bound + 1")
        expected = [firsts[t] for t in inner["indices"]]
        if indices != expected:
            self.fail("trace", path, f"indices {indices} are not {expected}")

    def _dl_k_l(self, node, view, k, l, indices, bound, path):
        blocks = _entries(node, "M_j")
        if not blocks:
            raise _Malformed("dl_k_l without blocks")
        firsts, seconds = [], []
        for j, entry in enumerate(blocks, 1):
            self.node(entry["cert"], _shifted(view, entry["offset"]), k, 2, f"{path}/M_{j}")
            pair = entry["cert"]["indices"]
            firsts.append(entry["offset"] + pair[0])
            seconds.append(entry["offset"] + pair[1])
        self._sum_check(node, blocks, bound, path)
        inner = _one(node, "inner")["cert"]
        self.node(inner, _derived(view, firsts, k), k, l - 1, path + "/inner")
        if len(blocks) != inner["bound"] + 1 or _one(node, "K")["val"] != len(blocks):
            self.fail("trace", path, f"K must be inner bound + 1 = {inner['bound'] + 1}")
        picks = inner["indices"]
        expected = [firsts[t] for t in picks] + [seconds[picks[-1]]]
        if indices != expected:
            self.fail("trace", path, f"indices {indices} are not the splice {expected}")


def check_certificate(seqs: _Seq[Sequence], cert: BoundCertificate, good: GoodSet | None = None) -> Verdict:
    """Independently re-check ``cert`` against the input sequences."""
    checker = _Checker()
    seqs = list(seqs)
    if len(seqs) != cert.k:
        return Verdict(False, [f"shape: root: certificate is for k={cert.k}, got {len(seqs)} sequences"])
    if good is not None and tuple(good.indices) != tuple(cert.indices):
        checker.fail("goodness", "", f"good set {good.indices} differs from certificate {cert.indices}")

    def view(n):
        return tuple(s(n) for s in seqs)

    try:
        checker.node(cert.node(), view, cert.k, cert.l, "")
    except (_Malformed, KeyError, IndexError, TypeError) as exc:
        checker.fail("shape", "", f"malformed certificate: {exc!r}")
    return Verdict(not checker.failures, checker.failures)
