import random

import pytest

from dickson.dsl import parse_function as F, parse_sequence as P
from dickson.errors import RunTooShort
from dickson.sequences import Const, Prefix
from dickson.unprovability import (
    Crossing, EqualRun, below, bounded_ascent_refute, chain_violations, dichotomy_lemma,
    incomparable_chain, incomparable_triples, lex_embed_refute, one_step_refute_2d,
    one_step_refute_3d, triple_violations,
)

CANTOR = "f2:(i+j)*(i+j+1)/2+j"


def check_dichotomy(a, b, M, l, result):
    o = result.outcome
    assert result.K == (l - 1) * M + 1
    if isinstance(o, EqualRun):
        seq = a if o.which == "a" else b
        assert len(o.indices) == l and o.value < M
        assert all(seq(i) == o.value for i in o.indices)
        assert all(i <= result.bound_B for i in o.indices)
    else:
        first, second = (a, b) if o.orientation == "a<=b" else (b, a)
        assert M <= first(o.n) == o.first_value <= second(o.m) == o.second_value
        assert o.n <= result.bound_B and o.m <= result.bound_B


def test_dichotomy_examples():
    zero = P("const(0)")
    r = dichotomy_lemma(zero, zero, 1, 2)
    assert r.outcome == EqualRun("a", (0, 1), 0)
    five = P("const(5)")
    r = dichotomy_lemma(five, five, 3, 2)
    assert isinstance(r.outcome, Crossing)
    assert (r.outcome.first_value, r.outcome.second_value) == (5, 5)
    a, b = P("periodic(0,4)"), P("periodic(4,0)")
    check_dichotomy(a, b, 3, 3, dichotomy_lemma(a, b, 3, 3))


def test_dichotomy_bound_formula():
    a, b = P("affine(1,4)"), P("dec(9)")
    r = dichotomy_lemma(a, b, 2, 3)
    check_dichotomy(a, b, 2, 3, r)
    n1 = next(n for n in range(r.K) if a(n) >= 2)
    assert r.bound_B == r.K * (a(n1) + 1)


def test_dichotomy_random():
    rng = random.Random(8)
    for _ in range(300):
        M, l = rng.randint(0, 4), rng.randint(2, 3)
        a = Prefix([rng.randint(0, 6) for _ in range(rng.randint(0, 5))], Const(rng.randint(0, 6)))
        b = Prefix([rng.randint(0, 6) for _ in range(rng.randint(0, 5))], Const(rng.randint(0, 6)))
        check_dichotomy(a, b, M, l, dichotomy_lemma(a, b, M, l))


def test_dichotomy_argument_checks():
    with pytest.raises(ValueError):
        dichotomy_lemma(Const(0), Const(0), 1, 1)


@pytest.mark.parametrize("text", ["f2:i+j", "f2:0", CANTOR, "f2:max(i,j)", "f2:i*j", "f2:j",
                                  "f2:min(i,j)+7"])
@pytest.mark.parametrize("l", [2, 3, 4])
@pytest.mark.parametrize("m", [0, 2])
def test_incomparable_chain(text, l, m):
    f = F(text)
    chain = incomparable_chain(f, l, m)
    assert len(chain.points) == l
    assert chain_violations(f, chain.points, m) == []
    assert list(chain.f_values) == [f(*p) for p in chain.points]
    assert (chain.parity is not None) == (l == 2)


@pytest.mark.parametrize("l", [2, 3, 4])
def test_chain_for_exponential_encoding(l):
    # At larger floors the number of rounds grows with f itself, so stay at m = 0.
    f = F("f2:2^i*3^j")
    chain = incomparable_chain(f, l, 0)
    assert chain_violations(f, chain.points, 0) == []


def test_chain_examples():
    chain = incomparable_chain(F("f2:0"), 4, 1)
    assert chain_violations(F("f2:0"), chain.points, 1) == []
    chain = incomparable_chain(F(CANTOR), 3, 2)
    assert min(min(p) for p in chain.points) >= 2


def test_chain_rejects_wrong_arity():
    with pytest.raises(ValueError):
        incomparable_chain(F("f3:i"), 2)
    with pytest.raises(ValueError):
        incomparable_chain(F("f2:i"), 1)


def test_chain_violations_detects_problems():
    f = F("f2:i+j")
    assert chain_violations(f, [(0, 1), (1, 1)], 0)
    assert chain_violations(f, [(2, 0), (0, 1)], 0)
    assert chain_violations(f, [(1, 0), (0, 1)], 1)


PAIRS = [
    ("f3:0", "f3:0", "both-zero"),
    ("f3:j", "f3:k", "both-zero"),
    ("f3:i", "f3:j", "zero/positive"),
    ("f3:j+k", "f3:i+1", "zero/positive"),
    ("f3:i+2*j", "f3:k+1", "both-positive"),
    ("f3:i+j+k", "f3:max(i,max(j,k))", "both-positive"),
    ("f3:min(i,1)", "f3:min(i,1)", "both-positive"),
    ("f3:i+j+k", "f3:i*j*k+1", "both-positive"),
    ("f3:max(i,j)", "f3:min(j,k)+1", "both-positive"),
    ("f3:3*i+j", "f3:2*i+k", "both-positive"),
]


@pytest.mark.parametrize("t1, t2, branch", PAIRS)
def test_incomparable_triples(t1, t2, branch):
    f1, f2 = F(t1), F(t2)
    w = incomparable_triples(f1, f2)
    assert w.branch == branch
    assert triple_violations(f1, f2, w.lhs, w.rhs) == []
    assert not below(w.lhs, w.rhs)


def test_triples_swap_recorded():
    w = incomparable_triples(F("f3:3*i+j"), F("f3:i+k"))
    assert w.swapped


def test_refutation_reports():
    report = one_step_refute_2d(F("f2:i+j"), 3, trials=2)
    assert report["kind"] == "refutation" and len(report["witnesses"]) == 2
    assert "cannot serve as a one-step reduction" in report["message"]
    report = one_step_refute_2d(F("f2:2^i*3^j"), 2)
    assert report["witnesses"][0]["parity"] in (0, 1)
    report = one_step_refute_3d(F("f3:0"), F("f3:0"), trials=2)
    assert [w["floor"] for w in report["witnesses"]] == [1, 2]
    with pytest.raises(ValueError):
        one_step_refute_2d(F("f2:0"), 2, trials=0)


def test_bounded_ascent_examples():
    assert bounded_ascent_refute(3, [0, 1, 2, 3]).position == 3
    assert bounded_ascent_refute(1, [0, 0]).position == 1
    with pytest.raises(RunTooShort):
        bounded_ascent_refute(3, [0, 1, 2])


def test_bounded_ascent_fuzz():
    rng = random.Random(2)
    for _ in range(500):
        n = rng.randint(0, 6)
        run = [rng.randint(0, n + 1) for _ in range(n + 1 + rng.randint(0, 3))]
        v = bounded_ascent_refute(n, run)
        p = v.position
        if v.clause == "not-below":
            assert run[p] >= n
        else:
            assert p >= 1 and run[p - 1] >= run[p]


@pytest.mark.parametrize("text, t, clause", [
    ("f2:0", 0, "increase"),
    ("f2:j", 0, "order"),
])
def test_lex_examples(text, t, clause):
    v = lex_embed_refute(F(text))
    assert (v.t, v.clause) == (t, clause)


def test_lex_cantor_and_probe_budget():
    for text in (CANTOR, "f2:i*100+j", "f2:2^i*3^j", "f2:j*j+i"):
        f = F(text)
        v = lex_embed_refute(f)
        assert v.probes <= f(1, 0) + 2
        if v.clause == "order":
            assert f(0, v.t) >= f(1, 0)
        else:
            assert f(0, v.t) >= f(0, v.t + 1)
