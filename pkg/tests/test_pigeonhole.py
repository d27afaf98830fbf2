import random
from collections import Counter

import pytest

from dickson.dsl import parse_sequence as P
from dickson.errors import NotNatural
from dickson.pigeonhole import MonoRun, NotAllBelow, mono_run, ph2_from_dl
from dickson.sequences import Periodic, Prefix, Rule


def assert_mono(chi, run, l):
    assert len(run.indices) == l
    assert all(a < b for a, b in zip(run.indices, run.indices[1:]))
    assert {chi(i) for i in run.indices} == {run.color}


def test_all_zero_coloring():
    run = ph2_from_dl(P("const(0)"), 3)
    assert run.indices == (0, 1, 2) and run.color == 0
    assert len(run.rounds) == 1


def test_alternating_coloring():
    chi = P("periodic(0,1)")
    run = ph2_from_dl(chi, 3)
    assert_mono(chi, run, 3)


def test_proof_order_choice():
    # (0, 1) is monochromatic too, but its top color is 1 so the proof moves on.
    chi = P("prefix(1,1);const(0)")
    run = ph2_from_dl(chi, 2)
    assert run.indices == (2, 3) and run.color == 0


def test_all_ones_takes_l_rounds():
    chi = P("const(1)")
    run = ph2_from_dl(chi, 3)
    assert run.color == 1 and len(run.rounds) == 3
    assert_mono(chi, run, 3)


def test_random_colorings():
    rng = random.Random(11)
    for _ in range(100):
        l = rng.randint(2, 4)
        chi = Prefix([rng.randint(0, 1) for _ in range(rng.randint(0, 10))],
                     Periodic([rng.randint(0, 1) for _ in range(rng.randint(1, 4))]))
        run = ph2_from_dl(chi, l)
        assert_mono(chi, run, l)
        assert len(run.rounds) <= l


def test_non_coloring_rejected():
    with pytest.raises(NotNatural):
        ph2_from_dl(P("const(2)"), 2)
    with pytest.raises(ValueError):
        ph2_from_dl(P("const(0)"), 1)


@pytest.mark.parametrize("text, M, l, expected", [
    ("const(0)", 3, 4, MonoRun((0, 1, 2, 3), 0, 9)),
    ("periodic(0,1,2)", 3, 3, MonoRun((0, 3, 6), 0, 6)),
    ("affine(1,0)", 3, 2, NotAllBelow(3, 3)),
])
def test_mono_run_examples(text, M, l, expected):
    assert mono_run(P(text), M, l) == expected


def test_mono_run_matches_counting():
    rng = random.Random(5)
    for _ in range(300):
        M, l = rng.randint(1, 5), rng.randint(1, 4)
        K = (l - 1) * M + 1
        values = [rng.randint(0, M) for _ in range(K)]
        result = mono_run(Rule(lambda n, v=values: v[n] if n < len(v) else 0), M, l)
        if any(v >= M for v in values):
            first = next(n for n, v in enumerate(values) if v >= M)
            assert result == NotAllBelow(first, values[first])
        else:
            counts = Counter(values)
            assert counts[result.color] >= l
            assert all(values[i] == result.color for i in result.indices)


def test_mono_run_zero_threshold():
    assert mono_run(P("const(0)"), 0, 3) == NotAllBelow(0, 0)
