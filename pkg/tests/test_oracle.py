import random

import pytest

from dickson.dsl import parse_sequence as P
from dickson.errors import HorizonTooLarge
from dickson.oracle import (
    CSV_HEADER, counterexample_family_check, family_member, minimal_gap_index, minimal_good_set,
    minimal_good_set_exhaustive, rows_to_csv, tightness_experiment,
)
from dickson.sequences import Cex, Const, Periodic, Prefix


@pytest.mark.parametrize("texts, l, horizon, expected", [
    (["const(0)"], 3, 10, (0, 1, 2)),
    (["dec(4)"], 2, 10, (4, 5)),
    (["periodic(1,0)", "periodic(0,1)"], 2, 10, (0, 2)),
    (["dec(4)"], 2, 4, None),
    (["const(0)"], 3, 1, None),
])
def test_minimal_good_set(texts, l, horizon, expected):
    report = minimal_good_set([P(t) for t in texts], l, horizon)
    got = None if report.minimal_witness is None else report.minimal_witness.indices
    assert got == expected


def test_agrees_with_plain_enumeration():
    rng = random.Random(4)
    for _ in range(300):
        k, l, h = rng.randint(1, 3), rng.randint(1, 4), rng.randint(0, 11)
        seqs = [Prefix([rng.randint(0, 5) for _ in range(8)], Periodic([rng.randint(0, 5), rng.randint(0, 5)]))
                for _ in range(k)]
        assert minimal_good_set(seqs, l, h).minimal_witness == minimal_good_set_exhaustive(seqs, l, h)


def test_minimality_is_strict():
    seqs = [P("prefix(3,2,5,1,4);const(2)"), P("periodic(2,1,3)")]
    report = minimal_good_set(seqs, 3, 20)
    last = report.minimal_last_index
    assert minimal_good_set(seqs, 3, last - 1).minimal_witness is None


def test_work_cap():
    with pytest.raises(HorizonTooLarge) as info:
        minimal_good_set([Const(0)], 4, 100, work_cap=1000)
    assert info.value.candidates > 1000


def test_tight_flag():
    report = minimal_good_set([P("dec(3)")], 2, 4, extracted_bound=4)
    assert report.tight
    assert not minimal_good_set([P("const(3)")], 2, 4, extracted_bound=4).tight


def test_counterexample_family():
    v = counterexample_family_check(1)
    assert v.ok and v.pairs_checked == 1
    assert Cex(2).take(3) == [2, 1, 3]
    assert counterexample_family_check(3).pairs_refuted == 6
    v = counterexample_family_check(50)
    assert v.ok and v.pairs_refuted == 51 * 50 // 2
    with pytest.raises(ValueError):
        counterexample_family_check(0)


def test_tightness_dec_is_tight():
    rows = tightness_experiment("dec", range(1, 21), 2)
    assert all(r.tight for r in rows)
    assert [r.extracted_bound for r in rows] == [n + 1 for n in range(1, 21)]


def test_tightness_gap_step_family():
    rows = tightness_experiment("step", range(1, 8), 2, op="gap")
    assert all(r.minimal_last_index == 1 == r.extracted_bound for r in rows)


def test_tightness_constants_and_templates():
    rows = tightness_experiment("const", range(0, 4), 3)
    assert all(r.minimal_last_index == 2 for r in rows)
    rows = tightness_experiment("prefix({n});const(0)|const(1)", [2, 3], 2)
    assert [r.param for r in rows] == [2, 3]
    with pytest.raises(ValueError):
        family_member("nonsense", 1)


def test_tightness_truncates_instead_of_failing():
    rows = tightness_experiment("const", [3], 4, work_cap=10_000)
    assert rows[0].truncated and rows[0].horizon < rows[0].extracted_bound
    assert rows[0].minimal_last_index == 3


def test_parallel_rows_match_serial():
    serial = tightness_experiment("dec", range(1, 7), 2)
    parallel = tightness_experiment("dec", range(1, 7), 2, jobs=2)
    assert serial == parallel


def test_csv_format():
    text = rows_to_csv(tightness_experiment("dec", [1, 2], 2))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1] == "dec,1,2,2,2,true,6"


def test_minimal_gap_index():
    assert minimal_gap_index(P("prefix(1,0,0,0);const(0)"), 3, 5) == 1
    assert minimal_gap_index(P("dec(9)"), 1, 3) is None
