from fractions import Fraction

import pytest

from ptfwitness.circuits import (
    CircuitDesc,
    build_fkn,
    krause_pudlak,
    literal,
    mp,
    mp_star_table,
    surj_table,
)
from ptfwitness.core import hypercube
from ptfwitness.errors import PreconditionError
from ptfwitness.oracles import threshold_degree, threshold_density

F = Fraction


def test_literal_depth_zero():
    c = literal(3, 1)
    assert c.depth() == 0 and c.size() == 0
    assert c.evaluate((0, 1, 0)) == 1


def test_mp_structure_and_semantics():
    c = mp(2, 2)
    assert c.depth() == 2
    assert c.size() == 3
    assert c.bottom_fanin() == 2
    assert c.is_monotone()
    assert c.evaluate((1, 0, 0, 1)) == 1
    assert c.evaluate((0, 0, 0, 1)) == 0
    assert mp(1, 1).evaluate((1,)) == 1 and mp(1, 1).evaluate((0,)) == 0


def test_mp_star_table():
    t = mp_star_table(2, 4)
    zeros = [p for p in t.domain.points() if t(p) == 0]
    assert all(0 in p for p in zeros)
    assert len(list(t.domain.points())) == 25


def test_truth_table_matches_eval():
    c = mp(2, 2)
    table = c.truth_table()
    for p in hypercube(4).points():
        assert table(p) == c.evaluate(p)


def test_merge_like_gates():
    c = CircuitDesc(2)
    inner = c.add_gate("and", [("lit", 0, False)])
    c.output = c.add_gate("and", [inner, ("lit", 1, False)])
    merged = c.merge_like_gates()
    assert merged.depth() == 1


def test_negated_circuit():
    c = mp(2, 2)
    neg = c.negated()
    for p in hypercube(4).points():
        assert neg.evaluate(p) == 1 - c.evaluate(p)


def test_surj_tables():
    t = surj_table(2, 1)
    assert list(t.domain.points()) == [(2,)]
    assert t((2,)) == 1

    t2 = surj_table(3, 2)
    zeros = [p for p in t2.domain.points() if t2(p) == 0]
    assert set(zeros) == {(3, 0), (0, 3)}

    t3 = surj_table(2, 3)  # more buckets than items: constant 0
    assert all(t3(p) == 0 for p in t3.domain.points())


def test_surj_degthr_positive():
    ans = threshold_degree(surj_table(4, 2))
    assert ans.value >= 1


def test_krause_pudlak_single_variable():
    f = literal(1)
    lifted = krause_pudlak(f)
    assert lifted.n_inputs == 3
    # (not z and x) or (z and y)
    assert lifted.evaluate((1, 0, 0)) == 1
    assert lifted.evaluate((1, 0, 1)) == 0
    assert lifted.evaluate((0, 1, 1)) == 1
    table = lifted.truth_table()
    ans = threshold_density(table, cap=1)
    assert ans.value >= 2  # at least 2^degthr(x1)


def test_krause_pudlak_constant_note():
    # a constant (single-gate) circuit lifts to a constant: density 1
    c = CircuitDesc(1)
    c.output = c.add_gate("or", [("lit", 0, False), ("lit", 0, True)])
    lifted = krause_pudlak(c)
    table = lifted.truth_table()
    assert threshold_density(table, cap=1).value == 1


def test_build_fkn():
    f1 = build_fkn(1, 8)
    assert f1.depth() == 0
    f2 = build_fkn(2, 27)
    assert f2.depth() == 2
    assert f2.n_inputs == 27  # AND_3 of OR_9
    f3 = build_fkn(3, 4)
    assert f3.depth() == 3
    assert f3.is_monotone()
    t = f3.truth_table() if f3.n_inputs <= 20 else None
    if t is not None:
        assert threshold_degree(t).value >= 1


def test_build_fkn_degenerate():
    with pytest.raises(PreconditionError):
        build_fkn(2, 0)
