import math
from fractions import Fraction

import pytest

from ptfwitness.core import FnTable, chi, hypercube
from ptfwitness.errors import PreconditionError
from ptfwitness.matrix_bounds import (
    PatternMatrix,
    disc_pp_upp_formulas,
    forster_bound,
    pattern_spectral_norm,
    signrank_lb_pattern,
    signrank_le_1,
    staircase_matrices,
    staircase_realizations,
    verify_realization,
)
from ptfwitness.oracles import parity_table, smooth_threshold_degree

F = Fraction


def const_one(n):
    dom = hypercube(n)
    return FnTable(dom, {p: F(1) for p in dom.points()})


def test_pattern_norm_constant():
    res = pattern_spectral_norm(const_one(1), 2, 1)
    assert res.norm_sq == F(2 ** 3 * 2)
    assert res.rel_err is not None and res.rel_err <= 1e-9


def test_pattern_norm_single_variable_sign():
    dom = hypercube(1)
    phi = FnTable(dom, {(0,): F(1), (1,): F(-1)})
    res = pattern_spectral_norm(phi, 2, 1)
    # the only surviving coefficient sits at the full set: 2^3*2 * (1/2) = 8
    assert res.norm_sq == 8
    assert abs(res.norm_float - 2 * math.sqrt(2)) < 1e-12


def test_pattern_norm_block_mismatch():
    with pytest.raises(PreconditionError):
        pattern_spectral_norm(const_one(2), 3, 2)


def test_pattern_matrix_shape():
    pm = PatternMatrix(4, 2, const_one(2))
    assert pm.shape == (16, 16)
    mat = pm.materialize()
    assert mat.shape == (16, 16)


def test_forster_character_matrix():
    n = 3
    dom = hypercube(n)
    mat = [[chi(frozenset(S), p) for S in _subsets(n)] for p in dom.points()]
    b = forster_bound(mat)
    assert abs(float(b.lower) - 2 ** (n / 2)) < 1e-6


def _subsets(n):
    import itertools

    return [frozenset(c) for k in range(n + 1)
            for c in itertools.combinations(range(n), k)]


def test_forster_all_ones():
    b = forster_bound([[1, 1], [1, 1]])
    assert abs(float(b.lower) - 1.0) < 1e-6


def test_signrank_le_1():
    assert signrank_le_1([[1, 1], [1, 1]])
    # the 2x2 pattern with a single minus cannot factor: three pluses force
    # the fourth entry positive in any outer product
    assert signrank_le_1([[1, 1], [1, -1]]) is False
    # the 2x2 alternating pattern, by contrast, is (+,-) x (+,-)
    assert signrank_le_1([[1, -1], [-1, 1]]) is True
    u, v = [1, -1, 1], [1, 1, -1]
    assert signrank_le_1([[a * b for b in v] for a in u])


def test_staircase_sanity():
    first, second = staircase_matrices(4)
    r1, r2 = staircase_realizations(4)
    assert verify_realization(first, r1, 2)
    assert verify_realization(second, r2, 3)
    assert float(forster_bound(first).lower) <= 2 + 1e-9
    assert float(forster_bound(second).lower) <= 3 + 1e-9


def test_signrank_lb_pattern_parity():
    f = parity_table(2)
    ans = smooth_threshold_degree(f, F(1))
    assert ans.value == 2
    res = signrank_lb_pattern(f, ans, T=2, rederive=True)
    assert res.bound_lower == 2  # gamma = 1, T^(d/2) = 2
    assert res.rederived is not None and res.rederived >= 2 - 1e-9


def test_signrank_lb_trivial_level():
    f = parity_table(2)
    ans = smooth_threshold_degree(f, F(1))
    ans.value = 0  # level-0 certificates give the trivial bound gamma
    res = signrank_lb_pattern(f, ans, T=2)
    assert res.bound_lower == 1 and res.bound_is_exact


def test_signrank_lb_rejects_zero_gamma():
    f = parity_table(2)
    ans = smooth_threshold_degree(f, F(0))
    with pytest.raises(PreconditionError):
        signrank_lb_pattern(f, ans, T=2)


def test_signrank_lift_relation():
    # the two-party lift of f at block size m contains the pattern matrix
    # with T = floor(m/2): the lifted bound is the pattern bound at that T
    f = parity_table(2)
    ans = smooth_threshold_degree(f, F(1))
    for m in (4, 6):
        lifted = signrank_lb_pattern(f, ans, T=m // 2)
        assert lifted.bound_lower == ans.gamma * F(m // 2) ** (ans.value // 2)


def test_formula_report():
    rep = disc_pp_upp_formulas(ell=2, m=16, degthr=2, c=F(1, 8))
    assert "disc_bound_value" in rep.items
    rep2 = disc_pp_upp_formulas(disc=F(1, 4))
    assert abs(rep2.items["pp_lower"] - 3.0) < 1e-12
    rep3 = disc_pp_upp_formulas(srank=F(1))
    lo, hi = rep3.items["upp_interval"]
    assert lo == 0.0 and hi == 2.0
