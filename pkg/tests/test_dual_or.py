from fractions import Fraction

import pytest

from ptfwitness.core import FnTable, box, inner_product
from ptfwitness.dual_or import (
    _omega_spec,
    build_omega,
    build_psi,
    omega_binomial_form,
    omega_values,
)
from ptfwitness.errors import ConstructionError

F = Fraction


def test_omega_fallback_small_n():
    table, cert = build_omega(3, F(1, 2))
    assert cert.spec.fallback
    assert table((0,)) == 1 and table((1,)) == -1 and table((2,)) == 0
    assert cert.at_zero / cert.l1 == F(1, 2)
    assert cert.orth_value >= 1


def test_omega_n20_layout():
    table, cert = build_omega(20, F(1, 2))
    spec = cert.spec
    assert spec.delta_param == 19 and spec.d == 1
    assert spec.support == (0, 1, 10, 19)
    assert cert.orth_value >= 3
    one = FnTable(box([20]), {(t,): F(1) for t in range(21)})
    assert inner_product(table, one) == 0


def test_omega_closed_form_matches_binomial_formula():
    for n, eps in ((20, F(1, 2)), (30, F(1, 2)), (60, F(2, 3))):
        spec = _omega_spec(n, eps)
        assert not spec.fallback
        assert omega_values(spec) == omega_binomial_form(spec)


def test_omega_orthogonal_to_constants_generally():
    for n, eps in ((1, F(1, 3)), (5, F(1, 2)), (40, F(1, 2))):
        table, cert = build_omega(n, eps)
        one = FnTable(box([n]), {(t,): F(1) for t in range(n + 1)})
        assert inner_product(table, one) == 0


def test_psi_small_exact_properties():
    psi, cert = build_psi(4, 4, F(1, 3))
    assert cert.l1 == 1
    signs = [psi((t,)) for t in range(5)]
    assert all(v != 0 for v in signs)
    assert [v > 0 for v in signs] == [True, False, True, False, True]
    assert cert.at_zero > F(1, 3)
    assert cert.orth_value >= cert.orth_claimed >= 1


def test_psi_16():
    psi, cert = build_psi(16, 16, F(1, 3))
    assert cert.at_zero > F(1, 3)
    assert psi.l1() == 1
    one = FnTable(box([16]), {(t,): F(1) for t in range(17)})
    assert inner_product(psi, one) == 0


def test_psi_pos_neg_split_by_parity():
    from ptfwitness.core import pos_neg_parts

    psi, _ = build_psi(8, 8, F(1, 3))
    pos, neg = pos_neg_parts(psi)
    assert all(t % 2 == 0 for (t,) in pos.entries)
    assert all(t % 2 == 1 for (t,) in neg.entries)
    assert pos.l1() == neg.l1() == F(1, 2)


def test_psi_padded_domain():
    psi, cert = build_psi(4, 9, F(1, 3))
    assert psi.domain.bounds == (9,)
    assert all(psi((t,)) != 0 for t in range(10))
    assert cert.envelope_holds()


def test_psi_delta_too_large_fails():
    with pytest.raises(ConstructionError):
        build_psi(4, 4, F(1, 3), delta=F(50))


def test_psi_tiny_eps_for_heavy_zero():
    psi, cert = build_psi(4, 4, F(1, 50))
    assert cert.at_zero > F(49, 100)


def test_psi_envelope_constant_positive():
    _, cert = build_psi(8, 8, F(1, 3))
    assert cert.c_prime > 0
    assert cert.envelope_holds()


def test_psi_inner_sparse_regime():
    # at n = 296 the inner object leaves its fallback regime: the sparse
    # product-formula layout kicks in and the verified orthogonality rises
    spec = _omega_spec(148, F(1, 18))
    assert not spec.fallback and spec.support == (0, 1, 74, 147)
    psi, cert = build_psi(296, 296, F(1, 3))
    assert cert.orth_claimed == 3
    assert cert.orth_value >= 3
    assert cert.at_zero > F(1, 3)
    assert psi.l1() == 1
