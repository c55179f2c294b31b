from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptfwitness.core import (
    Domain,
    FnTable,
    box,
    chi,
    fourier,
    from_fourier,
    hypercube,
    inner_product,
    least_poly_degree,
    lift_symmetric_to_cube,
    monomials,
    orth,
    pos_neg_parts,
    symmetrize,
    tensor,
    tensor_power,
    weight_slice,
)
from ptfwitness.errors import PreconditionError

F = Fraction


def char_table(n, S):
    dom = hypercube(n)
    return FnTable(dom, {p: F(chi(frozenset(S), p)) for p in dom.points()})


def test_domain_enumeration_lex():
    d = box([2, 1])
    assert list(d.points()) == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
    assert d.size() == 6


def test_weight_slice():
    d = weight_slice(box([3, 3]), 3, 3)
    pts = list(d.points())
    assert all(sum(p) == 3 for p in pts)
    assert len(pts) == d.size() == 4


def test_inner_product_characters():
    f = char_table(2, [0, 1])
    assert inner_product(f, f) == 4
    g = char_table(2, [1])
    assert inner_product(char_table(2, [0]), g) == 0


def test_inner_product_omega_fallback_vs_one():
    dom = box([3])
    omega = FnTable(dom, {(0,): F(1), (1,): F(-1)})
    one = FnTable(dom, {(t,): F(1) for t in range(4)})
    assert inner_product(omega, one) == 0


def test_inner_product_dim_mismatch():
    f = FnTable(box([1]), {(0,): F(1)})
    g = FnTable(box([1, 1]), {(0, 0): F(1)})
    with pytest.raises(PreconditionError):
        inner_product(f, g)


def test_orth_simple():
    f = FnTable(hypercube(1), {(0,): F(1), (1,): F(-1)})
    r = orth(f)
    assert r.kind == "exact" and r.value == 1
    parity = char_table(2, [0, 1])
    assert orth(parity).value == 2
    zero = FnTable(hypercube(2), {})
    assert orth(zero).kind == "infinite"


def test_orth_cap():
    parity = char_table(3, [0, 1, 2])
    r = orth(parity, cap=1)
    assert r.kind == "at_least" and r.value == 2


def test_tensor_orth_additivity_parity():
    f = FnTable(hypercube(1), {(0,): F(1), (1,): F(-1)})
    assert orth(tensor(f, f)).value == 2
    zero = FnTable(hypercube(1), {})
    assert orth(tensor(f, zero)).kind == "infinite"


def test_fourier_characters_and_constant():
    f = char_table(2, [0])
    coeffs = fourier(f)
    assert coeffs[frozenset([0])] == 1
    assert all(v == 0 for S, v in coeffs.items() if S != frozenset([0]))
    one = FnTable(hypercube(2), {p: F(1) for p in hypercube(2).points()})
    c1 = fourier(one)
    assert c1[frozenset()] == 1


def test_fourier_and2_sign_table():
    # (-1)^{AND2}: enumeration over the four points fixes the coefficients
    dom = hypercube(2)
    f = FnTable(dom, {p: F(-1) if p == (1, 1) else F(1) for p in dom.points()})
    c = fourier(f)
    assert c[frozenset()] == F(1, 2)
    assert c[frozenset([0])] == F(1, 2)
    assert c[frozenset([1])] == F(1, 2)
    assert c[frozenset([0, 1])] == F(-1, 2)


def test_fourier_rejects_box():
    with pytest.raises(PreconditionError):
        fourier(FnTable(box([2]), {(2,): F(1)}))


def test_symmetrize_product_and_coordinate():
    dom = hypercube(2)
    prod = FnTable(dom, {(1, 1): F(1)})
    s = symmetrize(prod, ((0, 1),))
    assert [s((t,)) for t in range(3)] == [0, 0, 1]
    x1 = FnTable(dom, {(1, 0): F(1), (1, 1): F(1)})
    s1 = symmetrize(x1, ((0, 1),))
    assert [s1((t,)) for t in range(3)] == [0, F(1, 2), 1]
    one = FnTable(dom, {p: F(1) for p in dom.points()})
    so = symmetrize(one, ((0, 1),))
    assert all(so((t,)) == 1 for t in range(3))


def test_lift_of_or_dual_preserves_orth():
    from ptfwitness.dual_or import build_psi

    psi, cert = build_psi(4, 4, F(1, 3))
    lifted = lift_symmetric_to_cube(psi)
    assert lifted.l1() == psi.l1() == 1
    assert orth(lifted).value == orth(psi).value == cert.orth_value


def test_lift_symmetric_to_cube():
    phi = FnTable(box([3]), {(0,): F(1), (1,): F(-1)})
    lifted = lift_symmetric_to_cube(phi)
    assert lifted((0, 0, 0)) == 1
    assert lifted((1, 0, 0)) == F(-1, 3)
    assert lifted.l1() == phi.l1()
    assert orth(lifted).value == orth(phi).value
    zero = FnTable(box([2]), {})
    assert lift_symmetric_to_cube(zero).is_zero()


def test_pos_neg_parts():
    f = FnTable(box([2]), {(0,): F(1), (1,): F(-2)})
    pos, neg = pos_neg_parts(f)
    assert pos((0,)) == 1 and pos((1,)) == 0
    assert neg((1,)) == 2
    assert (pos - neg) == f
    g = FnTable(box([2]), {(0,): F(3)})
    p2, n2 = pos_neg_parts(g)
    assert n2.is_zero() and p2 == g


small_tables = st.builds(
    lambda vals: FnTable(
        box([1, 1]),
        {p: F(v) for p, v in zip([(0, 0), (0, 1), (1, 0), (1, 1)], vals)},
    ),
    st.lists(st.integers(-4, 4), min_size=4, max_size=4),
)


@given(small_tables, small_tables)
@settings(max_examples=60, deadline=None)
def test_inner_product_symmetric_bilinear(f, g):
    assert inner_product(f, g) == inner_product(g, f)
    assert inner_product(f + g, g) == inner_product(f, g) + inner_product(g, g)


@given(small_tables, small_tables)
@settings(max_examples=40, deadline=None)
def test_orth_tensor_additive(f, g):
    rf, rg, rt = orth(f), orth(g), orth(tensor(f, g))
    if rf.kind == "infinite" or rg.kind == "infinite":
        assert rt.kind == "infinite"
    else:
        assert rt.value == rf.value + rg.value


@given(small_tables, small_tables, st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_orth_power_difference(f, g, n):
    d = orth(f - g)
    fn = tensor_power(f, n) if not f.is_zero() else None
    gn = tensor_power(g, n) if not g.is_zero() else None
    if f.is_zero() or g.is_zero():
        return
    diff = fn - gn
    if d.kind == "infinite":
        assert orth(diff).kind == "infinite"
    else:
        assert orth(diff).ge(d.value)


@given(small_tables)
@settings(max_examples=40, deadline=None)
def test_fourier_roundtrip(f):
    assert from_fourier(fourier(f), 2) == f


@given(small_tables)
@settings(max_examples=40, deadline=None)
def test_fourier_coefficient_bound(f):
    coeffs = fourier(f)
    bound = f.l1() / 4  # 2^-n at n = 2
    assert all(abs(c) <= bound for c in coeffs.values())


@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8))
@settings(max_examples=30, deadline=None)
def test_symmetrize_degree_drop(vals):
    # a random cubic polynomial on {0,1}^3, evaluated then symmetrized,
    # interpolates to a univariate polynomial of degree <= 3
    dom = hypercube(3)
    pts = list(dom.points())
    f = FnTable(dom, {p: F(v) for p, v in zip(pts, vals)})
    s = symmetrize(f, ((0, 1, 2),))
    assert least_poly_degree(s) <= 3


def test_symmetrize_of_low_degree_polynomial():
    # p = x1 x2 on {0,1}^4 has degree 2; block-symmetrized table fits degree 2
    dom = hypercube(4)
    f = FnTable(dom, {p: F(p[0] * p[1]) for p in dom.points() if p[0] * p[1]})
    s = symmetrize(f, ((0, 1), (2, 3)))
    assert least_poly_degree(s) == 2


def test_monomial_caps():
    assert list(monomials((1, 1), 2)) == [(1, 1)]
    assert list(monomials((2,), 2)) == [(2,)]
    assert list(monomials((1,), 2)) == []


def test_least_poly_degree_univariate():
    dom = box([3])
    f = FnTable(dom, {(t,): F(t * t) for t in range(4)})
    assert least_poly_degree(f) == 2


def test_orth_capped_exponents_match_uncapped():
    # the per-coordinate exponent caps rely on reduction modulo the box's
    # vanishing ideal; compare against a scan over unrestricted exponents
    import itertools
    import random

    from ptfwitness.core import Domain, eval_monomial

    rng = random.Random(42)
    for _ in range(80):
        n = rng.randint(1, 3)
        bounds = tuple(rng.randint(0, 2) for _ in range(n))
        offset = tuple(rng.randint(0, 2) for _ in range(n))
        dom = Domain(bounds, offset)
        entries = {}
        for p in dom.points():
            v = rng.randint(-3, 3)
            if v and rng.random() < 0.6:
                entries[p] = F(v)
        f = FnTable(dom, entries)
        if f.is_zero():
            continue
        cap = sum(bounds) + 2
        capped = orth(f, cap=cap).value
        uncapped = None
        for d in range(cap + 1):
            for a in itertools.product(range(d + 1), repeat=n):
                if sum(a) != d:
                    continue
                if sum(v * eval_monomial(p, a) for p, v in f.entries.items()) != 0:
                    uncapped = d
                    break
            if uncapped is not None:
                break
        assert capped == uncapped
