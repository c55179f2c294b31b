"""Two-sided rational enclosures for the irrational quantities the
constructions compare against (ln n, e, square roots, rational powers).

Every function returns a pair (lo, hi) of Fractions with lo <= value <= hi.
Callers pick the adverse side, so a check that passes against a bracket is
sound even though the bracket is not tight.  All internal rounding is
directed and all comparisons are exact integer comparisons.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import PreconditionError

Bracket = tuple[Fraction, Fraction]


def _round_down(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(x.numerator * scale // x.denominator, scale)


def _round_up(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-x.numerator * scale) // x.denominator), scale)


def sqrt_lower(x: Fraction, bits: int = 32) -> Fraction:
    """Largest dyadic k/2^bits with (k/2^bits)^2 <= x."""
    if x < 0:
        raise PreconditionError("sqrt of a negative number")
    k = isqrt(x.numerator * (1 << (2 * bits)) // x.denominator)
    return Fraction(k, 1 << bits)


def sqrt_upper(x: Fraction, bits: int = 32) -> Fraction:
    if x < 0:
        raise PreconditionError("sqrt of a negative number")
    t = -((-x.numerator * (1 << (2 * bits))) // x.denominator)
    k = isqrt(t)
    if k * k < t:
        k += 1
    return Fraction(k, 1 << bits)


def sqrt_brackets(x, bits: int = 32) -> Bracket:
    x = Fraction(x)
    return sqrt_lower(x, bits), sqrt_upper(x, bits)


def inv_sqrt_brackets(n: int, bits: int = 32) -> Bracket:
    """Enclose 1/sqrt(n) for a positive integer n."""
    if n < 1:
        raise PreconditionError("need n >= 1")
    lo, hi = sqrt_brackets(Fraction(n), bits)
    return 1 / hi, 1 / lo


def _ln_atanh(y: Fraction, terms: int) -> Bracket:
    """Enclose ln(y) for rational y in [1, 2] via 2 atanh((y-1)/(y+1)).

    The argument stays <= 1/3, so the positive-term series converges
    geometrically and its tail is bounded by a geometric series.
    """
    x = (y - 1) / (y + 1)
    if x == 0:
        return Fraction(0), Fraction(0)
    x2 = x * x
    acc = Fraction(0)
    power = x
    for k in range(terms):
        acc += power / (2 * k + 1)
        power *= x2
    tail = power / ((2 * terms + 1) * (1 - x2))
    return 2 * acc, 2 * (acc + tail)


def ln_brackets_rational(x: Fraction, terms: int = 24) -> Bracket:
    """Enclose ln(x) for a positive rational x by power-of-two reduction."""
    x = Fraction(x)
    if x <= 0:
        raise PreconditionError("ln of a nonpositive number")
    if x < 1:
        lo, hi = ln_brackets_rational(1 / x, terms)
        return -hi, -lo
    k = (x.numerator // x.denominator).bit_length() - 1
    m = x / (1 << k)
    if m > 2:  # can happen when x/2^k is in (2, 2]; renormalize
        k += 1
        m = x / (1 << k)
    ln2_lo, ln2_hi = _ln_atanh(Fraction(2), terms)
    m_lo, m_hi = _ln_atanh(m, terms)
    return k * ln2_lo + m_lo, k * ln2_hi + m_hi


def ln_brackets(n: int, terms: int = 24) -> Bracket:
    return ln_brackets_rational(Fraction(n), terms)


def one_plus_ln_brackets(n: int, terms: int = 24) -> Bracket:
    lo, hi = ln_brackets(n, terms)
    return 1 + lo, 1 + hi


def log2_brackets(x: Fraction, terms: int = 24) -> Bracket:
    """Enclose log2(x) = ln(x)/ln(2) for positive rational x."""
    ln_lo, ln_hi = ln_brackets_rational(x, terms)
    l2_lo, l2_hi = _ln_atanh(Fraction(2), terms)
    lo = ln_lo / l2_hi if ln_lo >= 0 else ln_lo / l2_lo
    hi = ln_hi / l2_lo if ln_hi >= 0 else ln_hi / l2_hi
    return lo, hi


def e_brackets(terms: int = 20) -> Bracket:
    """Enclose Euler's number by the factorial series with its tail bound."""
    acc = Fraction(0)
    fact = 1
    for k in range(terms + 1):
        if k:
            fact *= k
        acc += Fraction(1, fact)
    tail = Fraction(2, fact * (terms + 1))
    return acc, acc + tail


def pow2_brackets(exponent, bits: int = 24) -> Bracket:
    """Enclose 2**exponent for any rational exponent.

    Works digit by digit on the binary expansion of the fractional part,
    using directed-rounded dyadic square roots of 2; each step keeps the
    denominators bounded, so arbitrary exponent denominators stay cheap.
    """
    e = Fraction(exponent)
    if e < 0:
        lo, hi = pow2_brackets(-e, bits)
        return 1 / hi, 1 / lo
    k = e.numerator // e.denominator
    frac = e - k
    base = Fraction(1 << k)
    if frac == 0:
        return base, base
    work = 2 * bits + 8
    lo_acc, hi_acc = Fraction(1), Fraction(1)
    r_lo, r_hi = Fraction(2), Fraction(2)  # brackets of 2^(1/2^j)
    f = frac
    for _ in range(bits):
        r_lo = sqrt_lower(r_lo, work)
        r_hi = sqrt_upper(r_hi, work)
        f *= 2
        if f >= 1:
            f -= 1
            lo_acc = _round_down(lo_acc * r_lo, work)
            hi_acc = _round_up(hi_acc * r_hi, work)
        if f == 0:
            break
    if f != 0:
        # unresolved tail exponent is below 2^-bits; absorb one more factor
        hi_acc = _round_up(hi_acc * r_hi, work)
    return base * lo_acc, base * hi_acc


def pow_brackets(base, exponent, bits: int = 24) -> Bracket:
    """Enclose base**exponent for positive rational base and exponent."""
    b = Fraction(base)
    e = Fraction(exponent)
    if b <= 0:
        raise PreconditionError("pow of a nonpositive base")
    if e == 0 or b == 1:
        return Fraction(1), Fraction(1)
    log_lo, log_hi = log2_brackets(b)
    candidates = [e * log_lo, e * log_hi]
    x_lo, x_hi = min(candidates), max(candidates)
    return pow2_brackets(x_lo, bits)[0], pow2_brackets(x_hi, bits)[1]


def root_brackets(base, p: int, q: int, bits: int = 24) -> Bracket:
    """Enclose base**(p/q) for base >= 0 and q >= 1.

    Small q uses exact dyadic binary search (comparisons are integer power
    comparisons); larger q goes through logarithms.
    """
    base = Fraction(base)
    if base < 0:
        raise PreconditionError("root of a negative base")
    if q < 1:
        raise PreconditionError("root order must be >= 1")
    if base == 0:
        return (Fraction(0), Fraction(0)) if p > 0 else (Fraction(1), Fraction(1))
    if p == 0:
        return Fraction(1), Fraction(1)
    if p < 0:
        lo, hi = root_brackets(base, -p, q, bits)
        return 1 / hi, 1 / lo
    g = Fraction(p, q)
    p, q = g.numerator, g.denominator
    if q > 8 or abs(p) > 64:
        return pow_brackets(base, Fraction(p, q), bits)
    target_num = base.numerator ** p
    target_den = base.denominator ** p

    def leq(m: Fraction) -> bool:
        return m.numerator ** q * target_den <= m.denominator ** q * target_num

    hi = Fraction(1)
    while not leq(hi):
        hi /= 2
    while leq(hi * 2):
        hi *= 2
    lo = hi
    hi *= 2
    for _ in range(bits + 4):
        if hi - lo <= Fraction(1, 1 << bits):
            break
        mid = _round_down((lo + hi) / 2, bits + 8)
        if mid <= lo or mid >= hi:
            mid = (lo + hi) / 2
        if leq(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi
