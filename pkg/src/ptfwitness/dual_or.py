"""Univariate dual objects for the OR function.

`build_omega` produces a function on {0..n} that alternates in sign,
concentrates more than (1-eps)/2 of its l1 mass at 0, and is orthogonal
to all low-degree polynomials.  `build_psi` spreads shifted and reflected
copies of omega over {0..N} to obtain a unit-l1 dual object that is
nonzero with sign (-1)^t at every point and keeps the orthogonality.

The shift weights and the mixing constant delta are exact positive
rationals.  Orthogonality, the sign pattern, and the mass at zero hold
for any such choice; the envelope constants are computed from the result
rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .brackets import Bracket, pow2_brackets
from .core import FnTable, box, orth
from .errors import ConstructionError, PreconditionError

F = Fraction


@dataclass(frozen=True)
class OmegaSpec:
    n: int
    eps: Fraction
    delta_param: int  # the odd modulus used for the support layout
    d: int
    support: tuple[int, ...] | None  # None in the fallback regime

    @property
    def fallback(self) -> bool:
        return self.support is None


@dataclass
class OmegaCertificate:
    spec: OmegaSpec
    l1: Fraction
    at_zero: Fraction
    heavy_at_zero: bool  # omega(0) > (1-eps)/2 * l1
    sign_ok: bool
    orth_claimed: int
    orth_value: int


def _omega_spec(n: int, eps: Fraction) -> OmegaSpec:
    eps = F(eps)
    if n < 1:
        raise PreconditionError("need n >= 1")
    if not (0 < eps < 1):
        raise PreconditionError("eps must lie strictly between 0 and 1")
    inv = 1 / eps
    ceil_inv = -(-inv.numerator // inv.denominator)
    big_delta = 8 * ceil_inv + 3
    if n <= big_delta:
        return OmegaSpec(n=n, eps=eps, delta_param=big_delta, d=0, support=None)
    d = 1
    while (d + 1) * (d + 1) * big_delta <= n:
        d += 1
    pts = sorted({1, (big_delta + 1) // 2} | {i * i * big_delta for i in range(d + 1)})
    return OmegaSpec(n=n, eps=eps, delta_param=big_delta, d=d, support=tuple(pts))


def omega_values(spec: OmegaSpec) -> dict[int, Fraction]:
    if spec.fallback:
        return {0: F(1), 1: F(-1)}
    S = spec.support
    out: dict[int, Fraction] = {}
    for t in S:
        below = sum(1 for i in S if i < t)
        prod = F(1)
        for i in S:
            if i != t:
                prod *= abs(t - i)
        out[t] = F((-1) ** below) / prod
    return out


def omega_binomial_form(spec: OmegaSpec) -> dict[int, Fraction]:
    """The equivalent binomial-weighted product formula; used as an
    independent cross-check of omega_values."""
    if spec.fallback:
        raise PreconditionError("binomial form only defined above the fallback regime")
    n, S = spec.n, set(spec.support)
    out = {}
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    from math import comb

    for t in range(n + 1):
        if t not in S:
            continue
        prod = 1
        for i in range(n + 1):
            if i not in S:
                prod *= t - i
        val = F((-1) ** (n + t + len(S) + 1) * comb(n, t) * prod, fact)
        if val:
            out[t] = val
    return out


def build_omega(n: int, eps) -> tuple[FnTable, OmegaCertificate]:
    spec = _omega_spec(n, F(eps))
    vals = omega_values(spec)
    table = FnTable(box([n]), {(t,): v for t, v in vals.items()})
    l1 = table.l1()
    at_zero = table((0,))
    heavy = at_zero > (1 - spec.eps) / 2 * l1
    sign_ok = all((v > 0) == (t % 2 == 0) for (t,), v in table.entries.items())
    claimed = 1 if spec.fallback else spec.d + 2
    r = orth(table, cap=n)
    if r.kind != "exact":
        raise ConstructionError("omega unexpectedly orthogonal to everything")
    cert = OmegaCertificate(spec=spec, l1=l1, at_zero=at_zero, heavy_at_zero=heavy,
                            sign_ok=sign_ok, orth_claimed=claimed, orth_value=r.value)
    if not heavy or not sign_ok or r.value < claimed:
        raise ConstructionError(f"omega failed its own certificate: {cert}")
    return table, cert


def default_delta(eps: Fraction) -> Fraction:
    """A rational stand-in just below 5 eps / (pi^2 (1 - eps))."""
    eps = F(eps)
    return eps / (2 * (1 - eps))


def default_weights(n: int, N: int) -> list[Fraction]:
    """Positive shift weights decaying like 1/(i^2 2^(i/sqrt(n)))."""
    s = isqrt(n)
    if s * s < n:
        s += 1
    return [F(1, i * i * 2 ** (-(-i // s))) for i in range(1, N + 1)]


@dataclass
class PsiCertificate:
    n: int
    N: int
    eps: Fraction
    delta: Fraction
    l1: Fraction
    at_zero: Fraction
    sign_ok: bool
    orth_claimed: int
    orth_value: int
    c_prime: Fraction
    c_double_prime: Fraction
    envelope_brackets: list[tuple[int, Fraction, Fraction]]
    omega_cert: OmegaCertificate
    psi_values: dict[int, Fraction] | None = None

    def envelope_holds(self) -> bool:
        """c'/((t+1)^2 B_t) <= |psi(t)| <= 1/(c'(t+1)^2 B_t) against the
        adverse side of each stored bracket for B_t = 2^(c'' t / sqrt(n))."""
        if self.c_prime <= 0:
            return False
        for t, lo, hi in self.envelope_brackets:
            a = abs(self.psi_values[t])
            if a < self.c_prime / ((t + 1) ** 2 * hi):
                return False
            if a > 1 / (self.c_prime * (t + 1) ** 2 * lo):
                return False
        return True


def build_psi(n: int, N: int | None = None, eps=F(1, 3), delta=None,
              weights: list[Fraction] | None = None,
              envelope_exponent: Fraction = F(1)) -> tuple[FnTable, PsiCertificate]:
    """A unit-l1 dual object for OR on {0..N} with strict sign pattern
    (-1)^t, mass more than (1-eps)/2 at zero, and certified orthogonality.

    The inner omega lives on {0..ceil(n/2)} so that shifted and reflected
    copies cover all of {0..N}.  Fails loudly when the chosen delta is too
    large to keep the mass at zero above the threshold.
    """
    eps = F(eps)
    if N is None:
        N = n
    if not (N >= n >= 1):
        raise PreconditionError("need N >= n >= 1")
    if not (0 < eps < 1):
        raise PreconditionError("eps must lie strictly between 0 and 1")
    half = -(-n // 2)
    omega_t, omega_cert = build_omega(half, eps / 6)
    scale = 1 / omega_cert.l1
    om = {t: v * scale for (t,), v in omega_t.entries.items()}

    delta = default_delta(eps) if delta is None else F(delta)
    if delta <= 0:
        raise PreconditionError("delta must be positive")
    if weights is None:
        weights = default_weights(n, N)
    weights = [F(w) for w in weights]
    if len(weights) < N or any(w <= 0 for w in weights):
        raise PreconditionError("need N positive weights")

    def om_at(t: int) -> Fraction:
        return om.get(t, F(0))

    cut = N - half
    psi_raw: dict[int, Fraction] = {}
    for t in range(N + 1):
        acc = om_at(t)
        for i in range(1, cut + 1):
            v = om_at(t - i)
            if v:
                acc += delta * (-1) ** i * weights[i - 1] * v
        for i in range(cut + 1, N + 1):
            v = om_at(i - t)
            if v:
                acc += delta * (-1) ** i * weights[i - 1] * v
        psi_raw[t] = acc

    total = sum(abs(v) for v in psi_raw.values())
    psi_vals = {t: v / total for t, v in psi_raw.items()}
    table = FnTable(box([N]), {(t,): v for t, v in psi_vals.items() if v})

    sign_ok = all(psi_vals[t] != 0 and (psi_vals[t] > 0) == (t % 2 == 0)
                  for t in range(N + 1))
    at_zero = psi_vals[0]
    if at_zero <= (1 - eps) / 2:
        raise ConstructionError(
            f"psi(0) = {at_zero} <= (1-eps)/2; delta {delta} too large, retry smaller")
    claimed = omega_cert.orth_claimed
    r = orth(table, cap=N)
    if r.kind != "exact" or r.value < claimed:
        raise ConstructionError("psi lost the orthogonality of omega")

    # envelope constants, with per-t dyadic brackets for 2^(c'' t / sqrt(n))
    cpp = F(envelope_exponent)
    brackets: list[tuple[int, Fraction, Fraction]] = []
    c_prime: Fraction | None = None
    for t in range(N + 1):
        lo, hi = _pow2_over_sqrt(cpp * t, n)
        brackets.append((t, lo, hi))
        a = abs(psi_vals[t])
        cand = min(a * (t + 1) ** 2 * lo, 1 / (a * (t + 1) ** 2 * hi))
        c_prime = cand if c_prime is None else min(c_prime, cand)

    cert = PsiCertificate(n=n, N=N, eps=eps, delta=delta, l1=table.l1(),
                          at_zero=at_zero, sign_ok=sign_ok,
                          orth_claimed=claimed, orth_value=r.value,
                          c_prime=c_prime, c_double_prime=cpp,
                          envelope_brackets=brackets, omega_cert=omega_cert,
                          psi_values=psi_vals)
    if table.l1() != 1 or not sign_ok or not cert.envelope_holds():
        raise ConstructionError(f"psi failed its own certificate: {cert}")
    return table, cert


def _pow2_over_sqrt(numer: Fraction, n: int, bits: int = 24) -> Bracket:
    """Brackets of 2^(numer / sqrt(n)) for rational numer >= 0."""
    if numer == 0:
        return F(1), F(1)
    from .brackets import inv_sqrt_brackets

    inv_lo, inv_hi = inv_sqrt_brackets(n, bits)
    lo = pow2_brackets(numer * inv_lo, bits)[0]
    hi = pow2_brackets(numer * inv_hi, bits)[1]
    return lo, hi
