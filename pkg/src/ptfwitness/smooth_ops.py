"""Manipulation toolkit for locally smooth functions on integer boxes.

Dominant-coordinate selection, concentration checks for product
distributions, weight transfer (moving all mass below a weight threshold
without low-degree polynomials noticing), cap and ball mass comparisons,
anchored zeroizers, heavy-tail removal, and min-smooth redistribution.

Every operation returns a certificate whose inequalities were re-checked
by an independent pass over the dense table.  Irrational thresholds
(factors of e, 1 + ln n, fractional powers) are handled through stored
two-sided rational brackets; a check passes only when it passes against
the adverse side of its bracket.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .brackets import e_brackets, one_plus_ln_brackets, pow2_brackets, sqrt_lower
from .core import Domain, FnTable, box, orth, smoothness_constant
from .corrector import build_zeta_u, build_zeta_uv
from .errors import ConstructionError, PreconditionError
from .mixtures import FamilySpec, ProductMixture

F = Fraction

Point = tuple[int, ...]


# ------------------------------------------------------------- heavy sets


@dataclass(frozen=True)
class HeavySet:
    indices: frozenset[int]
    theta: Fraction
    large_ok: bool      # |S| >= ||v||_1 / (2 ||v||_inf)
    area_ok: bool       # min_S |v_i| * |S| >= theta / (2 * upper(1 + ln n))
    outside_ok: bool    # sum off S of |v_i| < theta
    log_bracket_hi: Fraction


def select_heavy_set(v, theta) -> HeavySet:
    """A deterministic set of dominant coordinates.

    Grows prefixes of the magnitude-sorted coordinate order until the
    off-set mass drops below theta; each grown prefix keeps the size and
    area guarantees.  Ties are broken by coordinate index so the output is
    reproducible.
    """
    v = [F(x) for x in v]
    theta = F(theta)
    n = len(v)
    total = sum(abs(x) for x in v)
    if not (total >= theta > 0):
        raise PreconditionError("need ||v||_1 >= theta > 0")
    _, log_hi = one_plus_ln_brackets(n)
    order = sorted(range(n), key=lambda i: (-abs(v[i]), i))
    mags = [abs(v[i]) for i in order]

    chosen = 0  # prefix length of `order` selected so far

    def grow(start: int) -> int:
        """Smallest prefix length k > start of the remaining suffix order
        meeting both regularity conditions for the remaining vector."""
        rem = mags[start:]
        rem_total = sum(rem)
        rem_inf = rem[0] if rem else F(0)
        if rem_inf == 0:
            raise ConstructionError("cannot grow a heavy set over zeros")
        need_size = rem_total / (2 * rem_inf)
        for k in range(1, len(rem) + 1):
            if k >= need_size and k * rem[k - 1] * (2 * log_hi) >= rem_total:
                return start + k
        raise ConstructionError("no regular prefix found; bracket too loose")

    chosen = grow(0)
    while sum(mags[chosen:]) >= theta:
        chosen = grow(chosen)

    S = frozenset(order[:chosen])
    vinf = max(abs(x) for x in v)
    large_ok = len(S) * 2 * vinf >= total
    min_s = min(abs(v[i]) for i in S)
    area_ok = min_s * len(S) * 2 * log_hi >= theta
    outside_ok = sum(abs(v[i]) for i in range(n) if i not in S) < theta
    hs = HeavySet(indices=S, theta=theta, large_ok=large_ok, area_ok=area_ok,
                  outside_ok=outside_ok, log_bracket_hi=log_hi)
    if not (large_ok and area_ok and outside_ok):
        raise ConstructionError(f"heavy set failed its certificate: {hs}")
    return hs


# ---------------------------------------------------------- concentration


@dataclass
class ConcentrationReport:
    theta: Fraction
    precondition_ok: bool
    envelope_ok: bool
    tail: Fraction
    bound_lower: Fraction
    passed: bool


def check_concentration(lambdas: list[FnTable], C, alpha, theta) -> ConcentrationReport:
    """Exact tail mass of a product of univariate distributions against the
    alpha^(theta/2) target.

    The envelope and the tail are exact; alpha^(theta/2) is compared on its
    adverse (lower) side when theta is odd, and the precondition involving
    e and ln n is checked against upper brackets.
    """
    C, alpha, theta = F(C), F(alpha), F(theta)
    if not (0 <= alpha <= 1) or C < 0:
        raise PreconditionError("need 0 <= alpha <= 1 and C >= 0")
    n = len(lambdas)
    envelope_ok = True
    for lam in lambdas:
        if lam.domain.n != 1 or not lam.is_distribution():
            raise PreconditionError("factors must be univariate distributions")
        for (t,), val in lam.entries.items():
            if val * (t + 1) ** 2 > C * alpha ** t:
                envelope_ok = False
    e_lo, e_hi = e_brackets()
    _, log_hi = one_plus_ln_brackets(n)
    precondition_ok = theta >= 8 * C * e_hi * n * log_hi
    # exact weight-sum distribution by convolution
    weight_mass: dict[int, Fraction] = {0: F(1)}
    for lam in lambdas:
        nxt: dict[int, Fraction] = {}
        for w, p in weight_mass.items():
            for (t,), val in lam.entries.items():
                nxt[w + t] = nxt.get(w + t, F(0)) + p * val
        weight_mass = nxt
    tail = sum((p for w, p in weight_mass.items() if w >= theta), F(0))
    if theta.denominator == 1 and theta.numerator % 2 == 0:
        bound_lower = alpha ** (theta.numerator // 2)
    else:
        # adverse side: a lower bracket of alpha^(theta/2)
        half = theta / 2
        ip = half.numerator // half.denominator
        frac = half - ip
        bound_lower = alpha ** ip * _rational_pow_lower(alpha, frac)
    passed = envelope_ok and precondition_ok and tail <= bound_lower
    return ConcentrationReport(theta=theta, precondition_ok=precondition_ok,
                               envelope_ok=envelope_ok, tail=tail,
                               bound_lower=bound_lower, passed=passed)


def _rational_pow_lower(base: Fraction, expo: Fraction, bits: int = 24) -> Fraction:
    if base == 0:
        return F(0) if expo > 0 else F(1)
    if expo == 0:
        return F(1)
    if expo.denominator == 2:
        return sqrt_lower(base ** expo.numerator, bits)
    from .brackets import pow_brackets

    return pow_brackets(base, expo, bits)[0]


# ------------------------------------------------------------ cap and ball


@dataclass
class CapBallReport:
    theta: int
    d: int
    K: Fraction
    smooth_ok: bool
    cap_ok: bool
    ball_ok: bool
    checked_anchors: int


def _ball_points(dom: Domain, u: Point, d: int):
    for p in dom.points():
        if sum(abs(a - b) for a, b in zip(p, u)) <= d:
            yield p


def verify_cap_ball(lam: FnTable, theta: int, d: int, K=None,
                    anchors: list[Point] | None = None) -> CapBallReport:
    """Exact checks of the two mass-comparison inequalities for a K-smooth
    distribution on the weight-capped box."""
    dom = lam.domain
    if any(dom.offset):
        raise PreconditionError("cap/ball checks expect a zero-based box")
    if theta < d:
        raise PreconditionError("need theta >= d")
    k_actual = smoothness_constant(lam, weight_cap=theta)
    if k_actual is None:
        raise PreconditionError("function vanishes inside the region")
    K = k_actual if K is None else F(K)
    smooth_ok = k_actual <= K
    n = dom.n
    cap_mass = lam.mass(hi=theta)
    cap_ok = cap_mass <= K ** d * comb(n + d, d) * lam.mass(hi=theta - d)
    ball_ok = True
    total_r = sum(dom.bounds)
    if not (2 * d < min(theta, total_r)):
        raise PreconditionError("ball comparison needs d < min(theta, sum r_i) / 2")
    if anchors is None:
        anchors = list(dom.points())
    factor = 2 ** (d + 1) * K ** (2 * d + 1) * comb(n + d, d)
    for u in anchors:
        ball = set(_ball_points(dom, u, d))
        outside = sum((v for p, v in lam.entries.items()
                       if sum(p) <= theta and p not in ball), F(0))
        if cap_mass > factor * outside:
            ball_ok = False
    return CapBallReport(theta=theta, d=d, K=K, smooth_ok=smooth_ok,
                         cap_ok=cap_ok, ball_ok=ball_ok,
                         checked_anchors=len(anchors))


# -------------------------------------------------------------- zeroizers


def _diam(points) -> int:
    pts = list(points)
    if len(pts) > 5000:
        raise PreconditionError("support too large for exact diameter scan")
    best = 0
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            dd = sum(abs(a - b) for a, b in zip(p, q))
            if dd > best:
                best = dd
    return best


@dataclass
class ZuCertificate:
    u: Point
    d: int
    theta: int
    K: Fraction
    support_ok: bool
    at_u: Fraction
    orth_ok: bool
    l1: Fraction
    l1_bound: Fraction
    outside_factor: Fraction       # max |Z_u(x)| / Lambda(x) over x != u
    outside_factor_bound: Fraction


def build_Zu(lam: FnTable, u: Point, d: int, theta: int,
             K=None) -> tuple[FnTable, ZuCertificate]:
    """An anchored zeroizer for a locally smooth distribution: value 1 at u,
    orthogonal beyond degree d, supported in the weight cap plus the anchor,
    and pointwise dominated by a computed multiple of the distribution."""
    dom = lam.domain
    if any(dom.offset) or dom.window is not None:
        raise PreconditionError("zeroizer expects a zero-based box domain")
    u = tuple(u)
    if not dom.contains(u):
        raise PreconditionError("anchor outside the box")
    total_r = sum(dom.bounds)
    if not (3 * d < min(theta, total_r)):
        raise PreconditionError("need d < min(theta, sum r_i) / 3")
    if not lam.is_distribution() or any(sum(p) > theta for p in lam.entries):
        raise PreconditionError("need a probability distribution on the weight cap")
    k_actual = smoothness_constant(lam, weight_cap=theta)
    if k_actual is None:
        raise PreconditionError("distribution vanishes inside the region")
    K = k_actual if K is None else F(K)
    if k_actual > K:
        raise PreconditionError("distribution is not K-smooth at the given K")

    ball = set(_ball_points(dom, u, d))
    targets = [p for p in dom.points() if sum(p) <= theta - d and p not in ball]
    mass = sum((lam(p) for p in targets if lam(p)), F(0))
    if mass == 0:
        raise ConstructionError("no mass outside the ball; cap/ball bounds violated")
    acc: dict[Point, Fraction] = {}
    for vpt in targets:
        w = lam(vpt)
        if not w:
            continue
        zeta, _ = build_zeta_uv(u, vpt, d)
        for p, val in zeta.entries.items():
            cur = acc.get(p, F(0)) + w * val
            if cur == 0:
                acc.pop(p, None)
            else:
                acc[p] = cur
    zu = FnTable(dom, {p: v / mass for p, v in acc.items()})

    n = dom.n
    diam = _diam(set(lam.entries) | {u})
    support_ok = all(sum(p) <= theta or p == u for p in zu.entries)
    at_u = zu(u)
    orth_ok = orth(zu, cap=d).ge(d + 1)
    l1_bound = F(2 ** d * comb(diam, d) + 1)
    outside = F(0)
    for p, v in zu.entries.items():
        if p != u:
            outside = max(outside, abs(v) / lam(p))
    factor_bound = (F(2 ** (3 * d + 1)) * K ** (4 * d + 1)
                    * comb(n + d, d) ** 3 * comb(diam, d))
    cert = ZuCertificate(u=u, d=d, theta=theta, K=K, support_ok=support_ok,
                         at_u=at_u, orth_ok=orth_ok, l1=zu.l1(), l1_bound=l1_bound,
                         outside_factor=outside, outside_factor_bound=factor_bound)
    if not (support_ok and at_u == 1 and orth_ok and zu.l1() <= l1_bound
            and outside <= factor_bound):
        raise ConstructionError(f"zeroizer failed its certificate: {cert}")
    return zu, cert


@dataclass
class ZeroOutCertificate:
    d: int
    theta: int
    K: Fraction
    trivial: bool
    support_ok: bool
    orth_ok: bool
    distance_factor: Fraction
    distance_factor_bound: Fraction


def zero_out_heavy(phi: FnTable, d: int, theta: int,
                   K=None) -> tuple[FnTable, ZeroOutCertificate]:
    """Remove all support above the weight cap without low-degree
    polynomials noticing, at a pointwise cost proportional to the removed
    mass.  Trivial when nothing lies above the cap."""
    dom = phi.domain
    if any(dom.offset) or dom.window is not None:
        raise PreconditionError("expected a zero-based box domain")
    if not (3 * d < theta):
        raise PreconditionError("need d < theta / 3")
    low = phi.restrict_weight(hi=theta)
    if low.is_zero():
        raise PreconditionError("function vanishes on the weight cap")
    heavy = {p: v for p, v in phi.entries.items() if sum(p) > theta}
    if not heavy or theta > sum(dom.bounds):
        cert = ZeroOutCertificate(d=d, theta=theta, K=F(1), trivial=True,
                                  support_ok=True, orth_ok=True,
                                  distance_factor=F(0),
                                  distance_factor_bound=F(0))
        return phi, cert
    low_l1 = low.l1()
    lam = FnTable(dom, {p: abs(v) / low_l1 for p, v in low.entries.items()},
                  _trusted=True)
    k_actual = smoothness_constant(lam, weight_cap=theta)
    if k_actual is None:
        raise PreconditionError("function is not locally smooth on the cap")
    K = k_actual if K is None else F(K)
    acc: dict[Point, Fraction] = dict(phi.entries)
    worst_zu_factor = F(0)
    for u, val in sorted(heavy.items()):
        zu, zu_cert = build_Zu(lam, u, d, theta, K=K)
        worst_zu_factor = max(worst_zu_factor, zu_cert.outside_factor)
        for p, zv in zu.entries.items():
            cur = acc.get(p, F(0)) - val * zv
            if cur == 0:
                acc.pop(p, None)
            else:
                acc[p] = cur
    phi_t = FnTable(dom, acc, _trusted=True)
    support_ok = all(sum(p) <= theta for p in phi_t.entries)
    diff = phi - phi_t
    orth_ok = orth(diff, cap=d).ge(d + 1)
    heavy_l1 = sum((abs(v) for v in heavy.values()), F(0))
    factor = F(0)
    for p in dom.points():
        if sum(p) <= theta and phi(p):
            factor = max(factor, abs(diff(p)) / abs(phi(p)))
        elif sum(p) <= theta and diff(p):
            raise ConstructionError("difference escaped the support of phi")
    n = dom.n
    diam = _diam(phi.entries)
    bound = (F(2 ** (3 * d + 1)) * K ** (4 * d + 1) * comb(n + d, d) ** 3
             * comb(diam, d) * heavy_l1 / low_l1)
    cert = ZeroOutCertificate(d=d, theta=theta, K=K, trivial=False,
                              support_ok=support_ok, orth_ok=orth_ok,
                              distance_factor=factor,
                              distance_factor_bound=bound)
    if not (support_ok and orth_ok and factor <= bound):
        raise ConstructionError(f"heavy-tail removal failed its certificate: {cert}")
    return phi_t, cert


def zero_out_heavy_translated(phi: FnTable, d: int, theta: int,
                              K=None) -> tuple[FnTable, ZeroOutCertificate]:
    """Same as zero_out_heavy for a function living on a translated box."""
    dom = phi.domain
    shift = dom.offset
    base = sum(shift)
    if 3 * d >= theta - base:
        raise PreconditionError("need d < (theta - sum offsets) / 3")
    base_dom = Domain(dom.bounds)
    moved = FnTable(base_dom,
                    {tuple(a - s for a, s in zip(p, shift)): v
                     for p, v in phi.entries.items()}, _trusted=True)
    out, cert = zero_out_heavy(moved, d, theta - base, K=K)
    back = FnTable(dom, {tuple(a + s for a, s in zip(p, shift)): v
                         for p, v in out.entries.items()}, _trusted=True)
    return back, cert


@dataclass
class ConvexZeroOutCertificate:
    d: int
    theta: int
    delta_tail: Fraction  # max per-term tail mass above theta
    orth_ok: bool
    support_ok: bool
    pointwise_factor: Fraction
    is_distribution: bool
    term_certs: list[ZeroOutCertificate]


def zero_out_heavy_convex(mix: ProductMixture, d: int, theta: int
                          ) -> tuple[FnTable, ConvexZeroOutCertificate]:
    """Apply the translated zeroizer to every term of a convex combination
    of product distributions and recombine."""
    if not mix.coefficients_convex():
        raise PreconditionError("expected a convex combination")
    from .core import tighten_domain

    total: FnTable | None = None
    dense_total: FnTable | None = None
    term_certs = []
    delta_tail = F(0)
    for coeff, labels in mix.terms:
        term = tighten_domain(ProductMixture(mix.factors, [(F(1), labels)]).densify())
        tail = term.mass(lo=theta + 1)
        delta_tail = max(delta_tail, tail)
        reduced, cert = zero_out_heavy_translated(term, d, theta)
        term_certs.append(cert)
        scaled = reduced.scale(coeff)
        dense_term = term.scale(coeff)
        total = scaled if total is None else total + scaled
        dense_total = dense_term if dense_total is None else dense_total + dense_term
    diff = dense_total - total
    orth_ok = orth(diff, cap=d).ge(d + 1)
    support_ok = all(sum(p) <= theta for p in total.entries) and \
        all(p in dense_total.entries for p in total.entries)
    factor = F(0)
    for p, v in dense_total.entries.items():
        if sum(p) <= theta and diff(p):
            factor = max(factor, abs(diff(p)) / abs(v))
    is_dist = total.is_distribution()
    cert = ConvexZeroOutCertificate(d=d, theta=theta, delta_tail=delta_tail,
                                    orth_ok=orth_ok, support_ok=support_ok,
                                    pointwise_factor=factor,
                                    is_distribution=is_dist,
                                    term_certs=term_certs)
    if not (orth_ok and support_ok):
        raise ConstructionError("convex zeroizer failed its certificate")
    return total, cert


# ---------------------------------------------------------- redistribution


@dataclass
class RedistributeCertificate:
    d: int
    theta: int
    K: Fraction
    N: Fraction
    orth_ok: bool
    l1_ok: bool
    sign_ok: bool
    min_smooth_factor: Fraction        # the guaranteed ||phi||_1 / N
    min_smooth_factor_actual: Fraction  # exact min of |phi*| / Lambda*


def redistribute(phi: FnTable, lam_star: FnTable, d: int, theta: int,
                 K=None) -> tuple[FnTable, RedistributeCertificate]:
    """Make a locally smooth function globally min-smooth relative to a
    target distribution, preserving signs and low-degree indistinguishability.
    """
    dom = phi.domain
    if any(dom.offset) or dom.window is not None:
        raise PreconditionError("expected a zero-based box domain")
    if phi.is_zero():
        cert = RedistributeCertificate(d=d, theta=theta, K=F(1), N=F(1),
                                       orth_ok=True, l1_ok=True, sign_ok=True,
                                       min_smooth_factor=F(0),
                                       min_smooth_factor_actual=F(0))
        return phi, cert
    total_r = sum(dom.bounds)
    if not (3 * d < min(theta, total_r)):
        raise PreconditionError("need d < min(theta, sum r_i) / 3")
    region = [p for p in dom.points() if sum(p) <= theta]
    if set(phi.entries) != set(region):
        raise PreconditionError("function must be supported on the whole cap region")
    if not lam_star.is_distribution() or any(sum(p) > theta for p in lam_star.entries):
        raise PreconditionError("target must be a distribution on the cap region")
    l1 = phi.l1()
    lam = FnTable(dom, {p: abs(v) / l1 for p, v in phi.entries.items()}, _trusted=True)
    k_actual = smoothness_constant(lam, weight_cap=theta)
    if k_actual is None:
        raise PreconditionError("function is not locally smooth on the cap")
    K = k_actual if K is None else F(K)
    n = dom.n
    diam = _diam(phi.entries)
    N = (F(2 ** (3 * d + 1)) * K ** (4 * d + 1) * comb(n + d, d) ** 3
         * comb(diam, d))
    acc: dict[Point, Fraction] = dict(phi.entries)
    for u in sorted(lam_star.entries):
        w = lam_star(u)
        zu, _ = build_Zu(lam, u, d, theta, K=K)
        sgn = 1 if phi(u) >= 0 else -1
        scale = l1 / N * sgn * w
        for p, zv in zu.entries.items():
            cur = acc.get(p, F(0)) + scale * zv
            if cur == 0:
                acc.pop(p, None)
            else:
                acc[p] = cur
    phi_star = FnTable(dom, acc, _trusted=True)
    orth_ok = orth(phi - phi_star, cap=d).ge(d + 1)
    l1_ok = phi_star.l1() <= 2 * l1
    sign_ok = all(phi(p) * phi_star(p) >= 0 for p in region)
    guaranteed = l1 / N
    actual = None
    for p, w in lam_star.entries.items():
        ratio = abs(phi_star(p)) / w
        actual = ratio if actual is None else min(actual, ratio)
    actual = actual if actual is not None else F(0)
    cert = RedistributeCertificate(d=d, theta=theta, K=K, N=N, orth_ok=orth_ok,
                                   l1_ok=l1_ok, sign_ok=sign_ok,
                                   min_smooth_factor=guaranteed,
                                   min_smooth_factor_actual=actual)
    ok = orth_ok and l1_ok and sign_ok and actual >= guaranteed
    if not ok:
        raise ConstructionError(f"redistribution failed its certificate: {cert}")
    return phi_star, cert


# ---------------------------------------------------------- weight transfer


@dataclass
class WeightReduceCertificate:
    d: int
    theta: int
    support_ok: bool
    orth_ok: bool
    statistical_factor: Fraction | None
    statistical_bound_lower: Fraction | None
    preconditions_ok: bool
    heavy_points: int
    is_distribution: bool


def weight_reduce(mix: ProductMixture, d: int, theta: int,
                  family: FamilySpec | None = None,
                  enforce_preconditions: bool = True
                  ) -> tuple[FnTable, FnTable, WeightReduceCertificate]:
    """Weight transfer for a single product of bounded univariate
    distributions: returns (reduced table, correction, certificate).

    The correction is orthogonal beyond degree d and removes exactly the
    support above weight 2 theta.  When the family preconditions hold, the
    pointwise size of the correction below 2 theta is also certified
    against the closed-form factor.
    """
    if len(mix.terms) != 1 or mix.terms[0][0] != 1:
        raise PreconditionError("weight_reduce expects a single unit product term")
    if not (theta >= 2 * d >= 2):
        raise PreconditionError("need theta >= 2d and d >= 1")
    labels = mix.terms[0][1]
    n = len(labels)
    factors = [mix.factors[lab] for lab in labels]
    preconditions_ok = True
    if family is not None:
        for f in factors:
            if not family.member(f):
                preconditions_ok = False
        e_lo, e_hi = e_brackets()
        _, log_hi = one_plus_ln_brackets(n)
        if F(theta) * family.c ** 2 < 4 * e_hi * n * log_hi:
            preconditions_ok = False
    else:
        preconditions_ok = False
    if enforce_preconditions and not preconditions_ok:
        raise PreconditionError("family preconditions for weight transfer not met")

    dense = mix.densify()
    if not dense.is_distribution():
        raise PreconditionError("expected a probability distribution")
    heavy = {p: v for p, v in dense.entries.items() if sum(p) >= 2 * theta}
    zeta: dict[Point, Fraction] = {}
    for vpt, mass_v in sorted(heavy.items()):
        hs = select_heavy_set(vpt, theta)
        S = sorted(hs.indices)
        u = tuple(vpt[i] for i in S)
        zu_table, _ = build_zeta_u(u, d)
        for w, val in zu_table.entries.items():
            p = list(vpt)
            for idx, coord in zip(S, w):
                p[idx] = coord
            p = tuple(p)
            cur = zeta.get(p, F(0)) + mass_v * val
            if cur == 0:
                zeta.pop(p, None)
            else:
                zeta[p] = cur
    zeta_t = FnTable(dense.domain, zeta, _trusted=True)
    reduced = dense - zeta_t
    support_ok = all(sum(p) < 2 * theta and p in dense.entries
                     for p in reduced.entries)
    orth_ok = (not heavy) or orth(zeta_t, cap=d).ge(d + 1)
    statistical_factor = None
    bound_lower = None
    if family is not None:
        statistical_factor = F(0)
        for p, v in dense.entries.items():
            if sum(p) < 2 * theta and zeta_t(p):
                statistical_factor = max(statistical_factor, abs(zeta_t(p)) / v)
        r, c, alpha = family.r, family.c, family.alpha or F(0)
        exponent = -(-theta // r) + alpha * -(-theta // 2) - 2
        bound_lower = F(8 * n * r, 1) ** d / c ** d / pow2_brackets(exponent)[1]
    cert = WeightReduceCertificate(
        d=d, theta=theta, support_ok=support_ok, orth_ok=orth_ok,
        statistical_factor=statistical_factor,
        statistical_bound_lower=bound_lower,
        preconditions_ok=preconditions_ok,
        heavy_points=len(heavy),
        is_distribution=reduced.is_distribution())
    if not (support_ok and orth_ok):
        raise ConstructionError(f"weight transfer failed its certificate: {cert}")
    if preconditions_ok and statistical_factor is not None \
            and bound_lower is not None and statistical_factor > bound_lower:
        raise ConstructionError("pointwise correction exceeded the closed-form factor")
    return reduced, zeta_t, cert


def weight_reduce_convex(mix: ProductMixture, d: int, theta: int,
                         family: FamilySpec | None = None,
                         enforce_preconditions: bool = True
                         ) -> tuple[FnTable, WeightReduceCertificate]:
    """Weight transfer for convex combinations of translated products: each
    term is shifted to the base box, reduced, and shifted back."""
    if not mix.coefficients_convex():
        raise PreconditionError("expected a convex combination")
    base_family = None
    if family is not None:
        base_family = FamilySpec(kind=family.kind, r=family.r, c=family.c,
                                 alpha=family.alpha, delta=0, bits=family.bits)
    total: FnTable | None = None
    dense_total: FnTable | None = None
    worst: WeightReduceCertificate | None = None
    max_shift = 0
    for coeff, labels in mix.terms:
        shifts = []
        base_factors = {}
        base_labels = []
        for i, lab in enumerate(labels):
            t = mix.factors[lab]
            # translate each factor to base form by its least support point
            a = min((p[0] for p in t.entries), default=t.domain.offset[0])
            if family is not None and a - t.domain.offset[0] > family.delta:
                raise PreconditionError("factor translated beyond the family's range")
            shifts.append(a)
            base = FnTable(Domain(t.domain.bounds),
                           {(p[0] - a,): v for p, v in t.entries.items()},
                           _trusted=True)
            base_lab = f"{lab}@0"
            base_factors[base_lab] = base
            base_labels.append(base_lab)
        max_shift = max(max_shift, sum(shifts))
        sub = ProductMixture(base_factors, [(F(1), tuple(base_labels))])
        reduced, _, cert = weight_reduce(sub, d, theta, family=base_family,
                                         enforce_preconditions=enforce_preconditions)
        if worst is None or not cert.is_distribution:
            worst = cert
        shifted = FnTable(
            mix.ambient_domain(),
            {tuple(a + s for a, s in zip(p, shifts)): coeff * v
             for p, v in reduced.entries.items()})
        dense_term = ProductMixture(mix.factors, [(coeff, labels)]).densify()
        total = shifted if total is None else total + shifted
        dense_total = dense_term if dense_total is None else dense_total + dense_term
    diff = dense_total - total
    orth_ok = diff.is_zero() or orth(diff, cap=d).ge(d + 1)
    support_ok = all(sum(p) < 2 * theta + max_shift for p in total.entries)
    cert = WeightReduceCertificate(
        d=d, theta=theta, support_ok=support_ok, orth_ok=orth_ok,
        statistical_factor=None, statistical_bound_lower=None,
        preconditions_ok=worst.preconditions_ok if worst else False,
        heavy_points=worst.heavy_points if worst else 0,
        is_distribution=total.is_distribution())
    if not (support_ok and orth_ok):
        raise ConstructionError("convex weight transfer failed its certificate")
    return total, cert
