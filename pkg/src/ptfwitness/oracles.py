"""Degree oracles: ground truth for every constructed witness.

Threshold degree and its relatives are computed by ladders of exact
feasibility programs.  At each level d the oracle asks for a sign-agreeing
weight function orthogonal to all monomials of degree < d; the first
infeasible level pins the value, its Farkas multipliers assemble into a
sign-representing polynomial, and the last feasible level supplies the
dual witness.  Both artifacts are re-checked before being returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    Domain,
    FnTable,
    eval_monomial,
    hypercube,
    monomials,
    orth,
)
from .errors import PreconditionError, VerificationError
from .lp import LPCertificate, LPProblem, solve

F = Fraction

Point = tuple[int, ...]


def bool_table(domain: Domain, ones: Iterable[Point]) -> FnTable:
    """A Boolean function as an FnTable storing its 1-points."""
    return FnTable(domain, {tuple(p): F(1) for p in ones})


def sign_table(f: FnTable) -> FnTable:
    """(-1)^f over the whole domain of a Boolean table."""
    out = {}
    for p in f.domain.points():
        out[p] = F(-1) if f(p) == 1 else F(1)
    return FnTable(f.domain, out, _trusted=True)


def negate_output(f: FnTable) -> FnTable:
    out = {p: F(1) for p in f.domain.points() if f(p) == 0}
    return FnTable(f.domain, out, _trusted=True)


def negate_inputs(f: FnTable) -> FnTable:
    if not f.domain.is_hypercube:
        raise PreconditionError("input negation defined on the hypercube")
    flip = lambda p: tuple(1 - b for b in p)
    return FnTable(f.domain, {flip(p): v for p, v in f.entries.items()}, _trusted=True)


@dataclass
class DegreeAnswer:
    value: int
    primal: dict[Point, Fraction] | None  # exponent vector -> coefficient
    dual: FnTable | None
    gamma: Fraction | None = None
    detail: dict = field(default_factory=dict)


def _monomial_rows(domain: Domain, max_deg: int) -> list[Point]:
    out: list[Point] = []
    for d in range(max_deg + 1):
        out.extend(monomials(domain.bounds, d))
    return out


def eval_poly(coeffs: dict[Point, Fraction], p: Point) -> Fraction:
    acc = F(0)
    for alpha, c in coeffs.items():
        if c:
            acc += c * eval_monomial(p, alpha)
    return acc


def poly_degree(coeffs: dict[Point, Fraction]) -> int:
    degs = [sum(a) for a, c in coeffs.items() if c]
    return max(degs) if degs else 0


def _dual_feasibility(points: list[Point], signs: list[int], domain: Domain,
                      level: int) -> LPCertificate:
    """LP for: nonnegative weights y, sum 1, with (-1)^f y orthogonal to all
    monomials of degree < level."""
    n_pts = len(points)
    prob = LPProblem(n_pts, nonneg=[True] * n_pts)
    for alpha in _monomial_rows(domain, level - 1):
        row = [F(s * eval_monomial(p, alpha)) for p, s in zip(points, signs)]
        prob.add(row, "==", 0)
    prob.add([F(1)] * n_pts, "==", 1)
    return solve(prob)


def _primal_from_farkas(cert: LPCertificate, domain: Domain, level: int,
                        points: list[Point], signs: list[int]) -> dict[Point, Fraction]:
    alphas = _monomial_rows(domain, level - 1)
    z = cert.farkas[: len(alphas)]
    w = cert.farkas[len(alphas)]
    if w <= 0:
        raise VerificationError("farkas normalization multiplier not positive")
    coeffs = {a: -zi / w for a, zi in zip(alphas, z) if zi}
    for p, s in zip(points, signs):
        if s * eval_poly(coeffs, p) < 1:
            raise VerificationError("recovered sign representation lacks margin")
    return coeffs


def threshold_degree(f: FnTable, cap: int | None = None) -> DegreeAnswer:
    """Least degree of a polynomial agreeing in sign with (-1)^f.

    Returns the exact value together with a margin-1 sign-representing
    polynomial at that degree and, when the value is positive, a dual
    witness: a sign-agreeing probability weighting orthogonal to every
    polynomial of lower degree.
    """
    dom = f.domain
    points = list(dom.points())
    if not points:
        raise PreconditionError("empty domain")
    signs = [(-1 if f(p) == 1 else 1) for p in points]
    if cap is None:
        cap = sum(dom.bounds)
    dual_witness: FnTable | None = None
    for level in range(1, cap + 2):
        cert = _dual_feasibility(points, signs, dom, level)
        if cert.status == "infeasible":
            value = level - 1
            primal = _primal_from_farkas(cert, dom, level, points, signs)
            if poly_degree(primal) > value:
                raise VerificationError("primal witness degree too high")
            if dual_witness is not None and not orth(dual_witness, cap=value - 1).ge(value):
                raise VerificationError("dual witness orthogonality failed re-check")
            return DegreeAnswer(value=value, primal=primal, dual=dual_witness)
        psi = FnTable(dom, {p: s * y for p, s, y in zip(points, signs, cert.x) if y},
                      _trusted=True)
        dual_witness = psi
    raise VerificationError(f"threshold degree exceeded cap {cap}; domain too rich")


def smooth_threshold_degree(f: FnTable, gamma: Fraction,
                            cap: int | None = None) -> DegreeAnswer:
    """Largest d witnessed by a distribution with pointwise floor gamma/|X|.

    Maximizes orth((-1)^f mu) over distributions mu >= gamma/|X| on the
    domain, by the same feasibility ladder as threshold_degree.  At
    gamma = 0 this equals the threshold degree.
    """
    gamma = F(gamma)
    if gamma < 0 or gamma > 1:
        raise PreconditionError("gamma must lie in [0, 1]")
    dom = f.domain
    points = list(dom.points())
    signs = [(-1 if f(p) == 1 else 1) for p in points]
    size = len(points)
    floor = gamma / size
    if cap is None:
        cap = sum(dom.bounds)
    n_pts = len(points)
    best_mu: FnTable | None = None
    value = 0
    for level in range(1, cap + 2):
        prob = LPProblem(n_pts, nonneg=[True] * n_pts)
        for alpha in _monomial_rows(dom, level - 1):
            row = [F(s * eval_monomial(p, alpha)) for p, s in zip(points, signs)]
            rhs = -floor * sum(s * eval_monomial(p, alpha) for p, s in zip(points, signs))
            prob.add(row, "==", rhs)
        prob.add([F(1)] * n_pts, "==", 1 - gamma)
        cert = solve(prob)
        if cert.status == "infeasible":
            break
        mu = {p: floor + nu for p, nu in zip(points, cert.x)}
        best_mu = FnTable(dom, mu)
        value = level
    if best_mu is not None:
        if best_mu.total() != 1 or any(best_mu(p) < floor for p in points):
            raise VerificationError("smooth witness failed distribution re-check")
        twisted = best_mu.hadamard(sign_table(f))
        if not orth(twisted, cap=value - 1).ge(value):
            raise VerificationError("smooth witness orthogonality failed re-check")
    return DegreeAnswer(value=value, primal=None, dual=best_mu, gamma=gamma)


@dataclass(frozen=True)
class Interval:
    """A convex subset of the line; open endpoints are realized as closed
    endpoints shifted inward by the margin parameter."""

    lo: Fraction | None = None  # None = unbounded below
    hi: Fraction | None = None
    lo_open: bool = False
    hi_open: bool = False

    def realized(self, margin: Fraction) -> tuple[Fraction | None, Fraction | None]:
        lo = self.lo + margin if (self.lo is not None and self.lo_open) else self.lo
        hi = self.hi - margin if (self.hi is not None and self.hi_open) else self.hi
        if lo is not None and hi is not None and lo > hi:
            raise PreconditionError("interval became empty after margin adjustment")
        return lo, hi

    @staticmethod
    def closed(lo, hi) -> "Interval":
        return Interval(F(lo), F(hi))

    @staticmethod
    def greater_than(a) -> "Interval":
        return Interval(F(a), None, lo_open=True)

    @staticmethod
    def less_than(a) -> "Interval":
        return Interval(None, F(a), hi_open=True)

    @staticmethod
    def everything() -> "Interval":
        return Interval(None, None)


THRESHOLD_INTERVALS = (Interval.greater_than(0), Interval.less_than(0), Interval.everything())


def approx_intervals(eps) -> tuple[Interval, Interval, Interval]:
    e = F(eps)
    return (Interval.closed(-e, e), Interval.closed(1 - e, 1 + e), Interval.closed(-e, 1 + e))


def one_sided_intervals(eps) -> tuple[Interval, Interval, Interval]:
    e = F(eps)
    return (Interval.closed(-e, e), Interval(F(1) - e, None), Interval.everything())


@dataclass
class PartialFn:
    """A Boolean function with don't-care points, all on a finite domain."""

    domain: Domain
    ones: frozenset[Point]
    stars: frozenset[Point] = frozenset()

    def value(self, p: Point) -> str:
        if p in self.stars:
            return "*"
        return "1" if p in self.ones else "0"


def total_fn(f: FnTable) -> PartialFn:
    return PartialFn(f.domain, frozenset(f.entries.keys()))


def iii_approx_degree(f: PartialFn, i0: Interval, i1: Interval, istar: Interval,
                      margin: Fraction = F(1), cap: int | None = None) -> DegreeAnswer:
    """Least degree of a polynomial mapping the 0-, 1-, and star-points of f
    into the three intervals.  Threshold degree, eps-approximate degree and
    one-sided approximate degree are instances of this oracle.
    """
    margin = F(margin)
    bands = {"0": i0.realized(margin), "1": i1.realized(margin), "*": istar.realized(margin)}
    dom = f.domain
    points = list(dom.points())
    if cap is None:
        cap = sum(dom.bounds)
    prev_cert: LPCertificate | None = None
    for d in range(cap + 1):
        alphas = _monomial_rows(dom, d)
        prob = LPProblem(len(alphas))
        for p in points:
            lo, hi = bands[f.value(p)]
            row = [F(eval_monomial(p, a)) for a in alphas]
            if lo is not None:
                prob.add(row, ">=", lo)
            if hi is not None:
                prob.add(row, "<=", hi)
        cert = solve(prob)
        if cert.status == "feasible":
            coeffs = {a: c for a, c in zip(alphas, cert.x) if c}
            dual = None
            if prev_cert is not None:
                # Farkas multipliers of the previous level, folded to one
                # signed weight per point: the dual approximation witness
                weights: dict[Point, Fraction] = {}
                k = 0
                for p in points:
                    lo, hi = bands[f.value(p)]
                    w = F(0)
                    if lo is not None:
                        w += prev_cert.farkas[k]
                        k += 1
                    if hi is not None:
                        w += prev_cert.farkas[k]
                        k += 1
                    if w:
                        weights[p] = w
                dual = FnTable(dom, weights)
            return DegreeAnswer(value=d, primal=coeffs, dual=dual)
        prev_cert = cert
    raise VerificationError("no approximant up to the full interpolation degree")


# ---------------------------------------------------------------- discrepancy


@dataclass
class DiscrepancyAnswer:
    value: Fraction
    distribution: list[list[Fraction]]
    best_rectangle: tuple[tuple[int, ...], tuple[int, ...]]
    rectangle_mixture_support: int


def _nonempty_subsets(k: int):
    for mask in range(1, 2 ** k):
        yield tuple(i for i in range(k) if mask >> i & 1)


def discrepancy_2party(matrix: Sequence[Sequence[int]], limit: int = 16) -> DiscrepancyAnswer:
    """Exact minimax rectangle correlation of a sign matrix.

    Solved as a matrix game: the distribution player minimizes, the
    rectangle player (rectangles with a sign) maximizes.  The optimum is
    certified on both sides: the returned distribution is re-checked by
    enumerating every rectangle, and the rectangle mixture certifies that
    no distribution does better.
    """
    rows = len(matrix)
    cols = len(matrix[0])
    if any(len(r) != cols for r in matrix):
        raise PreconditionError("ragged matrix")
    if any(v not in (1, -1) for r in matrix for v in r):
        raise PreconditionError("entries must be +-1")
    if rows + cols > limit:
        raise PreconditionError(
            "matrix too large for exact rectangle enumeration; "
            "use the closed-form evaluators in matrix_bounds instead")
    cells = [(x, y) for x in range(rows) for y in range(cols)]
    rects = [(A, B) for A in _nonempty_subsets(rows) for B in _nonempty_subsets(cols)]
    columns: list[tuple[tuple[tuple[int, ...], tuple[int, ...]], int]] = []
    for rect in rects:
        columns.append((rect, +1))
        columns.append((rect, -1))

    def payoff(col, cell) -> int:
        (A, B), sgn = col
        x, y = cell
        if x in A and y in B:
            return sgn * matrix[x][y]
        return 0

    nq = len(columns)
    prob = LPProblem(nq + 1, nonneg=[True] * nq + [False])
    for cell in cells:
        row = [F(payoff(c, cell)) for c in columns] + [F(-1)]
        prob.add(row, ">=", 0)
    prob.add([F(1)] * nq + [F(0)], "==", 1)
    prob.objective = [F(0)] * nq + [F(-1)]
    cert = solve(prob)
    if cert.status != "optimal":
        raise VerificationError("game LP did not reach an optimum")
    value = cert.x[-1]
    duals = cert.duals[: len(cells)]
    total = sum(duals, F(0))
    if total == 0:
        raise VerificationError("degenerate dual distribution")
    p_flat = [d / total for d in duals]
    if any(p < 0 for p in p_flat):
        raise VerificationError("dual distribution has negative mass")
    dist = [[F(0)] * cols for _ in range(rows)]
    for (x, y), pv in zip(cells, p_flat):
        dist[x][y] = pv
    # re-check: the distribution must achieve the game value over every rectangle
    best = F(0)
    best_rect = rects[0]
    for A, B in rects:
        s = sum(dist[x][y] * matrix[x][y] for x in A for y in B)
        if abs(s) > best:
            best, best_rect = abs(s), (A, B)
    if best != value:
        raise VerificationError(f"distribution re-check mismatch: {best} vs {value}")
    support = sum(1 for q in cert.x[:nq] if q)
    return DiscrepancyAnswer(value=value, distribution=dist,
                             best_rectangle=best_rect,
                             rectangle_mixture_support=support)


# ------------------------------------------------------------------- density


@dataclass
class DensityAnswer:
    value: int
    family: tuple[int, ...] | None  # parity supports as bitmasks
    coefficients: list[Fraction] | None
    exceeded_cap: bool


def threshold_density(f: FnTable, cap: int, max_vars: int = 6) -> DensityAnswer:
    """Minimum number of parities whose weighted sign sum represents f.

    Searches set families in increasing size; each candidate family is a
    tiny exact LP over its coefficient vector.  Returns cap+1 with
    exceeded_cap=True when every family of size <= cap fails.
    """
    dom = f.domain
    if not dom.is_hypercube:
        raise PreconditionError("threshold density defined on the hypercube")
    n = dom.n
    if n > max_vars:
        raise PreconditionError(f"hypercube too large (n={n} > {max_vars})")
    points = list(dom.points())
    targets = [(-1 if f(p) == 1 else 1) for p in points]
    masks = sorted(range(2 ** n), key=lambda m: (bin(m).count("1"), m))
    # twisted[s][i] = target_i * chi_s(point_i)
    twisted = {}
    for s in masks:
        vec = []
        for p, t in zip(points, targets):
            bits = sum(p[j] for j in range(n) if s >> j & 1)
            vec.append(t * (-1 if bits % 2 else 1))
        twisted[s] = tuple(vec)

    npts = len(points)
    for k in range(1, cap + 1):
        for family in itertools.combinations(masks, k):
            vecs = [twisted[s] for s in family]
            patterns = {tuple(v[i] for v in vecs) for i in range(npts)}
            if any(tuple(-c for c in pat) in patterns for pat in patterns):
                continue  # antipodal pattern pair: no margin possible
            prob = LPProblem(k)
            for pat in sorted(patterns):
                prob.add([F(c) for c in pat], ">=", 1)
            cert = solve(prob)
            if cert.status == "feasible":
                return DensityAnswer(value=k, family=family,
                                     coefficients=cert.x, exceeded_cap=False)
    return DensityAnswer(value=cap + 1, family=None, coefficients=None, exceeded_cap=True)


# ------------------------------------------------------- named test functions


def parity_table(n: int) -> FnTable:
    dom = hypercube(n)
    return bool_table(dom, (p for p in dom.points() if sum(p) % 2))


def and_table(n: int) -> FnTable:
    dom = hypercube(n)
    return bool_table(dom, [(1,) * n])


def or_table(n: int) -> FnTable:
    dom = hypercube(n)
    return bool_table(dom, (p for p in dom.points() if any(p)))
