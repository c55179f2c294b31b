"""Exact arithmetic core.

Finite integer domains (boxes, hypercubes, weight slices), finitely
supported rational-valued functions on them, inner products, orthogonal
content, tensor products, the Fourier transform on the hypercube, and
symmetrization.  Everything here is exact: values are `fractions.Fraction`
and no operation rounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping

from .errors import PreconditionError

Point = tuple[int, ...]


def as_rat(x) -> Fraction:
    """Coerce ints, Fractions, and 'p/q' strings to Fraction; reject floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class Domain:
    """A finite set of integer points.

    Coordinate i ranges over offset[i] .. offset[i] + bounds[i].  When a
    weight window (lo, hi) is present, only points whose coordinate sum
    lies in [lo, hi] belong to the domain.  Enumeration is lexicographic
    on the point vectors, so iteration order is deterministic.
    """

    bounds: tuple[int, ...]
    offset: tuple[int, ...] = ()
    window: tuple[int, int] | None = None

    def __post_init__(self):
        if not self.bounds:
            raise PreconditionError("domain needs at least one coordinate")
        if any(b < 0 for b in self.bounds):
            raise PreconditionError("coordinate bounds must be nonnegative")
        if not self.offset:
            object.__setattr__(self, "offset", (0,) * len(self.bounds))
        if len(self.offset) != len(self.bounds):
            raise PreconditionError("offset/bounds dimension mismatch")
        if any(o < 0 for o in self.offset):
            raise PreconditionError("offsets must be nonnegative")
        if self.window is not None:
            lo, hi = self.window
            if lo > hi:
                raise PreconditionError("empty weight window")

    @property
    def n(self) -> int:
        return len(self.bounds)

    @property
    def is_hypercube(self) -> bool:
        return (
            all(b == 1 for b in self.bounds)
            and all(o == 0 for o in self.offset)
            and self.window is None
        )

    def weight_range(self) -> tuple[int, int]:
        lo = sum(self.offset)
        hi = lo + sum(self.bounds)
        if self.window is not None:
            lo, hi = max(lo, self.window[0]), min(hi, self.window[1])
        return lo, hi

    def contains(self, p: Point) -> bool:
        if len(p) != self.n:
            return False
        for x, o, b in zip(p, self.offset, self.bounds):
            if x < o or x > o + b:
                return False
        if self.window is not None:
            w = sum(p)
            if w < self.window[0] or w > self.window[1]:
                return False
        return True

    def points(self) -> Iterator[Point]:
        ranges = [range(o, o + b + 1) for o, b in zip(self.offset, self.bounds)]
        if self.window is None:
            yield from itertools.product(*ranges)
        else:
            lo, hi = self.window
            for p in itertools.product(*ranges):
                if lo <= sum(p) <= hi:
                    yield p

    def size(self) -> int:
        """Exact point count, via a weight-profile convolution when sliced."""
        if self.window is None:
            n = 1
            for b in self.bounds:
                n *= b + 1
            return n
        # counts[w] = number of points of weight w, built coordinate by coordinate
        counts = {0: 1}
        for o, b in zip(self.offset, self.bounds):
            nxt: dict[int, int] = {}
            for w, c in counts.items():
                for v in range(o, o + b + 1):
                    nxt[w + v] = nxt.get(w + v, 0) + c
            counts = nxt
        lo, hi = self.window
        return sum(c for w, c in counts.items() if lo <= w <= hi)


def hypercube(n: int) -> Domain:
    return Domain((1,) * n)


def box(bounds: Iterable[int]) -> Domain:
    return Domain(tuple(bounds))


def weight_slice(base: Domain, lo: int, hi: int) -> Domain:
    """Restrict a box or hypercube to points of weight in [lo, hi]."""
    if base.window is not None:
        lo, hi = max(lo, base.window[0]), min(hi, base.window[1])
    return Domain(base.bounds, base.offset, (lo, hi))


class FnTable:
    """A finitely supported map from domain points to exact rationals.

    Absent points are zero.  Stored values are nonzero.  Instances are
    treated as immutable; all operations return new tables.
    """

    __slots__ = ("domain", "entries")

    def __init__(self, domain: Domain, entries: Mapping[Point, Fraction] | None = None,
                 *, _trusted: bool = False):
        self.domain = domain
        if entries is None:
            entries = {}
        if _trusted:
            self.entries = dict(entries)
        else:
            clean: dict[Point, Fraction] = {}
            for p, v in entries.items():
                p = tuple(p)
                v = as_rat(v)
                if v == 0:
                    continue
                if not domain.contains(p):
                    raise PreconditionError(f"point {p} outside domain {domain}")
                clean[p] = v
            self.entries = clean

    def __call__(self, p: Point) -> Fraction:
        return self.entries.get(tuple(p), Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FnTable)
            and self.domain == other.domain
            and self.entries == other.entries
        )

    def __hash__(self):
        raise TypeError("FnTable is not hashable")

    def __repr__(self) -> str:
        return f"FnTable(dim={self.domain.n}, support={len(self.entries)})"

    @property
    def support(self) -> dict[Point, Fraction]:
        return self.entries

    def is_zero(self) -> bool:
        return not self.entries

    def l1(self) -> Fraction:
        return sum((abs(v) for v in self.entries.values()), Fraction(0))

    def linf(self) -> Fraction:
        return max((abs(v) for v in self.entries.values()), default=Fraction(0))

    def total(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self.entries.values())

    def is_distribution(self) -> bool:
        return self.is_nonnegative() and self.total() == 1

    def scale(self, a) -> "FnTable":
        a = as_rat(a)
        if a == 0:
            return FnTable(self.domain, {}, _trusted=True)
        return FnTable(self.domain, {p: a * v for p, v in self.entries.items()},
                       _trusted=True)

    def __neg__(self) -> "FnTable":
        return self.scale(-1)

    def _merge(self, other: "FnTable", sign: int) -> "FnTable":
        if self.domain.n != other.domain.n:
            raise PreconditionError("dimension mismatch")
        out = dict(self.entries)
        for p, v in other.entries.items():
            w = out.get(p, Fraction(0)) + sign * v
            if w == 0:
                out.pop(p, None)
            else:
                out[p] = w
        dom = self.domain if self.domain == other.domain else merge_domains(self.domain, other.domain)
        if dom is not self.domain:
            for p in out:
                if not dom.contains(p):
                    raise PreconditionError(f"point {p} outside merged domain")
        return FnTable(dom, out, _trusted=True)

    def __add__(self, other: "FnTable") -> "FnTable":
        return self._merge(other, +1)

    def __sub__(self, other: "FnTable") -> "FnTable":
        return self._merge(other, -1)

    def hadamard(self, other: "FnTable") -> "FnTable":
        """Pointwise product over the common support."""
        if self.domain.n != other.domain.n:
            raise PreconditionError("dimension mismatch")
        small, big = (self, other) if len(self.entries) <= len(other.entries) else (other, self)
        out = {}
        for p, v in small.entries.items():
            w = big.entries.get(p)
            if w is not None:
                out[p] = v * w
        return FnTable(self.domain, out, _trusted=True)

    def abs(self) -> "FnTable":
        return FnTable(self.domain, {p: abs(v) for p, v in self.entries.items()},
                       _trusted=True)

    def restrict_weight(self, lo: int | None = None, hi: int | None = None) -> "FnTable":
        """Keep only support points whose weight lies in [lo, hi]."""
        out = {p: v for p, v in self.entries.items()
               if (lo is None or sum(p) >= lo) and (hi is None or sum(p) <= hi)}
        return FnTable(self.domain, out, _trusted=True)

    def mass(self, lo: int | None = None, hi: int | None = None) -> Fraction:
        """Sum of values over support points with weight in [lo, hi]."""
        return self.restrict_weight(lo, hi).total()


def merge_domains(a: Domain, b: Domain) -> Domain:
    """Smallest common box for tables that live on different boxes."""
    if a.n != b.n:
        raise PreconditionError("dimension mismatch")
    off = tuple(min(x, y) for x, y in zip(a.offset, b.offset))
    top = tuple(max(ao + ab, bo + bb)
                for ao, ab, bo, bb in zip(a.offset, a.bounds, b.offset, b.bounds))
    return Domain(tuple(t - o for t, o in zip(top, off)), off, None)


def inner_product(f: FnTable, g: FnTable) -> Fraction:
    """Sum of f(x) g(x) over the intersection of supports."""
    if f.domain.n != g.domain.n:
        raise PreconditionError("dimension mismatch")
    small, big = (f, g) if len(f.entries) <= len(g.entries) else (g, f)
    acc = Fraction(0)
    for p, v in small.entries.items():
        w = big.entries.get(p)
        if w is not None:
            acc += v * w
    return acc


def eval_monomial(p: Point, alpha: Point) -> int:
    out = 1
    for x, a in zip(p, alpha):
        if a:
            out *= x ** a
    return out


def monomials(bounds: tuple[int, ...], degree: int) -> Iterator[Point]:
    """All exponent vectors of total degree `degree` with alpha_i <= bounds_i.

    Exponents above the per-coordinate bound are omitted: on a box the
    function x_i^k with k > bounds_i agrees with a lower-degree polynomial,
    so dropping those monomials does not change any span of restricted
    polynomials of a given degree.
    """
    n = len(bounds)

    def rec(i: int, rem: int):
        if i == n - 1:
            if rem <= bounds[i]:
                yield (rem,)
            return
        for a in range(0, min(rem, bounds[i]) + 1):
            for rest in rec(i + 1, rem - a):
                yield (a,) + rest

    yield from rec(0, degree)


@dataclass(frozen=True)
class OrthResult:
    """Outcome of an orthogonal-content computation.

    kind is one of "exact" (value attained, witness monomial recorded),
    "at_least" (no monomial of degree <= cap had nonzero inner product),
    or "infinite" (the zero function).
    """

    kind: str
    value: int | None = None
    witness: Point | None = None

    @staticmethod
    def exact(value: int, witness: Point) -> "OrthResult":
        return OrthResult("exact", value, witness)

    @staticmethod
    def at_least(value: int) -> "OrthResult":
        return OrthResult("at_least", value, None)

    @staticmethod
    def infinite() -> "OrthResult":
        return OrthResult("infinite", None, None)

    def at_least_value(self) -> int | None:
        """The guaranteed lower bound, or None when infinite."""
        return self.value if self.kind != "infinite" else None

    def ge(self, d: int) -> bool:
        """True when orth is certainly >= d."""
        return self.kind == "infinite" or self.value >= d


def default_orth_cap(domain: Domain) -> int:
    return domain.n * max(domain.bounds) if max(domain.bounds) else domain.n


def orth(f: FnTable, cap: int | None = None) -> OrthResult:
    """Least total degree of a monomial with nonzero inner product against f.

    Monomials of degree < d span every polynomial of degree < d on the box,
    so scanning them in degree order decides the least degree exactly.  The
    scan stops at `cap`; if nothing was found the result is "at_least cap+1".
    """
    if f.is_zero():
        return OrthResult.infinite()
    if cap is None:
        cap = default_orth_cap(f.domain)
    if cap < 0:
        raise PreconditionError("cap must be >= 0")
    items = list(f.entries.items())
    bounds = f.domain.bounds
    for d in range(cap + 1):
        for alpha in monomials(bounds, d):
            acc = Fraction(0)
            for p, v in items:
                acc += v * eval_monomial(p, alpha)
            if acc != 0:
                return OrthResult.exact(d, alpha)
    return OrthResult.at_least(cap + 1)


def tensor(f: FnTable, g: FnTable) -> FnTable:
    """(f (x) g)(x, y) = f(x) g(y) on the product domain."""
    fa, ga = f.domain, g.domain
    window = None
    if fa.window is not None or ga.window is not None:
        flo, fhi = fa.weight_range()
        glo, ghi = ga.weight_range()
        window = (flo + glo, fhi + ghi)
    dom = Domain(fa.bounds + ga.bounds, fa.offset + ga.offset, window)
    out = {}
    for p, v in f.entries.items():
        for q, w in g.entries.items():
            out[p + q] = v * w
    return FnTable(dom, out, _trusted=True)


def tensor_power(f: FnTable, m: int) -> FnTable:
    if m < 1:
        raise PreconditionError("tensor power needs m >= 1")
    out = f
    for _ in range(m - 1):
        out = tensor(out, f)
    return out


def chi(S: frozenset[int], p: Point) -> int:
    s = sum(p[i] for i in S)
    return -1 if s % 2 else 1


def fourier(f: FnTable) -> dict[frozenset[int], Fraction]:
    """All 2^n character coefficients of a function on the full hypercube."""
    if not f.domain.is_hypercube:
        raise PreconditionError("fourier transform requires a full hypercube domain")
    n = f.domain.n
    scale = Fraction(1, 2 ** n)
    out: dict[frozenset[int], Fraction] = {}
    for comb_S in itertools.chain.from_iterable(
        itertools.combinations(range(n), k) for k in range(n + 1)
    ):
        S = frozenset(comb_S)
        acc = Fraction(0)
        for p, v in f.entries.items():
            acc += v * chi(S, p)
        out[S] = acc * scale
    return out


def from_fourier(coeffs: Mapping[frozenset[int], Fraction], n: int) -> FnTable:
    dom = hypercube(n)
    out = {}
    for p in dom.points():
        acc = Fraction(0)
        for S, c in coeffs.items():
            if c:
                acc += c * chi(S, p)
        if acc != 0:
            out[p] = acc
    return FnTable(dom, out, _trusted=True)


def symmetrize(f: FnTable, blocks: tuple[tuple[int, ...], ...]) -> FnTable:
    """Average a hypercube function over strings with given block weights.

    Output lives on the box of block-weight vectors; its value at t is the
    average of f over all inputs whose i-th block has Hamming weight t_i.
    """
    if not f.domain.is_hypercube:
        raise PreconditionError("symmetrize expects a full hypercube domain")
    n = f.domain.n
    seen = sorted(i for blk in blocks for i in blk)
    if seen != list(range(n)):
        raise PreconditionError("blocks must partition the coordinates")
    sizes = tuple(len(blk) for blk in blocks)
    sums: dict[Point, Fraction] = {}
    for p, v in f.entries.items():
        t = tuple(sum(p[i] for i in blk) for blk in blocks)
        sums[t] = sums.get(t, Fraction(0)) + v
    dom = Domain(sizes)
    out = {}
    for t, s in sums.items():
        count = 1
        for size, ti in zip(sizes, t):
            count *= comb(size, ti)
        val = s / count
        if val != 0:
            out[t] = val
    return FnTable(dom, out, _trusted=True)


def lift_symmetric_to_cube(phi: FnTable) -> FnTable:
    """Spread a univariate table on {0..r} uniformly over each weight level
    of {0,1}^r.  Preserves the l1 norm and the orthogonal content; the sign
    at x depends only on |x|.
    """
    if phi.domain.n != 1 or phi.domain.offset != (0,) or phi.domain.window is not None:
        raise PreconditionError("lift expects a univariate table on {0..r}")
    r = phi.domain.bounds[0]
    if r < 1:
        raise PreconditionError("need r >= 1")
    dom = hypercube(r)
    out = {}
    for (t,), v in phi.entries.items():
        share = v / comb(r, t)
        for ones in itertools.combinations(range(r), t):
            p = tuple(1 if i in ones else 0 for i in range(r))
            out[p] = share
    return FnTable(dom, out, _trusted=True)


def pos_neg_parts(f: FnTable) -> tuple[FnTable, FnTable]:
    pos = {p: v for p, v in f.entries.items() if v > 0}
    neg = {p: -v for p, v in f.entries.items() if v < 0}
    return (FnTable(f.domain, pos, _trusted=True), FnTable(f.domain, neg, _trusted=True))


def point_mass(domain: Domain, p: Point) -> FnTable:
    if not domain.contains(p):
        raise PreconditionError(f"point {p} outside domain")
    return FnTable(domain, {tuple(p): Fraction(1)}, _trusted=True)


def uniform(domain: Domain, exclude: Iterable[Point] = ()) -> FnTable:
    pts = [p for p in domain.points() if p not in set(map(tuple, exclude))]
    if not pts:
        raise PreconditionError("uniform distribution over empty set")
    w = Fraction(1, len(pts))
    return FnTable(domain, {p: w for p in pts}, _trusted=True)


def tighten_domain(f: FnTable) -> FnTable:
    """Re-home a table onto the bounding box of its support (same points)."""
    if f.is_zero():
        return f
    pts = list(f.entries)
    n = len(pts[0])
    lo = tuple(min(p[i] for p in pts) for i in range(n))
    hi = tuple(max(p[i] for p in pts) for i in range(n))
    dom = Domain(tuple(b - a for a, b in zip(lo, hi)), lo)
    return FnTable(dom, f.entries, _trusted=True)


def rehome(f: FnTable, domain: Domain) -> FnTable:
    """The same function viewed on a larger domain."""
    return FnTable(domain, f.entries)


def smoothness_constant(f: FnTable, weight_cap: int | None = None) -> Fraction | None:
    """Minimal K >= 1 with |f(x)| <= K^{|x-x'|} |f(x')| on the region of the
    domain with weight <= weight_cap (whole domain when None).

    Checked over adjacent pairs only.  On a box, any two region points are
    joined by a lattice path of length |x - x'| that stays in the region
    (walk down to the coordinatewise minimum, then up), so the adjacent
    bound composes into the all-pairs bound with the same K.

    Returns None when the region mixes zero and nonzero values, in which
    case no K works; the all-zero region gets K = 1.
    """
    region = [p for p in f.domain.points()
              if weight_cap is None or sum(p) <= weight_cap]
    if not region:
        raise PreconditionError("empty region")
    values = {p: f(p) for p in region}
    nonzero = [p for p, v in values.items() if v != 0]
    if not nonzero:
        return Fraction(1)
    if len(nonzero) != len(region):
        return None
    pset = set(region)
    best = Fraction(1)
    for p in region:
        vp = abs(values[p])
        for i in range(len(p)):
            q = p[:i] + (p[i] + 1,) + p[i + 1:]
            if q in pset:
                vq = abs(values[q])
                ratio = vp / vq if vp > vq else vq / vp
                if ratio > best:
                    best = ratio
    return best


def least_poly_degree(f: FnTable, max_deg: int | None = None) -> int | None:
    """Least d such that some polynomial of total degree <= d agrees with f
    everywhere on its domain, decided by exact linear solves.

    Returns None when no degree <= max_deg fits.
    """
    from .linalg import solve_consistent

    dom = f.domain
    pts = list(dom.points())
    values = [f(p) for p in pts]
    if all(v == 0 for v in values):
        return 0
    hard_cap = sum(dom.bounds)
    if max_deg is None:
        max_deg = hard_cap
    basis: list[Point] = []
    for d in range(min(max_deg, hard_cap) + 1):
        basis.extend(monomials(dom.bounds, d))
        A = [[Fraction(eval_monomial(p, a)) for a in basis] for p in pts]
        if solve_consistent(A, values) is not None:
            return d
    return None
