"""Corrector objects: functions that equal 1 at an anchor point, are
otherwise supported on low-weight points, and are orthogonal to all
polynomials of degree at most d.  They let l1 mass move between regions
without any low-degree polynomial noticing.

The hypercube corrector is symmetric (its value depends only on the
Hamming weight), obtained by solving the square moment system over the
weight levels 0..d with the top level pinned to 1.  Its pushforwards give
the anchored corrector on integer boxes and the two-point variant on the
cube spanned by a pair of points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .core import Domain, FnTable, box, hypercube, orth
from .errors import ConstructionError, PreconditionError
from .linalg import solve_square

F = Fraction

Point = tuple[int, ...]


@dataclass
class CorrectorCertificate:
    n: int
    d: int
    levels: tuple[Fraction, ...]  # value on each weight level 0..d
    l1: Fraction
    l1_bound: Fraction
    determinant: Fraction
    anchor: Point | None = None
    base: Point | None = None


def corrector_levels(n: int, d: int) -> tuple[tuple[Fraction, ...], Fraction]:
    """Weight-level values z_0..z_d with sum_k z_k C(n,k) k^j = -n^j for
    j = 0..d, so that the table (levels, top level = 1) kills all degree-d
    moments.  Returns (levels, determinant of the moment system)."""
    if not (0 <= d < n):
        raise PreconditionError("need 0 <= d < n")
    # k ** j follows the 0^0 = 1 convention, matching the moment basis
    a = [[F(comb(n, k) * k ** j) for k in range(d + 1)] for j in range(d + 1)]
    b = [F(-(n ** j)) for j in range(d + 1)]
    sol, det = solve_square(a, b)
    if det == 0:
        raise ConstructionError("singular moment system")
    return tuple(sol), det


def build_zeta_cube(n: int, d: int) -> tuple[FnTable, CorrectorCertificate]:
    """Symmetric corrector on {0,1}^n: value 1 at the all-ones point,
    support otherwise within weight <= d, orthogonal beyond degree d, and
    l1 norm at most 1 + 2^d C(n,d)."""
    levels, det = corrector_levels(n, d)
    dom = hypercube(n)
    entries: dict[Point, Fraction] = {(1,) * n: F(1)}
    for p in dom.points():
        w = sum(p)
        if w <= d and levels[w] != 0:
            entries[p] = levels[w]
    table = FnTable(dom, entries)
    l1 = table.l1()
    bound = 1 + F(2 ** d * comb(n, d))
    cert = CorrectorCertificate(n=n, d=d, levels=levels, l1=l1, l1_bound=bound,
                                determinant=det)
    if l1 > bound:
        raise ConstructionError(f"corrector l1 {l1} exceeds {bound}; solver bug")
    if not orth(table, cap=d).ge(d + 1):
        raise ConstructionError("corrector failed its orthogonality check")
    return table, cert


def build_zeta_u(u: Point, d: int) -> tuple[FnTable, CorrectorCertificate]:
    """Anchored corrector on the box below u: value 1 at u, support
    otherwise on {v <= u, |v| <= d}.  The value at v is the weight-level
    value times the number of cube points mapping onto v blockwise."""
    u = tuple(u)
    total = sum(u)
    if not (0 <= d < total):
        raise PreconditionError("need d < |u|")
    levels, det = corrector_levels(total, d)
    dom = box(u)
    entries: dict[Point, Fraction] = {u: F(1)}

    def rec(i: int, rem: int, prefix: Point):
        if i == len(u):
            w = sum(prefix)
            val = levels[w]
            if val:
                mult = 1
                for ui, vi in zip(u, prefix):
                    mult *= comb(ui, vi)
                entries[prefix] = entries.get(prefix, F(0)) + val * mult
            return
        for vi in range(0, min(u[i], rem) + 1):
            rec(i + 1, rem - vi, prefix + (vi,))

    rec(0, d, ())
    table = FnTable(dom, entries)
    bound = 1 + F(2 ** d * comb(total, d))
    cert = CorrectorCertificate(n=len(u), d=d, levels=levels, l1=table.l1(),
                                l1_bound=bound, determinant=det, anchor=u)
    if table(u) != 1:
        raise ConstructionError("anchored corrector lost its anchor value")
    if table.l1() > bound:
        raise ConstructionError("anchored corrector l1 exceeds its bound")
    if not orth(table, cap=d).ge(d + 1):
        raise ConstructionError("anchored corrector failed orthogonality")
    return table, cert


def build_zeta_uv(u: Point, v: Point, d: int) -> tuple[FnTable, CorrectorCertificate]:
    """Two-point corrector on cube(u, v): value 1 at u, support otherwise
    within distance d of v.  Obtained by reflecting the anchored corrector
    coordinatewise around v."""
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        raise PreconditionError("dimension mismatch")
    ustar = tuple(abs(a - b) for a, b in zip(u, v))
    if not (0 <= d < sum(ustar)):
        raise PreconditionError("need d < |u - v|")
    base_table, base_cert = build_zeta_u(ustar, d)
    offset = tuple(min(a, b) for a, b in zip(u, v))
    dom = Domain(ustar, offset)
    entries: dict[Point, Fraction] = {}
    for w, val in base_table.entries.items():
        x = tuple(vi + (1 if ui >= vi else -1) * wi for wi, ui, vi in zip(w, u, v))
        entries[x] = val
    table = FnTable(dom, entries)
    cert = CorrectorCertificate(n=len(u), d=d, levels=base_cert.levels,
                                l1=table.l1(), l1_bound=base_cert.l1_bound,
                                determinant=base_cert.determinant, anchor=u, base=v)
    if table(u) != 1 or table.l1() > cert.l1_bound:
        raise ConstructionError("two-point corrector failed its metric checks")
    if not orth(table, cap=d).ge(d + 1):
        raise ConstructionError("two-point corrector failed orthogonality")
    return table, cert
