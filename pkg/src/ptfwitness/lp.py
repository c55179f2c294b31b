"""Exact rational linear programming.

A dense two-phase simplex over Fractions with Bland's anti-cycling rule,
so every solve is deterministic across runs and platforms.  Every answer
carries a certificate that is re-verified by exact arithmetic before it is
returned: a feasible point is substituted into all constraints, and a
Farkas witness is checked to combine the constraints into the
contradiction 0 >= positive.

Constraint relations are "<=", ">=", "==".  Farkas sign convention: the
multiplier vector y satisfies y_i <= 0 on "<=" rows, y_i >= 0 on ">=" rows,
is free on "==" rows, sum_i y_i a_i = 0 componentwise, and
sum_i y_i b_i > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ArtifactError, PreconditionError, VerificationError

F = Fraction

Row = tuple[Sequence[Fraction], str, Fraction]

_RELS = ("<=", ">=", "==")


@dataclass
class LPProblem:
    """min objective . x subject to the rows; objective None = feasibility."""

    n_vars: int
    rows: list[Row] = field(default_factory=list)
    objective: list[Fraction] | None = None
    nonneg: list[bool] | None = None  # per-variable; None = all free

    def add(self, coeffs, rel: str, rhs) -> None:
        if rel not in _RELS:
            raise PreconditionError(f"unknown relation {rel!r}")
        coeffs = [F(c) for c in coeffs]
        if len(coeffs) != self.n_vars:
            raise PreconditionError("row length mismatch")
        self.rows.append((coeffs, rel, F(rhs)))


@dataclass
class LPCertificate:
    status: str  # "feasible" | "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    objective_value: Fraction | None = None
    farkas: list[Fraction] | None = None
    duals: list[Fraction] | None = None


def verify_certificate(problem: LPProblem, cert: LPCertificate) -> None:
    """Exact re-check; raises VerificationError on any failure."""
    if cert.status in ("feasible", "optimal"):
        x = cert.x
        if x is None or len(x) != problem.n_vars:
            raise VerificationError("missing primal point")
        if problem.nonneg:
            for xi, nn in zip(x, problem.nonneg):
                if nn and xi < 0:
                    raise VerificationError("negative value for sign-constrained variable")
        for coeffs, rel, rhs in problem.rows:
            lhs = sum((c * xi for c, xi in zip(coeffs, x) if c), F(0))
            ok = (lhs <= rhs) if rel == "<=" else (lhs >= rhs) if rel == ">=" else (lhs == rhs)
            if not ok:
                raise VerificationError(f"constraint violated: {lhs} {rel} {rhs}")
        if cert.status == "optimal" and problem.objective is not None:
            val = sum((c * xi for c, xi in zip(problem.objective, x) if c), F(0))
            if val != cert.objective_value:
                raise VerificationError("objective value mismatch")
    elif cert.status == "infeasible":
        y = cert.farkas
        if y is None or len(y) != len(problem.rows):
            raise VerificationError("missing farkas multipliers")
        combo = [F(0)] * problem.n_vars
        rhs_combo = F(0)
        for yi, (coeffs, rel, rhs) in zip(y, problem.rows):
            if rel == "<=" and yi > 0:
                raise VerificationError("farkas sign error on <= row")
            if rel == ">=" and yi < 0:
                raise VerificationError("farkas sign error on >= row")
            if yi:
                for j, c in enumerate(coeffs):
                    if c:
                        combo[j] += yi * c
                rhs_combo += yi * rhs
        # the combination must dominate: sum y_i a_i x >= sum y_i b_i for all
        # feasible x; with the variable coefficients cancelling on the
        # unconstrained directions, a strict positive rhs is a contradiction
        if problem.nonneg:
            for j, (cj, nn) in enumerate(zip(combo, problem.nonneg)):
                if nn:
                    if cj > 0:
                        raise VerificationError("farkas residual positive on nonneg var")
                elif cj != 0:
                    raise VerificationError("farkas residual on free var")
        else:
            if any(c != 0 for c in combo):
                raise VerificationError("farkas residual on free var")
        if rhs_combo <= 0:
            raise VerificationError("farkas rhs combination not positive")
    # "unbounded" carries no certificate beyond its status


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = T[r][c]
    row_r = T[r]
    inv = 1 / piv
    for j in range(len(row_r)):
        if row_r[j]:
            row_r[j] *= inv
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            for j in range(len(row)):
                if row_r[j]:
                    row[j] -= f * row_r[j]
    basis[r] = c


def _bland_iterate(T, basis, allowed) -> str:
    """Run simplex iterations on tableau T (last row = cost, last col = rhs)."""
    m = len(T) - 1
    width = len(T[0]) - 1
    cost = T[-1]
    while True:
        enter = -1
        for j in range(width):
            if allowed[j] and cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(T, basis, leave, enter)


def solve(problem: LPProblem) -> LPCertificate:
    """Solve an LPProblem; the returned certificate has been re-verified."""
    cert = _solve_raw(problem)
    verify_certificate(problem, cert)
    return cert


def _solve_raw(problem: LPProblem) -> LPCertificate:
    n = problem.n_vars
    nonneg = problem.nonneg or [False] * n
    if len(nonneg) != n:
        raise PreconditionError("nonneg mask length mismatch")

    # column layout: for each variable either one column (nonneg) or a
    # split pair x = x+ - x-; then one slack per inequality row; then one
    # artificial per row.
    col_of_var: list[tuple[int, int]] = []
    ncols = 0
    for nn in nonneg:
        if nn:
            col_of_var.append((ncols, -1))
            ncols += 1
        else:
            col_of_var.append((ncols, ncols + 1))
            ncols += 2
    slack_col = {}
    for i, (_, rel, _) in enumerate(problem.rows):
        if rel != "==":
            slack_col[i] = ncols
            ncols += 1
    art_col = {}
    for i in range(len(problem.rows)):
        art_col[i] = ncols
        ncols += 1

    m = len(problem.rows)
    T = [[F(0)] * (ncols + 1) for _ in range(m + 1)]
    sigma = [1] * m
    for i, (coeffs, rel, rhs) in enumerate(problem.rows):
        s = 1 if rhs >= 0 else -1
        sigma[i] = s
        row = T[i]
        for j, c in enumerate(coeffs):
            if not c:
                continue
            cp, cm = col_of_var[j]
            row[cp] += s * c
            if cm >= 0:
                row[cm] -= s * c
        if rel != "==":
            row[slack_col[i]] = F(s if rel == "<=" else -s)
        row[art_col[i]] = F(1)
        row[-1] = s * rhs

    basis = [art_col[i] for i in range(m)]
    # phase-1 cost: minimize sum of artificials -> reduced costs
    cost = T[-1]
    for i in range(m):
        for j in range(ncols + 1):
            if T[i][j]:
                cost[j] -= T[i][j]
    for i in range(m):
        cost[art_col[i]] += 1  # art columns have unit cost

    allowed = [True] * ncols
    status = _bland_iterate(T, basis, allowed)
    if status != "optimal":
        raise ArtifactError("phase 1 cannot be unbounded")
    phase1_value = -T[-1][-1]
    if phase1_value > 0:
        # infeasible: multipliers from the reduced costs of the artificials
        y = []
        for i in range(m):
            pi = 1 - T[-1][art_col[i]]
            y.append(sigma[i] * pi)
        return LPCertificate(status="infeasible", farkas=y)

    # phase 2
    art_set = set(art_col.values())
    for j in art_set:
        allowed[j] = False
    # drive artificials out of the basis where possible (degenerate rows)
    for i in range(m):
        if basis[i] in art_set:
            for j in range(ncols):
                if j not in art_set and T[i][j] != 0:
                    _pivot(T, basis, i, j)
                    break

    objective = problem.objective
    cost = T[-1]
    for j in range(ncols + 1):
        cost[j] = F(0)
    if objective is not None:
        for j, c in enumerate(objective):
            if not c:
                continue
            cp, cm = col_of_var[j]
            cost[cp] += c
            if cm >= 0:
                cost[cm] -= c
        for i in range(m):
            f = cost[basis[i]]
            if f:
                row = T[i]
                for j in range(ncols + 1):
                    if row[j]:
                        cost[j] -= f * row[j]
        status = _bland_iterate(T, basis, allowed)
        if status == "unbounded":
            return LPCertificate(status="unbounded")

    x = [F(0)] * n
    colval = {}
    for i in range(m):
        colval[basis[i]] = T[i][-1]
    for j, (cp, cm) in enumerate(col_of_var):
        v = colval.get(cp, F(0))
        if cm >= 0:
            v -= colval.get(cm, F(0))
        x[j] = v
    duals = None
    if objective is not None:
        duals = [sigma[i] * (F(0) - T[-1][art_col[i]]) for i in range(m)]
        obj_value = sum((c * xi for c, xi in zip(objective, x) if c), F(0))
        return LPCertificate(status="optimal", x=x, objective_value=obj_value, duals=duals)
    return LPCertificate(status="feasible", x=x)
