"""Pattern matrices, the closed-form spectral norm, the Forster-type
sign-rank lower bound, and the closed-form communication quantities.

Exact values are kept as rationals (norms are compared through their
squares); floating point appears only in cross-checks, guarded by explicit
tolerances, with the spectral norms computed by LAPACK's deterministic
bidiagonalization-based SVD.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import FnTable, fourier, hypercube
from .errors import PreconditionError, VerificationError
from .linalg import matrix_rank
from .oracles import DegreeAnswer, sign_table

F = Fraction

SPECTRAL_REL_TOL = 1e-9
SVD_ABS_TOL = 1e-12


@dataclass(frozen=True)
class PatternMatrix:
    """The (N, n, phi)-pattern matrix: rows indexed by strings of length N,
    columns by (one position per block, shift mask) pairs, entries
    phi(selected bits xor mask)."""

    N: int
    n: int
    phi: FnTable

    def __post_init__(self):
        if self.N % self.n:
            raise PreconditionError("block structure needs n | N")
        if not self.phi.domain.is_hypercube or self.phi.domain.n != self.n:
            raise PreconditionError("phi must live on the n-dimensional hypercube")

    @property
    def shape(self) -> tuple[int, int]:
        b = self.N // self.n
        return 2 ** self.N, b ** self.n * 2 ** self.n

    def columns(self):
        b = self.N // self.n
        positions = [range(i * b, (i + 1) * b) for i in range(self.n)]
        for V in itertools.product(*positions):
            for w in hypercube(self.n).points():
                yield V, w

    def materialize(self, limit: int = 1 << 22) -> np.ndarray:
        rows, cols = self.shape
        if rows * cols > limit:
            raise PreconditionError(f"pattern matrix of size {rows}x{cols} too large")
        cols_list = list(self.columns())
        out = np.empty((rows, cols), dtype=float)
        for x_idx, x in enumerate(hypercube(self.N).points()):
            for c_idx, (V, w) in enumerate(cols_list):
                entry = self.phi(tuple(x[v] ^ wi for v, wi in zip(V, w)))
                out[x_idx, c_idx] = float(entry)
        return out


@dataclass
class SpectralResult:
    norm_sq: Fraction  # exact square of the spectral norm
    argmax: frozenset[int]
    numeric: float | None
    rel_err: float | None

    @property
    def norm_float(self) -> float:
        return math.sqrt(float(self.norm_sq))


def pattern_spectral_norm(phi: FnTable, N: int, n: int,
                          cross_check: bool = True) -> SpectralResult:
    """Spectral norm of the (N, n, phi)-pattern matrix.

    The square of the norm is the exact rational
    2^(N+n) (N/n)^n  max_S  phi_hat(S)^2 (n/N)^|S|,
    optionally cross-checked against the numeric norm of the materialized
    matrix to relative tolerance 1e-9.
    """
    pm = PatternMatrix(N, n, phi)
    coeffs = fourier(phi)
    b = F(N, n)
    best = None
    best_S = frozenset()
    for S, c in coeffs.items():
        val = c * c / b ** len(S)
        if best is None or val > best:
            best, best_S = val, S
    norm_sq = F(2 ** (N + n)) * b ** n * best
    numeric = rel = None
    if cross_check:
        mat = pm.materialize()
        numeric = float(np.linalg.norm(mat, 2))
        exact = math.sqrt(float(norm_sq))
        scale = max(abs(exact), abs(numeric), SVD_ABS_TOL)
        rel = abs(exact - numeric) / scale
        if rel > SPECTRAL_REL_TOL:
            raise VerificationError(
                f"spectral norm mismatch: formula {exact} vs numeric {numeric}")
    return SpectralResult(norm_sq=norm_sq, argmax=best_S, numeric=numeric, rel_err=rel)


@dataclass
class SignRankBound:
    lower: Fraction | None
    upper: int | None
    method: str

    def __post_init__(self):
        if self.lower is not None and self.upper is not None \
                and self.lower > self.upper:
            raise VerificationError("lower bound exceeds exhibited rank")


def forster_bound(matrix, guard: float = 1e-9) -> SignRankBound:
    """sqrt(|X||Y|) / ||A|| times the least entry magnitude, with the
    numeric spectral norm inflated by the guard so the bound stays valid."""
    a = np.array([[float(v) for v in row] for row in matrix], dtype=float)
    if a.size == 0 or np.any(a == 0.0):
        raise PreconditionError("matrix must be nonempty with no zero entries")
    rows, cols = a.shape
    sigma = float(np.linalg.norm(a, 2))
    sigma_hi = sigma * (1 + guard) + SVD_ABS_TOL
    min_entry = float(np.min(np.abs(a)))
    lower_float = math.sqrt(rows * cols) / sigma_hi * min_entry
    return SignRankBound(lower=F(lower_float), upper=None, method="forster")


def signrank_le_1(matrix) -> bool:
    """True iff the sign pattern is an outer product of two sign vectors."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    sgn = [[1 if v > 0 else -1 if v < 0 else 0 for v in row] for row in matrix]
    if any(0 in row for row in sgn):
        return False
    u = [sgn[i][0] for i in range(rows)]
    v = [sgn[0][j] * sgn[0][0] for j in range(cols)]
    return all(sgn[i][j] == u[i] * v[j] for i in range(rows) for j in range(cols))


def staircase_matrices(order: int = 4) -> tuple[list[list[int]], list[list[int]]]:
    """The two classic low-sign-rank matrices: +1 on and above the diagonal
    with -1 below, and +1 exactly on the diagonal."""
    first = [[1 if j >= i else -1 for j in range(order)] for i in range(order)]
    second = [[1 if i == j else -1 for j in range(order)] for i in range(order)]
    return first, second


def staircase_realizations(order: int = 4
                           ) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Explicit real matrices of rank <= 2 and <= 3 matching the staircase
    sign patterns: the linear pencil 2(j - i) + 1, and a shifted Gram matrix
    of distinct rational points on the unit circle."""
    first = [[F(2 * (j - i) + 1) for j in range(order)] for i in range(order)]
    vecs = []
    for t in range(order):
        tt = F(t)
        vecs.append((F(1 - tt * tt, 1 + tt * tt) if t else F(1), F(2 * tt, 1 + tt * tt)))
    grams = [[va[0] * vb[0] + va[1] * vb[1] for vb in vecs] for va in vecs]
    off_max = max(grams[i][j] for i in range(order) for j in range(order) if i != j)
    eps = (1 - off_max) / 2
    second = [[grams[i][j] - (1 - eps) for j in range(order)] for i in range(order)]
    return first, second


def verify_realization(sign_matrix, real_matrix, max_rank: int) -> bool:
    """Exact check: the real matrix matches the sign pattern entrywise and
    has rank at most max_rank."""
    for srow, rrow in zip(sign_matrix, real_matrix):
        for s, v in zip(srow, rrow):
            if v == 0 or (v > 0) != (s > 0):
                return False
    return matrix_rank([[F(v) for v in row] for row in real_matrix]) <= max_rank


@dataclass
class PatternSignRank:
    gamma: Fraction
    d: int
    T: int
    bound_lower: Fraction    # a certified lower bracket of gamma T^(d/2)
    bound_is_exact: bool
    rederived: float | None  # numeric bound from the materialized pipeline


def signrank_lb_pattern(f: FnTable, answer: DegreeAnswer, T: int,
                        rederive: bool = False) -> PatternSignRank:
    """Sign-rank lower bound gamma * T^(d/2) for the pattern matrix built
    from f, justified by a certified min-smooth witness of level d.

    Optionally re-derives the bound numerically at small sizes by
    materializing the witness pattern matrix and running the spectral
    pipeline on it.
    """
    if answer.gamma is None or answer.dual is None:
        raise PreconditionError("need a certified min-smooth witness")
    gamma, d = answer.gamma, answer.value
    if d < 0 or gamma <= 0:
        raise PreconditionError("bound needs a certified level and positive gamma")
    if T < 1:
        raise PreconditionError("need T >= 1")
    if d == 0:
        return PatternSignRank(gamma=gamma, d=0, T=T, bound_lower=gamma,
                               bound_is_exact=True, rederived=None)
    if d % 2 == 0:
        bound = gamma * F(T) ** (d // 2)
        exact = True
    else:
        from .brackets import sqrt_brackets

        lo, _ = sqrt_brackets(F(T) ** d)
        bound = gamma * lo
        exact = False
    rederived = None
    if rederive:
        n = f.domain.n
        mu = answer.dual
        phi = mu.hadamard(sign_table(f))
        coeffs = fourier(phi)
        for S, c in coeffs.items():
            if len(S) < d and c != 0:
                raise VerificationError("witness is not orthogonal at its level")
        res = pattern_spectral_norm(phi, T * n, n)
        rows, cols = PatternMatrix(T * n, n, phi).shape
        min_entry = min(mu(p) for p in f.domain.points())
        rederived = math.sqrt(rows * cols) / res.norm_float * float(min_entry)
        if rederived < float(bound) * (1 - 1e-9):
            raise VerificationError("pipeline re-derivation fell below the bound")
    return PatternSignRank(gamma=gamma, d=d, T=T, bound_lower=bound,
                           bound_is_exact=exact, rederived=rederived)


@dataclass
class FormulaReport:
    items: dict


def disc_pp_upp_formulas(ell: int | None = None, m: int | None = None,
                         degthr: int | None = None, c: Fraction | None = None,
                         disc: Fraction | None = None,
                         srank: Fraction | None = None) -> FormulaReport:
    """Closed-form evaluators: the multiparty discrepancy bound
    (c 2^ell ell / sqrt(m))^(degthr/2), the weakly-unbounded-error cost
    pp >= log2(2 / disc), and the two-sided unbounded-error relation
    log2(srank) <= upp <= log2(srank) + 2."""
    items: dict = {}
    if ell is not None and m is not None and degthr is not None:
        base_sym = f"(c * 2^{ell} * {ell} / sqrt({m}))^{degthr}/2"
        items["disc_bound_symbolic"] = base_sym
        if c is not None:
            base = float(c) * (2.0 ** ell) * ell / math.sqrt(m)
            items["disc_bound_value"] = base ** (degthr / 2)
    if disc is not None:
        if disc <= 0:
            raise PreconditionError("discrepancy must be positive")
        items["pp_lower"] = math.log2(2.0 / float(disc))
    if srank is not None:
        if srank < 1:
            raise PreconditionError("sign-rank is at least 1")
        items["upp_interval"] = (math.log2(float(srank)),
                                 math.log2(float(srank)) + 2.0)
    return FormulaReport(items=items)
