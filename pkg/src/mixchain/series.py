"""Polynomial and rational power-series machinery.

Everything here manipulates det(I - sP) and the adjugate adj(I - sP), whose
entry (i, j) is the (j, i)-cofactor polynomial a_ij(s).  First-passage
generating functions are ratios of these cofactors, and coefficients come
out of a linear recurrence rather than root finding, so removable common
factors between numerator and denominator need no symbolic cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import TransitionMatrix
from .errors import InvariantViolation
from .tolerances import SERIES_TOL


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial; coeffs[k] multiplies s**k, trailing zeros trimmed."""

    coeffs: tuple[float, ...]

    @classmethod
    def make(cls, seq) -> "Polynomial":
        c = [float(x) for x in seq]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, s: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [0.0] * n
        for k, c in enumerate(self.coeffs):
            out[k] += c
        for k, c in enumerate(other.coeffs):
            out[k] += c
        return Polynomial.make(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1.0)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for a, ca in enumerate(self.coeffs):
            if ca == 0.0:
                continue
            for b, cb in enumerate(other.coeffs):
                out[a + b] += ca * cb
        return Polynomial.make(out)

    def scale(self, factor: float) -> "Polynomial":
        return Polynomial.make([factor * c for c in self.coeffs])

    def coeff(self, k: int) -> float:
        return self.coeffs[k] if k < len(self.coeffs) else 0.0


@dataclass(frozen=True)
class PolyMatrix:
    """Matrix of polynomials stored as a coefficient tensor.

    ``coeff_mats[k]`` is the m-by-m matrix multiplying s**k; entry (i, j) of
    the stored adjugate is the (j, i)-cofactor a_ij(s) of I - sP.
    """

    coeff_mats: np.ndarray  # shape (deg + 1, m, m)

    def __post_init__(self):
        self.coeff_mats.setflags(write=False)

    @property
    def m(self) -> int:
        return self.coeff_mats.shape[1]

    def entry(self, i: int, j: int) -> Polynomial:
        return Polynomial.make(self.coeff_mats[:, i, j])

    def eval(self, s: float) -> np.ndarray:
        acc = np.zeros_like(self.coeff_mats[0])
        for mat in self.coeff_mats[::-1]:
            acc = acc * s + mat
        return acc


@dataclass(frozen=True)
class RationalSeries:
    """num(s)/den(s) with den(0) = 1, expandable by linear recurrence."""

    num: Polynomial
    den: Polynomial

    @classmethod
    def make(cls, num: Polynomial, den: Polynomial) -> "RationalSeries":
        d0 = den.coeff(0)
        if d0 == 0.0:
            raise ZeroDivisionError("rational series needs den(0) != 0")
        if d0 != 1.0:
            num = num.scale(1.0 / d0)
            den = den.scale(1.0 / d0)
        return cls(num, den)


def faddeev_leverrier(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One pass producing det(I - sP) and adj(I - sP) together.

    With M_1 = I and M_{k+1} = P M_k + c_{m-k} I, c_{m-k} = -tr(P M_k)/k,
    the adjugate of I - sP is sum_k M_k s**(k-1) and the determinant has
    coefficient c_{m-j} on s**j (c_m = 1).

    Returns
    -------
    det_coeffs : ndarray, shape (m + 1,)
        det_coeffs[j] multiplies s**j.
    adj_mats : ndarray, shape (m, m, m)
        adj_mats[k] multiplies s**k.
    """
    m = p.shape[0]
    det_coeffs = np.zeros(m + 1)
    det_coeffs[0] = 1.0
    adj_mats = np.zeros((m, m, m))
    mk = np.eye(m)
    for k in range(1, m + 1):
        adj_mats[k - 1] = mk
        pm = p @ mk
        ck = -np.trace(pm) / k
        det_coeffs[k] = ck
        mk = pm + ck * np.eye(m)
    # Cayley-Hamilton: the iteration must close to zero.
    closure = float(np.max(np.abs(mk)))
    if closure > SERIES_TOL:
        raise InvariantViolation(f"characteristic iteration failed to close: {closure:.3e}")
    return det_coeffs, adj_mats


def det_poly(chain: TransitionMatrix) -> Polynomial:
    """Coefficients of det(I - sP); constant term 1, degree <= m.

    For irreducible chains (1 - s) divides the result exactly up to
    rounding, since 1 is always an eigenvalue of P.
    """
    det_coeffs, _ = faddeev_leverrier(chain.entries)
    return Polynomial.make(det_coeffs)


def adjugate_poly(chain: TransitionMatrix) -> PolyMatrix:
    """Adjugate adj(I - sP) as a polynomial matrix (entries of degree <= m-1).

    For m <= 3 the direct cofactor expansion is also evaluated and asserted
    equal, pinning the iteration against an independent construction.
    """
    _, adj_mats = faddeev_leverrier(chain.entries)
    out = PolyMatrix(coeff_mats=adj_mats)
    if chain.m <= 3:
        direct = _adjugate_cofactors(chain.entries)
        gap = float(np.max(np.abs(adj_mats - direct.coeff_mats)))
        if gap > SERIES_TOL:
            raise InvariantViolation(f"adjugate routes disagree by {gap:.3e}")
    return out


def _adjugate_cofactors(p: np.ndarray) -> PolyMatrix:
    """Adjugate by explicit (j, i)-cofactors of I - sP; small m only."""
    m = p.shape[0]
    ident = np.eye(m)
    entries = [[Polynomial.make([ident[i, j], -p[i, j]]) for j in range(m)] for i in range(m)]

    def minor_det(rows, cols):
        if len(rows) == 1:
            return entries[rows[0]][cols[0]]
        acc = Polynomial.make([0.0])
        for pos, r in enumerate(rows):
            sub = minor_det([x for x in rows if x != r], cols[1:])
            term = (entries[r][cols[0]] * sub).scale(-1.0 if pos % 2 else 1.0)
            acc = acc + term
        return acc

    coeff_mats = np.zeros((m, m, m))
    idx = list(range(m))
    for i in range(m):
        for j in range(m):
            rows = [r for r in idx if r != j]
            cols = [c for c in idx if c != i]
            cof = minor_det(rows, cols).scale(-1.0 if (i + j) % 2 else 1.0)
            for k, c in enumerate(cof.coeffs):
                coeff_mats[k, i, j] = c
    return PolyMatrix(coeff_mats=coeff_mats)


def series_coeffs(rs: RationalSeries, n_max: int) -> np.ndarray:
    """Power-series coefficients c_0..c_n_max of num/den.

    c_n = num_n - sum_{k>=1} den_k c_{n-k}; no root finding involved, so
    removable numerator/denominator factors cost nothing.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    den = rs.den.coeffs
    out = np.zeros(n_max + 1)
    for n in range(n_max + 1):
        acc = rs.num.coeff(n)
        for k in range(1, min(n, len(den) - 1) + 1):
            acc -= den[k] * out[n - k]
        out[n] = acc
    return out


def first_passage_series(adj: PolyMatrix, det: Polynomial, i: int, j: int) -> RationalSeries:
    """Generating function of the first passage time from i to j.

    For i != j this is a_ij(s)/a_jj(s); for i = j it is 1 - det(I - sP)/a_ii(s),
    stored as the single rational (a_ii - det)/a_ii so the same recurrence
    applies.  a_jj(0) = 1 always, so the series is well posed.
    """
    den = adj.entry(j, j)
    if i == j:
        num = den - det
    else:
        num = adj.entry(i, j)
    return RationalSeries.make(num, den)
