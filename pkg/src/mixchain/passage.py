"""First-passage and recurrence time distributions by two independent routes.

Route 1 steps the taboo recurrence f_ij(n) = sum_{k != j} p_ik f_kj(n-1)
directly; route 2 expands the cofactor-ratio generating function from the
series engine.  The routes share no code past matrix validation, so their
agreement is a real cross-check, exercised by tests and by the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .chain import TransitionMatrix
from .errors import InvariantViolation, StateOutOfRange
from .series import adjugate_poly, det_poly, first_passage_series
from .tolerances import N_CAP, PROB_TOL, TAIL_TOL


@dataclass(frozen=True)
class DistributionTable:
    """Truncated pmf over step counts 0..n_max with certified tail mass.

    ``probs[n]`` is the probability of exactly n steps; ``support_offset``
    is 0 for hitting-style tables (mass at n = 0 allowed) and 1 for
    passage-style tables (probs[0] is identically 0).  ``tail_mass`` is the
    exact unaccumulated remainder 1 - sum(probs), never an eigenvalue bound,
    so it stays valid for periodic and even defective (reducible) chains.
    """

    probs: np.ndarray
    n_max: int
    tail_mass: float
    support_offset: int

    def __post_init__(self):
        self.probs.setflags(write=False)
        lo = float(self.probs.min(initial=0.0))
        hi = float(self.probs.max(initial=0.0))
        if lo < -PROB_TOL or hi > 1.0 + PROB_TOL:
            raise InvariantViolation(f"pmf entry outside [0,1] band: min {lo!r}, max {hi!r}")

    @property
    def probs_clamped(self) -> np.ndarray:
        return np.clip(self.probs, 0.0, 1.0)

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.probs)


def truncate(step_probs: Iterator[float], p0: float, n_max: int | None, cap: int) -> tuple[np.ndarray, float]:
    """Accumulate per-step probabilities under the shared truncation rule.

    An explicit n_max wins; otherwise stop at the first n whose running tail
    drops to TAIL_TOL, never past cap.  Returns (probs indexed from 0, tail).
    """
    adaptive = n_max is None
    limit = cap if adaptive else n_max
    if limit < 0:
        raise ValueError("n_max must be >= 0")
    probs = [p0]
    cum = p0
    if limit > 0:
        for n, pn in enumerate(step_probs, start=1):
            probs.append(pn)
            cum += pn
            if n >= limit or (adaptive and 1.0 - cum <= TAIL_TOL):
                break
    return np.array(probs), 1.0 - cum


def _check_state(chain: TransitionMatrix, s: int, what: str) -> None:
    if not 0 <= s < chain.m:
        raise StateOutOfRange(f"{what} state {s} outside 0..{chain.m - 1}")


def taboo_steps(chain: TransitionMatrix, i: int, j: int) -> Iterator[float]:
    """Yield f_ij(n) for n = 1, 2, ... by the taboo recurrence, run as a
    vector over all sources at once."""
    p = chain.entries
    q = p.copy()
    q[:, j] = 0.0
    v = p[:, j].copy()
    while True:
        yield float(v[i])
        v = q @ v


def series_steps(chain: TransitionMatrix, i: int, j: int) -> Iterator[float]:
    """Yield f_ij(n) for n = 1, 2, ... by expanding the cofactor-ratio
    generating function coefficient by coefficient."""
    rs = first_passage_series(adjugate_poly(chain), det_poly(chain), i, j)
    den = rs.den.coeffs
    coeffs = [rs.num.coeff(0)]  # exactly 0 on and off the diagonal
    n = 0
    while True:
        n += 1
        acc = rs.num.coeff(n)
        for k in range(1, min(n, len(den) - 1) + 1):
            acc -= den[k] * coeffs[n - k]
        coeffs.append(acc)
        yield float(acc)


def fp_dist_recurrence(
    chain: TransitionMatrix, i: int, j: int, n_max: int | None = None, cap: int = N_CAP
) -> DistributionTable:
    """First-passage distribution of T_ij via the taboo recurrence.

    f_ij(1) = p_ij and f_ij(n) = sum_{k != j} p_ik f_kj(n-1).  Reducible
    chains are permitted: the distribution may then be defective and the
    tail converges to the escape probability instead of 0.
    """
    _check_state(chain, i, "source")
    _check_state(chain, j, "target")
    probs, tail = truncate(taboo_steps(chain, i, j), 0.0, n_max, cap)
    return DistributionTable(probs=probs, n_max=len(probs) - 1, tail_mass=tail, support_offset=1)


def fp_dist_series(
    chain: TransitionMatrix, i: int, j: int, n_max: int | None = None, cap: int = N_CAP
) -> DistributionTable:
    """First-passage distribution of T_ij via the adjugate-ratio series.

    Same contract as :func:`fp_dist_recurrence`; truncation adapts on this
    route's own coefficients so the two routes stay fully independent.
    """
    _check_state(chain, i, "source")
    _check_state(chain, j, "target")
    probs, tail = truncate(series_steps(chain, i, j), 0.0, n_max, cap)
    return DistributionTable(probs=probs, n_max=len(probs) - 1, tail_mass=tail, support_offset=1)


def truncated_mean(dist: DistributionTable) -> tuple[float, bool]:
    """Lower bound sum n p_n for the mean, and whether the table resolved.

    ``resolved`` is True when the tail mass fell below TAIL_TOL; only then
    is the bound a trustworthy approximation of the true mean (error at
    most tail_mass times the unobserved excess over n_max).
    """
    n = np.arange(len(dist.probs))
    mean = float(n @ dist.probs)
    return mean, bool(dist.tail_mass <= TAIL_TOL)
