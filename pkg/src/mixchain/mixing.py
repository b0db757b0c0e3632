"""Distributions and expectations of the time to stationarity.

The mixing state M is drawn once from the stationary distribution; the
hitting variant T^(0) counts 0 when the start already equals M, while the
passage variant T^(1) always takes at least one step (a first return when
M equals the start).  Tables are assembled from the passage module's taboo
recurrences so every cross-check on f_ij(n) transfers; periodic irreducible
chains are fully supported since nothing here needs convergence of P**n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .chain import TransitionMatrix, classify, fundamental_matrix, kemeny_constant, mean_first_passage, stationary
from .errors import InvariantViolation, NotIrreducible
from .passage import DistributionTable, fp_dist_recurrence, taboo_steps, truncate, truncated_mean
from .series import adjugate_poly, det_poly
from .tolerances import MAT_TOL, N_CAP


@dataclass(frozen=True)
class MixingReport:
    """Per-state mixing tables plus expectations and cross-check residuals."""

    hit_dists: tuple[DistributionTable, ...]
    pass_dists: tuple[DistributionTable, ...]
    tau: float
    eta: float
    diagnostics: dict[str, float]


def _require_irreducible(chain: TransitionMatrix, what: str) -> None:
    if not classify(chain).irreducible:
        raise NotIrreducible(f"{what} requires an irreducible chain")


def _weighted_steps(chain: TransitionMatrix, pi: np.ndarray, i: int, include_return: bool) -> Iterator[float]:
    targets = [j for j in range(chain.m) if include_return or j != i]
    gens = [(pi[j], taboo_steps(chain, i, j)) for j in targets]
    while True:
        yield float(sum(w * next(g) for w, g in gens))


def mixing_hit_dist(
    chain: TransitionMatrix, pi: np.ndarray, i: int, n_max: int | None = None, cap: int = N_CAP
) -> DistributionTable:
    """Distribution of the hitting-variant mixing time from state i.

    p_0 = pi_i (the mixing state was the start) and, for n >= 1,
    p_n = sum_{j != i} pi_j f_ij(n).

    Raises
    ------
    NotIrreducible
    """
    _require_irreducible(chain, "mixing distribution")
    probs, tail = truncate(_weighted_steps(chain, pi, i, include_return=False), float(pi[i]), n_max, cap)
    return DistributionTable(probs=probs, n_max=len(probs) - 1, tail_mass=tail, support_offset=0)


def mixing_pass_dist(
    chain: TransitionMatrix, pi: np.ndarray, i: int, n_max: int | None = None, cap: int = N_CAP
) -> DistributionTable:
    """Distribution of the passage-variant mixing time from state i.

    p_0 = 0 and, for n >= 1, p_n = sum_j pi_j f_ij(n), the j = i term being
    the first return to the start.

    Raises
    ------
    NotIrreducible
    """
    _require_irreducible(chain, "mixing distribution")
    probs, tail = truncate(_weighted_steps(chain, pi, i, include_return=True), 0.0, n_max, cap)
    return DistributionTable(probs=probs, n_max=len(probs) - 1, tail_mass=tail, support_offset=1)


def gf_eval(chain: TransitionMatrix, i: int, variant: str, s: float) -> float:
    """Evaluate the mixing-time generating function at a point s in [0, 1).

    Uses exact rational evaluation of cofactor ratios a_ij(s)/a_jj(s) by
    Horner's rule, with no series truncation: the hit variant is
    sum_j pi_j a_ij(s)/a_jj(s); the pass variant subtracts
    pi_i det(I - sP)/a_ii(s).

    Raises
    ------
    NotIrreducible, ValueError
    """
    if variant not in ("hit", "pass"):
        raise ValueError(f"variant must be 'hit' or 'pass', got {variant!r}")
    if not 0.0 <= s < 1.0:
        raise ValueError(f"s must lie in [0, 1), got {s!r}")
    _require_irreducible(chain, "generating function evaluation")
    pi = stationary(chain)
    adj = adjugate_poly(chain)
    value = sum(pi[j] * adj.entry(i, j)(s) / adj.entry(j, j)(s) for j in range(chain.m))
    if variant == "pass":
        value -= pi[i] * det_poly(chain)(s) / adj.entry(i, i)(s)
    return float(value)


def per_state_expected_mixing(
    chain: TransitionMatrix, pi: np.ndarray, mfp: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-start-state sums (tau_i, eta_i) with tau_i = sum_{j != i} pi_j m_ij
    and eta_i = sum_j pi_j m_ij, before any i-independence is assumed."""
    eta = mfp @ pi
    tau = eta - np.diag(mfp) * pi
    return tau, eta


def expected_mixing(chain: TransitionMatrix, pi: np.ndarray, mfp: np.ndarray) -> tuple[float, float]:
    """Expected mixing times (tau, eta).

    Both per-state sums are computed for every start state; the theorems say
    they cannot depend on the start, so a spread beyond MAT_TOL (or an eta
    that strays from trace(Z)) is reported as an invariant violation rather
    than averaged away.

    Raises
    ------
    NotIrreducible, InvariantViolation
    """
    _require_irreducible(chain, "expected mixing time")
    tau_vec, eta_vec = per_state_expected_mixing(chain, pi, mfp)
    spread = max(float(np.ptp(tau_vec)), float(np.ptp(eta_vec)))
    if spread > MAT_TOL:
        raise InvariantViolation(f"expected mixing time varies with start state by {spread:.3e}")
    tau = float(tau_vec.mean())
    eta = float(eta_vec.mean())
    trace_z = kemeny_constant(fundamental_matrix(chain, pi))
    if abs(eta - trace_z) > MAT_TOL:
        raise InvariantViolation(f"eta {eta!r} disagrees with trace(Z) {trace_z!r}")
    if abs(tau - (eta - 1.0)) > MAT_TOL:
        raise InvariantViolation(f"tau {tau!r} is not eta - 1 = {eta - 1.0!r}")
    return tau, eta


def shift_residual(hit: DistributionTable, pass_: DistributionTable, n_limit: int | None = None) -> float:
    """Max |f_n - g_{n+1}| over the overlap: how far the passage variant is
    from being the hitting variant shifted by one step.

    The expectations always differ by exactly 1; equality of the whole
    distributions holds only for special chains, so this is a checker, not
    an asserted identity.
    """
    limit = min(len(hit.probs), len(pass_.probs) - 1)
    if n_limit is not None:
        limit = min(limit, n_limit + 1)
    return float(np.max(np.abs(hit.probs[:limit] - pass_.probs[1 : limit + 1])))


def mixing_report(chain: TransitionMatrix, n_max: int | None = None, cap: int = N_CAP) -> MixingReport:
    """Assemble per-state hit/pass tables, tau, eta and diagnostic residuals.

    Diagnostics: per-state spread of the expectation sums, |eta - trace(Z)|,
    the worst g_n = f_n + pi_i f_ii(n) linkage residual, and the worst
    truncated-moment residual among resolved tables.
    """
    _require_irreducible(chain, "mixing report")
    pi = stationary(chain)
    z = fundamental_matrix(chain, pi)
    mfp = mean_first_passage(chain, pi, z)
    tau, eta = expected_mixing(chain, pi, mfp)
    tau_vec, eta_vec = per_state_expected_mixing(chain, pi, mfp)

    hit_dists = tuple(mixing_hit_dist(chain, pi, i, n_max, cap) for i in range(chain.m))
    pass_dists = tuple(mixing_pass_dist(chain, pi, i, n_max, cap) for i in range(chain.m))

    linkage = 0.0
    moment = 0.0
    for i in range(chain.m):
        h, g = hit_dists[i], pass_dists[i]
        n = min(len(h.probs), len(g.probs))
        returns = fp_dist_recurrence(chain, i, i, n_max=n - 1)
        gap = g.probs[1:n] - h.probs[1:n] - pi[i] * returns.probs[1:n]
        if gap.size:
            linkage = max(linkage, float(np.max(np.abs(gap))))
        for table, target in ((h, tau), (g, eta)):
            mean, resolved = truncated_mean(table)
            if resolved:
                moment = max(moment, abs(mean - target))
    return MixingReport(
        hit_dists=hit_dists,
        pass_dists=pass_dists,
        tau=tau,
        eta=eta,
        diagnostics={
            "spread_tau": float(np.ptp(tau_vec)),
            "spread_eta": float(np.ptp(eta_vec)),
            "eta_minus_trace_z": abs(eta - kemeny_constant(z)),
            "linkage_residual": linkage,
            "moment_residual": moment,
        },
    )
