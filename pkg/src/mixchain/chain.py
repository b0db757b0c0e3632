"""Transition-matrix validation, structure classification, stationary
distributions, the fundamental matrix, mean first passage times and the
Kemeny constant.

States are 0-based throughout the library; only the CLI speaks 1-based.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import (
    InvariantViolation,
    NegativeEntry,
    NonSquare,
    NotIrreducible,
    RowSumOutOfTolerance,
    SingularSystem,
)
from .tolerances import MAT_TOL, ROW_TOL


@dataclass(frozen=True)
class TransitionMatrix:
    """A validated row-stochastic matrix.

    ``entries`` is a read-only float64 array whose rows sum to 1 exactly
    (renormalized on admission).  ``notes`` records any renormalization
    applied so the provenance of the numbers stays visible.
    """

    entries: np.ndarray
    m: int
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        self.entries.setflags(write=False)


@dataclass(frozen=True)
class ChainStructure:
    irreducible: bool
    period: int
    regular: bool


def validate_chain(raw) -> TransitionMatrix:
    """Admit an array-like as a transition matrix.

    Rows whose sums lie within ROW_TOL of 1 are renormalized exactly and the
    adjustment is recorded in ``notes``.  Reducible chains are accepted here;
    operations that need irreducibility reject them later with a precise
    error.

    Raises
    ------
    NonSquare, NegativeEntry, RowSumOutOfTolerance
    """
    p = np.array(raw, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {p.shape}")
    m = p.shape[0]
    if m < 2:
        raise NonSquare("need at least 2 states")
    neg = np.argwhere(p < 0.0)
    if neg.size:
        i, j = neg[0]
        raise NegativeEntry(f"entry ({i + 1},{j + 1}) is negative: {p[i, j]!r}")
    sums = p.sum(axis=1)
    bad = np.argwhere(np.abs(sums - 1.0) > ROW_TOL)
    if bad.size:
        i = int(bad[0][0])
        raise RowSumOutOfTolerance(f"row {i + 1} sums to {sums[i]!r}, outside 1 +/- {ROW_TOL}")
    notes = []
    for i in range(m):
        if sums[i] != 1.0:
            p[i] /= sums[i]
            notes.append(f"row {i + 1} renormalized by factor {1.0 / sums[i]!r}")
    return TransitionMatrix(entries=p, m=m, notes=tuple(notes))


def _reachable(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def classify(chain: TransitionMatrix) -> ChainStructure:
    """Classify the digraph on edges {p_ij > 0}.

    Irreducible iff the digraph is strongly connected.  The period is the
    gcd of (level[u] + 1 - level[v]) over BFS tree and non-tree edges from
    state 0; for irreducible chains this equals the gcd of all cycle lengths
    through any state.  A reducible chain reports the gcd over the component
    reachable from state 0 (0 when that component has no cycle at all).
    """
    p = chain.entries
    m = chain.m
    adj = [list(np.nonzero(p[i] > 0.0)[0]) for i in range(m)]
    radj = [list(np.nonzero(p[:, j] > 0.0)[0]) for j in range(m)]

    fwd = _reachable(adj, 0)
    bwd = _reachable(radj, 0)
    irreducible = len(fwd) == m and len(bwd) == m

    level = {0: 0}
    queue = deque([0])
    g = 0
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
            g = gcd(g, level[u] + 1 - level[v])
    period = abs(g)
    return ChainStructure(
        irreducible=irreducible,
        period=period,
        regular=irreducible and period == 1,
    )


def stationary(chain: TransitionMatrix) -> np.ndarray:
    """Solve pi^T P = pi^T, sum(pi) = 1 for an irreducible chain.

    Replaces the last balance equation by the normalization row and solves
    with partial pivoting, which stays robust for periodic chains where
    power iteration would cycle.

    Raises
    ------
    NotIrreducible
    """
    if not classify(chain).irreducible:
        raise NotIrreducible("stationary distribution requires an irreducible chain")
    m = chain.m
    a = (np.eye(m) - chain.entries).T
    a[-1, :] = 1.0
    b = np.zeros(m)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - guarded by irreducibility
        raise SingularSystem(str(exc)) from exc
    return pi


def fundamental_matrix(chain: TransitionMatrix, pi: np.ndarray) -> np.ndarray:
    """Return Z = inv(I - P + Pi) with Pi = e pi^T (Kemeny/Snell).

    Raises
    ------
    SingularSystem
        If the defining system cannot be solved; this flags numerical
        breakdown, not a legitimate chain.
    """
    m = chain.m
    coeff = np.eye(m) - chain.entries + np.outer(np.ones(m), pi)
    try:
        z = np.linalg.solve(coeff, np.eye(m))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    return z


def kemeny_constant(z: np.ndarray) -> float:
    """Trace of the fundamental matrix; equals the expected passage-variant
    mixing time from every starting state."""
    return float(np.trace(z))


def mean_first_passage(chain: TransitionMatrix, pi: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Mean first passage times m_ij from the fundamental matrix.

    m_ii = 1/pi_i and, for i != j, m_ij = (z_jj - z_ij)/pi_j.  The result is
    cross-checked entrywise against the independent linear-system route; a
    disagreement beyond MAT_TOL means an upstream bug and raises.

    Raises
    ------
    SingularSystem, InvariantViolation
    """
    zd = np.diag(z)
    mfp = (zd[None, :] - z) / pi[None, :]
    np.fill_diagonal(mfp, 1.0 / pi)
    other = mean_first_passage_linear(chain)
    gap = float(np.max(np.abs(mfp - other)))
    if gap > MAT_TOL:
        raise InvariantViolation(
            f"fundamental-matrix and linear-system mean passage times differ by {gap:.3e}"
        )
    return mfp


def mean_first_passage_linear(chain: TransitionMatrix) -> np.ndarray:
    """Mean first passage times by solving, per target j,
    m_ij = 1 + sum_{k != j} p_ik m_kj.

    Independent of the fundamental matrix; used as the cross-check route.
    """
    p = chain.entries
    m = chain.m
    mfp = np.empty((m, m))
    eye = np.eye(m)
    for j in range(m):
        q = p.copy()
        q[:, j] = 0.0
        try:
            mfp[:, j] = np.linalg.solve(eye - q, np.ones(m))
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"mean passage system singular for target {j}") from exc
    return mfp
