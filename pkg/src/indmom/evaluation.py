"""Three-term recurrence evaluation with controlled truncation.

Evaluates the orthonormal polynomials ``p_n(z)`` and the second-kind
polynomials ``q_n(z)`` (initial data ``p_0 = 1`` and ``q_0 = 0,
q_1 = 1/a_0``) for a coefficient source, together with the cumulative
squared sums that approximate the squared norms of the corresponding
square-summable sequences.

Truncation discipline
---------------------
Every cross-point formula in this package (Nevanlinna functions, kernels,
residues, measures) is evaluated at one *shared* level ``L = policy.n_max``.
The algebraic identity web between those quantities holds exactly at any
common truncation level, so sharing the level keeps identity residuals at
roundoff even when the underlying series converge slowly.  The adaptive
stop index prescribed by the policy (smallest N with
``safety * (|p_N|^2 + |q_N|^2) < tail_tol * (cum_p2 + cum_q2)``) is still
computed per point and reported as convergence metadata; ``eval_pq``
returns arrays sliced at that adaptive index, which is its contract.

The standard backend is numpy complex128 (vectorized over batches of
points); the extended backend uses mpmath with a configurable number of
digits and is meant for ill-conditioned zero scans.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .coefficients import JacobiCoefficients
from .errors import EvaluationOverflowError

_OVERFLOW_LIMIT = 1e150


@dataclass(frozen=True)
class TruncationPolicy:
    """Stop rule for the recurrence partial sums.

    n_max: hard cap on the truncation index (also the shared evaluation
        level used by all cross-point formulas).
    tail_tol: target relative size of the last increment.
    safety: multiplier on the empirical tail estimate.
    """

    n_max: int = 500
    tail_tol: float = 1e-3
    safety: float = 10.0

    def __post_init__(self):
        if self.n_max < 8:
            raise ValueError("n_max must be at least 8")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")
        if not self.safety >= 1:
            raise ValueError("safety must be >= 1")


@dataclass(frozen=True)
class PolyEval:
    """Recurrence values at a point, truncated at the adaptive stop index.

    Arrays hold ``p_0..p_N`` and ``q_0..q_N``; ``cum_p2``/``cum_q2`` are the
    squared sums through index N; ``tail_est`` is the last increment
    ``|p_N|^2 + |q_N|^2``; ``converged`` records whether the stop rule was
    met before the cap.
    """

    z: complex
    p: np.ndarray
    q: np.ndarray
    cum_p2: float
    cum_q2: float
    N: int
    tail_est: float
    converged: bool


@dataclass
class PointTable:
    """Internal: full-level recurrence data at one point.

    Arrays run through index ``level + 1`` (one past the shared level, for
    the Casorati forms).  ``cums`` are cumulative sums of
    ``|p_k|^2`` / ``|q_k|^2`` through each index.
    """

    z: complex
    p: np.ndarray
    q: np.ndarray
    cum_p2: np.ndarray
    cum_q2: np.ndarray
    stop_index: int
    converged: bool
    tail_est: float
    level: int

    @property
    def norm_p2(self) -> float:
        """Squared norm proxy at the shared level."""
        return float(self.cum_p2[self.level])

    @property
    def norm_q2(self) -> float:
        return float(self.cum_q2[self.level])


def recurrence_batch(a: np.ndarray, b: np.ndarray, zs: np.ndarray,
                     upto: int) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized p/q tables: shape (upto+1, len(zs)).

    Raises EvaluationOverflowError if values leave the double range.
    """
    zs = np.asarray(zs, dtype=complex)
    npts = zs.shape[0]
    P = np.empty((upto + 1, npts), dtype=complex)
    Q = np.empty((upto + 1, npts), dtype=complex)
    P[0] = 1.0
    Q[0] = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        if upto >= 1:
            P[1] = (zs - b[0]) / a[0]
            Q[1] = 1.0 / a[0]
        for n in range(1, upto):
            P[n + 1] = ((zs - b[n]) * P[n] - a[n - 1] * P[n - 1]) / a[n]
            Q[n + 1] = ((zs - b[n]) * Q[n] - a[n - 1] * Q[n - 1]) / a[n]
        mx = max(np.max(np.abs(P)), np.max(np.abs(Q))) if upto >= 1 else 1.0
    if not np.isfinite(mx) or mx > _OVERFLOW_LIMIT:
        raise EvaluationOverflowError(
            "evaluation overflow; reduce |z| or use higher precision")
    return P, Q


def recurrence_mp(a: np.ndarray, b: np.ndarray, z, upto: int, dps: int):
    """mpmath p/q arrays (object dtype) at one point."""
    import mpmath as mp

    with mp.workdps(dps):
        zm = mp.mpc(z)
        p = np.empty(upto + 1, dtype=object)
        q = np.empty(upto + 1, dtype=object)
        p[0], q[0] = mp.mpc(1), mp.mpc(0)
        if upto >= 1:
            p[1] = (zm - b[0]) / mp.mpf(a[0])
            q[1] = mp.mpc(1) / mp.mpf(a[0])
        for n in range(1, upto):
            p[n + 1] = ((zm - b[n]) * p[n] - a[n - 1] * p[n - 1]) / a[n]
            q[n + 1] = ((zm - b[n]) * q[n] - a[n - 1] * q[n - 1]) / a[n]
    return p, q


class Evaluator:
    """Shared-level evaluation cache for one (source, policy, precision).

    Immutable inputs, memoized point tables; safe to reuse across the
    module-level operations.  ``precision`` is "standard" (complex128) or
    "extended" (mpmath with ``dps`` digits).
    """

    def __init__(self, source: JacobiCoefficients, policy: TruncationPolicy,
                 precision: str = "standard", dps: int = 32):
        if precision not in ("standard", "extended"):
            raise ValueError("precision must be 'standard' or 'extended'")
        self.source = source
        self.policy = policy
        self.precision = precision
        self.dps = int(dps)
        self.level = policy.n_max
        # arrays reach one past the level for the Casorati forms
        self.a, self.b = source.arrays(self.level + 1)
        self._cache: Dict[complex, PointTable] = {}

    # -- point tables ------------------------------------------------------

    def table(self, z) -> PointTable:
        z = complex(z)
        hit = self._cache.get(z)
        if hit is not None:
            return hit
        if self.precision == "standard":
            P, Q = recurrence_batch(self.a, self.b, np.array([z]), self.level + 1)
            p, q = P[:, 0], Q[:, 0]
        else:
            p, q = recurrence_mp(self.a, self.b, z, self.level + 1, self.dps)
        tab = self._finish_table(z, p, q)
        self._cache[z] = tab
        return tab

    def tables_batch(self, zs) -> Tuple[np.ndarray, np.ndarray]:
        """Uncached (P, Q) tables for an array of points (standard backend)."""
        if self.precision == "standard":
            return recurrence_batch(self.a, self.b, np.asarray(zs, dtype=complex),
                                    self.level + 1)
        cols_p, cols_q = [], []
        for z in np.asarray(zs):
            p, q = recurrence_mp(self.a, self.b, complex(z), self.level + 1, self.dps)
            cols_p.append(p)
            cols_q.append(q)
        return np.stack(cols_p, axis=1), np.stack(cols_q, axis=1)

    def _finish_table(self, z: complex, p, q) -> PointTable:
        ab2 = np.array([abs(x) ** 2 for x in p], dtype=float) if p.dtype == object \
            else np.abs(p) ** 2
        qb2 = np.array([abs(x) ** 2 for x in q], dtype=float) if q.dtype == object \
            else np.abs(q) ** 2
        cum_p2 = np.cumsum(ab2)
        cum_q2 = np.cumsum(qb2)
        inc = ab2 + qb2
        cum = cum_p2 + cum_q2
        pol = self.policy
        ok = pol.safety * inc[: self.level + 1] < pol.tail_tol * cum[: self.level + 1]
        idx = np.nonzero(ok)[0]
        idx = idx[idx >= 2]  # keep at least p_0..p_2 so the initial data is visible
        if len(idx):
            stop, converged = int(idx[0]), True
        else:
            stop, converged = self.level, False
        tail_est = float(inc[stop])
        return PointTable(z=z, p=p, q=q, cum_p2=cum_p2, cum_q2=cum_q2,
                          stop_index=stop, converged=converged,
                          tail_est=tail_est, level=self.level)

    # -- raw values beyond the shared level --------------------------------

    def pq_upto(self, z, upto: int) -> Tuple[np.ndarray, np.ndarray]:
        """p_0..p_upto, q_0..q_upto at z (exact finite-sum helpers).

        Independent of the shared level; used where the computation is a
        finite sum rather than a truncated series.
        """
        a, b = self.source.arrays(max(upto, 1))
        if self.precision == "standard":
            P, Q = recurrence_batch(a, b, np.array([complex(z)]), upto)
            return P[:, 0], Q[:, 0]
        return recurrence_mp(a, b, complex(z), upto, self.dps)


_EVALUATORS: Dict[tuple, Evaluator] = {}


def evaluator_for(source: JacobiCoefficients, policy: TruncationPolicy,
                  precision: str = "standard", dps: int = 32) -> Evaluator:
    """Memoized Evaluator per (source, policy, precision, dps)."""
    key = (source, policy, precision, dps)
    ev = _EVALUATORS.get(key)
    if ev is None:
        ev = Evaluator(source, policy, precision, dps)
        _EVALUATORS[key] = ev
    return ev


def clear_evaluator_cache() -> None:
    _EVALUATORS.clear()


def eval_pq(source: JacobiCoefficients, z, policy: TruncationPolicy,
            precision: str = "standard", dps: int = 32) -> PolyEval:
    """Evaluate p/q at z, truncating at the policy's adaptive stop index."""
    ev = evaluator_for(source, policy, precision, dps)
    tab = ev.table(z)
    N = tab.stop_index
    return PolyEval(z=complex(z), p=tab.p[: N + 1].copy(), q=tab.q[: N + 1].copy(),
                    cum_p2=float(tab.cum_p2[N]), cum_q2=float(tab.cum_q2[N]),
                    N=N, tail_est=tab.tail_est, converged=tab.converged)
