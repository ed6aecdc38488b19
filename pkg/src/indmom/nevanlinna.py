"""The Nevanlinna functions A, B, C, D of one and two variables.

Two independent computational forms are kept side by side at every
truncation index n:

* series form: ``A_n(u,v) = (u-v) sum_{k<=n} q_k(u) q_k(v)`` and its three
  companions (the B/C series carry the constants -1 and +1);
* Casorati form: 2x2 determinants in consecutive p/q values scaled by a_n,
  e.g. ``D_n(u,v) = a_n (p_{n+1}(u) p_n(v) - p_n(u) p_{n+1}(v))``.

The forms agree identically in exact arithmetic, which is the backbone
cross-check of the module.  All full evaluations are taken at the shared
level L = policy.n_max so that the determinant identity A D - B C = 1, the
three-point composition formulas, the one-variable reconstruction and the
transfer-matrix cocycle hold to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .coefficients import JacobiCoefficients
from .evaluation import Evaluator, TruncationPolicy, evaluator_for

__all__ = [
    "NevQuad", "TransferMatrix", "ExtendedComplex", "INFINITY",
    "nev", "nev_partial", "nev_one", "partial_quad_arrays",
    "reconstruct_two_var", "three_point_residual", "transfer", "mobius",
    "tilde_relations_residual",
]


@dataclass(frozen=True)
class NevQuad:
    """Values of (A, B, C, D) at a point pair with truncation metadata."""

    u: complex
    v: complex
    A: complex
    B: complex
    C: complex
    D: complex
    N: int
    cross_err: float
    converged: bool

    def as_tuple(self) -> Tuple[complex, complex, complex, complex]:
        return (self.A, self.B, self.C, self.D)

    @property
    def det_residual(self) -> float:
        return float(abs(self.A * self.D - self.B * self.C - 1.0))


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 determinant-one matrix h_n(u,v) = [[C_n, A_n], [-D_n, -B_n]]."""

    entries: np.ndarray
    u: complex
    v: complex
    n: int

    def det(self) -> complex:
        e = self.entries
        return e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]


class ExtendedComplex:
    """A point of the extended complex plane (tagged infinity, no sentinels)."""

    __slots__ = ("value",)

    def __init__(self, value: Optional[complex]):
        self.value = None if value is None else complex(value)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def __eq__(self, other):
        if isinstance(other, ExtendedComplex):
            return self.value == other.value
        if other is None:
            return False
        return self.value is not None and self.value == complex(other)

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "ExtendedComplex(inf)" if self.is_infinity else f"ExtendedComplex({self.value})"


INFINITY = ExtendedComplex(None)


def _series_sums(ev: Evaluator, u: complex, v: complex, n: int):
    """Partial cross sums S_qq, S_pq, S_qp, S_pp through index n."""
    tu, tv = ev.table(u), ev.table(v)
    s = slice(0, n + 1)
    pu, qu, pv, qv = tu.p[s], tu.q[s], tv.p[s], tv.q[s]
    return (np.dot(qu, qv), np.dot(pu, qv), np.dot(qu, pv), np.dot(pu, pv))


def _series_quad(ev: Evaluator, u: complex, v: complex, n: int):
    sqq, spq, sqp, spp = _series_sums(ev, u, v, n)
    w = u - v
    return (w * sqq, -1.0 + w * spq, 1.0 + w * sqp, w * spp)


def _casorati_quad(ev: Evaluator, u: complex, v: complex, n: int):
    tu, tv = ev.table(u), ev.table(v)
    an = ev.a[n]
    pu, qu, pv, qv = tu.p, tu.q, tv.p, tv.q
    return (an * (qu[n + 1] * qv[n] - qu[n] * qv[n + 1]),
            an * (pu[n + 1] * qv[n] - pu[n] * qv[n + 1]),
            an * (qu[n + 1] * pv[n] - qu[n] * pv[n + 1]),
            an * (pu[n + 1] * pv[n] - pu[n] * pv[n + 1]))


def partial_quad_arrays(source: JacobiCoefficients, u, v, upto: int,
                        policy: Optional[TruncationPolicy] = None,
                        evaluator: Optional[Evaluator] = None
                        ) -> Tuple[np.ndarray, np.ndarray]:
    """Series and Casorati partial values for every n <= upto.

    Returns two arrays of shape (4, upto+1) ordered (A_n, B_n, C_n, D_n).
    """
    ev = evaluator if evaluator is not None else evaluator_for(
        source, policy if policy is not None else TruncationPolicy())
    if not 0 <= upto <= ev.level:
        raise ValueError(f"upto={upto} outside 0..{ev.level}")
    u, v = complex(u), complex(v)
    tu, tv = ev.table(u), ev.table(v)
    s = slice(0, upto + 1)
    pu, qu, pv, qv = tu.p, tu.q, tv.p, tv.q
    w = u - v
    ser = np.stack([
        w * np.cumsum(qu[s] * qv[s]),
        -1.0 + w * np.cumsum(pu[s] * qv[s]),
        1.0 + w * np.cumsum(qu[s] * pv[s]),
        w * np.cumsum(pu[s] * pv[s]),
    ])
    an = ev.a[s]
    up1 = slice(1, upto + 2)
    cas = np.stack([
        an * (qu[up1] * qv[s] - qu[s] * qv[up1]),
        an * (pu[up1] * qv[s] - pu[s] * qv[up1]),
        an * (qu[up1] * pv[s] - qu[s] * pv[up1]),
        an * (pu[up1] * pv[s] - pu[s] * pv[up1]),
    ])
    return ser, cas


def nev_partial(source: JacobiCoefficients, u, v, n: int,
                policy: Optional[TruncationPolicy] = None,
                evaluator: Optional[Evaluator] = None) -> NevQuad:
    """Partial functions A_n..D_n in both forms; series values are returned.

    ``cross_err`` is the max absolute discrepancy between the series and
    Casorati forms over the four functions.
    """
    ev = evaluator if evaluator is not None else evaluator_for(
        source, policy if policy is not None else TruncationPolicy())
    if not 0 <= n <= ev.level:
        raise ValueError(f"partial index n={n} outside 0..{ev.level}")
    u, v = complex(u), complex(v)
    ser = _series_quad(ev, u, v, n)
    cas = _casorati_quad(ev, u, v, n)
    cross = max(abs(s - c) for s, c in zip(ser, cas))
    return NevQuad(u=u, v=v, A=ser[0], B=ser[1], C=ser[2], D=ser[3],
                   N=n, cross_err=float(cross), converged=True)


def nev(source: JacobiCoefficients, u, v, policy: TruncationPolicy,
        evaluator: Optional[Evaluator] = None) -> NevQuad:
    """Two-variable quadruple at the shared level L = policy.n_max.

    ``converged`` reports whether all four series increments fell below
    ``tail_tol * (1 + |value|)`` before the cap; values are the level-L
    partial sums either way.
    """
    ev = evaluator if evaluator is not None else evaluator_for(source, policy)
    u, v = complex(u), complex(v)
    L = ev.level
    ser = _series_quad(ev, u, v, L)
    cas = _casorati_quad(ev, u, v, L)
    cross = max(abs(s - c) for s, c in zip(ser, cas))
    tu, tv = ev.table(u), ev.table(v)
    w = abs(u - v)
    incs = (w * abs(tu.q[L] * tv.q[L]), w * abs(tu.p[L] * tv.q[L]),
            w * abs(tu.q[L] * tv.p[L]), w * abs(tu.p[L] * tv.p[L]))
    conv = all(inc < ev.policy.tail_tol * (1.0 + abs(val))
               for inc, val in zip(incs, ser))
    return NevQuad(u=u, v=v, A=ser[0], B=ser[1], C=ser[2], D=ser[3],
                   N=L, cross_err=float(cross), converged=bool(conv))


def nev_one(source: JacobiCoefficients, u, policy: TruncationPolicy,
            evaluator: Optional[Evaluator] = None
            ) -> Tuple[complex, complex, complex, complex]:
    """One-variable quadruple (A(u), B(u), C(u), D(u)), second variable 0."""
    q = nev(source, u, 0.0, policy, evaluator=evaluator)
    return q.as_tuple()


def reconstruct_two_var(source: JacobiCoefficients, u, v,
                        policy: TruncationPolicy,
                        evaluator: Optional[Evaluator] = None) -> NevQuad:
    """Two-variable quadruple rebuilt from one-variable values.

    Independent cross-check of :func:`nev`:
    A(u,v) = A(u)C(v) - A(v)C(u), B(u,v) = B(u)C(v) - A(v)D(u),
    C(u,v) = A(u)D(v) - B(v)C(u), D(u,v) = B(u)D(v) - B(v)D(u).
    """
    ev = evaluator if evaluator is not None else evaluator_for(source, policy)
    u, v = complex(u), complex(v)
    Au, Bu, Cu, Du = nev_one(source, u, policy, evaluator=ev)
    Av, Bv, Cv, Dv = nev_one(source, v, policy, evaluator=ev)
    A2 = Au * Cv - Av * Cu
    B2 = Bu * Cv - Av * Du
    C2 = Au * Dv - Bv * Cu
    D2 = Bu * Dv - Bv * Du
    direct = nev(source, u, v, policy, evaluator=ev)
    cross = max(abs(A2 - direct.A), abs(B2 - direct.B),
                abs(C2 - direct.C), abs(D2 - direct.D))
    return NevQuad(u=u, v=v, A=A2, B=B2, C=C2, D=D2, N=ev.level,
                   cross_err=float(cross), converged=direct.converged)


def three_point_residual(source: JacobiCoefficients, u, v, w,
                         policy: TruncationPolicy,
                         evaluator: Optional[Evaluator] = None) -> float:
    """Max residual of the four composition formulas through a waypoint w.

    e.g. D(u,v) = D(u,w)C(w,v) - B(u,w)D(w,v).
    """
    ev = evaluator if evaluator is not None else evaluator_for(source, policy)
    quv = nev(source, u, v, policy, evaluator=ev)
    quw = nev(source, u, w, policy, evaluator=ev)
    qwv = nev(source, w, v, policy, evaluator=ev)
    res = (
        quv.A - (quw.C * qwv.A - quw.A * qwv.B),
        quv.B - (quw.D * qwv.A - quw.B * qwv.B),
        quv.C - (quw.C * qwv.C - quw.A * qwv.D),
        quv.D - (quw.D * qwv.C - quw.B * qwv.D),
    )
    return float(max(abs(r) for r in res))


def transfer(source: JacobiCoefficients, u, v, n: int,
             policy: Optional[TruncationPolicy] = None,
             evaluator: Optional[Evaluator] = None) -> TransferMatrix:
    """Transfer matrix h_n(u,v) moving polynomial data from v to u."""
    q = nev_partial(source, u, v, n, policy=policy, evaluator=evaluator)
    m = np.array([[q.C, q.A], [-q.D, -q.B]], dtype=complex)
    return TransferMatrix(entries=m, u=complex(u), v=complex(v), n=n)


def mobius(source: JacobiCoefficients, u, v, z, policy: TruncationPolicy,
           evaluator: Optional[Evaluator] = None) -> ExtendedComplex:
    """Moebius map z -> (C(u,v) z + A(u,v)) / (-D(u,v) z - B(u,v)).

    Operates on the extended plane: ``z`` may be complex or
    :data:`INFINITY`; poles map to :data:`INFINITY`.
    """
    q = nev(source, u, v, policy, evaluator=evaluator)
    if isinstance(z, ExtendedComplex) and z.is_infinity:
        num, den = q.C, -q.D
    else:
        zc = z.value if isinstance(z, ExtendedComplex) else complex(z)
        num = q.C * zc + q.A
        den = -q.D * zc - q.B
    if den == 0:
        return INFINITY
    return ExtendedComplex(num / den)


def tilde_relations_residual(source: JacobiCoefficients, u, v,
                             policy: TruncationPolicy, z=None) -> float:
    """Residuals linking the once-truncated problem to the original.

    Checks, at matched truncation (original level L, truncated level L-1,
    matching the one-step index shift of the truncated problem):
    A(z) = a_0^{-2} D~(z); C(z) = -b_0 a_0^{-2} D~(z) - B~(z);
    D~(u,v) = a_0^2 A(u,v); B~(u,v) = (v - b_0) A(u,v) - C(u,v).
    """
    ev = evaluator_for(source, policy)
    trunc = source.truncate_once()
    evt = evaluator_for(trunc, policy)
    a0, b0 = source.coeffs(0)
    u, v = complex(u), complex(v)
    zz = complex(z) if z is not None else u
    Lm1 = ev.level - 1

    qz = nev(source, zz, 0.0, policy, evaluator=ev)
    qzt = nev_partial(trunc, zz, 0.0, Lm1, evaluator=evt)
    res = [
        abs(qz.A - qzt.D / a0 ** 2),
        abs(qz.C + b0 / a0 ** 2 * qzt.D + qzt.B),
    ]
    q2 = nev(source, u, v, policy, evaluator=ev)
    q2t = nev_partial(trunc, u, v, Lm1, evaluator=evt)
    res.append(abs(q2t.D - a0 ** 2 * q2.A))
    res.append(abs(q2t.B - ((v - b0) * q2.A - q2.C)))
    return float(max(res))
