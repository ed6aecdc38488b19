"""Numerical membership tests for the Jacobi operator domain and its extensions.

A vector of the adjoint domain splits uniquely into a closure-domain part
plus components along the two deficiency directions at a basepoint z0 in
the open upper half-plane.  The deficiency coefficients ("residues" here)
are computed from banded inner products:

    alpha = <(J - conj(z0)) v, p_{z0}> / (2i Im(z0) ||p_{z0}||^2)
    beta  = <(J - z0) v, p_{conj(z0)}> / (-2i Im(z0) ||p_{z0}||^2)

with sums truncated at the shared evaluation level L.  Genuinely finite
vectors (top index below L) get complete sums, which telescope to exactly
zero: the finitely supported space sits inside the domain.  Truncations of
the square-summable eigen-sequences p/q are built with top index L + 8 so
the recurrence boundary terms fall outside the truncated sums and the
computed coefficients match the two-variable Nevanlinna formulas.
Membership is decided by residues being below tolerance at two distinct
basepoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .coefficients import JacobiCoefficients
from .errors import (BasepointError, InconclusiveMembershipError,
                     SupportPointError)
from .evaluation import TruncationPolicy, evaluator_for
from .measures import DiscreteMeasure, ExtensionParam, stieltjes
from .nevanlinna import nev, nev_one
from .sequences import SeqVector, apply_jacobi

__all__ = [
    "Residues", "MembershipVerdict", "ResolventCombination",
    "DEFAULT_MEMBERSHIP_TOL", "second_basepoint", "p_vector", "q_vector",
    "extension_generator", "residues", "s_r_coefficients", "membership_DT",
    "pair_coefficient", "membership_DTt", "resolvent_combination",
]

DEFAULT_MEMBERSHIP_TOL = 1e-7
_TAIL_MARGIN = 8  # extra indices past the shared level for p/q truncations


@dataclass(frozen=True)
class Residues:
    """Deficiency-space coefficients of a vector at basepoint z0."""

    z0: complex
    alpha: complex
    beta: complex
    norm_input: float
    N: int

    def scaled(self) -> float:
        return max(abs(self.alpha), abs(self.beta)) / max(1.0, self.norm_input)


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a numerical domain-membership test."""

    in_domain: bool
    residual: float
    tol: float
    domain_tag: str


@dataclass(frozen=True)
class ResolventCombination:
    """Diagnostics for w p_lambda + q_lambda relative to one extension."""

    w: complex
    verdict: MembershipVerdict
    c_coeff: complex
    not_in_closure: MembershipVerdict
    decomposition: MembershipVerdict


def second_basepoint(z0: complex) -> complex:
    """Deterministic partner basepoint for the two-basepoint agreement test."""
    default = 1.0 + 2.0j
    return default if complex(z0) != default else 1.0j


def _require_upper(z0: complex) -> complex:
    z0 = complex(z0)
    if not z0.imag > 0:
        raise BasepointError(f"basepoint {z0} must lie in the open upper half-plane")
    return z0


def p_vector(source: JacobiCoefficients, lam, policy: TruncationPolicy) -> SeqVector:
    """Truncation of the sequence (p_n(lam)) with top index L + 8."""
    ev = evaluator_for(source, policy)
    M = ev.level + _TAIL_MARGIN
    p, _ = ev.pq_upto(complex(lam), M)
    return SeqVector(np.asarray(p, dtype=complex))


def q_vector(source: JacobiCoefficients, lam, policy: TruncationPolicy) -> SeqVector:
    """Truncation of the sequence (q_n(lam)) with top index L + 8."""
    ev = evaluator_for(source, policy)
    M = ev.level + _TAIL_MARGIN
    _, q = ev.pq_upto(complex(lam), M)
    return SeqVector(np.asarray(q, dtype=complex))


def extension_generator(source: JacobiCoefficients, t: ExtensionParam,
                        policy: TruncationPolicy) -> SeqVector:
    """Generator of D(T_t) over the closure domain: q_0 + t p_0, or p_0 at infinity."""
    if t.is_infinite:
        return p_vector(source, 0.0, policy)
    gp = p_vector(source, 0.0, policy)
    gq = q_vector(source, 0.0, policy)
    return SeqVector(gq.entries + t.t * gp.entries)


def residues(source: JacobiCoefficients, v: SeqVector, z0,
             policy: TruncationPolicy) -> Residues:
    """Deficiency coefficients of v at basepoint z0 (Im z0 > 0)."""
    z0 = _require_upper(z0)
    ev = evaluator_for(source, policy)
    L = ev.level
    tab = ev.table(z0)
    norm2 = tab.norm_p2
    jv = apply_jacobi(source, v).entries          # indices 0..M+1
    vv = np.zeros(jv.size, dtype=complex)
    vv[: v.entries.size] = v.entries
    cut = min(jv.size, L + 1)

    p_conj = np.conj(tab.p)                        # p_n(conj z0)
    denom = 2j * z0.imag * norm2
    w_plus = jv - np.conj(z0) * vv
    alpha = np.sum(w_plus[:cut] * p_conj[:cut]) / denom
    w_minus = jv - z0 * vv
    beta = np.sum(w_minus[:cut] * tab.p[:cut]) / (-denom)
    return Residues(z0=z0, alpha=complex(alpha), beta=complex(beta),
                    norm_input=v.norm(), N=L)


def s_r_coefficients(source: JacobiCoefficients, lam, z0,
                     policy: TruncationPolicy
                     ) -> Tuple[complex, complex, complex, complex]:
    """(s+, s-, r+, r-): deficiency coefficients of p_lam and q_lam.

    s+ = D(lam, conj z0) / (2i Im z0 ||p_{z0}||^2), s- with -D(lam, z0);
    r+/r- carry C in place of D.
    """
    z0 = _require_upper(z0)
    ev = evaluator_for(source, policy)
    lam = complex(lam)
    norm2 = ev.table(z0).norm_p2
    denom = 2j * z0.imag * norm2
    q_conj = nev(source, lam, np.conj(z0), policy, evaluator=ev)
    q_plain = nev(source, lam, z0, policy, evaluator=ev)
    s_plus = q_conj.D / denom
    s_minus = -q_plain.D / denom
    r_plus = q_conj.C / denom
    r_minus = -q_plain.C / denom
    return s_plus, s_minus, r_plus, r_minus


def membership_DT(source: JacobiCoefficients, v: SeqVector, z0,
                  tol: float = DEFAULT_MEMBERSHIP_TOL,
                  policy: Optional[TruncationPolicy] = None) -> MembershipVerdict:
    """Test membership in the closure domain via residues at two basepoints."""
    pol = policy if policy is not None else TruncationPolicy()
    z0 = _require_upper(z0)
    z1 = second_basepoint(z0)
    r0 = residues(source, v, z0, pol)
    r1 = residues(source, v, z1, pol)
    s0, s1 = r0.scaled(), r1.scaled()
    in0, in1 = s0 < tol, s1 < tol
    if in0 != in1:
        raise InconclusiveMembershipError(
            f"inconclusive: tighten truncation (residuals {s0:.3e} vs {s1:.3e})")
    return MembershipVerdict(in_domain=in0, residual=max(s0, s1), tol=tol,
                             domain_tag="DT")


def pair_coefficient(source: JacobiCoefficients, u, v,
                     policy: TruncationPolicy, case: str,
                     tol: float = 1e-8) -> Optional[complex]:
    """Coefficient making a two-point combination land in the closure domain.

    case "pp": p_u + alpha p_v needs D(u,v) = 0, alpha = B(u,v);
    case "qq": q_u + beta q_v needs A(u,v) = 0, beta = -C(u,v);
    case "pq": p_u + gamma q_v needs B(u,v) = 0, gamma = -D(u,v).
    Returns None when the gating function is not zero at tolerance.  The
    diagonal u = v is always absent: for "pq" because B(u,u) = -1, for
    "pp"/"qq" because the formula coefficient -1 collapses the combination
    to the zero vector (a convention, documented).
    """
    if case not in ("pp", "qq", "pq"):
        raise ValueError("case must be one of 'pp', 'qq', 'pq'")
    u, v = complex(u), complex(v)
    if abs(u - v) <= 1e-14 * (1.0 + abs(u)):
        return None
    q = nev(source, u, v, policy)
    if case == "pp":
        return q.B if abs(q.D) < tol else None
    if case == "qq":
        return -q.C if abs(q.A) < tol else None
    return -q.D if abs(q.B) < tol else None


def _cross_residual(r: Residues, g: Residues, norm_v: float) -> float:
    cross = abs(r.alpha * g.beta - r.beta * g.alpha)
    gscale = max(abs(g.alpha), abs(g.beta))
    return cross / (max(1.0, norm_v) * max(gscale, 1e-300))


def membership_DTt(source: JacobiCoefficients, v: SeqVector, t: ExtensionParam,
                   z0, tol: float = DEFAULT_MEMBERSHIP_TOL,
                   policy: Optional[TruncationPolicy] = None) -> MembershipVerdict:
    """Test membership in the domain of the self-adjoint extension T_t.

    The extension domain adds one direction, spanned by the generator
    g_t = q_0 + t p_0 (p_0 at infinity): v belongs iff its residue pair is
    a complex multiple of the generator's, i.e. the 2x2 cross-determinant
    of (alpha, beta) pairs vanishes.  Verified at two basepoints.
    """
    pol = policy if policy is not None else TruncationPolicy()
    z0 = _require_upper(z0)
    gen = extension_generator(source, t, pol)
    nv = v.norm()
    scaled = []
    for bp in (z0, second_basepoint(z0)):
        r = residues(source, v, bp, pol)
        g = residues(source, gen, bp, pol)
        scaled.append(_cross_residual(r, g, nv))
    in0, in1 = scaled[0] < tol, scaled[1] < tol
    if in0 != in1:
        raise InconclusiveMembershipError(
            f"inconclusive: tighten truncation (residuals {scaled[0]:.3e} "
            f"vs {scaled[1]:.3e})")
    return MembershipVerdict(in_domain=in0, residual=max(scaled), tol=tol,
                             domain_tag=f"DTt({t})")


def resolvent_combination(source: JacobiCoefficients, t: ExtensionParam,
                          lam: complex, measure: DiscreteMeasure,
                          policy: TruncationPolicy,
                          z0: complex = 1.0j,
                          tol: float = DEFAULT_MEMBERSHIP_TOL
                          ) -> ResolventCombination:
    """Build w p_lam + q_lam and verify its place in the domain lattice.

    The combination lies in D(T_t) but not in the closure domain; its
    component along the generator g_t has coefficient
    c = -1/(B(lam) + t D(lam)) (or -1/D(lam) at infinity), so subtracting
    c g_t must pass the closure-domain test.
    """
    lam = complex(lam)
    if len(measure.points):
        if float(np.min(np.abs(measure.points - lam))) < 1e-9 * (1 + abs(lam)):
            raise SupportPointError(f"lambda={lam} lies on the support")
    st = stieltjes(source, t, lam, measure, policy)
    w = st.w_param
    vp = p_vector(source, lam, policy)
    vq = q_vector(source, lam, policy)
    combo = SeqVector(w * vp.entries + vq.entries)
    verdict = membership_DTt(source, combo, t, z0, tol, policy)
    not_in = membership_DT(source, combo, z0, tol, policy)
    A, B, C, D = nev_one(source, lam, policy)
    c_coeff = -1.0 / D if t.is_infinite else -1.0 / (B + t.t * D)
    gen = extension_generator(source, t, policy)
    remainder = SeqVector(combo.entries - c_coeff * gen.entries)
    decomposition = membership_DT(source, remainder, z0, tol, policy)
    return ResolventCombination(w=w, verdict=verdict, c_coeff=complex(c_coeff),
                                not_in_closure=not_in,
                                decomposition=decomposition)
