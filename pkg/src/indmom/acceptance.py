"""The acceptance suite: every library invariant as a named, seeded check.

Each check returns :class:`CheckResult` rows with the measured quantity
and its tolerance; ``run_acceptance`` executes the full list and is the
backend of both ``indmom verify`` and the pytest acceptance module.  All
randomness is drawn from per-check streams seeded off the run seed, so
reports are reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .config import RunConfig, default_config
from .debranges import diff_quotient_residual, resolvent_residual, xi_apply
from .domains import (membership_DT, membership_DTt, p_vector,
                      pair_coefficient, q_vector, residues,
                      resolvent_combination, second_basepoint)
from .evaluation import evaluator_for
from .measures import (DiscreteMeasure, ExtensionParam, adjacent_zero_sign,
                       build_measure, stieltjes)
from .nevanlinna import (nev, nev_one, partial_quad_arrays,
                         three_point_residual, tilde_relations_residual)
from .sequences import SeqVector
from .zeros import RootScanConfig, count_zeros_rect, real_zeros

__all__ = ["CheckResult", "run_acceptance", "CHECK_NAMES"]

_MEMBERSHIP_TOL = 1e-7


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (f"{status} {self.name}: measured={self.measured:.3e} "
                f"tol={self.tolerance:.3e}{extra}")


def _disk(rng: np.random.Generator, radius: float, n: int) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    th = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * th)


def _upper(rng: np.random.Generator, n: int,
           im_lo: float = 0.05, im_hi: float = 3.0) -> np.ndarray:
    return rng.uniform(-3, 3, n) + 1j * rng.uniform(im_lo, im_hi, n)


def _pair_zero_scan(config: RunConfig, v: float, kind: str,
                    window=(-12.0, 12.0)) -> np.ndarray:
    """Real zeros in u of D(u,v) / A(u,v) / B(u,v) for real v."""
    ev = evaluator_for(config.problem, config.truncation)
    L = ev.level
    tv = ev.table(complex(v))

    def f(xs: np.ndarray) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        P, Q = ev.tables_batch(xs.astype(complex))
        if kind == "D":
            vals = (xs - v) * (tv.p[: L + 1] @ P[: L + 1])
        elif kind == "A":
            vals = (xs - v) * (tv.q[: L + 1] @ Q[: L + 1])
        else:  # B(u, v) = -1 + (u - v) sum p_k(u) q_k(v)
            vals = -1.0 + (xs - v) * (tv.q[: L + 1] @ P[: L + 1])
        return np.real(vals)

    cfg = RootScanConfig(window=window, grid_step=None,
                         refine_tol=config.scan.refine_tol,
                         zero_tol=config.scan.zero_tol)
    return real_zeros(f, cfg).zeros


# --- criteria ---------------------------------------------------------------

def _check_determinant(config: RunConfig) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 1)
    us, vs = _disk(rng, 3.0, 10), _disk(rng, 3.0, 10)
    worst = 0.0
    for u in us:
        for v in vs:
            q = nev(config.problem, u, v, config.truncation)
            worst = max(worst, q.det_residual)
    return [CheckResult("01_determinant_identity", worst < 1e-9, worst, 1e-9,
                        "|AD-BC-1| on 10x10 grid, |u|,|v|<=3")]


def _check_dual_form(config: RunConfig) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 2)
    upto = min(200, config.truncation.n_max - 1)
    worst = 0.0
    for u, v in zip(_disk(rng, 3.0, 20), _disk(rng, 3.0, 20)):
        ser, cas = partial_quad_arrays(config.problem, u, v, upto,
                                       config.truncation)
        dev = np.abs(ser - cas) / (1.0 + np.abs(ser))
        worst = max(worst, float(np.max(dev)))
    return [CheckResult("02_series_vs_casorati", worst < 1e-12, worst, 1e-12,
                        f"relative, n<={upto}, 20 seeded (u,v)")]


def _check_three_point(config: RunConfig) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 3)
    worst = 0.0
    for u, v, w in zip(_disk(rng, 2.0, 50), _disk(rng, 2.0, 50),
                       _disk(rng, 2.0, 50)):
        worst = max(worst, three_point_residual(config.problem, u, v, w,
                                                config.truncation))
    out = [CheckResult("03a_three_point_residual", worst < 1e-8, worst, 1e-8,
                       "50 seeded triples, |.|<=2")]

    upto = min(100, config.truncation.n_max - 1)
    worst_c = 0.0
    for u, v, w in zip(_disk(rng, 2.0, 5), _disk(rng, 2.0, 5),
                       _disk(rng, 2.0, 5)):
        suw, _ = partial_quad_arrays(config.problem, u, w, upto, config.truncation)
        swv, _ = partial_quad_arrays(config.problem, w, v, upto, config.truncation)
        suv, _ = partial_quad_arrays(config.problem, u, v, upto, config.truncation)
        A1, B1, C1, D1 = suw
        A2, B2, C2, D2 = swv
        A3, B3, C3, D3 = suv
        dev = np.max(np.abs(np.stack([
            A3 - (C1 * A2 - A1 * B2),
            B3 - (D1 * A2 - B1 * B2),
            C3 - (C1 * C2 - A1 * D2),
            D3 - (D1 * C2 - B1 * D2)])))
        worst_c = max(worst_c, float(dev))
    out.append(CheckResult("03b_transfer_cocycle", worst_c < 1e-10, worst_c,
                           1e-10, f"h_n(u,w)h_n(w,v)=h_n(u,v), n<={upto}"))
    return out


def _check_pick(config: RunConfig) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 4)
    margin = np.inf
    for z in _upper(rng, 100):
        A, B, C, D = nev_one(config.problem, z, config.truncation)
        margin = min(margin, (B / D).imag, (A / C).imag)
    return [CheckResult("04_pick_property", margin > 0, float(margin), 0.0,
                        "min Im(B/D), Im(A/C) at 100 seeded UHP points")]


def _measures_for(config: RunConfig) -> Dict[str, DiscreteMeasure]:
    start = RootScanConfig(window=(-5.0, 5.0), grid_step=None,
                           refine_tol=config.scan.refine_tol,
                           zero_tol=config.scan.zero_tol)
    out = {}
    for label, t in (("0", ExtensionParam.finite(0.0)),
                     ("1", ExtensionParam.finite(1.0)),
                     ("inf", ExtensionParam.infinite())):
        out[label] = build_measure(config.problem, t, start, config.truncation,
                                   n_check=6, auto_window=True,
                                   precision=config.precision)
    return out


def _check_measures(config: RunConfig,
                    measures: Dict[str, DiscreteMeasure]) -> List[CheckResult]:
    results = []
    for label, m in measures.items():
        worst = max(float(np.max(m.moment_residuals)), abs(m.captured_mass - 1.0))
        results.append(CheckResult(
            f"05_moment_reconstruction_t={label}", worst < 1e-6, worst, 1e-6,
            f"window={m.window[0]:g}:{m.window[1]:g}, "
            f"{len(m.points)} points, n<=6"))
    return results


def _check_supports(config: RunConfig,
                    measures: Dict[str, DiscreteMeasure]) -> List[CheckResult]:
    p0 = measures["0"].points
    p1 = measures["1"].points
    sep = float(np.min(np.abs(p0[:, None] - p1[None, :])))
    bound = 10 * config.scan.refine_tol
    out = [CheckResult("06a_support_disjointness", sep > bound, sep, bound,
                       "min distance between t=0 and t=1 supports")]

    ev = evaluator_for(config.problem, config.truncation)
    L = ev.level
    t0 = ev.table(0.0)
    rects = [(0.5, 5.5, 0.4, 3.0), (-7.0, -1.0, -2.5, -0.3), (-3.0, 2.0, 1.0, 4.0)]
    worst = 0
    for label, t in (("0", ExtensionParam.finite(0.0)),
                     ("1", ExtensionParam.finite(1.0)),
                     ("inf", ExtensionParam.infinite())):
        if t.is_infinite:
            wvec, off = t0.p[: L + 1], 0.0
        else:
            wvec, off = t0.q[: L + 1] + t.t * t0.p[: L + 1], -1.0

        def F(zs, wvec=wvec, off=off):
            zs = np.atleast_1d(np.asarray(zs, dtype=complex))
            P, _ = ev.tables_batch(zs)
            return off + zs * (wvec @ P[: L + 1])

        for rect in rects:
            worst = max(worst, abs(count_zeros_rect(F, rect)))
    out.append(CheckResult("06b_offaxis_zero_counts", worst == 0,
                           float(worst), 0.0,
                           "B+tD winding counts in off-axis rectangles"))
    return out


def _check_stieltjes(config: RunConfig,
                     measures: Dict[str, DiscreteMeasure]) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 7)
    worst = 0.0
    for label, m in measures.items():
        t = m.t
        lams = rng.uniform(-3, 3, 10) + 1j * rng.uniform(0.3, 2.5, 10)
        for lam in lams:
            st = stieltjes(config.problem, t, lam, m, config.truncation)
            worst = max(worst, abs(st.w_param - st.w_twovar), st.per_point_spread)
    return [CheckResult("07_stieltjes_consistency", worst < 1e-8, worst, 1e-8,
                        "param vs two-variable routes, 10 seeded lambda per t")]


def _membership_pairs(config: RunConfig, rng: np.random.Generator,
                      kind: str, count: int = 5):
    """Root-found (u, v, coefficient) triples for one combination case."""
    case = {"D": "pp", "A": "qq", "B": "pq"}[kind]
    pairs = []
    vs = rng.uniform(-2.5, 2.5, 16)
    for v in vs:
        zeros = _pair_zero_scan(config, float(v), kind)
        zeros = zeros[np.abs(zeros - v) > 1e-6]
        for u in zeros[np.argsort(np.abs(zeros - v))][:2]:
            coef = pair_coefficient(config.problem, complex(u), complex(v),
                                    config.truncation, case, tol=1e-6)
            if coef is not None:
                pairs.append((complex(u), complex(v), coef))
            if len(pairs) >= count:
                return pairs
    return pairs


def _check_membership(config: RunConfig) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 8)
    pol = config.truncation
    src = config.problem
    basepoints = (1.0j, second_basepoint(1.0j))

    worst_pos = 0.0
    made = 0
    for kind in ("D", "A", "B"):
        for u, v, coef in _membership_pairs(config, rng, kind):
            if kind == "D":
                vec = SeqVector(p_vector(src, u, pol).entries
                                + coef * p_vector(src, v, pol).entries)
            elif kind == "A":
                vec = SeqVector(q_vector(src, u, pol).entries
                                + coef * q_vector(src, v, pol).entries)
            else:
                vec = SeqVector(p_vector(src, u, pol).entries
                                + coef * q_vector(src, v, pol).entries)
            for bp in basepoints:
                worst_pos = max(worst_pos,
                                residues(src, vec, bp, pol).scaled())
            made += 1
    out = [CheckResult("08a_membership_positives", worst_pos < _MEMBERSHIP_TOL
                       and made >= 15, worst_pos, _MEMBERSHIP_TOL,
                       f"{made} root-found pairs across pp/qq/pq cases")]

    worst_neg = np.inf
    n_neg = 0
    while n_neg < 20:
        u, v = _disk(rng, 2.0, 1)[0], _disk(rng, 2.0, 1)[0]
        q = nev(src, u, v, pol)
        if abs(q.D) <= 0.1:
            continue
        alpha = _disk(rng, 2.0, 1)[0]
        vec = SeqVector(p_vector(src, u, pol).entries
                        + alpha * p_vector(src, v, pol).entries)
        worst_neg = min(worst_neg, residues(src, vec, 1.0j, pol).scaled())
        n_neg += 1
    out.append(CheckResult("08b_membership_negatives", worst_neg > 1e-3,
                           float(worst_neg), 1e-3,
                           "20 seeded combinations with |D(u,v)| > 0.1"))
    return out


def _check_signs(config: RunConfig) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 9)
    min_b, max_c = np.inf, -np.inf
    for v in rng.uniform(-2.0, 2.5, 5):
        cfgv = RootScanConfig(window=(v - 28.0, v + 1.0), grid_step=None,
                              refine_tol=config.scan.refine_tol,
                              zero_tol=config.scan.zero_tol)
        _, bval = adjacent_zero_sign(config.problem, float(v), cfgv, "D",
                                     config.truncation)
        _, cval = adjacent_zero_sign(config.problem, float(v), cfgv, "A",
                                     config.truncation)
        min_b = min(min_b, bval)
        max_c = max(max_c, cval)
    ok = min_b > 0 and max_c < 0
    return [CheckResult("09_adjacent_zero_signs", ok,
                        float(min(min_b, -max_c)), 0.0,
                        "B(u,v)>0 (D case) and C(u,v)<0 (A case), 5 pairs")]


def _check_extensions(config: RunConfig,
                      measures: Dict[str, DiscreteMeasure]) -> List[CheckResult]:
    src, pol = config.problem, config.truncation
    out = []

    m1 = measures["1"]
    lam0 = float(m1.points[np.argmin(np.abs(m1.points - 0.5))])
    vp = p_vector(src, lam0, pol)
    t1 = ExtensionParam.finite(1.0)
    v_in = membership_DTt(src, vp, t1, 1.0j, _MEMBERSHIP_TOL, pol)
    v_out0 = membership_DTt(src, vp, ExtensionParam.finite(0.0), 1.0j,
                            _MEMBERSHIP_TOL, pol)
    v_outi = membership_DTt(src, vp, ExtensionParam.infinite(), 1.0j,
                            _MEMBERSHIP_TOL, pol)
    ok_p = v_in.in_domain and not v_out0.in_domain and not v_outi.in_domain

    # second-kind vector: lambda with A + tC = 0 enters D(T_t), and the
    # first-kind vector at that lambda must stay out
    ev = evaluator_for(src, pol)
    L = ev.level
    t0 = ev.table(0.0)
    wvec = t0.q[: L + 1] + 1.0 * t0.p[: L + 1]

    # A(x) + t C(x) = t + x * sum q_k(x) (q_k(0) + t p_k(0)) at t = 1
    def f_qcase(xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        _, Q = ev.tables_batch(xs.astype(complex))
        return np.real(1.0 + xs * (wvec @ Q[: L + 1]))

    scan = real_zeros(f_qcase, RootScanConfig(window=(-12.0, 12.0)))
    ok_q = False
    q_residual = np.inf
    if len(scan.zeros):
        lamq = float(scan.zeros[np.argmin(np.abs(scan.zeros - 0.5))])
        vq = q_vector(src, lamq, pol)
        vq_in = membership_DTt(src, vq, t1, 1.0j, _MEMBERSHIP_TOL, pol)
        vp_at_lamq = membership_DTt(src, p_vector(src, lamq, pol), t1, 1.0j,
                                    _MEMBERSHIP_TOL, pol)
        ok_q = vq_in.in_domain and not vp_at_lamq.in_domain
        q_residual = vq_in.residual
    out.append(CheckResult(
        "10a_extension_domain_selects_t", ok_p and ok_q,
        max(v_in.residual, q_residual), _MEMBERSHIP_TOL,
        "p/q vectors enter exactly the matching D(T_t)"))

    rng = np.random.default_rng(config.seed + 10)
    worst = 0.0
    ok_all = True
    for label, m in measures.items():
        lam = complex(rng.uniform(0.5, 2.0) + 1j * rng.uniform(0.5, 2.0))
        rc = resolvent_combination(src, m.t, lam, m, pol)
        ok_all = ok_all and rc.verdict.in_domain and \
            not rc.not_in_closure.in_domain and rc.decomposition.in_domain
        worst = max(worst, rc.verdict.residual, rc.decomposition.residual)
    out.append(CheckResult(
        "10b_resolvent_combination", ok_all and worst < _MEMBERSHIP_TOL,
        worst, _MEMBERSHIP_TOL,
        "w p + q in D(T_t) \\ D(T); c-coefficient split passes"))
    return out


def _check_xi(config: RunConfig) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 11)
    src, pol = config.problem, config.truncation
    z0 = 0.4 + 1.1j
    ev = evaluator_for(src, pol)
    tab = ev.table(z0)
    pq_norm = tab.norm_p2 + tab.norm_q2

    worst_res, worst_dq, worst_bound = 0.0, 0.0, 0.0
    vectors = []
    for _ in range(50):
        m = int(rng.integers(1, 101))
        c = SeqVector(rng.normal(size=m + 1) + 1j * rng.normal(size=m + 1))
        vectors.append(c)
        worst_res = max(worst_res, resolvent_residual(src, c, z0, pol))
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        worst_dq = max(worst_dq, diff_quotient_residual(src, c, z0, z, pol))
        xi = xi_apply(src, c, z0, pol)
        worst_bound = max(worst_bound, xi.norm() / (c.norm() * pq_norm))

    out = [CheckResult("11a_resolvent_identity", worst_res < 1e-10,
                       worst_res, 1e-10, "50 seeded finite vectors, M<=100"),
           CheckResult("11b_difference_quotient", worst_dq < 1e-11,
                       worst_dq, 1e-11, "same vectors, seeded z")]

    e0_norm = xi_apply(src, SeqVector.basis(0), z0, pol).norm()
    out.append(CheckResult("11c_kernel_and_norm_bound",
                           e0_norm == 0.0 and worst_bound <= 1.0 + 1e-10,
                           max(e0_norm, worst_bound), 1.0 + 1e-10,
                           "xi(e_0)=0; ||xi(c)|| <= ||c||(P+Q)"))

    worst_mem = 0.0
    ok_mem = True
    for c in vectors[:10]:
        xi = xi_apply(src, c, z0, pol)
        verdict = membership_DT(src, xi, 1.0j, _MEMBERSHIP_TOL, pol)
        ok_mem = ok_mem and verdict.in_domain
        worst_mem = max(worst_mem, verdict.residual)
    out.append(CheckResult("11d_xi_range_in_domain", ok_mem, worst_mem,
                           _MEMBERSHIP_TOL,
                           "xi outputs pass the closure-domain test"))
    return out


def _check_tilde(config: RunConfig) -> List[CheckResult]:
    rng = np.random.default_rng(config.seed + 12)
    worst = 0.0
    for u, v, z in zip(_disk(rng, 2.5, 10), _disk(rng, 2.5, 10),
                       _disk(rng, 2.5, 10)):
        worst = max(worst, tilde_relations_residual(config.problem, u, v,
                                                    config.truncation, z=z))
    return [CheckResult("12_truncated_problem_relations", worst < 1e-8,
                        worst, 1e-8, "10 seeded points")]


CHECK_NAMES = [
    "determinant", "dual_form", "three_point", "pick", "measures",
    "supports", "stieltjes", "membership", "signs", "extensions", "xi",
    "tilde",
]


def run_acceptance(config: Optional[RunConfig] = None,
                   only: Optional[List[str]] = None) -> List[CheckResult]:
    """Run the acceptance checks; "measure" checks share built measures."""
    cfg = config if config is not None else default_config()
    selected = set(only) if only else set(CHECK_NAMES)
    results: List[CheckResult] = []

    measures: Optional[Dict[str, DiscreteMeasure]] = None
    if selected & {"measures", "supports", "stieltjes", "extensions"}:
        measures = _measures_for(cfg)

    plan: List[tuple] = [
        ("determinant", lambda: _check_determinant(cfg)),
        ("dual_form", lambda: _check_dual_form(cfg)),
        ("three_point", lambda: _check_three_point(cfg)),
        ("pick", lambda: _check_pick(cfg)),
        ("measures", lambda: _check_measures(cfg, measures)),
        ("supports", lambda: _check_supports(cfg, measures)),
        ("stieltjes", lambda: _check_stieltjes(cfg, measures)),
        ("membership", lambda: _check_membership(cfg)),
        ("signs", lambda: _check_signs(cfg)),
        ("extensions", lambda: _check_extensions(cfg, measures)),
        ("xi", lambda: _check_xi(cfg)),
        ("tilde", lambda: _check_tilde(cfg)),
    ]
    for name, fn in plan:
        if name in selected:
            results.extend(fn())
    return results
