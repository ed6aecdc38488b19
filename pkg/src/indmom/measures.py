"""N-extremal measures: supports, masses, moments, Stieltjes transforms.

The measure attached to an extension parameter t is discrete; its support
is the real zero set of B + tD (of D alone for t = infinity) and the mass
at a support point x is 1 / sum_k p_k(x)^2.  At the shared truncation
level these are exactly the nodes and Christoffel weights of a
quasi-orthogonal quadrature rule, so truncated moments reproduce the
Hamburger moments to roundoff once the window is wide enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .coefficients import JacobiCoefficients
from .errors import IndmomError, NonConvergenceError, SupportPointError
from .evaluation import Evaluator, TruncationPolicy, evaluator_for
from .nevanlinna import nev, nev_one
from .sequences import moment
from .zeros import RootScan, RootScanConfig, real_zeros

__all__ = [
    "ExtensionParam", "DiscreteMeasure", "StieltjesResult",
    "nextremal_support", "t_for_point", "mass_at", "build_measure",
    "stieltjes", "adjacent_zero_sign", "export_measure_csv",
]


@dataclass(frozen=True)
class ExtensionParam:
    """Extension parameter t on the extended real line (finite or infinity)."""

    t: Optional[float]  # None encodes infinity

    def __post_init__(self):
        if self.t is not None and not math.isfinite(self.t):
            raise ValueError("finite extension parameter must be a finite real")

    @classmethod
    def finite(cls, t: float) -> "ExtensionParam":
        return cls(float(t))

    @classmethod
    def infinite(cls) -> "ExtensionParam":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "ExtensionParam":
        s = text.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return cls.infinite()
        return cls.finite(float(s))

    @property
    def is_infinite(self) -> bool:
        return self.t is None

    def combine(self, b, d):
        """B + tD for finite t, D for infinity."""
        return d if self.is_infinite else b + self.t * d

    def __str__(self):
        return "inf" if self.is_infinite else f"{self.t:.17g}"


@dataclass(frozen=True)
class DiscreteMeasure:
    """Window-restricted N-extremal measure with reconstruction diagnostics."""

    t: ExtensionParam
    points: np.ndarray
    masses: np.ndarray
    window: Tuple[float, float]
    captured_mass: float
    moment_residuals: np.ndarray
    level: int
    scan_warning: bool

    def __post_init__(self):
        pts, ms = self.points, self.masses
        if len(pts) != len(ms):
            raise ValueError("points and masses must have equal length")
        if len(pts) and np.any(np.diff(pts) <= 0):
            raise ValueError("support points must be strictly increasing")
        if np.any(ms <= 0):
            raise ValueError("masses must be positive")
        if self.captured_mass > 1.0 + 1e-9:
            raise ValueError("captured mass exceeds 1 beyond tolerance")


@dataclass(frozen=True)
class StieltjesResult:
    """Three routes to the Stieltjes transform of an N-extremal measure."""

    w_param: complex
    w_twovar: complex
    w_sum: complex
    spread: float
    per_point_spread: float
    sum_deviation: float


def _support_values(ev: Evaluator, t: ExtensionParam):
    """Vectorized x -> (B + tD)(x) (D(x) for infinite t) at the shared level."""
    L = ev.level
    t0 = ev.table(0.0)
    if t.is_infinite:
        wvec = t0.p[: L + 1]
    else:
        wvec = t0.q[: L + 1] + t.t * t0.p[: L + 1]
    offset = 0.0 if t.is_infinite else -1.0

    def f(xs: np.ndarray) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        P, _ = ev.tables_batch(xs.astype(complex))
        sums = wvec @ P[: L + 1]
        vals = offset + xs * sums
        if vals.dtype == object:
            vals = np.array([float(v.real if hasattr(v, "real") else v)
                             for v in vals], dtype=float)
        return np.real(vals)

    return f


def _complex_support_handle(ev: Evaluator, t: ExtensionParam):
    L = ev.level
    t0 = ev.table(0.0)
    if t.is_infinite:
        wvec = t0.p[: L + 1]
        offset = 0.0
    else:
        wvec = t0.q[: L + 1] + t.t * t0.p[: L + 1]
        offset = -1.0

    def F(zs: np.ndarray) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        P, _ = ev.tables_batch(zs)
        return offset + zs * (wvec @ P[: L + 1])

    return F


def _extended_scalar_fallback(source: JacobiCoefficients,
                              policy: TruncationPolicy, t: ExtensionParam,
                              dps: int = 32):
    """Lazily built mpmath evaluator of x -> (B + tD)(x) for retry bisection."""
    state = {}

    def fb(x: float) -> float:
        if "f" not in state:
            ev = evaluator_for(source, policy, "extended", dps)
            state["f"] = _support_values(ev, t)
        return float(state["f"](np.array([x]))[0])

    return fb


def nextremal_support(source: JacobiCoefficients, t: ExtensionParam,
                      cfg: RootScanConfig, policy: TruncationPolicy,
                      precision: str = "standard",
                      verify_count: bool = True) -> RootScan:
    """Real zeros of B + tD (D for infinity) inside the window.

    Standard-precision scans carry an extended-precision scalar fallback
    for brackets whose residual check fails (suspected tangencies).
    """
    ev = evaluator_for(source, policy, precision)
    f = _support_values(ev, t)
    handle = _complex_support_handle(ev, t) if verify_count and precision == "standard" else None
    fallback = (_extended_scalar_fallback(source, policy, t)
                if precision == "standard" else None)
    return real_zeros(f, cfg, complex_handle=handle, fallback=fallback)


def t_for_point(source: JacobiCoefficients, x0: float,
                policy: TruncationPolicy) -> ExtensionParam:
    """The unique t whose measure carries the point x0.

    Returns finite(-B(x0)/D(x0)) unless D(x0) is degenerate at the local
    scale, in which case the point belongs to the t = infinity measure.
    """
    A, B, C, D = nev_one(source, complex(x0), policy)
    h = 1e-6 * (1.0 + abs(x0))
    _, _, _, Dp = nev_one(source, complex(x0 + h), policy)
    _, _, _, Dm = nev_one(source, complex(x0 - h), policy)
    dslope = abs(Dp - Dm) / (2 * h)
    degeneracy_tol = 1e-9 * (abs(B) + dslope * h)
    if abs(D) <= degeneracy_tol:
        return ExtensionParam.infinite()
    return ExtensionParam.finite(float((-B / D).real))


def mass_at(source: JacobiCoefficients, x: float, policy: TruncationPolicy,
            precision: str = "standard") -> float:
    """Mass 1 / sum_{k<=L} p_k(x)^2 of the N-extremal measure through x."""
    ev = evaluator_for(source, policy, precision)
    tab = ev.table(complex(x))
    if not tab.converged:
        raise NonConvergenceError(
            f"norm series at x={x} did not converge within n_max={policy.n_max}")
    return 1.0 / tab.norm_p2


def _masses_batch(ev: Evaluator, xs: np.ndarray) -> np.ndarray:
    P, _ = ev.tables_batch(xs.astype(complex))
    L = ev.level
    if P.dtype == object:
        cum = np.array([float(sum(abs(v) ** 2 for v in P[: L + 1, j]))
                        for j in range(P.shape[1])])
    else:
        cum = np.sum(np.abs(P[: L + 1]) ** 2, axis=0)
    return 1.0 / cum


def build_measure(source: JacobiCoefficients, t: ExtensionParam,
                  cfg: RootScanConfig, policy: TruncationPolicy,
                  n_check: int = 6, auto_window: bool = False,
                  precision: str = "standard",
                  tail_mass_tol: float = 1e-8,
                  tail_moment_tol: float = 1e-8,
                  max_doublings: int = 10) -> DiscreteMeasure:
    """Construct the window-restricted N-extremal measure for t.

    With ``auto_window`` the window is symmetrized and doubled until the
    outermost annulus holds at least one support point and contributes
    less than ``tail_mass_tol`` in mass and ``tail_moment_tol`` to every
    tracked moment sum (n <= n_check).  Moment residuals compare the
    measure's power sums against the Hamburger moments.
    """
    ev = evaluator_for(source, policy, precision)
    window = cfg.window

    if auto_window:
        radius = max(abs(window[0]), abs(window[1]), 1.0)
        prev_pts: Optional[np.ndarray] = None
        scan = None
        for _ in range(max_doublings + 1):
            wcfg = RootScanConfig(window=(-radius, radius), grid_step=cfg.grid_step,
                                  refine_tol=cfg.refine_tol, zero_tol=cfg.zero_tol)
            scan = nextremal_support(source, t, wcfg, policy, precision)
            pts = scan.zeros
            ms = _masses_batch(ev, pts)
            if prev_pts is not None:
                prev_r = radius / 2.0
                new = np.abs(pts) > prev_r
                if np.any(new):
                    ann_mass = float(np.sum(ms[new]))
                    ann_mom = max(
                        float(np.abs(np.sum(ms[new] * pts[new] ** n)))
                        for n in range(n_check + 1))
                    if ann_mass < tail_mass_tol and ann_mom < tail_moment_tol:
                        window = (-radius, radius)
                        break
            prev_pts = pts
            radius *= 2.0
        else:
            raise NonConvergenceError(
                "window doubling did not settle; raise max_doublings or tolerances")
        points, masses = pts, ms
        warning = scan.warning
    else:
        scan = nextremal_support(source, t, cfg, policy, precision)
        points = scan.zeros
        masses = _masses_batch(ev, points)
        warning = scan.warning

    captured = float(np.sum(masses))
    residuals = np.array([
        abs(float(np.sum(masses * points ** n)) - moment(source, n))
        for n in range(n_check + 1)])
    return DiscreteMeasure(t=t, points=points, masses=masses, window=window,
                           captured_mass=captured, moment_residuals=residuals,
                           level=ev.level, scan_warning=warning)


def stieltjes(source: JacobiCoefficients, t: ExtensionParam, lam: complex,
              measure: DiscreteMeasure, policy: TruncationPolicy,
              n_nearest: int = 5,
              agreement_tol: float = 1e-6) -> StieltjesResult:
    """Stieltjes transform w(lam) = integral of 1/(x - lam) three ways.

    w_param uses the one-variable parametrization -(A + tC)/(B + tD);
    w_twovar averages -C(lam, x)/D(lam, x) over the support points nearest
    lam (their mutual agreement is verified first); w_sum is the
    window-limited mass sum, reported with its own deviation.
    """
    lam = complex(lam)
    pts = measure.points
    if len(pts):
        dmin = float(np.min(np.abs(pts - lam)))
        if dmin < 1e-9 * (1.0 + abs(lam)):
            raise SupportPointError(f"lambda={lam} lies on the support")
    ev = evaluator_for(source, policy)
    A, B, C, D = nev_one(source, lam, policy, evaluator=ev)
    if t.is_infinite:
        w_param = -C / D
    else:
        w_param = -(A + t.t * C) / (B + t.t * D)

    if not len(pts):
        raise IndmomError("measure has no support points in window")
    nearest = pts[np.argsort(np.abs(pts - lam))[: n_nearest]]
    vals = []
    for x in nearest:
        q = nev(source, lam, complex(x), policy, evaluator=ev)
        vals.append(-q.C / q.D)
    vals = np.array(vals)
    pp_spread = float(np.max(np.abs(vals[:, None] - vals[None, :])))
    if pp_spread > agreement_tol * (1.0 + abs(w_param)):
        raise IndmomError(
            f"per-point ratios disagree (spread {pp_spread:.3e}); "
            "support or truncation suspect")
    w_twovar = complex(np.mean(vals))
    w_sum = complex(np.sum(measure.masses / (pts - lam)))
    spread = max(abs(w_param - w_twovar), pp_spread)
    return StieltjesResult(w_param=w_param, w_twovar=w_twovar, w_sum=w_sum,
                           spread=float(spread), per_point_spread=pp_spread,
                           sum_deviation=float(abs(w_sum - w_param)))


def adjacent_zero_sign(source: JacobiCoefficients, v: float,
                       cfg: RootScanConfig, which: str,
                       policy: TruncationPolicy) -> Tuple[float, float]:
    """Adjacent zero below v of D(., v) (case "D") or A(., v) (case "A").

    Returns (u, B(u, v)) for the D case and (u, C(u, v)) for the A case;
    the sign of the returned value is asserted (positive resp. negative).
    """
    if which not in ("D", "A"):
        raise ValueError("which must be 'D' (p-pairs) or 'A' (q-pairs)")
    v = float(v)
    ev = evaluator_for(source, policy)
    L = ev.level
    tv = ev.table(complex(v))
    wvec = tv.p[: L + 1] if which == "D" else tv.q[: L + 1]

    def f(xs: np.ndarray) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        P, Q = ev.tables_batch(xs.astype(complex))
        tab = P if which == "D" else Q
        return np.real((xs - v) * (wvec @ tab[: L + 1]))

    scan = real_zeros(f, cfg)
    zeros = scan.zeros
    below = zeros[zeros < v - max(10 * cfg.refine_tol, 1e-9 * (1 + abs(v)))]
    if not len(below):
        raise IndmomError(f"no zero below v={v} inside window {cfg.window}")
    u = float(below.max())
    q = nev(source, complex(u), complex(v), policy, evaluator=ev)
    value = float(q.B.real) if which == "D" else float(q.C.real)
    if which == "D" and not value > 0:
        raise IndmomError(f"sign postcondition failed: B({u},{v}) = {value}")
    if which == "A" and not value < 0:
        raise IndmomError(f"sign postcondition failed: C({u},{v}) = {value}")
    return u, value


def export_measure_csv(measure: DiscreteMeasure, path: str) -> None:
    """Write `x,mass` rows (17 significant digits) plus a metadata sidecar."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,mass\n")
        for x, m in zip(measure.points, measure.masses):
            fh.write(f"{x:.17g},{m:.17g}\n")
    meta = path + ".meta"
    with open(meta, "w", encoding="utf-8") as fh:
        fh.write(f"t = {measure.t}\n")
        fh.write(f"window_lo = {measure.window[0]:.17g}\n")
        fh.write(f"window_hi = {measure.window[1]:.17g}\n")
        fh.write(f"captured_mass = {measure.captured_mass:.17g}\n")
        fh.write(f"level = {measure.level}\n")
        fh.write(f"scan_warning = {measure.scan_warning}\n")
        for n, r in enumerate(measure.moment_residuals):
            fh.write(f"moment_residual_{n} = {r:.17g}\n")
