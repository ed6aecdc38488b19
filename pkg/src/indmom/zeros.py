"""Real zero scans and argument-principle zero counts.

``real_zeros`` brackets sign changes of a real-valued function on a grid
and refines each bracket by bisection to a prescribed width.  The optional
complex handle enables a missed-zero cross-check: the winding number of
the function along a thin rectangle around the window must match the
number of bracketed zeros.

``count_zeros_rect`` counts zeros (with multiplicity) inside an axis
rectangle by accumulating phase increments of the function along the
boundary, refining adaptively until every increment is below pi/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import ZeroOnContourError

__all__ = ["RootScanConfig", "RootScan", "real_zeros", "count_zeros_rect"]


@dataclass(frozen=True)
class RootScanConfig:
    """Window, grid and acceptance parameters for real zero scans.

    ``grid_step = None`` asks the scan to bootstrap the step from a coarse
    pass (half the minimal observed gap between consecutive zeros).
    """

    window: Tuple[float, float]
    grid_step: Optional[float] = None
    refine_tol: float = 1e-11
    zero_tol: float = 1e-8

    def __post_init__(self):
        lo, hi = self.window
        if not lo < hi:
            raise ValueError("window must satisfy lo < hi")
        if self.grid_step is not None and not self.grid_step > 0:
            raise ValueError("grid_step must be positive")
        if not (self.refine_tol > 0 and self.zero_tol > 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class RootScan:
    """Scan result: sorted zeros, residuals, and missed-zero diagnostics."""

    zeros: np.ndarray
    residual_scaled: np.ndarray
    warning: bool
    contour_count: Optional[int]
    grid_step: float


def _bracket_grid(f, lo: float, hi: float, step: float):
    xs = np.arange(lo, hi + 0.5 * step, step)
    if xs[-1] < hi:
        xs = np.append(xs, hi)
    fs = np.asarray(f(xs), dtype=float)
    sign_change = fs[:-1] * fs[1:] < 0
    on_grid = fs == 0.0
    return xs, fs, sign_change, on_grid


def _bisect_scalar(f: Callable[[float], float], lo: float, hi: float,
                   width: float) -> Optional[float]:
    """Scalar bisection for the high-precision retry path."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        return None
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _bisect_batch(f, lo: np.ndarray, hi: np.ndarray, flo: np.ndarray,
                  width: float) -> np.ndarray:
    """Vectorized bisection of many brackets to the target width."""
    lo = lo.copy()
    hi = hi.copy()
    flo = flo.copy()
    max_iter = int(np.ceil(np.log2(max(np.max(hi - lo) / width, 2.0)))) + 2
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = np.asarray(f(mid), dtype=float)
        go_left = flo * fm <= 0
        hi = np.where(go_left, mid, hi)
        lo = np.where(go_left, lo, mid)
        flo = np.where(go_left, flo, fm)
        if np.max(hi - lo) < width:
            break
    return 0.5 * (lo + hi)


def real_zeros(f: Callable[[np.ndarray], np.ndarray], cfg: RootScanConfig,
               complex_handle: Optional[Callable[[np.ndarray], np.ndarray]] = None,
               fallback: Optional[Callable[[float], float]] = None,
               ) -> RootScan:
    """Locate the real zeros of a vectorized real-valued function.

    Each returned zero is bracketed by a sign change on the grid and
    refined by bisection to width ``refine_tol``; zeros are sorted and
    deduplicated.  When ``complex_handle`` is given, the bracketed count is
    cross-checked against an argument-principle count over the window
    strip and a mismatch sets the warning flag.  ``fallback`` is a scalar
    high-precision evaluator used to re-refine any bracket whose residual
    check fails (a suspected tangency); if that also fails the warning
    flag is set.
    """
    lo, hi = cfg.window
    if cfg.grid_step is not None:
        step = cfg.grid_step
    else:
        coarse = max((hi - lo) / 2048.0, 1e-6)
        xs, fs, sc, og = _bracket_grid(f, lo, hi, coarse)
        approx = xs[:-1][sc]
        if len(approx) >= 2:
            step = min(coarse, 0.5 * float(np.min(np.diff(approx))))
        else:
            step = coarse

    xs, fs, sc, og = _bracket_grid(f, lo, hi, step)
    roots = list(xs[og])
    scales = [1.0] * len(roots)
    idx = np.nonzero(sc)[0]
    if len(idx):
        refined = _bisect_batch(f, xs[idx], xs[idx + 1], fs[idx], cfg.refine_tol)
        roots.extend(refined.tolist())
        scales.extend(np.maximum(np.abs(fs[idx]), np.abs(fs[idx + 1])).tolist())

    roots = np.asarray(roots, dtype=float)
    scales = np.asarray(scales, dtype=float)
    order = np.argsort(roots)
    roots, scales = roots[order], scales[order]
    if len(roots):
        keep = np.concatenate([[True], np.diff(roots) > 2 * cfg.refine_tol])
        roots, scales = roots[keep], scales[keep]

    warning = False
    if len(roots):
        resid = np.abs(np.asarray(f(roots), dtype=float)) / np.maximum(scales, 1e-300)
        bad = resid > cfg.zero_tol
        if np.any(bad) and fallback is not None:
            for i in np.nonzero(bad)[0]:
                refined = _bisect_scalar(fallback, roots[i] - step,
                                         roots[i] + step, cfg.refine_tol)
                if refined is not None:
                    roots[i] = refined
                    resid[i] = abs(fallback(refined)) / max(scales[i], 1e-300)
            bad = resid > cfg.zero_tol
        if np.any(bad):
            warning = True
    else:
        resid = np.zeros(0)

    contour_count = None
    if complex_handle is not None:
        xlo, xhi = lo, hi
        pad = 0.25 * step
        if len(roots) and roots[0] - lo < 0.5 * step:
            xlo = lo - pad
        if len(roots) and hi - roots[-1] < 0.5 * step:
            xhi = hi + pad
        height = max(1.0, 0.01 * (hi - lo))
        try:
            contour_count = count_zeros_rect(
                complex_handle, (xlo, xhi, -height, height), samples_per_side=256)
            if contour_count != len(roots):
                warning = True
        except ZeroOnContourError:
            warning = True

    return RootScan(zeros=roots, residual_scaled=resid, warning=warning,
                    contour_count=contour_count, grid_step=float(step))


def count_zeros_rect(F: Callable[[np.ndarray], np.ndarray],
                     rect: Tuple[float, float, float, float],
                     samples_per_side: int = 64,
                     max_points: int = 200000) -> int:
    """Winding number of F along the rectangle boundary (counterclockwise).

    Refines boundary sampling adaptively until every phase increment is
    below pi/2.  Raises ZeroOnContourError when |F| on the contour is
    suspiciously small or refinement fails to settle.
    """
    re_lo, re_hi, im_lo, im_hi = rect
    if not (re_lo < re_hi and im_lo < im_hi):
        raise ValueError("rectangle must have positive width and height")

    def boundary_point(t: np.ndarray) -> np.ndarray:
        # t in [0,4): bottom, right, top, left edges in order
        t = np.asarray(t, dtype=float)
        z = np.empty(t.shape, dtype=complex)
        seg = np.floor(t).astype(int) % 4
        frac = t - np.floor(t)
        z[seg == 0] = re_lo + frac[seg == 0] * (re_hi - re_lo) + 1j * im_lo
        z[seg == 1] = re_hi + 1j * (im_lo + frac[seg == 1] * (im_hi - im_lo))
        z[seg == 2] = re_hi - frac[seg == 2] * (re_hi - re_lo) + 1j * im_hi
        z[seg == 3] = re_lo + 1j * (im_hi - frac[seg == 3] * (im_hi - im_lo))
        return z

    ts = np.linspace(0.0, 4.0, 4 * samples_per_side + 1)
    vals = np.asarray(F(boundary_point(ts)), dtype=complex)

    for _ in range(64):
        mags = np.abs(vals)
        if np.any(mags == 0):
            raise ZeroOnContourError("zero suspected on contour; perturb rectangle")
        # local dip test: |F| may legitimately span many orders of magnitude
        # along a long contour, so compare each sample to its neighbours only
        neigh = np.maximum(np.roll(mags, 1), np.roll(mags, -1))
        if np.any(mags < 1e-12 * neigh):
            raise ZeroOnContourError("zero suspected on contour; perturb rectangle")
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(dphi) >= 0.5 * np.pi
        if not np.any(bad):
            total = float(np.sum(dphi))
            winding = total / (2.0 * np.pi)
            if abs(winding - round(winding)) > 0.25:
                raise ZeroOnContourError(
                    "winding number failed to settle; perturb rectangle")
            return int(round(winding))
        if len(ts) > max_points:
            raise ZeroOnContourError(
                "contour refinement exhausted; perturb rectangle")
        mid_ts = 0.5 * (ts[:-1][bad] + ts[1:][bad])
        mid_vals = np.asarray(F(boundary_point(mid_ts)), dtype=complex)
        insert_at = np.nonzero(bad)[0] + 1
        ts = np.insert(ts, insert_at, mid_ts)
        vals = np.insert(vals, insert_at, mid_vals)
    raise ZeroOnContourError("contour refinement did not converge")
