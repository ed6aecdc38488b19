import math

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from indmom import (DiscreteMeasure, ExtensionParam, RootScanConfig,
                    TruncationPolicy, adjacent_zero_sign, build_measure,
                    count_zeros_rect, export_measure_csv, mass_at, moment,
                    nev, nextremal_support, real_zeros, stieltjes,
                    t_for_point)
from indmom.errors import SupportPointError, ZeroOnContourError
from indmom.evaluation import evaluator_for
from indmom.measures import _complex_support_handle


@pytest.fixture(scope="module")
def measure_t1(src, pol):
    cfg = RootScanConfig(window=(-5.0, 5.0))
    return build_measure(src, ExtensionParam.finite(1.0), cfg, pol,
                         n_check=6, auto_window=True)


@pytest.fixture(scope="module")
def measure_inf(src, pol):
    cfg = RootScanConfig(window=(-5.0, 5.0))
    return build_measure(src, ExtensionParam.infinite(), cfg, pol,
                         n_check=6, auto_window=True)


class TestRealZeros:
    def test_cosine_zeros(self):
        cfg = RootScanConfig(window=(0.0, 10.0), grid_step=0.25)
        scan = real_zeros(np.cos, cfg)
        expected = np.array([0.5, 1.5, 2.5]) * math.pi
        assert len(scan.zeros) == 3
        assert np.max(np.abs(scan.zeros - expected)) < 1e-10

    def test_d_vanishes_at_origin(self, src, pol):
        cfg = RootScanConfig(window=(-2.0, 2.0))
        scan = nextremal_support(src, ExtensionParam.infinite(), cfg, pol)
        assert np.min(np.abs(scan.zeros)) < 1e-9

    def test_d_zero_set_symmetric(self, src, pol):
        cfg = RootScanConfig(window=(-30.0, 30.0))
        z = nextremal_support(src, ExtensionParam.infinite(), cfg, pol).zeros
        assert np.max(np.abs(np.sort(z) + np.sort(-z)[::-1])) < 1e-9

    def test_coarse_grid_miss_sets_warning(self):
        # zeros at +-0.1 straddled by one coarse cell with equal signs;
        # the winding count over the strip reports the two missed zeros
        cfg = RootScanConfig(window=(-2.5, 2.5), grid_step=3.0)

        def f(xs):
            return np.asarray(xs) ** 2 - 0.01

        def F(zs):
            return np.asarray(zs, dtype=complex) ** 2 - 0.01

        scan = real_zeros(f, cfg, complex_handle=F)
        assert len(scan.zeros) == 0
        assert scan.warning
        assert scan.contour_count == 2

    def test_extended_precision_scan_matches_standard(self, src):
        pol = TruncationPolicy(n_max=64)
        cfg = RootScanConfig(window=(-4.0, 4.0), grid_step=0.5)
        std = nextremal_support(src, ExtensionParam.infinite(), cfg, pol,
                                precision="standard", verify_count=False)
        ext = nextremal_support(src, ExtensionParam.infinite(), cfg, pol,
                                precision="extended", verify_count=False)
        assert len(std.zeros) == len(ext.zeros)
        assert np.max(np.abs(std.zeros - ext.zeros)) < 1e-9

    def test_b_zeros_against_fine_extended_oracle(self, src):
        # same level-120 function scanned on a 10x finer grid in mpmath
        import mpmath as mp

        pol = TruncationPolicy(n_max=120)
        cfg = RootScanConfig(window=(-6.0, 6.0), grid_step=0.2)
        scan = nextremal_support(src, ExtensionParam.finite(0.0), cfg, pol,
                                 verify_count=False)

        L = pol.n_max
        with mp.workdps(30):
            a = [mp.mpf((k + 1) ** 2) for k in range(L + 2)]

            def pq(x):
                p = [mp.mpf(1), x / a[0]]
                q = [mp.mpf(0), 1 / a[0]]
                for n in range(1, L + 1):
                    p.append((x * p[n] - a[n - 1] * p[n - 1]) / a[n])
                    q.append((x * q[n] - a[n - 1] * q[n - 1]) / a[n])
                return p, q

            p0, q0 = pq(mp.mpf(0))

            def bfun(x):
                px, _ = pq(mp.mpf(x))
                return float(-1 + x * mp.fsum(px[k] * q0[k] for k in range(L + 1)))

            xs = np.arange(-6.0, 6.0 + 0.01, 0.02)
            vals = np.array([bfun(x) for x in xs])
            roots = []
            for i in range(len(xs) - 1):
                if vals[i] * vals[i + 1] < 0:
                    lo, hi, flo = xs[i], xs[i + 1], vals[i]
                    for _ in range(50):
                        mid = 0.5 * (lo + hi)
                        fm = bfun(mid)
                        if flo * fm <= 0:
                            hi = mid
                        else:
                            lo, flo = mid, fm
                    roots.append(0.5 * (lo + hi))
        assert len(scan.zeros) == len(roots)
        assert np.max(np.abs(scan.zeros - np.array(roots))) < 1e-8


class TestCountZerosRect:
    def test_polynomial_with_known_zeros(self):
        def F(z):
            return z ** 2 + 1.0

        assert count_zeros_rect(F, (-1.0, 1.0, 0.5, 1.5)) == 1
        assert count_zeros_rect(F, (-2.0, 2.0, -2.0, 2.0)) == 2
        assert count_zeros_rect(F, (3.0, 4.0, 3.0, 4.0)) == 0

    def test_zero_on_contour_detected(self):
        def F(z):
            return z ** 2 + 1.0

        with pytest.raises(ZeroOnContourError):
            count_zeros_rect(F, (-1.0, 1.0, 1.0, 2.0))

    def test_real_v_keeps_zeros_real(self, src, pol):
        ev = evaluator_for(src, pol)
        L = ev.level
        tv = ev.table(0.7)

        def F(zs):
            zs = np.atleast_1d(np.asarray(zs, dtype=complex))
            P, _ = ev.tables_batch(zs)
            return (zs - 0.7) * (tv.p[: L + 1] @ P[: L + 1])

        assert count_zeros_rect(F, (-4.0, 4.0, 0.3, 3.0)) == 0

    def test_upper_v_confines_zeros_to_upper_half_plane(self, src, pol):
        ev = evaluator_for(src, pol)
        L = ev.level
        v = 0.5 + 1.0j
        tv = ev.table(v)

        def F(zs):
            zs = np.atleast_1d(np.asarray(zs, dtype=complex))
            P, _ = ev.tables_batch(zs)
            return (zs - v) * (tv.p[: L + 1] @ P[: L + 1])

        assert count_zeros_rect(F, (-5.0, 5.0, -3.0, -0.2)) == 0

    def test_box_around_found_zero_counts_one(self, src, pol, measure_inf):
        x0 = measure_inf.points[np.argmin(np.abs(measure_inf.points - 2.5))]
        F = _complex_support_handle(evaluator_for(src, pol),
                                    ExtensionParam.infinite())
        assert count_zeros_rect(F, (x0 - 0.5, x0 + 0.5, -0.5, 0.5)) == 1


class TestSupports:
    def test_infinite_support_contains_origin(self, measure_inf):
        assert np.min(np.abs(measure_inf.points)) < 1e-9

    def test_disjoint_supports(self, src, pol):
        cfg = RootScanConfig(window=(-30.0, 30.0))
        s0 = nextremal_support(src, ExtensionParam.finite(0.0), cfg, pol).zeros
        s1 = nextremal_support(src, ExtensionParam.finite(1.0), cfg, pol).zeros
        assert np.min(np.abs(s0[:, None] - s1[None, :])) > 10 * cfg.refine_tol

    def test_interlacing_with_infinite(self, src, pol):
        cfg = RootScanConfig(window=(-30.0, 30.0))
        s0 = nextremal_support(src, ExtensionParam.finite(0.0), cfg, pol).zeros
        si = nextremal_support(src, ExtensionParam.infinite(), cfg, pol).zeros
        merged = sorted([(x, 0) for x in s0] + [(x, 1) for x in si])
        labels = [lab for _, lab in merged]
        assert all(labels[i] != labels[i + 1] for i in range(len(labels) - 1))

    def test_golub_welsch_oracle(self, src, pol, measure_inf):
        # independent route: for even level the D zeros are eigenvalues of
        # the truncated matrix and the masses are squared first components
        L = evaluator_for(src, pol).level
        assert L % 2 == 0
        a, b = src.arrays(L)
        nodes, vecs = eigh_tridiagonal(b[: L + 1], a[:L])
        weights = vecs[0] ** 2
        lo, hi = measure_inf.window
        sel = (nodes >= lo) & (nodes <= hi)
        assert len(nodes[sel]) == len(measure_inf.points)
        order = np.argsort(nodes[sel])
        assert np.max(np.abs(nodes[sel][order] - measure_inf.points)) < 1e-8
        # eigh weights carry only absolute ~1e-16 accuracy at the far nodes
        assert np.allclose(weights[sel][order], measure_inf.masses,
                           rtol=1e-7, atol=1e-12)


class TestTForPoint:
    def test_origin_gives_infinity(self, src, pol):
        assert t_for_point(src, 0.0, pol).is_infinite

    def test_roundtrip_with_support(self, src, pol, measure_t1):
        x0 = measure_t1.points[np.argmin(np.abs(measure_t1.points - 1.0))]
        t = t_for_point(src, float(x0), pol)
        assert not t.is_infinite
        assert t.t == pytest.approx(1.0, abs=1e-8)

    def test_b_zero_gives_zero(self, src, pol):
        cfg = RootScanConfig(window=(0.5, 4.0))
        x0 = nextremal_support(src, ExtensionParam.finite(0.0), cfg, pol,
                               verify_count=False).zeros[0]
        t = t_for_point(src, float(x0), pol)
        assert not t.is_infinite
        assert abs(t.t) < 1e-8


class TestMasses:
    def test_positive_and_summing_below_one(self, measure_t1):
        assert np.all(measure_t1.masses > 0)
        assert measure_t1.captured_mass <= 1 + 1e-9

    def test_mass_monotone_under_window_growth(self, src, pol):
        caps = []
        for R in (5.0, 10.0, 20.0, 40.0):
            cfg = RootScanConfig(window=(-R, R))
            m = build_measure(src, ExtensionParam.infinite(), cfg, pol,
                              n_check=2)
            caps.append(m.captured_mass)
        assert all(b >= a - 1e-15 for a, b in zip(caps, caps[1:]))
        assert caps[-1] > 0.999999

    def test_second_moment(self, src, pol, measure_inf):
        s2 = np.sum(measure_inf.masses * measure_inf.points ** 2)
        assert s2 == pytest.approx(moment(src, 2), abs=1e-6)

    def test_mass_at_matches_measure(self, src, pol, measure_inf):
        x = float(measure_inf.points[np.argmin(np.abs(measure_inf.points - 3.0))])
        i = int(np.argmin(np.abs(measure_inf.points - x)))
        assert mass_at(src, x, pol) == pytest.approx(measure_inf.masses[i],
                                                     rel=1e-12)


class TestBuildMeasure:
    @pytest.mark.parametrize("label", ["0", "1", "inf"])
    def test_moment_residuals(self, src, pol, label):
        t = (ExtensionParam.infinite() if label == "inf"
             else ExtensionParam.finite(float(label)))
        cfg = RootScanConfig(window=(-5.0, 5.0))
        m = build_measure(src, t, cfg, pol, n_check=6, auto_window=True)
        assert abs(m.captured_mass - 1.0) < 1e-6
        assert np.max(m.moment_residuals) < 1e-6
        assert not m.scan_warning

    def test_invariant_validation(self):
        with pytest.raises(ValueError):
            DiscreteMeasure(t=ExtensionParam.finite(0.0),
                            points=np.array([1.0, 0.5]),
                            masses=np.array([0.1, 0.1]),
                            window=(-2.0, 2.0), captured_mass=0.2,
                            moment_residuals=np.zeros(1), level=8,
                            scan_warning=False)
        with pytest.raises(ValueError):
            DiscreteMeasure(t=ExtensionParam.finite(0.0),
                            points=np.array([0.5]),
                            masses=np.array([-0.1]),
                            window=(-2.0, 2.0), captured_mass=-0.1,
                            moment_residuals=np.zeros(1), level=8,
                            scan_warning=False)


class TestStieltjes:
    def test_upper_half_plane_maps_up(self, src, pol, measure_t1):
        m0 = build_measure(src, ExtensionParam.finite(0.0),
                           RootScanConfig(window=(-5.0, 5.0)), pol,
                           auto_window=True)
        st = stieltjes(src, ExtensionParam.finite(0.0), 1j, m0, pol)
        assert st.w_param.imag > 0

    def test_three_routes_agree(self, src, pol, measure_t1):
        st = stieltjes(src, ExtensionParam.finite(1.0), 1 + 1j, measure_t1, pol)
        assert abs(st.w_param - st.w_twovar) < 1e-8
        assert st.per_point_spread < 1e-8
        assert st.sum_deviation < 1e-6

    def test_per_point_ratio_constant_on_support(self, src, pol, measure_t1):
        lam = 0.3 + 0.9j
        vals = []
        for x in measure_t1.points[np.argsort(np.abs(measure_t1.points))[:8]]:
            q = nev(src, lam, complex(x), pol)
            vals.append(-q.C / q.D)
        vals = np.array(vals)
        assert np.max(np.abs(vals - vals[0])) < 1e-8

    def test_support_point_rejected(self, src, pol, measure_t1):
        with pytest.raises(SupportPointError):
            stieltjes(src, ExtensionParam.finite(1.0),
                      complex(measure_t1.points[2]), measure_t1, pol)


class TestAdjacentZeroSign:
    def test_d_case_positive(self, src, pol):
        cfg = RootScanConfig(window=(-26.0, 2.0))
        u, val = adjacent_zero_sign(src, 1.3, cfg, "D", pol)
        assert u < 1.3
        assert val > 0

    def test_a_case_negative(self, src, pol):
        cfg = RootScanConfig(window=(-26.0, 2.0))
        u, val = adjacent_zero_sign(src, 1.3, cfg, "A", pol)
        assert u < 1.3
        assert val < 0

    def test_adjacent_support_point(self, src, pol, measure_t1):
        # for v in supp(mu_t), the next D(., v) zero below is the adjacent
        # support point of the same measure
        pts = measure_t1.points
        k = int(np.argmin(np.abs(pts - 2.0)))
        v = float(pts[k])
        cfg = RootScanConfig(window=(v - 30.0, v + 0.5))
        u, _ = adjacent_zero_sign(src, v, cfg, "D", pol)
        assert u == pytest.approx(pts[k - 1], abs=1e-7)


class TestExport:
    def test_csv_and_sidecar(self, measure_t1, tmp_path):
        path = tmp_path / "measure.csv"
        export_measure_csv(measure_t1, str(path))
        lines = path.read_text().splitlines()
        assert lines[0] == "x,mass"
        assert len(lines) == len(measure_t1.points) + 1
        xs = [float(line.split(",")[0]) for line in lines[1:]]
        assert xs == sorted(xs)
        # 17 significant digits round-trip
        assert float(lines[1].split(",")[1]) == measure_t1.masses[0]
        meta = (tmp_path / "measure.csv.meta").read_text()
        assert "captured_mass" in meta and "t = 1" in meta


class TestExtensionParam:
    def test_parse(self):
        assert ExtensionParam.parse("inf").is_infinite
        assert ExtensionParam.parse("-2.5").t == -2.5

    def test_combine(self):
        t = ExtensionParam.finite(2.0)
        assert t.combine(1.0, 3.0) == 7.0
        assert ExtensionParam.infinite().combine(1.0, 3.0) == 3.0

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            ExtensionParam.finite(float("nan"))
