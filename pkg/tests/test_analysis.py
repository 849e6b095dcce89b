import math

import numpy as np
import pytest

from gnmchaos.analysis import (
    Region,
    SweepSpec,
    bifurcation_sweep,
    chaos_onset,
    classify_regions,
    first_flip,
    lyapunov_exponent,
    lyapunov_sweep,
    orbit_period,
)
from gnmchaos.errors import ClippingWarning, ConfigurationError
from gnmchaos.maps import GnmParams, Logistic, gnm_effective_r, gnm_map
from gnmchaos.oscillator import BufferFeedback, MapFeedback

BUF = BufferFeedback()

# Conjugate r -> mu1 with default constants: mu1 = r * 2.63 / 10 (MOhm).
MU1_FLIP = 3.0 * 2.63 / 10
MU1_ONSET = 3.5699456 * 2.63 / 10


def period2_points(r):
    d = math.sqrt((r - 3) * (r + 1))
    return sorted([(r + 1 - d) / (2 * r), (r + 1 + d) / (2 * r)])


class TestLyapunov:
    def test_r4(self):
        assert lyapunov_exponent(Logistic(4.0), BUF, 0.3) == pytest.approx(math.log(2), abs=5e-3)

    def test_fixed_point_multiplier(self):
        lam = lyapunov_exponent(Logistic(2.5), BUF, 0.3)
        assert lam == pytest.approx(math.log(abs(2 - 2.5)), abs=1e-2)

    def test_period_two_multiplier(self):
        lam = lyapunov_exponent(Logistic(3.2), BUF, 0.3)
        assert lam == pytest.approx(0.5 * math.log(abs(4 + 2 * 3.2 - 3.2**2)), abs=1e-2)

    def test_superstable_sentinel(self):
        assert lyapunov_exponent(Logistic(2.0), BUF, 0.5, 1000, 100) == -math.inf

    def test_clipping_warning(self):
        fw = gnm_map((1.05, 0.3, -0.3))
        # near the peak the output overshoots V_c, is clipped, then falls onto 0
        with pytest.warns(ClippingWarning):
            lyapunov_exponent(fw, BUF, 0.49 * fw.cutoff, 50, 0)

    def test_map_feedback_against_composite_oracle(self):
        fw, fb = gnm_map((0.8,)), gnm_map((0.75,))

        def h(x):
            return fb(fw(x))

        # independent route: finite-difference slope of the composite map
        x, total, n, burn, eps = 1.0, 0.0, 20_000, 500, 1e-7
        for k in range(burn + n):
            if k >= burn:
                lo, hi = max(x - eps, 0.0), min(x + eps, fw.cutoff)
                total += math.log(abs((h(hi) - h(lo)) / (hi - lo)))
            x = h(x)
        oracle = total / n
        lam = lyapunov_exponent(fw, MapFeedback(fb), 1.0, n, burn)
        assert lam == pytest.approx(oracle, abs=1e-5)

    def test_identity_feedback_matches_buffer(self):
        from gnmchaos.maps import identity_map

        fw = gnm_map((0.86,))
        a = lyapunov_exponent(fw, BUF, 1.0, 20_000, 500)
        b = lyapunov_exponent(fw, MapFeedback(identity_map(0.0, fw.cutoff)), 1.0, 20_000, 500)
        assert b == pytest.approx(a, abs=1e-6)


class TestBifurcation:
    def test_fixed_point_region(self):
        data = bifurcation_sweep(SweepSpec("mu1", 0.60, 0.78, 10))
        spread = data.samples.max(axis=1) - data.samples.min(axis=1)
        assert np.all(spread < 1e-6)

    def test_period_two_logistic(self):
        data = bifurcation_sweep(SweepSpec("r", 3.2, 3.3, 2, family="logistic"))
        row = data.samples[0]
        lo, hi = period2_points(3.2)
        assert lo == pytest.approx(0.5130, abs=1e-4) and hi == pytest.approx(0.7995, abs=1e-4)
        assert np.all(np.minimum(abs(row - lo), abs(row - hi)) < 1e-3)
        assert np.any(abs(row - lo) < 1e-3) and np.any(abs(row - hi) < 1e-3)

    def test_chaotic_band_fills_interval(self):
        data = bifurcation_sweep(SweepSpec("mu1", 1.05, 1.06, 2))
        assert len(np.unique(np.round(data.samples[0], 4))) >= 100

    def test_shapes_and_order(self):
        spec = SweepSpec("mu2", -0.3, 0.3, 7, fixed={"mu1": 1.0}, transient=50, retained=20)
        data = bifurcation_sweep(spec)
        assert data.samples.shape == (7, 20)
        assert np.all(np.diff(data.values) > 0)
        for v, samples in data.rows:
            m = spec.map_at(v)
            assert np.all((samples >= 0) & (samples <= m.cutoff))

    def test_conjugacy_transport(self):
        for mu1 in (0.65, 0.85, 0.93, 1.0):
            gnm = bifurcation_sweep(SweepSpec("mu1", mu1, mu1 + 0.1, 2)).samples[0]
            r = gnm_effective_r(GnmParams(mu1))
            v, ref = 0.5, []
            for k in range(4000):
                v = r * v * (1.0 - v)
                if k >= 1000:
                    ref.append(2.63 * v)
            np.testing.assert_allclose(gnm, ref, rtol=0, atol=1e-9)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(axis="r"), dict(axis="mu1", family="logistic"), dict(axis="mu1", lo=1.0, hi=0.9),
         dict(axis="mu1", steps=1), dict(axis="mu1", transient=0), dict(axis="mu1", fixed={"r": 2})],
    )
    def test_spec_validation(self, kwargs):
        base = dict(lo=0.6, hi=1.0, steps=5)
        base.update(kwargs)
        with pytest.raises(ConfigurationError):
            SweepSpec(**base)

    def test_first_flip(self):
        data = bifurcation_sweep(SweepSpec("mu1", 0.6, 1.05, 200))
        v = first_flip(data)
        assert abs(v - MU1_FLIP) < 0.005


class TestLyapunovSweep:
    def test_anchors(self):
        spec = SweepSpec("mu1", 0.70, 1.05, 2)
        curve = lyapunov_sweep(spec, n=20_000)
        lam_lo, lam_hi = curve.lambdas
        assert lam_lo < 0 < lam_hi

    def test_flip_point_marginal(self):
        fw = gnm_map((0.789,))
        lam = lyapunov_exponent(fw, BUF, fw.cutoff / 2)
        assert abs(lam) < 0.02

    def test_onset_and_sign_agreement(self):
        spec = SweepSpec("mu1", 0.6, 1.05, 200)
        curve = lyapunov_sweep(spec, n=10_000)
        onset = chaos_onset(curve)
        assert 0.935 <= onset <= 0.945
        assert abs(onset - MU1_ONSET) < 0.005
        regions = classify_regions(curve)
        for v, lam in curve.rows:
            lab = next(r.label for r in regions if r.lo <= v <= r.hi)
            assert lab == ("chaotic" if lam > 0 else "periodic" if lam < 0 else "marginal")

    def test_fixed_point_law(self):
        spec = SweepSpec("mu1", 0.62, 0.78, 9, transient=1000, retained=200)
        data = bifurcation_sweep(spec)
        curve = lyapunov_sweep(spec, n=20_000)
        for (v, samples), lam in zip(data.rows, curve.lambdas):
            assert np.ptp(samples) < 1e-9
            fw = spec.map_at(v)
            slope = fw.derivative(float(samples[-1]))[0]
            assert lam == pytest.approx(math.log(abs(slope)), abs=0.01)

    def test_parallel_invariance(self):
        spec = SweepSpec("mu1", 0.9, 1.05, 12, transient=200, retained=100)
        a = bifurcation_sweep(spec, workers=1)
        b = bifurcation_sweep(spec, workers=3)
        assert np.array_equal(a.samples, b.samples)
        la = lyapunov_sweep(spec, n=2000, workers=1)
        lb = lyapunov_sweep(spec, n=2000, workers=3)
        assert np.array_equal(la.lambdas, lb.lambdas)


class TestClassify:
    def test_sign_partition(self):
        assert classify_regions([(1, -0.5), (2, -0.1), (3, 0.4)]) == [
            Region(1, 2, "periodic"),
            Region(3, 3, "chaotic"),
        ]

    def test_all_negative(self):
        assert classify_regions([(0.1, -1.0), (0.2, -0.3), (0.3, -math.inf)]) == [
            Region(0.1, 0.3, "periodic")
        ]

    def test_marginal_band(self):
        regions = classify_regions([(1, -0.5), (2, 0.01), (3, 0.4)], tol=0.05)
        assert [r.label for r in regions] == ["periodic", "marginal", "chaotic"]

    def test_empty(self):
        with pytest.raises(ConfigurationError):
            classify_regions([])


@pytest.mark.parametrize("period", [1, 2, 3, 4, 8])
def test_orbit_period(period):
    cycle = np.linspace(0.1, 0.9, period)
    samples = np.tile(cycle, 400 // period + 1)
    assert orbit_period(samples) == period


def test_orbit_period_aperiodic():
    rng = np.random.default_rng(0)
    assert orbit_period(rng.random(500)) == 0
