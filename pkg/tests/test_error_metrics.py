import math

import numpy as np
import pytest
from scipy.stats import poisson

from jcpulse import (
    ControlSpec,
    PulseSpec,
    asymptotic_p,
    diagonal_deviation,
    error_rate_exact,
    error_report,
    gea_banacloche,
    landscape_asymptote,
    make_coherent,
    make_number_state,
    optimal_vartheta,
    ozawa_bound,
    p_minus,
    p_plus,
    pi_pulse_error,
    resolve_pulse,
)

PI = math.pi
QUARTER_PI = PI / 4


def direct_error_sum(theta0, theta, n_mean, kappa):
    """Independent oracle: the error rate as an explicit Poisson sum.

    Uses scipy's pmf and the per-photon-number propagator elements, with
    its own window; shares no code with the library paths it checks.
    """
    n = np.arange(0, int(n_mean + 60 * math.sqrt(n_mean)) + 60, dtype=float)
    pmf = poisson.pmf(n, n_mean)
    m11 = np.cos(kappa * np.sqrt(n + 1.0))
    m10 = np.sqrt(n_mean / (n + 1.0)) * np.sin(kappa * np.sqrt(n + 1.0))
    m01 = -np.sqrt(n / n_mean) * np.sin(kappa * np.sqrt(n))
    m00 = np.cos(kappa * np.sqrt(n))
    target = theta0 + theta
    amp = (math.sin(theta0) * (m11 * math.cos(target) - m01 * math.sin(target))
           + math.cos(theta0) * (m10 * math.cos(target) - m00 * math.sin(target)))
    return float(np.sum(pmf * amp ** 2))


class TestErrorRateExact:
    @pytest.mark.parametrize("theta0,theta", [
        (0.0, QUARTER_PI), (PI / 2, QUARTER_PI), (0.3, 0.9), (QUARTER_PI, PI / 2),
    ])
    @pytest.mark.parametrize("n_mean", [10.0, 1e3])
    def test_matches_direct_summation(self, theta0, theta, n_mean):
        field = make_coherent(n_mean)
        pulse = PulseSpec.from_vartheta(theta, n_mean)
        channel_value = error_rate_exact(ControlSpec(theta0, theta), field, pulse)
        oracle = direct_error_sum(theta0, theta, n_mean, pulse.kappa)
        assert channel_value == pytest.approx(oracle, abs=1e-12)

    def test_ground_start_scaled_error(self):
        n_mean = 1e4
        field = make_coherent(n_mean)
        pulse = PulseSpec.from_vartheta(QUARTER_PI, n_mean)
        value = error_rate_exact(ControlSpec(0.0, QUARTER_PI), field, pulse)
        assert n_mean * value == pytest.approx((PI - 2) ** 2 / 64, rel=0.02)

    def test_excited_start_scaled_error(self):
        n_mean = 1e4
        field = make_coherent(n_mean)
        pulse = PulseSpec.from_vartheta(QUARTER_PI, n_mean)
        value = error_rate_exact(ControlSpec(PI / 2, QUARTER_PI), field, pulse)
        assert n_mean * value == pytest.approx((PI + 2) ** 2 / 64, rel=0.02)

    def test_identity_control_has_zero_error(self):
        field = make_coherent(100.0)
        pulse = PulseSpec.from_kappa(0.0, 100.0)
        assert error_rate_exact(ControlSpec(0.7, 0.0), field, pulse) <= 1e-12


class TestClosedFormSums:
    @pytest.mark.parametrize("n_mean", [10.0, 100.0, 1e3])
    def test_agree_with_channel_path(self, n_mean):
        field = make_coherent(n_mean)
        pulse = PulseSpec.from_vartheta(QUARTER_PI, n_mean)
        assert p_plus(field, pulse) == pytest.approx(
            error_rate_exact(ControlSpec(PI / 2, QUARTER_PI), field, pulse), abs=1e-12)
        assert p_minus(field, pulse) == pytest.approx(
            error_rate_exact(ControlSpec(0.0, QUARTER_PI), field, pulse), abs=1e-12)

    def test_small_field_value(self):
        field = make_coherent(100.0)
        pulse = PulseSpec.from_vartheta(QUARTER_PI, 100.0)
        assert p_minus(field, pulse) == pytest.approx(2.04e-4, rel=0.15)

    def test_pole_ratio_near_twenty(self):
        field = make_coherent(100.0)
        pulse = PulseSpec.from_vartheta(QUARTER_PI, 100.0)
        assert 15.0 <= p_plus(field, pulse) / p_minus(field, pulse) <= 25.0

    def test_zero_kappa_gives_half(self):
        field = make_coherent(100.0)
        pulse = PulseSpec.from_kappa(0.0, 100.0)
        assert p_plus(field, pulse) == pytest.approx(0.5, abs=1e-12)
        assert p_minus(field, pulse) == pytest.approx(0.5, abs=1e-12)

    def test_requires_coherent_field(self):
        with pytest.raises(ValueError):
            p_plus(make_number_state(4), PulseSpec.from_kappa(0.1))


class TestAsymptoticP:
    def test_reduces_to_quarter_coefficients(self):
        n_mean = 123.0
        plus = asymptotic_p(QUARTER_PI, n_mean, 1)
        minus = asymptotic_p(QUARTER_PI, n_mean, -1)
        assert plus == pytest.approx((PI + 2) ** 2 / (64 * n_mean), rel=1e-12)
        assert minus == pytest.approx((PI - 2) ** 2 / (64 * n_mean), rel=1e-12)

    def test_infinite_field_limit(self):
        for vartheta in (0.2, QUARTER_PI, 1.1):
            value = asymptotic_p(vartheta, 1e12, 1)
            assert value == pytest.approx((1 - math.sin(2 * vartheta)) / 2, abs=1e-11)

    def test_convergence_rate_to_exact(self):
        # The 1/N^2 remainder makes N * (P_exact - asymptote) shrink ~10x
        # per decade of N.
        for sign in (1, -1):
            devs = []
            for n_mean in (1e3, 1e4):
                field = make_coherent(n_mean)
                pulse = PulseSpec.from_vartheta(QUARTER_PI, n_mean)
                exact = p_plus(field, pulse) if sign == 1 else p_minus(field, pulse)
                devs.append(abs(n_mean * exact
                                - n_mean * asymptotic_p(QUARTER_PI, n_mean, sign)))
            assert 5.0 <= devs[0] / devs[1] <= 20.0

    def test_semiclassical_average(self):
        n_mean = 1e4
        field = make_coherent(n_mean)
        pulse = PulseSpec.from_vartheta(QUARTER_PI, n_mean)
        avg = n_mean * (p_plus(field, pulse) + p_minus(field, pulse)) / 2
        reference = (PI ** 2 + 4) / 64
        assert abs(avg - reference) / reference <= 0.02
        # sanity on the runtime-computed reference constants
        assert gea_banacloche(n_mean) == reference / n_mean
        assert ozawa_bound(n_mean) == 1.0 / (16 * (n_mean + 1))

    def test_reference_curve_ordering(self):
        for n_mean in np.geomspace(1e2, 1e4, 10):
            field = make_coherent(float(n_mean))
            pulse = PulseSpec.from_vartheta(QUARTER_PI, float(n_mean))
            assert p_minus(field, pulse) < ozawa_bound(n_mean) \
                < gea_banacloche(n_mean) < p_plus(field, pulse)

    def test_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            asymptotic_p(QUARTER_PI, 10.0, 0)


class TestOptimalAngles:
    def test_closed_forms(self):
        n_mean = 1e3
        angles = optimal_vartheta(n_mean)
        assert angles.fidelity_optimal_minus == pytest.approx(
            QUARTER_PI - (3 * PI / 32 - (PI + 2) / 16) / n_mean, rel=1e-14)
        assert angles.fidelity_optimal_plus == pytest.approx(
            QUARTER_PI - (3 * PI / 32 + (PI + 2) / 16) / n_mean, rel=1e-14)
        assert angles.bias_free_minus == pytest.approx(
            QUARTER_PI + PI / (32 * n_mean), rel=1e-14)
        assert angles.bias_free_plus == pytest.approx(
            QUARTER_PI - 3 * PI / (32 * n_mean), rel=1e-14)

    def test_all_reduce_to_quarter_pi(self):
        angles = optimal_vartheta(1e8)
        for value in (angles.fidelity_optimal_plus, angles.fidelity_optimal_minus,
                      angles.bias_free_plus, angles.bias_free_minus):
            assert abs(value - QUARTER_PI) <= 1e-7

    def test_brute_force_scan_confirms_minimizer(self):
        # Oracle: parabola vertex of P-(vartheta) sampled around pi/4.
        n_mean = 1e3
        field = make_coherent(n_mean)
        offsets = np.linspace(-3e-4, 3e-4, 61)
        values = [p_minus(field, PulseSpec.from_vartheta(QUARTER_PI + o, n_mean))
                  for o in offsets]
        coeffs = np.polyfit(offsets, values, 2)
        vertex = QUARTER_PI - coeffs[1] / (2 * coeffs[0])
        predicted = optimal_vartheta(n_mean).fidelity_optimal_minus
        assert vertex == pytest.approx(predicted, abs=3e-6)

    def test_flatness_of_optimum(self):
        # Moving from pi/4 to the optimum changes P- only at order 1/N^2.
        ratios = []
        for n_mean in (1e3, 1e4):
            field = make_coherent(n_mean)
            best = optimal_vartheta(n_mean).fidelity_optimal_minus
            delta = abs(p_minus(field, PulseSpec.from_vartheta(best, n_mean))
                        - p_minus(field, PulseSpec.from_vartheta(QUARTER_PI, n_mean)))
            ratios.append(delta * n_mean ** 2)
        assert ratios[0] / ratios[1] <= 3.0
        assert ratios[1] / ratios[0] <= 3.0


class TestDiagonalDeviation:
    def test_leading_coefficients(self):
        n_mean = 1e3
        field = make_coherent(n_mean)
        pulse = PulseSpec.from_vartheta(QUARTER_PI, n_mean)
        assert n_mean * diagonal_deviation(field, pulse, 1) == pytest.approx(
            3 * PI / 32, rel=0.05)
        assert n_mean * diagonal_deviation(field, pulse, -1) == pytest.approx(
            PI / 32, rel=0.05)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_bias_free_area_cancels_leading_term(self, sign):
        n_mean = 1e3
        field = make_coherent(n_mean)
        angles = optimal_vartheta(n_mean)
        tilde = angles.bias_free_plus if sign == 1 else angles.bias_free_minus
        baseline = diagonal_deviation(field, PulseSpec.from_vartheta(QUARTER_PI, n_mean), sign)
        cancelled = diagonal_deviation(field, PulseSpec.from_vartheta(tilde, n_mean), sign)
        assert cancelled <= 0.05 * baseline

    def test_matches_population_deviation_of_channel(self):
        # Same number as |excited population - 1/2| after the half rotation.
        report = error_report(0.0, QUARTER_PI, 500.0)
        field = make_coherent(500.0)
        pulse = PulseSpec.from_vartheta(QUARTER_PI, 500.0)
        assert report.delta == pytest.approx(diagonal_deviation(field, pulse, -1), abs=1e-13)

    def test_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            diagonal_deviation(make_coherent(10.0), PulseSpec.from_vartheta(QUARTER_PI, 10.0), 2)


class TestPiPulse:
    @pytest.mark.parametrize("theta0", [0.0, QUARTER_PI, PI / 2, 3 * PI / 4])
    @pytest.mark.parametrize("n_mean", [10.0, 100.0, 1e3])
    def test_specialized_sums_match_channel(self, theta0, n_mean):
        field = make_coherent(n_mean)
        pulse = PulseSpec.from_vartheta(PI / 2, n_mean)
        assert pi_pulse_error(theta0, field, pulse) == pytest.approx(
            error_rate_exact(ControlSpec(theta0, PI / 2), field, pulse), abs=1e-12)

    def test_scaled_coefficients(self):
        n_mean = 1e4
        field = make_coherent(n_mean)
        pulse = PulseSpec.from_vartheta(PI / 2, n_mean)
        assert n_mean * pi_pulse_error(0.0, field, pulse) == pytest.approx(
            PI ** 2 / 16, rel=0.02)
        assert n_mean * pi_pulse_error(QUARTER_PI, field, pulse) == pytest.approx(
            (PI + 2) ** 2 / 16, rel=0.02)
        assert n_mean * pi_pulse_error(3 * PI / 4, field, pulse) == pytest.approx(
            (PI - 2) ** 2 / 16, rel=0.03)

    def test_fallback_for_generic_start(self):
        field = make_coherent(200.0)
        pulse = PulseSpec.from_vartheta(PI / 2, 200.0)
        assert pi_pulse_error(0.1234, field, pulse) == error_rate_exact(
            ControlSpec(0.1234, PI / 2), field, pulse)


class TestLandscape:
    def test_extreme_midpoints(self):
        assert landscape_asymptote(PI / 2, PI / 2, 1.0) == pytest.approx(
            (PI / 2 + 1) ** 2 / 4, rel=1e-12)
        assert landscape_asymptote(0.0, PI / 2, 1.0) == pytest.approx(
            (PI / 2 - 1) ** 2 / 4, rel=1e-12)

    def test_zero_rotation(self):
        for midpoint in (0.0, 0.4, PI / 2):
            assert landscape_asymptote(midpoint, 0.0, 10.0) == 0.0

    def test_grid_consistency_with_exact(self):
        n_mean = 1e4
        worst = 0.0
        for theta in (PI / 8, QUARTER_PI, PI / 2, 3 * PI / 4):
            field = make_coherent(n_mean)
            pulse = PulseSpec.from_vartheta(theta, n_mean)
            for midpoint in np.arange(0.0, PI / 2 + 1e-9, PI / 8):
                exact = error_rate_exact(
                    ControlSpec(midpoint - theta / 2, theta), field, pulse)
                asym = landscape_asymptote(midpoint, theta, n_mean)
                worst = max(worst, abs(exact - asym) / asym)
        assert worst <= 0.05


class TestPulseResolution:
    def test_quarter_pi_takes_base_angle(self):
        pulse = resolve_pulse("quarter-pi", 100.0, base=PI / 2)
        assert pulse.vartheta == PI / 2
        assert pulse.kappa == pytest.approx(PI / 2 / 10.0)

    def test_signed_modes(self):
        angles = optimal_vartheta(100.0)
        assert resolve_pulse("bias-free-minus", 100.0).vartheta == angles.bias_free_minus
        assert resolve_pulse("bias-free-plus", 100.0).vartheta == angles.bias_free_plus
        assert resolve_pulse("optimal-fidelity-minus", 100.0).vartheta == \
            angles.fidelity_optimal_minus

    def test_auto_sign_follows_start_altitude(self):
        angles = optimal_vartheta(100.0)
        assert resolve_pulse("bias-free", 100.0, start_angle=0.0).vartheta == \
            angles.bias_free_minus
        assert resolve_pulse("bias-free", 100.0, start_angle=PI / 2).vartheta == \
            angles.bias_free_plus

    def test_corrections_only_apply_to_half_rotations(self):
        pulse = resolve_pulse("bias-free-minus", 100.0, base=PI / 2)
        assert pulse.vartheta == PI / 2

    def test_explicit_requires_value(self):
        with pytest.raises(ValueError):
            resolve_pulse("explicit", 100.0)
        assert resolve_pulse("explicit", 100.0, vartheta=0.7).vartheta == 0.7
        assert resolve_pulse("explicit", 100.0, kappa=0.1).kappa == 0.1

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            resolve_pulse("sometimes-optimal", 100.0)


class TestErrorReport:
    def test_pole_reports_use_pulse_area_asymptote(self):
        report = error_report(0.0, QUARTER_PI, 1e3)
        assert report.asymptotic == pytest.approx(asymptotic_p(QUARTER_PI, 1e3, -1), rel=1e-12)
        report = error_report(PI / 2, QUARTER_PI, 1e3)
        assert report.asymptotic == pytest.approx(asymptotic_p(QUARTER_PI, 1e3, 1), rel=1e-12)

    def test_generic_reports_use_landscape(self):
        report = error_report(0.3, 0.9, 1e3)
        assert report.asymptotic == pytest.approx(
            landscape_asymptote(0.3 + 0.45, 0.9, 1e3), rel=1e-12)

    def test_report_fields(self):
        report = error_report(0.0, QUARTER_PI, 1e3)
        assert 0.0 <= report.exact <= 1.0
        assert report.delta >= 0.0
        assert report.n_mean == 1e3
        assert report.vartheta_used == QUARTER_PI
        assert report.ozawa_bound == 1.0 / (16 * (1e3 + 1))
