"""Exact and asymptotic control error rates for rotation pulses.

Error rate convention: P = 1 - F^2, the population of the state
orthogonal to the target after the pulse.  Controls rotate the pure state
R(theta0)|0> toward R(theta0 + theta)|0>; the qubit phase is fixed to
zero, so everything lives in the real plane of the Bloch sphere.

Reference constants such as (pi +- 2)^2/64 are always computed from pi at
runtime, never hard-coded as decimals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock_field import DEFAULT_TAIL_TOL, FieldState, make_coherent
from .jc_channel import PulseSpec, QubitState, apply_channel, build_kraus

QUARTER_PI = math.pi / 4

#: Recognized pulse-area selection modes.  The "-plus"/"-minus" suffixes
#: pick the correction branch explicitly; the bare forms pick it from the
#: starting altitude of the control.
PULSE_MODES = (
    "quarter-pi",
    "optimal-fidelity-plus", "optimal-fidelity-minus", "optimal-fidelity",
    "bias-free-plus", "bias-free-minus", "bias-free",
    "explicit",
)


def gea_banacloche(n_mean: float) -> float:
    """Semiclassical half-pulse error reference (pi^2 + 4) / (64 N)."""
    return (math.pi ** 2 + 4.0) / (64.0 * n_mean)


def ozawa_bound(n_mean: float) -> float:
    """Uncertainty-principle lower bound 1 / (16 (N + 1))."""
    return 1.0 / (16.0 * (n_mean + 1.0))


@dataclass(frozen=True)
class ControlSpec:
    """A rotation control: start altitude theta0, intended rotation theta."""

    theta0: float
    theta: float

    @property
    def midpoint_altitude(self) -> float:
        """Altitude of the rotation midpoint, theta0 + theta/2."""
        return self.theta0 + 0.5 * self.theta

    @property
    def target_angle(self) -> float:
        return self.theta0 + self.theta


@dataclass(frozen=True)
class OptimalAngles:
    """First-order corrected half pulse areas for the two pole starts."""

    fidelity_optimal_plus: float
    fidelity_optimal_minus: float
    bias_free_plus: float
    bias_free_minus: float
    n_mean: float


@dataclass(frozen=True)
class ErrorReport:
    """One control evaluated exactly plus its 1/N references."""

    exact: float
    asymptotic: float
    gea_banacloche: float
    ozawa_bound: float
    delta: float
    n_mean: float
    vartheta_used: float


def optimal_vartheta(n_mean: float) -> OptimalAngles:
    """Half pulse areas minimizing error or population bias at order 1/N.

    Fidelity-optimal: pi/4 - (3 pi/32 +- (pi+2)/16) / N.
    Bias-free:        pi/4 - pi (1 +- 2) / (32 N).
    """
    if n_mean <= 0:
        raise ValueError(f"mean photon number must be positive, got {n_mean}")
    base = QUARTER_PI
    return OptimalAngles(
        fidelity_optimal_plus=base - (3 * math.pi / 32 + (math.pi + 2) / 16) / n_mean,
        fidelity_optimal_minus=base - (3 * math.pi / 32 - (math.pi + 2) / 16) / n_mean,
        bias_free_plus=base - 3 * math.pi / (32 * n_mean),
        bias_free_minus=base + math.pi / (32 * n_mean),
        n_mean=float(n_mean),
    )


def resolve_pulse(mode: str, n_mean: float, base: float = QUARTER_PI,
                  start_angle: float | None = None,
                  vartheta: float | None = None,
                  kappa: float | None = None) -> PulseSpec:
    """Turn a pulse-area mode into a concrete PulseSpec for one control.

    ``base`` is the nominal half pulse area (the intended rotation angle).
    The optimal-fidelity and bias-free corrections are defined for the
    half-rotation family (base pi/4); for any other base they fall back to
    the nominal value.  The bare "optimal-fidelity"/"bias-free" modes pick
    the plus branch when the control starts nearer the excited pole and
    the minus branch otherwise.
    """
    if mode not in PULSE_MODES:
        raise ValueError(f"unknown pulse mode {mode!r}; expected one of {PULSE_MODES}")
    if mode == "explicit":
        if kappa is not None:
            return PulseSpec.from_kappa(kappa, n_mean)
        if vartheta is None:
            raise ValueError("explicit mode requires vartheta or kappa")
        return PulseSpec.from_vartheta(vartheta, n_mean, mode="explicit")

    if mode == "quarter-pi" or not math.isclose(base, QUARTER_PI, abs_tol=1e-12):
        return PulseSpec.from_vartheta(base, n_mean, mode=mode)

    angles = optimal_vartheta(n_mean)
    sign = mode.rsplit("-", 1)[-1]
    if sign not in ("plus", "minus"):
        nearer_excited = start_angle is not None and math.sin(start_angle) ** 2 > 0.5
        sign = "plus" if nearer_excited else "minus"
    if mode.startswith("optimal-fidelity"):
        value = angles.fidelity_optimal_plus if sign == "plus" else angles.fidelity_optimal_minus
    else:
        value = angles.bias_free_plus if sign == "plus" else angles.bias_free_minus
    return PulseSpec.from_vartheta(value, n_mean, mode=mode)


def _orthogonal_target(angle: float) -> np.ndarray:
    """R(angle)|1> = (cos angle, -sin angle)^T, orthogonal to R(angle)|0>."""
    return np.array([math.cos(angle), -math.sin(angle)])


def error_rate_exact(control: ControlSpec, field: FieldState, pulse: PulseSpec) -> float:
    """Exact error rate of one control, via the channel.

    Applies the Kraus map to R(theta0)|0><0|R^dag(theta0) and projects the
    output onto the orthogonal target R(theta0 + theta)|1>.
    """
    rho0 = QubitState.pure(control.theta0)
    evolved = apply_channel(rho0, build_kraus(field, pulse))
    perp = _orthogonal_target(control.target_angle)
    p = float(np.real(perp @ evolved.rho @ perp))
    return min(max(p, 0.0), 1.0)


def _require_coherent(field: FieldState, what: str) -> None:
    if not field.is_coherent:
        raise ValueError(f"{what} is defined for coherent fields")


def p_plus(field: FieldState, pulse: PulseSpec) -> float:
    """Half-rotation error from the excited pole, as a single sum:

    P+ = 1/2 - sum_n |C_n|^2 sqrt(n/N) sin(k sqrt(n)) cos(k sqrt(n+1)).
    """
    _require_coherent(field, "p_plus")
    kappa = pulse.kappa_for(field)
    n_mean = field.mean_photon_number
    n = field.photon_numbers().astype(float)
    p = field.probabilities()
    terms = p * np.sqrt(n / n_mean) * np.sin(kappa * np.sqrt(n)) * np.cos(kappa * np.sqrt(n + 1.0))
    return 0.5 - float(terms.sum())


def p_minus(field: FieldState, pulse: PulseSpec) -> float:
    """Half-rotation error from the ground pole, as a single sum:

    P- = 1/2 - sum_{n>=1} |C_n|^2 sqrt(n/N) sin(k sqrt(n)) cos(k sqrt(n-1)).
    """
    _require_coherent(field, "p_minus")
    kappa = pulse.kappa_for(field)
    n_mean = field.mean_photon_number
    n = field.photon_numbers().astype(float)
    p = field.probabilities()
    keep = n >= 1.0
    n, p = n[keep], p[keep]
    terms = p * np.sqrt(n / n_mean) * np.sin(kappa * np.sqrt(n)) * np.cos(kappa * np.sqrt(n - 1.0))
    return 0.5 - float(terms.sum())


def asymptotic_p(vartheta: float, n_mean: float, sign: int) -> float:
    """First-order 1/N error of a half rotation at half pulse area vartheta:

    (1 - sin 2t)/2 + (1/16N) {(1 + 4t^2) sin 2t - 2t cos 2t +- 4t (1 - cos 2t)}.

    ``sign`` +1 starts from the excited pole, -1 from the ground pole.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    s2, c2 = math.sin(2 * vartheta), math.cos(2 * vartheta)
    bracket = (1 + 4 * vartheta ** 2) * s2 - 2 * vartheta * c2 + sign * 4 * vartheta * (1 - c2)
    return 0.5 * (1 - s2) + bracket / (16.0 * n_mean)


def diagonal_deviation(field: FieldState, pulse: PulseSpec, sign: int) -> float:
    """Population bias after a half rotation from a pole:

    Delta(+-) = | (1/2) sum_n |C_n|^2 cos(2 k sqrt(n + (1 +- 1)/2)) |.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    _require_coherent(field, "diagonal_deviation")
    kappa = pulse.kappa_for(field)
    shift = 1.0 if sign == 1 else 0.0
    n = field.photon_numbers().astype(float)
    p = field.probabilities()
    return abs(0.5 * float(np.dot(p, np.cos(2.0 * kappa * np.sqrt(n + shift)))))


def pi_pulse_error(theta0: float, field: FieldState, pulse: PulseSpec) -> float:
    """Full-flip error rate (theta = pi/2) via the specialized sums.

    Closed forms exist for theta0 in {0, pi/4, pi/2, 3pi/4}; any other
    start falls back to the generic channel path.  3pi/4 is evaluated as
    -pi/4, which prepares the same density matrix.
    """
    _require_coherent(field, "pi_pulse_error")
    kappa = pulse.kappa_for(field)
    n_mean = field.mean_photon_number
    n = field.photon_numbers().astype(float)
    p = field.probabilities()
    root = np.sqrt(n)
    root_up = np.sqrt(n + 1.0)

    def close(a, b):
        return math.isclose(a, b, abs_tol=1e-12)

    if close(theta0, 0.0):
        return float(np.dot(p, np.cos(kappa * root) ** 2))
    if close(theta0, math.pi / 2):
        return float(np.dot(p, np.cos(kappa * root_up) ** 2))
    if close(theta0, math.pi / 4) or close(theta0, 3 * math.pi / 4):
        branch = -1.0 if close(theta0, math.pi / 4) else 1.0
        even = (np.cos(kappa * root_up) * np.cos(kappa * root)
                - np.sqrt(n / (1.0 + n)) * np.sin(kappa * root_up) * np.sin(kappa * root))
        lag = np.zeros_like(n)
        inner = n >= 1.0
        lag[inner] = (np.sqrt(n[inner] / n_mean) * np.sin(kappa * root[inner])
                      * (np.cos(kappa * root_up[inner])
                         - np.cos(kappa * np.sqrt(n[inner] - 1.0))))
        return 0.5 + 0.5 * float(np.dot(p, even + branch * lag))
    return error_rate_exact(ControlSpec(theta0, math.pi / 2), field, pulse)


def landscape_asymptote(midpoint: float, theta: float, n_mean: float) -> float:
    """Leading 1/N error of a general control by its midpoint altitude:

    (theta - cos(2 midpoint) sin(theta))^2 / (4 N).

    Maximal at midpoint pi/2 -> (theta + sin theta)^2 / 4N, minimal at
    midpoint 0 -> (theta - sin theta)^2 / 4N.
    """
    amp = theta - math.cos(2.0 * midpoint) * math.sin(theta)
    return amp * amp / (4.0 * n_mean)


def error_report(theta0: float, theta: float, n_mean: float,
                 mode: str = "quarter-pi", vartheta: float | None = None,
                 kappa: float | None = None,
                 tail_tol: float = DEFAULT_TAIL_TOL) -> ErrorReport:
    """Evaluate one control exactly and attach all 1/N reference numbers.

    ``delta`` is the deviation of the excited-level population from its
    target value sin^2(theta0 + theta); for the two pole starts of a half
    rotation it coincides with the closed-form diagonal_deviation.
    """
    control = ControlSpec(theta0, theta)
    field = make_coherent(n_mean, phase=math.pi / 2, tail_tol=tail_tol)
    pulse = resolve_pulse(mode, n_mean, base=theta, start_angle=theta0,
                          vartheta=vartheta, kappa=kappa)
    vartheta_used = pulse.vartheta_for(field)

    evolved = apply_channel(QubitState.pure(theta0), build_kraus(field, pulse))
    perp = _orthogonal_target(control.target_angle)
    exact = min(max(float(np.real(perp @ evolved.rho @ perp)), 0.0), 1.0)
    delta = abs(evolved.excited_population - math.sin(control.target_angle) ** 2)

    if math.isclose(theta, QUARTER_PI, abs_tol=1e-12) and (
            math.isclose(theta0, 0.0, abs_tol=1e-12)
            or math.isclose(theta0, math.pi / 2, abs_tol=1e-12)):
        sign = -1 if math.isclose(theta0, 0.0, abs_tol=1e-12) else 1
        asymptotic = asymptotic_p(vartheta_used, n_mean, sign)
    else:
        asymptotic = landscape_asymptote(control.midpoint_altitude, theta, n_mean)

    return ErrorReport(
        exact=exact,
        asymptotic=asymptotic,
        gea_banacloche=gea_banacloche(n_mean),
        ozawa_bound=ozawa_bound(n_mean),
        delta=delta,
        n_mean=float(n_mean),
        vartheta_used=vartheta_used,
    )
