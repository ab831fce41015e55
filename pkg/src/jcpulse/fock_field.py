"""Pure single-mode field states in a truncated photon-number basis.

Coherent states carry Poisson number statistics |C_n|^2 = e^-N N^n / n!
with amplitude phases arg(C_n) = n*phi.  Magnitudes are computed and kept
in log space (via log-gamma), so mean photon numbers up to ~1e6 produce
finite amplitudes; the retained window around N is grown in units of
sqrt(N) until the discarded Poisson tail mass drops below ``tail_tol``.

Number states |m> bypass the truncation logic entirely: their window is
the single occupied level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

TWO_PI = 2.0 * math.pi

#: Default bound on the Poisson probability mass discarded by truncation.
DEFAULT_TAIL_TOL = 1e-12

# Window half-width in units of sqrt(N): starting guess and growth factor.
_INITIAL_HALF_WIDTH = 8.0
_WIDTH_GROWTH = 1.6


@dataclass(frozen=True)
class FieldState:
    """Amplitudes C_n of a pure field state on a contiguous number window.

    Amplitudes are stored as (log-magnitude, phase) pairs and materialized
    to complex on demand; every C_n outside [n_offset, n_max] is zero.
    Instances are immutable and safe to share between threads.
    """

    n_offset: int
    log_magnitude: np.ndarray
    phase: np.ndarray
    mean_photon_number: float
    coherent_phase: float
    tail_mass: float
    kind: str  # "coherent" or "number"

    def __post_init__(self):
        object.__setattr__(self, "log_magnitude",
                           np.asarray(self.log_magnitude, dtype=float))
        object.__setattr__(self, "phase", np.asarray(self.phase, dtype=float))
        self.log_magnitude.flags.writeable = False
        self.phase.flags.writeable = False

    @property
    def size(self) -> int:
        return self.log_magnitude.shape[0]

    @property
    def n_max(self) -> int:
        return self.n_offset + self.size - 1

    @property
    def is_coherent(self) -> bool:
        return self.kind == "coherent"

    def photon_numbers(self) -> np.ndarray:
        """Photon numbers n covered by the stored window."""
        return np.arange(self.n_offset, self.n_offset + self.size)

    def amplitudes(self) -> np.ndarray:
        """Complex amplitudes C_n over the stored window."""
        return np.exp(self.log_magnitude + 1j * self.phase)

    def probabilities(self) -> np.ndarray:
        """Occupation probabilities |C_n|^2 over the stored window."""
        return np.exp(2.0 * self.log_magnitude)

    def amplitude(self, n: int) -> complex:
        """Single amplitude C_n; zero outside the stored window."""
        if n < self.n_offset or n > self.n_max:
            return 0.0 + 0.0j
        i = n - self.n_offset
        return complex(np.exp(self.log_magnitude[i] + 1j * self.phase[i]))

    def to_json_dict(self) -> dict:
        """Serializable form used by the ``kraus-dump`` CLI diagnostic."""
        return {
            "n_offset": int(self.n_offset),
            "magnitudes-log": self.log_magnitude.tolist(),
            "phase": self.phase.tolist(),
            "N": float(self.mean_photon_number),
            "tail_mass": float(self.tail_mass),
        }


@dataclass(frozen=True)
class MomentVector:
    """Central moments mu_k of n/N, k = 0..K, for a mean photon number N."""

    values: np.ndarray
    mean_photon_number: float

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        self.values.flags.writeable = False

    def __getitem__(self, k: int) -> float:
        return float(self.values[k])

    def __len__(self) -> int:
        return self.values.shape[0]


def _poisson_log_pmf(n: np.ndarray, n_mean: float) -> np.ndarray:
    return n * math.log(n_mean) - n_mean - gammaln(n + 1.0)


def _tail_bounds(lo: int, hi: int, n_mean: float,
                 log_pmf: np.ndarray) -> tuple[float, float]:
    """Geometric upper bounds on the Poisson mass below lo and above hi.

    The term ratios pmf(n+1)/pmf(n) = N/(n+1) fall below one past the
    mode, so each discarded side is dominated by a geometric series
    anchored at the window edge.  Unlike 1 - sum(pmf), these bounds stay
    meaningful when the absolute log-pmf carries O(N log N * eps)
    rounding noise.
    """
    lower = 0.0
    if lo > 0:
        ratio = lo / n_mean
        lower = math.exp(log_pmf[0]) * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
    ratio = n_mean / (hi + 1.0)
    upper = math.exp(log_pmf[-1]) * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
    return lower, upper


def make_coherent(n_mean: float, phase: float = math.pi / 2,
                  tail_tol: float = DEFAULT_TAIL_TOL) -> FieldState:
    """Build a coherent state with mean photon number ``n_mean``.

    The number window is grown symmetrically around N in steps of sqrt(N)
    until the (bounded) discarded tail mass is at most ``tail_tol``,
    subject to the hard cap n_max <= N + 50*sqrt(N) + 100.  The retained
    magnitudes are renormalized by a single scalar so that
    sum |C_n|^2 = 1 - tail_mass holds exactly; this removes the
    O(N log N * eps) bias that plain log-gamma evaluation leaves in the
    total mass for N >~ 1e4.

    Raises ValueError for non-positive ``n_mean``, a ``tail_tol`` outside
    (0, 1), or a tail tolerance unattainable within the cap.
    """
    if n_mean <= 0:
        raise ValueError(f"mean photon number must be positive, got {n_mean}")
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail_tol must lie in (0, 1), got {tail_tol}")

    phase = float(phase) % TWO_PI
    root_n = math.sqrt(n_mean)
    cap = int(n_mean + 50.0 * root_n + 100.0)

    width = _INITIAL_HALF_WIDTH
    while True:
        lo = max(0, math.floor(n_mean - width * root_n))
        hi = min(cap, math.ceil(n_mean + width * root_n))
        ns = np.arange(lo, hi + 1, dtype=float)
        log_pmf = _poisson_log_pmf(ns, n_mean)
        tail_lo, tail_hi = _tail_bounds(lo, hi, n_mean, log_pmf)
        tail = tail_lo + tail_hi
        if tail <= tail_tol:
            break
        if (lo == 0 or tail_lo <= tail_tol / 2) and hi >= cap:
            raise ValueError(
                f"tail_tol={tail_tol} unattainable within n_max cap {cap} "
                f"(residual tail bound {tail:.3e})")
        width *= _WIDTH_GROWTH

    retained = float(np.exp(log_pmf).sum())
    shift = 0.5 * (math.log1p(-tail) - math.log(retained))

    return FieldState(
        n_offset=int(lo),
        log_magnitude=0.5 * log_pmf + shift,
        phase=np.mod(np.arange(lo, hi + 1, dtype=float) * phase, TWO_PI),
        mean_photon_number=float(n_mean),
        coherent_phase=phase,
        tail_mass=tail,
        kind="coherent",
    )


def make_number_state(m: int) -> FieldState:
    """Build the number state |m>: C_n = delta_{n,m}, zero tail mass."""
    if m < 0 or int(m) != m:
        raise ValueError(f"photon number must be a non-negative integer, got {m}")
    m = int(m)
    return FieldState(
        n_offset=m,
        log_magnitude=np.zeros(1),
        phase=np.zeros(1),
        mean_photon_number=float(m),
        coherent_phase=0.0,
        tail_mass=0.0,
        kind="number",
    )


def central_moments_direct(field: FieldState, k_max: int) -> MomentVector:
    """Moments mu_k = sum_n |C_n|^2 ((n-N)/N)^k over the retained window."""
    if k_max < 0:
        raise ValueError(f"moment order must be non-negative, got {k_max}")
    if not field.is_coherent:
        raise ValueError("direct central moments are defined for coherent states")
    n_mean = field.mean_photon_number
    x = (field.photon_numbers() - n_mean) / n_mean
    p = field.probabilities()
    values = np.empty(k_max + 1)
    xk = np.ones_like(x)
    for k in range(k_max + 1):
        values[k] = float(np.dot(p, xk))
        xk = xk * x
    return MomentVector(values=values, mean_photon_number=n_mean)


def central_moments_recursive(n_mean: float, k_max: int) -> MomentVector:
    """Moments mu_k from the exact recursion in powers of 1/N.

    Seeds mu_0 = 1, mu_1 = 0; for k >= 2,
    mu_k = sum_{i=1}^{k-1} C(k-1, i) * mu_{k-1-i} / N^i.
    """
    if k_max < 0:
        raise ValueError(f"moment order must be non-negative, got {k_max}")
    if n_mean <= 0:
        raise ValueError(f"mean photon number must be positive, got {n_mean}")
    mu = [1.0, 0.0]
    for k in range(2, k_max + 1):
        mu.append(math.fsum(
            math.comb(k - 1, i) * mu[k - 1 - i] / n_mean ** i
            for i in range(1, k)))
    return MomentVector(values=np.array(mu[:k_max + 1]),
                        mean_photon_number=float(n_mean))
