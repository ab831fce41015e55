"""Photon-number-resolved Kraus map of the resonant Jaynes-Cummings gate.

The basis ordering is fixed throughout the package: the excited state is
the FIRST basis vector, |1> = (1, 0)^T and |0> = (0, 1)^T.  All matrix
literals follow this ordering; reordering it silently is the most likely
way to corrupt the channel, so every operator is written against the
explicit entry pattern

    M_n = [[ C_n cos(k sqrt(n+1)),  -i C_{n+1} sin(k sqrt(n+1)) ],
           [ -i C_{n-1} sin(k sqrt(n)),  C_n cos(k sqrt(n)) ]]

with C_{-1} = 0 and amplitudes outside the field window treated as zero.
The Kraus index runs one step past the field window on both sides, which
keeps trace preservation exact for number states and charges only the
Poisson tail to the completeness residual for coherent states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock_field import DEFAULT_TAIL_TOL, FieldState, make_coherent

#: Basis vectors, excited first.
EXCITED = np.array([1.0, 0.0])
GROUND = np.array([0.0, 1.0])


@dataclass(frozen=True)
class QubitState:
    """2x2 density matrix in the (excited, ground) basis."""

    rho: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho", np.asarray(self.rho, dtype=complex))
        if self.rho.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got {self.rho.shape}")
        self.rho.flags.writeable = False

    @classmethod
    def pure(cls, theta0: float) -> "QubitState":
        """Pure state R(theta0)|0> = (sin theta0, cos theta0)^T."""
        v = np.array([math.sin(theta0), math.cos(theta0)], dtype=complex)
        return cls(rho=np.outer(v, v.conj()))

    @classmethod
    def ground(cls) -> "QubitState":
        return cls.pure(0.0)

    @classmethod
    def excited(cls) -> "QubitState":
        return cls.pure(math.pi / 2)

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls(rho=0.5 * np.eye(2, dtype=complex))

    @classmethod
    def from_matrix(cls, matrix, atol: float = 1e-12) -> "QubitState":
        """Wrap and validate an externally supplied density matrix."""
        state = cls(rho=np.array(matrix, dtype=complex))
        state.validate(atol)
        return state

    @property
    def excited_population(self) -> float:
        return float(self.rho[0, 0].real)

    def validate(self, atol: float = 1e-12) -> None:
        """Raise ValueError unless Hermitian, unit-trace and PSD within atol."""
        herm = np.max(np.abs(self.rho - self.rho.conj().T))
        if herm > atol:
            raise ValueError(f"density matrix not Hermitian within {atol}: {herm:.3e}")
        tr = abs(self.rho.trace() - 1.0)
        if tr > atol:
            raise ValueError(f"density matrix trace deviates by {tr:.3e}")
        eigs = np.linalg.eigvalsh(0.5 * (self.rho + self.rho.conj().T))
        if eigs.min() < -atol:
            raise ValueError(f"density matrix not PSD: min eigenvalue {eigs.min():.3e}")


@dataclass(frozen=True)
class PulseSpec:
    """Pulse parametrization: coupling-time product and half pulse area.

    ``kappa`` is the dimensionless coupling-time product; ``vartheta`` is
    the half pulse area kappa*sqrt(N) against a field with mean photon
    number N.  ``mode`` records how the value was chosen (see
    error_metrics.resolve_pulse); specs built from explicit numbers carry
    mode "explicit".  Either number may be left None and derived against
    a concrete field.
    """

    kappa: float | None = None
    vartheta: float | None = None
    mode: str = "explicit"

    @classmethod
    def from_kappa(cls, kappa: float, n_mean: float | None = None) -> "PulseSpec":
        vartheta = None if n_mean is None else kappa * math.sqrt(n_mean)
        return cls(kappa=float(kappa), vartheta=vartheta)

    @classmethod
    def from_vartheta(cls, vartheta: float, n_mean: float, mode: str = "explicit") -> "PulseSpec":
        if n_mean <= 0:
            raise ValueError("deriving kappa from vartheta needs a positive mean photon number")
        return cls(kappa=float(vartheta) / math.sqrt(n_mean),
                   vartheta=float(vartheta), mode=mode)

    @property
    def is_resolved(self) -> bool:
        return self.kappa is not None or self.vartheta is not None

    def kappa_for(self, field: FieldState) -> float:
        """Coupling-time product to use against ``field``."""
        if self.kappa is not None:
            return self.kappa
        if self.vartheta is None:
            raise ValueError(f"pulse spec (mode={self.mode!r}) carries no kappa or vartheta; "
                             "resolve it against a mean photon number first")
        n_mean = field.mean_photon_number
        if n_mean <= 0:
            raise ValueError("cannot derive kappa from vartheta for a zero-photon field")
        return self.vartheta / math.sqrt(n_mean)

    def vartheta_for(self, field: FieldState) -> float:
        """Half pulse area against ``field``."""
        if self.vartheta is not None:
            return self.vartheta
        return self.kappa_for(field) * math.sqrt(field.mean_photon_number)


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators M_n of one pulse, indexed by the photon number n.

    ``operators[i]`` is M_{n_start + i}.  Immutable after construction;
    safe to share across threads.
    """

    operators: np.ndarray  # shape (K, 2, 2), complex
    n_start: int
    field: FieldState
    pulse: PulseSpec

    def __post_init__(self):
        object.__setattr__(self, "operators", np.asarray(self.operators, dtype=complex))
        self.operators.flags.writeable = False

    def __len__(self) -> int:
        return self.operators.shape[0]

    def indices(self) -> np.ndarray:
        return np.arange(self.n_start, self.n_start + len(self))

    def operator(self, n: int) -> np.ndarray:
        """M_n; zero matrix outside the built index range."""
        if n < self.n_start or n >= self.n_start + len(self):
            return np.zeros((2, 2), dtype=complex)
        return self.operators[n - self.n_start]

    def completeness_residual(self) -> float:
        """Max-entry norm of sum_n M_n^dag M_n - I."""
        gram = np.einsum("nji,njk->ik", self.operators.conj(), self.operators)
        return float(np.max(np.abs(gram - np.eye(2))))

    def to_json_rows(self) -> list[dict]:
        rows = []
        for n, op in zip(self.indices(), self.operators):
            rows.append({
                "n": int(n),
                "M": [[float(op[i, j].real), float(op[i, j].imag)]
                      for i in range(2) for j in range(2)],
            })
        return rows


def build_kraus(field: FieldState, pulse: PulseSpec) -> KrausSet:
    """Populate the Kraus family of one pulse against ``field``.

    The index range is [max(0, window_lo - 1), window_hi + 1]: the two
    extra operators carry the couplings C_{lo} and C_{hi} into the levels
    just outside the window and are exactly what trace preservation needs
    for number states.
    """
    kappa = pulse.kappa_for(field)
    if not math.isfinite(kappa):
        raise ValueError(f"kappa must be finite, got {kappa}")

    lo, hi = field.n_offset, field.n_max
    amp = field.amplitudes()
    start = max(0, lo - 1)
    ns = np.arange(start, hi + 2)

    def amp_at(offset: int) -> np.ndarray:
        idx = ns + offset - lo
        out = np.zeros(ns.shape[0], dtype=complex)
        valid = (idx >= 0) & (idx < amp.shape[0])
        out[valid] = amp[idx[valid]]
        return out

    c_here = amp_at(0)
    c_up = amp_at(+1)
    c_down = amp_at(-1)
    root_up = np.sqrt(ns + 1.0)
    root_here = np.sqrt(ns.astype(float))

    ops = np.empty((ns.shape[0], 2, 2), dtype=complex)
    ops[:, 0, 0] = c_here * np.cos(kappa * root_up)
    ops[:, 0, 1] = -1j * c_up * np.sin(kappa * root_up)
    ops[:, 1, 0] = -1j * c_down * np.sin(kappa * root_here)
    ops[:, 1, 1] = c_here * np.cos(kappa * root_here)
    return KrausSet(operators=ops, n_start=int(start), field=field, pulse=pulse)


def apply_channel(rho: QubitState, kraus: KrausSet) -> QubitState:
    """CPTP map rho -> sum_n M_n rho M_n^dag.

    The photon-index sum uses numpy's pairwise reduction over ascending n;
    for a fixed window this is a fixed summation order, so repeated calls
    are bitwise identical.
    """
    ops = kraus.operators
    sandwich = ops @ rho.rho @ ops.conj().transpose(0, 2, 1)
    return QubitState(rho=sandwich.sum(axis=0))


def bloch_rotation(vartheta: float) -> np.ndarray:
    """Classical Bloch rotation R = [[cos, sin], [-sin, cos]]."""
    c, s = math.cos(vartheta), math.sin(vartheta)
    return np.array([[c, s], [-s, c]])


def classical_limit_distance(rho0: QubitState, n_mean: float, vartheta: float,
                             tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Max-entry distance between the exact channel and the Bloch rotation.

    The channel uses a coherent field with phase pi/2 (the choice that
    makes the infinite-N limit a plain rotation rather than a conjugated
    one).  Scales as 1/N for fixed vartheta.
    """
    if n_mean < 1:
        raise ValueError(f"mean photon number must be >= 1, got {n_mean}")
    field = make_coherent(n_mean, phase=math.pi / 2, tail_tol=tail_tol)
    pulse = PulseSpec.from_vartheta(vartheta, n_mean)
    evolved = apply_channel(rho0, build_kraus(field, pulse))
    rot = bloch_rotation(vartheta)
    target = rot @ rho0.rho @ rot.T
    return float(np.max(np.abs(evolved.rho - target)))
