"""Truncated density matrices and their exact evolution under loss and dephasing.

Time enters only through the dimensionless products ``kappa_t`` (amplitude
decay) and ``kappa_p_t`` (phase damping). The loss channel follows

    d rho/dt = -kappa (a^dag a rho - 2 a rho a^dag + rho a^dag a)

so populations of |n> decay as exp(-2 kappa t n): note the factor 2. Initial
states must carry a truncation tail below ~1e-10 for the truncated sums of
the exact map to be accurate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NonHermitianError, StepSizeError
from .states import FockState

HERMITIAN_TOL = 1e-12
NEG_DIAG_TOL = 1e-12


class Channel(str, enum.Enum):
    NONE = "none"
    AMPLITUDE = "amplitude"
    PHASE = "phase"


@dataclass(frozen=True)
class DecayParams:
    """Elapsed dimensionless times for the two channels (one used per call)."""

    kappa_t: float = 0.0
    kappa_p_t: float = 0.0

    def __post_init__(self):
        for name in ("kappa_t", "kappa_p_t"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {value}")
            object.__setattr__(self, name, value)

    @property
    def x(self) -> float:
        """e^{-2 kt} / (1 - e^{-2 kt}); infinite at kt = 0."""
        if self.kappa_t == 0:
            return math.inf
        return math.exp(-2 * self.kappa_t) / -math.expm1(-2 * self.kappa_t)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian matrix rho[n, n'] over Fock states 0..n_max."""

    elements: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        rho = np.array(self.elements, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.size == 0:
            raise ValueError(f"density matrix must be square and non-empty, got shape {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise ValueError("density matrix has non-finite entries")
        asym = np.max(np.abs(rho - rho.conj().T))
        if asym > HERMITIAN_TOL:
            raise NonHermitianError(f"rho deviates from Hermitian by {asym:.3g}")
        if np.min(rho.diagonal().real) < -NEG_DIAG_TOL:
            raise ValueError("density matrix has negative populations")
        rho.setflags(write=False)
        object.__setattr__(self, "elements", rho)
        object.__setattr__(self, "tail_bound", float(self.tail_bound))

    @property
    def n_max(self) -> int:
        return self.elements.shape[0] - 1

    @property
    def populations(self) -> np.ndarray:
        return self.elements.diagonal().real.copy()

    @property
    def trace(self) -> float:
        return float(np.sum(self.elements.diagonal().real))

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.elements, self.elements)))


def from_pure(state: FockState) -> DensityMatrix:
    """Projector |psi><psi| of a normalised pure state."""
    norm2 = float(np.sum(state.populations))
    if abs(norm2 - 1) > max(10 * state.tail_bound, 1e-10):
        raise ValueError(f"state is not normalised (norm^2 = {norm2:.15g})")
    c = np.asarray(state.amplitudes)
    upper = np.triu(np.outer(c, c.conj()), 1)
    # mirror so the result is Hermitian bit for bit
    rho = upper + upper.conj().T + np.diag(np.abs(c) ** 2)
    return DensityMatrix(rho, state.tail_bound)


def _check_time(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be finite and non-negative, got {value}")
    return value


def amplitude_decay(rho0: DensityMatrix, kappa_t: float) -> DensityMatrix:
    """Exact zero-temperature loss map after dimensionless time ``kappa_t``.

    Each element receives the population flowing down from every higher
    diagonal, r steps away, with weight sqrt(C(n+r,r) C(n'+r,r)) (1-e^{-2kt})^r
    e^{-kt(n+n')}. The r-sum stops at the matrix cutoff.
    """
    kappa_t = _check_time(kappa_t, "kappa_t")
    if kappa_t == 0:
        return rho0
    return DensityMatrix(_kernels.amplitude_decay(rho0.elements, kappa_t), rho0.tail_bound)


def phase_damping(rho0: DensityMatrix, kappa_p_t: float) -> DensityMatrix:
    """Exact dephasing: rho[n, n'] *= exp(-(n - n')^2 kappa_p t); diagonal untouched."""
    kappa_p_t = _check_time(kappa_p_t, "kappa_p_t")
    n = np.arange(rho0.n_max + 1)
    factor = np.exp(-((n[:, None] - n[None, :]) ** 2) * kappa_p_t)
    return DensityMatrix(rho0.elements * factor, rho0.tail_bound)


def evolve(rho0: DensityMatrix, channel: Channel | str, t: float) -> DensityMatrix:
    channel = Channel(channel)
    if channel is Channel.AMPLITUDE:
        return amplitude_decay(rho0, t)
    if channel is Channel.PHASE:
        return phase_damping(rho0, t)
    return rho0


# --------------------------------------------------------------------------
# RK4 oracle
# --------------------------------------------------------------------------

STEP_RULE = 0.1
TRACE_DRIFT_TOL = 1e-6


def _lindblad(channel: Channel, dim: int):
    """Generator L(rho) = -(A^dag A rho - 2 A rho A^dag + rho A^dag A) in the truncated basis."""
    if channel is Channel.PHASE:
        # diagonal jump: the operator products reduce to row/column scalings
        d = np.arange(dim, dtype=np.float64)
        dd = d * d
        coef = dd[:, None] - 2 * d[:, None] * d[None, :] + dd[None, :]

        def rhs_diag(rho):
            return -coef * rho

        return rhs_diag
    jump = np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), 1).astype(np.complex128)
    jd = jump.conj().T
    jdj = jd @ jump

    def rhs(rho):
        return -(jdj @ rho - 2 * jump @ rho @ jd + rho @ jdj)

    return rhs


def min_steps(channel: Channel | str, t: float, n_max: int) -> int:
    """Smallest RK4 step count satisfying the stability rule.

    Amplitude channel: dt * N_max < 0.1. Phase channel: dt * N_max^2 < 0.1,
    because its fastest coherence decays at rate N_max^2.
    """
    channel = Channel(channel)
    rate = n_max if channel is Channel.AMPLITUDE else n_max ** 2
    return max(1, math.floor(t * max(rate, 1) / STEP_RULE) + 1)


def ode_evolve_oracle(
    rho0: DensityMatrix, channel: Channel | str, t: float, steps: int | None = None
) -> DensityMatrix:
    """Integrate the master equation with classical RK4 (independent oracle).

    Raises:
        StepSizeError: ``steps`` violates the rule of :func:`min_steps`, or the
            trace drifts by more than 1e-6 during integration.
    """
    channel = Channel(channel)
    if channel is Channel.NONE:
        raise ValueError("ode_evolve_oracle needs the amplitude or phase channel")
    t = _check_time(t, "t")
    need = min_steps(channel, t, rho0.n_max)
    if steps is None:
        steps = need
    elif steps < need:
        raise StepSizeError(f"{steps} steps too coarse for t={t:g}, N_max={rho0.n_max}; need >= {need}")
    rhs = _lindblad(channel, rho0.n_max + 1)
    rho = np.array(rho0.elements)
    tr0 = np.trace(rho).real
    if t > 0:
        h = t / steps
        for _ in range(steps):
            k1 = rhs(rho)
            k2 = rhs(rho + 0.5 * h * k1)
            k3 = rhs(rho + 0.5 * h * k2)
            k4 = rhs(rho + h * k3)
            rho = rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
            drift = abs(np.trace(rho).real - tr0)
            if drift > TRACE_DRIFT_TOL or not np.all(np.isfinite(rho)):
                raise StepSizeError(f"trace drift {drift:.3g} during RK4; reduce step size")
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho, rho0.tail_bound)
