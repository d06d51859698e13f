"""Squeezed vacuum and photon-subtracted squeezed vacuum in the Fock basis.

Squeezing convention: S(zeta) = exp[(zeta a^dag^2 - zeta^* a^2)/2] with
zeta = r e^{i theta}, so S(zeta)|0> is proportional to exp(xi a^dag^2 / 2)|0>
with xi = e^{i theta} tanh(r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DegenerateStateError, TruncationError

DEFAULT_TOL = 1e-12
HARD_CAP = 4096


@dataclass(frozen=True)
class SqueezeParams:
    """Complex squeezing parameter zeta = r e^{i theta}.

    ``theta`` is reduced to [0, 2 pi) on construction.
    """

    r: float
    theta: float = 0.0

    def __post_init__(self):
        r = float(self.r)
        theta = float(self.theta)
        if not (math.isfinite(r) and math.isfinite(theta)):
            raise ValueError("squeezing parameters must be finite")
        if r < 0:
            raise ValueError(f"squeezing magnitude must be non-negative, got r={r}")
        theta = theta % (2 * math.pi)
        if theta >= 2 * math.pi:  # -tiny % 2pi rounds up to 2pi
            theta = 0.0
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_xi(cls, xi_mag: float, theta: float = 0.0) -> SqueezeParams:
        if not 0 <= xi_mag < 1:
            raise ValueError(f"|xi| must lie in [0, 1), got {xi_mag}")
        return cls(math.atanh(xi_mag), theta)

    @property
    def zeta(self) -> complex:
        return self.r * complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def xi_mag(self) -> float:
        return math.tanh(self.r)

    @property
    def xi(self) -> complex:
        return self.xi_mag * complex(math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class FockState:
    """Normalised pure state truncated to photon numbers 0..n_max.

    ``tail_bound`` bounds the probability mass that the truncation discards.
    """

    amplitudes: np.ndarray
    tail_bound: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 1-D array")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.size - 1

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.populations)))

    def padded(self, n_max: int) -> FockState:
        """Same state embedded in a larger (or equal) Fock cutoff."""
        if n_max < self.n_max:
            raise ValueError("padded() cannot shrink the cutoff")
        amps = np.zeros(n_max + 1, dtype=np.complex128)
        amps[: self.n_max + 1] = self.amplitudes
        return FockState(amps, self.tail_bound, self.label)


def vacuum(n_max: int = 0) -> FockState:
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[0] = 1.0
    return FockState(amps, 0.0, "vacuum")


def fock(n: int, n_max: int | None = None) -> FockState:
    """Number state |n>."""
    n_max = n if n_max is None else n_max
    if not 0 <= n <= n_max:
        raise ValueError("need 0 <= n <= n_max")
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[n] = 1.0
    return FockState(amps, 0.0, f"fock({n})")


def _log_populations(xi_mag: float, p: int, n: np.ndarray) -> np.ndarray:
    """Unnormalised log |<n| a^p exp(xi a^dag^2/2)|0>|^2 for n = 2k - p >= 0."""
    k = (n + p) // 2
    two_k = 2 * k
    log_sv = 2 * k * math.log(xi_mag / 2) + gammaln(two_k + 1) - 2 * gammaln(k + 1)
    return log_sv + gammaln(two_k + 1) - gammaln(n + 1)


def _step_ratio(xi_mag: float, p: int, n: np.ndarray) -> np.ndarray:
    """Population ratio P_{n+2}/P_n; non-increasing in n for p >= 1, below |xi|^2 for p = 0."""
    xi2 = xi_mag * xi_mag
    if p == 0:
        return np.full(n.shape, xi2)
    return np.maximum(xi2 * (n + p + 1.0) ** 2 / ((n + 1.0) * (n + 2.0)), xi2)


def _choose_cutoff(xi_mag: float, p: int, tol: float, hard_cap: int):
    n = np.arange(p % 2, hard_cap + 1, 2)
    logp = _log_populations(xi_mag, p, n)
    ratio = _step_ratio(xi_mag, p, n)
    log_kept = np.logaddexp.accumulate(logp)
    # geometric series bound: tail <= P_last * rho / (1 - rho)
    log_geo = np.full(n.shape, np.inf)
    conv = ratio < 1
    log_geo[conv] = np.log(ratio[conv]) - np.log1p(-ratio[conv])
    log_tail = logp + log_geo - log_kept
    ok = np.nonzero(log_tail < math.log(tol))[0]
    if ok.size == 0:
        raise TruncationError(
            f"truncation tolerance {tol:g} unreachable below hard cap n_max={hard_cap} "
            f"(|xi|={xi_mag:.6g}, p={p})"
        )
    i = ok[0]
    return int(n[i]), float(math.exp(log_tail[i]))


def _tail_at(xi_mag: float, p: int, n_max: int) -> float:
    n = np.arange(p % 2, n_max + 1, 2)
    if n.size == 0:
        return 1.0
    logp = _log_populations(xi_mag, p, n)
    rho = float(_step_ratio(xi_mag, p, n[-1:])[0])
    if rho >= 1:
        return 1.0
    return float(math.exp(logp[-1] + math.log(rho) - math.log1p(-rho) - logsumexp(logp)))


def _fix_global_phase(amps: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(amps)))
    out = amps * (abs(amps[i]) / amps[i])
    out[i] = abs(amps[i])
    return out


def photon_subtracted(
    params: SqueezeParams,
    p: int = 1,
    tol: float = DEFAULT_TOL,
    n_max: int | None = None,
    hard_cap: int = HARD_CAP,
) -> FockState:
    """Normalised a^p S(zeta)|0>; ``p = 0`` gives the squeezed vacuum.

    Args:
        params: squeezing parameters.
        p: number of subtracted photons.
        tol: bound on the discarded probability mass when ``n_max`` is chosen
            automatically.
        n_max: force a cutoff instead of choosing one from ``tol``.
        hard_cap: largest cutoff the automatic choice may use.

    Raises:
        DegenerateStateError: p >= 1 on the vacuum (r = 0).
        TruncationError: ``tol`` cannot be met below ``hard_cap``.
    """
    p = int(p)
    if p < 0:
        raise ValueError(f"p must be non-negative, got {p}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    xi_mag = params.xi_mag
    label = f"subtracted(r={params.r:.17g}, theta={params.theta:.17g}, p={p})"
    if xi_mag == 0.0:
        if p > 0:
            raise DegenerateStateError("a^p annihilates the vacuum: zero-norm state")
        return FockState(vacuum(0 if n_max is None else n_max).amplitudes, 0.0, label)
    if n_max is None:
        n_max, tail = _choose_cutoff(xi_mag, p, tol, hard_cap)
    else:
        if n_max < p % 2:
            raise ValueError("n_max too small to hold any amplitude of this parity")
        tail = _tail_at(xi_mag, p, n_max)

    n = np.arange(p % 2, n_max + 1, 2)
    logp = _log_populations(xi_mag, p, n)
    mags = np.exp(0.5 * (logp - logsumexp(logp)))
    k = (n + p) // 2
    amps = np.zeros(n_max + 1, dtype=np.complex128)
    amps[n] = mags * np.exp(1j * params.theta * k)
    amps /= np.linalg.norm(amps)
    return FockState(_fix_global_phase(amps), tail, label)


def squeezed_vacuum(
    params: SqueezeParams, tol: float = DEFAULT_TOL, n_max: int | None = None
) -> FockState:
    """Normalised S(zeta)|0>, cut off where the geometric tail bound drops below ``tol``."""
    return photon_subtracted(params, 0, tol, n_max)


def annihilate(state: FockState, times: int = 1) -> FockState:
    """Apply a^times to ``state`` and renormalise (cutoff shrinks by ``times``)."""
    amps = np.asarray(state.amplitudes)
    for _ in range(times):
        amps = amps[1:] * np.sqrt(np.arange(1, amps.size))
    norm = np.linalg.norm(amps)
    if amps.size == 0 or norm == 0:
        raise DegenerateStateError("annihilation produced a zero-norm state")
    return FockState(_fix_global_phase(amps / norm), state.tail_bound, state.label)
