"""Photon-number moments and the nonclassicality witnesses Q and A3."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateStateError, TailTooHeavyError
from .fock import Channel, DensityMatrix, amplitude_decay, from_pure, phase_damping
from .states import DEFAULT_TOL, FockState, SqueezeParams, photon_subtracted

MOMENT_TAIL_TOL = 1e-8
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class MomentSet:
    """Factorial moments m[s-1] = <a^dag^s a^s> and powers mu[s-1] = <(a^dag a)^s>."""

    m: tuple
    mu: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(float(v) for v in self.m))
        object.__setattr__(self, "mu", tuple(float(v) for v in self.mu))
        if len(self.m) != len(self.mu) or not self.m:
            raise ValueError("m and mu must have the same non-zero length")

    @property
    def order(self) -> int:
        return len(self.m)


@dataclass(frozen=True)
class WitnessReport:
    """Q and A3 for one state. ``degenerate`` marks a vacuum-like state whose
    Q is reported as 0 by convention (its 0/0 limit under loss)."""

    q: float
    a3: float | None
    moments: MomentSet
    degenerate: bool = False

    @property
    def sub_poissonian(self) -> bool:
        return not self.degenerate and self.q < 0

    @property
    def a3_nonclassical(self) -> bool:
        return self.a3 is not None and -1 <= self.a3 < 0


def moments(rho: DensityMatrix, max_s: int = 4) -> MomentSet:
    """Moments up to order ``max_s`` (at most 4) from the Fock populations.

    Raises:
        TailTooHeavyError: n_max^max_s * tail_bound >= 1e-8.
    """
    if not 1 <= max_s <= 4:
        raise ValueError(f"max_s must be in 1..4, got {max_s}")
    weighted_tail = float(rho.n_max) ** max_s * rho.tail_bound
    if weighted_tail >= MOMENT_TAIL_TOL:
        raise TailTooHeavyError(
            f"n_max^{max_s} * tail = {weighted_tail:.3g} >= {MOMENT_TAIL_TOL:g}; "
            "rebuild the state with a tighter truncation tolerance"
        )
    pops = rho.populations
    n = np.arange(pops.size, dtype=np.float64)
    m, mu = [], []
    falling = np.ones_like(n)
    for s in range(1, max_s + 1):
        falling = falling * (n - (s - 1))
        m.append(float(np.dot(falling, pops)))
        mu.append(float(np.dot(n ** s, pops)))
    return MomentSet(tuple(m), tuple(mu))


def _q_from(ms: MomentSet) -> float:
    m1, m2 = ms.m[0], ms.m[1]
    if m1 <= DEGENERATE_TOL:
        raise DegenerateStateError(f"<n> = {m1:.3g}: Mandel Q undefined for a vacuum-like state")
    return (m2 - m1 * m1) / m1


def mandel_q(rho: DensityMatrix) -> float:
    """Q = (<a^dag^2 a^2> - <a^dag a>^2) / <a^dag a>; negative means sub-Poissonian."""
    return _q_from(moments(rho, 2))


def hankel3(values: Sequence[float]) -> np.ndarray:
    """[[1, v1, v2], [v1, v2, v3], [v2, v3, v4]] from (v1, v2, v3, v4)."""
    v1, v2, v3, v4 = values[:4]
    return np.array([[1.0, v1, v2], [v1, v2, v3], [v2, v3, v4]])


def det3(mat: np.ndarray) -> float:
    """Determinant by cofactor expansion along the first row."""
    (a, b, c), (d, e, f), (g, h, i) = mat
    return float(a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g))


def a3_from_moments(ms: MomentSet) -> float | None:
    """det m3 / (det mu3 - det m3); None when the denominator is below 1e-12."""
    if ms.order < 4:
        raise ValueError("A3 needs moments through order 4")
    dm = det3(hankel3(ms.m))
    dmu = det3(hankel3(ms.mu))
    den = dmu - dm
    if abs(den) < DEGENERATE_TOL:
        return None
    return dm / den


def a3_parameter(rho: DensityMatrix) -> float | None:
    return a3_from_moments(moments(rho, 4))


def witness_report(rho: DensityMatrix) -> WitnessReport:
    ms = moments(rho, 4)
    try:
        q, degenerate = _q_from(ms), False
    except DegenerateStateError:
        q, degenerate = 0.0, True
    return WitnessReport(q, a3_from_moments(ms), ms, degenerate)


def state_for_moments(params: SqueezeParams, p: int = 1, tol: float = DEFAULT_TOL, order: int = 4) -> FockState:
    """Build the state, tightening the truncation until order-``order`` moments are safe."""
    while True:
        state = photon_subtracted(params, p, tol)
        if float(state.n_max) ** order * state.tail_bound < MOMENT_TAIL_TOL:
            return state
        tol *= 1e-4


def subtracted_witnesses(params: SqueezeParams, p: int = 1) -> WitnessReport:
    return witness_report(from_pure(state_for_moments(params, p)))


def mandel_q_timeseries(state0: FockState, channel: Channel | str, times: Sequence[float]) -> np.ndarray:
    """Rows (t, Q(t)) with the state evolved from t = 0 to each time.

    A vacuum-like evolved state (<n> <= 1e-12) contributes Q = 0, the limit
    of Q = e^{-2kt} Q(0) under loss.
    """
    channel = Channel(channel)
    times = np.asarray(times, dtype=np.float64)
    if times.ndim != 1:
        raise ValueError("times must be a 1-D sequence")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted and non-negative")
    rho0 = from_pure(state0)
    out = np.empty((times.size, 2))
    for k, t in enumerate(times):
        if channel is Channel.AMPLITUDE:
            rho = amplitude_decay(rho0, t)
        elif channel is Channel.PHASE:
            rho = phase_damping(rho0, t)
        else:
            rho = rho0
        try:
            q = mandel_q(rho)
        except DegenerateStateError:
            q = 0.0
        out[k] = t, q
    return out


# --------------------------------------------------------------------------
# Thresholds
# --------------------------------------------------------------------------

def bisect_sign_change(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-4) -> tuple[float, float]:
    """Shrink [lo, hi] around a sign change of ``f`` until hi - lo <= tol."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if math.copysign(1, flo) == math.copysign(1, fhi):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0:
            return mid, mid
        if math.copysign(1, fmid) == math.copysign(1, flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return lo, hi


def q_of_xi(xi_mag: float, p: int = 1, theta: float = 0.0) -> float:
    return subtracted_witnesses(SqueezeParams.from_xi(xi_mag, theta), p).q


def a3_of_xi(xi_mag: float, p: int = 1, theta: float = 0.0) -> float:
    a3 = subtracted_witnesses(SqueezeParams.from_xi(xi_mag, theta), p).a3
    if a3 is None:
        raise DegenerateStateError(f"A3 undefined at |xi| = {xi_mag}")
    return a3


def q_threshold(lo: float = 0.1, hi: float = 0.9, p: int = 1, tol: float = 1e-4) -> tuple[float, float]:
    """Bracket of |xi| where Mandel Q changes sign."""
    return bisect_sign_change(lambda x: q_of_xi(x, p), lo, hi, tol)


def a3_threshold(lo: float = 0.1, hi: float = 0.9, p: int = 1, tol: float = 1e-4) -> tuple[float, float]:
    """Bracket of |xi| where A3 changes sign."""
    return bisect_sign_change(lambda x: a3_of_xi(x, p), lo, hi, tol)
