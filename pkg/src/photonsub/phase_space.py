"""Wigner functions: closed forms, the Fock-basis oracle, grids and negativity.

Phase-space coordinate alpha = x + i p; W is normalised so that
integral W dx dp = 1 and the vacuum is (2/pi) exp(-2|alpha|^2).
All point evaluators are vectorised over arrays of complex ``alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize
from skimage.measure import find_contours

from . import _kernels
from .errors import NonHermitianError
from .fock import Channel, DensityMatrix, amplitude_decay, from_pure, phase_damping
from .states import DEFAULT_TOL, FockState, SqueezeParams, photon_subtracted

TWO_OVER_PI = 2.0 / math.pi
IMAG_RESIDUE_TOL = 1e-6
MIN_RESOLUTION = 64


def _alpha(alpha) -> np.ndarray:
    a = np.asarray(alpha, dtype=np.complex128)
    if not np.all(np.isfinite(a)):
        raise ValueError("phase-space points must be finite")
    return a


def _scalar_or_array(values: np.ndarray, like):
    return float(values) if np.ndim(like) == 0 else values


def squeezed_coordinate(params: SqueezeParams, alpha):
    """alpha cosh r - alpha^* e^{i theta} sinh r."""
    a = _alpha(alpha)
    return a * math.cosh(params.r) - np.conj(a) * np.exp(1j * params.theta) * math.sinh(params.r)


def negativity_condition(params: SqueezeParams, alpha):
    """|alpha~|^2 - 1/4; the single-subtracted state is negative exactly where this is < 0."""
    return _scalar_or_array(np.abs(squeezed_coordinate(params, alpha)) ** 2 - 0.25, alpha)


def wigner_squeezed_vacuum(params: SqueezeParams, alpha):
    u = np.abs(squeezed_coordinate(params, alpha)) ** 2
    return _scalar_or_array(TWO_OVER_PI * np.exp(-2 * u), alpha)


def wigner_subtracted_t0(params: SqueezeParams, alpha):
    """Single-photon-subtracted squeezed vacuum, (2/pi)(4|alpha~|^2 - 1) exp(-2|alpha~|^2)."""
    u = np.abs(squeezed_coordinate(params, alpha)) ** 2
    return _scalar_or_array(TWO_OVER_PI * (4 * u - 1) * np.exp(-2 * u), alpha)


def _decay_terms(params: SqueezeParams, kappa_t: float, alpha):
    kappa_t = float(kappa_t)
    if not kappa_t >= 0:
        raise ValueError(f"kappa_t must be non-negative, got {kappa_t}")
    eta, loss = math.exp(-2 * kappa_t), -math.expm1(-2 * kappa_t)
    a = _alpha(alpha)
    c2, s2 = math.cosh(2 * params.r), math.sinh(2 * params.r)
    g = 1 + 4 * eta * loss * math.sinh(params.r) ** 2
    mod2 = np.abs(a) ** 2
    quad = np.real(np.exp(1j * params.theta) * np.conj(a) ** 2)
    exponent = (-2 * (loss + eta * c2) * mod2 + 2 * eta * s2 * quad) / g
    return eta, loss, c2, s2, g, mod2, quad, exponent


def wigner_squeezed_decayed(params: SqueezeParams, kappa_t: float, alpha):
    """Squeezed vacuum after amplitude decay; Gaussian at all times."""
    *_, g, _, _, exponent = _decay_terms(params, kappa_t, alpha)
    return _scalar_or_array(TWO_OVER_PI / math.sqrt(g) * np.exp(exponent), alpha)


def wigner_decayed(params: SqueezeParams, kappa_t: float, alpha):
    """Single-photon-subtracted squeezed vacuum after amplitude decay ``kappa_t``.

    With eta = e^{-2kt}, T = 1 - eta, G = 1 + 4 eta T sinh^2 r and
    R = Re(e^{i theta} alpha^{*2}):

        W = 2/(pi sqrt G) exp(E) [(1 - 2 eta)/G + 4 eta B / G^2]
        E = [-2 (T + eta cosh 2r)|alpha|^2 + 2 eta sinh 2r R] / G
        B = 2[(T cosh 2r + eta)|alpha|^2 + T sinh 2r R](T + eta cosh 2r)
            - G (cosh 2r |alpha|^2 + sinh 2r R)

    This is the Gaussian-smoothed initial Wigner function written without the
    1/(1 - e^{-2kt}) factors, so it is regular at kt = 0 (where it reduces to
    the t = 0 closed form) and at kt = inf (vacuum). It is negative at the
    origin exactly while kt < ln(2)/2.
    """
    eta, loss, c2, s2, g, mod2, quad, exponent = _decay_terms(params, kappa_t, alpha)
    b = 2 * ((loss * c2 + eta) * mod2 + loss * s2 * quad) * (loss + eta * c2) - g * (c2 * mod2 + s2 * quad)
    poly = (loss - eta) / g + 4 * eta * b / g ** 2
    return _scalar_or_array(TWO_OVER_PI / math.sqrt(g) * poly * np.exp(exponent), alpha)


def origin_wigner_decayed(params: SqueezeParams, kappa_t: float) -> float:
    """W(0) of the decayed single-subtracted state: (2/pi)(1 - 2e^{-2kt}) / G^{3/2}."""
    return float(wigner_decayed(params, kappa_t, 0.0))


def wigner_phase_damped_longtime(state0: FockState, alpha):
    """Fully dephased state sum_n rho_nn(0) |n><n|: a Laguerre sum over Fock Wigner functions."""
    a = _alpha(alpha)
    values = _kernels.diag_wigner(state0.populations, a).reshape(a.shape)
    return _scalar_or_array(values, alpha)


def wigner_from_density_matrix(rho: DensityMatrix, alpha):
    """Fock-basis oracle: W = sum_{n,n'} rho[n,n'] W_{|n><n'|}(alpha).

    Raises:
        NonHermitianError: imaginary residue above 1e-6.
    """
    a = _alpha(alpha)
    values = _kernels.fock_wigner(rho.elements, a).reshape(a.shape)
    residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if residue > IMAG_RESIDUE_TOL:
        raise NonHermitianError(f"Wigner imaginary residue {residue:.3g}: input not Hermitian")
    return _scalar_or_array(values.real, alpha)


# --------------------------------------------------------------------------
# Evaluators
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WignerEvaluator:
    """Immutable vectorised map alpha -> W(alpha) with a description of its route."""

    func: Callable[[np.ndarray], np.ndarray]
    route: str
    metadata: dict = field(default_factory=dict, compare=False)

    def __call__(self, alpha):
        a = _alpha(alpha)
        return np.asarray(self.func(a), dtype=np.float64).reshape(a.shape)


def make_evaluator(
    params: SqueezeParams,
    p: int = 1,
    channel: Channel | str = Channel.NONE,
    t: float = 0.0,
    tol: float = DEFAULT_TOL,
) -> WignerEvaluator:
    """Pick the closed form when one exists (p <= 1, loss or none), else the Fock oracle."""
    channel = Channel(channel)
    t = float(t)
    if not t >= 0:
        raise ValueError(f"time must be non-negative, got {t}")
    meta = {"r": params.r, "theta": params.theta, "p": int(p), "channel": channel.value, "t": t}
    if channel is Channel.NONE or t == 0:
        if p == 0:
            return WignerEvaluator(lambda a: wigner_squeezed_vacuum(params, a), "closed-form", meta)
        if p == 1:
            return WignerEvaluator(lambda a: wigner_subtracted_t0(params, a), "closed-form", meta)
    if channel is Channel.AMPLITUDE:
        if p == 0:
            return WignerEvaluator(lambda a: wigner_squeezed_decayed(params, t, a), "closed-form", meta)
        if p == 1:
            return WignerEvaluator(lambda a: wigner_decayed(params, t, a), "closed-form", meta)
    state = photon_subtracted(params, p, tol)
    if channel is Channel.PHASE and math.isinf(t):
        return WignerEvaluator(lambda a: wigner_phase_damped_longtime(state, a), "laguerre-sum", meta)
    rho = from_pure(state)
    if channel is Channel.AMPLITUDE:
        rho = amplitude_decay(rho, t)
    elif channel is Channel.PHASE:
        rho = phase_damping(rho, t)
    return WignerEvaluator(lambda a: wigner_from_density_matrix(rho, a), "fock", meta)


# --------------------------------------------------------------------------
# Grids
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Rectangular window; ``cells`` intervals per axis, i.e. cells + 1 nodes.

    An even cell count over a symmetric window puts a node on the origin.
    """

    x_range: tuple[float, float] = (-3.0, 3.0)
    p_range: tuple[float, float] = (-3.0, 3.0)
    cells: tuple[int, int] = (256, 256)

    def __post_init__(self):
        for lo, hi in (self.x_range, self.p_range):
            if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
                raise ValueError(f"invalid window ({lo}, {hi})")
        if min(self.cells) < 1:
            raise ValueError("need at least one cell per axis")

    @classmethod
    def square(cls, half_width: float = 3.0, cells: int = 256) -> GridSpec:
        return cls((-half_width, half_width), (-half_width, half_width), (cells, cells))

    @property
    def x(self) -> np.ndarray:
        return np.linspace(*self.x_range, self.cells[0] + 1)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(*self.p_range, self.cells[1] + 1)


@dataclass(frozen=True)
class WignerGrid:
    """Samples values[i, j] = W(x[i] + i p[j])."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("x", "p", "values"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.values.shape != (self.x.size, self.p.size):
            raise ValueError(f"values shape {self.values.shape} does not match axes ({self.x.size}, {self.p.size})")

    def _weights(self) -> np.ndarray:
        def trap(axis):
            w = np.full(axis.size, (axis[-1] - axis[0]) / max(axis.size - 1, 1))
            w[0] *= 0.5
            w[-1] *= 0.5
            return w

        return np.outer(trap(self.x), trap(self.p))

    def integral(self) -> float:
        """Trapezoid estimate of integral W dx dp."""
        return float(np.sum(self._weights() * self.values))

    def negative_volume(self) -> float:
        return float(np.sum(self._weights() * np.maximum(-self.values, 0.0)))

    def argmin(self) -> tuple[float, complex]:
        i, j = np.unravel_index(int(np.argmin(self.values)), self.values.shape)
        return float(self.values[i, j]), complex(self.x[i], self.p[j])


def sample_grid(evaluator, spec: GridSpec = GridSpec(), metadata: dict | None = None) -> WignerGrid:
    x, p = spec.x, spec.p
    alpha = x[:, None] + 1j * p[None, :]
    values = np.asarray(evaluator(alpha), dtype=np.float64).reshape(alpha.shape)
    meta = dict(getattr(evaluator, "metadata", {}) or {})
    meta.update(metadata or {})
    return WignerGrid(x, p, values, meta)


# --------------------------------------------------------------------------
# Negativity
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NegativityReport:
    min_value: float
    min_location: complex
    grid_min_value: float
    negative_volume: float
    contours: tuple = ()
    grid: WignerGrid | None = field(default=None, repr=False)

    @property
    def is_negative(self) -> bool:
        return self.negative_volume > 0


def _refine_minimum(evaluator, start: complex, step: float, w0: float):
    def f(v):
        return float(evaluator(complex(v[0], v[1])))

    res = minimize(
        f, [start.real, start.imag], method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "initial_simplex": [
            [start.real, start.imag], [start.real + step, start.imag], [start.real, start.imag + step]]},
    )
    if res.fun < w0 and abs(complex(*res.x) - start) < 4 * step:
        return float(res.fun), complex(*res.x)
    return w0, start


def zero_contours(grid: WignerGrid) -> tuple:
    """Zero level set of the grid (marching squares) as complex polylines."""
    if not np.any(grid.values < 0):
        return ()
    dx = (grid.x[-1] - grid.x[0]) / (grid.x.size - 1)
    dp = (grid.p[-1] - grid.p[0]) / (grid.p.size - 1)
    out = []
    for c in find_contours(grid.values, 0.0):
        out.append((grid.x[0] + c[:, 0] * dx) + 1j * (grid.p[0] + c[:, 1] * dp))
    return tuple(out)


def negativity_analysis(evaluator, window: GridSpec = GridSpec(), refine: bool = True) -> NegativityReport:
    """Minimum of W, negative volume integral_{W<0} |W|, and the W = 0 contour.

    The grid minimum is polished with a local Nelder-Mead search so the
    reported minimum does not depend on whether a node hits the extremum.
    """
    if min(window.cells) < MIN_RESOLUTION:
        raise ValueError(f"negativity analysis needs at least {MIN_RESOLUTION}x{MIN_RESOLUTION} cells")
    grid = sample_grid(evaluator, window)
    grid_min, loc = grid.argmin()
    min_value = grid_min
    if refine:
        step = min(grid.x[1] - grid.x[0], grid.p[1] - grid.p[0])
        min_value, loc = _refine_minimum(evaluator, loc, step, grid_min)
    return NegativityReport(
        min_value=min_value,
        min_location=loc,
        grid_min_value=grid_min,
        negative_volume=grid.negative_volume(),
        contours=zero_contours(grid),
        grid=grid,
    )
