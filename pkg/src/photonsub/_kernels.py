"""Hot numeric kernels, each in a numba loop form and a numpy vector form.

The public wrappers at the bottom dispatch on ``_backend.BACKEND``. Both forms
are importable directly so tests and the benchmark can compare them.

Wigner convention: W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^dag] with P the
parity operator, so the vacuum is (2/pi) exp(-2|alpha|^2).

Matrix elements w[m, m+k] = (pi/2) W_{|m><m+k|}(a), with W_{|n><m|} the complex
conjugate of W_{|m><n|}, equal

    (-1)^m sqrt(m!/(m+k)!) (2a)^k exp(-2|a|^2) L_m^(k)(4|a|^2).

They are generated along each off-diagonal k by the three-term Laguerre
recurrence in the degree m, normalised so no factorial is ever formed
(y = 4|a|^2):

    w[0, k]       = w[0, k-1] * 2a / sqrt(k),        w[0, 0] = exp(-y/2)
    w[m+1, m+1+k] = -[(2m+k+1-y) w[m, m+k] + sqrt(m(m+k)) w[m-1, m-1+k]]
                    / sqrt((m+1)(m+k+1))

Every element has modulus <= 1 and the forward recurrence stays at machine
precision for cutoffs of several hundred (checked against 60-digit mpmath).
The row/column sweep used by some toolkits loses all accuracy near n ~ 150
on the anti-squeezed axis, which is why it is not used here.
"""

import math

import numpy as np
from scipy.special import gammaln

from . import _backend
from ._backend import njit

TWO_OVER_PI = 2.0 / math.pi


# --------------------------------------------------------------------------
# Wigner function of a full density matrix
# --------------------------------------------------------------------------

@njit
def fock_wigner_loop(rho, alphas):
    # same recurrence as the vector form, fused into one pass over the points
    dim = rho.shape[0]
    npts = alphas.shape[0]
    a2 = np.empty(npts, dtype=np.complex128)
    y = np.empty(npts, dtype=np.float64)
    head = np.empty(npts, dtype=np.complex128)
    for j in range(npts):
        a2[j] = 2.0 * alphas[j]
        y[j] = a2[j].real * a2[j].real + a2[j].imag * a2[j].imag
        head[j] = math.exp(-0.5 * y[j])
    acc = np.zeros(npts, dtype=np.complex128)
    prev = np.empty(npts, dtype=np.complex128)
    cur = np.empty(npts, dtype=np.complex128)
    for k in range(dim):
        if k > 0:
            inv = 1.0 / math.sqrt(k)
            for j in range(npts):
                head[j] = head[j] * a2[j] * inv
        d, c = rho[0, k], rho[k, 0]
        for j in range(npts):
            prev[j] = 0.0
            cur[j] = head[j]
            if k == 0:
                acc[j] += d * head[j]
            else:
                acc[j] += d * head[j] + c * head[j].conjugate()
        for m in range(dim - k - 1):
            scale = -1.0 / math.sqrt((m + 1) * (m + k + 1))
            shift = 2 * m + k + 1
            back = math.sqrt(m * (m + k))
            d, c = rho[m + 1, m + 1 + k], rho[m + 1 + k, m + 1]
            for j in range(npts):
                nxt = scale * ((shift - y[j]) * cur[j] + back * prev[j])
                prev[j] = cur[j]
                cur[j] = nxt
                if k == 0:
                    acc[j] += d * nxt
                else:
                    acc[j] += d * nxt + c * nxt.conjugate()
    return TWO_OVER_PI * acc


def fock_wigner_vec(rho, alphas):
    dim = rho.shape[0]
    a2 = 2.0 * np.asarray(alphas, dtype=np.complex128)
    y = np.abs(a2) ** 2
    head = np.exp(-0.5 * y).astype(np.complex128)
    acc = np.zeros(a2.shape, dtype=np.complex128)
    for k in range(dim):
        if k > 0:
            head = head * a2 / math.sqrt(k)
        diag = np.diagonal(rho, k)
        cdiag = np.diagonal(rho, -k)
        prev = np.zeros_like(head)
        cur = head
        for m in range(dim - k):
            if m > 0:
                nxt = -((2 * (m - 1) + k + 1 - y) * cur + math.sqrt((m - 1) * (m - 1 + k)) * prev) \
                    / math.sqrt(m * (m + k))
                prev, cur = cur, nxt
            if k == 0:
                acc += diag[m] * cur
            else:
                acc += diag[m] * cur + cdiag[m] * np.conj(cur)
    return TWO_OVER_PI * acc


# --------------------------------------------------------------------------
# Wigner function of a Fock-diagonal state (Laguerre sum)
# --------------------------------------------------------------------------
# l_n(y) = exp(-y/2) L_n(y) obeys the upward recurrence
#     (n+1) l_{n+1} = (2n+1-y) l_n - n l_{n-1},   l_0 = exp(-y/2), l_1 = (1-y) l_0
# and |l_n| <= 1, so no rescaling is needed.

@njit
def diag_wigner_loop(pops, alphas):
    dim = pops.shape[0]
    npts = alphas.shape[0]
    y = np.empty(npts, dtype=np.float64)
    lm1 = np.empty(npts, dtype=np.float64)
    l0 = np.empty(npts, dtype=np.float64)
    acc = np.empty(npts, dtype=np.float64)
    for j in range(npts):
        y[j] = 4.0 * (alphas[j].real ** 2 + alphas[j].imag ** 2)
        lm1[j] = math.exp(-0.5 * y[j])
        l0[j] = (1.0 - y[j]) * lm1[j]
        acc[j] = pops[0] * lm1[j]
        if dim > 1:
            acc[j] -= pops[1] * l0[j]
    sign = 1.0
    for n in range(1, dim - 1):
        inv = 1.0 / (n + 1)
        w = sign * pops[n + 1]
        for j in range(npts):
            l1 = ((2 * n + 1 - y[j]) * l0[j] - n * lm1[j]) * inv
            acc[j] += w * l1
            lm1[j] = l0[j]
            l0[j] = l1
        sign = -sign
    for j in range(npts):
        acc[j] *= TWO_OVER_PI
    return acc


def diag_wigner_vec(pops, alphas):
    dim = pops.shape[0]
    y = 4.0 * np.abs(np.asarray(alphas, dtype=np.complex128)) ** 2
    lm1 = np.exp(-0.5 * y)
    acc = pops[0] * lm1
    if dim > 1:
        l0 = (1.0 - y) * lm1
        acc = acc - pops[1] * l0
        for n in range(1, dim - 1):
            l1 = ((2 * n + 1 - y) * l0 - n * lm1) / (n + 1)
            acc = acc + (-1) ** (n + 1) * pops[n + 1] * l1
            lm1, l0 = l0, l1
    return TWO_OVER_PI * acc


# --------------------------------------------------------------------------
# Exact amplitude-decay map
# --------------------------------------------------------------------------
# rho_{n,n'}(t) = e^{-kt(n+n')} sum_r sqrt(C(n+r,r) C(n'+r,r)) (1-e^{-2kt})^r rho_{n+r,n'+r}(0)
# Weights are assembled in log space; lnfact[k] = ln k!.

@njit
def amplitude_decay_loop(rho, kappa_t, log_loss, lnfact):
    dim = rho.shape[0]
    out = np.zeros((dim, dim), dtype=np.complex128)
    # half[r, k] = -kt*k + (ln (k+r)! - ln k!)/2
    half = np.empty((dim, dim))
    for r in range(dim):
        for k in range(dim - r):
            half[r, k] = -kappa_t * k + 0.5 * (lnfact[k + r] - lnfact[k])
    for n in range(dim):
        for n2 in range(n, dim):
            acc = 0j
            for r in range(dim - n2):
                lw = half[r, n] + half[r, n2] - lnfact[r] + r * log_loss
                acc += math.exp(lw) * rho[n + r, n2 + r]
            out[n, n2] = acc
            out[n2, n] = acc.conjugate()
    return out


def amplitude_decay_vec(rho, kappa_t, log_loss, lnfact):
    dim = rho.shape[0]
    idx = np.arange(dim)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for r in range(dim):
        k = idx[: dim - r]
        half = 0.5 * (lnfact[k + r] - lnfact[k])
        lw = (-kappa_t * k + half)[:, None] + (-kappa_t * k + half)[None, :] - lnfact[r] + r * log_loss
        out[: dim - r, : dim - r] += np.exp(lw) * rho[r:, r:]
    return out


# --------------------------------------------------------------------------
# Dispatch
# --------------------------------------------------------------------------

def fock_wigner(rho, alphas):
    """Complex Wigner sum over all matrix elements at flat points ``alphas``."""
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    alphas = np.ascontiguousarray(np.ravel(alphas), dtype=np.complex128)
    if _backend.BACKEND == "numba":
        return fock_wigner_loop(rho, alphas)
    return fock_wigner_vec(rho, alphas)


def diag_wigner(pops, alphas):
    """Wigner function of sum_n pops[n] |n><n| at flat points ``alphas``."""
    pops = np.ascontiguousarray(pops, dtype=np.float64)
    alphas = np.ascontiguousarray(np.ravel(alphas), dtype=np.complex128)
    if _backend.BACKEND == "numba":
        return diag_wigner_loop(pops, alphas)
    return diag_wigner_vec(pops, alphas)


def ln_factorials(dim):
    return gammaln(np.arange(dim, dtype=np.float64) + 1.0)


def amplitude_decay(rho, kappa_t):
    """Apply the exact decay map; requires ``kappa_t > 0``."""
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    log_loss = math.log(-math.expm1(-2.0 * kappa_t))
    lnfact = ln_factorials(rho.shape[0])
    if _backend.BACKEND == "numba":
        return amplitude_decay_loop(rho, float(kappa_t), log_loss, lnfact)
    return amplitude_decay_vec(rho, float(kappa_t), log_loss, lnfact)
