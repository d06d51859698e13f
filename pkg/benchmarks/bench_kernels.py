"""Compare the numba loop kernels with their pure-numpy counterparts.

Usage:
    python benchmarks/bench_kernels.py [--repeat 5]

The numba column needs numba installed; otherwise only numpy timings are shown.
"""

import argparse
import math
import timeit

import numpy as np

from photonsub import _backend, _kernels
from photonsub.fock import from_pure
from photonsub.states import SqueezeParams, photon_subtracted


def best_time(fn, repeat):
    fn()  # compile / warm caches
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def cases():
    for r, cells in [(0.31, 128), (0.8, 128), (1.2, 128)]:
        rho = from_pure(photon_subtracted(SqueezeParams(r, 0.4), 1)).elements
        axis = np.linspace(-3, 3, cells + 1)
        alphas = (axis[:, None] + 1j * axis[None, :]).ravel()
        label = f"fock_wigner N={rho.shape[0] - 1} grid={cells + 1}^2"
        yield label, (lambda: _kernels.fock_wigner_loop(rho, alphas)), (lambda: _kernels.fock_wigner_vec(rho, alphas))
        pops = rho.diagonal().real.copy()
        label = f"diag_wigner N={rho.shape[0] - 1} grid={cells + 1}^2"
        yield label, (lambda: _kernels.diag_wigner_loop(pops, alphas)), (lambda: _kernels.diag_wigner_vec(pops, alphas))
    for r in (0.8, 1.2, 1.6):
        rho = from_pure(photon_subtracted(SqueezeParams(r), 1)).elements
        dim = rho.shape[0]
        lnf = _kernels.ln_factorials(dim)
        kt = 0.3
        log_loss = math.log(-math.expm1(-2 * kt))
        label = f"amplitude_decay N={dim - 1}"
        yield (label, (lambda: _kernels.amplitude_decay_loop(rho, kt, log_loss, lnf)),
               (lambda: _kernels.amplitude_decay_vec(rho, kt, log_loss, lnf)))


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    jit = _backend.HAVE_NUMBA and _backend.BACKEND == "numba"
    print(f"backend: {_backend.BACKEND}")
    print(f"{'kernel':<40} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8}")
    for label, loop, vec in cases():
        t_vec = best_time(vec, args.repeat) * 1e3
        if jit:
            t_loop = best_time(loop, args.repeat) * 1e3
            print(f"{label:<40} {t_loop:>11.2f} {t_vec:>11.2f} {t_vec / t_loop:>7.1f}x")
        else:
            print(f"{label:<40} {'-':>11} {t_vec:>11.2f} {'-':>8}")


if __name__ == "__main__":
    main()
