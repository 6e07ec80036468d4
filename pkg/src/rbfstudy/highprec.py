"""Extended-precision measurement path for refinement studies.

Double-precision factorizations saturate near condition 1e16, which puts
a noise floor of roughly 1e-9..1e-13 under the measured sup errors; the
finest study levels sit far below it. This module redoes one level's
solve-and-measure pipeline in mpmath arbitrary precision so the recorded
errors are the true errors of the double-precision-defined approximand.
Only the study harness uses it; the library's solver stays double.
"""

from __future__ import annotations

import math

import numpy as np
from mpmath import mp, mpf

from rbfstudy.kernels import Kernel, KernelFamily, derivative_terms
from rbfstudy.polybasis import MonomialBasis


def _profile_deriv_mp(kernel: Kernel, j: int, t):
    if kernel.family is KernelFamily.GAUSSIAN:
        return (-mpf(kernel.beta)) ** j * mp.exp(-mpf(kernel.beta) * t)
    half = mpf(kernel.beta) / 2
    coeff = mp.gamma(-half)
    for i in range(j):
        coeff *= half - i
    return coeff * t ** (half - j)


def _shift_mp(kernel: Kernel):
    return mpf(kernel.c) ** 2 if kernel.family is KernelFamily.MULTIQUADRIC else mpf(0)


def _kernel_deriv_mp(kernel: Kernel, alpha: tuple[int, ...], diff):
    """alpha-derivative of the kernel at one difference vector (list of mpf)."""
    t = _shift_mp(kernel) + sum(v * v for v in diff)
    total = mpf(0)
    for profile_term in derivative_terms(kernel.dim, alpha):
        poly_val = mpf(0)
        for expo, coeff in profile_term.poly.items():
            term = mpf(coeff)
            for axis, e in enumerate(expo):
                if e:
                    term *= diff[axis] ** e
            poly_val += term
        total += poly_val * _profile_deriv_mp(kernel, profile_term.deriv_order, t)
    return total


def _monomial_deriv_mp(expo: tuple[int, ...], alpha: tuple[int, ...], x):
    factor = mpf(1)
    for e, a in zip(expo, alpha):
        if a > e:
            return mpf(0)
        for i in range(a):
            factor *= e - i
    for axis, (e, a) in enumerate(zip(expo, alpha)):
        if e - a:
            factor *= x[axis] ** (e - a)
    return factor


def _expansion_deriv_mp(kernel, centers, weights, basis, poly_coeffs, alpha, x):
    total = mpf(0)
    for center, weight in zip(centers, weights):
        diff = [xv - cv for xv, cv in zip(x, center)]
        total += weight * _kernel_deriv_mp(kernel, alpha, diff)
    for expo, coeff in zip(basis.exponents, poly_coeffs):
        total += coeff * _monomial_deriv_mp(expo, alpha, x)
    return total


def measure_level(
    kernel: Kernel,
    centers: np.ndarray,
    weights: np.ndarray,
    poly_coeffs: np.ndarray,
    nodes: np.ndarray,
    probes: np.ndarray,
    inner_probes: np.ndarray,
    alphas: tuple[tuple[int, ...], ...],
    dps: int,
) -> tuple[float, dict[tuple[int, ...], float]]:
    """Solve one refinement level and measure sup errors in mp arithmetic.

    The approximand (kernel expansion given by float centers, weights, and
    polynomial coefficients) is interpolated at the nodes; returns the sup
    of the value error over ``probes`` and of each derivative error over
    ``inner_probes``, both cast back to float.
    """
    with mp.workdps(dps):
        basis = MonomialBasis.for_cpd_order(kernel.dim, kernel.cpd_order)
        zero_alpha = (0,) * kernel.dim
        mp_centers = [[mpf(v) for v in row] for row in np.atleast_2d(centers)]
        mp_weights = [mpf(v) for v in weights]
        mp_poly = [mpf(v) for v in poly_coeffs]
        mp_nodes = [[mpf(v) for v in row] for row in np.atleast_2d(nodes)]
        n, q = len(mp_nodes), basis.size

        system = mp.matrix(n + q, n + q)
        for i in range(n):
            for j in range(i, n):
                diff = [a - b for a, b in zip(mp_nodes[i], mp_nodes[j])]
                val = _kernel_deriv_mp(kernel, zero_alpha, diff)
                system[i, j] = val
                system[j, i] = val
            for k, expo in enumerate(basis.exponents):
                val = _monomial_deriv_mp(expo, zero_alpha, mp_nodes[i])
                system[i, n + k] = val
                system[n + k, i] = val
        rhs = mp.matrix(n + q, 1)
        for i in range(n):
            rhs[i] = _expansion_deriv_mp(
                kernel, mp_centers, mp_weights, basis, mp_poly, zero_alpha, mp_nodes[i]
            )
        solution = mp.lu_solve(system, rhs)
        coeffs = [solution[i] for i in range(n)]
        sol_poly = [solution[n + k] for k in range(q)]

        def sup_error(points, alpha):
            worst = mpf(0)
            for row in np.atleast_2d(points):
                x = [mpf(v) for v in row]
                fv = _expansion_deriv_mp(
                    kernel, mp_centers, mp_weights, basis, mp_poly, alpha, x
                )
                sv = _expansion_deriv_mp(
                    kernel, mp_nodes, coeffs, basis, sol_poly, alpha, x
                )
                err = abs(fv - sv)
                if err > worst:
                    worst = err
            return float(worst)

        value_error = sup_error(probes, zero_alpha)
        deriv_errors = {alpha: sup_error(inner_probes, alpha) for alpha in alphas}
    return value_error, deriv_errors


def native_norm_mp(kernel: Kernel, centers: np.ndarray, weights: np.ndarray, dps: int) -> float:
    """Native-space semi-norm of an expansion, evaluated in mp arithmetic."""
    with mp.workdps(dps):
        zero_alpha = (0,) * kernel.dim
        mp_centers = [[mpf(v) for v in row] for row in np.atleast_2d(centers)]
        mp_weights = [mpf(v) for v in weights]
        quad = mpf(0)
        for i, ci in enumerate(mp_centers):
            for j, cj in enumerate(mp_centers):
                diff = [a - b for a, b in zip(ci, cj)]
                quad += mp_weights[i] * mp_weights[j] * _kernel_deriv_mp(
                    kernel, zero_alpha, diff
                )
        if quad < 0:
            quad = mpf(0)
        return float(mp.sqrt(quad))


def estimate_condition(system: np.ndarray) -> float:
    """Double-precision 2-norm condition estimate, reported for visibility.

    Saturates around 1e16 and above, where double arithmetic can no longer
    distinguish magnitudes; values beyond that mark the system as beyond
    double-precision resolution rather than measuring it.
    """
    cond = float(np.linalg.cond(system))
    return cond if math.isfinite(cond) else float("inf")
