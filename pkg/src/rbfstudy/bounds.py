"""Exponential-type error-bound formulas, empirical rate fitting, and an
independent univariate check of the Gorny derivative inequality.

The two base bounds decay as ``prefactor * base**(1/d)`` (multiquadric
family) and ``prefactor * (scale*d)**(rate/d)`` (Gaussian) in the fill
distance d. Derivative errors interpolate between the base bound and a
top-derivative ceiling; which ceiling branch is active splits behavior
into a small-d and a large-d regime. All constants here are inputs or fit
outputs, never derived from theory.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

GORNY_SAMPLES = 2048


@dataclass(frozen=True)
class MQBoundParams:
    """Constants of the multiquadric base bound prefactor * base**(1/d).

    ``fill_limit`` is the largest admissible fill distance and
    ``cube_side`` the side of the coverage cubes the bound assumes.
    """

    prefactor: float
    base: float
    fill_limit: float
    cube_side: float

    def __post_init__(self):
        if not (0.0 < self.base < 1.0):
            raise ValueError(f"base must lie in (0, 1), got {self.base}")
        for name in ("prefactor", "fill_limit", "cube_side"):
            if not (getattr(self, name) > 0.0):
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class GaussianBoundParams:
    """Constants of the Gaussian base bound prefactor * (scale*d)**(rate/d).

    Decreasing in d only while scale*d < 1; larger d makes the bound grow,
    which gaussian_bound flags with a warning.
    """

    prefactor: float
    scale: float
    rate: float
    fill_limit: float

    def __post_init__(self):
        for name in ("prefactor", "scale", "rate", "fill_limit"):
            if not (getattr(self, name) > 0.0):
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class DerivativeBoundParams:
    """Constants of the interpolated derivative bound.

    ``smoothness_order`` is the top derivative order the bound leans on,
    ``deriv_order`` the measured order (strictly between 0 and the top),
    ``ball_radius`` the radius of the ball the probe point must carry
    inside the domain. ``bound_constant`` scales the whole bound and
    ``deriv_norm_scale`` converts the native norm of the approximand into
    the top-derivative ceiling; both are fitted or supplied, never derived.
    """

    smoothness_order: int
    deriv_order: int
    ball_radius: float
    bound_constant: float = 1.0
    deriv_norm_scale: float = 1.0

    def __post_init__(self):
        if not (0 < self.deriv_order < self.smoothness_order):
            raise ValueError(
                f"need 0 < deriv_order < smoothness_order, got "
                f"{self.deriv_order}, {self.smoothness_order}"
            )
        if not (self.ball_radius > 0.0):
            raise ValueError(f"ball_radius must be positive, got {self.ball_radius}")
        for name in ("bound_constant", "deriv_norm_scale"):
            if not (getattr(self, name) > 0.0):
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


def mq_bound(params: MQBoundParams, d: float, norm_f: float) -> float:
    """Multiquadric base bound prefactor * base**(1/d) * norm_f."""
    if not (0.0 < d <= params.fill_limit):
        raise ValueError(f"need 0 < d <= {params.fill_limit}, got {d}")
    if norm_f < 0.0:
        raise ValueError(f"norm_f must be >= 0, got {norm_f}")
    return params.prefactor * params.base ** (1.0 / d) * norm_f


def gaussian_bound(params: GaussianBoundParams, d: float, norm_f: float) -> float:
    """Gaussian base bound prefactor * (scale*d)**(rate/d) * norm_f."""
    if not (0.0 < d <= params.fill_limit):
        raise ValueError(f"need 0 < d <= {params.fill_limit}, got {d}")
    if norm_f < 0.0:
        raise ValueError(f"norm_f must be >= 0, got {norm_f}")
    if params.scale * d >= 1.0:
        warnings.warn(
            f"scale*d = {params.scale * d:.3g} >= 1: bound is not contracting",
            stacklevel=2,
        )
    return params.prefactor * (params.scale * d) ** (params.rate / d) * norm_f


def m_bar(base_error: float, top_deriv: float, order: int, ball_radius: float) -> float:
    """Ceiling used by the derivative bound.

    The larger of the supplied top-derivative bound and the base error
    inflated by order! / ball_radius**order.
    """
    if base_error < 0.0 or top_deriv < 0.0:
        raise ValueError("bounds must be non-negative")
    if order < 1 or ball_radius <= 0.0:
        raise ValueError(f"need order >= 1 and ball_radius > 0, got {order}, {ball_radius}")
    return max(top_deriv, base_error * math.factorial(order) * ball_radius ** (-order))


SMALL_D = "small-d"
LARGE_D = "large-d"


def ceiling_regime(base_error: float, top_deriv: float, order: int, ball_radius: float) -> str:
    """Which ceiling branch is active; ties go to the small-d branch."""
    inflated = base_error * math.factorial(order) * ball_radius ** (-order)
    return LARGE_D if inflated > top_deriv else SMALL_D


def _interpolated_bound(constant: float, base_error: float, ceiling: float, frac: float) -> float:
    return constant * base_error ** (1.0 - frac) * ceiling**frac


class DerivativeBound(NamedTuple):
    value: float
    regime: str
    ceiling: float


def derivative_bound(
    params: DerivativeBoundParams, base_error: float, top_deriv: float
) -> DerivativeBound:
    """Interpolated bound on a mid-order derivative error.

    Combines the base error and the m_bar ceiling with exponents
    1 - k/l and k/l (k the measured order, l the top order). The returned
    regime names which ceiling branch was active: "small-d" when the
    top-derivative bound dominates, "large-d" when the inflated base error
    does, in which case the value collapses to
    constant * base_error * l!**(k/l) / ball_radius**k.
    """
    k, l = params.deriv_order, params.smoothness_order
    ceiling = m_bar(base_error, top_deriv, l, params.ball_radius)
    value = _interpolated_bound(params.bound_constant, base_error, ceiling, k / l)
    regime = ceiling_regime(base_error, top_deriv, l, params.ball_radius)
    return DerivativeBound(value, regime, ceiling)


def gorny_bound(k: int, l: int, base_sup: float, ceiling: float) -> float:
    """Gorny's inequality ceiling 16 (2e)^k base^(1-k/l) ceiling^(k/l)."""
    if not (0 < k < l):
        raise ValueError(f"need 0 < k < l, got k={k}, l={l}")
    if base_sup < 0.0 or ceiling < 0.0:
        raise ValueError("sup norms must be non-negative")
    return 16.0 * (2.0 * math.e) ** k * base_sup ** (1.0 - k / l) * ceiling ** (k / l)


@dataclass(frozen=True)
class GornyReport:
    lhs: float
    rhs: float
    holds: bool
    base_sup: float
    top_sup: float
    ceiling: float


def gorny_oracle_check(
    psi: Callable[[np.ndarray, int], np.ndarray], k: int, l: int, delta: float
) -> GornyReport:
    """Check the Gorny inequality for one smooth univariate function.

    ``psi(t, order)`` must return the order-th derivative at the points t.
    Sup norms of psi and its l-th derivative over [-delta, delta] are taken
    by dense sampling; the left side is |psi^(k)(0)|.
    """
    if not (0 < k < l):
        raise ValueError(f"need 0 < k < l, got k={k}, l={l}")
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    grid = np.linspace(-delta, delta, GORNY_SAMPLES)
    base_sup = float(np.max(np.abs(psi(grid, 0))))
    top_sup = float(np.max(np.abs(psi(grid, l))))
    ceiling = m_bar(base_sup, top_sup, l, delta)
    lhs = float(abs(psi(np.array([0.0]), k)[0]))
    rhs = gorny_bound(k, l, base_sup, ceiling)
    return GornyReport(lhs, rhs, lhs <= rhs, base_sup, top_sup, ceiling)


class MQRateFit(NamedTuple):
    prefactor: float
    base: float
    r2: float


class GaussianRateFit(NamedTuple):
    prefactor: float
    scale: float
    rate: float
    r2: float


def _r_squared(y: np.ndarray, predicted: np.ndarray) -> float:
    ss_res = float(np.sum((y - predicted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res < 1e-24 else 0.0
    return 1.0 - ss_res / ss_tot


def _check_samples(samples, minimum: int) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(list(samples), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < minimum:
        raise ValueError(f"need >= {minimum} (d, error) samples, got shape {arr.shape}")
    d, err = arr[:, 0], arr[:, 1]
    if np.any(d <= 0.0) or len(np.unique(d)) != len(d):
        raise ValueError("fill distances must be positive and distinct")
    if np.any(err <= 0.0):
        raise ValueError("errors must be positive")
    return d, err


def fit_mq_rate(samples) -> MQRateFit:
    """Fit log(error) = log(prefactor) + (1/d) log(base) by least squares.

    Returns the recovered prefactor, decay base, and the coefficient of
    determination of the line in (1/d, log error) coordinates.
    """
    d, err = _check_samples(samples, 3)
    x, y = 1.0 / d, np.log(err)
    slope, intercept = np.polyfit(x, y, 1)
    return MQRateFit(float(np.exp(intercept)), float(np.exp(slope)), _r_squared(y, slope * x + intercept))


def _gaussian_sse(scale: float, d: np.ndarray, y: np.ndarray):
    """Inner linear fit of (log prefactor, rate) for a candidate scale."""
    u = np.log(scale * d) / d
    design = np.column_stack([np.ones_like(u), u])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return float(resid @ resid), coef


def fit_gaussian_rate(samples) -> GaussianRateFit:
    """Fit log(error) = log(prefactor) + (rate/d) log(scale*d).

    The scale is found by a coarse scan plus golden-section refinement
    over (0, 1/max(d)) with the two remaining parameters solved linearly
    at each candidate; deterministic.
    """
    d, err = _check_samples(samples, 4)
    y = np.log(err)
    if np.allclose(y, y[0], rtol=0.0, atol=1e-12):
        raise ValueError("degenerate samples: errors are constant")
    hi = (1.0 - 1e-9) / float(np.max(d))
    lo = hi * 1e-8

    candidates = np.geomspace(lo, hi, 128)
    sse = [_gaussian_sse(g, d, y)[0] for g in candidates]
    best = int(np.argmin(sse))
    a = candidates[max(best - 1, 0)]
    b = candidates[min(best + 1, len(candidates) - 1)]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, _ = _gaussian_sse(x1, d, y)
    f2, _ = _gaussian_sse(x2, d, y)
    for _ in range(200):
        if b - a < 1e-14 * hi:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1, _ = _gaussian_sse(x1, d, y)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2, _ = _gaussian_sse(x2, d, y)
    scale = (a + b) / 2.0
    _, coef = _gaussian_sse(scale, d, y)
    predicted = coef[0] + coef[1] * np.log(scale * d) / d
    return GaussianRateFit(
        float(np.exp(coef[0])), float(scale), float(coef[1]), _r_squared(y, predicted)
    )


def fit_report_dict(fit, n_samples: int, regime_counts: dict | None = None) -> dict:
    """JSON-ready report for a fitted rate model."""
    if isinstance(fit, MQRateFit):
        model = "mq"
        params = {"prefactor": fit.prefactor, "base": fit.base}
    elif isinstance(fit, GaussianRateFit):
        model = "gaussian"
        params = {"prefactor": fit.prefactor, "scale": fit.scale, "rate": fit.rate}
    else:
        raise TypeError(f"unknown fit type {type(fit)!r}")
    return {
        "model": model,
        "params": params,
        "r2": fit.r2,
        "n_samples": n_samples,
        "regime_counts": dict(regime_counts or {}),
    }


def fit_report_json(fit, n_samples: int, regime_counts: dict | None = None) -> str:
    return json.dumps(fit_report_dict(fit, n_samples, regime_counts), indent=2, sort_keys=True)


def decay_exponent(fit) -> float:
    """Scalar decay strength of a fitted model, comparable across orders.

    -log(base) for the multiquadric model, the rate for the Gaussian one;
    larger means faster decay as d shrinks.
    """
    if isinstance(fit, MQRateFit):
        return -math.log(fit.base)
    if isinstance(fit, GaussianRateFit):
        return fit.rate
    raise TypeError(f"unknown fit type {type(fit)!r}")
