import math

import mpmath
import numpy as np
import pytest

from rbfstudy.kernels import (
    Kernel,
    KernelFamily,
    MAX_DERIVATIVE_ORDER,
    UnsupportedOrderError,
    _differentiate_terms,
    derivative_terms,
)

from conftest import central_difference, multi_indices_up_to


def sample_kernels():
    return [
        Kernel.gaussian(1.0, 1),
        Kernel.gaussian(2.5, 2),
        Kernel.multiquadric(1.0, 1.0, 1),
        Kernel.multiquadric(-1.0, 0.7, 2),
        Kernel.multiquadric(3.0, 0.5, 2),
    ]


class TestConstruction:
    def test_mq_rejects_nonnegative_even_beta(self):
        for beta in (0.0, 2.0, 4.0):
            with pytest.raises(ValueError):
                Kernel.multiquadric(beta, 1.0, 1)
        # nearby non-integer values are fine
        Kernel.multiquadric(2.0 + 1e-9, 1.0, 1)
        Kernel.multiquadric(-2.0, 1.0, 1)

    def test_mq_requires_positive_c(self):
        with pytest.raises(ValueError):
            Kernel.multiquadric(1.0, 0.0, 1)
        with pytest.raises(ValueError):
            Kernel.multiquadric(1.0, -1.0, 1)

    def test_gaussian_requires_positive_beta(self):
        with pytest.raises(ValueError):
            Kernel.gaussian(0.0, 1)
        with pytest.raises(ValueError):
            Kernel.gaussian(-1.0, 1)

    def test_dim_must_be_positive(self):
        with pytest.raises(ValueError):
            Kernel.gaussian(1.0, 0)

    def test_dict_round_trip(self):
        for kernel in sample_kernels():
            assert Kernel.from_dict(kernel.to_dict()) == kernel


class TestCpdOrder:
    def test_mq_positive_beta(self):
        assert Kernel.multiquadric(1.0, 1.0, 1).cpd_order == 1
        assert Kernel.multiquadric(3.0, 1.0, 1).cpd_order == 2
        assert Kernel.multiquadric(2.5, 1.0, 1).cpd_order == 2

    def test_mq_negative_beta(self):
        assert Kernel.multiquadric(-1.0, 1.0, 1).cpd_order == 0

    def test_gaussian(self):
        assert Kernel.gaussian(2.0, 1).cpd_order == 0


class TestEvaluate:
    def test_gaussian_at_origin(self):
        assert Kernel.gaussian(1.0, 1).evaluate([0.0]) == 1.0

    def test_gaussian_unit_point(self):
        value = Kernel.gaussian(1.0, 2).evaluate([1.0, 0.0])
        assert value == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_mq_origin_gamma_prefactor(self):
        # gamma(-1/2) = -2 sqrt(pi), checked against a high-precision oracle
        value = Kernel.multiquadric(1.0, 1.0, 1).evaluate([0.0])
        oracle = float(mpmath.gamma(mpmath.mpf("-0.5")))
        assert value == pytest.approx(oracle, rel=1e-14)
        assert value == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-14)
        assert value < 0.0

    def test_rejects_nonfinite_input(self):
        with pytest.raises(ValueError):
            Kernel.gaussian(1.0, 1).evaluate([math.inf])

    def test_batch_shape(self):
        kernel = Kernel.multiquadric(1.0, 0.8, 2)
        pts = np.random.default_rng(0).normal(size=(7, 3, 2))
        assert kernel.evaluate(pts).shape == (7, 3)


class TestEvaluateDerivative:
    def test_zero_alpha_reduces_to_evaluate(self):
        rng = np.random.default_rng(1)
        for kernel in sample_kernels():
            x = rng.normal(size=kernel.dim)
            zero = (0,) * kernel.dim
            assert kernel.evaluate_derivative(zero, x) == pytest.approx(
                kernel.evaluate(x), rel=1e-15
            )

    def test_gaussian_first_derivative_at_origin(self):
        assert Kernel.gaussian(1.0, 1).evaluate_derivative((1,), [0.0]) == 0.0

    def test_gaussian_second_derivative_at_origin(self):
        # (4x^2 - 2) exp(-x^2) at x = 0
        kernel = Kernel.gaussian(1.0, 1)
        assert kernel.evaluate_derivative((2,), [0.0]) == pytest.approx(-2.0, rel=1e-14)
        fd = central_difference(lambda x: kernel.evaluate(x), (2,), np.array([0.0]))
        assert abs(fd - (-2.0)) < 1e-6

    def test_order_cap(self):
        kernel = Kernel.gaussian(1.0, 1)
        with pytest.raises(UnsupportedOrderError):
            kernel.evaluate_derivative((MAX_DERIVATIVE_ORDER + 1,), [0.3])

    def test_multi_index_validation(self):
        kernel = Kernel.gaussian(1.0, 2)
        with pytest.raises(ValueError):
            kernel.evaluate_derivative((1,), [0.1, 0.2])
        with pytest.raises(ValueError):
            kernel.evaluate_derivative((-1, 0), [0.1, 0.2])


def test_evenness():
    rng = np.random.default_rng(7)
    for kernel in sample_kernels():
        x = rng.normal(size=(50, kernel.dim))
        plus = kernel.evaluate(x)
        minus = kernel.evaluate(-x)
        assert np.allclose(plus, minus, rtol=1e-14, atol=0.0)


def test_derivative_parity():
    rng = np.random.default_rng(8)
    for kernel in sample_kernels():
        x = rng.normal(size=(20, kernel.dim))
        for alpha in multi_indices_up_to(kernel.dim, 3):
            sign = (-1.0) ** sum(alpha)
            plus = kernel.evaluate_derivative(alpha, x)
            minus = kernel.evaluate_derivative(alpha, -x)
            assert np.allclose(minus, sign * plus, rtol=1e-12, atol=1e-13)


def test_finite_difference_oracle():
    # analytic derivatives vs central differences, all |alpha| <= 3
    rng = np.random.default_rng(9)
    for kernel in sample_kernels():
        points = rng.uniform(-1.2, 1.2, size=(100, kernel.dim))
        for alpha in multi_indices_up_to(kernel.dim, 3):
            analytic = np.atleast_1d(kernel.evaluate_derivative(alpha, points))
            for i in range(len(points)):
                fd = central_difference(
                    lambda x: kernel.evaluate(x), alpha, points[i]
                )
                assert abs(analytic[i] - fd) <= 1e-5 * (1.0 + abs(analytic[i]))


def test_mixed_partial_symmetry():
    # differentiation order through the term recursion does not matter
    rng = np.random.default_rng(10)
    start = {0: {(0, 0): 1.0}}
    xy_order = _differentiate_terms(_differentiate_terms(start, 0), 1)
    yx_order = _differentiate_terms(_differentiate_terms(start, 1), 0)
    for kernel in (Kernel.gaussian(1.5, 2), Kernel.multiquadric(1.0, 0.9, 2)):
        for x in rng.normal(size=(20, 2)):
            t = (kernel.c**2 if kernel.family is KernelFamily.MULTIQUADRIC else 0.0) + x @ x

            def eval_terms(terms):
                total = 0.0
                for j, poly in terms.items():
                    for expo, coeff in poly.items():
                        total += coeff * x[0] ** expo[0] * x[1] ** expo[1] * kernel._profile_deriv(j, np.asarray(t))
                return total

            a, b = eval_terms(xy_order), eval_terms(yx_order)
            assert abs(a - b) <= 1e-12 * (1.0 + abs(a))


def test_term_cache_is_shared():
    first = derivative_terms(2, (1, 1))
    second = derivative_terms(2, (1, 1))
    assert first is second
    # terms are family-independent: one list serves every kernel of that dim
    assert derivative_terms(1, (2,)) is derivative_terms(1, (2,))


def test_profile_term_orders_bounded_by_total():
    for alpha in [(2,), (3,), (1, 2)]:
        dim = len(alpha)
        for term in derivative_terms(dim, alpha):
            assert 0 <= term.deriv_order <= sum(alpha)
            assert all(len(expo) == dim for expo in term.poly)
