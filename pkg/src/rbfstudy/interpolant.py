"""Assembly and solution of the augmented kernel interpolation system.

The interpolant ``s(x) = p(x) + sum_j c_j h(x - x_j)`` couples a kernel
part with a polynomial of degree below the kernel's CPD order. The kernel
weights and polynomial coefficients solve the symmetric saddle-point
system enforcing interpolation at the nodes together with the moment
conditions that annihilate the polynomial space. Derivatives of s are
exact through the kernel's analytic derivative machinery.

Finite kernel expansions (the same functional form with free centers)
serve as test functions whose native-space semi-norm is a computable
quadratic form.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from rbfstudy.geometry import PointSet
from rbfstudy.kernels import Kernel
from rbfstudy.polybasis import MonomialBasis, basis_matrix, is_determining_set

INTERPOLANT_FORMAT_VERSION = 1

# Past this 2-norm condition estimate the factorization is numerically
# meaningless in double precision and the solve is refused.
DEFAULT_COND_LIMIT = 1e18


class SingularSystemError(RuntimeError):
    """Saddle-point system is numerically singular or beyond the condition limit."""

    def __init__(self, message: str, cond_estimate: float):
        super().__init__(f"{message} (condition estimate {cond_estimate:.3e})")
        self.cond_estimate = cond_estimate


@dataclass(frozen=True)
class InterpolationProblem:
    """Nodes, data, and kernel for one interpolation solve."""

    kernel: Kernel
    nodes: PointSet
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if len(values) != len(self.nodes):
            raise ValueError(f"{len(values)} values for {len(self.nodes)} nodes")
        if self.nodes.dim != self.kernel.dim:
            raise ValueError(f"node dim {self.nodes.dim} != kernel dim {self.kernel.dim}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def cpd_order(self) -> int:
        return self.kernel.cpd_order


def _expansion_value(kernel, centers, weights, basis, poly_coeffs, x):
    diffs = np.asarray(x, dtype=float)[..., None, :] - centers
    out = np.tensordot(kernel.evaluate(diffs), weights, axes=([-1], [0]))
    if basis.size:
        out = out + basis.evaluate(x) @ poly_coeffs
    return out


def _expansion_derivative(kernel, centers, weights, basis, poly_coeffs, alpha, x):
    diffs = np.asarray(x, dtype=float)[..., None, :] - centers
    out = np.tensordot(kernel.evaluate_derivative(alpha, diffs), weights, axes=([-1], [0]))
    if basis.size:
        out = out + basis.evaluate_derivative(poly_coeffs, alpha, x)
    return out


@dataclass(frozen=True)
class Interpolant:
    """A solved interpolant: kernel weights plus polynomial coefficients."""

    kernel: Kernel
    nodes: PointSet
    coeffs: np.ndarray
    poly_coeffs: np.ndarray
    cond_estimate: float = float("nan")
    basis: MonomialBasis = field(init=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).reshape(-1)
        basis = MonomialBasis.for_cpd_order(self.kernel.dim, self.kernel.cpd_order)
        poly = np.array(self.poly_coeffs, dtype=float).reshape(-1)
        if len(coeffs) != len(self.nodes):
            raise ValueError(f"{len(coeffs)} coefficients for {len(self.nodes)} nodes")
        if len(poly) != basis.size:
            raise ValueError(f"{len(poly)} polynomial coefficients, expected {basis.size}")
        coeffs.setflags(write=False)
        poly.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "poly_coeffs", poly)
        object.__setattr__(self, "basis", basis)

    def evaluate(self, x) -> float | np.ndarray:
        """Interpolant value at a point (dim,) or batch (..., dim)."""
        out = _expansion_value(
            self.kernel, self.nodes.points, self.coeffs, self.basis, self.poly_coeffs, x
        )
        return float(out) if np.ndim(out) == 0 else out

    def evaluate_derivative(self, alpha, x) -> float | np.ndarray:
        """Analytic partial derivative of the interpolant of order alpha."""
        out = _expansion_derivative(
            self.kernel, self.nodes.points, self.coeffs, self.basis, self.poly_coeffs, alpha, x
        )
        return float(out) if np.ndim(out) == 0 else out

    def moment_residual(self) -> float:
        """Euclidean norm of the moment-condition residual of the weights."""
        if self.basis.size == 0:
            return 0.0
        return float(np.linalg.norm(basis_matrix(self.basis, self.nodes.points).T @ self.coeffs))

    def as_expansion(self) -> "KernelExpansion":
        """The interpolant viewed as a kernel expansion on its own nodes."""
        return KernelExpansion(self.kernel, self.nodes, self.coeffs, self.poly_coeffs)

    def to_json_dict(self) -> dict:
        return {
            "version": INTERPOLANT_FORMAT_VERSION,
            "kernel": self.kernel.to_dict(),
            "nodes": self.nodes.points.tolist(),
            "coeffs": self.coeffs.tolist(),
            "poly_coeffs": self.poly_coeffs.tolist(),
            "basis_order": "grlex",
            "cond_estimate": self.cond_estimate,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Interpolant":
        if d.get("version") != INTERPOLANT_FORMAT_VERSION:
            raise ValueError(f"unsupported interpolant format version {d.get('version')!r}")
        if d.get("basis_order", "grlex") != "grlex":
            raise ValueError(f"unsupported basis order {d['basis_order']!r}")
        kernel = Kernel.from_dict(d["kernel"])
        return cls(
            kernel,
            PointSet.from_array(np.asarray(d["nodes"], dtype=float)),
            np.asarray(d["coeffs"], dtype=float),
            np.asarray(d["poly_coeffs"], dtype=float),
            float(d.get("cond_estimate", float("nan"))),
        )

    def save_json(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load_json(cls, path) -> "Interpolant":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def assemble_system(kernel: Kernel, nodes: PointSet) -> tuple[np.ndarray, MonomialBasis]:
    """Saddle-point matrix [[A, P], [P^T, 0]] and the augmentation basis."""
    basis = MonomialBasis.for_cpd_order(kernel.dim, kernel.cpd_order)
    gram = kernel.gram(nodes.points)
    if basis.size:
        pmat = basis_matrix(basis, nodes.points)
        system = np.block(
            [[gram, pmat], [pmat.T, np.zeros((basis.size, basis.size))]]
        )
    else:
        system = gram
    return system, basis


def solve(problem: InterpolationProblem, cond_limit: float = DEFAULT_COND_LIMIT) -> Interpolant:
    """Solve the saddle-point interpolation system.

    Assembles [[A, P], [P^T, 0]] with A the kernel Gram matrix on the nodes
    and P the polynomial evaluation matrix, factorizes it with a dense
    symmetric-indefinite routine, and reports the 2-norm condition
    estimate on the returned interpolant. A system whose estimate exceeds
    ``cond_limit`` raises SingularSystemError instead of being silently
    regularized.
    """
    kernel, nodes = problem.kernel, problem.nodes
    m = problem.cpd_order
    if m >= 1 and not is_determining_set(nodes.points, m, kernel.dim):
        raise ValueError(
            f"nodes are not a determining set for polynomials of degree <= {m - 1}"
        )
    n = len(nodes)
    system, basis = assemble_system(kernel, nodes)
    rhs = np.concatenate([problem.values, np.zeros(basis.size)])

    cond = float(np.linalg.cond(system))
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularSystemError("saddle-point system too ill-conditioned", cond)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            solution = scipy.linalg.solve(system, rhs, assume_a="sym")
            # Two steps of iterative refinement push the nodal residual back
            # toward machine level on moderately conditioned systems.
            for _ in range(2):
                residual = rhs - system @ solution
                solution = solution + scipy.linalg.solve(system, residual, assume_a="sym")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SingularSystemError(str(exc), cond) from exc
    return Interpolant(kernel, nodes, solution[:n], solution[n:], cond)


@dataclass(frozen=True)
class KernelExpansion:
    """A finite kernel expansion f = p + sum_j a_j h(. - z_j).

    The weights are expected to satisfy the moment conditions over the
    centers, which makes the native-space semi-norm of f the square root
    of the Gram quadratic form of the weights.
    """

    kernel: Kernel
    centers: PointSet
    weights: np.ndarray
    poly_coeffs: np.ndarray | None = None
    basis: MonomialBasis = field(init=False)

    def __post_init__(self):
        basis = MonomialBasis.for_cpd_order(self.kernel.dim, self.kernel.cpd_order)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        poly = (
            np.zeros(basis.size)
            if self.poly_coeffs is None
            else np.array(self.poly_coeffs, dtype=float).reshape(-1)
        )
        if self.centers.dim != self.kernel.dim:
            raise ValueError(f"center dim {self.centers.dim} != kernel dim {self.kernel.dim}")
        if len(weights) != len(self.centers):
            raise ValueError(f"{len(weights)} weights for {len(self.centers)} centers")
        if len(poly) != basis.size:
            raise ValueError(f"{len(poly)} polynomial coefficients, expected {basis.size}")
        weights.setflags(write=False)
        poly.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "poly_coeffs", poly)
        object.__setattr__(self, "basis", basis)

    def evaluate(self, x) -> float | np.ndarray:
        out = _expansion_value(
            self.kernel, self.centers.points, self.weights, self.basis, self.poly_coeffs, x
        )
        return float(out) if np.ndim(out) == 0 else out

    def evaluate_derivative(self, alpha, x) -> float | np.ndarray:
        out = _expansion_derivative(
            self.kernel, self.centers.points, self.weights, self.basis, self.poly_coeffs, alpha, x
        )
        return float(out) if np.ndim(out) == 0 else out

    def moment_residual(self) -> float:
        if self.basis.size == 0:
            return 0.0
        return float(
            np.linalg.norm(basis_matrix(self.basis, self.centers.points).T @ self.weights)
        )

    def native_norm(self, moment_tol: float = 1e-8) -> float:
        """Native-space semi-norm sqrt(a^T A a) on the centers.

        The polynomial part contributes nothing. Raises if the moment
        conditions are violated beyond ``moment_tol`` (relative to the
        weight norm) or if the quadratic form is negative beyond roundoff,
        which signals a kernel sign misconfiguration.
        """
        wnorm = float(np.linalg.norm(self.weights))
        if self.moment_residual() > moment_tol * (1.0 + wnorm):
            raise ValueError(
                f"moment-condition residual {self.moment_residual():.3e} exceeds tolerance"
            )
        quad = float(self.weights @ self.kernel.gram(self.centers.points) @ self.weights)
        if quad < -1e-10 * wnorm**2:
            raise ValueError(f"native quadratic form is negative ({quad:.3e})")
        return float(np.sqrt(max(quad, 0.0)))


def interpolate_expansion(f: KernelExpansion, nodes: PointSet, cond_limit: float = DEFAULT_COND_LIMIT) -> Interpolant:
    """Interpolate a kernel expansion at the given nodes with its own kernel."""
    values = np.atleast_1d(f.evaluate(nodes.points))
    return solve(InterpolationProblem(f.kernel, nodes, values), cond_limit=cond_limit)


def residual_expansion(f: KernelExpansion, interp: Interpolant) -> KernelExpansion:
    """The difference f - s as a kernel expansion over the merged centers.

    Centers shared between f and the interpolation nodes are merged by
    summing weights, so self-interpolation cancels exactly. The moment
    conditions carry over, making the native norm of the residual
    computable.
    """
    if interp.kernel != f.kernel:
        raise ValueError("expansion and interpolant use different kernels")
    merged: dict[tuple, float] = {}
    order: list[tuple] = []

    def add(point: np.ndarray, weight: float):
        key = tuple(point)
        if key not in merged:
            merged[key] = 0.0
            order.append(key)
        merged[key] += weight

    for point, weight in zip(f.centers.points, f.weights):
        add(point, float(weight))
    for point, weight in zip(interp.nodes.points, interp.coeffs):
        add(point, -float(weight))

    centers = np.array(order, dtype=float)
    weights = np.array([merged[k] for k in order])
    poly = f.poly_coeffs - interp.poly_coeffs
    return KernelExpansion(f.kernel, PointSet(f.kernel.dim, centers), weights, poly)
