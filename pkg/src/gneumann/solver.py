"""Neumann problem solvers on subgraph closures.

The problem: find u with vanishing Laplacian on the interior whose
boundary normal derivative matches prescribed data phi.  Solvable exactly
when phi is centered against the boundary measure; the solution is unique
once centered in the ambient measure.

Three analytic routes are provided (direct augmented solve, Green-kernel
summation, truncated heat-semigroup time integral) plus a variant where
the boundary is any designated vertex set carrying its own finite measure.
All routes return the same centered solution up to numerical tolerance,
which the test suites exploit as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DisconnectedError,
    DomainMismatchError,
    IncompatibleDataError,
    NonpositiveToleranceError,
)
from .forms import VertexFunction, interior_laplacian, normal_derivative
from .graphs import Measure, SubgraphClosure, WeightedGraph, is_connected
from .spectral import (
    Spectrum,
    check_spectrum_matches,
    green_kernel,
    mixing_constants,
)

__all__ = [
    "BoundaryData",
    "NeumannSolution",
    "SolutionReport",
    "check_compatibility",
    "is_compatible",
    "solve_direct",
    "solve_green",
    "solve_heat_integral",
    "solve_boundary_measure",
    "verify_solution",
]

# relative compatibility tolerance: |sum phi dmu| <= RTOL * max(1, sum |phi| dmu)
COMPATIBILITY_RTOL = 1e-10


@dataclass(frozen=True)
class BoundaryData:
    """Boundary values paired with the measure used for the centering test."""

    values: VertexFunction
    measure: Measure

    def __post_init__(self):
        if not self.values.values:
            raise DomainMismatchError("boundary data is empty")
        if self.values.domain != self.measure.domain:
            raise DomainMismatchError(
                "boundary values and boundary measure live on different sets",
                values_on=sorted(self.values.domain),
                measure_on=sorted(self.measure.domain),
            )

    @property
    def boundary(self) -> frozenset[str]:
        return self.values.domain

    @classmethod
    def for_closure(cls, sub: SubgraphClosure, values) -> "BoundaryData":
        """Wrap plain boundary values with the closure's boundary measure."""
        if not isinstance(values, VertexFunction):
            values = VertexFunction(dict(values))
        return cls(values=values, measure=sub.boundary_measure())

    def project_centered(self) -> tuple["BoundaryData", float]:
        """Subtract the measure-weighted mean; returns (projected, shift)."""
        shift = check_compatibility(self) / self.measure.total
        vals = {x: v - shift for x, v in self.values.values.items()}
        return BoundaryData(values=VertexFunction(vals), measure=self.measure), shift


@dataclass(frozen=True)
class NeumannSolution:
    """Centered solution with residual diagnostics computed at solve time."""

    u: VertexFunction
    method: str  # direct | green | heat-integral | monte-carlo
    residual_interior: float
    residual_boundary: float
    centering: float
    truncation_horizon: float | None = None


@dataclass(frozen=True)
class SolutionReport:
    residual_interior: float
    residual_boundary: float
    centering: float
    tolerance: float
    passed: bool


def _coerce_boundary_data(sub: SubgraphClosure, phi) -> BoundaryData:
    if isinstance(phi, BoundaryData):
        if phi.boundary != sub.boundary_set:
            raise DomainMismatchError(
                "boundary data is not defined on the closure boundary",
                expected=sorted(sub.boundary_set),
                got=sorted(phi.boundary),
            )
        return phi
    return BoundaryData.for_closure(sub, phi)


def check_compatibility(phi: BoundaryData) -> float:
    """Signed total of the boundary data against its measure.

    The solvability predicate is |result| small relative to the total
    absolute mass of the data.
    """
    return sum(v * phi.measure[x] for x, v in phi.values.values.items())


def is_compatible(phi: BoundaryData, rtol: float = COMPATIBILITY_RTOL) -> bool:
    total = check_compatibility(phi)
    mass = sum(abs(v) * phi.measure[x] for x, v in phi.values.values.items())
    return abs(total) <= rtol * max(1.0, mass)


def _require_compatible(phi: BoundaryData) -> None:
    if not is_compatible(phi):
        raise IncompatibleDataError(
            "boundary data is not centered against the boundary measure; "
            "no solution exists",
            compatibility_sum=check_compatibility(phi),
        )


def _diagnostics(sub: SubgraphClosure, u: VertexFunction, phi: BoundaryData):
    interior_res = interior_laplacian(sub, u)
    res_int = max((abs(interior_res[x]) for x in sub.interior), default=0.0)
    nd = normal_derivative(sub, u)
    res_bd = max(abs(nd[y] - phi.values[y]) for y in sub.boundary)
    mv = sub.measure.to_vector(sub.closure)
    centering = float(u.to_vector(sub.closure) @ mv)
    return res_int, res_bd, centering


def _finish(sub, uvec, phi, method, horizon=None) -> NeumannSolution:
    u = VertexFunction.from_vector(sub.closure, uvec)
    res_int, res_bd, centering = _diagnostics(sub, u, phi)
    return NeumannSolution(
        u=u,
        method=method,
        residual_interior=res_int,
        residual_boundary=res_bd,
        centering=centering,
        truncation_horizon=horizon,
    )


def _augmented_solve(laplacian: np.ndarray, mv: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve the singular symmetric system with the centering row appended
    as a Lagrange constraint; returns the centered solution."""
    n = laplacian.shape[0]
    K = np.zeros((n + 1, n + 1))
    K[:n, :n] = laplacian
    K[:n, n] = mv
    K[n, :n] = mv
    b = np.zeros(n + 1)
    b[:n] = rhs
    sol = scipy.linalg.solve(K, b, assume_a="sym")
    return sol[:n]


def solve_direct(sub: SubgraphClosure, phi) -> NeumannSolution:
    """Direct route: one augmented linear solve of the closure Laplacian
    with the boundary data as right-hand side and exact centering."""
    phi = _coerce_boundary_data(sub, phi)
    _require_compatible(phi)
    g = sub.graph
    mv = sub.measure.to_vector(sub.closure)
    rhs = np.zeros(g.n)
    for y in sub.boundary:
        rhs[g.index(y)] = phi.values[y] * sub.measure[y]
    uvec = _augmented_solve(g.laplacian_matrix, mv, rhs)
    return _finish(sub, uvec, phi, "direct")


def solve_green(sub: SubgraphClosure, phi, spec: Spectrum) -> NeumannSolution:
    """Green-kernel route: u(x) = sum over boundary y of
    phi(y) g(x,y) m(y); centered automatically since the kernel rows
    integrate to zero."""
    phi = _coerce_boundary_data(sub, phi)
    check_spectrum_matches(spec, sub.graph, sub.measure)
    _require_compatible(phi)
    G = green_kernel(spec).entries
    g = sub.graph
    uvec = np.zeros(g.n)
    for y in sub.boundary:
        uvec += phi.values[y] * sub.measure[y] * G[:, g.index(y)]
    return _finish(sub, uvec, phi, "green")


def solve_heat_integral(sub: SubgraphClosure, phi, spec: Spectrum, tol: float) -> NeumannSolution:
    """Heat-semigroup route: integrate the centered kernel against the
    boundary data up to a horizon T, per eigenmode in closed form.

    T is chosen from the mixing bound so the neglected tail is below
    ``tol`` in sup norm; the result is recentered.
    """
    phi = _coerce_boundary_data(sub, phi)
    check_spectrum_matches(spec, sub.graph, sub.measure)
    if not (isinstance(tol, (int, float)) and tol > 0):
        raise NonpositiveToleranceError(f"tolerance must be positive, got {tol}")
    _require_compatible(phi)

    g = sub.graph
    mass = sum(abs(phi.values[y]) * sub.measure[y] for y in sub.boundary)
    if mass == 0.0:
        return _finish(sub, np.zeros(g.n), phi, "heat-integral", horizon=0.0)

    c1, c2 = mixing_constants(spec, 1e-9)
    # tail of the time integral beyond T is bounded by c1 * mass * e^{-c2 T} / c2
    T = math.log(c1 * mass / (c2 * tol)) / c2
    T = max(T, 1e-6)

    # phi extended by zero to the closure, as dictated by the boundary sum
    fvec = np.zeros(g.n)
    for y in sub.boundary:
        fvec[g.index(y)] = phi.values[y]
    coef = spec.coefficients(fvec)
    k0 = spec.n_zero_modes
    lam = spec.eigenvalues[k0:]
    weights = -np.expm1(-lam * T) / lam
    uvec = spec.basis[:, k0:] @ (weights * coef[k0:])

    mv = sub.measure.to_vector(sub.closure)
    uvec -= (uvec @ mv) / sub.measure.total
    return _finish(sub, uvec, phi, "heat-integral", horizon=T)


def solve_boundary_measure(g: WeightedGraph, boundary, m: Measure, mu: Measure, phi) -> NeumannSolution:
    """Neumann problem for a designated boundary set carrying its own
    finite measure mu, on the whole graph.

    The solution is the centered u with vanishing Laplacian off the
    boundary and m(y) * (Laplacian u)(y) = phi(y) mu(y) on it, i.e. the
    weak identity Q(u, v) = sum phi v dmu specialized to indicators.
    Compatibility is centering against mu.  With mu equal to the ambient
    measure restricted to the vertex boundary of a closure this
    reproduces ``solve_direct``.
    """
    boundary = tuple(str(v) for v in boundary)
    if not boundary:
        raise DomainMismatchError("designated boundary set is empty")
    for y in boundary:
        if y not in g:
            raise DomainMismatchError(f"boundary vertex {y!r} not in graph", vertex=y)
    if not is_connected(g):
        raise DisconnectedError("graph is not connected")
    if isinstance(phi, BoundaryData):
        if phi.measure != mu:
            raise DomainMismatchError(
                "boundary data carries a different measure than mu"
            )
        values = phi.values
    else:
        values = phi if isinstance(phi, VertexFunction) else VertexFunction(dict(phi))
    data = BoundaryData(values=values, measure=mu)
    if data.boundary != frozenset(boundary):
        raise DomainMismatchError(
            "boundary data is not defined exactly on the designated boundary",
            expected=sorted(boundary),
            got=sorted(data.boundary),
        )
    _require_compatible(data)

    mv = m.to_vector(g.vertices)
    rhs = np.zeros(g.n)
    for y in boundary:
        rhs[g.index(y)] = data.values[y] * mu[y]
    uvec = _augmented_solve(g.laplacian_matrix, mv, rhs)

    u = VertexFunction.from_vector(g.vertices, uvec)
    # diagnostics: Laplacian residual off the boundary, weak-identity
    # mismatch on it, both in the mu-weighted normalization
    lap = g.laplacian_matrix @ uvec
    res_int = 0.0
    res_bd = 0.0
    bset = set(boundary)
    for i, x in enumerate(g.vertices):
        if x in bset:
            res_bd = max(res_bd, abs(lap[i] - data.values[x] * mu[x]) / mu[x])
        else:
            res_int = max(res_int, abs(lap[i]) / mv[i])
    centering = float(uvec @ mv)
    return NeumannSolution(
        u=u,
        method="direct",
        residual_interior=res_int,
        residual_boundary=res_bd,
        centering=centering,
    )


def verify_solution(sub: SubgraphClosure, sol: NeumannSolution, phi, tol: float = 1e-9) -> SolutionReport:
    """Recompute the residuals of a claimed solution from scratch.

    Returns the interior Laplacian residual, the boundary mismatch, and
    the centering total, with a pass/fail verdict against ``tol``.
    """
    phi = _coerce_boundary_data(sub, phi)
    res_int, res_bd, centering = _diagnostics(sub, sol.u, phi)
    passed = res_int <= tol and res_bd <= tol and abs(centering) <= tol * max(1.0, sub.measure.total)
    return SolutionReport(
        residual_interior=res_int,
        residual_boundary=res_bd,
        centering=centering,
        tolerance=tol,
        passed=passed,
    )
