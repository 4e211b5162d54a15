import math

import numpy as np
import pytest

import gneumann as gn
from gneumann import BoundaryData, VertexFunction
from gneumann.errors import (
    DomainMismatchError,
    IncompatibleDataError,
    NonpositiveToleranceError,
    SpectrumMismatchError,
)
from instances import random_centered_phi, random_closure, random_noncentered_phi


@pytest.fixture
def p3_weighted(p3):
    sub = gn.closure_subgraph(p3, ["2"], gn.Measure({"1": 2.0, "2": 1.0, "3": 1.0}))
    phi = BoundaryData.for_closure(sub, {"1": 1.0, "3": -2.0})
    return sub, phi


def test_check_compatibility_examples(p3_closure, p3_weighted):
    phi = BoundaryData.for_closure(p3_closure, {"1": 1.0, "3": -1.0})
    assert gn.check_compatibility(phi) == 0.0
    bad = BoundaryData.for_closure(p3_closure, {"1": 1.0, "3": 1.0})
    assert gn.check_compatibility(bad) == 2.0
    assert not gn.is_compatible(bad)
    sub, wphi = p3_weighted
    assert gn.check_compatibility(wphi) == 0.0  # 1*2 + (-2)*1


def test_solve_direct_p3(p3_closure, p3_phi):
    sol = gn.solve_direct(p3_closure, p3_phi)
    assert sol.u["1"] == pytest.approx(1.0, abs=1e-12)
    assert sol.u["2"] == pytest.approx(0.0, abs=1e-12)
    assert sol.u["3"] == pytest.approx(-1.0, abs=1e-12)
    assert sol.residual_interior <= 1e-12
    assert sol.residual_boundary <= 1e-12
    assert abs(sol.centering) <= 1e-12


def test_solve_direct_zero_data_gives_zero(p3_closure):
    phi = BoundaryData.for_closure(p3_closure, {"1": 0.0, "3": 0.0})
    sol = gn.solve_direct(p3_closure, phi)
    assert all(abs(v) <= 1e-13 for v in sol.u.values.values())


def test_solve_direct_weighted_fixture(p3_weighted):
    # oracle: the defining equations by hand --
    #   boundary flux:  (1/2)(u1 - u2) = 1,  (u3 - u2) = -2
    #   interior:       2 u2 - u1 - u3 = 0
    #   centering:      2 u1 + u2 + u3 = 0
    # which pin u = (3/2, -1/2, -5/2); verified below by the recomputed
    # residuals, not only the frozen values
    sub, phi = p3_weighted
    sol = gn.solve_direct(sub, phi)
    assert sol.u["1"] == pytest.approx(1.5, abs=1e-12)
    assert sol.u["2"] == pytest.approx(-0.5, abs=1e-12)
    assert sol.u["3"] == pytest.approx(-2.5, abs=1e-12)
    report = gn.verify_solution(sub, sol, phi, tol=1e-10)
    assert report.passed
    assert report.residual_interior <= 1e-12
    assert report.residual_boundary <= 1e-12


def test_solve_direct_rejects_incompatible(p3_closure):
    bad = BoundaryData.for_closure(p3_closure, {"1": 1.0, "3": 1.0})
    with pytest.raises(IncompatibleDataError):
        gn.solve_direct(p3_closure, bad)


def test_solve_green_p3(p3_closure, p3_phi):
    spec = gn.eigendecompose(p3_closure.graph, p3_closure.measure)
    sol = gn.solve_green(p3_closure, p3_phi, spec)
    # u(1) = g(1,1) - g(1,3) = 5/9 + 4/9 = 1
    assert sol.u["1"] == pytest.approx(1.0, abs=1e-12)
    assert sol.u["2"] == pytest.approx(0.0, abs=1e-12)
    assert sol.u["3"] == pytest.approx(-1.0, abs=1e-12)


def test_solve_green_zero_data(p3_closure):
    spec = gn.eigendecompose(p3_closure.graph, p3_closure.measure)
    phi = BoundaryData.for_closure(p3_closure, {"1": 0.0, "3": 0.0})
    sol = gn.solve_green(p3_closure, phi, spec)
    assert all(v == 0.0 for v in sol.u.values.values())


def test_solve_green_rejects_foreign_spectrum(p3_closure, p3_phi, two_vertex):
    g, m = two_vertex
    foreign = gn.eigendecompose(g, m)
    with pytest.raises(SpectrumMismatchError):
        gn.solve_green(p3_closure, p3_phi, foreign)


def test_solve_heat_integral_p3(p3_closure, p3_phi):
    spec = gn.eigendecompose(p3_closure.graph, p3_closure.measure)
    sol = gn.solve_heat_integral(p3_closure, p3_phi, spec, tol=1e-10)
    assert sol.u["1"] == pytest.approx(1.0, abs=1e-9)
    assert sol.u["3"] == pytest.approx(-1.0, abs=1e-9)
    assert sol.truncation_horizon > 0


def test_solve_heat_integral_zero_data(p3_closure):
    spec = gn.eigendecompose(p3_closure.graph, p3_closure.measure)
    phi = BoundaryData.for_closure(p3_closure, {"1": 0.0, "3": 0.0})
    sol = gn.solve_heat_integral(p3_closure, phi, spec, tol=1e-8)
    assert all(v == 0.0 for v in sol.u.values.values())


def test_solve_heat_integral_rejects_bad_tolerance(p3_closure, p3_phi):
    spec = gn.eigendecompose(p3_closure.graph, p3_closure.measure)
    with pytest.raises(NonpositiveToleranceError):
        gn.solve_heat_integral(p3_closure, p3_phi, spec, tol=0.0)


def test_heat_integral_truncation_monotone(p3_closure, p3_phi):
    spec = gn.eigendecompose(p3_closure.graph, p3_closure.measure)
    u_green = gn.solve_green(p3_closure, p3_phi, spec).u.to_vector(p3_closure.closure)
    prev = None
    for tol in [1e-4, 5e-5, 2.5e-5, 1e-6, 1e-9]:
        sol = gn.solve_heat_integral(p3_closure, p3_phi, spec, tol=tol)
        gap = float(np.max(np.abs(sol.u.to_vector(p3_closure.closure) - u_green)))
        if prev is not None:
            assert gap <= prev + 1e-15
        prev = gap


def test_solve_boundary_measure_fixture(p3):
    m = gn.Measure.uniform(p3.vertices)
    mu = gn.Measure({"1": 2.0, "3": 2.0})
    sol = gn.solve_boundary_measure(p3, ["1", "3"], m, mu, {"1": 1.0, "3": -1.0})
    assert sol.u["1"] == pytest.approx(2.0, abs=1e-12)
    assert sol.u["2"] == pytest.approx(0.0, abs=1e-12)
    assert sol.u["3"] == pytest.approx(-2.0, abs=1e-12)
    assert sol.residual_interior <= 1e-12
    assert sol.residual_boundary <= 1e-12


def test_solve_boundary_measure_zero_data(p3):
    m = gn.Measure.uniform(p3.vertices)
    mu = gn.Measure({"1": 1.0, "3": 3.0})
    sol = gn.solve_boundary_measure(p3, ["1", "3"], m, mu, {"1": 0.0, "3": 0.0})
    assert all(abs(v) <= 1e-13 for v in sol.u.values.values())


def test_solve_boundary_measure_reduces_to_direct(p3_closure, p3_phi):
    direct = gn.solve_direct(p3_closure, p3_phi)
    mu = p3_closure.boundary_measure()
    via_measure = gn.solve_boundary_measure(
        p3_closure.graph, p3_closure.boundary, p3_closure.measure, mu, p3_phi.values
    )
    for v in p3_closure.closure:
        assert via_measure.u[v] == pytest.approx(direct.u[v], abs=1e-10)


def test_solve_boundary_measure_green_representation(p3):
    # the solution is also the mu-weighted Green-kernel sum over the boundary
    m = gn.Measure({"1": 1.0, "2": 2.0, "3": 1.0})
    mu = gn.Measure({"1": 3.0, "3": 1.0})
    phi = VertexFunction({"1": 1.0, "3": -3.0})  # centered against mu
    sol = gn.solve_boundary_measure(p3, ["1", "3"], m, mu, phi)
    spec = gn.eigendecompose(p3, m)
    G = gn.green_kernel(spec)
    for x in p3.vertices:
        expected = sum(phi[y] * G.entry(x, y) * mu[y] for y in ("1", "3"))
        assert sol.u[x] == pytest.approx(expected, abs=1e-10)


def test_verify_solution_exact(p3_closure, p3_phi):
    sol = gn.solve_direct(p3_closure, p3_phi)
    report = gn.verify_solution(p3_closure, sol, p3_phi, tol=1e-10)
    assert report.passed
    assert report.residual_interior <= 1e-12
    assert report.residual_boundary <= 1e-12
    assert abs(report.centering) <= 1e-12


def test_verify_solution_detects_perturbation(p3_closure, p3_phi):
    sol = gn.solve_direct(p3_closure, p3_phi)
    eps = 1e-3
    bumped = dict(sol.u.values)
    bumped["2"] += eps  # interior vertex
    fake = gn.NeumannSolution(
        u=VertexFunction(bumped), method="direct",
        residual_interior=0.0, residual_boundary=0.0, centering=0.0,
    )
    report = gn.verify_solution(p3_closure, fake, p3_phi, tol=1e-10)
    assert not report.passed
    # degree 2, unit measure: the interior residual is eps * deg / m
    assert report.residual_interior == pytest.approx(2 * eps, rel=1e-9)


def test_verify_solution_constant_shift(p3_closure, p3_phi):
    sol = gn.solve_direct(p3_closure, p3_phi)
    c = 0.75
    shifted = gn.NeumannSolution(
        u=VertexFunction({x: v + c for x, v in sol.u.values.items()}),
        method="direct", residual_interior=0.0, residual_boundary=0.0, centering=0.0,
    )
    report = gn.verify_solution(p3_closure, shifted, p3_phi, tol=1e-10)
    assert report.residual_interior <= 1e-12
    assert report.residual_boundary <= 1e-12
    assert report.centering == pytest.approx(c * p3_closure.measure.total, rel=1e-12)


def test_methods_agree_and_differ_by_constant_before_centering():
    rng = np.random.default_rng(31)
    for _ in range(10):
        sub = random_closure(rng, n_min=4, n_max=12)
        phi = random_centered_phi(rng, sub)
        spec = gn.eigendecompose(sub.graph, sub.measure)
        u1 = gn.solve_direct(sub, phi).u.to_vector(sub.closure)
        u2 = gn.solve_green(sub, phi, spec).u.to_vector(sub.closure)
        u3 = gn.solve_heat_integral(sub, phi, spec, tol=1e-10).u.to_vector(sub.closure)
        assert np.max(np.abs(u1 - u2)) <= 1e-9
        assert np.max(np.abs(u1 - u3)) <= 1e-9
        diff = u1 - u2
        assert np.max(diff) - np.min(diff) <= 1e-9  # constant difference


def test_compatibility_necessity():
    rng = np.random.default_rng(37)
    for _ in range(20):
        sub = random_closure(rng, n_min=3, n_max=9)
        bad = random_noncentered_phi(rng, sub)
        with pytest.raises(IncompatibleDataError):
            gn.solve_direct(sub, bad)
        good = random_centered_phi(rng, sub)
        gn.solve_direct(sub, good)  # must not raise


def test_weak_form_identity():
    # Q(u, v) equals the boundary pairing for arbitrary test functions
    rng = np.random.default_rng(43)
    for _ in range(5):
        sub = random_closure(rng, n_min=4, n_max=10)
        phi = random_centered_phi(rng, sub)
        u = gn.solve_direct(sub, phi).u
        mv = sub.measure.to_vector(sub.closure)
        for _ in range(50):
            v = VertexFunction.from_vector(sub.closure, rng.uniform(-1, 1, len(mv)))
            lhs = gn.energy_bilinear(sub.graph, u, v)
            rhs = sum(phi.values[y] * v[y] * sub.measure[y] for y in sub.boundary)
            vvec = v.to_vector(sub.closure)
            vnorm = math.sqrt(gn.energy(sub.graph, v) + float(vvec @ (mv * vvec)))
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, vnorm)


def test_solver_linearity():
    rng = np.random.default_rng(47)
    sub = random_closure(rng, n_min=5, n_max=9)
    phi1 = random_centered_phi(rng, sub)
    phi2 = random_centered_phi(rng, sub)
    a, b = 1.75, -0.5
    combo = BoundaryData.for_closure(sub, {
        y: a * phi1.values[y] + b * phi2.values[y] for y in sub.boundary
    })
    u_combo = gn.solve_direct(sub, combo).u.to_vector(sub.closure)
    u1 = gn.solve_direct(sub, phi1).u.to_vector(sub.closure)
    u2 = gn.solve_direct(sub, phi2).u.to_vector(sub.closure)
    assert np.max(np.abs(u_combo - (a * u1 + b * u2))) <= 1e-9


def test_boundary_measure_consistency_random():
    rng = np.random.default_rng(53)
    for _ in range(10):
        sub = random_closure(rng, n_min=4, n_max=10)
        phi = random_centered_phi(rng, sub)
        direct = gn.solve_direct(sub, phi).u.to_vector(sub.closure)
        via = gn.solve_boundary_measure(
            sub.graph, sub.boundary, sub.measure, sub.boundary_measure(), phi.values
        ).u.to_vector(sub.closure)
        assert np.max(np.abs(direct - via)) <= 1e-10


def test_boundary_data_domain_checks(p3_closure):
    with pytest.raises(DomainMismatchError):
        BoundaryData.for_closure(p3_closure, {"1": 1.0})  # missing vertex 3
    with pytest.raises(DomainMismatchError):
        gn.solve_direct(p3_closure, BoundaryData(
            values=VertexFunction({"1": 1.0, "2": -1.0}),
            measure=gn.Measure({"1": 1.0, "2": 1.0}),
        ))


def test_project_centered(p3_closure):
    bad = BoundaryData.for_closure(p3_closure, {"1": 1.0, "3": 1.0})
    projected, shift = bad.project_centered()
    assert shift == pytest.approx(1.0)
    assert gn.is_compatible(projected)
    gn.solve_direct(p3_closure, projected)  # solvable after projection
