from __future__ import annotations

import math

import numpy as np
import pytest

import projbodies as pb
from conftest import gauss_edge_weight


def test_builtin_flags(gauss2, leb2):
    assert gauss2.even and gauss2.radially_decreasing
    assert leb2.radially_nondecreasing and leb2.radially_decreasing
    rp = pb.radial_power(2, 1.5)
    assert rp.radially_nondecreasing and rp.even
    mu = pb.exp_norm(pb.cube(2))
    assert mu.even and "log_concave" in mu.concavity


def test_flag_certification_rejects_lies():
    with pytest.raises(pb.ConfigurationError):
        pb.custom_density(
            2,
            eval=lambda p: np.atleast_2d(p)[:, 0] + 10.0,  # not even
            grad=lambda p: np.zeros_like(np.atleast_2d(p)),
            even=True)


def test_gradient_consistency(gauss2):
    """Central differences match the declared gradient at smooth points."""
    gen = pb.RandomStream(5).generator()
    pts = gen.standard_normal((100, 2))
    h = 1e-6
    for mu in (gauss2, pb.radial_power(2, 2.0)):
        g = mu.grad(pts)
        for j in range(2):
            e = np.zeros(2)
            e[j] = h
            fd = (mu.eval(pts + e) - mu.eval(pts - e)) / (2 * h)
            tol = np.maximum(1e-6, 1e-4 * np.abs(g[:, j]))
            assert np.all(np.abs(fd - g[:, j]) <= tol + 1e-5)


def test_exp_norm_gradient_off_kinks():
    mu = pb.exp_norm(pb.cube(2))
    pts = np.array([[0.5, 0.1], [-0.7, 0.2], [0.1, 0.9]])
    g = mu.grad(pts)
    h = 1e-7
    for j in range(2):
        e = np.zeros(2)
        e[j] = h
        fd = (mu.eval(pts + e) - mu.eval(pts - e)) / (2 * h)
        assert np.allclose(fd, g[:, j], atol=1e-5)


def test_measure_body_lebesgue_exact(triangle, leb2):
    res = pb.measure_body(leb2, triangle)
    assert res.value == pytest.approx(0.5) and res.error_estimate == 0.0


def test_measure_body_gaussian_square(square, gauss2, stream):
    res = pb.measure_body(gauss2, square, stream, 200_000)
    truth = (2 * pb.gaussian_cdf(1.0) - 1) ** 2
    assert abs(res.value - truth) <= res.error_estimate
    rerun = pb.measure_body(gauss2, square, stream, 200_000)
    assert rerun.value == res.value  # bit-identical per stream


def test_exp_norm_total_mass(square):
    mu = pb.exp_norm(square)
    res = pb.total_mass(mu, body=square)
    assert abs(res.value - 2 * 4.0) < 1e-6  # n! Vol(K) = 2 * 4
    hexagon = pb.difference_body(pb.standard_simplex(2))
    mu = pb.exp_norm(hexagon)
    res = pb.total_mass(mu, body=hexagon)
    assert abs(res.value - 2 * hexagon.volume) < 1e-6


def test_facet_weights_lebesgue(square, triangle, leb2):
    w, e = pb.facet_weights(leb2, square)
    assert np.allclose(w, 2.0) and np.all(e == 0)
    w, _ = pb.facet_weights(leb2, triangle)
    assert sorted(w) == pytest.approx([1.0, 1.0, math.sqrt(2)])


def test_facet_weights_gaussian_square(square, gauss2):
    w, e = pb.facet_weights(gauss2, square, 1e-10)
    oracle = gauss_edge_weight()
    assert oracle == pytest.approx(0.16519, abs=1e-5)
    assert np.allclose(w, oracle, atol=1e-9)
    assert np.all(e < 1e-8)


def test_boundary_measure(square, triangle, gauss2, leb2):
    assert pb.boundary_measure(leb2, square).value == pytest.approx(8.0)
    assert pb.boundary_measure(leb2, triangle).value == pytest.approx(2 + math.sqrt(2))
    res = pb.boundary_measure(gauss2, square, 1e-10)
    assert res.value == pytest.approx(4 * gauss_edge_weight(), abs=1e-8)


def test_boundary_measure_cauchy_identity(square, gauss2):
    """mu(dK) = (1/kappa_{n-1}) integral of h_{Pi_mu K} over the sphere."""
    zon = pb.projection_zonoid(square, gauss2, tol=1e-10)
    grid = pb.sphere_directions(2, 8192)
    integral = float(np.sum(grid.weights * zon.support(grid.directions)))
    bm = pb.boundary_measure(gauss2, square, 1e-10)
    assert integral / 2.0 == pytest.approx(bm.value, rel=1e-6)


def test_facet_weights_3d_gaussian(cube3):
    g3 = pb.gaussian(3)
    w, e = pb.facet_weights(g3, cube3, 1e-8)
    # per-face oracle: pdf(1) * (2 Phi(1) - 1)^2 by separability
    pdf1 = math.exp(-0.5) / math.sqrt(2 * math.pi)
    oracle = pdf1 * (2 * pb.gaussian_cdf(1.0) - 1) ** 2
    assert np.allclose(w, oracle, atol=1e-7)
    assert np.all(e < 1e-6)


def test_radial_power_rejects_boundary_origin():
    rp = pb.radial_power(2, 0.5)
    K = pb.build_polytope([[0, 0], [1, 0], [0, 1]])  # origin on boundary
    with pytest.raises(pb.DomainError):
        pb.facet_weights(rp, K)


def test_family_eval():
    pf = pb.power_family(0.5)
    assert pb.family_eval(pf, "F", 4.0) == pytest.approx(2.0)
    lf = pb.log_family()
    assert pb.family_eval(lf, "Finv", 0.0) == pytest.approx(1.0)
    gf = pb.gaussian_phi_inverse_family()
    assert pb.family_eval(gf, "F", 0.841345) == pytest.approx(1.0, abs=1e-5)
    with pytest.raises(pb.DomainError):
        pb.family_eval(pf, "F", -1.0)
    with pytest.raises(pb.DomainError):
        pb.family_eval(gf, "F", 1.5)


@pytest.mark.parametrize("fam_name", ["power", "log", "gaussian_phi_inverse"])
def test_family_derivative_consistency(fam_name):
    fam = {"power": pb.power_family(0.3), "log": pb.log_family(),
           "gaussian_phi_inverse": pb.gaussian_phi_inverse_family()}[fam_name]
    lo, hi = fam.domain
    xs = np.linspace(max(lo, 0.05), min(hi, 4.0) - 0.05, 9)
    for x in xs:
        h = 1e-6 * max(1.0, abs(x))
        fd = (fam.F(x + h) - fam.F(x - h)) / (2 * h)
        assert abs(fd - fam.Fprime(x)) <= 1e-6 * max(1.0, abs(fam.Fprime(x)))
        assert fam.F(fam.Finv(fam.F(x))) == pytest.approx(fam.F(x), rel=1e-9)


def test_compose_linear(gauss2):
    T = pb.LinearMap(np.diag([2.0, 0.5]))
    muT = pb.compose_linear(gauss2, T)
    pts = pb.RandomStream(3).generator().standard_normal((50, 2))
    assert np.allclose(muT.eval(pts), gauss2.eval(pts @ T.matrix.T))
    g = muT.grad(pts)
    h = 1e-6
    for j in range(2):
        e = np.zeros(2)
        e[j] = h
        fd = (muT.eval(pts + e) - muT.eval(pts - e)) / (2 * h)
        assert np.allclose(fd, g[:, j], atol=1e-6)
