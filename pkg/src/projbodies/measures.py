"""Density catalog, measure evaluation on bodies and boundaries.

A ``Density`` is an evaluatable Radon-Nikodym derivative phi >= 0 with an
almost-everywhere gradient, symmetry/monotonicity flags and a concavity
classification.  Flags are semantic inputs (no automatic concavity
detection); builtin densities certify their declared flags against 1000
random probes at construction time.

Boundary integrals resolve per facet: mu(dK) is the facet-integral form of
the weighted surface-area measure, computed by recursive simplex subdivision
with a degree-2 cubature rule.  For polytopes with phi continuous near dK
this coincides with the liminf definition of the boundary measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from . import bodies
from .bodies import Polytope
from .numerics import (BoxSampler, ConfigurationError, DomainError,
                       EvaluationError, QuadratureFailure, QuadratureResult,
                       RandomStream, SphereGrid, integrate_1d, monte_carlo)

DEFAULT_MC_SAMPLES = 200_000


@dataclass(frozen=True)
class Density:
    """Weight function of a measure with locally integrable density.

    ``eval`` and ``grad`` are vectorized over (m, n) point arrays.  The
    ``concavity`` set may contain "log_concave" and "ehrhard_gaussian";
    ``s_concave`` (and ``s_concave_symmetric`` for concavity that only holds
    on symmetric convex bodies) carry the power-concavity exponent.
    """

    n: int
    eval: Callable[[np.ndarray], np.ndarray]
    grad: Callable[[np.ndarray], np.ndarray]
    even: bool = False
    radially_nondecreasing: bool = False
    radially_decreasing: bool = False
    concavity: frozenset = frozenset()
    s_concave: float | None = None
    s_concave_symmetric: float | None = None
    label: str = "custom"

    def __repr__(self):
        return f"Density({self.label}, n={self.n})"

    @property
    def is_lebesgue(self) -> bool:
        return self.label == "lebesgue"


def _certify_flags(d: Density, probes: int = 1000) -> Density:
    """Reject construction when a declared flag fails on random probes."""
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(2718)))
    x = gen.standard_normal((probes, d.n)) * 2.0
    fx = np.asarray(d.eval(x), dtype=float)
    if np.any(fx < 0) or not np.all(np.isfinite(fx)):
        raise ConfigurationError(f"{d.label}: density must be finite and >= 0")
    if d.even:
        if np.max(np.abs(np.asarray(d.eval(-x)) - fx)) > 1e-12 * (1 + fx.max()):
            raise ConfigurationError(f"{d.label}: evenness flag violated")
    t = gen.random((probes, 1))
    if d.radially_nondecreasing:
        if np.any(np.asarray(d.eval(t * x)) > fx + 1e-12):
            raise ConfigurationError(
                f"{d.label}: radially_nondecreasing flag violated")
    if d.radially_decreasing:
        if np.any(np.asarray(d.eval(t * x)) < fx - 1e-12):
            raise ConfigurationError(
                f"{d.label}: radially_decreasing flag violated")
    return d


def lebesgue(n: int) -> Density:
    return _certify_flags(Density(
        n=n,
        eval=lambda p: np.ones(np.atleast_2d(p).shape[0]),
        grad=lambda p: np.zeros_like(np.atleast_2d(p), dtype=float),
        even=True, radially_nondecreasing=True, radially_decreasing=True,
        concavity=frozenset({"log_concave"}), s_concave=1.0 / n,
        s_concave_symmetric=1.0 / n, label="lebesgue"))


def gaussian(n: int) -> Density:
    """Standard Gaussian gamma_n; log-concave, Ehrhard-concave, and
    1/n-concave on symmetric convex bodies."""
    norm = (2.0 * np.pi) ** (-n / 2.0)

    def ev(p):
        p = np.atleast_2d(p)
        return norm * np.exp(-0.5 * np.sum(p * p, axis=1))

    def gr(p):
        p = np.atleast_2d(p)
        return -p * ev(p)[:, None]

    return _certify_flags(Density(
        n=n, eval=ev, grad=gr, even=True, radially_decreasing=True,
        concavity=frozenset({"log_concave", "ehrhard_gaussian"}),
        s_concave_symmetric=1.0 / n, label="gaussian"))


def exp_norm(L: Polytope) -> Density:
    """phi(x) = exp(-||x||_L) for a symmetric polytope L with 0 interior."""
    if not L.is_symmetric():
        raise ConfigurationError("exp_norm needs a symmetric body")
    if np.min(L.offsets) <= 1e-9:
        raise ConfigurationError("exp_norm needs the origin strictly interior")
    U = L.normals / L.offsets[:, None]  # ||x||_L = max_i <U_i, x>

    def norm_L(p):
        return np.max(np.atleast_2d(p) @ U.T, axis=1)

    def ev(p):
        return np.exp(-norm_L(p))

    def gr(p):
        p = np.atleast_2d(p)
        scores = p @ U.T
        j = np.argmax(scores, axis=1)
        return -np.exp(-scores[np.arange(len(p)), j])[:, None] * U[j]

    return _certify_flags(Density(
        n=L.n, eval=ev, grad=gr, even=True, radially_decreasing=True,
        concavity=frozenset({"log_concave"}), label="exp_norm"))


def radial_power(n: int, alpha: float) -> Density:
    """phi(x) = |x|^alpha, alpha >= 0: the radially non-decreasing exemplar.

    Undefined gradient at 0; bodies whose boundary passes through the origin
    are rejected by the facet cubature.
    """
    if alpha < 0:
        raise ConfigurationError("radial_power needs alpha >= 0")

    def ev(p):
        return np.linalg.norm(np.atleast_2d(p), axis=1) ** alpha

    def gr(p):
        p = np.atleast_2d(p)
        r = np.linalg.norm(p, axis=1)
        r = np.where(r == 0.0, np.inf, r)
        return alpha * r[:, None] ** (alpha - 2.0) * p

    return _certify_flags(Density(
        n=n, eval=ev, grad=gr, even=True, radially_nondecreasing=True,
        label=f"radial_power({alpha})"))


def custom_density(n, eval, grad, label="custom", **flags) -> Density:
    """User-supplied density; flags are declared, then probe-certified."""
    return _certify_flags(Density(n=n, eval=eval, grad=grad, label=label, **flags))


def compose_linear(mu: Density, T) -> Density:
    """Density of mu^T, namely phi(T x); gradient T^t grad(phi)(T x)."""
    M = T.matrix if hasattr(T, "matrix") else np.asarray(T, dtype=float)

    def ev(p):
        return mu.eval(np.atleast_2d(p) @ M.T)

    def gr(p):
        return mu.grad(np.atleast_2d(p) @ M.T) @ M

    return Density(n=mu.n, eval=ev, grad=gr, even=mu.even,
                   radially_nondecreasing=False, radially_decreasing=False,
                   concavity=mu.concavity, s_concave=mu.s_concave,
                   s_concave_symmetric=None, label=f"{mu.label}∘T")


# -- measures of bodies -------------------------------------------------------

def measure_body(mu: Density, K, stream: RandomStream | None = None,
                 N: int = DEFAULT_MC_SAMPLES) -> QuadratureResult:
    """mu(K): exact for Lebesgue, otherwise Monte Carlo over K's box."""
    if mu.is_lebesgue:
        return QuadratureResult(bodies.volume(K), 0.0, 0)
    if stream is None:
        raise ConfigurationError("non-Lebesgue measures need a RandomStream")
    lo, hi = K.bounding_box()
    sampler = BoxSampler(lo, hi)
    contains = K.contains

    def integrand(p):
        return mu.eval(p) * contains(p)

    return monte_carlo(sampler, integrand, N, stream)


def gaussian_ball_mass(n: int, radius: float) -> float:
    """gamma_n of a centered ball: P(chi_n <= radius)."""
    return float(special.gammainc(n / 2.0, radius ** 2 / 2.0))


def exp_norm_mass_of_scaled(L: Polytope, t: float) -> float:
    """Mass of exp(-||.||_L) over t*L: n! Vol(L) P(n, t), exactly.

    Fubini along rays: the radial integral of exp(-r/rho) r^{n-1} over
    [0, t*rho] is rho^n times the lower incomplete gamma at t.
    """
    n = L.n
    return math.factorial(n) * L.volume * float(special.gammainc(n, t))


def total_mass(mu: Density, grid: SphereGrid | None = None,
               tol: float = 1e-10, body: Polytope | None = None) -> QuadratureResult:
    """mu(R^n) for densities with finite mass (gaussian, exp_norm).

    For exp_norm the radial integral is exact per direction, leaving an
    angular integral of Gamma(n) rho_L^n: adaptive in the plane, grid
    quadrature for n >= 3 (pass ``body`` = the generating polytope).
    """
    if mu.label == "gaussian":
        return QuadratureResult(1.0, 0.0, 0)
    if mu.label != "exp_norm":
        raise DomainError(f"total mass of {mu.label} is not finite/supported")
    if body is None:
        raise ConfigurationError("total_mass(exp_norm) needs the generating body")
    n = body.n
    gam = special.gamma(n)
    if n == 2:
        def f(a):
            return gam * bodies.radial(body, np.array([math.cos(a), math.sin(a)])) ** n
        return integrate_1d(f, 0.0, 2.0 * np.pi, tol)
    if grid is None:
        raise ConfigurationError("total_mass(exp_norm) needs a grid for n >= 3")
    rho = bodies.radial_many(body, grid.directions)
    val = float(np.sum(grid.weights * gam * rho ** n))
    return QuadratureResult(val, abs(val) * 1e-3, grid.count)


# -- facet cubature -----------------------------------------------------------

_TET_A = 0.5854101966249685
_TET_B = 0.1381966011250105
_MAX_DEPTH = 14


def _rule_nodes(simplex: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Degree-2 cubature nodes/weights (summing to 1) on a (d)-simplex."""
    d = len(simplex) - 1
    if d == 1:
        # 2-point Gauss-Legendre
        a = 0.5 - math.sqrt(3.0) / 6.0
        bary = np.array([[1 - a, a], [a, 1 - a]])
        w = np.array([0.5, 0.5])
    elif d == 2:
        # edge midpoints, exact for quadratics
        bary = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
        w = np.array([1, 1, 1]) / 3.0
    else:
        bary = np.full((4, 4), _TET_B)
        np.fill_diagonal(bary, _TET_A)
        w = np.full(4, 0.25)
    return bary @ simplex, w


def _split_simplex(simplex: np.ndarray) -> list[np.ndarray]:
    d = len(simplex) - 1
    if d == 1:
        m = 0.5 * (simplex[0] + simplex[1])
        return [np.array([simplex[0], m]), np.array([m, simplex[1]])]
    if d == 2:
        a, b, c = simplex
        ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
        return [np.array(t) for t in
                ([a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca])]
    # red refinement of a tetrahedron into 8 children
    v = simplex
    m = {(i, j): 0.5 * (v[i] + v[j]) for i in range(4) for j in range(i + 1, 4)}
    kids = [
        [v[0], m[0, 1], m[0, 2], m[0, 3]],
        [v[1], m[0, 1], m[1, 2], m[1, 3]],
        [v[2], m[0, 2], m[1, 2], m[2, 3]],
        [v[3], m[0, 3], m[1, 3], m[2, 3]],
        [m[0, 1], m[0, 2], m[0, 3], m[1, 3]],
        [m[0, 1], m[0, 2], m[1, 2], m[1, 3]],
        [m[0, 2], m[0, 3], m[1, 3], m[2, 3]],
        [m[0, 2], m[1, 2], m[1, 3], m[2, 3]],
    ]
    return [np.array(k) for k in kids]


def _simplex_integral(fn, simplex: np.ndarray, tol: float) -> tuple[float, float, int]:
    """Adaptive integral of ``fn`` over one boundary simplex.

    Refines until |parent rule - children rules| <= local tolerance, with
    the tolerance split among children by measure.
    """
    total, err, evals = 0.0, 0.0, 0
    meas0 = bodies.simplex_measure(simplex)
    stack = [(simplex, meas0, tol, 0)]
    while stack:
        spx, meas, budget, depth = stack.pop()
        nodes, w = _rule_nodes(spx)
        vals = np.asarray(fn(nodes), dtype=float)
        evals += len(w)
        if not np.all(np.isfinite(vals)):
            raise EvaluationError("density not finite on a boundary facet",
                                  point=nodes[int(np.argmax(~np.isfinite(vals)))])
        coarse = float(np.dot(w, vals)) * meas
        kids = _split_simplex(spx)
        fine = 0.0
        kid_meas = []
        for kid in kids:
            km = bodies.simplex_measure(kid)
            kid_meas.append(km)
            knodes, kw = _rule_nodes(kid)
            kvals = np.asarray(fn(knodes), dtype=float)
            evals += len(kw)
            fine += float(np.dot(kw, kvals)) * km
        local_err = abs(fine - coarse)
        if local_err <= budget or depth >= _MAX_DEPTH:
            if depth >= _MAX_DEPTH and local_err > budget:
                raise QuadratureFailure(
                    "facet cubature refinement depth exhausted",
                    QuadratureResult(total + fine, err + local_err, evals))
            total += fine
            err += local_err
        else:
            share = budget / len(kids)
            for kid, km in zip(kids, kid_meas):
                stack.append((kid, km, share, depth + 1))
    return total, err, evals


def facet_integrals(K: Polytope, fn, tol: float = 1e-9):
    """Integral of ``fn`` over each facet of K: (values, errors, evaluations)."""
    values = np.zeros(K.facet_count)
    errors = np.zeros(K.facet_count)
    evals = 0
    for i, simplices in enumerate(K.facet_simplices):
        share = tol / max(1, len(simplices))
        for spx in simplices:
            v, e, ne = _simplex_integral(fn, spx, share)
            values[i] += v
            errors[i] += e
            evals += ne
    return values, errors, evals


def facet_weights(mu: Density, K: Polytope, tol: float = 1e-9):
    """Per-facet weights w_i = integral of phi over facet F_i.

    Exact (the facet areas) for Lebesgue.  Returns (weights, errors).
    """
    if mu.is_lebesgue:
        return K.areas.copy(), np.zeros_like(K.areas)
    if mu.label.startswith("radial_power") and np.min(K.offsets) <= 1e-12:
        raise DomainError(
            "radial_power is singular at 0, which lies on the boundary")
    values, errors, _ = facet_integrals(K, mu.eval, tol)
    return values, errors


def boundary_measure(mu: Density, K: Polytope, tol: float = 1e-9) -> QuadratureResult:
    """mu(dK) as the sum of facet weights."""
    w, e = facet_weights(mu, K, tol)
    return QuadratureResult(float(w.sum()), float(e.sum()), 0)


# -- concavity families -------------------------------------------------------

@dataclass(frozen=True)
class ConcavityFamily:
    """A strictly increasing F with inverse and derivative.

    Used as the F/Q/R of the concave-measure inequalities: power families
    F(x) = x^s, the logarithm, and the Gaussian Phi-inverse.
    """

    kind: str
    F: Callable[[float], float]
    Finv: Callable[[float], float]
    Fprime: Callable[[float], float]
    domain: tuple[float, float] = (0.0, np.inf)
    s: float | None = None
    F_at_zero: float = 0.0  # limit of F at 0+, used for hypothesis checks


def power_family(s: float) -> ConcavityFamily:
    if s <= 0:
        raise ConfigurationError("power family needs s > 0")
    return ConcavityFamily(
        kind="power", s=s,
        F=lambda x: x ** s,
        Finv=lambda y: y ** (1.0 / s),
        Fprime=lambda x: s * x ** (s - 1.0))


def log_family() -> ConcavityFamily:
    return ConcavityFamily(
        kind="log",
        F=math.log, Finv=math.exp, Fprime=lambda x: 1.0 / x,
        F_at_zero=-np.inf)


def gaussian_phi_inverse_family() -> ConcavityFamily:
    from .numerics import gaussian_cdf, gaussian_pdf, gaussian_quantile
    return ConcavityFamily(
        kind="gaussian_phi_inverse",
        F=gaussian_quantile,
        Finv=lambda y: float(gaussian_cdf(y)),
        Fprime=lambda x: float(1.0 / gaussian_pdf(gaussian_quantile(x))),
        domain=(0.0, 1.0), F_at_zero=-np.inf)


def family_eval(fam: ConcavityFamily, which: str, x: float) -> float:
    """Evaluate F, F^{-1} or F' with domain checking."""
    if which in ("F", "Fprime"):
        lo, hi = fam.domain
        if not lo < x < hi:
            raise DomainError(f"{x} outside domain ({lo}, {hi}) of {fam.kind}")
    elif which != "Finv":
        raise ConfigurationError(f"unknown selector {which!r}")
    return float(getattr(fam, which)(x))
