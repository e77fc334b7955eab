"""Deterministic random streams, sphere grids, quadrature and Gaussian helpers.

Everything downstream (Monte Carlo measure evaluation, polar volumes, the
inequality reports) builds on the three primitives here:

* ``RandomStream`` -- a splittable, reproducible source of randomness.  Two
  runs with the same ``(seed, stream_index)`` produce bit-identical output;
  distinct stream indices give statistically independent generators.
* ``SphereGrid`` -- directions and positive quadrature weights on S^{n-1},
  with the weights summing to the sphere's surface measure n*kappa_n.
* ``QuadratureResult`` -- a value together with an error estimate that every
  caller treats as an upper bound when it builds tolerance budgets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special


class ConfigurationError(ValueError):
    """Invalid or inconsistent arguments (wrong mode, missing flag, ...)."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class EvaluationError(ValueError):
    """An integrand or density returned a non-finite value."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class QuadratureFailure(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, best: "QuadratureResult"):
        super().__init__(message)
        self.best = best


class PrecisionError(RuntimeError):
    """A Monte Carlo error budget exceeds what the caller asked for."""


@dataclass(frozen=True)
class RandomStream:
    """Seed plus sub-stream index for reproducible, splittable randomness."""

    seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, i: int) -> "RandomStream":
        # Injective for the shallow fan-outs used here (i < 1000003).
        return RandomStream(self.seed, self.stream_index * 1000003 + i + 1)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class SphereGrid:
    """Directions on S^{n-1} with weights summing to n*kappa_n."""

    n: int
    directions: np.ndarray  # (count, n), unit rows
    weights: np.ndarray     # (count,), positive

    @property
    def count(self) -> int:
        return len(self.weights)

    def validate(self) -> None:
        norms = np.linalg.norm(self.directions, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ConfigurationError("sphere grid directions must be unit vectors")
        total = sphere_surface(self.n)
        if abs(self.weights.sum() - total) > 1e-10 * total:
            raise ConfigurationError("sphere grid weights must sum to n*kappa_n")


def ball_volume(n: int, radius: float = 1.0) -> float:
    """kappa_n R^n, the volume of the Euclidean ball."""
    return np.pi ** (n / 2) / special.gamma(n / 2 + 1) * radius ** n


def sphere_surface(n: int) -> float:
    """Surface measure of S^{n-1}, equal to n*kappa_n."""
    return n * ball_volume(n)


def sphere_directions(n: int, count: int, mode: str = "auto",
                      stream: RandomStream | None = None) -> SphereGrid:
    """Build a quadrature grid of directions on S^{n-1}.

    Modes: ``equal_angle_2d`` (n=2 only), ``fibonacci_3d`` (n=3 only) and
    ``uniform_random`` (any n, requires a stream).  ``auto`` picks the
    deterministic mode for n in {2, 3} and the random one otherwise.
    """
    if n not in (2, 3, 4):
        raise ConfigurationError(f"dimension {n} unsupported (need 2..4)")
    if count < 2 * n:
        raise ConfigurationError(f"count {count} too small (need >= {2 * n})")
    if mode == "auto":
        mode = {2: "equal_angle_2d", 3: "fibonacci_3d"}.get(n, "uniform_random")

    if mode == "equal_angle_2d":
        if n != 2:
            raise ConfigurationError("equal_angle_2d requires n = 2")
        ang = 2.0 * np.pi * np.arange(count) / count
        dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        weights = np.full(count, 2.0 * np.pi / count)
    elif mode == "fibonacci_3d":
        if n != 3:
            raise ConfigurationError("fibonacci_3d requires n = 3")
        i = np.arange(count)
        golden = (1.0 + np.sqrt(5.0)) / 2.0
        z = 1.0 - (2.0 * i + 1.0) / count
        theta = 2.0 * np.pi * i / golden
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        dirs = np.stack([r * np.cos(theta), r * np.sin(theta), z], axis=1)
        weights = np.full(count, 4.0 * np.pi / count)
    elif mode == "uniform_random":
        if stream is None:
            raise ConfigurationError("uniform_random mode requires a RandomStream")
        gen = stream.generator()
        raw = gen.standard_normal((count, n))
        dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        weights = np.full(count, sphere_surface(n) / count)
    else:
        raise ConfigurationError(f"unknown sphere grid mode {mode!r}")

    grid = SphereGrid(n, dirs, weights)
    grid.validate()
    return grid


def gaussian_cdf(x):
    """Standard normal CDF Phi(x)."""
    return special.ndtr(x)


def gaussian_pdf(x):
    return np.exp(-np.asarray(x) ** 2 / 2.0) / np.sqrt(2.0 * np.pi)


def gaussian_quantile(p: float) -> float:
    """Inverse of ``gaussian_cdf``; one Newton polish on top of ndtri.

    Accuracy target: |quantile(cdf(x)) - x| <= 1e-8 for |x| <= 6.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile requires p in (0,1), got {p}")
    x = special.ndtri(p)
    pdf = gaussian_pdf(x)
    if pdf > 0.0:
        x = x - (special.ndtr(x) - p) / pdf
    return float(x)


_TRUNCATION_RATIO = 1e-12
_TRUNCATION_PANELS = 3
_MAX_PANELS = 500


def integrate_1d(f: Callable[[float], float], a: float, b: float,
                 tol: float = 1e-10) -> QuadratureResult:
    """Adaptive quadrature of ``f`` on (a, b), where b may be ``np.inf``.

    Finite intervals go straight to adaptive Gauss-Kronrod.  Improper upper
    limits are marched panel by panel with geometrically growing width; the
    march stops once the integrand has dropped below 1e-12 of its running
    peak for three consecutive panels (all integrands used here decay
    monotonically past their peak).
    """
    if not np.isinf(b):
        val, err, info = _quad(f, a, b, tol)
        if err > tol and err > tol * max(1.0, abs(val)):
            raise QuadratureFailure(
                f"quadrature error {err:.3e} above tolerance {tol:.3e}",
                QuadratureResult(val, err, info))
        return QuadratureResult(val, err, info)

    total = 0.0
    total_err = 0.0
    evals = 0
    peak = 0.0
    quiet = 0
    left = a
    width = 1.0
    prev_panel, last_panel = 0.0, 0.0
    for _ in range(_MAX_PANELS):
        right = left + width
        val, err, n_ev = _quad(f, left, right, tol / 4.0)
        total += val
        total_err += err
        evals += n_ev
        prev_panel, last_panel = last_panel, abs(val)
        samples = np.abs([f(left + t * width) for t in (0.125, 0.375, 0.625, 0.875)])
        evals += 4
        panel_peak = float(np.max(samples))
        peak = max(peak, panel_peak)
        if peak > 0.0 and panel_peak < _TRUNCATION_RATIO * peak:
            quiet += 1
            if quiet >= _TRUNCATION_PANELS:
                # geometric bound on the truncated tail keeps the estimate
                # honest for slower-than-exponential decay
                ratio = last_panel / prev_panel if prev_panel > 0 else 0.0
                ratio = min(ratio, 0.9)
                total_err += 2.0 * last_panel * ratio / (1.0 - ratio)
                return QuadratureResult(total, total_err, evals)
        else:
            quiet = 0
        left = right
        width *= 1.25
    raise QuadratureFailure(
        "improper integral did not decay within the panel budget",
        QuadratureResult(total, total_err, evals))


def _quad(f, a, b, tol):
    val, err, info = integrate.quad(f, a, b, epsabs=tol, epsrel=1e-12,
                                    limit=200, full_output=True)[:3]
    return val, err, int(info["neval"])


class BoxSampler:
    """Uniform sampler over an axis-aligned box, with its Lebesgue measure."""

    def __init__(self, lows, highs):
        self.lows = np.asarray(lows, dtype=float)
        self.highs = np.asarray(highs, dtype=float)
        if self.lows.shape != self.highs.shape or np.any(self.highs < self.lows):
            raise ConfigurationError("invalid box bounds")
        self.measure = float(np.prod(self.highs - self.lows))

    def sample(self, gen: np.random.Generator, count: int) -> np.ndarray:
        u = gen.random((count, len(self.lows)))
        return self.lows + u * (self.highs - self.lows)


def monte_carlo(sampler, integrand, N: int, stream: RandomStream) -> QuadratureResult:
    """Plain Monte Carlo: mean of ``integrand`` times the region measure.

    ``error_estimate`` is three standard errors (a 99.7% budget).  The
    integrand must be vectorized over an (N, d) array of points.
    """
    if N < 1000:
        raise ConfigurationError(f"need N >= 1000 Monte Carlo samples, got {N}")
    gen = stream.generator()
    points = sampler.sample(gen, N)
    values = np.asarray(integrand(points), dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise EvaluationError("integrand returned a non-finite value",
                              point=points[idx])
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(N)) if N > 1 else np.inf
    return QuadratureResult(mean * sampler.measure,
                            3.0 * stderr * sampler.measure, N)
