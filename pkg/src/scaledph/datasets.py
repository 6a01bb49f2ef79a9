"""Seeded synthetic point clouds and dynamical-system trajectories.

Reproducibility contract
------------------------
All samplers draw from ``make_rng(seed)``, a numpy ``Generator`` backed
by the counter-based Philox-4x64-10 bit generator keyed directly by the
integer seed (counter starting at zero).  Uniform doubles come from
``Generator.random``, which consumes one 64-bit draw per value.  Each
sampler documents its draw order, so outputs are bit-identical across
platforms and numpy releases that keep the Philox stream stable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "PointCloud",
    "Trajectory",
    "make_rng",
    "sample_two_circles",
    "sample_cassini",
    "sample_noisy_circle",
    "sample_two_squares",
    "integrate_lorenz",
    "delay_embedding",
    "lorenz_delay_cloud",
]


@dataclass(frozen=True)
class PointCloud:
    """Points in R^m with optional side information.

    ``oracle_density`` holds exact per-point sampling densities when the
    generator knows them (used in place of kernel estimates downstream).
    ``intrinsic_dim`` optionally gives a per-point intrinsic dimension
    for clouds mixing strata of different dimension.
    """

    points: np.ndarray
    oracle_density: np.ndarray | None = None
    intrinsic_dim: np.ndarray | None = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise ValueError("points must be an (N, m) array")
        object.__setattr__(self, "points", pts)
        for name in ("oracle_density", "intrinsic_dim"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.asarray(arr)
                if arr.shape != (len(pts),):
                    raise ValueError(f"{name} must have one entry per point")
                object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]

    def strip_oracle(self) -> "PointCloud":
        """Copy without oracle densities (forces kernel estimation)."""
        return replace(self, oracle_density=None)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled trajectory: times[i] = i * dt, states (M, d)."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.states, dtype=float)
        if len(t) != len(s):
            raise ValueError("times and states must have equal length")
        if len(t) and t[0] != 0.0:
            raise ValueError("trajectories start at time 0")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", s)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator: Philox-4x64-10 keyed by ``seed``."""
    return np.random.Generator(np.random.Philox(key=seed))


def sample_two_circles(
    rng: np.random.Generator,
    n: int = 500,
    r1: float = 1.0,
    r2: float = 5.0,
) -> PointCloud:
    """Uniform mixture (1/2, 1/2) on two disjoint circles.

    Circle 1 has radius ``r1`` centred at the origin, circle 2 radius
    ``r2`` centred at (8, 0); the radii must satisfy r1 + r2 + 1 <= 8 so
    the circles stay well separated.  Draw order: ``n`` coins selecting
    the circle (coin < 1/2 means circle 1), then ``n`` angles.  Oracle
    density is the arc-length density (1/2) / (2 pi r) of the chosen
    circle.
    """
    if r1 <= 0 or r2 <= 0:
        raise ValueError("radii must be positive")
    if r1 + r2 + 1.0 > 8.0:
        raise ValueError("circles would overlap: need r1 + r2 + 1 <= 8")
    coins = rng.random(n)
    theta = 2.0 * np.pi * rng.random(n)
    on_first = coins < 0.5
    radius = np.where(on_first, r1, r2)
    cx = np.where(on_first, 0.0, 8.0)
    pts = np.column_stack((cx + radius * np.cos(theta), radius * np.sin(theta)))
    dens = 1.0 / (4.0 * np.pi * radius)
    return PointCloud(points=pts, oracle_density=dens)


def sample_cassini(rng: np.random.Generator, n: int = 200, e: float = 1.01) -> PointCloud:
    """Cassini oval r(theta)^2 = cos(2 theta) + sqrt(cos^2(2 theta) + e^4 - 1).

    Requires e > 1 (a single pinched loop).  One draw of ``n`` uniform
    angles; points are emitted in polar form.  Angles are not arc-length
    uniform, so no oracle density is attached.
    """
    if e <= 1.0:
        raise ValueError("eccentricity must exceed 1")
    theta = 2.0 * np.pi * rng.random(n)
    c = np.cos(2.0 * theta)
    r = np.sqrt(c + np.sqrt(c * c + e**4 - 1.0))
    pts = np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    return PointCloud(points=pts)


def sample_noisy_circle(
    rng: np.random.Generator,
    n_circle: int = 200,
    n_outliers: int = 10,
) -> PointCloud:
    """Unit circle sample plus uniform background outliers in [-1, 1]^2.

    Draw order: ``n_circle`` angles, then an ``(n_outliers, 2)`` block of
    uniforms.  Circle points come first in the output.
    """
    theta = 2.0 * np.pi * rng.random(n_circle)
    circle = np.column_stack((np.cos(theta), np.sin(theta)))
    outliers = 2.0 * rng.random((n_outliers, 2)) - 1.0
    return PointCloud(points=np.vstack((circle, outliers)))


def sample_two_squares(rng: np.random.Generator, n: int = 200) -> PointCloud:
    """Mixture of two unit squares with weights 1/6 and 5/6.

    The sparse square is [0, 1]^2 (probability 1/6), the dense one
    [1.5, 2.5] x [0, 1].  Draw order: ``n`` coins, then an ``(n, 2)``
    block of uniforms.  Oracle density is the mixture weight (each
    square has unit area).
    """
    coins = rng.random(n)
    u = rng.random((n, 2))
    sparse = coins < (1.0 / 6.0)
    x = np.where(sparse, u[:, 0], 1.5 + u[:, 0])
    pts = np.column_stack((x, u[:, 1]))
    dens = np.where(sparse, 1.0 / 6.0, 5.0 / 6.0)
    return PointCloud(points=pts, oracle_density=dens)


def _lorenz_rhs(state: np.ndarray, sigma: float, rho: float, beta: float) -> np.ndarray:
    x, y, z = state
    return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])


def integrate_lorenz(
    sigma: float = 10.0,
    rho: float = 28.0,
    beta: float = 8.0 / 3.0,
    x0=(1.0, 1.0, 1.0),
    t_end: float = 50.0,
    dt_sample: float = 0.05,
    substeps: int = 20,
) -> Trajectory:
    """Integrate the Lorenz system with classical fixed-step RK4.

    Each sampling interval ``dt_sample`` is covered by ``substeps``
    internal RK4 steps; states are emitted at t = 0, dt_sample, ...,
    up to ``t_end`` inclusive.
    """
    if dt_sample <= 0 or t_end <= 0:
        raise ValueError("time step and horizon must be positive")
    if substeps < 1:
        raise ValueError("need at least one internal step")
    n_out = int(round(t_end / dt_sample))
    h = dt_sample / substeps
    state = np.asarray(x0, dtype=float)
    states = np.empty((n_out + 1, 3))
    states[0] = state
    for i in range(n_out):
        for _ in range(substeps):
            k1 = _lorenz_rhs(state, sigma, rho, beta)
            k2 = _lorenz_rhs(state + 0.5 * h * k1, sigma, rho, beta)
            k3 = _lorenz_rhs(state + 0.5 * h * k2, sigma, rho, beta)
            k4 = _lorenz_rhs(state + h * k3, sigma, rho, beta)
            state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[i + 1] = state
    times = dt_sample * np.arange(n_out + 1)
    return Trajectory(times=times, states=states)


def delay_embedding(series, dim: int = 2, lag: int = 1) -> np.ndarray:
    """Sliding-window delay embedding of a scalar series.

    Point i is ``(series[i], series[i + lag], ..., series[i + (dim-1) lag])``
    for i = 0 .. len(series) - (dim-1)*lag - 1.
    """
    s = np.asarray(series, dtype=float)
    if s.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if dim < 1 or lag < 1:
        raise ValueError("embedding dimension and lag must be >= 1")
    n = len(s) - (dim - 1) * lag
    if n < 1:
        raise ValueError("series too short for this embedding")
    return np.column_stack([s[j * lag : j * lag + n] for j in range(dim)])


def lorenz_delay_cloud(**kwargs) -> PointCloud:
    """Delay-embedded (dim 2, lag 1) x-coordinate of the Lorenz trajectory.

    Defaults give 1001 samples on [0, 50] and hence 1000 embedded points.
    """
    traj = integrate_lorenz(**kwargs)
    return PointCloud(points=delay_embedding(traj.states[:, 0], dim=2, lag=1))
