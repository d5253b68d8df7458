"""Model manifolds with analytic uniform measures.

Three models are supported: the unit-circumference circle R/Z, the flat torus
(R/Z)^d and the unit 2-sphere.  Each carries the uniform probability measure,
an exact geodesic distance, a closed-form ball-measure function and a known
convexity radius, so downstream statistical checks have no numerical knobs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import UnsupportedDomainError

_MASK64 = (1 << 64) - 1

CIRCLE = "circle"
FLAT_TORUS = "flat_torus"
SPHERE2 = "sphere2"


def mix_seed(master_seed: int, trial_index: int) -> int:
    """Derive a 64-bit per-trial stream seed from (master_seed, trial_index).

    SplitMix64 finalizer applied to ``master_seed XOR trial_index``.  The
    derivation is pure, so trials can be generated on any worker in any order
    and still see identical randomness.
    """
    z = (master_seed ^ trial_index) & _MASK64
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


@dataclass(frozen=True)
class ManifoldModel:
    """A model manifold with uniform probability measure.

    Use the module-level constructors :func:`circle`, :func:`flat_torus` and
    :func:`sphere2` rather than building instances directly.
    """

    kind: str
    torus_dim: int = 1

    def __post_init__(self):
        if self.kind not in (CIRCLE, FLAT_TORUS, SPHERE2):
            raise ValueError(f"unknown manifold kind {self.kind!r}")
        if self.kind == FLAT_TORUS and self.torus_dim < 1:
            raise ValueError("flat torus dimension must be >= 1")

    @property
    def intrinsic_dim(self) -> int:
        if self.kind == CIRCLE:
            return 1
        if self.kind == FLAT_TORUS:
            return self.torus_dim
        return 2

    @property
    def convexity_radius(self) -> float:
        if self.kind in (CIRCLE, FLAT_TORUS):
            return 0.25
        return math.pi / 2

    @property
    def ball_measure_lipschitz(self) -> float:
        """Constant K with |ball_measure(b) - ball_measure(a)| <= K |b - a|.

        Valid on the domain of :meth:`ball_measure`.  Flat torus: the measure
        of a geodesic ball of radius t <= 1/2 is V_d t^d with V_d the unit-ball
        volume, so K = d * V_d * 2^(1-d).
        """
        if self.kind == CIRCLE:
            return 2.0
        if self.kind == SPHERE2:
            return 0.5
        d = self.torus_dim
        return d * _unit_ball_volume(d) * 2.0 ** (1 - d)

    @property
    def diameter(self) -> float:
        if self.kind == CIRCLE:
            return 0.5
        if self.kind == FLAT_TORUS:
            return math.sqrt(self.torus_dim) / 2
        return math.pi

    def describe(self) -> str:
        if self.kind == FLAT_TORUS:
            return f"flat_torus({self.torus_dim})"
        return self.kind


def circle() -> ManifoldModel:
    return ManifoldModel(CIRCLE)


def flat_torus(d: int) -> ManifoldModel:
    return ManifoldModel(FLAT_TORUS, torus_dim=d)


def sphere2() -> ManifoldModel:
    return ManifoldModel(SPHERE2)


@dataclass(frozen=True, eq=False)
class PointSample:
    """An ordered i.i.d. sample on a manifold with full seed provenance."""

    manifold: ManifoldModel
    points: np.ndarray
    master_seed: int
    trial_index: int

    def __len__(self) -> int:
        return self.points.shape[0]


def sample(manifold: ManifoldModel, n: int, master_seed: int,
           trial_index: int = 0) -> PointSample:
    """Draw n i.i.d. uniform points, deterministically per (seed, trial)."""
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    rng = np.random.Generator(np.random.PCG64(mix_seed(master_seed, trial_index)))
    if manifold.kind == CIRCLE:
        pts = rng.random(n)
    elif manifold.kind == FLAT_TORUS:
        pts = rng.random((n, manifold.torus_dim))
    else:
        pts = rng.standard_normal((n, 3))
        norms = np.linalg.norm(pts, axis=1)
        while np.any(norms < 1e-300):  # reject the (measure-zero) zero vector
            bad = norms < 1e-300
            pts[bad] = rng.standard_normal((int(bad.sum()), 3))
            norms = np.linalg.norm(pts, axis=1)
        pts = pts / norms[:, None]
    pts.setflags(write=False)
    return PointSample(manifold, pts, master_seed, trial_index)


def _check_circle_coord(x) -> float:
    x = float(x)
    if not (0.0 <= x < 1.0):
        raise ValueError(f"circle coordinate {x} outside [0, 1)")
    return x


def geodesic_distance(manifold: ManifoldModel, p, q) -> float:
    """Exact geodesic distance between two points in the fundamental domain."""
    if manifold.kind == CIRCLE:
        p, q = _check_circle_coord(p), _check_circle_coord(q)
        d = abs(p - q)
        return min(d, 1.0 - d)
    if manifold.kind == FLAT_TORUS:
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if p.shape != (manifold.torus_dim,) or q.shape != (manifold.torus_dim,):
            raise ValueError("point dimension does not match torus dimension")
        if np.any(p < 0) or np.any(p >= 1) or np.any(q < 0) or np.any(q >= 1):
            raise ValueError("torus coordinates outside [0, 1)^d")
        d = np.abs(p - q)
        d = np.minimum(d, 1.0 - d)
        return float(np.sqrt(np.sum(d * d)))
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != (3,) or q.shape != (3,):
        raise ValueError("sphere points must be 3-vectors")
    for v in (p, q):
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ValueError("sphere point is not a unit vector")
    return float(np.arccos(np.clip(np.dot(p, q), -1.0, 1.0)))


def pairwise_distances(s: PointSample) -> np.ndarray:
    """Full n x n geodesic distance matrix (vectorized)."""
    pts = s.points
    if s.manifold.kind == CIRCLE:
        d = np.abs(pts[:, None] - pts[None, :])
        return np.minimum(d, 1.0 - d)
    if s.manifold.kind == FLAT_TORUS:
        d = np.abs(pts[:, None, :] - pts[None, :, :])
        d = np.minimum(d, 1.0 - d)
        return np.sqrt(np.sum(d * d, axis=2))
    g = np.clip(pts @ pts.T, -1.0, 1.0)
    np.fill_diagonal(g, 1.0)
    return np.arccos(g)


def ball_measure(manifold: ManifoldModel, t: float) -> float:
    """Measure of a geodesic ball of radius t (closed form)."""
    if t < 0:
        raise ValueError("ball radius must be nonnegative")
    if manifold.kind == CIRCLE:
        return min(2.0 * t, 1.0)
    if manifold.kind == SPHERE2:
        return (1.0 - math.cos(min(t, math.pi))) / 2.0
    if t > 0.5:
        raise UnsupportedDomainError(
            f"flat torus ball measure has a closed form only for t <= 1/2, got t={t}")
    return _unit_ball_volume(manifold.torus_dim) * t ** manifold.torus_dim


def _circle_gaps(points: np.ndarray) -> np.ndarray:
    """Circular gaps between consecutive sorted circle points (wrap included)."""
    srt = np.sort(points)
    gaps = np.diff(srt)
    wrap = 1.0 - srt[-1] + srt[0]
    return np.append(gaps, wrap)


def _sphere_probe_grid(resolution: int) -> np.ndarray:
    """Deterministic Fibonacci-lattice probe grid with resolution^2 points."""
    n = resolution * resolution
    k = np.arange(n)
    phi = (1 + math.sqrt(5)) / 2
    z = 1.0 - (2.0 * k + 1.0) / n
    theta = 2.0 * math.pi * k / phi
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return np.stack([r * np.cos(theta), r * np.sin(theta), z], axis=1)


@dataclass(frozen=True)
class CoveringRadiusEstimate:
    """Covering radius value plus the additive error bound of the method.

    ``mesh_error`` is 0 for the circle (exact computation); otherwise the true
    covering radius lies in [value, value + mesh_error].
    """

    value: float
    mesh_error: float


def covering_radius(s: PointSample, grid_resolution: int | None = None) -> CoveringRadiusEstimate:
    """Smallest r such that balls of radius r around the sample cover M.

    Circle: exact (half the largest circular gap).  Torus and sphere: lower
    bound from a deterministic probe grid of grid_resolution^dim points.
    """
    if len(s) == 0:
        raise ValueError("covering radius of an empty sample is undefined")
    m = s.manifold
    if m.kind == CIRCLE:
        return CoveringRadiusEstimate(float(_circle_gaps(s.points).max()) / 2.0, 0.0)
    if grid_resolution is None:
        raise ValueError("grid_resolution is required for non-circle manifolds")
    if grid_resolution < 1:
        raise ValueError("grid_resolution must be positive")
    if m.kind == FLAT_TORUS:
        d = m.torus_dim
        axes = [(np.arange(grid_resolution) + 0.5) / grid_resolution] * d
        probes = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        diff = np.abs(probes[:, None, :] - s.points[None, :, :])
        diff = np.minimum(diff, 1.0 - diff)
        dists = np.sqrt(np.sum(diff * diff, axis=2))
        mesh = math.sqrt(d) / (2 * grid_resolution)
    else:
        probes = _sphere_probe_grid(grid_resolution)
        g = np.clip(probes @ s.points.T, -1.0, 1.0)
        dists = np.arccos(g)
        # empirical covering-radius scale of the Fibonacci lattice
        mesh = 2.8 / math.sqrt(probes.shape[0])
    return CoveringRadiusEstimate(float(dists.min(axis=1).max()), mesh)


def covering_tail_bound(manifold: ManifoldModel, epsilon: float, n: int) -> float:
    """Upper bound on P(covering radius > epsilon) for n uniform circle points.

    Uses k = ceil(1/eps) arcs of radius eps/2 on a uniform grid: the sample
    fails to be an eps-cover only if some arc is missed, giving the bound
    k * (1 - mu(arc))^n, clamped to [0, 1].
    """
    if manifold.kind != CIRCLE:
        raise UnsupportedDomainError("covering tail bound is implemented for the circle only")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    k = math.ceil(1.0 / epsilon)
    arc = min(epsilon, 1.0)
    return min(1.0, k * (1.0 - arc) ** n)


@dataclass(frozen=True)
class DegeneracyReport:
    """Exact-equality collisions and distance ties found in a sample."""

    collisions: list = field(default_factory=list)
    distance_ties: list = field(default_factory=list)

    @property
    def is_clean(self) -> bool:
        return not self.collisions and not self.distance_ties


def detect_degeneracies(s: PointSample) -> DegeneracyReport:
    """Report exact floating-point collisions and tied pairwise distances.

    Ties have measure zero for continuous samplers, so any hit is a genuine
    floating-point coincidence; it is reported, never perturbed away.
    """
    dist = pairwise_distances(s)
    n = len(s)
    collisions = []
    by_value: dict[float, list[tuple[int, int]]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            d = dist[i, j]
            if d == 0.0:
                collisions.append((i, j))
            by_value.setdefault(d, []).append((i, j))
    ties = []
    for pairs in by_value.values():
        if len(pairs) > 1:
            ties.extend(combinations(pairs, 2))
    return DegeneracyReport(collisions=collisions, distance_ties=ties)
