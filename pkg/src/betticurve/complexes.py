"""Vietoris-Rips and Cech complex construction and filtration edge scales.

VR uses the closed condition (pairwise distance <= t, matching "diameter of
the simplex <= t"); Cech uses open balls (simplex present iff the open balls
of radius t have a common point).  Mixing the conventions is deliberate and is
what makes the interleaving inclusions exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SimplexBudgetError, UnsupportedDomainError
from .manifolds import CIRCLE, PointSample, pairwise_distances

FULL = "full"
DEFAULT_SIMPLEX_BUDGET = 10_000_000


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A downward-closed simplex set on integer vertex labels, grouped by dim.

    ``max_dim_built`` is the truncation dimension; -1 means the complex is
    complete (no simplices were cut off).
    """

    num_vertices: int
    simplices_by_dim: dict[int, list[tuple[int, ...]]]
    max_dim_built: int

    @property
    def is_full(self) -> bool:
        return self.max_dim_built == -1

    @property
    def dimension(self) -> int:
        return max((k for k, s in self.simplices_by_dim.items() if s), default=-1)

    def simplices(self, dim: int) -> list[tuple[int, ...]]:
        return self.simplices_by_dim.get(dim, [])

    def simplex_count(self) -> int:
        return sum(len(s) for s in self.simplices_by_dim.values())

    def contains(self, simplex) -> bool:
        s = tuple(simplex)
        return s in set(self.simplices_by_dim.get(len(s) - 1, []))

    def as_simplex_set(self) -> set[tuple[int, ...]]:
        out: set[tuple[int, ...]] = set()
        for group in self.simplices_by_dim.values():
            out.update(group)
        return out


@dataclass(frozen=True)
class FiltrationScales:
    """Sorted edge-creation scales: scales[k] is the smallest t at which the
    VR complex has at least k edges.  scales[0] = 0; ties are repeated."""

    scales: tuple[float, ...]


def _normalize_max_dim(max_dim) -> int:
    if max_dim == FULL or max_dim == -1:
        return -1
    if not isinstance(max_dim, int) or max_dim < 1:
        raise ValueError(f"max_dim must be a positive integer or 'full', got {max_dim!r}")
    return max_dim


def _iter_bits(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def _expand_cliques(n: int, edges: list[tuple[int, int]], nbr: list[int],
                    max_dim: int, budget: int, accept=None) -> SimplicialComplex:
    """Levelwise clique expansion of the graph (edges, nbr).

    ``accept(simplex)`` is an optional extra membership test applied to every
    candidate of dimension >= 2 (the property must be downward closed, so
    pruning on failure is sound).  Enumerates simplices in lexicographic
    order; raises when the total simplex count would exceed ``budget``.
    """
    by_dim: dict[int, list[tuple[int, ...]]] = {0: [(v,) for v in range(n)]}
    count = n
    if count > budget:
        raise SimplexBudgetError(budget)
    if max_dim == 0:
        return SimplicialComplex(n, by_dim, 0 if edges else -1)
    by_dim[1] = [tuple(e) for e in edges]
    count += len(edges)
    if count > budget:
        raise SimplexBudgetError(budget)
    above = [~((1 << (v + 1)) - 1) for v in range(n)]
    frontier = [((i, j), cand) for i, j in by_dim[1]
                if (cand := nbr[i] & nbr[j] & above[j])]
    dim = 1
    while frontier and (max_dim == -1 or dim < max_dim):
        dim += 1
        nxt = []
        out = []
        for simplex, cand in frontier:
            for v in _iter_bits(cand):
                new = simplex + (v,)
                if accept is not None and not accept(new):
                    continue
                count += 1
                if count > budget:
                    raise SimplexBudgetError(budget)
                out.append(new)
                sub = cand & nbr[v] & above[v]
                if sub:
                    nxt.append((new, sub))
        if not out:
            frontier = []
            break
        by_dim[dim] = out
        frontier = nxt
    # a finite max_dim still yields a complete complex if nothing was cut off
    built = -1 if (max_dim == -1 or not frontier) else max_dim
    return SimplicialComplex(n, by_dim, built)


def _edges_and_adjacency(dist: np.ndarray, threshold: float, strict: bool):
    n = dist.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    if strict:
        mask = dist[iu, ju] < threshold
    else:
        mask = dist[iu, ju] <= threshold
    edges = list(zip(iu[mask].tolist(), ju[mask].tolist()))
    nbr = [0] * n
    for i, j in edges:
        nbr[i] |= 1 << j
        nbr[j] |= 1 << i
    return edges, nbr


def vr_complex(s: PointSample, t: float, max_dim=FULL, *,
               dist: np.ndarray | None = None,
               budget: int = DEFAULT_SIMPLEX_BUDGET) -> SimplicialComplex:
    """Clique complex of the graph with edges at pairwise distance <= t."""
    if t < 0:
        raise ValueError("scale t must be nonnegative")
    md = _normalize_max_dim(max_dim)
    if dist is None:
        dist = pairwise_distances(s)
    edges, nbr = _edges_and_adjacency(dist, t, strict=False)
    return _expand_cliques(len(s), edges, nbr, md, budget)


def _circle_arcs_intersect(positions: np.ndarray, simplex: tuple[int, ...], t: float) -> bool:
    # Open arcs of radius t around the simplex's points meet iff some point of
    # the circle is within < t of all of them; the minimax distance equals
    # (1 - largest circular gap) / 2, attained at the midpoint of the
    # complement of the largest gap.
    pts = np.sort(positions[list(simplex)])
    gaps = np.diff(pts)
    gmax = max(gaps.max(initial=0.0), 1.0 - pts[-1] + pts[0])
    return (1.0 - gmax) / 2.0 < t


def cech_complex_circle(s: PointSample, t: float, max_dim=FULL, *,
                        budget: int = DEFAULT_SIMPLEX_BUDGET) -> SimplicialComplex:
    """Nerve of the open arcs of radius t around the sample points."""
    if s.manifold.kind != CIRCLE:
        raise UnsupportedDomainError("cech_complex_circle requires a circle sample")
    if t <= 0:
        raise ValueError("scale t must be positive")
    md = _normalize_max_dim(max_dim)
    dist = pairwise_distances(s)
    # two open arcs of radius t meet iff the distance is < 2t
    edges, nbr = _edges_and_adjacency(dist, 2.0 * t, strict=True)
    positions = s.points
    accept = lambda simplex: _circle_arcs_intersect(positions, simplex, t)
    return _expand_cliques(len(s), edges, nbr, md, budget, accept=accept)


def min_enclosing_ball(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact minimum enclosing ball of a small Euclidean point set.

    Searches the <= d+1 support points that determine the optimal ball
    directly (the inputs here are simplices, so brute force over boundary
    subsets is exact and cheap).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("need a nonempty 2-d point array")
    m, d = pts.shape
    if m == 1:
        return pts[0].copy(), 0.0
    best: tuple[np.ndarray, float] | None = None
    from itertools import combinations
    for size in range(1, min(m, d + 1) + 1):
        for subset in combinations(range(m), size):
            ball = _circumball(pts[list(subset)])
            if ball is None:
                continue
            c, r = ball
            if np.all(np.linalg.norm(pts - c, axis=1) <= r * (1 + 1e-12) + 1e-12):
                if best is None or r < best[1]:
                    best = (c, r)
    assert best is not None
    return best


def _circumball(pts: np.ndarray):
    """Smallest ball whose boundary passes through all of pts (or None if the
    points are affinely dependent)."""
    p0 = pts[0]
    if len(pts) == 1:
        return p0.copy(), 0.0
    v = pts[1:] - p0
    gram = 2.0 * (v @ v.T)
    rhs = np.sum(v * v, axis=1)
    try:
        lam = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        return None
    center = p0 + lam @ v
    return center, float(np.linalg.norm(center - p0))


def cech_complex_euclidean(points, t: float, max_dim: int, *,
                           budget: int = DEFAULT_SIMPLEX_BUDGET) -> SimplicialComplex:
    """Cech complex of Euclidean points (open balls of radius t), d <= 3."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be an (n, d) array")
    if pts.shape[1] > 3:
        raise UnsupportedDomainError("Euclidean Cech supports d <= 3 only")
    if t <= 0:
        raise ValueError("scale t must be positive")
    md = _normalize_max_dim(max_dim)
    if md == -1:
        raise ValueError("Euclidean Cech requires an explicit max_dim")
    n = pts.shape[0]
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    edges, nbr = _edges_and_adjacency(dist, 2.0 * t, strict=True)
    accept = lambda simplex: min_enclosing_ball(pts[list(simplex)])[1] < t
    return _expand_cliques(n, edges, nbr, md, budget, accept=accept)


def edge_scales(s: PointSample) -> FiltrationScales:
    """All pairwise distances sorted ascending with a leading 0.

    Ties are ordered by lexicographic pair index so the result is reproducible
    bit for bit.
    """
    dist = pairwise_distances(s)
    n = len(s)
    pairs = sorted(
        ((float(dist[i, j]), i, j) for i in range(n) for j in range(i + 1, n)))
    return FiltrationScales(scales=(0.0,) + tuple(d for d, _, _ in pairs))


def edge_count(s: PointSample, t: float) -> int:
    """Number of point pairs at distance <= t."""
    if t < 0:
        raise ValueError("scale t must be nonnegative")
    dist = pairwise_distances(s)
    iu, ju = np.triu_indices(len(s), k=1)
    return int(np.count_nonzero(dist[iu, ju] <= t))


def export_simplices(complex_: SimplicialComplex, path) -> None:
    """Write one simplex per line as space-separated vertex indices."""
    with open(path, "w") as fh:
        for dim in sorted(complex_.simplices_by_dim):
            for simplex in complex_.simplices_by_dim[dim]:
                fh.write(" ".join(str(v) for v in simplex) + "\n")
