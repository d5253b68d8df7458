"""Betti numbers over GF(2), Euler characteristic, and a brute-force oracle.

Coefficients are fixed to GF(2): boundary matrices become bit matrices and a
Betti number is ``#i-simplices - rank d_i - rank d_{i+1}``.  Homology is
unreduced (a point has b0 = 1).  GF(2) Betti numbers can differ from rational
ones on spaces with 2-torsion; the model manifolds used here have none.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SimplexBudgetError
from .complexes import SimplicialComplex

BRUTEFORCE_SIMPLEX_LIMIT = 1 << 14


@dataclass(frozen=True)
class InvariantSpec:
    """A topological invariant whose magnitude is bounded by the simplex count.

    kind is "betti" (with ``dim``) or "euler".  ``growth_limit`` returns the
    bound f(#simplices) on |value|; both shipped invariants have f = identity.
    """

    kind: str
    dim: int = 0

    def __post_init__(self):
        if self.kind not in ("betti", "euler"):
            raise ValueError(f"unknown invariant kind {self.kind!r}")
        if self.kind == "betti" and self.dim < 0:
            raise ValueError("Betti dimension must be nonnegative")

    def growth_limit(self, num_simplices: int) -> int:
        return num_simplices

    def evaluate(self, complex_: SimplicialComplex) -> int:
        if self.kind == "betti":
            return betti(complex_, self.dim)
        return euler_characteristic(complex_)

    def describe(self) -> str:
        return f"betti{self.dim}" if self.kind == "betti" else "euler"


def betti_invariant(dim: int) -> InvariantSpec:
    return InvariantSpec("betti", dim)


def euler_invariant() -> InvariantSpec:
    return InvariantSpec("euler")


def _gf2_rank(columns: list[int]) -> int:
    """Rank of a GF(2) matrix given as bit-packed columns."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = col
                rank += 1
                break
            col ^= piv
    return rank


def _boundary_columns(complex_: SimplicialComplex, dim: int) -> list[int]:
    """Columns of the boundary map from dim-simplices to (dim-1)-simplices."""
    if dim == 0:
        return []
    faces = {s: i for i, s in enumerate(complex_.simplices(dim - 1))}
    cols = []
    for simplex in complex_.simplices(dim):
        bits = 0
        for drop in range(len(simplex)):
            facet = simplex[:drop] + simplex[drop + 1:]
            bits ^= 1 << faces[facet]
        cols.append(bits)
    return cols


def betti(complex_: SimplicialComplex, i: int) -> int:
    """dim H_i over GF(2), by bit-packed column reduction of boundary maps."""
    if i < 0:
        raise ValueError("Betti dimension must be nonnegative")
    if not complex_.is_full and complex_.max_dim_built < i + 1:
        raise ValueError(
            f"betti({i}) needs the complex built to dimension >= {i + 1}, "
            f"got max_dim_built={complex_.max_dim_built}")
    n_i = len(complex_.simplices(i))
    rank_i = _gf2_rank(_boundary_columns(complex_, i))
    rank_up = _gf2_rank(_boundary_columns(complex_, i + 1))
    return n_i - rank_i - rank_up


def euler_characteristic(complex_: SimplicialComplex) -> int:
    """Alternating sum of simplex counts; only defined on full complexes."""
    if not complex_.is_full:
        raise ValueError(
            "Euler characteristic requires a full (untruncated) complex; "
            f"this one was truncated at dimension {complex_.max_dim_built}")
    return sum((-1) ** k * len(s) for k, s in complex_.simplices_by_dim.items())


def _dense_gf2_rank(rows: list[list[int]]) -> int:
    """Deliberately naive dense Gaussian elimination over GF(2)."""
    if not rows or not rows[0]:
        return 0
    nrows, ncols = len(rows), len(rows[0])
    mat = [row[:] for row in rows]
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, nrows):
            if mat[r][col] == 1:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for r in range(nrows):
            if r != rank and mat[r][col] == 1:
                for c in range(ncols):
                    mat[r][c] ^= mat[rank][c]
        rank += 1
    return rank


def betti_oracle_bruteforce(complex_: SimplicialComplex, i: int) -> int:
    """Independent slow-path Betti computation for cross-validation.

    Builds dense 0/1 boundary matrices and runs textbook Gaussian elimination;
    shares no code with :func:`betti` beyond the simplex lists.
    """
    if i < 0:
        raise ValueError("Betti dimension must be nonnegative")
    if not complex_.is_full and complex_.max_dim_built < i + 1:
        raise ValueError("complex not built deep enough for this Betti number")
    total = complex_.simplex_count()
    if total > BRUTEFORCE_SIMPLEX_LIMIT:
        raise SimplexBudgetError(
            BRUTEFORCE_SIMPLEX_LIMIT,
            f"brute-force oracle limited to {BRUTEFORCE_SIMPLEX_LIMIT} simplices, got {total}")

    def dense_boundary(dim: int) -> list[list[int]]:
        lower = complex_.simplices(dim - 1)
        upper = complex_.simplices(dim)
        if dim == 0 or not upper:
            return []
        index = {s: r for r, s in enumerate(lower)}
        mat = [[0] * len(upper) for _ in lower]
        for c, simplex in enumerate(upper):
            for drop in range(len(simplex)):
                facet = simplex[:drop] + simplex[drop + 1:]
                mat[index[facet]][c] = 1
        return mat

    n_i = len(complex_.simplices(i))
    return n_i - _dense_gf2_rank(dense_boundary(i)) - _dense_gf2_rank(dense_boundary(i + 1))


def connected_components(complex_: SimplicialComplex) -> int:
    """Component count of the 1-skeleton via union-find (independent b0 check)."""
    parent = list(range(complex_.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in complex_.simplices(1):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    return len({find(v) for v in range(complex_.num_vertices)})
