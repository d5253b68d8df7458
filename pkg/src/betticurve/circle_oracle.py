"""Exact first-Betti-number oracle for uniform samples on the circle.

For n uniform points on the unit-circumference circle and a scale 0 < r < 1/3
the VR complex is either homotopy equivalent to a circle or to a disjoint
union of contractible arcs, so the first Betti number is Bernoulli and both
its expectation and variance follow from a single probability.  That
probability has a closed form built from the (unnormalized) Irwin-Hall CDF

    g(n, x) = sum_k (-1)^k C(n, k) (x - k)_+^n        (equals n! * CDF(x))

via

    p(n, r) = n r^(n-1) [ Int_0^r g(n-1, (1-x)/r) dx  -  r g(n-1, 1/r - 1) ].

The integral is evaluated in closed form: substituting u = (1-x)/r turns the
integrand into a piecewise polynomial whose antiderivative is

    G(n, u) = sum_k (-1)^k C(n, k) (u - k)_+^(n+1) / (n+1),

so  p(n, r) = n r^n [ G(n-1, 1/r) - G(n-1, 1/r - 1) - g(n-1, 1/r - 1) ].

Everything is computed in exact rational arithmetic (the float r is promoted
to the rational it represents), so there is no quadrature or cancellation
error; only the final conversion to float rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Exact arithmetic has no precision ceiling; this cap only bounds runtime.
MAX_ORACLE_N = 1000

_ONE_THIRD = Fraction(1, 3)


def _g_exact(n: int, x: Fraction) -> Fraction:
    if x <= 0:
        return Fraction(0)
    if x >= n:
        return Fraction(math.factorial(n))
    return sum(
        (-1) ** k * math.comb(n, k) * (x - k) ** n
        for k in range(int(x) + 1))


def _g_antiderivative(n: int, x: Fraction) -> Fraction:
    if x <= 0:
        return Fraction(0)
    total = sum(
        (-1) ** k * math.comb(n, k) * (x - k) ** (n + 1)
        for k in range(min(int(x), n) + 1))
    return total / (n + 1)


def irwin_hall_g(n: int, x: float) -> float:
    """The unnormalized Irwin-Hall CDF g(n, x); g(n, x)/n! = P(U1+...+Un <= x)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 0.0 if x <= 0 else 1.0
    return float(_g_exact(n, Fraction(x)))


def circle_homotopy_prob(n: int, r: float) -> float:
    """Probability that the VR complex of n uniform circle points at scale r
    is homotopy equivalent to the circle.  Valid for 0 < r < 1/3 only."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_ORACLE_N:
        raise ValueError(f"oracle evaluation is capped at n <= {MAX_ORACLE_N}")
    rf = Fraction(r)
    if not (0 < rf < _ONE_THIRD):
        raise ValueError(f"scale r={r} outside the oracle's validity domain (0, 1/3)")
    if n == 1:
        return 0.0
    m = n - 1
    u1 = 1 / rf
    u0 = u1 - 1
    bracket = _g_antiderivative(m, u1) - _g_antiderivative(m, u0) - _g_exact(m, u0)
    return float(n * rf ** n * bracket)


@dataclass(frozen=True)
class CircleOracleEval:
    """Exact oracle values at one (n, r) point."""

    n: int
    r: float
    p_circle: float
    expected_b1: float
    variance_b1: float


def circle_oracle_curve(n: int, r_grid) -> list[CircleOracleEval]:
    """Pointwise oracle evaluation on a strictly increasing grid in (0, 1/3).

    The Bernoulli identity gives expected_b1 = p and variance_b1 = p(1-p).
    """
    grid = [float(r) for r in r_grid]
    for a, b in zip(grid, grid[1:]):
        if not a < b:
            raise ValueError("r grid must be strictly increasing")
    out = []
    for r in grid:
        if not (0 < Fraction(r) < _ONE_THIRD):
            raise ValueError(f"grid point r={r} outside the validity domain (0, 1/3)")
        p = circle_homotopy_prob(n, r)
        out.append(CircleOracleEval(n=n, r=r, p_circle=p,
                                    expected_b1=p, variance_b1=p * (1.0 - p)))
    return out
