"""End-to-end acceptance gate.

Each test covers one release criterion and prints a single PASS/FAIL line
(through capsys.disabled, so the verdicts are visible in normal pytest runs).
The statistical criteria use 4-sigma bands, so a correct build fails any one
of them with probability well below 1e-3.
"""

import json
import math
from itertools import combinations

import numpy as np
import pytest

from betticurve import cli
from betticurve.circle_oracle import circle_homotopy_prob
from betticurve.complexes import cech_complex_circle, vr_complex
from betticurve.estimator import (VR, convergence_study, estimate_curve,
                                  max_discrete_slope)
from betticurve.homology import (betti, betti_invariant, betti_oracle_bruteforce,
                                 connected_components, euler_characteristic,
                                 euler_invariant)
from betticurve.manifolds import circle, covering_radius, covering_tail_bound, sample

SEED = 20260824


def report(capsys, num, name, ok, detail=""):
    with capsys.disabled():
        print(f"\ncriterion {num} [{name}]: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def variance_band(p, trials):
    """4-sigma band for the sample variance of a Bernoulli(p) mean."""
    sigma2 = p * (1.0 - p)
    mu4 = sigma2 * (1.0 - 3.0 * sigma2)
    var_s2 = mu4 / trials - sigma2**2 * (trials - 3) / (trials * (trials - 1))
    return 4.0 * math.sqrt(max(var_s2, 0.0)) + 1e-12


def test_criterion_1_oracle_vs_monte_carlo(capsys):
    """Exact closed-form circle probabilities match simulated b1 moments."""
    trials = 20_000
    grid = [float(t) for t in np.linspace(0.04, 0.30, 8)]
    worst = 0.0
    ok = True
    for n in (5, 10, 20):
        est = estimate_curve(circle(), VR, betti_invariant(1), n, grid,
                             trials, SEED + n)
        for k, r in enumerate(grid):
            p = circle_homotopy_prob(n, r)
            mean_band = 4.0 * math.sqrt(p * (1.0 - p) / trials) + 1e-12
            mean_err = abs(float(est.mean[k]) - p)
            var_err = abs(float(est.variance[k]) - p * (1.0 - p))
            if mean_band > 1e-6:
                worst = max(worst, mean_err / mean_band)
            if mean_err > mean_band or var_err > variance_band(p, trials):
                ok = False
    report(capsys, 1, "oracle-vs-mc", ok,
           f"n in (5,10,20), 8 scales, trials={trials}, "
           f"worst mean deviation {worst:.2f} of the 4-sigma band")


def test_criterion_2_two_point_euler_formula(capsys):
    """E[Euler] for two circle points is 2(1-t) up to t=1/2, then 1."""
    trials = 100_000
    scales = [0.1, 0.25, 0.4, 0.6]
    est = estimate_curve(circle(), VR, euler_invariant(), 2, scales, trials, SEED)
    ok = True
    details = []
    for k, t in enumerate(scales):
        expected = 2.0 * (1.0 - t) if t <= 0.5 else 1.0
        band = 4.0 * float(est.stderr[k]) + 1e-12
        err = abs(float(est.mean[k]) - expected)
        details.append(f"t={t}: |{est.mean[k]:.4f}-{expected}|")
        if err > band:
            ok = False
    report(capsys, 2, "two-point-euler", ok, "; ".join(details))


def test_criterion_3_convergence_of_moments(capsys):
    """E[b1] converges to b1(circle)=1 as the sample densifies at t=0.1."""
    p100 = circle_homotopy_prob(100, 0.1)
    table = convergence_study(circle(), VR, betti_invariant(1), 0.1,
                              [10, 25, 50, 100], 10_000, SEED, target=1.0,
                              target_source="first Betti number of the circle")
    err = table.abs_error
    ok = (p100 >= 0.99
          and bool(np.all(np.diff(err) <= 1e-12))
          and err[-1] < 0.01
          and float(table.variance[-1]) < 0.01)
    report(capsys, 3, "moment-convergence", ok,
           f"|mean-1| by n: {np.array2string(err, precision=4)}, "
           f"final variance {table.variance[-1]:.4f}, exact P(100,0.1)={p100:.4f}")


def test_criterion_4_lipschitz_slope_stability(capsys):
    """Max discrete slope of the exact curve is stable under grid refinement."""
    n = 12
    slopes = {}
    for h in (1e-3, 1e-4):
        grid = np.arange(0.02, 1 / 3 - h, h)
        vals = [circle_homotopy_prob(n, float(r)) for r in grid]
        slopes[h], _ = max_discrete_slope(grid, vals)
    rel_change = abs(slopes[1e-4] - slopes[1e-3]) / slopes[1e-3]
    ok = rel_change < 0.05
    report(capsys, 4, "lipschitz-diagnostic", ok,
           f"max slope {slopes[1e-3]:.4f} (h=1e-3) vs {slopes[1e-4]:.4f} "
           f"(h=1e-4), change {100 * rel_change:.2f}%")


def test_criterion_5_homology_oracle_equivalence(capsys):
    """Fast GF(2) reduction equals the brute-force rank oracle everywhere."""
    rng = np.random.Generator(np.random.PCG64(SEED))
    mismatches = 0
    for k in range(1000):
        n = int(rng.integers(2, 9))
        t = float(rng.uniform(0.02, 0.5))
        c = vr_complex(sample(circle(), n, SEED, k), t)
        for i in (0, 1, 2):
            if betti(c, i) != betti_oracle_bruteforce(c, i):
                mismatches += 1
    report(capsys, 5, "homology-oracle", mismatches == 0,
           f"{1000 - mismatches}/1000 random complexes matched in dims 0..2")


def test_criterion_6_structural_properties(capsys):
    """VR monotonicity, Cech-VR interleaving, Euler-Poincare, b0 = components."""
    rng = np.random.Generator(np.random.PCG64(SEED + 6))
    bad = {"monotone": 0, "interleave": 0, "euler-poincare": 0, "b0": 0}

    for k in range(500):
        n = int(rng.integers(2, 9))
        s = sample(circle(), n, SEED + 1, k)
        t1, t2 = sorted(rng.uniform(0.02, 0.5, size=2))
        if not vr_complex(s, float(t1)).as_simplex_set() <= \
                vr_complex(s, float(t2)).as_simplex_set():
            bad["monotone"] += 1

    for k in range(500):
        n = int(rng.integers(2, 9))
        r = float(rng.uniform(0.03, 0.3))
        s = sample(circle(), n, SEED + 2, k)
        cech = cech_complex_circle(s, r).as_simplex_set()
        vr = vr_complex(s, 2 * r).as_simplex_set()
        # Cech(r) <= VR(2r); and VR(2r) <= Cech(2r + eps) since any vertex
        # of a simplex of diameter <= 2r witnesses the larger arcs
        if not (cech <= vr
                and vr <= cech_complex_circle(s, 2 * r + 1e-9).as_simplex_set()):
            bad["interleave"] += 1

    for k in range(500):
        n = int(rng.integers(2, 13))
        t = float(rng.uniform(0.02, 0.5))
        c = vr_complex(sample(circle(), n, SEED + 3, k), t)
        chi = euler_characteristic(c)
        alt = sum((-1) ** i * betti(c, i) for i in range(c.dimension + 1))
        if chi != alt:
            bad["euler-poincare"] += 1
        if betti(c, 0) != connected_components(c):
            bad["b0"] += 1

    ok = not any(bad.values())
    report(capsys, 6, "structural-properties", ok,
           "violations per property: " + json.dumps(bad))


def test_criterion_7_covering_radius_tail(capsys):
    """Empirical covering-radius tail is monotone and below the union bound."""
    eps = 0.2
    trials = 10_000
    ok = True
    fracs = []
    prev = 1.1
    for n in (5, 10, 20, 40):
        exceed = sum(covering_radius(sample(circle(), n, SEED + n, j)).value > eps
                     for j in range(trials))
        frac = exceed / trials
        se = math.sqrt(frac * (1.0 - frac) / trials)
        bound = covering_tail_bound(circle(), eps, n)
        fracs.append(f"n={n}: {frac:.4f} (bound {bound:.4f})")
        if frac > bound + 3.0 * se or frac > prev:
            ok = False
        prev = frac
    report(capsys, 7, "covering-tail", ok, "; ".join(fracs))


def test_criterion_8_worker_determinism(capsys, tmp_path):
    """CSV numeric columns are byte-identical for 1 and 8 workers."""
    bodies = []
    for workers in (1, 8):
        out = str(tmp_path / f"curve-w{workers}.csv")
        code = cli.main(["curve", "--n", "12", "--trials", "60", "--seed",
                         str(SEED), "--grid", "0.05,0.1,0.15,0.2,0.25",
                         "--workers", str(workers), "--output", out])
        assert code == cli.EXIT_OK
        with open(out) as fh:
            bodies.append([line for line in fh if not line.startswith("#")])
    ok = bodies[0] == bodies[1]
    report(capsys, 8, "worker-determinism", ok,
           f"{len(bodies[0]) - 1} data rows compared byte-for-byte")
