"""Command-line entry point.

Subcommands: ``curve`` (Monte Carlo invariant curve), ``oracle`` (exact circle
values), ``converge`` (fixed-scale convergence table) and ``selftest``.
Outputs are CSV or JSON with the full run configuration embedded, plus a
gnuplot script next to every curve CSV.  Exit codes: 0 ok, 1 selftest
failure, 2 usage/domain error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import circle_oracle, estimator, manifolds
from .complexes import cech_complex_circle, edge_count, vr_complex
from .errors import SimplexBudgetError
from .homology import InvariantSpec, betti_invariant, euler_invariant
from .manifolds import ManifoldModel, PointSample

FORMAT_VERSION = "betticurve-1"
SELFTEST_MIN_TRIALS = 500

EXIT_OK = 0
EXIT_SELFTEST_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    """Complete, serializable description of one CLI run."""

    subcommand: str
    manifold: str = "circle"
    torus_dim: int = 2
    complex_kind: str = "vr"
    invariant: str = "betti1"
    n: int = 20
    trials: int = 1000
    master_seed: int = 0
    t_min: float | None = None
    t_max: float | None = None
    steps: int | None = None
    grid: list[float] = field(default_factory=list)
    max_dim: int | str | None = None
    workers: int = 1
    t: float | None = None
    n_values: list[int] = field(default_factory=list)
    target: float | None = None
    target_source: str = "reference value"
    output: str | None = None
    fmt: str = "csv"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls(**data)

    def manifold_model(self) -> ManifoldModel:
        if self.manifold == "circle":
            return manifolds.circle()
        if self.manifold == "torus":
            return manifolds.flat_torus(self.torus_dim)
        if self.manifold == "sphere":
            return manifolds.sphere2()
        raise ValueError(f"unknown manifold {self.manifold!r}")

    def invariant_spec(self) -> InvariantSpec:
        if self.invariant == "euler":
            return euler_invariant()
        if self.invariant.startswith("betti"):
            return betti_invariant(int(self.invariant[len("betti"):]))
        raise ValueError(f"unknown invariant {self.invariant!r}")

    def resolved_grid(self) -> list[float]:
        if self.grid:
            g = [float(t) for t in self.grid]
        else:
            if self.t_min is None or self.t_max is None or self.steps is None:
                raise ValueError("provide either --grid or --t-min/--t-max/--steps")
            if self.steps < 1:
                raise ValueError("steps must be >= 1")
            if self.t_min < 0:
                raise ValueError("t_min must be nonnegative")
            g = [float(x) for x in np.linspace(self.t_min, self.t_max, self.steps)]
        if any(not a < b for a, b in zip(g, g[1:])):
            raise ValueError("grid must be strictly increasing")
        return g

    def resolved_max_dim(self):
        if self.max_dim is None:
            return None
        if self.max_dim == "full":
            return -1
        return int(self.max_dim)


def _fmt(x) -> str:
    """Shortest round-trip, locale-independent decimal representation."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_table(config: RunConfig, header: list[str], rows: list[list], path: str) -> None:
    if config.fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write(f"# format_version: {FORMAT_VERSION}\n")
            fh.write(f"# config: {config.to_json()}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join("" if v is None else _fmt(v) for v in row) + "\n")
    else:
        columns = {name: [row[k] for row in rows] for k, name in enumerate(header)}
        doc = {"format_version": FORMAT_VERSION, "config": asdict(config), "columns": columns}
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


def _write_plot_script(csv_path: str, with_oracle: bool) -> str:
    gp_path = os.path.splitext(csv_path)[0] + ".gp"
    csv_name = os.path.basename(csv_path)
    lines = [
        f"# gnuplot script for {csv_name}: expectation and variance vs scale",
        'set datafile separator ","',
        'set xlabel "scale t"',
        "set key top left",
        f'plot "{csv_name}" using 1:4 with lines lw 2 title "mean", \\',
        f'     "{csv_name}" using 1:4:6 with yerrorbars pt 7 ps 0.4 title "stderr", \\',
    ]
    if with_oracle:
        lines.append(f'     "{csv_name}" using 1:5 with lines dt 2 title "variance", \\')
        lines.append(f'     "{csv_name}" using 1:7 with lines lc rgb "black" title "exact"')
    else:
        lines.append(f'     "{csv_name}" using 1:5 with lines dt 2 title "variance"')
    with open(gp_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return gp_path


def _oracle_value(config: RunConfig, t: float) -> float | None:
    if (config.manifold == "circle" and config.complex_kind == "vr"
            and config.invariant == "betti1" and 0 < Fraction(t) < Fraction(1, 3)):
        return circle_oracle.circle_homotopy_prob(config.n, t)
    return None


def run_curve(config: RunConfig) -> int:
    grid = config.resolved_grid()
    est = estimator.estimate_curve(
        config.manifold_model(), config.complex_kind, config.invariant_spec(),
        config.n, grid, config.trials, config.master_seed,
        max_dim=config.resolved_max_dim(), workers=config.workers)
    rows = []
    for k, t in enumerate(grid):
        rows.append([t, config.n, config.trials,
                     float(est.mean[k]), float(est.variance[k]), float(est.stderr[k]),
                     _oracle_value(config, t)])
    out = config.output or "curve." + config.fmt
    _write_table(config, ["t", "n", "trials", "mean", "variance", "stderr", "oracle_p"],
                 rows, out)
    if config.fmt == "csv":
        _write_plot_script(out, with_oracle=any(r[6] is not None for r in rows))
    print(f"wrote {out}")
    return EXIT_OK


def run_oracle(config: RunConfig) -> int:
    grid = config.resolved_grid()
    evals = circle_oracle.circle_oracle_curve(config.n, grid)
    rows = [[e.r, e.n, e.p_circle, e.expected_b1, e.variance_b1] for e in evals]
    out = config.output or "oracle." + config.fmt
    _write_table(config, ["r", "n", "p", "expected_b1", "variance_b1"], rows, out)
    print(f"wrote {out}")
    return EXIT_OK


def run_converge(config: RunConfig) -> int:
    if config.t is None or not config.n_values:
        raise ValueError("converge needs --t and --n-values")
    if config.target is None:
        raise ValueError("converge needs --target")
    table = estimator.convergence_study(
        config.manifold_model(), config.complex_kind, config.invariant_spec(),
        config.t, config.n_values, config.trials, config.master_seed,
        config.target, target_source=config.target_source,
        max_dim=config.resolved_max_dim(), workers=config.workers)
    rows = []
    for k, n in enumerate(table.n_values):
        rows.append([n, table.t, config.trials, float(table.mean[k]),
                     float(table.variance[k]), float(table.stderr[k]),
                     float(table.abs_error[k]), table.target])
    out = config.output or "converge." + config.fmt
    _write_table(config, ["n", "t", "trials", "mean", "variance", "stderr",
                          "abs_error", "target"], rows, out)
    print(f"wrote {out}")
    return EXIT_OK


def _selftest_checks(config: RunConfig):
    trials = config.trials
    seed = config.master_seed
    circ = manifolds.circle()

    # exact closed-form oracle vs Monte Carlo first Betti number
    grid = (0.15, 0.22, 0.3)
    est = estimator.estimate_curve(circ, "vr", betti_invariant(1), 10, grid,
                                   trials, seed, workers=config.workers)
    for k, r in enumerate(grid):
        p = circle_oracle.circle_homotopy_prob(10, r)
        band = 4.0 * math.sqrt(p * (1.0 - p) / trials) + 1e-12
        yield (f"oracle-vs-mc n=10 r={r}", abs(float(est.mean[k]) - p) <= band,
               f"mean={est.mean[k]:.4f} exact={p:.4f} band={band:.4f}")

    # two-point Euler characteristic curve: 2(1-t) for t <= 1/2
    grid2 = (0.1, 0.3)
    est2 = estimator.estimate_curve(circ, "vr", euler_invariant(), 2, grid2,
                                    trials, seed, workers=config.workers)
    for k, t in enumerate(grid2):
        expect = 2.0 * (1.0 - t)
        band = 4.0 * float(est2.stderr[k]) + 1e-12
        yield (f"euler-two-points t={t}", abs(float(est2.mean[k]) - expect) <= band,
               f"mean={est2.mean[k]:.4f} exact={expect:.4f} band={band:.4f}")

    # closed VR edge convention: edges at exactly d == t must be present
    quad = PointSample(circ, np.array([0.0, 0.25, 0.5, 0.75]), 0, 0)
    yield ("vr-closed-convention", edge_count(quad, 0.25) == 4,
           f"edge_count={edge_count(quad, 0.25)} (want 4)")

    # Cech/VR interleaving on random samples:
    # Cech(r) <= VR(2r) <= Cech(2r + eps) for every eps > 0
    rng = np.random.Generator(np.random.PCG64(manifolds.mix_seed(seed, 10_000)))
    bad = 0
    for k in range(100):
        n = int(rng.integers(3, 9))
        r = float(rng.uniform(0.03, 0.3))
        s = manifolds.sample(circ, n, seed, 20_000 + k)
        cech = cech_complex_circle(s, r).as_simplex_set()
        vr = vr_complex(s, 2 * r).as_simplex_set()
        cech_eps = cech_complex_circle(s, 2 * r + 1e-9).as_simplex_set()
        if not (cech <= vr and vr <= cech_eps):
            bad += 1
    yield ("cech-vr-interleaving", bad == 0, f"{bad}/100 samples violated the inclusions")


def run_selftest(config: RunConfig) -> int:
    if config.trials < SELFTEST_MIN_TRIALS:
        raise ValueError(
            f"selftest needs at least {SELFTEST_MIN_TRIALS} trials for its "
            f"statistical bands, got {config.trials}")
    failures = 0
    for name, ok, detail in _selftest_checks(config):
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failures += 0 if ok else 1
    if failures:
        print(f"selftest: {failures} check(s) failed")
        return EXIT_SELFTEST_FAIL
    print("selftest: all checks passed")
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _max_dim_arg(text: str):
    return "full" if text == "full" else int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betticurve",
        description="Expectation and variance curves of topological invariants "
                    "of random geometric complexes on model manifolds.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, estimation=True):
        p.add_argument("--seed", type=int, default=0, dest="master_seed")
        p.add_argument("--output", type=str, default=None)
        p.add_argument("--fmt", choices=("csv", "json"), default="csv")
        if estimation:
            p.add_argument("--manifold", choices=("circle", "torus", "sphere"),
                           default="circle")
            p.add_argument("--torus-dim", type=int, default=2, dest="torus_dim")
            p.add_argument("--complex", choices=("vr", "cech"), default="vr",
                           dest="complex_kind")
            p.add_argument("--invariant",
                           choices=("betti0", "betti1", "betti2", "euler"),
                           default="betti1")
            p.add_argument("--trials", type=int, default=1000)
            p.add_argument("--max-dim", type=_max_dim_arg, default=None, dest="max_dim")
            p.add_argument("--workers", type=int, default=None)

    def add_grid(p):
        p.add_argument("--t-min", type=float, default=None, dest="t_min")
        p.add_argument("--t-max", type=float, default=None, dest="t_max")
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--grid", type=_float_list, default=[])

    p_curve = sub.add_parser("curve", help="Monte Carlo invariant curve over a scale grid")
    add_common(p_curve)
    add_grid(p_curve)
    p_curve.add_argument("--n", type=int, default=20)

    p_oracle = sub.add_parser("oracle", help="exact circle first-Betti-number values")
    add_common(p_oracle, estimation=False)
    add_grid(p_oracle)
    p_oracle.add_argument("--n", type=int, default=20)

    p_conv = sub.add_parser("converge", help="fixed-scale convergence table in n")
    add_common(p_conv)
    p_conv.add_argument("--t", type=float, default=None)
    p_conv.add_argument("--n-values", type=_int_list, default=[], dest="n_values")
    p_conv.add_argument("--target", type=float, default=None)
    p_conv.add_argument("--target-source", type=str, default="reference value",
                        dest="target_source")

    p_self = sub.add_parser("selftest", help="fast statistical and structural self-checks")
    p_self.add_argument("--seed", type=int, default=0, dest="master_seed")
    p_self.add_argument("--trials", type=int, default=2000)
    p_self.add_argument("--workers", type=int, default=None)

    return parser


def _resolve_workers(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("BETTI_WORKERS")
    return int(env) if env else 1


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None}
    fields["workers"] = _resolve_workers(getattr(args, "workers", None))
    fields.pop("grid", None)
    config = RunConfig(**{k: v for k, v in fields.items() if k in RunConfig.__dataclass_fields__})
    if getattr(args, "grid", None):
        config.grid = list(args.grid)
    return config


def run(config: RunConfig) -> int:
    handlers = {"curve": run_curve, "oracle": run_oracle,
                "converge": run_converge, "selftest": run_selftest}
    return handlers[config.subcommand](config)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    try:
        return run(config)
    except SimplexBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
