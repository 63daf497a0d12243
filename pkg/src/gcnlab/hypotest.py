"""Two-model hypothesis tests on perturbed GCN embeddings, and experiments.

A trial flips a fair coin B, samples a graph from the chosen graphon, runs the
GCN pipeline, perturbs the embedding with uniform resolution noise, and
decides between the two models by comparing the sorted scaled embedding to
each model's expected degree profile. The coupled convergence experiment
measures how coupled embedding differences shrink as n grows.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import diff_stats, linf_distance
from .gcn import Activation, EmbeddingVector, GcnSpec, gcn_embedding, perturb, walk_profile_gcn_spec
from .graphon import StepGraphon, graphon_from_dict, normalized_degree_profile
from .sampling import IsolatedVertexError, random_walk_matrix, sample_coupled_pair, sample_graph, sample_latents, rng_stream

MAX_RESAMPLES_PER_TRIAL = 100
WILSON_Z = 1.96


def default_layer_count(n: int, coeff: float = 10.0) -> int:
    """ceil(coeff * ln n) layers."""
    if n < 2:
        raise ValueError("need n >= 2")
    if coeff <= 0:
        raise ValueError("layer coefficient must be positive")
    return math.ceil(coeff * math.log(n))


def _warn_if_deep(layers: int, n: int):
    # the small-noise error bounds assume K well below sqrt(n)
    if layers * layers >= n:
        warnings.warn(
            f"layer count K={layers} is not small against sqrt(n)={math.sqrt(n):.1f}; "
            "resolution-limit bounds assume K << n^(1/2)",
            UserWarning,
            stacklevel=3,
        )


def wilson_ci(errors: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial rate."""
    if trials < 1 or errors < 0 or errors > trials:
        raise ValueError("need 0 <= errors <= trials with trials >= 1")
    p = errors / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def profile_test(h: EmbeddingVector, w0: StepGraphon, w1: StepGraphon, n: int) -> tuple[int, float, float]:
    """Decide which graphon generated the embedding.

    Compares sorted(n * H) to each model's normalized degree profile at n
    equal-mass quantiles in mean absolute deviation; ties go to model 0.
    """
    if h.d != n:
        raise ValueError(f"embedding has d={h.d}, expected n={n}")
    s = np.sort(n * h.values)
    stat0 = float(np.mean(np.abs(s - normalized_degree_profile(w0).quantiles(n))))
    stat1 = float(np.mean(np.abs(s - normalized_degree_profile(w1).quantiles(n))))
    return (0 if stat0 <= stat1 else 1, stat0, stat1)


@dataclass(frozen=True)
class TestConfig:
    """Inputs of a trial batch; layers=None uses ceil(layer_coeff * ln n)."""

    __test__ = False  # keep pytest from collecting this as a test class

    w0: StepGraphon
    w1: StepGraphon
    n: int
    eps_res: float
    trials: int
    seed: int
    layers: int | None = None
    layer_coeff: float = 10.0
    gcn: GcnSpec | None = None
    coupled: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.eps_res < 0:
            raise ValueError("eps_res must be nonnegative")

    def resolved_layers(self) -> int:
        if self.gcn is not None:
            return self.gcn.layers
        if self.layers is not None:
            return self.layers
        return default_layer_count(self.n, self.layer_coeff)

    def resolved_gcn(self) -> GcnSpec:
        return self.gcn if self.gcn is not None else walk_profile_gcn_spec(self.n, self.resolved_layers())

    @classmethod
    def from_dict(cls, doc: dict) -> "TestConfig":
        from .gcn import gcn_spec_from_dict

        missing = [k for k in ("w0", "w1", "n", "eps_res", "trials", "seed") if k not in doc]
        if missing:
            raise ValueError(f"trials config missing keys: {', '.join(missing)}")
        return cls(
            w0=graphon_from_dict(doc["w0"]),
            w1=graphon_from_dict(doc["w1"]),
            n=int(doc["n"]),
            eps_res=float(doc["eps_res"]),
            trials=int(doc["trials"]),
            seed=int(doc["seed"]),
            layers=int(doc["K"]) if "K" in doc else None,
            layer_coeff=float(doc.get("K_coeff", 10.0)),
            gcn=gcn_spec_from_dict(doc["gcn"]) if "gcn" in doc else None,
            coupled=bool(doc.get("coupled", False)),
        )


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    label: int
    decision: int
    stat0: float
    stat1: float
    linf_coupled_diff: float | None = None


@dataclass(frozen=True)
class TrialRunResult:
    config: TestConfig
    layers: int
    records: tuple[TrialRecord, ...]
    resamples: int

    @property
    def errors(self) -> int:
        return sum(1 for r in self.records if r.decision != r.label)

    @property
    def error_rate(self) -> float:
        return self.errors / len(self.records)

    @property
    def ci95(self) -> tuple[float, float]:
        return wilson_ci(self.errors, len(self.records))


def _sample_walk_matrix(w, n, rng):
    """One graph and its walk matrix; returns (ahat, resamples_used)."""
    for attempt in range(MAX_RESAMPLES_PER_TRIAL + 1):
        g = sample_graph(w, sample_latents(n, rng), rng)
        try:
            return random_walk_matrix(g), attempt
        except IsolatedVertexError:
            continue
    raise RuntimeError(f"exceeded {MAX_RESAMPLES_PER_TRIAL} resamples for an isolated-vertex-free sample")


def _sample_coupled_walk_matrices(w0, w1, n, rng):
    for attempt in range(MAX_RESAMPLES_PER_TRIAL + 1):
        g0, g1 = sample_coupled_pair(w0, w1, n, rng)
        try:
            return random_walk_matrix(g0), random_walk_matrix(g1), attempt
        except IsolatedVertexError:
            continue
    raise RuntimeError(f"exceeded {MAX_RESAMPLES_PER_TRIAL} resamples for an isolated-vertex-free pair")


def _map_trials(fn, trials: int, threads: int) -> list:
    if threads <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


def run_trials(cfg: TestConfig, threads: int = 1) -> TrialRunResult:
    """Run cfg.trials independent coin-flip trials; per-trial RNG is keyed by
    (seed, trial_id) so results are identical for any thread count."""
    layers = cfg.resolved_layers()
    _warn_if_deep(layers, cfg.n)
    spec = cfg.resolved_gcn()

    def one(t: int) -> tuple[TrialRecord, int]:
        rng = rng_stream(cfg.seed, t)
        label = int(rng.integers(2))
        if cfg.coupled:
            ahat0, ahat1, resamples = _sample_coupled_walk_matrices(cfg.w0, cfg.w1, cfg.n, rng)
            h0 = gcn_embedding(ahat0, spec)
            h1 = gcn_embedding(ahat1, spec)
            linf_c = linf_distance(h0, h1)
            h = h1 if label else h0
        else:
            ahat, resamples = _sample_walk_matrix(cfg.w1 if label else cfg.w0, cfg.n, rng)
            h = gcn_embedding(ahat, spec)
            linf_c = None
        decision, stat0, stat1 = profile_test(perturb(h, cfg.eps_res, rng), cfg.w0, cfg.w1, cfg.n)
        return TrialRecord(t, label, decision, stat0, stat1, linf_c), resamples

    outcomes = _map_trials(one, cfg.trials, threads)
    return TrialRunResult(
        config=cfg,
        layers=layers,
        records=tuple(rec for rec, _ in outcomes),
        resamples=sum(r for _, r in outcomes),
    )


# ---------------------------------------------------------------------------
# coupled convergence experiment

@dataclass(frozen=True)
class ConvergenceTrialRow:
    n: int
    layers: int
    trial_id: int
    linf: float
    median_abs: float
    frac_below: float
    threshold: float


@dataclass(frozen=True)
class ConvergenceAggregate:
    n: int
    layers: int
    trials: int
    linf_median: float
    median_abs_median: float
    frac_below_median: float
    n_linf_median: float


@dataclass(frozen=True)
class ConvergenceResult:
    rows: tuple[ConvergenceTrialRow, ...]
    aggregates: tuple[ConvergenceAggregate, ...]
    slope_linf: float
    slope_median_abs: float
    resamples: int


def _loglog_slope(ns, ys) -> float:
    ns = np.asarray(ns, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if ns.size < 2 or np.any(ys <= 0):
        return float("nan")
    return float(np.polyfit(np.log(ns), np.log(ys), 1)[0])


def coupled_convergence_experiment(
    w0: StepGraphon,
    w1: StepGraphon,
    n_grid,
    trials: int,
    seed: int,
    layer_coeff: float = 10.0,
    activation: Activation = Activation("relu"),
    threshold_coeff: float = 10.0,
    threads: int = 1,
) -> ConvergenceResult:
    """Coupled-pair embedding differences across a grid of graph sizes.

    For each n, `trials` coupled pairs are sampled, both graphs run through
    the same K = ceil(layer_coeff * ln n) GCN (identity weights, the given
    activation), and coordinatewise diff stats are recorded with threshold
    threshold_coeff / n^2. Slopes are least-squares fits of log median vs
    log n.
    """
    n_grid = [int(n) for n in n_grid]
    if not n_grid:
        raise ValueError("n_grid must be nonempty")
    rows: list[ConvergenceTrialRow] = []
    aggregates: list[ConvergenceAggregate] = []
    total_resamples = 0
    for n in n_grid:
        layers = default_layer_count(n, layer_coeff)
        spec = GcnSpec(layers=layers, activation=activation, budget=(1.0, float(layers)), dim=n)
        threshold = threshold_coeff / (n * n)

        def one(t: int, n=n, spec=spec, threshold=threshold) -> tuple[ConvergenceTrialRow, int]:
            rng = rng_stream(seed, n, t)
            ahat0, ahat1, resamples = _sample_coupled_walk_matrices(w0, w1, n, rng)
            stats = diff_stats(gcn_embedding(ahat0, spec), gcn_embedding(ahat1, spec), threshold)
            return (
                ConvergenceTrialRow(n, spec.layers, t, stats.linf, stats.median_abs,
                                    stats.frac_below, threshold),
                resamples,
            )

        outcomes = _map_trials(one, trials, threads)
        batch = [row for row, _ in outcomes]
        total_resamples += sum(r for _, r in outcomes)
        rows.extend(batch)
        linf_median = float(np.median([r.linf for r in batch]))
        aggregates.append(ConvergenceAggregate(
            n=n,
            layers=layers,
            trials=trials,
            linf_median=linf_median,
            median_abs_median=float(np.median([r.median_abs for r in batch])),
            frac_below_median=float(np.median([r.frac_below for r in batch])),
            n_linf_median=n * linf_median,
        ))
    return ConvergenceResult(
        rows=tuple(rows),
        aggregates=tuple(aggregates),
        slope_linf=_loglog_slope([a.n for a in aggregates], [a.linf_median for a in aggregates]),
        slope_median_abs=_loglog_slope([a.n for a in aggregates],
                                       [a.median_abs_median for a in aggregates]),
        resamples=total_resamples,
    )


# ---------------------------------------------------------------------------
# CSV emission (shared by the command-line entry points)

def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return repr(float(x))


def csv_lines(header: list[str], rows: list[list]) -> list[str]:
    return [",".join(header)] + [",".join(_fmt(v) for v in row) for row in rows]


def records_csv_lines(result: TrialRunResult) -> list[str]:
    cfg = result.config
    header = ["trial_id", "B", "decision", "stat0", "stat1", "n", "K", "eps_res", "seed"]
    if cfg.coupled:
        header.append("linf_coupled_diff")
    rows = []
    for r in result.records:
        row = [r.trial_id, r.label, r.decision, r.stat0, r.stat1,
               cfg.n, result.layers, cfg.eps_res, cfg.seed]
        if cfg.coupled:
            row.append(r.linf_coupled_diff)
        rows.append(row)
    return csv_lines(header, rows)


def summary_csv_lines(result: TrialRunResult) -> list[str]:
    cfg = result.config
    lo, hi = result.ci95
    header = ["n", "K", "eps_res", "trials", "errors", "error_rate",
              "ci_lo", "ci_hi", "resamples", "seed"]
    row = [cfg.n, result.layers, cfg.eps_res, cfg.trials, result.errors,
           result.error_rate, lo, hi, result.resamples, cfg.seed]
    return csv_lines(header, [row])


def convergence_rows_csv_lines(result: ConvergenceResult) -> list[str]:
    header = ["n", "K", "trial_id", "linf", "median_abs", "frac_below", "threshold"]
    rows = [[r.n, r.layers, r.trial_id, r.linf, r.median_abs, r.frac_below, r.threshold]
            for r in result.rows]
    return csv_lines(header, rows)


def convergence_aggregate_csv_lines(result: ConvergenceResult) -> list[str]:
    header = ["n", "K", "trials", "linf_median", "median_abs_median", "frac_below_median",
              "n_linf_median", "slope_linf", "slope_median_abs"]
    rows = [[a.n, a.layers, a.trials, a.linf_median, a.median_abs_median,
             a.frac_below_median, a.n_linf_median, result.slope_linf, result.slope_median_abs]
            for a in result.aggregates]
    return csv_lines(header, rows)
