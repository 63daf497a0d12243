"""Distances, cut norms, stationary distributions, and error lower bounds."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .gcn import EmbeddingVector
from .sampling import SampleGraph, rng_stream

EXACT_CUT_NORM_CAP = 14
EXACT_CUT_DISTANCE_CAP = 8


class DisconnectedGraphError(ValueError):
    """The graph is not connected, so the walk has no unique stationary law."""

    def __init__(self, component_sizes):
        self.component_sizes = tuple(int(s) for s in component_sizes)
        super().__init__(
            f"graph is disconnected: {len(self.component_sizes)} components "
            f"with sizes {list(self.component_sizes)}"
        )


def _vector(h) -> np.ndarray:
    if isinstance(h, EmbeddingVector):
        return h.values
    v = np.asarray(h, dtype=float)
    if v.ndim != 1:
        raise ValueError("expected a vector or an EmbeddingVector")
    return v


def linf_distance(h0, h1) -> float:
    """Max absolute coordinate difference."""
    v0, v1 = _vector(h0), _vector(h1)
    if v0.size != v1.size:
        raise ValueError(f"dimension mismatch: {v0.size} vs {v1.size}")
    return float(np.max(np.abs(v0 - v1)))


@dataclass(frozen=True)
class DiffStats:
    """Coordinatewise difference summary of two embedding vectors."""

    linf: float
    median_abs: float
    frac_below: float
    threshold: float


def diff_stats(h0, h1, threshold: float) -> DiffStats:
    """linf, median |diff|, and the fraction of coordinates below threshold."""
    v0, v1 = _vector(h0), _vector(h1)
    if v0.size != v1.size:
        raise ValueError(f"dimension mismatch: {v0.size} vs {v1.size}")
    d = np.abs(v0 - v1)
    return DiffStats(
        linf=float(d.max()),
        median_abs=float(np.median(d)),
        frac_below=float(np.mean(d < threshold)),
        threshold=float(threshold),
    )


# ---------------------------------------------------------------------------
# cut norm and cut distance

@dataclass(frozen=True)
class CutNormResult:
    """Witnessed cut-norm value: |sum_{i in S, j in T} M_ij| / n^2."""

    value: float
    s: np.ndarray
    t: np.ndarray
    exact: bool

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=np.int64))
        object.__setattr__(self, "t", np.asarray(self.t, dtype=np.int64))


def cut_norm_value(m: np.ndarray, s, t) -> float:
    """Re-evaluate a witness pair from scratch."""
    m = np.asarray(m, dtype=float)
    s = np.asarray(s, dtype=np.int64)
    t = np.asarray(t, dtype=np.int64)
    if s.size == 0 or t.size == 0:
        return 0.0
    return float(abs(m[np.ix_(s, t)].sum()) / m.shape[0] ** 2)


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("cut norm expects a square matrix")
    return m


def _subset_indicators(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.uint32)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(float)


def cut_norm_exact(m: np.ndarray) -> CutNormResult:
    """Exhaustive cut norm for n <= 14.

    All 2^n row subsets S are enumerated; for each S the optimal column set is
    the positive (resp. negative) support of the column sums over S, which
    dominates every other T. The witness re-evaluates to the returned value.
    """
    m = _square(m)
    n = m.shape[0]
    if n > EXACT_CUT_NORM_CAP:
        raise ValueError(f"exact cut norm is capped at n <= {EXACT_CUT_NORM_CAP}, got {n}")
    ind = _subset_indicators(n)
    colsums = ind @ m  # row k: column sums over subset k
    pos = np.where(colsums > 0, colsums, 0.0).sum(axis=1)
    neg = np.where(colsums < 0, -colsums, 0.0).sum(axis=1)
    best_side = pos >= neg
    best = np.where(best_side, pos, neg)
    k = int(best.argmax())
    s = np.flatnonzero(ind[k] > 0)
    t = np.flatnonzero(colsums[k] > 0) if best_side[k] else np.flatnonzero(colsums[k] < 0)
    return CutNormResult(value=float(best[k]) / n**2, s=s, t=t, exact=True)


def cut_norm_heuristic(m: np.ndarray, restarts: int = 20, seed=0) -> CutNormResult:
    """Alternating-ascent lower bound on the cut norm.

    From random column sets, rows and columns are alternately reset to the
    supports that maximize the signed sum until a fixed point; the best
    witness over restarts and both signs is re-evaluated from scratch, so the
    value is always a certified lower bound.
    """
    m = _square(m)
    n = m.shape[0]
    if restarts < 1:
        raise ValueError("need at least one restart")
    rng = rng_stream(seed)
    best_val = 0.0
    best_s = np.empty(0, dtype=np.int64)
    best_t = np.empty(0, dtype=np.int64)
    for _ in range(restarts):
        t0 = rng.random(n) < 0.5
        for sign in (1.0, -1.0):
            t = t0.copy()
            s = np.zeros(n, dtype=bool)
            for _ in range(200):
                s_new = sign * (m @ t) > 0
                t_new = sign * (m.T @ s_new) > 0
                if np.array_equal(s_new, s) and np.array_equal(t_new, t):
                    break
                s, t = s_new, t_new
            val = abs(float(s @ m @ t)) / n**2
            if val > best_val:
                best_val = val
                best_s = np.flatnonzero(s)
                best_t = np.flatnonzero(t)
    certified = cut_norm_value(m, best_s, best_t)
    return CutNormResult(value=certified, s=best_s, t=best_t, exact=False)


def cut_norm(m: np.ndarray, mode: str = "exact", restarts: int = 20, seed=0) -> CutNormResult:
    if mode == "exact":
        return cut_norm_exact(m)
    if mode == "heuristic":
        return cut_norm_heuristic(m, restarts=restarts, seed=seed)
    raise ValueError(f"unknown mode {mode!r}; use 'exact' or 'heuristic'")


def _permuted(a: np.ndarray, perm: np.ndarray) -> np.ndarray:
    return a[perm][:, perm]


def cut_distance_graphs(g0: SampleGraph, g1: SampleGraph, mode: str = "exact",
                        seed=0, restarts: int = 8) -> float:
    """Min over vertex alignments of the cut norm of the adjacency difference.

    exact mode enumerates all n! alignments (n <= 8) with the exact cut norm;
    heuristic mode starts from the degree-sorted alignment and runs
    first-improvement pairwise-swap descent. The inner cut norm is exact up
    to its own cap (so the result is an upper bound from a feasible
    alignment); past the cap it falls back to the restarted ascent and the
    value is a qualitative estimate only.
    """
    if g0.n != g1.n:
        raise ValueError(f"graphs must have the same size, got {g0.n} and {g1.n}")
    n = g0.n
    a0 = g0.adjacency.astype(float)
    a1 = g1.adjacency.astype(float)
    if mode == "exact":
        if n > EXACT_CUT_DISTANCE_CAP:
            raise ValueError(
                f"exact cut distance is capped at n <= {EXACT_CUT_DISTANCE_CAP}, got {n}"
            )
        ind = _subset_indicators(n)
        best = math.inf
        for perm in itertools.permutations(range(n)):
            d = a0 - _permuted(a1, np.asarray(perm))
            colsums = ind @ d
            val = max(
                float(np.where(colsums > 0, colsums, 0.0).sum(axis=1).max()),
                float(np.where(colsums < 0, -colsums, 0.0).sum(axis=1).max()),
            )
            best = min(best, val)
            if best == 0.0:
                break
        return best / n**2
    if mode != "heuristic":
        raise ValueError(f"unknown mode {mode!r}; use 'exact' or 'heuristic'")

    eval_counter = itertools.count()

    def objective(perm: np.ndarray) -> float:
        d = a0 - _permuted(a1, perm)
        if n <= EXACT_CUT_NORM_CAP:
            return cut_norm_exact(d).value
        return cut_norm_heuristic(
            d, restarts=restarts, seed=rng_stream(seed, next(eval_counter))
        ).value

    order0 = np.argsort(g0.degrees(), kind="stable")
    order1 = np.argsort(g1.degrees(), kind="stable")
    perm = np.empty(n, dtype=np.int64)
    perm[order0] = order1
    best = objective(perm)
    for _ in range(4):  # swap-descent passes
        improved = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                cand = perm.copy()
                cand[i], cand[j] = cand[j], cand[i]
                val = objective(cand)
                if val < best - 1e-15:
                    best, perm, improved = val, cand, True
        if not improved:
            break
    return best


# ---------------------------------------------------------------------------
# stationary distribution

def connected_component_sizes(g: SampleGraph) -> list[int]:
    """Sizes of connected components, by BFS over the dense adjacency."""
    a = g.adjacency != 0
    unseen = np.ones(g.n, dtype=bool)
    sizes = []
    while unseen.any():
        frontier = np.zeros(g.n, dtype=bool)
        frontier[int(np.flatnonzero(unseen)[0])] = True
        comp = np.zeros(g.n, dtype=bool)
        while frontier.any():
            comp |= frontier
            frontier = (a[frontier].any(axis=0)) & ~comp
        sizes.append(int(comp.sum()))
        unseen &= ~comp
    return sizes


def stationary_distribution(g: SampleGraph) -> np.ndarray:
    """pi_j = deg(j) / (2 |E|) for a connected graph; pi^T Ahat = pi^T."""
    sizes = connected_component_sizes(g)
    if len(sizes) != 1:
        raise DisconnectedGraphError(sizes)
    deg = g.degrees().astype(float)
    return deg / deg.sum()


# ---------------------------------------------------------------------------
# error lower bounds for perturbed-embedding tests

class BoundValue(NamedTuple):
    value: float
    vacuous: bool


def error_lb_delta_pos(delta: float, eps_res: float, n: int) -> BoundValue:
    """(1 - delta/(2 eps_res n))^n; vacuous (0) when delta/(2 eps_res n) >= 1.

    Meaningful only in the regime eps_res > delta / (2n), where no test can
    beat this error rate on delta-separated models.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if eps_res <= 0:
        raise ValueError("eps_res must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    x = delta / (2.0 * eps_res * n)
    if x >= 1.0:
        return BoundValue(0.0, True)
    return BoundValue((1.0 - x) ** n, False)


def error_lb_delta_zero(c: float, eps_res: float, n: int) -> float:
    """exp(-c / (eps_res n)): indistinguishability floor for zero separation."""
    if c <= 0:
        raise ValueError("c must be positive")
    if eps_res <= 0:
        raise ValueError("eps_res must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    return math.exp(-c / (eps_res * n))
