"""Latent sampling, edge sampling, coupled pairs, and random-walk normalization.

Randomness flows through numpy SeedSequence streams keyed by (seed, *path), so
per-trial streams are independent and results do not depend on worker count or
execution order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphon import StepGraphon


class IsolatedVertexError(ValueError):
    """A sampled graph has a vertex with no edges; the walk matrix is undefined."""

    def __init__(self, vertex: int):
        self.vertex = int(vertex)
        super().__init__(f"vertex {self.vertex} is isolated; random-walk matrix undefined")


def rng_stream(seed, *path: int) -> np.random.Generator:
    """Generator for (seed, *path); passes through an existing Generator."""
    if isinstance(seed, np.random.Generator):
        if path:
            raise ValueError("cannot derive a sub-stream from a live Generator")
        return seed
    return np.random.default_rng(np.random.SeedSequence((int(seed),) + tuple(int(p) for p in path)))


@dataclass(frozen=True)
class LatentPoints:
    """Vertex latent positions in [0,1]; at least two vertices."""

    xs: np.ndarray

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        if xs.ndim != 1 or xs.size < 2:
            raise ValueError("latents must be a vector of length >= 2")
        if xs.min() < 0.0 or xs.max() > 1.0:
            raise ValueError("latents must lie in [0,1]")
        xs.setflags(write=False)
        object.__setattr__(self, "xs", xs)

    @property
    def n(self) -> int:
        return self.xs.size


@dataclass(frozen=True)
class SampleGraph:
    """Undirected simple graph: symmetric 0/1 adjacency, zero diagonal."""

    adjacency: np.ndarray
    latents: LatentPoints | None = None

    def __post_init__(self):
        a = np.asarray(self.adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
            raise ValueError("adjacency must be square with n >= 2")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diagonal(a) != 0):
            raise ValueError("adjacency must have a zero diagonal")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        if self.latents is not None and self.latents.n != a.shape[0]:
            raise ValueError("latents length must match adjacency size")
        a = a.astype(np.uint8)
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1, dtype=np.int64)


def sample_latents(n: int, seed) -> LatentPoints:
    """n i.i.d. uniform latent positions."""
    if n < 2:
        raise ValueError(f"need n >= 2 vertices, got {n}")
    return LatentPoints(rng_stream(seed).random(n))


def _edge_probabilities(w: StepGraphon, latents: LatentPoints) -> tuple[np.ndarray, ...]:
    """Upper-triangle (i<j, row-major) edge probabilities under w."""
    b = w.blocks_of(latents.xs)
    iu, ju = np.triu_indices(latents.n, k=1)
    return iu, ju, w.values[b[iu], b[ju]]


def _assemble(n: int, iu, ju, edges: np.ndarray, latents: LatentPoints) -> SampleGraph:
    a = np.zeros((n, n), dtype=np.uint8)
    a[iu[edges], ju[edges]] = 1
    a[ju[edges], iu[edges]] = 1
    return SampleGraph(adjacency=a, latents=latents)


def sample_graph(w: StepGraphon, latents, seed) -> SampleGraph:
    """Bernoulli graph: edge ij present with probability W(x_i, x_j)."""
    if not isinstance(latents, LatentPoints):
        latents = LatentPoints(latents)
    iu, ju, probs = _edge_probabilities(w, latents)
    u = rng_stream(seed).random(probs.size)
    return _assemble(latents.n, iu, ju, u < probs, latents)


def sample_coupled_pair(w0: StepGraphon, w1: StepGraphon, n: int, seed) -> tuple[SampleGraph, SampleGraph]:
    """Two graphs on shared latents and shared edge uniforms.

    Edge ij is present in graph b exactly when U_ij < W_b(x_i, x_j), so each
    marginal is the graph model of its own kernel and identical kernels yield
    identical graphs. This is the monotone (variance-minimizing) coupling.
    """
    rng = rng_stream(seed)
    latents = sample_latents(n, rng)
    iu, ju, probs0 = _edge_probabilities(w0, latents)
    probs1 = _edge_probabilities(w1, latents)[2]
    u = rng.random(probs0.size)
    return (
        _assemble(n, iu, ju, u < probs0, latents),
        _assemble(n, iu, ju, u < probs1, latents),
    )


def random_walk_matrix(g: SampleGraph) -> np.ndarray:
    """Row-normalized adjacency; errors on the first isolated vertex found."""
    deg = g.degrees()
    isolated = np.flatnonzero(deg == 0)
    if isolated.size:
        raise IsolatedVertexError(isolated[0])
    return g.adjacency.astype(float) / deg[:, None]


# ---------------------------------------------------------------------------
# edge-list and latent serialization

def write_edge_list(g: SampleGraph, path) -> Path:
    """"n m" header then one "i j" line per edge, 0-indexed, i<j ascending."""
    path = Path(path)
    iu, ju = np.nonzero(np.triu(g.adjacency, k=1))
    lines = [f"{g.n} {iu.size}"]
    lines.extend(f"{i} {j}" for i, j in zip(iu.tolist(), ju.tolist()))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_edge_list(path) -> SampleGraph:
    """Parse an edge-list file; malformed content raises ValueError."""
    text = Path(path).read_text()
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 2:
        raise ValueError(f"{path}: expected 'n m' header")
    try:
        n, m = (int(tok) for tok in rows[0])
    except ValueError as exc:
        raise ValueError(f"{path}: non-integer header") from exc
    if n < 2 or m < 0:
        raise ValueError(f"{path}: invalid header n={n} m={m}")
    if len(rows) - 1 != m:
        raise ValueError(f"{path}: header claims {m} edges, found {len(rows) - 1}")
    a = np.zeros((n, n), dtype=np.uint8)
    for row in rows[1:]:
        if len(row) != 2:
            raise ValueError(f"{path}: malformed edge line {' '.join(row)!r}")
        try:
            i, j = int(row[0]), int(row[1])
        except ValueError as exc:
            raise ValueError(f"{path}: non-integer edge line {' '.join(row)!r}") from exc
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"{path}: edge ({i},{j}) out of range for n={n}")
        if i == j:
            raise ValueError(f"{path}: self-loop at vertex {i}")
        a[i, j] = 1
        a[j, i] = 1
    return SampleGraph(adjacency=a)


def write_latents(latents: LatentPoints, path) -> Path:
    path = Path(path)
    path.write_text("[" + ", ".join(repr(float(x)) for x in latents.xs) + "]\n")
    return path


def read_latents(path) -> LatentPoints:
    with open(path) as fh:
        return LatentPoints(np.asarray(json.load(fh), dtype=float))
