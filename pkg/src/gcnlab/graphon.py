"""Step graphons, block-model parameters, degree profiles, and profile separation.

A step graphon is a symmetric piecewise-constant kernel W: [0,1]^2 -> [l, 1]
with a strictly positive floor l. Degree profiles are the sorted, mass-weighted
level sets of the normalized degree function d_W(x) / D(W); the separation
between two graphons is the L1 distance between the monotone rearrangements of
their profiles, which is the infimum over measure-preserving alignments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# levels closer than this merge into one profile block
MERGE_TOL = 1e-12
MASS_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StepGraphon:
    """Piecewise-constant symmetric kernel with block masses summing to 1."""

    block_masses: np.ndarray
    values: np.ndarray
    lower_bound: float | None = None

    def __post_init__(self):
        masses = np.asarray(self.block_masses, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if masses.ndim != 1 or masses.size == 0:
            raise ValueError("block_masses must be a nonempty 1-D vector")
        if np.any(masses <= 0):
            raise ValueError("block masses must be strictly positive")
        if abs(float(masses.sum()) - 1.0) > MASS_TOL:
            raise ValueError(f"block masses must sum to 1, got {masses.sum()!r}")
        k = masses.size
        if vals.shape != (k, k):
            raise ValueError(f"values must be {k}x{k}, got {vals.shape}")
        if not np.array_equal(vals, vals.T):
            raise ValueError("values must be symmetric")
        lb = float(np.min(vals)) if self.lower_bound is None else float(self.lower_bound)
        if not lb > 0.0:
            raise ValueError(f"lower bound must be positive, got {lb!r}")
        if np.any(vals < lb) or np.any(vals > 1.0):
            raise ValueError(f"kernel values must lie in [{lb!r}, 1]")
        object.__setattr__(self, "block_masses", _readonly(masses))
        object.__setattr__(self, "values", _readonly(vals))
        object.__setattr__(self, "lower_bound", lb)

    @property
    def num_blocks(self) -> int:
        return self.block_masses.size

    def block_boundaries(self) -> np.ndarray:
        """Cumulative right endpoints of the block intervals; last is ~1."""
        return np.cumsum(self.block_masses)

    def blocks_of(self, xs) -> np.ndarray:
        """Block index of each point of [0,1]; intervals are right-open."""
        xs = np.asarray(xs, dtype=float)
        if xs.size and (xs.min() < 0.0 or xs.max() > 1.0):
            raise ValueError("points must lie in [0,1]")
        idx = np.searchsorted(self.block_boundaries(), xs, side="right")
        return np.minimum(idx, self.num_blocks - 1)

    def evaluate(self, x, y) -> np.ndarray:
        """W(x, y), elementwise over broadcastable inputs."""
        return self.values[self.blocks_of(x), self.blocks_of(y)]


@dataclass(frozen=True)
class SbmParams:
    """Two-block stochastic block model: masses (k1, 1-k1), kernel [[p1,q],[q,p2]]."""

    k1: float
    p1: float
    p2: float
    q: float

    def __post_init__(self):
        if not 0.0 < self.k1 < 1.0:
            raise ValueError(f"k1 must lie in (0,1), got {self.k1!r}")
        for name in ("p1", "p2", "q"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0,1], got {v!r}")

    @property
    def k2(self) -> float:
        return 1.0 - self.k1


@dataclass(frozen=True)
class FamilyPoint:
    """Member of the equal-expected-degree SBM family through a base point.

    The member at offset tau has parameters
    (p1, p2, q) = (p1*, p2*, q*) + tau * (1/k1, k1/k2^2, -1/k2),
    which leaves both per-block expected degrees unchanged for every tau.
    """

    base: SbmParams
    tau: float

    @property
    def k1(self) -> float:
        return self.base.k1

    def member_params(self) -> tuple[float, float, float]:
        k1, k2 = self.base.k1, self.base.k2
        return (
            self.base.p1 + self.tau / k1,
            self.base.p2 + self.tau * k1 / (k2 * k2),
            self.base.q - self.tau / k2,
        )


def sbm_to_graphon(params: SbmParams) -> StepGraphon:
    """Two-block step graphon with floor min(p1, p2, q)."""
    return StepGraphon(
        block_masses=[params.k1, 1.0 - params.k1],
        values=[[params.p1, params.q], [params.q, params.p2]],
        lower_bound=min(params.p1, params.p2, params.q),
    )


def family_point_to_sbm(point: FamilyPoint) -> SbmParams:
    """Materialize a family member; errors when it leaves (0,1]^3 componentwise."""
    p1, p2, q = point.member_params()
    for name, v in (("p1", p1), ("p2", p2), ("q", q)):
        if not 0.0 < v <= 1.0:
            raise ValueError(
                f"family member at tau={point.tau!r} leaves the valid box: {name}={v!r}"
            )
    return SbmParams(k1=point.base.k1, p1=p1, p2=p2, q=q)


def degree_function(w: StepGraphon) -> np.ndarray:
    """Per-block degree d_a = sum_b masses[b] * values[a][b]."""
    return w.values @ w.block_masses


def total_degree(w: StepGraphon) -> float:
    """D(W) = sum_a masses[a] * d_a; positive since the kernel has a floor."""
    return float(w.block_masses @ degree_function(w))


@dataclass(frozen=True)
class DegreeProfile:
    """Normalized degree levels sorted ascending with their masses.

    Adjacent levels closer than MERGE_TOL are merged; masses sum to 1 and
    sum(masses * levels) = 1 by construction.
    """

    masses: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=float)
        levels = np.asarray(self.levels, dtype=float)
        if masses.shape != levels.shape or masses.ndim != 1 or masses.size == 0:
            raise ValueError("masses and levels must be matching nonempty vectors")
        if np.any(masses <= 0) or abs(float(masses.sum()) - 1.0) > 1e-9:
            raise ValueError("profile masses must be positive and sum to 1")
        if np.any(np.diff(levels) <= MERGE_TOL) and levels.size > 1:
            raise ValueError("profile levels must be ascending and merged")
        object.__setattr__(self, "masses", _readonly(masses))
        object.__setattr__(self, "levels", _readonly(levels))

    def quantiles(self, n: int) -> np.ndarray:
        """Levels at n equal-mass quantile midpoints (i + 1/2)/n, ascending."""
        if n < 1:
            raise ValueError("n must be positive")
        pos = (np.arange(n) + 0.5) / n
        idx = np.minimum(np.searchsorted(np.cumsum(self.masses), pos, side="left"),
                         self.masses.size - 1)
        return self.levels[idx]


def normalized_degree_profile(w: StepGraphon) -> DegreeProfile:
    """Sorted level sets of d_W(x) / D(W); integrates to 1 against the masses."""
    d = degree_function(w)
    levels = d / total_degree(w)
    order = np.argsort(levels, kind="stable")
    lv, ms = levels[order], w.block_masses[order]
    out_levels: list[float] = []
    out_masses: list[float] = []
    for level, mass in zip(lv, ms):
        if out_levels and level - out_levels[-1] <= MERGE_TOL:
            out_masses[-1] += mass
        else:
            out_levels.append(float(level))
            out_masses.append(float(mass))
    return DegreeProfile(masses=out_masses, levels=out_levels)


def profile_l1(p0: DegreeProfile, p1: DegreeProfile) -> float:
    """L1 distance between two sorted step profiles over the shared mass axis."""
    cum0 = np.cumsum(p0.masses)
    cum1 = np.cumsum(p1.masses)
    cuts = np.union1d(cum0, cum1)
    prev = 0.0
    total = 0.0
    for c in cuts:
        width = c - prev
        if width > 0.0:
            mid = 0.5 * (prev + c)
            l0 = p0.levels[min(np.searchsorted(cum0, mid, side="left"), p0.levels.size - 1)]
            l1 = p1.levels[min(np.searchsorted(cum1, mid, side="left"), p1.levels.size - 1)]
            total += width * abs(l0 - l1)
        prev = c
    return float(total)


def delta_separation(w0: StepGraphon, w1: StepGraphon) -> float:
    """Minimum L1 distance between aligned normalized degree profiles.

    The infimum over measure-preserving bijections is attained by the monotone
    rearrangement of both profiles, so this reduces to an L1 distance between
    the sorted profiles over a common mass refinement.
    """
    return profile_l1(normalized_degree_profile(w0), normalized_degree_profile(w1))


# ---------------------------------------------------------------------------
# serialization

def graphon_to_dict(w: StepGraphon) -> dict:
    return {
        "block_masses": [float(m) for m in w.block_masses],
        "values": [[float(v) for v in row] for row in w.values],
        "lower_bound": float(w.lower_bound),
    }


def graphon_from_dict(doc: dict) -> StepGraphon:
    """Parse a graphon document; accepts explicit, "sbm", and "family" forms."""
    if not isinstance(doc, dict):
        raise ValueError(f"graphon document must be an object, got {type(doc).__name__}")
    if "sbm" in doc:
        return sbm_to_graphon(_sbm_from_dict(doc["sbm"]))
    if "family" in doc:
        f = doc["family"]
        _require_keys(f, ("k1", "p1", "p2", "q", "tau"), "family")
        base = SbmParams(k1=float(f["k1"]), p1=float(f["p1"]),
                         p2=float(f["p2"]), q=float(f["q"]))
        return sbm_to_graphon(family_point_to_sbm(FamilyPoint(base, float(f["tau"]))))
    _require_keys(doc, ("block_masses", "values", "lower_bound"), "graphon")
    return StepGraphon(
        block_masses=doc["block_masses"],
        values=doc["values"],
        lower_bound=float(doc["lower_bound"]),
    )


def _sbm_from_dict(doc: dict) -> SbmParams:
    _require_keys(doc, ("k1", "p1", "p2", "q"), "sbm")
    if "tau" in doc:
        # silently dropping tau would hand back the base point
        raise ValueError('sbm document does not take "tau"; use the family form')
    return SbmParams(k1=float(doc["k1"]), p1=float(doc["p1"]),
                     p2=float(doc["p2"]), q=float(doc["q"]))


def _require_keys(doc, keys, what: str):
    if not isinstance(doc, dict):
        raise ValueError(f"{what} document must be an object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise ValueError(f"{what} document missing keys: {', '.join(missing)}")


def load_graphon(path) -> StepGraphon:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return graphon_from_dict(doc)


def dump_graphon(w: StepGraphon, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(graphon_to_dict(w), indent=2) + "\n")
    return path
