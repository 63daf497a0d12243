"""Graph convolutional forward pass, activations, norm budgets, embeddings.

The layer recurrence is M <- sigma(Ahat @ M @ W) with Ahat the random-walk
matrix; the embedding vector is the column mean of the final layer. Budgets
constrain ||M0^T||_op,inf * prod_j ||W_j^T||_op,inf <= C and
sum_j ||W_j^T||_op,inf <= E, where the op-inf norm is the max absolute row sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sampling import rng_stream

NICE_KINDS = ("tanh", "swish", "selu")
KINDS = ("identity", "relu") + NICE_KINDS

# output scale that puts each kind's derivative at 0 equal to 1
_DEFAULT_SCALE = {"identity": 1.0, "relu": 1.0, "tanh": 1.0, "swish": 2.0, "selu": 1.0}


class NormBudgetError(ValueError):
    """Weight norms exceed the configured (C, E) budget."""


class PerturbationError(ValueError):
    """An embedding vector was perturbed twice."""


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _base_apply(kind: str, x: np.ndarray) -> np.ndarray:
    if kind == "identity":
        return x
    if kind == "relu":
        return np.maximum(x, 0.0)
    if kind == "tanh":
        return np.tanh(x)
    if kind == "swish":
        return x * _sigmoid(x)
    if kind == "selu":
        return np.where(x <= 0.0, np.expm1(x), x)
    raise ValueError(f"unknown activation kind {kind!r}")


@dataclass(frozen=True)
class Activation:
    """Elementwise activation sigma(x) = scale * base(x).

    The default scale normalizes each kind to sigma'(0) = 1 (scale 2 for
    swish, whose raw slope at 0 is 1/2; 1 for the others). Pass scale=1.0 to
    get the raw swish of the relaxed activation class.
    """

    kind: str
    scale: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown activation kind {self.kind!r}; choose from {KINDS}")
        scale = _DEFAULT_SCALE[self.kind] if self.scale is None else float(self.scale)
        if not scale > 0:
            raise ValueError("activation scale must be positive")
        object.__setattr__(self, "scale", scale)

    @property
    def in_nice_class(self) -> bool:
        """True for the smooth kinds with sigma(0)=0 (tanh, swish, selu)."""
        return self.kind in NICE_KINDS

    @property
    def is_identity_on_nonneg(self) -> bool:
        """True when sigma(x) = x for all x >= 0 (identity and relu, scale 1)."""
        return self.kind in ("identity", "relu") and self.scale == 1.0

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = _base_apply(self.kind, x)
        return y if self.scale == 1.0 else self.scale * y


def op_inf_norm(m: np.ndarray) -> float:
    """Operator norm induced by the sup norm: max absolute row sum."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("op_inf_norm expects a matrix")
    return float(np.abs(m).sum(axis=1).max())


@dataclass(frozen=True)
class GcnSpec:
    """K-layer GCN: initial embedding, per-layer weights, activation, budget.

    initial=None means the n x n identity (d = n); weights=None means K
    identity weight matrices. budget = (C, E) bounds the norm product and sum.
    """

    layers: int
    activation: Activation
    budget: tuple[float, float]
    initial: np.ndarray | None = None
    weights: tuple[np.ndarray, ...] | None = None
    dim: int | None = None

    def __post_init__(self):
        if self.layers < 0:
            raise ValueError("layer count must be nonnegative")
        c, e = (float(b) for b in self.budget)
        if c <= 0 or e < 0:
            raise ValueError(f"budget must satisfy C > 0 and E >= 0, got {(c, e)}")
        object.__setattr__(self, "budget", (c, e))
        if self.initial is not None:
            m0 = np.array(self.initial, dtype=float)
            if m0.ndim != 2:
                raise ValueError("initial embedding must be a matrix")
            m0.setflags(write=False)
            object.__setattr__(self, "initial", m0)
        if self.weights is not None:
            ws = tuple(np.array(w, dtype=float) for w in self.weights)
            if len(ws) != self.layers:
                raise ValueError(f"expected {self.layers} weight matrices, got {len(ws)}")
            if self.initial is not None:
                d = self.initial.shape[1]
            elif self.dim is not None:
                d = self.dim
            else:
                d = ws[0].shape[0] if ws[0].ndim == 2 else -1
            for w in ws:
                if w.ndim != 2 or w.shape != (d, d):
                    raise ValueError(f"weights must be square {d}x{d} matrices")
                w.setflags(write=False)
            object.__setattr__(self, "weights", ws)

    @property
    def feature_dim(self) -> int | None:
        """Feature dimension d; None while both initial and dim are implicit."""
        if self.initial is not None:
            return self.initial.shape[1]
        if self.weights is not None:
            return self.weights[0].shape[0]
        return self.dim


def check_norm_budget(spec: GcnSpec) -> dict:
    """Evaluate the (C, E) budget; identity placeholders have norm exactly 1."""
    init_norm = 1.0 if spec.initial is None else op_inf_norm(spec.initial.T)
    if spec.weights is None:
        w_norms = [1.0] * spec.layers
    else:
        w_norms = [op_inf_norm(w.T) for w in spec.weights]
    product = init_norm * float(np.prod(w_norms)) if spec.layers else init_norm
    total = float(np.sum(w_norms))
    c, e = spec.budget
    return {
        "product": product,
        "sum": total,
        "C": c,
        "E": e,
        "ok": bool(product <= c and total <= e),
    }


def _check_walk_matrix(ahat: np.ndarray) -> np.ndarray:
    ahat = np.asarray(ahat, dtype=float)
    if ahat.ndim != 2 or ahat.shape[0] != ahat.shape[1]:
        raise ValueError("walk matrix must be square")
    if not np.allclose(ahat.sum(axis=1), 1.0, atol=1e-8):
        raise ValueError("walk matrix rows must each sum to 1")
    return ahat


def _require_budget(spec: GcnSpec):
    report = check_norm_budget(spec)
    if not report["ok"]:
        raise NormBudgetError(
            "norm budget violated: product {product!r} vs C={C!r}, "
            "sum {sum!r} vs E={E!r}".format(**report)
        )


def gcn_forward(ahat: np.ndarray, spec: GcnSpec) -> np.ndarray:
    """Final-layer embedding matrix M^(K); budget is checked before any work."""
    ahat = _check_walk_matrix(ahat)
    _require_budget(spec)
    n = ahat.shape[0]
    if spec.dim is not None and spec.dim != n:
        raise ValueError(f"spec expects n={spec.dim}, walk matrix has n={n}")
    m = np.eye(n) if spec.initial is None else spec.initial
    if m.shape[0] != n:
        raise ValueError(f"initial embedding has {m.shape[0]} rows, graph has {n}")
    act = spec.activation
    for layer in range(spec.layers):
        if spec.weights is not None:
            m = m @ spec.weights[layer]
        m = act.apply(ahat @ m)
    return m


@dataclass(frozen=True)
class EmbeddingVector:
    """Column mean of an embedding matrix, with perturbation bookkeeping."""

    values: np.ndarray
    perturbed: bool = False
    eps_res: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("embedding values must be a nonempty vector")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def d(self) -> int:
        return self.values.size


def embedding_vector(m: np.ndarray) -> EmbeddingVector:
    """(1/n) 1^T M as an unperturbed embedding vector."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("expected an embedding matrix")
    return EmbeddingVector(values=m.mean(axis=0))


def gcn_embedding(ahat: np.ndarray, spec: GcnSpec) -> EmbeddingVector:
    """Embedding vector of the forward pass.

    For the identity-weight, identity-initial spec with an activation that is
    the identity on nonnegatives (identity, relu), every layer output equals
    Ahat^k, so the column mean is computed by iterated vector-matrix products
    instead of materializing K matrix powers. Other specs run the full pass.
    """
    if spec.initial is None and spec.weights is None and spec.activation.is_identity_on_nonneg:
        ahat = _check_walk_matrix(ahat)
        _require_budget(spec)
        n = ahat.shape[0]
        if spec.dim is not None and spec.dim != n:
            raise ValueError(f"spec expects n={spec.dim}, walk matrix has n={n}")
        v = np.full(n, 1.0 / n)
        for _ in range(spec.layers):
            v = v @ ahat
        return EmbeddingVector(values=v)
    return embedding_vector(gcn_forward(ahat, spec))


def perturb(h: EmbeddingVector, eps_res: float, seed) -> EmbeddingVector:
    """Add i.i.d. Uniform[-eps_res, eps_res] noise once; re-perturbing errors."""
    if h.perturbed:
        raise PerturbationError("embedding vector is already perturbed")
    if eps_res < 0:
        raise ValueError("eps_res must be nonnegative")
    noise = rng_stream(seed).uniform(-eps_res, eps_res, size=h.d)
    return EmbeddingVector(values=h.values + noise, perturbed=True, eps_res=float(eps_res))


def walk_profile_gcn_spec(n: int, layers: int) -> GcnSpec:
    """Identity init, identity weights, relu, budget (1, K): the pipeline whose
    embedding is the K-step walk occupancy profile."""
    if n < 2:
        raise ValueError("need n >= 2")
    if layers < 1:
        raise ValueError("need at least one layer")
    return GcnSpec(
        layers=layers,
        activation=Activation("relu"),
        budget=(1.0, float(layers)),
        dim=n,
    )


# ---------------------------------------------------------------------------
# serialization

def gcn_spec_to_dict(spec: GcnSpec) -> dict:
    act = {"kind": spec.activation.kind, "scale": spec.activation.scale}
    return {
        "K": spec.layers,
        "activation": act,
        "initial": "identity" if spec.initial is None else np.asarray(spec.initial).tolist(),
        "weights": "identity" if spec.weights is None else [w.tolist() for w in spec.weights],
        "C": spec.budget[0],
        "E": spec.budget[1],
    }


def gcn_spec_from_dict(doc: dict) -> GcnSpec:
    """Parse {"K", "activation", "weights", "initial", "C", "E"}.

    "activation" is a kind string or {"kind", "scale"}; "weights" is
    "identity", one d x d matrix shared across layers, or a list of K
    matrices; "initial" is "identity" or an n x d matrix.
    """
    if not isinstance(doc, dict):
        raise ValueError("gcn spec document must be an object")
    missing = [k for k in ("K", "activation", "C", "E") if k not in doc]
    if missing:
        raise ValueError(f"gcn spec missing keys: {', '.join(missing)}")
    layers = int(doc["K"])
    act_doc = doc["activation"]
    if isinstance(act_doc, str):
        activation = Activation(act_doc)
    elif isinstance(act_doc, dict):
        activation = Activation(act_doc["kind"], act_doc.get("scale"))
    else:
        raise ValueError("activation must be a kind string or an object")
    initial = doc.get("initial", "identity")
    initial = None if initial == "identity" else np.asarray(initial, dtype=float)
    weights = doc.get("weights", "identity")
    if isinstance(weights, str):
        if weights != "identity":
            raise ValueError(f"unknown weights shorthand {weights!r}")
        weights = None
    else:
        arr = np.asarray(weights, dtype=float)
        if arr.ndim == 2:
            weights = tuple(arr for _ in range(layers))
        elif arr.ndim == 3:
            weights = tuple(arr)
        else:
            raise ValueError("weights must be a matrix or a list of matrices")
    return GcnSpec(
        layers=layers,
        activation=activation,
        budget=(float(doc["C"]), float(doc["E"])),
        initial=initial,
        weights=weights,
    )
