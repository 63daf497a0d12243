import numpy as np
import pytest
from hypothesis import given, strategies as st

from gcnlab.gcn import (
    Activation,
    EmbeddingVector,
    GcnSpec,
    NormBudgetError,
    PerturbationError,
    check_norm_budget,
    embedding_vector,
    gcn_embedding,
    gcn_forward,
    gcn_spec_from_dict,
    gcn_spec_to_dict,
    op_inf_norm,
    perturb,
    walk_profile_gcn_spec,
)
from gcnlab.sampling import random_walk_matrix, rng_stream
from oracles import op_inf_by_signs, power_forward, random_adjacency

NICE = [Activation("tanh"), Activation("swish"), Activation("selu")]


def _walk(n, seed, p=0.5):
    rng = rng_stream(seed)
    a = random_adjacency(rng, n, p)
    while (a.sum(axis=1) == 0).any():
        a = random_adjacency(rng, n, p)
    return a / a.sum(axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# activations

@pytest.mark.parametrize("act", NICE, ids=lambda a: a.kind)
def test_nice_activations_vanish_at_zero(act):
    assert float(act.apply(0.0)) == 0.0


@pytest.mark.parametrize("act", NICE, ids=lambda a: a.kind)
def test_nice_activations_have_unit_slope_at_zero(act):
    h = 1e-6
    fd = float(act.apply(h) - act.apply(-h)) / (2 * h)
    assert abs(fd - 1.0) < 1e-6


def test_selu_difference_quotient_matches_series():
    # (h - expm1(-h)) / 2h = 1 - h/4 + h^2/12 + O(h^3); exact at h = 1e-5
    h = 1e-5
    fd = float(Activation("selu").apply(h) - Activation("selu").apply(-h)) / (2 * h)
    assert fd == pytest.approx(1 - h / 4 + h * h / 12, abs=1e-13)


def test_raw_swish_has_half_slope_at_zero():
    h = 1e-6
    raw = Activation("swish", scale=1.0)
    fd = float(raw.apply(h) - raw.apply(-h)) / (2 * h)
    assert fd == pytest.approx(0.5, abs=1e-9)
    assert Activation("swish").scale == 2.0  # default rescales to slope 1


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_tanh_and_selu_are_nonexpansive(x, y):
    for act in (Activation("tanh"), Activation("selu")):
        gap = abs(float(act.apply(x)) - float(act.apply(y)))
        assert gap <= abs(x - y) * (1 + 1e-12) + 1e-12


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_swish_lipschitz_constants(x, y):
    # raw swish slope peaks near 1.0998, the rescaled one near 2.1997
    raw = abs(float(Activation("swish", 1.0).apply(x)) - float(Activation("swish", 1.0).apply(y)))
    assert raw <= 1.1 * abs(x - y) + 1e-12
    std = abs(float(Activation("swish").apply(x)) - float(Activation("swish").apply(y)))
    assert std <= 2.2 * abs(x - y) + 1e-12


def test_activation_flags_and_validation():
    assert Activation("tanh").in_nice_class
    assert not Activation("relu").in_nice_class
    assert Activation("relu").is_identity_on_nonneg
    assert Activation("identity").is_identity_on_nonneg
    assert not Activation("relu", scale=2.0).is_identity_on_nonneg
    assert not Activation("swish").is_identity_on_nonneg
    with pytest.raises(ValueError, match="unknown activation kind"):
        Activation("sigmoid")
    with pytest.raises(ValueError, match="scale must be positive"):
        Activation("tanh", scale=0.0)


def test_relu_clips_negatives_and_identity_does_not():
    x = np.array([-2.0, 0.0, 3.0])
    assert Activation("relu").apply(x).tolist() == [0.0, 0.0, 3.0]
    assert Activation("identity").apply(x).tolist() == [-2.0, 0.0, 3.0]


# ---------------------------------------------------------------------------
# operator norm and budget

def test_op_inf_norm_worked_examples():
    assert op_inf_norm([[1.0, -2.0], [3.0, 4.0]]) == 7.0
    assert op_inf_norm(np.eye(5)) == 1.0
    assert op_inf_norm(np.zeros((2, 2))) == 0.0
    with pytest.raises(ValueError, match="matrix"):
        op_inf_norm([1.0, 2.0])


def test_op_inf_norm_matches_variational_oracle():
    rng = rng_stream(21)
    for _ in range(10):
        m = rng.normal(size=(6, 6))
        assert op_inf_norm(m) == pytest.approx(op_inf_by_signs(m), abs=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_op_inf_norm_is_submultiplicative(seed):
    rng = rng_stream(seed)
    a = rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4))
    assert op_inf_norm(a @ b) <= op_inf_norm(a) * op_inf_norm(b) * (1 + 1e-12)


def test_norm_budget_identity_weights():
    report = check_norm_budget(walk_profile_gcn_spec(n=10, layers=4))
    assert report == {"product": 1.0, "sum": 4.0, "C": 1.0, "E": 4.0, "ok": True}


def test_norm_budget_contracting_weights():
    half = 0.5 * np.eye(2)
    spec = GcnSpec(layers=3, activation=Activation("tanh"), budget=(1.0, 2.0),
                   weights=(half, half, half))
    report = check_norm_budget(spec)
    assert report["product"] == pytest.approx(0.125)
    assert report["sum"] == pytest.approx(1.5)
    assert report["ok"]


def test_norm_budget_uses_transposed_weights():
    # ||W^T|| = 1.0 but ||W|| = 1.5: the budget must see the transpose
    w = np.array([[1.0, 0.5], [0.0, 0.25]])
    spec = GcnSpec(layers=1, activation=Activation("identity"), budget=(1.25, 2.0),
                   weights=(w,))
    report = check_norm_budget(spec)
    assert report["product"] == 1.0
    assert report["ok"]


def test_budget_violation_blocks_forward():
    spec = GcnSpec(layers=1, activation=Activation("identity"), budget=(1.0, 10.0),
                   weights=(3.0 * np.eye(2),))
    assert not check_norm_budget(spec)["ok"]
    ahat = _walk(2, seed=0, p=1.0)
    with pytest.raises(NormBudgetError, match="norm budget violated"):
        gcn_forward(ahat, spec)
    with pytest.raises(NormBudgetError):
        gcn_embedding(ahat, spec)
    tight = GcnSpec(layers=2, activation=Activation("relu"), budget=(1.0, 1.5), dim=2)
    with pytest.raises(NormBudgetError):  # sum of identity norms is 2 > 1.5
        gcn_embedding(ahat, tight)


# ---------------------------------------------------------------------------
# forward pass

def test_identity_pipeline_equals_matrix_power():
    ahat = _walk(30, seed=1)
    spec = GcnSpec(layers=5, activation=Activation("identity"), budget=(1.0, 5.0))
    out = gcn_forward(ahat, spec)
    assert np.max(np.abs(out - power_forward(ahat, 5))) < 1e-12


def test_relu_equals_identity_on_walk_matrices():
    # walk-matrix entries stay nonnegative, so relu must change nothing
    for seed in range(5):
        ahat = _walk(12, seed=seed)
        spec_r = GcnSpec(layers=4, activation=Activation("relu"), budget=(1.0, 4.0))
        spec_i = GcnSpec(layers=4, activation=Activation("identity"), budget=(1.0, 4.0))
        assert np.array_equal(gcn_forward(ahat, spec_r), gcn_forward(ahat, spec_i))


def test_forward_triangle_one_layer():
    ahat = (np.ones((3, 3)) - np.eye(3)) / 2
    spec = GcnSpec(layers=1, activation=Activation("identity"), budget=(1.0, 1.0))
    assert np.array_equal(gcn_forward(ahat, spec), ahat)
    h = gcn_embedding(ahat, spec)
    assert h.values == pytest.approx([1 / 3, 1 / 3, 1 / 3])


def test_forward_applies_weights_then_activation():
    ahat = np.eye(2)  # fixed graph: layer reduces to sigma(M W)
    w = np.array([[0.0, 1.0], [1.0, 0.0]])
    spec = GcnSpec(layers=1, activation=Activation("tanh"), budget=(2.5, 1.0),
                   initial=np.array([[2.0, -1.0], [0.5, 0.0]]), weights=(w,))
    out = gcn_forward(np.eye(2), spec)
    assert out == pytest.approx(np.tanh([[-1.0, 2.0], [0.0, 0.5]]))


def test_forward_validates_shapes():
    spec = GcnSpec(layers=1, activation=Activation("identity"), budget=(1.0, 1.0), dim=3)
    with pytest.raises(ValueError, match="spec expects n=3"):
        gcn_forward(_walk(4, seed=2, p=1.0), spec)
    with pytest.raises(ValueError, match="rows must each sum to 1"):
        gcn_forward(np.ones((3, 3)), walk_profile_gcn_spec(3, 1))
    with pytest.raises(ValueError, match="square"):
        gcn_forward(np.ones((2, 3)) / 3, walk_profile_gcn_spec(2, 1))
    bad_init = GcnSpec(layers=1, activation=Activation("identity"), budget=(5.0, 1.0),
                       initial=np.ones((5, 2)))
    with pytest.raises(ValueError, match="initial embedding has 5 rows"):
        gcn_forward(_walk(4, seed=3, p=1.0), bad_init)


def test_zero_layer_forward_returns_initial():
    ahat = _walk(4, seed=4, p=1.0)
    spec = GcnSpec(layers=0, activation=Activation("tanh"), budget=(1.0, 0.0))
    assert np.array_equal(gcn_forward(ahat, spec), np.eye(4))


# ---------------------------------------------------------------------------
# embeddings

def test_embedding_vector_is_column_mean():
    h = embedding_vector(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert h.values.tolist() == [2.0, 3.0]
    assert h.d == 2 and not h.perturbed and h.eps_res == 0.0
    with pytest.raises(ValueError, match="matrix"):
        embedding_vector(np.ones(3))


def test_fast_embedding_path_matches_full_forward():
    ahat = _walk(40, seed=5)
    k = 6
    fast_spec = walk_profile_gcn_spec(40, k)
    full_spec = GcnSpec(layers=k, activation=Activation("relu"), budget=(1.0, float(k)),
                        weights=tuple(np.eye(40) for _ in range(k)))
    fast = gcn_embedding(ahat, fast_spec)
    full = gcn_embedding(ahat, full_spec)
    assert np.max(np.abs(fast.values - full.values)) < 1e-13
    assert fast.values.sum() == pytest.approx(1.0, abs=1e-12)  # stochastic row stays a distribution


def test_embedding_dim_guard_on_fast_path():
    with pytest.raises(ValueError, match="spec expects n=5"):
        gcn_embedding(_walk(4, seed=6, p=1.0), walk_profile_gcn_spec(5, 2))


# ---------------------------------------------------------------------------
# resolution perturbation

def test_perturb_adds_bounded_uniform_noise():
    h = EmbeddingVector(values=np.zeros(200_000))
    eps = 0.01
    hp = perturb(h, eps_res=eps, seed=17)
    assert hp.perturbed and hp.eps_res == eps and not h.perturbed
    addend = hp.values - h.values
    assert np.max(np.abs(addend)) <= eps
    # mean |U(-eps, eps)| = eps/2; sd of the mean ~ eps/(2 sqrt(3 d))
    assert abs(np.mean(np.abs(addend)) - eps / 2) < 0.01 * eps / 2


def test_perturb_is_deterministic_and_single_shot():
    h = EmbeddingVector(values=np.arange(5, dtype=float))
    a = perturb(h, 0.1, seed=3)
    b = perturb(h, 0.1, seed=3)
    assert np.array_equal(a.values, b.values)
    with pytest.raises(PerturbationError, match="already perturbed"):
        perturb(a, 0.1, seed=3)
    with pytest.raises(ValueError, match="nonnegative"):
        perturb(h, -0.1, seed=3)
    z = perturb(h, 0.0, seed=3)
    assert np.array_equal(z.values, h.values) and z.perturbed


# ---------------------------------------------------------------------------
# spec construction and serialization

def test_gcn_spec_validation():
    with pytest.raises(ValueError, match="nonnegative"):
        GcnSpec(layers=-1, activation=Activation("tanh"), budget=(1.0, 1.0))
    with pytest.raises(ValueError, match="C > 0"):
        GcnSpec(layers=1, activation=Activation("tanh"), budget=(0.0, 1.0))
    with pytest.raises(ValueError, match="expected 2 weight matrices"):
        GcnSpec(layers=2, activation=Activation("tanh"), budget=(1.0, 2.0),
                weights=(np.eye(2),))
    with pytest.raises(ValueError, match="square 3x3"):
        GcnSpec(layers=1, activation=Activation("tanh"), budget=(1.0, 1.0),
                dim=3, weights=(np.eye(2),))
    with pytest.raises(ValueError, match="must be a matrix"):
        GcnSpec(layers=0, activation=Activation("tanh"), budget=(1.0, 0.0),
                initial=np.ones(3))


def test_walk_profile_spec_fields():
    spec = walk_profile_gcn_spec(100, 7)
    assert spec.layers == 7
    assert spec.activation == Activation("relu")
    assert spec.budget == (1.0, 7.0)
    assert spec.dim == 100 and spec.initial is None and spec.weights is None
    assert spec.feature_dim == 100
    with pytest.raises(ValueError, match="n >= 2"):
        walk_profile_gcn_spec(1, 3)
    with pytest.raises(ValueError, match="at least one layer"):
        walk_profile_gcn_spec(10, 0)


def test_gcn_spec_dict_round_trip():
    w = np.array([[0.5, 0.1], [0.1, 0.5]])
    spec = GcnSpec(layers=2, activation=Activation("swish"), budget=(2.0, 3.0),
                   initial=np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
                   weights=(w, 2 * w))
    doc = gcn_spec_to_dict(spec)
    back = gcn_spec_from_dict(doc)
    assert back.layers == 2 and back.budget == (2.0, 3.0)
    assert back.activation == Activation("swish", 2.0)
    assert np.array_equal(back.initial, spec.initial)
    assert all(np.array_equal(a, b) for a, b in zip(back.weights, spec.weights))


def test_gcn_spec_from_dict_shorthands():
    spec = gcn_spec_from_dict({"K": 3, "activation": "tanh", "C": 1.0, "E": 3.0})
    assert spec.weights is None and spec.initial is None
    assert spec.activation == Activation("tanh", 1.0)
    shared = gcn_spec_from_dict({"K": 2, "activation": {"kind": "swish"},
                                 "weights": [[0.5, 0.0], [0.0, 0.5]],
                                 "C": 1.0, "E": 1.0})
    assert len(shared.weights) == 2
    assert np.array_equal(shared.weights[0], shared.weights[1])


@pytest.mark.parametrize("doc,msg", [
    ([1, 2], "must be an object"),
    ({"K": 1, "activation": "tanh"}, "missing keys: C, E"),
    ({"K": 1, "activation": 7, "C": 1, "E": 1}, "kind string or an object"),
    ({"K": 1, "activation": "tanh", "C": 1, "E": 1, "weights": "ones"},
     "unknown weights shorthand"),
    ({"K": 1, "activation": "tanh", "C": 1, "E": 1, "weights": [1.0, 2.0]},
     "matrix or a list of matrices"),
])
def test_gcn_spec_from_dict_rejects_malformed(doc, msg):
    with pytest.raises(ValueError, match=msg):
        gcn_spec_from_dict(doc)
