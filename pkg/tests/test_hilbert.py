"""Metric-space core: weighted metric, shifts, clouds, Hausdorff distance."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tranchelab import (
    Cloud,
    ConstructionError,
    DomainError,
    dist_to_cloud,
    hausdorff,
    prepend_cloud,
    shift_cloud,
    weights,
)


def ref_metric(x, y):
    # independent re-statement of the metric: sum_k 2^-(k+1) |x_k - y_k|
    return sum(abs(a - b) / 2.0 ** (k + 1) for k, (a, b) in enumerate(zip(x, y)))


def ref_hausdorff(A, B):
    # brute-force oracle written without the library's distance kernel
    d = np.zeros((len(A), len(B)))
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            d[i, j] = ref_metric(a, b)
    return max(d.min(axis=1).max(), d.min(axis=0).max())


# ---------------------------------------------------------------------------
# weights and the metric


def test_weights_are_geometric():
    w = weights(6)
    assert np.allclose(w, [2.0 ** -(k + 1) for k in range(6)], rtol=0, atol=0)


def test_metric_diameter_bound():
    # the space has diameter < 1: sum of weights = 1 - 2^-D
    D = 12
    x, y = np.zeros(D), np.ones(D)
    assert ref_metric(x, y) == 1.0 - 2.0**-D


@given(
    arrays(np.float64, (7,), elements=st.floats(0, 1)),
    arrays(np.float64, (7,), elements=st.floats(0, 1)),
)
def test_right_shift_halves_distance(x, y):
    tx = np.concatenate([[0.0], x])
    ty = np.concatenate([[0.0], y])
    assert ref_metric(tx, ty) == pytest.approx(ref_metric(x, y) / 2.0, abs=1e-15)


# ---------------------------------------------------------------------------
# Cloud construction and serialization


def test_cloud_rejects_out_of_range():
    with pytest.raises(DomainError):
        Cloud(np.array([[0.5, 1.5]]), 0.01)


def test_cloud_rejects_empty_and_bad_mesh():
    with pytest.raises(ConstructionError):
        Cloud(np.zeros((0, 3)), 0.01)
    with pytest.raises(ConstructionError):
        Cloud(np.zeros((2, 3)), 0.0)


def test_cloud_rejects_misaligned_aux():
    with pytest.raises(ConstructionError):
        Cloud(np.zeros((3, 2)), 0.1, aux={"q": np.zeros(2)})


def test_cloud_json_round_trip_bit_exact(rng):
    pts = rng.random((50, 5))
    c = Cloud(pts, 1e-3, "demo", {"q": rng.random(50), "tag": np.ones(50)})
    back = Cloud.from_json(c.to_json())
    assert np.array_equal(back.points, c.points)
    assert back.mesh == c.mesh and back.label == c.label
    assert np.array_equal(back.aux["q"], c.aux["q"])
    # serialized form is deterministic
    assert back.to_json() == c.to_json()


def test_cloud_csv_columns(tmp_path, rng):
    c = Cloud(rng.random((10, 4)), 1e-2, aux={"tag": np.ones(10)})
    p = tmp_path / "c.csv"
    c.to_csv(p, columns=2)
    header = p.read_text().splitlines()[0]
    assert header == "x0,x1,tag"


def test_pad_and_truncate():
    c = Cloud(np.array([[0.25, 0.5]]), 0.1)
    up = c.pad(4)
    assert up.dim == 4 and np.all(up.points[:, 2:] == 0.0)
    assert np.array_equal(up.pad(2).points, c.points)
    with pytest.raises(DomainError):
        up2 = Cloud(np.array([[0.25, 0.5, 0.1]]), 0.1)
        up2.pad(2)


# ---------------------------------------------------------------------------
# shifts


def test_shift_round_trip(rng):
    c = Cloud(rng.random((20, 6)), 1e-2)
    t = shift_cloud(c, "right")
    assert t.dim == 7 and np.all(t.points[:, 0] == 0.0)
    back = shift_cloud(t, "left")
    assert np.array_equal(back.points, c.points)


def test_prepend_cloud_value():
    c = Cloud(np.array([[0.5]]), 0.1)
    p = prepend_cloud(c, 0.25)
    assert np.array_equal(p.points, [[0.25, 0.5]])


# ---------------------------------------------------------------------------
# Hausdorff distance


def test_hausdorff_known_segments():
    # independently derived: two parallel one-coordinate segments at offset h in
    # coordinate 1: d_H = h * 2^-2
    t = np.linspace(0, 1, 101)
    A = Cloud(np.column_stack([t, np.zeros_like(t)]), 1e-2)
    B = Cloud(np.column_stack([t, np.full_like(t, 0.6)]), 1e-2)
    assert hausdorff(A, B) == pytest.approx(0.6 * 0.25, abs=1e-15)


def test_hausdorff_asymmetric_sets():
    # subset relation: d_H = sup over the larger set
    A = Cloud(np.array([[0.0, 0.0], [1.0, 0.0]]), 0.1)
    B = Cloud(np.array([[0.0, 0.0]]), 0.1)
    assert hausdorff(A, B) == pytest.approx(0.5, abs=1e-15)


def test_hausdorff_zero_on_equal(rng):
    pts = rng.random((200, 8))
    A = Cloud(pts, 1e-3)
    assert hausdorff(A, A) == 0.0
    assert hausdorff(A, A, "brute") == 0.0


def test_fast_matches_independent_oracle(rng):
    for _ in range(10):
        A = Cloud(rng.random((40, 4)), 1e-3)
        B = Cloud(rng.random((30, 4)), 1e-3)
        ref = ref_hausdorff(A.points, B.points)
        assert hausdorff(A, B, "fast") == pytest.approx(ref, abs=1e-14)
        assert hausdorff(A, B, "brute") == pytest.approx(ref, abs=1e-14)


@settings(deadline=None, max_examples=30)
@given(st.integers(2, 60), st.integers(2, 60), st.integers(1, 6), st.integers(0, 2**31))
def test_fast_equals_brute_property(na, nb, dim, seed):
    rng = np.random.default_rng(seed)
    A = Cloud(rng.random((na, dim)), 1e-3)
    B = Cloud(rng.random((nb, dim)), 1e-3)
    assert hausdorff(A, B, "fast") == hausdorff(A, B, "brute")


def test_hausdorff_triangle_inequality(rng):
    clouds = [Cloud(rng.random((30, 5)), 1e-3) for _ in range(3)]
    d01 = hausdorff(clouds[0], clouds[1])
    d12 = hausdorff(clouds[1], clouds[2])
    d02 = hausdorff(clouds[0], clouds[2])
    assert d02 <= d01 + d12 + 1e-15


def test_dist_to_cloud_single_point():
    c = Cloud(np.array([[0.0, 0.0], [1.0, 1.0]]), 0.1)
    assert dist_to_cloud(np.array([0.0, 0.5]), c) == pytest.approx(0.125, abs=1e-15)
