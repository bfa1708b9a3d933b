import math

import numpy as np
import pytest

from vmi2stro import GeometryError, EvaluatedPoint, PointHistory, RunningStats
from vmi2stro.geometry import (
    coordinate_stencil,
    orthonormal_complement,
    choose_design_set,
    rotated_design_set,
    interpolation_matrix,
    is_poised,
)


def _evaluated(x):
    return EvaluatedPoint(x, RunningStats.from_samples([1.0, 2.0]))


def test_stencil_d2():
    design = coordinate_stencil((0.0, 0.0), 1.0)
    expected = np.array([[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    assert np.array_equal(design.points, expected)
    assert design.is_stencil
    assert is_poised(design)


def test_stencil_d1():
    design = coordinate_stencil([5.0], 0.5)
    assert design.points.reshape(-1).tolist() == [5.0, 5.5, 4.5]


def test_stencil_matrix_is_nonsingular_for_rotated_basis():
    theta = 0.3
    basis = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    design = coordinate_stencil((1.0, 2.0), 0.25, basis)
    a = interpolation_matrix(design.points, design.center, design.radius, design.basis)
    assert np.isfinite(np.linalg.cond(a))
    assert is_poised(design)


def test_stencil_rejects_bad_basis():
    with pytest.raises(GeometryError):
        coordinate_stencil((0.0, 0.0), 1.0, np.array([[1.0, 0.1], [0.0, 1.0]]))
    with pytest.raises(GeometryError):
        coordinate_stencil((0.0, 0.0), 0.0)


@pytest.mark.parametrize("u1", [
    [1.0, 0.0],
    [0.0, 0.0, 1.0],
    list(np.ones(5) / math.sqrt(5.0)),
    [0.6, -0.8],
])
def test_orthonormal_complement(u1):
    u = np.asarray(u1)
    comp = orthonormal_complement(u)
    d = u.shape[0]
    assert comp.shape == (d, d - 1)
    full = np.column_stack([u, comp])
    assert np.max(np.abs(full.T @ full - np.eye(d))) <= 1e-12


def test_orthonormal_complement_errors():
    with pytest.raises(GeometryError):
        orthonormal_complement([0.0, 0.0])
    with pytest.raises(GeometryError):
        orthonormal_complement([1.0, 1.0])


def test_choose_without_history_is_stencil():
    design = choose_design_set((0.0, 0.0), 1.0, PointHistory())
    assert design.is_stencil
    assert design.reused_index is None


def test_choose_reuses_farthest_point():
    history = PointHistory()
    for x in ((0.0, 0.0), (0.3, 0.0), (0.0, -0.8), (3.0, 3.0)):
        history.add(_evaluated(x))
    design = choose_design_set((0.0, 0.0), 1.0, history)
    assert not design.is_stencil
    assert design.reused_index == 1
    assert np.allclose(design.points[1], (0.0, -0.8), atol=1e-15)
    assert design.reuse_distance == pytest.approx(0.8)
    assert np.allclose(design.basis[:, 0], (0.0, -1.0))
    assert design.evaluated[1] is not None
    norms = np.linalg.norm(design.points - design.center, axis=1)
    assert np.all(norms <= 1.0 + 1e-12)
    assert is_poised(design)


def test_choose_prefers_oldest_on_ties():
    history = PointHistory()
    history.add(_evaluated((0.5, 0.0)))
    history.add(_evaluated((0.0, 0.5)))
    design = choose_design_set((0.0, 0.0), 1.0, history)
    assert np.allclose(design.points[1], (0.5, 0.0))


def test_rotated_set_invariants():
    center = np.array([1.0, -1.0, 2.0])
    reused = _evaluated(center + np.array([0.2, 0.3, -0.1]))
    design = rotated_design_set(center, 0.5, reused)
    assert len(design) == 7
    assert np.array_equal(design.points[0], center)
    assert np.max(np.abs(design.basis.T @ design.basis - np.eye(3))) <= 1e-12
    assert is_poised(design)
    assert design.reused == [False, True, False, False, False, False, False]


def test_history_membership_is_by_identity():
    history = PointHistory()
    a = history.add(EvaluatedPoint((1.0, 2.0)))
    b = history.add(EvaluatedPoint((3.0, 4.0)))
    assert a in history and b in history
    assert history.add(a) is a
    assert len(history) == 2
    twin = EvaluatedPoint((1.0, 2.0))
    assert not twin in history
    assert not EvaluatedPoint((5.0, 5.0)) in history
    assert not (1.0, 2.0) in history
    assert history.find((1.0, 2.0)) is a
    assert [p.order for p in history] == [0, 1]
