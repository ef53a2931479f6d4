"""
Тесты для модуля geometry.py
"""
import numpy as np
import pytest

from src.errors import GeometryError, InvalidParameterError
from src.geometry import (
    TWO_PI,
    BoundaryComponent,
    EdgeKind,
    Orientation,
    ParametricEdge,
    PuncturedCell,
    boundary_integrate,
    kress_derivatives,
    kress_tau,
    min_distance_to_boundary,
    sample_cell_boundary,
    winding_number,
)
from tests.conftest import make_annulus, make_disk

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def _square(corners=(True, True)):
    return BoundaryComponent(tuple(ParametricEdge.line(SQUARE[k], SQUARE[(k + 1) % 4], corners) for k in range(4)))


def test_kress_tau_fixed_points():
    """Тест: τ(0) = 0, τ(π) = π, τ(2π) = 2π для разных σ."""
    for sigma in (2.0, 4.0, 7.0, 10.0):
        assert kress_tau(0.0, sigma) == pytest.approx(0.0, abs=1e-15)
        assert kress_tau(np.pi, sigma) == pytest.approx(np.pi, abs=1e-14)
        assert kress_tau(TWO_PI, sigma) == pytest.approx(TWO_PI, abs=1e-14)
    assert isinstance(kress_tau(1.0), float)


def test_kress_tau_is_monotone():
    """Тест: отображение Кресса монотонно и сгущает узлы к концам."""
    u = np.linspace(0.0, TWO_PI, 401)
    tau, dtau, _ = kress_derivatives(u, 7.0)

    assert np.all(np.diff(tau) >= 0.0)
    assert dtau[0] == pytest.approx(0.0, abs=1e-14)
    assert dtau[-1] == pytest.approx(0.0, abs=1e-14)
    assert dtau[200] == pytest.approx(2.0, rel=1e-12)


def test_kress_derivatives_match_finite_differences():
    """Тест производных отображения Кресса по центральным разностям."""
    u = np.linspace(0.3, TWO_PI - 0.3, 23)
    step = 1e-5
    tau, dtau, ddtau = kress_derivatives(u, 7.0)
    plus, dplus, _ = kress_derivatives(u + step, 7.0)
    minus, dminus, _ = kress_derivatives(u - step, 7.0)

    assert np.allclose(dtau, (plus - minus) / (2 * step), rtol=1e-7, atol=1e-9)
    assert np.allclose(ddtau, (dplus - dminus) / (2 * step), rtol=1e-6, atol=1e-8)


def test_kress_sigma_below_two_rejected():
    """Тест: σ < 2 недопустимо."""
    with pytest.raises(InvalidParameterError):
        kress_tau(1.0, 1.5)


def test_one_sided_parameter_maps():
    """Тест одностороннего отображения: скорость обращается в ноль только на угловом конце."""
    left = ParametricEdge.line((0.0, 0.0), (1.0, 0.0), corners=(True, False))
    right = ParametricEdge.line((0.0, 0.0), (1.0, 0.0), corners=(False, True))
    ends = np.array([0.0, TWO_PI])

    t_left, dt_left, _ = left.parameter_map(ends, 7.0)
    t_right, dt_right, _ = right.parameter_map(ends, 7.0)

    assert np.allclose(t_left, [0.0, TWO_PI])
    assert np.allclose(t_right, [0.0, TWO_PI])
    assert dt_left[0] == pytest.approx(0.0, abs=1e-14) and dt_left[1] > 0.5
    assert dt_right[1] == pytest.approx(0.0, abs=1e-14) and dt_right[0] > 0.5


def test_edge_sampling_drops_right_endpoint():
    """Тест: 2n узлов на ребро, первый совпадает с началом ребра."""
    edge = ParametricEdge.line((0.0, 0.0), (2.0, 0.0))
    x, velocity, acceleration = edge.sample(8, 7.0)

    assert x.shape == (16, 2)
    assert np.allclose(x[0], [0.0, 0.0])
    assert np.all(x[:, 0] < 2.0)
    assert np.linalg.norm(velocity[0]) == pytest.approx(0.0, abs=1e-14)


def test_closed_circle_is_not_reparameterized():
    """Тест: замкнутый контур дискретизируется равномерно."""
    edge = ParametricEdge.closed_circle((0.0, 0.0), 2.0)
    _, velocity, _ = edge.sample(8, 7.0)

    assert np.allclose(np.linalg.norm(velocity, axis=1), 2.0)


def test_closed_contour_rejects_corners():
    """Тест: замкнутый контур не может иметь угловых концов."""
    with pytest.raises(GeometryError):
        ParametricEdge(EdgeKind.CLOSED_CIRCLE, {"center": (0, 0), "radius": 1.0}, corner_left=True)


@pytest.mark.parametrize("kind, params", [
    (EdgeKind.LINE, {"start": (0, 0), "end": (0, 0)}),
    (EdgeKind.CIRCULAR_ARC, {"center": (0, 0), "radius": -1.0, "start_angle": 0.0, "end_angle": 1.0}),
    (EdgeKind.ELLIPSE_ARC, {"center": (0, 0), "semi_axes": (1.0, 0.0), "start_angle": 0.0, "end_angle": 1.0}),
    (EdgeKind.LINE, {"start": (0, 0)}),
])
def test_invalid_edges(kind, params):
    """Тест отклонения вырожденных и неполных рёбер."""
    with pytest.raises(GeometryError):
        ParametricEdge(kind, params)


def test_component_must_be_closed():
    """Тест: незамкнутая цепочка рёбер отклоняется."""
    edges = (ParametricEdge.line((0, 0), (1, 0)), ParametricEdge.line((1, 0), (1, 1)))
    with pytest.raises(GeometryError):
        BoundaryComponent(edges)


def test_cusp_is_rejected():
    """Тест: стык с нулевым внутренним углом отклоняется."""
    edges = (
        ParametricEdge.line((0.0, 0.0), (1.0, 0.0)),
        ParametricEdge.circular_arc((1.0, 0.5), 0.5, -np.pi / 2, np.pi / 2),
        ParametricEdge.line((1.0, 1.0), (0.0, 1.0)),
        ParametricEdge.line((0.0, 1.0), (0.5, 0.5)),
        ParametricEdge.line((0.5, 0.5), (0.0, 0.0)),
    )
    BoundaryComponent(edges)

    spike = (
        ParametricEdge.line((0.0, 0.0), (1.0, 0.0)),
        ParametricEdge.line((1.0, 0.0), (0.5, 0.0)),
        ParametricEdge.line((0.5, 0.0), (0.0, 0.0)),
    )
    with pytest.raises(GeometryError):
        BoundaryComponent(spike)


def test_cell_orientation_declarations():
    """Тест: объявленные ориентации внешней границы и дыр проверяются."""
    hole_ccw = BoundaryComponent((ParametricEdge.closed_circle((0.5, 0.5), 0.2),))
    with pytest.raises(GeometryError):
        PuncturedCell("bad", _square(), (hole_ccw,))
    with pytest.raises(GeometryError):
        PuncturedCell("bad", BoundaryComponent(_square().edges, Orientation.CLOCKWISE))


def test_sampled_orientation_checked_by_area():
    """Тест: дыра, объявленная по часовой стрелке, но обходимая против, отклоняется."""
    hole = BoundaryComponent((ParametricEdge.closed_circle((0.5, 0.5), 0.2),), Orientation.CLOCKWISE)
    cell = PuncturedCell("bad", _square(), (hole,))

    with pytest.raises(GeometryError):
        sample_cell_boundary(cell, 8)


def test_hole_outside_cell_rejected():
    """Тест: дыра вне внешней границы отклоняется."""
    hole = BoundaryComponent((ParametricEdge.closed_circle((2.0, 0.5), 0.2, clockwise=True),),
                             Orientation.CLOCKWISE)
    with pytest.raises(GeometryError):
        sample_cell_boundary(PuncturedCell("bad", _square(), (hole,)), 8)


def test_anchor_must_lie_in_hole():
    """Тест: точка ξ вне дыры отклоняется."""
    hole = BoundaryComponent((ParametricEdge.closed_circle((0.5, 0.5), 0.2, clockwise=True),),
                             Orientation.CLOCKWISE)
    cell = PuncturedCell("bad", _square(), (hole,), anchors=((0.1, 0.1),))

    with pytest.raises(GeometryError):
        sample_cell_boundary(cell, 8)
    with pytest.raises(GeometryError):
        PuncturedCell("bad", _square(), (hole,), anchors=((0.5, 0.5), (0.6, 0.6)))


def test_default_anchors_are_hole_centroids():
    """Тест: по умолчанию ξ — центроид узлов дыры."""
    hole = BoundaryComponent((ParametricEdge.closed_circle((0.4, 0.6), 0.2, clockwise=True),),
                             Orientation.CLOCKWISE)
    sb = sample_cell_boundary(PuncturedCell("cell", _square(), (hole,)), 8)

    assert np.allclose(sb.anchors, [[0.4, 0.6]], atol=1e-14)


def test_sample_requires_n_at_least_two(disk):
    """Тест: n < 2 недопустимо."""
    with pytest.raises(InvalidParameterError):
        sample_cell_boundary(disk, 1)


def test_sampled_layout(square_boundary):
    """Тест разметки узлов по компонентам и рёбрам."""
    sb = square_boundary

    assert sb.num_points == 5 * 64
    assert sb.component_slices == (slice(0, 256), slice(256, 320))
    assert len(sb.edge_slices) == 5
    assert sb.component_edge_counts == (4, 1)
    assert sb.num_holes == 1
    assert sb.h == pytest.approx(np.pi / 32)
    assert sb.corner_mask.sum() == 4


def test_perimeter_and_area(square_boundary):
    """Тест периметра и площади квадрата с дырой."""
    sb = square_boundary

    assert sb.perimeter == pytest.approx(4.0 + 0.5 * np.pi, abs=1e-6)
    assert sb.signed_area == pytest.approx(1.0 - np.pi / 16, abs=1e-6)
    assert sb.component_signed_areas[1] < 0


def test_smooth_boundary_quadrature_is_spectral(annulus_boundary):
    """Тест: на гладкой границе правило трапеций точно до округления."""
    sb = annulus_boundary

    assert sb.perimeter == pytest.approx(TWO_PI * 1.4, abs=1e-13)
    assert sb.signed_area == pytest.approx(np.pi * (1.0 - 0.16), abs=1e-13)
    assert boundary_integrate(sb, sb.points[:, 0] ** 2) == pytest.approx(np.pi * (1.0 + 0.4 ** 3), abs=1e-13)


def test_unit_vectors(annulus_boundary):
    """Тест: нормаль на внешней окружности направлена наружу, на дыре — к центру."""
    sb = annulus_boundary
    outer, hole = sb.component_slices

    assert np.allclose(sb.unit_normal[outer], sb.points[outer], atol=1e-14)
    assert np.allclose(sb.unit_normal[hole], -sb.points[hole] / 0.4, atol=1e-14)
    assert np.allclose((sb.unit_tangent * sb.unit_normal).sum(axis=1), 0.0)


def test_boundary_integrate_length_mismatch(square_boundary):
    """Тест: число значений должно совпадать с числом узлов."""
    with pytest.raises(InvalidParameterError):
        boundary_integrate(square_boundary, np.ones(3))


def test_winding_number(square_boundary):
    """Тест числа оборотов для внешней границы и дыры."""
    sb = square_boundary
    targets = np.array([[0.1, 0.1], [0.5, 0.5], [1.5, 0.5]])

    assert list(winding_number(sb.component_points(0), targets)) == [1, 1, 0]
    assert list(winding_number(sb.component_points(1), targets)) == [0, -1, 0]


def test_min_distance_to_boundary(square_boundary):
    """Тест расстояния до узлов границы."""
    sb = square_boundary

    assert min_distance_to_boundary(sb, (0.1, 0.5)) == pytest.approx(0.1, abs=1e-3)
    distances = min_distance_to_boundary(sb, np.array([[0.1, 0.5], [0.5, 0.5]]))
    assert distances.shape == (2,)
    assert distances[1] == pytest.approx(0.25, abs=1e-12)


def test_rigid_motion_preserves_measures(square_boundary):
    """Тест: поворот и сдвиг не меняют периметр и площадь."""
    moved = square_boundary.cell.rigid_motion(0.7, (2.0, -1.0))
    sb = sample_cell_boundary(moved, 32)

    assert sb.perimeter == pytest.approx(square_boundary.perimeter, rel=1e-13)
    assert sb.signed_area == pytest.approx(square_boundary.signed_area, abs=1e-6)


def test_component_values(annulus_boundary):
    """Тест выборки значений по компонентам."""
    values = np.arange(annulus_boundary.num_points, dtype=float)

    assert annulus_boundary.component_values(values, 1)[0] == 64.0
    assert len(annulus_boundary.component_points(0)) == 64


def test_disk_and_annulus_helpers():
    """Тест вспомогательных ячеек."""
    assert make_disk().num_holes == 0
    assert make_annulus().num_edges == 2
