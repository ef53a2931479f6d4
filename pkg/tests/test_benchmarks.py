"""
Тесты для модуля benchmarks.py
"""
import numpy as np
import pytest

from src.benchmarks import (
    BENCHMARK_NAMES,
    constant_aligned_error,
    get_benchmark,
    l2_boundary_norm,
    linear_aligned_error,
    weighted_trace_error,
)
from src.errors import InvalidParameterError
from src.geometry import sample_cell_boundary
from src.polynomials import BivariatePolynomial

STEP = 1e-4
POINTS = np.array([[0.2, 0.3], [0.8, 0.15], [0.3, 0.9]])


def _fd_gradient(f, points):
    e1, e2 = np.array([STEP, 0.0]), np.array([0.0, STEP])
    return np.column_stack([
        (f(points + e1) - f(points - e1)) / (2 * STEP),
        (f(points + e2) - f(points - e2)) / (2 * STEP),
    ])


def _fd_laplacian(f, points, step=1e-3):
    e1, e2 = np.array([step, 0.0]), np.array([0.0, step])
    return (f(points + e1) + f(points - e1) + f(points + e2) + f(points - e2) - 4 * f(points)) / step ** 2


def test_unknown_benchmark():
    """Тест: неизвестное имя ячейки."""
    with pytest.raises(InvalidParameterError):
        get_benchmark("hexagon")


@pytest.mark.parametrize("name", BENCHMARK_NAMES)
def test_benchmarks_are_well_formed(name):
    """Тест: ячейки дискретизируются, функции конечны в узлах."""
    benchmark = get_benchmark(name)
    sb = sample_cell_boundary(benchmark.cell, 8)

    assert benchmark.name == name
    assert sb.signed_area > 0.0
    assert np.all(np.isfinite(benchmark.v.evaluate(sb.points)))
    assert np.all(np.isfinite(benchmark.w.evaluate(sb.points)))
    assert len(sb.anchors) == benchmark.cell.num_holes


def test_pacman_uses_same_function_twice():
    """Тест: во втором примере v = w, Δv = 0."""
    benchmark = get_benchmark("pacman")

    assert benchmark.v is benchmark.w
    assert benchmark.v.laplacian().is_zero


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _curvature(velocity, acceleration):
    return _cross(velocity, acceleration) / np.linalg.norm(velocity) ** 3


@pytest.mark.parametrize("side, arc_end", [(1, 0.0), (3, 2.0 * np.pi)])
def test_ghost_side_arc_joints_are_graded(side, arc_end):
    """Тест: стыки стенок с дугой привидения гладкие по касательной, но кривизна скачет; там есть сгущение."""
    edges = get_benchmark("ghost").cell.components[0].edges
    wall, arc = edges[side], edges[2]
    wall_end = 2.0 * np.pi if side == 1 else 0.0
    x_wall, dx_wall, ddx_wall = (a[0] for a in wall.evaluate(np.array([wall_end])))
    x_arc, dx_arc, ddx_arc = (a[0] for a in arc.evaluate(np.array([arc_end])))

    assert np.allclose(x_wall, x_arc)
    assert abs(_cross(dx_wall, dx_arc)) < 1e-12 * np.linalg.norm(dx_wall) * np.linalg.norm(dx_arc)
    assert abs(_curvature(dx_arc, ddx_arc)) == pytest.approx(2.0)
    assert _curvature(dx_wall, ddx_wall) == pytest.approx(0.0, abs=1e-12)
    assert (wall.corner_right and arc.corner_left) if side == 1 else (arc.corner_right and wall.corner_left)
    assert benchmark.h1_reference == pytest.approx(1.20953682240855912)


def test_example_one_exact_intermediates():
    """Тест согласованности точных промежуточных величин первого примера."""
    benchmark = get_benchmark("punctured-square")
    exact = benchmark.exact
    center = np.array([0.5, 0.5])

    def phi(points):
        d = points - center
        return np.exp(points[:, 0]) * np.cos(points[:, 1]) + 0.5 * np.log((d ** 2).sum(axis=1))

    def psi(points):
        return np.exp(points[:, 0]) * np.cos(points[:, 1])

    # φ = v − (x₁³x₂ + x₁x₂³)
    poly = BivariatePolynomial.from_terms([(3, 1, 1.0), (1, 3, 1.0)])
    assert np.allclose(phi(POINTS), benchmark.v.evaluate(POINTS) - poly.evaluate(POINTS))
    assert exact.log_coefficients == (1.0,)

    # уравнения Коши–Римана для ψ + iψ̂
    psi_gradient = _fd_gradient(psi, POINTS)
    psi_hat_gradient = _fd_gradient(exact.psi_hat, POINTS)
    assert np.allclose(psi_gradient[:, 0], psi_hat_gradient[:, 1], atol=1e-7)
    assert np.allclose(psi_gradient[:, 1], -psi_hat_gradient[:, 0], atol=1e-7)

    assert np.allclose(exact.harmonic_gradient(POINTS), _fd_gradient(phi, POINTS), atol=1e-7)
    assert np.allclose(_fd_laplacian(exact.anti_laplacian, POINTS), phi(POINTS), atol=1e-5)


def test_error_metrics(annulus_boundary):
    """Тест метрик ошибок: нормы и выравнивание на константу и линейную функцию."""
    sb = annulus_boundary
    x1, x2 = sb.points[:, 0], sb.points[:, 1]
    exact = x1 * x2

    assert l2_boundary_norm(sb, np.ones(sb.num_points)) == pytest.approx(np.sqrt(2 * np.pi * 1.4), abs=1e-12)
    assert constant_aligned_error(sb, exact, exact + 3.0) == pytest.approx(0.0, abs=1e-13)
    assert linear_aligned_error(sb, exact, exact + 2.0 * x1 - x2) == pytest.approx(0.0, abs=1e-12)
    assert linear_aligned_error(sb, exact, exact + 1.0) > 0.1
    assert weighted_trace_error(sb, exact, exact + 1.0) == pytest.approx(np.sqrt(sb.h * sb.num_points))
