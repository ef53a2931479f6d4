"""
Приёмочные тесты: эталонные значения встроенных ячеек, сходимость,
сверка с оракулом и внутренние значения.
"""
import numpy as np
import pytest

from src.benchmarks import (
    BENCHMARK_NAMES,
    constant_aligned_error,
    get_benchmark,
    linear_aligned_error,
    weighted_trace_error,
)
from src.config import RunConfig
from src.expressions import FunctionSpec, PolynomialTerm, TraceExpression
from src.geometry import min_distance_to_boundary, sample_cell_boundary
from src.inner_products import LocalPoissonFunction, h1_semi, l2, prepare_functions
from src.oracle import integrate_over_cell
from src.polynomials import BivariatePolynomial
from src.runner import interior_values
from tests.conftest import prepared_benchmark, sampled_benchmark

ORACLE_PAIRS = 10


@pytest.mark.parametrize("name, h1_tolerance, l2_tolerance", [
    ("punctured-square", 1e-10, 1e-11),
    ("pacman", 1e-6, 1e-7),
    ("ghost", 1e-9, 1e-9),
])
def test_reference_values_at_n64(name, h1_tolerance, l2_tolerance):
    """Тест: при n = 64 скалярные произведения совпадают с эталонами."""
    benchmark, _, vp, wp = prepared_benchmark(name, 64)

    assert abs(h1_semi(vp, wp) - benchmark.h1_reference) < h1_tolerance
    assert abs(l2(vp, wp) - benchmark.l2_reference) < l2_tolerance


def test_products_are_symmetric():
    """Тест: h1(v, w) = h1(w, v) и l2(v, w) = l2(w, v)."""
    _, _, vp, wp = prepared_benchmark("ghost", 64)

    assert h1_semi(vp, wp) == pytest.approx(h1_semi(wp, vp), rel=1e-10)
    assert l2(vp, wp) == pytest.approx(l2(wp, vp), rel=1e-10)


def test_example_one_intermediates_at_n64():
    """Тест промежуточных величин первого примера при n = 64."""
    benchmark, sb, vp, _ = prepared_benchmark("punctured-square", 64)
    exact = benchmark.exact
    hd = vp.harmonic
    exact_wnd = (exact.harmonic_gradient(sb.points) * sb.weighted_normal).sum(axis=1)

    assert abs(hd.log_coefficients[0] - 1.0) < 1e-12
    assert constant_aligned_error(sb, exact.psi_hat(sb.points), hd.psi_hat) < 1e-10
    assert weighted_trace_error(sb, exact_wnd, hd.weighted_normal_derivative) < 1e-8
    assert linear_aligned_error(sb, exact.anti_laplacian(sb.points), vp.anti_laplacian.values) < 1e-9


def test_example_one_converges_superlinearly():
    """Тест: ошибки первого примера убывают, наблюдаемый порядок растёт с n."""
    benchmark = get_benchmark("punctured-square")
    h1_errors, l2_errors = [], []
    for n in (4, 8, 16, 32, 64):
        _, _, vp, wp = prepared_benchmark("punctured-square", n)
        h1_errors.append(abs(h1_semi(vp, wp) - benchmark.h1_reference))
        l2_errors.append(abs(l2(vp, wp) - benchmark.l2_reference))

    orders = np.log2(np.array(h1_errors[:-1]) / np.array(h1_errors[1:]))
    assert all(a > b for a, b in zip(h1_errors, h1_errors[1:]))
    assert all(a > b for a, b in zip(l2_errors[:4], l2_errors[1:4]))
    assert orders.max() > orders[0]
    assert orders[1:].mean() > orders[0]


def _random_polynomial(rng, degree=4):
    terms = [(i, j, rng.uniform(-1.0, 1.0)) for i in range(degree + 1) for j in range(degree + 1 - i)]
    return TraceExpression((PolynomialTerm(BivariatePolynomial.from_terms(terms)),))


@pytest.mark.parametrize("name", BENCHMARK_NAMES)
def test_polynomials_match_oracle(name, rng):
    """Тест: для 10 пар многочленов степени ≤ 4 произведения совпадают с оракулом."""
    cell = get_benchmark(name).cell
    pairs = [(_random_polynomial(rng), _random_polynomial(rng)) for _ in range(ORACLE_PAIRS)]
    sb = sampled_benchmark(name, 64)
    functions = [LocalPoissonFunction.from_expression(sb, f) for pair in pairs for f in pair]
    prepared = prepare_functions(sb, functions)

    def integrand(points):
        h1_rows = [(v.gradient(points) * w.gradient(points)).sum(axis=1) for v, w in pairs]
        l2_rows = [v.evaluate(points) * w.evaluate(points) for v, w in pairs]
        return np.vstack(h1_rows + l2_rows)

    oracle = integrate_over_cell(cell, integrand)

    for k in range(ORACLE_PAIRS):
        vp, wp = prepared[2 * k], prepared[2 * k + 1]
        h1_oracle, l2_oracle = oracle[k], oracle[ORACLE_PAIRS + k]
        assert abs(h1_semi(vp, wp) - h1_oracle) < 1e-8 * max(1.0, abs(h1_oracle))
        assert abs(l2(vp, wp) - l2_oracle) < 1e-8 * max(1.0, abs(l2_oracle))


@pytest.fixture(scope="module")
def ghost_interior():
    benchmark = get_benchmark("ghost")
    config = RunConfig(cell="ghost", n_values=(64,), interior_grid=40, epsilon=0.02)
    return interior_values(benchmark.cell, FunctionSpec("v", benchmark.v), config)


def test_ghost_interior_error_field(ghost_interior):
    """Тест: ошибка v на сетке привидения мала везде и очень мала в типичной точке."""
    result, exact_values, _ = ghost_interior
    evaluated = result.evaluated

    errors = np.abs(result.values[evaluated] - exact_values[evaluated])
    assert evaluated.sum() > 500
    assert np.max(errors) <= 1e-4
    assert np.median(errors) <= 1e-8


def test_ghost_interior_far_from_boundary(ghost_interior):
    """Тест: вдали от границы значения и градиенты почти точны, у границы точки пропущены."""
    result, exact_values, exact_gradients = ghost_interior
    sb = sample_cell_boundary(get_benchmark("ghost").cell, 64)
    distance = min_distance_to_boundary(sb, result.points)
    far = result.evaluated & (distance > 0.1)

    assert far.sum() > 10
    assert np.all(result.skipped[result.in_domain & (distance < 0.02)])
    assert np.max(np.abs(result.values[far] - exact_values[far])) < 1e-7
    assert np.max(np.abs(result.gradients[far] - exact_gradients[far])) < 1e-6
