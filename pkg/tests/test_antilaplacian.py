"""
Тесты для модуля antilaplacian.py
"""
import numpy as np
import pytest

from src.antilaplacian import RationalPartCoefficients, anti_laplacian_harmonic, rational_coefficients
from src.benchmarks import linear_aligned_error
from src.errors import InvalidParameterError
from src.harmonic import DirichletToNeumannMap
from src.nystrom import NystromOperators
from tests.conftest import prepared_benchmark


def _anti(sb, trace, method="auto"):
    dtn = DirichletToNeumannMap(NystromOperators(sb))
    hd = dtn.decompose(trace)
    return anti_laplacian_harmonic(dtn.operators, hd, dtn.logs, method=method)


def _linear_fit(sb, difference):
    coefficients, *_ = np.linalg.lstsq(sb.points, difference, rcond=None)
    return coefficients


def test_fft_and_neumann_agree_on_disk(disk_boundary):
    """Тест: на круге оба способа дают Φ = x₁|x|²/8 для φ = x₁."""
    sb = disk_boundary
    x1, x2 = sb.points[:, 0], sb.points[:, 1]
    exact = x1 * (x1 ** 2 + x2 ** 2) / 8.0

    fft = _anti(sb, x1)
    neumann = _anti(sb, x1, method="neumann")

    assert fft.method == "fft"
    assert neumann.method == "neumann"
    assert linear_aligned_error(sb, exact, fft.values) < 1e-12
    assert linear_aligned_error(sb, exact, neumann.values) < 1e-11
    assert np.allclose(fft.values, neumann.values, atol=1e-11)


def test_normal_derivative_matches_values(disk_boundary):
    """Тест: ∂Φ/∂n согласована со следом с той же линейной функцией."""
    sb = disk_boundary
    x1, x2 = sb.points[:, 0], sb.points[:, 1]
    exact = x1 * (x1 ** 2 + x2 ** 2) / 8.0
    exact_gradient = np.column_stack([(3 * x1 ** 2 + x2 ** 2) / 8.0, x1 * x2 / 4.0])

    anti = _anti(sb, x1)

    shift = _linear_fit(sb, anti.values - exact)
    expected = ((exact_gradient + shift) * sb.weighted_normal).sum(axis=1)
    assert np.allclose(anti.weighted_normal_derivative, expected, atol=1e-11)


def test_annulus_with_logarithm(annulus_boundary):
    """Тест: для φ = x₁ + 2 ln|x| Φ = x₁|x|²/8 + ½|x|²(ln|x| − 1)."""
    sb = annulus_boundary
    x1, x2 = sb.points[:, 0], sb.points[:, 1]
    r2 = x1 ** 2 + x2 ** 2

    anti = _anti(sb, x1 + np.log(r2))

    exact = x1 * r2 / 8.0 + 0.5 * r2 * (0.5 * np.log(r2) - 1.0)
    assert anti.method == "neumann"
    assert np.allclose(anti.coefficients.b, 0.0, atol=1e-12)
    assert np.allclose(anti.coefficients.c, 0.0, atol=1e-12)
    assert linear_aligned_error(sb, exact, anti.values) < 1e-11


def test_integral_of_harmonic_function(annulus_boundary):
    """Тест: ∫_K φ dx = ∮ ∂Φ/∂n ds."""
    sb = annulus_boundary
    x1, x2 = sb.points[:, 0], sb.points[:, 1]
    inner = 0.4

    anti = _anti(sb, x1 + np.log(x1 ** 2 + x2 ** 2))

    # ∫_K 2 ln|x| dx = 4π [r²/2 ln r − r²/4] от r = 0.4 до 1
    exact = 4 * np.pi * (-0.25 - (0.5 * inner ** 2 * np.log(inner) - 0.25 * inner ** 2))
    assert sb.h * anti.weighted_normal_derivative.sum() == pytest.approx(exact, abs=1e-11)


def test_rational_part_of_inverse_z(annulus_boundary):
    """Тест: для φ = Re(α/z) коэффициенты рациональной части равны α."""
    sb = annulus_boundary
    z = sb.complex_points

    for alpha in (1.0, 1.0j, 0.3 - 2.0j):
        f = alpha / z
        coefficients = rational_coefficients(sb, f.real, f.imag)
        assert coefficients.alpha[0] == pytest.approx(alpha, abs=1e-12)


def test_anti_laplacian_of_rational_part(annulus_boundary):
    """Тест: для φ = Re(1/z) Φ = ½x₁ ln|x|, потенциалы ρ нулевые."""
    sb = annulus_boundary
    x1, x2 = sb.points[:, 0], sb.points[:, 1]
    r2 = x1 ** 2 + x2 ** 2

    anti = _anti(sb, x1 / r2)

    assert anti.coefficients.b[0] == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(anti.rho, 0.0, atol=1e-11)
    assert np.allclose(anti.rho_hat, 0.0, atol=1e-11)
    assert linear_aligned_error(sb, 0.25 * x1 * np.log(r2), anti.values) < 1e-11


def test_example_one_anti_laplacian():
    """Тест: Φ гармонической части первого примера с точностью до линейной функции."""
    benchmark, sb, vp, _ = prepared_benchmark("punctured-square", 32)

    exact = benchmark.exact.anti_laplacian(sb.points)

    assert vp.anti_laplacian.method == "neumann"
    assert linear_aligned_error(sb, exact, vp.anti_laplacian.values) < 1e-7


def test_fft_rejected_for_cells_with_holes(annulus_boundary, square_boundary):
    """Тест: метод fft недоступен при наличии дыр."""
    with pytest.raises(InvalidParameterError):
        _anti(annulus_boundary, annulus_boundary.points[:, 0], method="fft")
    with pytest.raises(InvalidParameterError):
        _anti(square_boundary, square_boundary.points[:, 0], method="fft")


def test_unknown_method(disk_boundary):
    """Тест: неизвестный метод отклоняется."""
    with pytest.raises(InvalidParameterError):
        _anti(disk_boundary, disk_boundary.points[:, 0], method="spectral")


def test_rational_coefficients_validation():
    """Тест проверки коэффициентов."""
    with pytest.raises(InvalidParameterError):
        RationalPartCoefficients(np.ones(2), np.ones(3))
    with pytest.raises(InvalidParameterError):
        RationalPartCoefficients(np.array([np.nan]), np.zeros(1))
