"""
Анти-лапласиан гармонической функции по её граничным данным.

Для φ = ψ + Σ a_j λ_j строится Φ с ΔΦ = φ:
  1. из ψ, ψ̂ находятся коэффициенты рациональной части α_j = b_j + i c_j;
  2. после их вычитания поле F₀ = (ψ₀, −ψ̂₀) безвихревое на каждой дыре;
  3. следы потенциалов ρ₀, ρ̂₀ находятся из двух задач Неймана;
  4. Φ = ¼(x₁ρ₀ + x₂ρ̂₀) + Σ M_j + Σ a_j Λ_j.
Для односвязной ячейки с гладкой границей вместо задач Неймана можно
взять первообразные вдоль границы через FFT.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .geometry import SampledBoundary, boundary_integrate
from .harmonic import HarmonicDecomposition, LogFamily
from .nystrom import NystromOperators
from .trace_calculus import component_antiderivative

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
METHODS = ("auto", "neumann", "fft")
NEUMANN_COMPATIBILITY_TOLERANCE = 1e-8
CIRCULATION_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class RationalPartCoefficients:
    """Коэффициенты (b_j, c_j) рациональной части Σ α_j/(z − ζ_j), α_j = b_j + i c_j."""
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        c = np.asarray(self.c, dtype=float)
        if b.shape != c.shape or not (np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise InvalidParameterError("Коэффициенты рациональной части должны быть конечными и согласованными")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def alpha(self) -> np.ndarray:
        return self.b + 1j * self.c


@dataclass(frozen=True, eq=False)
class AntiLaplacianTrace:
    """
    Граничные данные Φ: значения и взвешенная нормальная производная.
    Φ определён с точностью до линейной функции c₁x₁ + c₂x₂.
    """
    values: np.ndarray
    weighted_normal_derivative: np.ndarray
    rho: np.ndarray
    rho_hat: np.ndarray
    coefficients: RationalPartCoefficients
    method: str


def rational_coefficients(sb: SampledBoundary, psi, psi_hat) -> RationalPartCoefficients:
    """
    b_j = −(2π)⁻¹∮_{∂K_j} (ψ̂, ψ)·t ds,  c_j = (2π)⁻¹∮_{∂K_j} (ψ, −ψ̂)·t ds.

    Args:
        sb: дискретизированная граница (дыры ориентированы по часовой стрелке)
        psi: след сопрягаемой части
        psi_hat: след сопряжённой

    Returns:
        RationalPartCoefficients
    """
    psi = np.asarray(psi, dtype=float)
    psi_hat = np.asarray(psi_hat, dtype=float)
    b, c = [], []
    for sl in sb.component_slices[1:]:
        vx, vy = sb.velocity[sl, 0], sb.velocity[sl, 1]
        b.append(-sb.h / TWO_PI * (psi_hat[sl] * vx + psi[sl] * vy).sum())
        c.append(sb.h / TWO_PI * (psi[sl] * vx - psi_hat[sl] * vy).sum())
    return RationalPartCoefficients(np.array(b), np.array(c))


def _resolve_method(sb: SampledBoundary, method: str) -> str:
    if method not in METHODS:
        raise InvalidParameterError(f"Неизвестный метод {method}, ожидается один из {METHODS}")
    fft_allowed = sb.num_holes == 0 and not sb.corner_mask.any()
    if method == "fft" and not fft_allowed:
        error_msg = "Метод fft применим только к односвязной ячейке без углов"
        logger.error(error_msg)
        raise InvalidParameterError(error_msg)
    if method == "auto":
        return "fft" if fft_allowed else "neumann"
    return method


def _mean_free(sb: SampledBoundary, values: np.ndarray) -> np.ndarray:
    return values - boundary_integrate(sb, values) / sb.perimeter


def anti_laplacian_harmonic(operators: NystromOperators, hd: HarmonicDecomposition, logs: LogFamily,
                            method: str = "auto") -> AntiLaplacianTrace:
    """
    Построить след и взвешенную нормальную производную анти-лапласиана φ.

    Args:
        operators: операторы Нистрёма ячейки (факторизация используется повторно)
        hd: разложение φ, полученное отображением Дирихле–Нейман
        logs: логарифмическое семейство в узлах
        method: auto, neumann или fft

    Returns:
        AntiLaplacianTrace
    """
    sb = operators.boundary
    method = _resolve_method(sb, method)
    coefficients = rational_coefficients(sb, hd.psi, hd.psi_hat)
    real_part, imag_part = logs.rational_fields(coefficients.b, coefficients.c)
    psi0 = hd.psi - real_part
    psi_hat0 = hd.psi_hat - imag_part

    if method == "fft":
        vx, vy = sb.velocity[:, 0], sb.velocity[:, 1]
        rho = component_antiderivative(sb, psi0 * vx - psi_hat0 * vy)
        rho_hat = component_antiderivative(sb, psi_hat0 * vx + psi0 * vy)
    else:
        _check_circulation(sb, psi0, psi_hat0)
        nu_x, nu_y = sb.weighted_normal[:, 0], sb.weighted_normal[:, 1]
        data = psi0 * nu_x - psi_hat0 * nu_y
        data_hat = psi_hat0 * nu_x + psi0 * nu_y
        _check_compatibility(sb, data, "F₀")
        _check_compatibility(sb, data_hat, "F̂₀")
        rho = _mean_free(sb, operators.solve_neumann(data))
        rho_hat = _mean_free(sb, operators.solve_neumann(data_hat))

    x1, x2 = sb.points[:, 0], sb.points[:, 1]
    a = hd.log_coefficients
    values = 0.25 * (x1 * rho + x2 * rho_hat)
    values = values + logs.m_values(coefficients.b, coefficients.c) + logs.big_lambda_values(a)

    gradient = 0.25 * np.column_stack([rho, rho_hat])
    gradient += 0.25 * np.column_stack([x1 * psi0 + x2 * psi_hat0, x2 * psi0 - x1 * psi_hat0])
    gradient += logs.m_gradients(coefficients.b, coefficients.c)
    gradient += logs.big_lambda_gradient_values(a)
    normal = (gradient * sb.weighted_normal).sum(axis=1)

    logger.debug(f"Анти-лапласиан ({method}): b={coefficients.b}, c={coefficients.c}")
    return AntiLaplacianTrace(
        values=values,
        weighted_normal_derivative=normal,
        rho=rho,
        rho_hat=rho_hat,
        coefficients=coefficients,
        method=method,
    )


def _check_compatibility(sb: SampledBoundary, weighted_data: np.ndarray, label: str):
    """Данные Неймана должны иметь нулевой полный поток."""
    flux = sb.h * weighted_data.sum()
    scale = sb.h * np.abs(weighted_data).sum() + np.finfo(float).tiny
    if abs(flux) > NEUMANN_COMPATIBILITY_TOLERANCE * scale:
        logger.warning(f"Данные Неймана {label} несовместны: ∮ F·n ds = {flux:.3e}")


def _check_circulation(sb: SampledBoundary, psi0: np.ndarray, psi_hat0: np.ndarray):
    """После вычитания рациональной части циркуляции F₀ и F̂₀ по каждой дыре равны нулю."""
    scale = np.abs(psi0).max() * sb.perimeter + np.abs(psi_hat0).max() * sb.perimeter + np.finfo(float).tiny
    for j, sl in enumerate(sb.component_slices[1:], start=1):
        vx, vy = sb.velocity[sl, 0], sb.velocity[sl, 1]
        circulation = sb.h * (psi0[sl] * vx - psi_hat0[sl] * vy).sum()
        circulation_hat = sb.h * (psi_hat0[sl] * vx + psi0[sl] * vy).sum()
        worst = max(abs(circulation), abs(circulation_hat))
        if worst > CIRCULATION_TOLERANCE * scale:
            logger.warning(f"Ненулевая циркуляция на дыре {j}: {worst:.3e}")
        else:
            logger.debug(f"Циркуляция на дыре {j}: {worst:.3e}")
