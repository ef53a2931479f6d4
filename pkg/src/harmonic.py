"""
Отображение Дирихле–Нейман для гармонических функций на ячейке с дырами.

φ = ψ + Σ a_j ln|x − ξ_j|, где ψ имеет однозначную сопряжённую ψ̂.
След ψ̂ и коэффициенты a_j находятся из расширенной системы Нистрёма
размера (N+m)×(N+m); взвешенная нормальная производная φ получается
дифференцированием ψ̂ вдоль границы.
"""
import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidParameterError
from .geometry import SampledBoundary, boundary_integrate
from .nystrom import DenseSystem, FactorizedOperator, NystromOperators, solve_dense
from .trace_calculus import component_derivative

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class LogFamily:
    """
    Логарифмические функции дыр и связанные с ними поля в наборе точек.

    Для каждой дыры j и точки x, d = x − ξ_j:
      λ_j = ln|d|, ∇λ_j = d/|d|² = (μ_j, −μ̂_j),
      Λ_j = ¼|d|²(λ_j − 1) с ΔΛ_j = λ_j,
      M_j = ½(b_j d₁ + c_j d₂)λ_j с ΔM_j = b_jμ_j − c_jμ̂_j.
    Массивы имеют форму (m, k) или (m, k, 2).
    """
    anchors: np.ndarray
    points: np.ndarray
    velocity: Optional[np.ndarray] = None
    weighted_normal: Optional[np.ndarray] = None

    @classmethod
    def from_boundary(cls, sb: SampledBoundary) -> "LogFamily":
        return cls(sb.anchors, sb.points, sb.velocity, sb.weighted_normal)

    @classmethod
    def at_points(cls, anchors, points) -> "LogFamily":
        return cls(np.asarray(anchors, dtype=float).reshape(-1, 2), np.atleast_2d(np.asarray(points, dtype=float)))

    @property
    def num_holes(self) -> int:
        return len(self.anchors)

    @cached_property
    def offsets(self) -> np.ndarray:
        return self.points[None, :, :] - self.anchors[:, None, :]

    @cached_property
    def r2(self) -> np.ndarray:
        return (self.offsets ** 2).sum(axis=2)

    @cached_property
    def values(self) -> np.ndarray:
        return 0.5 * np.log(self.r2)

    @cached_property
    def gradients(self) -> np.ndarray:
        return self.offsets / self.r2[:, :, None]

    @cached_property
    def mu(self) -> np.ndarray:
        return self.offsets[:, :, 0] / self.r2

    @cached_property
    def mu_hat(self) -> np.ndarray:
        return -self.offsets[:, :, 1] / self.r2

    @cached_property
    def weighted_tangential_derivative(self) -> np.ndarray:
        if self.velocity is None:
            raise InvalidParameterError("Касательные производные доступны только в узлах границы")
        return (self.gradients * self.velocity[None, :, :]).sum(axis=2)

    @cached_property
    def weighted_normal_derivative(self) -> np.ndarray:
        if self.weighted_normal is None:
            raise InvalidParameterError("Нормальные производные доступны только в узлах границы")
        return (self.gradients * self.weighted_normal[None, :, :]).sum(axis=2)

    @cached_property
    def big_lambda(self) -> np.ndarray:
        return 0.25 * self.r2 * (self.values - 1.0)

    @cached_property
    def big_lambda_gradients(self) -> np.ndarray:
        return 0.25 * (2.0 * self.values - 1.0)[:, :, None] * self.offsets

    # --- combinations with coefficients ------------------------------

    def log_values(self, a) -> np.ndarray:
        return np.einsum("j,jk->k", np.asarray(a, dtype=float), self.values)

    def log_gradients(self, a) -> np.ndarray:
        return np.einsum("j,jkd->kd", np.asarray(a, dtype=float), self.gradients)

    def big_lambda_values(self, a) -> np.ndarray:
        return np.einsum("j,jk->k", np.asarray(a, dtype=float), self.big_lambda)

    def big_lambda_gradient_values(self, a) -> np.ndarray:
        return np.einsum("j,jkd->kd", np.asarray(a, dtype=float), self.big_lambda_gradients)

    def rational_fields(self, b, c) -> Tuple[np.ndarray, np.ndarray]:
        """Вещественная и мнимая части Σ α_j/(z − ζ_j): (Σ(bμ − cμ̂), Σ(cμ + bμ̂))."""
        b = np.asarray(b, dtype=float)
        c = np.asarray(c, dtype=float)
        real = np.einsum("j,jk->k", b, self.mu) - np.einsum("j,jk->k", c, self.mu_hat)
        imag = np.einsum("j,jk->k", c, self.mu) + np.einsum("j,jk->k", b, self.mu_hat)
        return real, imag

    def m_values(self, b, c) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        c = np.asarray(c, dtype=float)
        linear = b[:, None] * self.offsets[:, :, 0] + c[:, None] * self.offsets[:, :, 1]
        return 0.5 * (linear * self.values).sum(axis=0)

    def m_gradients(self, b, c) -> np.ndarray:
        """∇M_j = ½(b_jμ_j − c_jμ̂_j)d + ½λ_j(b_j, c_j), просуммированные по j."""
        b = np.asarray(b, dtype=float)
        c = np.asarray(c, dtype=float)
        scale = 0.5 * (b[:, None] * self.mu - c[:, None] * self.mu_hat)
        gradient = scale[:, :, None] * self.offsets
        gradient = gradient + 0.5 * self.values[:, :, None] * np.stack([b, c], axis=1)[:, None, :]
        return gradient.sum(axis=0)


@dataclass(frozen=True, eq=False)
class HarmonicDecomposition:
    """
    Результат отображения Дирихле–Нейман для следа φ.

    psi — след сопрягаемой части ψ = φ − Σ a_j λ_j; psi_hat — её сопряжённая
    с ∮ψ̂ ds = 0. Производные хранятся во взвешенной форме.
    """
    trace: np.ndarray
    psi: np.ndarray
    psi_hat: np.ndarray
    log_coefficients: np.ndarray
    weighted_tangential_derivative: np.ndarray
    weighted_normal_derivative: Optional[np.ndarray] = None


def build_augmented_matrix(operators: NystromOperators, logs: LogFamily) -> np.ndarray:
    """
    Расширенная матрица: N строк уравнения для ψ̂ и m строк моментов,
    масштабированных на 1/|∂K|.
    """
    sb = operators.boundary
    size = sb.num_points
    m = logs.num_holes
    h = sb.h
    matrix = np.zeros((size + m, size + m))
    matrix[:size, :size] = operators.dlp
    if m == 0:
        return matrix

    tangential = logs.weighted_tangential_derivative
    normal = logs.weighted_normal_derivative
    scale = 1.0 / sb.perimeter
    matrix[:size, size:] = -(operators.slp @ tangential.T)
    matrix[size:, :size] = -h * scale * tangential
    matrix[size:, size:] = h * scale * (normal @ logs.values.T)
    return matrix


def _augmented_rhs(operators: NystromOperators, logs: LogFamily, trace: np.ndarray,
                   tangential: np.ndarray) -> np.ndarray:
    sb = operators.boundary
    top = -(operators.slp @ tangential)
    if logs.num_holes == 0:
        return top
    bottom = sb.h / sb.perimeter * (logs.weighted_normal_derivative @ trace)
    return np.concatenate([top, bottom])


def _checked_trace(sb: SampledBoundary, trace) -> np.ndarray:
    trace = np.asarray(trace, dtype=float)
    if trace.shape != (sb.num_points,):
        error_msg = f"След должен иметь {sb.num_points} значений, получено {trace.shape}"
        logger.error(error_msg)
        raise InvalidParameterError(error_msg)
    return trace


def solve_conjugate_augmented(operators: NystromOperators, logs: LogFamily, trace,
                              factorization: Optional[FactorizedOperator] = None) -> HarmonicDecomposition:
    """
    Найти ψ̂ и a_j для гармонической функции с заданным следом.

    Args:
        operators: операторы Нистрёма ячейки
        logs: логарифмическое семейство в узлах границы
        trace: след φ в узлах
        factorization: готовая факторизация расширенной матрицы (если есть)

    Returns:
        HarmonicDecomposition без нормальной производной
    """
    sb = operators.boundary
    trace = _checked_trace(sb, trace)
    tangential = component_derivative(sb, trace)
    rhs = _augmented_rhs(operators, logs, trace, tangential)

    if factorization is None:
        matrix = build_augmented_matrix(operators, logs)
        solution = solve_dense(DenseSystem(matrix, rhs, operators.solver, operators.tolerance))
    else:
        solution = factorization.solve(rhs)

    size = sb.num_points
    psi_hat = solution[:size]
    psi_hat = psi_hat - boundary_integrate(sb, psi_hat) / sb.perimeter
    a = solution[size:].copy()
    psi = trace - logs.log_values(a)
    if logs.num_holes:
        logger.debug(f"Логарифмические коэффициенты: {np.array2string(a, precision=12)}")
    return HarmonicDecomposition(
        trace=trace,
        psi=psi,
        psi_hat=psi_hat,
        log_coefficients=a,
        weighted_tangential_derivative=tangential,
    )


def dtn_weighted_normal_derivative(hd: HarmonicDecomposition, sb: SampledBoundary,
                                   logs: LogFamily) -> np.ndarray:
    """
    (∂φ/∂n)|x'| = d/du ψ̂(x(u)) + Σ a_j (∂λ_j/∂n)|x'|.
    """
    result = component_derivative(sb, hd.psi_hat)
    if logs.num_holes:
        result = result + hd.log_coefficients @ logs.weighted_normal_derivative
    return result


class DirichletToNeumannMap:
    """
    Отображение Дирихле–Нейман одной ячейки с кэшированной факторизацией
    расширенной матрицы. Разные функции на этой ячейке используют её совместно.
    """

    def __init__(self, operators: NystromOperators):
        self.operators = operators
        self.boundary = operators.boundary
        self.logs = LogFamily.from_boundary(self.boundary)

    @cached_property
    def factorization(self) -> FactorizedOperator:
        matrix = build_augmented_matrix(self.operators, self.logs)
        logger.debug(f"Факторизация расширенной системы размера {matrix.shape[0]}")
        return FactorizedOperator(matrix, self.operators.solver, self.operators.tolerance)

    def decompose(self, trace) -> HarmonicDecomposition:
        """
        Полное разложение: ψ̂, a_j и взвешенная нормальная производная φ.
        """
        hd = solve_conjugate_augmented(self.operators, self.logs, trace, self.factorization)
        normal = dtn_weighted_normal_derivative(hd, self.boundary, self.logs)
        flux = self.boundary.h * normal.sum()
        logger.debug(f"Поток ∮∂φ/∂n ds = {flux:.3e}")
        return replace(hd, weighted_normal_derivative=normal)
