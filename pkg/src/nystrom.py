"""
Дискретизация Нистрёма граничных интегральных операторов Лапласа.

Оператор двойного слоя с ранговой поправкой (условие нулевого среднего),
матрица простого слоя с квадратурой Кресса для логарифмической особенности
и плотное решение систем (LU или GMRES).
"""
import logging
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.sparse.linalg import gmres

from .errors import InvalidParameterError, SolverError
from .geometry import SampledBoundary

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
DIRECT_RESIDUAL_BOUND = 1e-12
MAX_RESTART = 200
SOLVERS = ("lu", "iterative")


class LayerKernels:
    """Фундаментальное решение G(x, y) = −(2π)⁻¹ ln|x−y| и его нормальная производная по y."""

    @staticmethod
    def fundamental_solution(x, y) -> np.ndarray:
        diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
        return -np.log(np.linalg.norm(diff, axis=-1)) / TWO_PI

    @staticmethod
    def double_layer(x, y, normal_y) -> np.ndarray:
        """∂G(x, y)/∂n(y) = (2π)⁻¹ (x−y)·n_y / |x−y|²."""
        diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
        return (diff * normal_y).sum(axis=-1) / (diff ** 2).sum(axis=-1) / TWO_PI

    @staticmethod
    def double_layer_matrix(sb: SampledBoundary) -> np.ndarray:
        """
        Ядро двойного слоя K_ij = ∂G(x_i, x_j)/∂n(x_j) без весов квадратуры.

        На диагонали стоит предел по кривизне (x''·ν)/(4π|x'|³); в угловых
        узлах, где |x'| = 0, ядро доопределяется нулём.
        """
        points = sb.points
        diff = points[:, None, :] - points[None, :, :]
        r2 = (diff ** 2).sum(axis=2)
        np.fill_diagonal(r2, 1.0)
        kernel = (diff * sb.unit_normal[None, :, :]).sum(axis=2) / r2 / TWO_PI

        speed = sb.speed
        smooth = ~sb.corner_mask
        diagonal = np.zeros(sb.num_points)
        curvature = (sb.acceleration * sb.weighted_normal).sum(axis=1)
        diagonal[smooth] = curvature[smooth] / (2.0 * TWO_PI * speed[smooth] ** 3)
        np.fill_diagonal(kernel, diagonal)
        return kernel


def build_dlp_operator(sb: SampledBoundary, mean_constraint: bool = True) -> np.ndarray:
    """
    Матрица оператора u ↦ ½u(x_i) + ∮ (∂G/∂n(y) + 1) u(y) dS(y).

    Каждая строка записывается в виде Σ_j K_ij w_j (u_j − u_i), что совпадает
    с ½u_i + Σ_j K_ij w_j u_j, так как ½ + ∮ ∂G/∂n dS = 0 на границе.

    Args:
        sb: дискретизированная граница
        mean_constraint: добавлять ли ранговую поправку +1

    Returns:
        Матрица N×N
    """
    matrix = LayerKernels.double_layer_matrix(sb) * sb.weights[None, :]
    np.fill_diagonal(matrix, 0.0)
    np.fill_diagonal(matrix, -matrix.sum(axis=1))

    if mean_constraint:
        matrix += sb.weights[None, :]
    return matrix


def _log_quadrature_weights(size: int) -> np.ndarray:
    """Веса R_k спектральной квадратуры для ln(4 sin²((t−τ)/2)) на size узлах."""
    half = size // 2
    k = np.arange(size)
    modes = np.arange(1, half)
    cosines = np.cos(np.outer(modes, TWO_PI * k / size)) / modes[:, None]
    return -(TWO_PI / half) * cosines.sum(axis=0) - (np.pi / half ** 2) * (-1.0) ** k


def single_layer_matrix(sb: SampledBoundary) -> np.ndarray:
    """
    Матрица S с (S g)_i ≈ ∮ G(x_i, y) f(y) dS(y), где g = f|x'| — взвешенная плотность.

    На блоках одной компоненты ядро раскладывается на ln(4 sin²) с весами Кресса
    и гладкий остаток; блоки разных компонент интегрируются трапециями.
    """
    points = sb.points
    h = sb.h
    diff = points[:, None, :] - points[None, :, :]
    distance = np.sqrt((diff ** 2).sum(axis=2))
    np.fill_diagonal(distance, 1.0)
    matrix = -(h / TWO_PI) * np.log(distance)

    for sl, num_edges in zip(sb.component_slices, sb.component_edge_counts):
        size = sl.stop - sl.start
        index = np.arange(size)
        lag = np.subtract.outer(index, index)
        weights = _log_quadrature_weights(size)[lag % size]

        block = distance[sl, sl]
        half_chord = 2.0 * np.abs(np.sin(np.pi * lag / size))
        np.fill_diagonal(half_chord, 1.0)
        remainder = np.log(block / half_chord)

        speed = sb.speed[sl]
        diagonal = np.zeros(size)
        smooth = speed > 0
        # T = u/E пробегает [0, 2π) на компоненте, |dx/dT| = E|x'|
        diagonal[smooth] = np.log(num_edges * speed[smooth])
        np.fill_diagonal(remainder, diagonal)

        matrix[sl, sl] = -(0.5 * num_edges * weights + h * remainder) / TWO_PI
    return matrix


def apply_slp(sb: SampledBoundary, density, weighted: bool = False) -> np.ndarray:
    """
    Значения простого слоя ∮ G(x_i, y) f(y) dS(y) в узлах.

    Args:
        sb: дискретизированная граница
        density: f в узлах (или f|x'|, если weighted=True)
        weighted: плотность уже умножена на |x'|
    """
    density = np.asarray(density, dtype=float)
    if density.shape != (sb.num_points,):
        raise InvalidParameterError(f"Ожидалось {sb.num_points} значений плотности, получено {density.shape}")
    if not weighted:
        density = density * sb.speed
    return single_layer_matrix(sb) @ density


def _condition_estimate(matrix: np.ndarray) -> Optional[float]:
    try:
        return float(np.linalg.cond(matrix))
    except np.linalg.LinAlgError:
        return None


class FactorizedOperator:
    """
    Плотная матрица, подготовленная к многократному решению.

    Для решателя lu факторизация выполняется один раз при создании.
    """

    def __init__(self, matrix: np.ndarray, solver: str = "lu", tolerance: float = 1e-12,
                 max_iterations: Optional[int] = None):
        if solver not in SOLVERS:
            raise InvalidParameterError(f"Неизвестный решатель {solver}, ожидается один из {SOLVERS}")
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidParameterError(f"Матрица системы должна быть квадратной, получено {matrix.shape}")
        self.matrix = matrix
        self.solver = solver
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self._norm = float(np.linalg.norm(matrix, ord=np.inf))
        self._lu = self._factorize() if solver == "lu" else None

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def _factorize(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", LinAlgWarning)
            try:
                return lu_factor(self.matrix, check_finite=True)
            except (LinAlgWarning, np.linalg.LinAlgError, ValueError) as e:
                condition = _condition_estimate(self.matrix)
                error_msg = f"Матрица {self.size}×{self.size} вырождена в рабочей точности: {e}"
                logger.error(error_msg)
                raise SolverError(error_msg, condition=condition) from e

    def solve(self, rhs) -> np.ndarray:
        """
        Решить систему с данной правой частью.

        Args:
            rhs: правая часть длины size

        Returns:
            Решение x
        """
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != (self.size,):
            raise InvalidParameterError(f"Правая часть должна иметь длину {self.size}, получено {rhs.shape}")
        if not np.any(rhs):
            return np.zeros(self.size)

        if self._lu is not None:
            with warnings.catch_warnings():
                warnings.simplefilter("error", LinAlgWarning)
                solution = lu_solve(self._lu, rhs)
            residual = np.linalg.norm(self.matrix @ solution - rhs, ord=np.inf)
            bound = DIRECT_RESIDUAL_BOUND * (self._norm * np.linalg.norm(solution, ord=np.inf)
                                             + np.linalg.norm(rhs, ord=np.inf))
        else:
            restart = min(self.size, MAX_RESTART)
            maxiter = self.max_iterations or 10 * self.size
            solution, info = gmres(self.matrix, rhs, rtol=self.tolerance, atol=0.0,
                                   restart=restart, maxiter=maxiter)
            if info != 0:
                condition = _condition_estimate(self.matrix)
                error_msg = f"GMRES не сошёлся за {maxiter} итераций (info={info})"
                logger.error(error_msg)
                raise SolverError(error_msg, condition=condition)
            residual = np.linalg.norm(self.matrix @ solution - rhs)
            bound = 10.0 * self.tolerance * np.linalg.norm(rhs) + np.finfo(float).eps * self._norm

        logger.debug(f"Решение системы {self.size}×{self.size} ({self.solver}): невязка {residual:.3e}")
        if not np.all(np.isfinite(solution)) or residual > bound:
            condition = _condition_estimate(self.matrix)
            error_msg = f"Невязка решения {residual:.3e} превышает допуск {bound:.3e}"
            logger.error(error_msg)
            raise SolverError(error_msg, condition=condition)
        return solution


@dataclass(frozen=True, eq=False)
class DenseSystem:
    """Плотная система A x = b с выбором решателя."""
    matrix: np.ndarray
    rhs: np.ndarray
    solver: str = "lu"
    tolerance: float = 1e-12


def solve_dense(system: DenseSystem) -> np.ndarray:
    """Решить плотную систему прямым или итерационным методом."""
    return FactorizedOperator(system.matrix, system.solver, system.tolerance).solve(system.rhs)


class NystromOperators:
    """
    Операторы Нистрёма одной дискретизированной ячейки.

    Матрица двойного слоя, матрица простого слоя и факторизация двойного
    слоя вычисляются лениво один раз и переиспользуются всеми задачами
    Неймана на этой ячейке.
    """

    def __init__(self, boundary: SampledBoundary, solver: str = "lu", tolerance: float = 1e-12):
        if solver not in SOLVERS:
            raise InvalidParameterError(f"Неизвестный решатель {solver}, ожидается один из {SOLVERS}")
        self.boundary = boundary
        self.solver = solver
        self.tolerance = tolerance

    @cached_property
    def dlp(self) -> np.ndarray:
        return build_dlp_operator(self.boundary)

    @cached_property
    def slp(self) -> np.ndarray:
        return single_layer_matrix(self.boundary)

    @cached_property
    def factorization(self) -> FactorizedOperator:
        logger.debug(f"Факторизация оператора двойного слоя N={self.boundary.num_points}")
        return FactorizedOperator(self.dlp, self.solver, self.tolerance)

    def solve(self, rhs) -> np.ndarray:
        return self.factorization.solve(rhs)

    def solve_neumann(self, weighted_neumann_data) -> np.ndarray:
        """
        След u с ∂u/∂n, заданной во взвешенной форме g = (∂u/∂n)|x'|,
        нормированный условием ∮ u ds = 0.
        """
        rhs = self.slp @ np.asarray(weighted_neumann_data, dtype=float)
        return self.solve(rhs)
