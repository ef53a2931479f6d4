"""
Независимая проверка: интеграл по ячейке вертикальными сечениями.

Для каждой прямой x₁ = s находятся точки пересечения с рёбрами (по исходной
параметризации, brentq), внутренние отрезки интегрируются по Гауссу–Лежандру,
а интеграл по s считается адаптивно (quad_vec) с точками разрыва в
экстремумах x₁ на рёбрах.
"""
import logging
from typing import Callable, List, Tuple

import numpy as np
from scipy.integrate import quad_vec
from scipy.optimize import brentq, minimize_scalar

from .geometry import TWO_PI, ParametricEdge, PuncturedCell, winding_number

logger = logging.getLogger(__name__)

GRID_SIZE = 513
GAUSS_ORDER = 48
POLYGON_SIZE = 2048

Integrand = Callable[[np.ndarray], np.ndarray]


def _x1(edge: ParametricEdge, t: float) -> float:
    return float(edge.evaluate(np.array([t]))[0][0, 0])


def _monotone_pieces(edge: ParametricEdge) -> List[Tuple[ParametricEdge, float, float, float, float]]:
    """
    Разбить параметр ребра на участки монотонности x₁(t).

    Returns:
        Список (edge, t_a, t_b, x₁(t_a), x₁(t_b))
    """
    grid = np.linspace(0.0, TWO_PI, GRID_SIZE)
    x1 = edge.evaluate(grid)[0][:, 0]
    cuts = [0.0]
    for k in range(1, len(grid) - 1):
        is_min = x1[k] < x1[k - 1] and x1[k] <= x1[k + 1]
        is_max = x1[k] > x1[k - 1] and x1[k] >= x1[k + 1]
        if is_min or is_max:
            sign = 1.0 if is_min else -1.0
            found = minimize_scalar(lambda t: sign * _x1(edge, t), bounds=(grid[k - 1], grid[k + 1]),
                                    method="bounded", options={"xatol": 1e-14})
            cuts.append(float(found.x))
    cuts.append(TWO_PI)
    return [(edge, t_a, t_b, _x1(edge, t_a), _x1(edge, t_b)) for t_a, t_b in zip(cuts[:-1], cuts[1:])]


class SliceQuadrature:
    """Квадратура по вертикальным сечениям для фиксированной ячейки."""

    def __init__(self, cell: PuncturedCell, gauss_order: int = GAUSS_ORDER):
        self.cell = cell
        self.nodes, self.weights = np.polynomial.legendre.leggauss(gauss_order)
        self.pieces: List[Tuple[ParametricEdge, float, float, float, float]] = []
        for component in cell.components:
            for edge in component.edges:
                self.pieces.extend(_monotone_pieces(edge))
        polygon_t = np.linspace(0.0, TWO_PI, POLYGON_SIZE, endpoint=False)
        self.polygons = [
            np.concatenate([edge.evaluate(polygon_t)[0] for edge in component.edges])
            for component in cell.components
        ]

    def x1_range(self) -> Tuple[float, float]:
        values = [x for piece in self.pieces for x in piece[3:]]
        return float(min(values)), float(max(values))

    def breakpoints(self) -> List[float]:
        """Значения x₁ в вершинах и экстремумах x₁(t) на рёбрах."""
        low, high = self.x1_range()
        values = {round(x, 13) for piece in self.pieces for x in piece[3:]}
        return sorted(x for x in values if low < x < high)

    def crossings(self, s: float) -> np.ndarray:
        """Упорядоченные значения x₂ пересечений прямой x₁ = s с границей."""
        ys = []
        for edge, t_a, t_b, x_a, x_b in self.pieces:
            if min(x_a, x_b) < s < max(x_a, x_b):
                root = brentq(lambda t: _x1(edge, t) - s, t_a, t_b, xtol=1e-15)
                ys.append(edge.evaluate(np.array([root]))[0][0, 1])
        return np.unique(np.round(np.array(ys), 14))

    def inside(self, points: np.ndarray) -> np.ndarray:
        total = sum(winding_number(polygon, points) for polygon in self.polygons)
        return total == 1

    def slice_integral(self, s: float, integrand: Integrand, count: int) -> np.ndarray:
        """∫ f(s, x₂) dx₂ по внутренним отрезкам сечения; результат длины count."""
        total = np.zeros(count)
        ys = self.crossings(s)
        if len(ys) < 2:
            return total
        mids = 0.5 * (ys[:-1] + ys[1:])
        keep = self.inside(np.column_stack([np.full(len(mids), s), mids]))
        for low, high in zip(ys[:-1][keep], ys[1:][keep]):
            half = 0.5 * (high - low)
            y = 0.5 * (high + low) + half * self.nodes
            values = np.atleast_2d(integrand(np.column_stack([np.full(len(y), s), y])))
            total += half * (values @ self.weights)
        return total

    def integrate(self, integrand: Integrand, epsabs: float = 1e-13, epsrel: float = 1e-12) -> np.ndarray:
        """
        ∫_K f dx для функции(й) f.

        Args:
            integrand: функция точек (k, 2) → массив (k,) или (q, k)

        Returns:
            Массив длины q (q = 1 для скалярной функции)
        """
        low, high = self.x1_range()
        sample = self.polygons[0][1:2]
        count = np.atleast_2d(integrand(sample)).shape[0]
        result, error = quad_vec(lambda s: self.slice_integral(s, integrand, count), low, high,
                                 epsabs=epsabs, epsrel=epsrel, points=self.breakpoints() or None)
        logger.debug(f"Оракул для {self.cell.name}: оценка ошибки {error:.3e}")
        return np.atleast_1d(result)


def integrate_over_cell(cell: PuncturedCell, integrand: Integrand, **kwargs) -> np.ndarray:
    """Интеграл функции(й) по ячейке вертикальными сечениями."""
    return SliceQuadrature(cell).integrate(integrand, **kwargs)


def oracle_products(cell: PuncturedCell, v, w, **kwargs) -> Tuple[float, float]:
    """
    Скалярные произведения (H¹, L²) прямым интегрированием по ячейке.

    Args:
        cell: ячейка
        v, w: объекты с методами evaluate(points) и gradient(points)
    """
    def integrand(points):
        grad_v, grad_w = v.gradient(points), w.gradient(points)
        return np.vstack([(grad_v * grad_w).sum(axis=1), v.evaluate(points) * w.evaluate(points)])

    h1, l2 = integrate_over_cell(cell, integrand, **kwargs)
    return float(h1), float(l2)
