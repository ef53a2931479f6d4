"""
Значения v и ∇v внутри ячейки по интегральной формуле Коши для f = ψ + iψ̂.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParameterError
from .geometry import SampledBoundary, min_distance_to_boundary, winding_number
from .harmonic import LogFamily
from .inner_products import PreparedFunction

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi
DEFAULT_EPSILON = 0.02
CHUNK_SIZE = 512


@dataclass(frozen=True, eq=False)
class InteriorQuery:
    """Точки вычисления, радиус исключения ε и подготовленная функция."""
    points: np.ndarray
    prepared: PreparedFunction
    epsilon: float = DEFAULT_EPSILON
    normalize: bool = True

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if points.ndim != 2 or points.shape[1] != 2:
            raise InvalidParameterError(f"Точки должны иметь форму (k, 2), получено {points.shape}")
        if self.epsilon <= 0:
            raise InvalidParameterError(f"ε должно быть положительным, получено {self.epsilon}")
        object.__setattr__(self, "points", points)


@dataclass(frozen=True, eq=False)
class InteriorValues:
    """
    Результат вычисления во внутренних точках. Для пропущенных точек и точек
    вне ячейки значения равны NaN.
    """
    points: np.ndarray
    values: np.ndarray
    gradients: np.ndarray
    skipped: np.ndarray
    in_domain: np.ndarray

    @property
    def evaluated(self) -> np.ndarray:
        return self.in_domain & ~self.skipped


def winding_numbers(sb: SampledBoundary, points) -> np.ndarray:
    """
    Числа оборотов каждой компоненты границы вокруг точек.

    Returns:
        Массив формы (k, число компонент)
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return np.column_stack([winding_number(sb.component_points(k), points)
                            for k in range(len(sb.component_slices))])


def classify_points(sb: SampledBoundary, points) -> np.ndarray:
    """Точка лежит в K, если суммарное число оборотов ориентированной границы равно 1."""
    return winding_numbers(sb, points).sum(axis=1) == 1


def cauchy_eval(query: InteriorQuery) -> InteriorValues:
    """
    Вычислить v = ψ + P + Σ a_j λ_j и ∇v во внутренних точках.

    ψ и ψ' берутся из формулы Коши по правилу трапеций на узлах границы.
    При normalize=True сумма делится на дискретный интеграл Σ dζ/(ζ − z)
    вместо 2πi.

    Args:
        query: точки и подготовленная функция

    Returns:
        InteriorValues
    """
    prepared = query.prepared
    sb = prepared.boundary
    points = query.points
    count = len(points)

    in_domain = classify_points(sb, points)
    distance = min_distance_to_boundary(sb, points)
    skipped = in_domain & (distance < query.epsilon)
    active = np.flatnonzero(in_domain & ~skipped)

    values = np.full(count, np.nan)
    gradients = np.full((count, 2), np.nan)
    nodes = sb.complex_points
    dzeta = sb.complex_velocity * sb.h
    f = prepared.harmonic.psi + 1j * prepared.harmonic.psi_hat

    for start in range(0, len(active), CHUNK_SIZE):
        index = active[start:start + CHUNK_SIZE]
        z = points[index, 0] + 1j * points[index, 1]
        offsets = nodes[None, :] - z[:, None]
        kernel = dzeta[None, :] / offsets
        if query.normalize:
            denominator = kernel.sum(axis=1)
            fz = kernel @ f / denominator
            fprime = ((f[None, :] - fz[:, None]) * kernel / offsets).sum(axis=1) / denominator
        else:
            fz = kernel @ f / TWO_PI_I
            fprime = (kernel / offsets) @ f / TWO_PI_I
        values[index] = fz.real
        gradients[index, 0] = fprime.real
        gradients[index, 1] = -fprime.imag

    if len(active):
        chosen = points[active]
        logs = LogFamily.at_points(sb.anchors, chosen)
        a = prepared.log_coefficients
        values[active] += prepared.poly_part.evaluate(chosen) + logs.log_values(a)
        gradients[active] += prepared.poly_part.gradient_at(chosen) + logs.log_gradients(a)

    logger.info(
        f"Внутренние значения: {len(active)} точек вычислено, {int(skipped.sum())} пропущено, "
        f"{int((~in_domain).sum())} вне ячейки"
    )
    return InteriorValues(points=points, values=values, gradients=gradients,
                          skipped=skipped, in_domain=in_domain)


def grid_points(sb: SampledBoundary, resolution: int, margin: Optional[float] = None) -> np.ndarray:
    """
    Равномерная сетка resolution × resolution по габаритному прямоугольнику границы.

    Args:
        sb: дискретизированная граница
        resolution: число точек по каждой оси
        margin: отступ внутрь прямоугольника (по умолчанию половина шага)
    """
    if resolution < 2:
        raise InvalidParameterError(f"Разрешение сетки должно быть >= 2, получено {resolution}")
    low = sb.points.min(axis=0)
    high = sb.points.max(axis=0)
    if margin is None:
        margin = 0.5 * (high - low).max() / resolution
    x1 = np.linspace(low[0] + margin, high[0] - margin, resolution)
    x2 = np.linspace(low[1] + margin, high[1] - margin, resolution)
    grid_x1, grid_x2 = np.meshgrid(x1, x2)
    return np.column_stack([grid_x1.ravel(), grid_x2.ravel()])
