"""
Встроенные тестовые ячейки и функции с эталонными значениями скалярных
произведений, а также метрики ошибок промежуточных величин.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import InvalidParameterError
from .expressions import ExpTerm, LogTerm, PolynomialTerm, PowerSineTerm, RationalTerm, TraceExpression
from .geometry import BoundaryComponent, Orientation, ParametricEdge, PuncturedCell, SampledBoundary, boundary_integrate
from .polynomials import BivariatePolynomial

logger = logging.getLogger(__name__)

PUNCTURED_SQUARE = "punctured-square"
PACMAN = "pacman"
GHOST = "ghost"
BENCHMARK_NAMES = (PUNCTURED_SQUARE, PACMAN, GHOST)

SQUARE_HOLE_CENTER = (0.5, 0.5)
SQUARE_HOLE_RADIUS = 0.25
PACMAN_MOUTH_ANGLE = np.pi / 6
PACMAN_HOLE_CENTER = (-0.1, 0.5)
PACMAN_HOLE_RADIUS = 0.25
GHOST_LEFT_EYE = (0.25, 0.7)
GHOST_RIGHT_EYE = (0.75, 0.7)
GHOST_EYE_AXES = (0.15, 0.2)


def punctured_square_cell(radius: float = SQUARE_HOLE_RADIUS) -> PuncturedCell:
    """Единичный квадрат с круглой дырой радиуса radius в центре."""
    corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    edges = tuple(ParametricEdge.line(corners[k], corners[(k + 1) % 4]) for k in range(4))
    hole = BoundaryComponent((ParametricEdge.closed_circle(SQUARE_HOLE_CENTER, radius, clockwise=True),),
                             Orientation.CLOCKWISE)
    return PuncturedCell(PUNCTURED_SQUARE, BoundaryComponent(edges), (hole,), anchors=(SQUARE_HOLE_CENTER,))


def pacman_cell() -> PuncturedCell:
    """Единичный круг без сектора |θ| < π/6 с круглой дырой."""
    theta0 = PACMAN_MOUTH_ANGLE
    upper = (np.cos(theta0), np.sin(theta0))
    lower = (np.cos(-theta0), np.sin(-theta0))
    outer = BoundaryComponent((
        ParametricEdge.line((0.0, 0.0), upper),
        ParametricEdge.circular_arc((0.0, 0.0), 1.0, theta0, 2.0 * np.pi - theta0),
        ParametricEdge.line(lower, (0.0, 0.0)),
    ))
    hole = BoundaryComponent((ParametricEdge.closed_circle(PACMAN_HOLE_CENTER, PACMAN_HOLE_RADIUS, clockwise=True),),
                             Orientation.CLOCKWISE)
    return PuncturedCell(PACMAN, outer, (hole,), anchors=(PACMAN_HOLE_CENTER,))


def ghost_cell() -> PuncturedCell:
    """
    Ячейка с синусоидальным низом, полукруглым верхом и двумя эллиптическими дырами.

    Стенки примыкают к дуге по касательной, но кривизна на стыках разрывна,
    поэтому все концы рёбер внешней компоненты сгущаются.
    """
    outer = BoundaryComponent((
        ParametricEdge.sine_perturbed_line((0.0, 0.0), (1.0, 0.0), 0.1, 6.0 * np.pi),
        ParametricEdge.line((1.0, 0.0), (1.0, 0.8)),
        ParametricEdge.circular_arc((0.5, 0.8), 0.5, 0.0, np.pi),
        ParametricEdge.line((0.0, 0.8), (0.0, 0.0)),
    ))
    holes = tuple(
        BoundaryComponent((ParametricEdge.closed_ellipse(center, GHOST_EYE_AXES, clockwise=True),),
                          Orientation.CLOCKWISE)
        for center in (GHOST_LEFT_EYE, GHOST_RIGHT_EYE)
    )
    return PuncturedCell(GHOST, outer, holes, anchors=(GHOST_LEFT_EYE, GHOST_RIGHT_EYE))


def _poly(*terms) -> PolynomialTerm:
    return PolynomialTerm(BivariatePolynomial.from_terms(terms))


@dataclass(frozen=True)
class ExactIntermediates:
    """
    Точные промежуточные величины для гармонической части φ функции v.
    Все функции принимают точки формы (k, 2).
    """
    log_coefficients: Tuple[float, ...]
    psi_hat: Callable[[np.ndarray], np.ndarray]
    harmonic_gradient: Callable[[np.ndarray], np.ndarray]
    anti_laplacian: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Benchmark:
    name: str
    cell: PuncturedCell
    v: TraceExpression
    w: TraceExpression
    h1_reference: float
    l2_reference: float
    exact: Optional[ExactIntermediates] = None


def _example_one_exact() -> ExactIntermediates:
    center = np.asarray(SQUARE_HOLE_CENTER)

    def psi_hat(points):
        p = np.atleast_2d(points)
        return np.exp(p[:, 0]) * np.sin(p[:, 1])

    def gradient(points):
        p = np.atleast_2d(points)
        d = p - center
        r2 = (d ** 2).sum(axis=1)
        e = np.exp(p[:, 0])
        return np.column_stack([e * np.cos(p[:, 1]) + d[:, 0] / r2, -e * np.sin(p[:, 1]) + d[:, 1] / r2])

    def anti_laplacian(points):
        p = np.atleast_2d(points)
        d = p - center
        r2 = (d ** 2).sum(axis=1)
        e = np.exp(p[:, 0])
        return (0.25 * e * (p[:, 0] * np.cos(p[:, 1]) + p[:, 1] * np.sin(p[:, 1]))
                + 0.25 * r2 * (0.5 * np.log(r2) - 1.0))

    return ExactIntermediates((1.0,), psi_hat, gradient, anti_laplacian)


def punctured_square_benchmark() -> Benchmark:
    v = TraceExpression((ExpTerm(1.0, "cos"), LogTerm(SQUARE_HOLE_CENTER), _poly((3, 1, 1.0), (1, 3, 1.0))))
    w = TraceExpression((RationalTerm(SQUARE_HOLE_CENTER, 1), _poly((3, 0, 1.0), (1, 2, 1.0))))
    return Benchmark(PUNCTURED_SQUARE, punctured_square_cell(), v, w,
                     h1_reference=4.46481780319135, l2_reference=1.39484950156676,
                     exact=_example_one_exact())


def pacman_benchmark() -> Benchmark:
    v = TraceExpression((PowerSineTerm((0.0, 0.0), 0.5, 0.0),))
    return Benchmark(PACMAN, pacman_cell(), v, v,
                     h1_reference=1.20953682240855912, l2_reference=0.97793431492143971)


def ghost_benchmark() -> Benchmark:
    v = TraceExpression((RationalTerm(GHOST_LEFT_EYE, 1), _poly((3, 1, 1.0), (0, 2, 1.0))))
    w = TraceExpression((LogTerm(GHOST_RIGHT_EYE, 2.0), _poly((2, 2, 1.0), (1, 3, -1.0))))
    return Benchmark(GHOST, ghost_cell(), v, w,
                     h1_reference=-6.311053612386, l2_reference=-3.277578636852)


BENCHMARKS: Dict[str, Callable[[], Benchmark]] = {
    PUNCTURED_SQUARE: punctured_square_benchmark,
    PACMAN: pacman_benchmark,
    GHOST: ghost_benchmark,
}


def get_benchmark(name: str) -> Benchmark:
    """
    Встроенный тест по имени.

    Raises:
        InvalidParameterError: неизвестное имя
    """
    try:
        factory = BENCHMARKS[name]
    except KeyError as e:
        error_msg = f"Неизвестная ячейка {name}, доступны: {', '.join(BENCHMARK_NAMES)}"
        logger.error(error_msg)
        raise InvalidParameterError(error_msg) from e
    return factory()


def l2_boundary_norm(sb: SampledBoundary, values) -> float:
    """√(∮ f² ds)."""
    values = np.asarray(values, dtype=float)
    return float(np.sqrt(boundary_integrate(sb, values ** 2)))


def constant_aligned_error(sb: SampledBoundary, exact, computed) -> float:
    """L²(∂K)-ошибка после сдвига на константу, минимизирующую норму."""
    difference = np.asarray(exact, dtype=float) - np.asarray(computed, dtype=float)
    shift = -boundary_integrate(sb, difference) / sb.perimeter
    return l2_boundary_norm(sb, difference + shift)


def linear_aligned_error(sb: SampledBoundary, exact, computed) -> float:
    """L²(∂K)-ошибка после вычитания наилучшей функции c₁x₁ + c₂x₂."""
    difference = np.asarray(exact, dtype=float) - np.asarray(computed, dtype=float)
    root_weights = np.sqrt(sb.weights)
    design = sb.points * root_weights[:, None]
    coefficients, *_ = np.linalg.lstsq(design, -difference * root_weights, rcond=None)
    return l2_boundary_norm(sb, difference + sb.points @ coefficients)


def weighted_trace_error(sb: SampledBoundary, exact, computed) -> float:
    """
    √(h Σ (f_i − g_i)²) для величин во взвешенной форме (домноженных на |x'|).
    В угловых узлах обе величины равны нулю.
    """
    difference = np.asarray(exact, dtype=float) - np.asarray(computed, dtype=float)
    return float(np.sqrt(sb.h * (difference ** 2).sum()))
