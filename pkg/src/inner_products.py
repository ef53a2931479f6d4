"""
Скалярные произведения H¹ (полускалярное) и L² функций локального
пространства Пуассона, сведённые к квадратурам по границе ячейки.

v = P + φ, где P — полиномиальный анти-лапласиан Δv, а φ гармоническая.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .antilaplacian import AntiLaplacianTrace, anti_laplacian_harmonic
from .errors import CellMismatchError, InvalidParameterError
from .geometry import TWO_PI, SampledBoundary, sample_cell_boundary
from .harmonic import DirichletToNeumannMap, HarmonicDecomposition
from .nystrom import NystromOperators
from .polynomials import (
    BivariatePolynomial,
    anti_laplacian_poly,
    integrate_poly_over_cell,
    weighted_normal_derivative,
)
from .trace_calculus import refine_samples

logger = logging.getLogger(__name__)

CONTINUITY_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class LocalPoissonFunction:
    """
    Функция v ∈ V_p(K), заданная следом в узлах границы и многочленом Δv.

    Если след задан по рёбрам, edge_end_values хранит предел следа на правом
    конце каждого ребра; он должен совпадать со значением в первом узле
    следующего ребра той же компоненты.
    """
    boundary: SampledBoundary
    trace: np.ndarray
    laplacian: BivariatePolynomial
    edge_end_values: Optional[np.ndarray] = None

    def __post_init__(self):
        trace = np.asarray(self.trace, dtype=float)
        if trace.shape != (self.boundary.num_points,):
            raise InvalidParameterError(
                f"След должен иметь {self.boundary.num_points} значений, получено {trace.shape}"
            )
        object.__setattr__(self, "trace", trace)
        if self.edge_end_values is not None:
            end_values = np.asarray(self.edge_end_values, dtype=float)
            if end_values.shape != (len(self.boundary.edge_slices),):
                raise InvalidParameterError(
                    f"Нужно {len(self.boundary.edge_slices)} концевых значений, получено {end_values.shape}"
                )
            object.__setattr__(self, "edge_end_values", end_values)
            self._check_junctions()

    def _check_junctions(self):
        sb = self.boundary
        scale = max(1.0, float(np.max(np.abs(self.trace))))
        first = 0
        for count in sb.component_edge_counts:
            for k in range(count):
                edge = first + k
                following = first + (k + 1) % count
                jump = abs(self.edge_end_values[edge] - self.trace[sb.edge_slices[following].start])
                if jump > CONTINUITY_TOLERANCE * scale:
                    error_msg = f"След разрывен в конце ребра {edge}: скачок {jump:.3e}"
                    logger.error(error_msg)
                    raise InvalidParameterError(error_msg)
            first += count

    @classmethod
    def from_expression(cls, sb: SampledBoundary, expression,
                        laplacian: Optional[BivariatePolynomial] = None) -> "LocalPoissonFunction":
        """
        Построить функцию по выражению (см. expressions.TraceExpression).

        Args:
            sb: дискретизированная граница
            expression: объект с методами evaluate(points) и laplacian()
            laplacian: явный Δv; по умолчанию берётся из выражения
        """
        if laplacian is None:
            laplacian = expression.laplacian()
        return cls(sb, expression.evaluate(sb.points), laplacian)

    @classmethod
    def from_edge_traces(cls, sb: SampledBoundary, edge_traces: Sequence[Callable[[np.ndarray], np.ndarray]],
                         laplacian: BivariatePolynomial) -> "LocalPoissonFunction":
        """
        Построить функцию по следам, заданным отдельно на каждом ребре.

        Args:
            sb: дискретизированная граница
            edge_traces: по функции точек (k, 2) → (k,) на ребро, в порядке обхода
            laplacian: Δv

        Raises:
            InvalidParameterError: число функций не равно числу рёбер или след разрывен в углу
        """
        edges = [edge for component in sb.cell.components for edge in component.edges]
        if len(edge_traces) != len(edges):
            raise InvalidParameterError(f"Нужно {len(edges)} следов рёбер, получено {len(edge_traces)}")
        trace = np.empty(sb.num_points)
        end_values = np.empty(len(edges))
        for k, (edge, edge_trace, sl) in enumerate(zip(edges, edge_traces, sb.edge_slices)):
            trace[sl] = edge_trace(sb.points[sl])
            end_values[k] = np.asarray(edge_trace(edge.evaluate(np.array([TWO_PI]))[0])).reshape(-1)[0]
        return cls(sb, trace, laplacian, end_values)


@dataclass(frozen=True, eq=False)
class PreparedFunction:
    """Все граничные данные функции, нужные для скалярных произведений."""
    boundary: SampledBoundary
    trace: np.ndarray
    poly_part: BivariatePolynomial
    poly_values: np.ndarray
    poly_normal_derivative: np.ndarray
    harmonic: HarmonicDecomposition
    anti_laplacian: AntiLaplacianTrace

    @property
    def log_coefficients(self) -> np.ndarray:
        return self.harmonic.log_coefficients


def make_dtn_map(sb: SampledBoundary, solver: str = "lu", tolerance: float = 1e-12) -> DirichletToNeumannMap:
    """Отображение Дирихле–Нейман с общими операторами Нистрёма ячейки."""
    return DirichletToNeumannMap(NystromOperators(sb, solver, tolerance))


def prepare(v: LocalPoissonFunction, dtn: Optional[DirichletToNeumannMap] = None,
            method: str = "auto", poly_part: Optional[BivariatePolynomial] = None) -> PreparedFunction:
    """
    Подготовить функцию: P = анти-лапласиан Δv, φ = v − P, разложение φ
    и анти-лапласиан φ.

    Args:
        v: функция локального пространства
        dtn: общее для ячейки отображение Дирихле–Нейман (создаётся при None)
        method: способ построения анти-лапласиана (auto, neumann, fft)
        poly_part: явный P с ΔP = Δv вместо формульного

    Returns:
        PreparedFunction
    """
    sb = v.boundary
    if dtn is None:
        dtn = make_dtn_map(sb)
    elif dtn.boundary is not sb:
        raise CellMismatchError("Отображение Дирихле–Нейман построено для другой дискретизации")

    if poly_part is None:
        poly_part = anti_laplacian_poly(v.laplacian)
    elif not poly_part.laplacian().almost_equal(v.laplacian, tol=1e-10):
        raise InvalidParameterError("Заданный P не является анти-лапласианом Δv")

    poly_values = poly_part.evaluate(sb.points)
    harmonic = dtn.decompose(v.trace - poly_values)
    anti = anti_laplacian_harmonic(dtn.operators, harmonic, dtn.logs, method=method)
    return PreparedFunction(
        boundary=sb,
        trace=v.trace,
        poly_part=poly_part,
        poly_values=poly_values,
        poly_normal_derivative=weighted_normal_derivative(poly_part, sb),
        harmonic=harmonic,
        anti_laplacian=anti,
    )


def _same_boundary(vp: PreparedFunction, wp: PreparedFunction) -> SampledBoundary:
    if vp.boundary is not wp.boundary:
        a, b = vp.boundary, wp.boundary
        same = (a.num_points == b.num_points and a.n == b.n and a.sigma == b.sigma
                and np.array_equal(a.points, b.points))
        if not same:
            error_msg = f"Функции подготовлены на разных дискретизациях ({a.cell.name}, {b.cell.name})"
            logger.error(error_msg)
            raise CellMismatchError(error_msg)
    return vp.boundary


def h1_semi(vp: PreparedFunction, wp: PreparedFunction) -> float:
    """
    ∫_K ∇v·∇w dx = ∮ w ∂φ/∂n ds + ∮ P ∂ψ/∂n ds + ∫_K ∇P·∇Q dx.

    Args:
        vp, wp: подготовленные функции на одной границе

    Returns:
        Значение полускалярного произведения
    """
    sb = _same_boundary(vp, wp)
    boundary_terms = sb.h * (
        wp.trace @ vp.harmonic.weighted_normal_derivative
        + vp.poly_values @ wp.harmonic.weighted_normal_derivative
    )
    p_x, p_y = vp.poly_part.gradient()
    q_x, q_y = wp.poly_part.gradient()
    volume_term = integrate_poly_over_cell(p_x * q_x + p_y * q_y, sb)
    return float(boundary_terms + volume_term)


def _harmonic_times_poly(sb: SampledBoundary, poly: BivariatePolynomial,
                         harmonic: HarmonicDecomposition) -> float:
    """∫_K η q dx = ∮ [η ∂R/∂n − R ∂η/∂n] ds, R — анти-лапласиан q."""
    if poly.is_zero:
        return 0.0
    anti = anti_laplacian_poly(poly)
    return float(sb.h * (
        harmonic.trace @ weighted_normal_derivative(anti, sb)
        - anti.evaluate(sb.points) @ harmonic.weighted_normal_derivative
    ))


def l2(vp: PreparedFunction, wp: PreparedFunction) -> float:
    """
    ∫_K v w dx = ∫φψ + ∫Qφ + ∫Pψ + ∫PQ, каждое слагаемое по границе.

    Args:
        vp, wp: подготовленные функции на одной границе

    Returns:
        Значение скалярного произведения L²
    """
    sb = _same_boundary(vp, wp)
    anti = vp.anti_laplacian
    harmonic_term = sb.h * (
        wp.harmonic.trace @ anti.weighted_normal_derivative
        - anti.values @ wp.harmonic.weighted_normal_derivative
    )
    mixed = _harmonic_times_poly(sb, wp.poly_part, vp.harmonic) + _harmonic_times_poly(sb, vp.poly_part, wp.harmonic)
    poly_term = integrate_poly_over_cell(vp.poly_part * wp.poly_part, sb)
    return float(harmonic_term + mixed + poly_term)


def gram_matrices(prepared: Sequence[PreparedFunction]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Матрицы Грама H¹ и L² для набора подготовленных функций.

    Returns:
        (H, L) — симметричные матрицы размера len(prepared)
    """
    count = len(prepared)
    stiffness = np.zeros((count, count))
    mass = np.zeros((count, count))
    for i in range(count):
        for j in range(i, count):
            stiffness[i, j] = stiffness[j, i] = h1_semi(prepared[i], prepared[j])
            mass[i, j] = mass[j, i] = l2(prepared[i], prepared[j])
    return stiffness, mass


def refine(prepared: PreparedFunction, m: int,
           boundary: Optional[SampledBoundary] = None) -> PreparedFunction:
    """
    Перенести граничные данные на дискретизацию с n·2^m тригонометрической
    интерполяцией. Полиномиальные величины пересчитываются точно.

    Args:
        prepared: подготовленная функция
        m: показатель измельчения
        boundary: уже построенная мелкая дискретизация (общая для нескольких функций)
    """
    if m == 0:
        return prepared
    sb = prepared.boundary
    if boundary is None:
        boundary = sample_cell_boundary(sb.cell, sb.n << m, sb.sigma, anchors=sb.anchors)
    elif boundary.n != sb.n << m:
        raise CellMismatchError(f"Ожидалась дискретизация с n={sb.n << m}, получено n={boundary.n}")

    def fine(values: np.ndarray) -> np.ndarray:
        return refine_samples(sb, values, m)

    hd = prepared.harmonic
    harmonic = HarmonicDecomposition(
        trace=fine(hd.trace),
        psi=fine(hd.psi),
        psi_hat=fine(hd.psi_hat),
        log_coefficients=hd.log_coefficients,
        weighted_tangential_derivative=fine(hd.weighted_tangential_derivative),
        weighted_normal_derivative=fine(hd.weighted_normal_derivative),
    )
    anti = prepared.anti_laplacian
    anti_fine = AntiLaplacianTrace(
        values=fine(anti.values),
        weighted_normal_derivative=fine(anti.weighted_normal_derivative),
        rho=fine(anti.rho),
        rho_hat=fine(anti.rho_hat),
        coefficients=anti.coefficients,
        method=anti.method,
    )
    poly_values = prepared.poly_part.evaluate(boundary.points)
    return PreparedFunction(
        boundary=boundary,
        trace=harmonic.trace + poly_values,
        poly_part=prepared.poly_part,
        poly_values=poly_values,
        poly_normal_derivative=weighted_normal_derivative(prepared.poly_part, boundary),
        harmonic=harmonic,
        anti_laplacian=anti_fine,
    )


def prepare_functions(sb: SampledBoundary, functions: List[LocalPoissonFunction], solver: str = "lu",
                      tolerance: float = 1e-12, method: str = "auto") -> List[PreparedFunction]:
    """Подготовить несколько функций на одной ячейке с общей факторизацией."""
    dtn = make_dtn_map(sb, solver, tolerance)
    return [prepare(v, dtn, method=method) for v in functions]
