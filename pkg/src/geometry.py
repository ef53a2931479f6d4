"""
Геометрия ячеек: параметрические рёбра, компоненты границы, ячейки с дырами,
репараметризация Кресса и дискретизация границы по правилу трапеций.

Каждое ребро параметризуется на [0, 2π]. Рёбра, примыкающие к углу, получают
отображение Кресса, у которого производная обращается в ноль порядка σ−1 на
угловом конце: узлы сгущаются к углу, а взвешенные величины (x'·|x'|)
остаются гладкими периодическими функциями.
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import GeometryError, InvalidParameterError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
DEFAULT_SIGMA = 7.0
CLOSURE_TOLERANCE = 1e-12
MIN_SPEED = 1e-12
CUSP_TOLERANCE = 1e-12


class EdgeKind(str, Enum):
    LINE = "line"
    CIRCULAR_ARC = "circular_arc"
    ELLIPSE_ARC = "ellipse_arc"
    SINE_PERTURBED_LINE = "sine_perturbed_line"
    CLOSED_CIRCLE = "closed_circle"
    CLOSED_ELLIPSE = "closed_ellipse"


class Orientation(str, Enum):
    COUNTERCLOCKWISE = "counterclockwise"
    CLOCKWISE = "clockwise"


CLOSED_KINDS = frozenset({EdgeKind.CLOSED_CIRCLE, EdgeKind.CLOSED_ELLIPSE})

REQUIRED_PARAMS: Dict[EdgeKind, Tuple[str, ...]] = {
    EdgeKind.LINE: ("start", "end"),
    EdgeKind.CIRCULAR_ARC: ("center", "radius", "start_angle", "end_angle"),
    EdgeKind.ELLIPSE_ARC: ("center", "semi_axes", "start_angle", "end_angle"),
    EdgeKind.SINE_PERTURBED_LINE: ("start", "end", "amplitude", "frequency"),
    EdgeKind.CLOSED_CIRCLE: ("center", "radius"),
    EdgeKind.CLOSED_ELLIPSE: ("center", "semi_axes"),
}


def kress_derivatives(u, sigma: float = DEFAULT_SIGMA) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Вычислить отображение Кресса τ(u) и его первые две производные.

    Используется кубический вариант вспомогательной функции
    c(u) = (1/2 − 1/σ)s³ + s/σ + 1/2, s = u/π − 1, при котором
    τ(0) = 0, τ(π) = π, τ(2π) = 2π для любого σ ≥ 2.

    Args:
        u: параметр(ы) в [0, 2π]
        sigma: параметр Кресса (σ ≥ 2)

    Returns:
        Кортеж (τ, τ', τ'') массивов той же формы, что и u
    """
    if sigma < 2:
        error_msg = f"Параметр Кресса должен быть >= 2, получено {sigma}"
        logger.error(error_msg)
        raise InvalidParameterError(error_msg)

    u = np.asarray(u, dtype=float)
    s = u / np.pi - 1.0
    cubic = 0.5 - 1.0 / sigma
    c = np.clip(cubic * s ** 3 + s / sigma + 0.5, 0.0, 1.0)
    dc = (3.0 * cubic * s ** 2 + 1.0 / sigma) / np.pi
    ddc = 6.0 * cubic * s / np.pi ** 2

    left = c ** sigma
    right = (1.0 - c) ** sigma
    denom = left + right
    tau = TWO_PI * left / denom

    # dτ/dc = 2πσ q / D², q = c^{σ−1}(1−c)^{σ−1}
    q = c ** (sigma - 1.0) * (1.0 - c) ** (sigma - 1.0)
    dq = (sigma - 1.0) * c ** (sigma - 2.0) * (1.0 - c) ** (sigma - 2.0) * (1.0 - 2.0 * c)
    ddenom = sigma * (c ** (sigma - 1.0) - (1.0 - c) ** (sigma - 1.0))
    dtau_dc = TWO_PI * sigma * q / denom ** 2
    d2tau_dc2 = TWO_PI * sigma * (dq / denom ** 2 - 2.0 * q * ddenom / denom ** 3)

    dtau = dtau_dc * dc
    ddtau = d2tau_dc2 * dc ** 2 + dtau_dc * ddc
    return tau, dtau, ddtau


def kress_tau(u, sigma: float = DEFAULT_SIGMA):
    """
    Репараметризация Кресса τ(u).

    Args:
        u: параметр(ы) в [0, 2π]
        sigma: параметр Кресса (σ ≥ 2)

    Returns:
        τ(u): float для скалярного u, иначе массив
    """
    tau, _, _ = kress_derivatives(u, sigma)
    if np.ndim(u) == 0:
        return float(tau)
    return tau


def _rotation(angle: float) -> np.ndarray:
    cos_a, sin_a = np.cos(angle), np.sin(angle)
    return np.array([[cos_a, -sin_a], [sin_a, cos_a]])


def _point(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise GeometryError(f"Параметр {name} должен быть точкой (x1, x2), получено {value}")
    return arr


@dataclass(frozen=True, eq=False)
class ParametricEdge:
    """
    Ребро границы с параметром t ∈ [0, 2π].

    Параметры формы хранятся в словаре params; набор ключей зависит от kind
    (см. REQUIRED_PARAMS). Флаги corner_left/corner_right включают отображение
    Кресса на соответствующем конце.
    """
    kind: EdgeKind
    params: Dict[str, Any] = field(default_factory=dict)
    corner_left: bool = False
    corner_right: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", EdgeKind(self.kind))
        missing = [key for key in REQUIRED_PARAMS[self.kind] if key not in self.params]
        if missing:
            raise GeometryError(f"Ребру {self.kind.value} не хватает параметров: {', '.join(missing)}")
        if self.is_closed_contour and (self.corner_left or self.corner_right):
            raise GeometryError("Замкнутый контур не может иметь угловых концов")

        params = dict(self.params)
        for key in ("start", "end", "center"):
            if key in params:
                params[key] = _point(params[key], key)
        if "radius" in params and not float(params["radius"]) > 0:
            raise GeometryError(f"Радиус должен быть положительным, получено {params['radius']}")
        if "semi_axes" in params:
            axes = np.asarray(params["semi_axes"], dtype=float)
            if axes.shape != (2,) or np.any(axes <= 0):
                raise GeometryError(f"Полуоси должны быть двумя положительными числами, получено {params['semi_axes']}")
            params["semi_axes"] = axes
        params.setdefault("rotation", 0.0)
        params.setdefault("clockwise", False)
        object.__setattr__(self, "params", params)

        speed = np.linalg.norm(self.evaluate(np.linspace(0.0, TWO_PI, 65))[1], axis=1)
        if speed.min() < MIN_SPEED:
            raise GeometryError(f"Вырожденное ребро {self.kind.value}: |x'(t)| обращается в ноль")

    # --- constructors -------------------------------------------------

    @classmethod
    def line(cls, start, end, corners: Tuple[bool, bool] = (True, True)) -> "ParametricEdge":
        return cls(EdgeKind.LINE, {"start": start, "end": end}, *corners)

    @classmethod
    def circular_arc(cls, center, radius, start_angle, end_angle,
                     corners: Tuple[bool, bool] = (True, True)) -> "ParametricEdge":
        return cls(EdgeKind.CIRCULAR_ARC, {"center": center, "radius": radius,
                                           "start_angle": start_angle, "end_angle": end_angle}, *corners)

    @classmethod
    def ellipse_arc(cls, center, semi_axes, start_angle, end_angle, rotation: float = 0.0,
                    corners: Tuple[bool, bool] = (True, True)) -> "ParametricEdge":
        return cls(EdgeKind.ELLIPSE_ARC, {"center": center, "semi_axes": semi_axes, "rotation": rotation,
                                          "start_angle": start_angle, "end_angle": end_angle}, *corners)

    @classmethod
    def sine_perturbed_line(cls, start, end, amplitude, frequency,
                            corners: Tuple[bool, bool] = (True, True)) -> "ParametricEdge":
        return cls(EdgeKind.SINE_PERTURBED_LINE, {"start": start, "end": end,
                                                  "amplitude": amplitude, "frequency": frequency}, *corners)

    @classmethod
    def closed_circle(cls, center, radius, clockwise: bool = False) -> "ParametricEdge":
        return cls(EdgeKind.CLOSED_CIRCLE, {"center": center, "radius": radius, "clockwise": clockwise})

    @classmethod
    def closed_ellipse(cls, center, semi_axes, rotation: float = 0.0, clockwise: bool = False) -> "ParametricEdge":
        return cls(EdgeKind.CLOSED_ELLIPSE, {"center": center, "semi_axes": semi_axes,
                                             "rotation": rotation, "clockwise": clockwise})

    # --- properties ---------------------------------------------------

    @property
    def is_closed_contour(self) -> bool:
        return self.kind in CLOSED_KINDS

    @property
    def terminates_at_corner(self) -> Tuple[bool, bool]:
        return self.corner_left, self.corner_right

    @property
    def start_point(self) -> np.ndarray:
        return self.evaluate(np.array([0.0]))[0][0]

    @property
    def end_point(self) -> np.ndarray:
        return self.evaluate(np.array([TWO_PI]))[0][0]

    # --- evaluation ---------------------------------------------------

    def evaluate(self, t) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Вычислить x(t), x'(t), x''(t) исходной параметризации.

        Args:
            t: массив параметров в [0, 2π]

        Returns:
            Три массива формы (len(t), 2)
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        p = self.params
        kind = self.kind

        if kind == EdgeKind.LINE:
            direction = p["end"] - p["start"]
            x = p["start"] + np.outer(t / TWO_PI, direction)
            dx = np.tile(direction / TWO_PI, (len(t), 1))
            return x, dx, np.zeros_like(x)

        if kind == EdgeKind.SINE_PERTURBED_LINE:
            direction = p["end"] - p["start"]
            normal = np.array([-direction[1], direction[0]]) / np.linalg.norm(direction)
            amp, freq = float(p["amplitude"]), float(p["frequency"])
            s = t / TWO_PI
            x = p["start"] + np.outer(s, direction) + np.outer(amp * np.sin(freq * s), normal)
            dx = direction / TWO_PI + np.outer(amp * freq * np.cos(freq * s) / TWO_PI, normal)
            ddx = np.outer(-amp * freq ** 2 * np.sin(freq * s) / TWO_PI ** 2, normal)
            return x, dx, ddx

        if kind in (EdgeKind.CIRCULAR_ARC, EdgeKind.CLOSED_CIRCLE):
            radius = float(p["radius"])
            axes = np.array([radius, radius])
        else:
            axes = np.asarray(p["semi_axes"], dtype=float)

        if kind in CLOSED_KINDS:
            start_angle = 0.0
            sweep = -TWO_PI if p["clockwise"] else TWO_PI
        else:
            start_angle = float(p["start_angle"])
            sweep = float(p["end_angle"]) - start_angle

        rate = sweep / TWO_PI
        theta = start_angle + rate * t
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        local = np.column_stack([axes[0] * cos_t, axes[1] * sin_t])
        dlocal = rate * np.column_stack([-axes[0] * sin_t, axes[1] * cos_t])
        ddlocal = -rate ** 2 * local
        rot = _rotation(float(p["rotation"]))
        return p["center"] + local @ rot.T, dlocal @ rot.T, ddlocal @ rot.T

    def parameter_map(self, u: np.ndarray, sigma: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Отображение u → t с учётом угловых концов: двусторонний Кресс,
        односторонний (левый или правый) или тождественное.
        """
        u = np.asarray(u, dtype=float)
        if self.corner_left and self.corner_right:
            return kress_derivatives(u, sigma)
        if self.corner_left:
            tau, dtau, ddtau = kress_derivatives(u / 2.0, sigma)
            return 2.0 * tau, dtau, ddtau / 2.0
        if self.corner_right:
            tau, dtau, ddtau = kress_derivatives(np.pi - u / 2.0, sigma)
            return TWO_PI - 2.0 * tau, dtau, -ddtau / 2.0
        return u.copy(), np.ones_like(u), np.zeros_like(u)

    def sample(self, n: int, sigma: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Дискретизировать ребро: 2n узлов u_k = kπ/n, правый конец отброшен.

        Returns:
            (x, x̃', x̃'') в репараметризованной переменной u
        """
        u = np.pi / n * np.arange(2 * n)
        t, dt, ddt = self.parameter_map(u, sigma)
        x, dx, ddx = self.evaluate(t)
        velocity = dx * dt[:, None]
        acceleration = ddx * dt[:, None] ** 2 + dx * ddt[:, None]
        return x, velocity, acceleration

    def rigid_motion(self, angle: float, shift) -> "ParametricEdge":
        """Повернуть ребро на angle вокруг начала координат и сдвинуть на shift."""
        rot = _rotation(angle)
        shift = np.asarray(shift, dtype=float)
        params = dict(self.params)
        for key in ("start", "end", "center"):
            if key in params:
                params[key] = rot @ params[key] + shift
        if self.kind == EdgeKind.CIRCULAR_ARC:
            params["start_angle"] = float(params["start_angle"]) + angle
            params["end_angle"] = float(params["end_angle"]) + angle
        elif self.kind in (EdgeKind.ELLIPSE_ARC, EdgeKind.CLOSED_ELLIPSE, EdgeKind.CLOSED_CIRCLE):
            params["rotation"] = float(params["rotation"]) + angle
        return replace(self, params=params)


@dataclass(frozen=True, eq=False)
class BoundaryComponent:
    """Замкнутая цепочка рёбер с объявленной ориентацией."""
    edges: Tuple[ParametricEdge, ...]
    orientation: Orientation = Orientation.COUNTERCLOCKWISE

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        if not self.edges:
            raise GeometryError("Компонента границы должна содержать хотя бы одно ребро")
        if any(edge.is_closed_contour for edge in self.edges) and len(self.edges) > 1:
            raise GeometryError("Замкнутый контур должен быть единственным ребром компоненты")
        self._check_chain()

    def _check_chain(self):
        count = len(self.edges)
        for k, edge in enumerate(self.edges):
            following = self.edges[(k + 1) % count]
            gap = np.linalg.norm(edge.end_point - following.start_point)
            if gap > CLOSURE_TOLERANCE:
                error_msg = f"Цепочка не замкнута: конец ребра {k} и начало ребра {(k + 1) % count} разнесены на {gap:.3e}"
                logger.error(error_msg)
                raise GeometryError(error_msg)

            outgoing = edge.evaluate(np.array([TWO_PI]))[1][0]
            incoming = following.evaluate(np.array([0.0]))[1][0]
            cosine = outgoing @ incoming / (np.linalg.norm(outgoing) * np.linalg.norm(incoming))
            if cosine < -1.0 + CUSP_TOLERANCE:
                error_msg = f"Касп в стыке рёбер {k} и {(k + 1) % count}: внутренний угол равен 0 или 2π"
                logger.error(error_msg)
                raise GeometryError(error_msg)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def rigid_motion(self, angle: float, shift) -> "BoundaryComponent":
        return BoundaryComponent(tuple(edge.rigid_motion(angle, shift) for edge in self.edges), self.orientation)


@dataclass(frozen=True, eq=False)
class PuncturedCell:
    """
    Ячейка K = K₀ без замыканий дыр K_1…K_m.

    Внешняя компонента ориентирована против часовой стрелки, дыры по часовой.
    anchors: точки ξ_j внутри дыр; если не заданы, берётся центроид узлов дыры.
    """
    name: str
    outer: BoundaryComponent
    holes: Tuple[BoundaryComponent, ...] = ()
    anchors: Optional[Tuple[Tuple[float, float], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        if self.outer.orientation != Orientation.COUNTERCLOCKWISE:
            raise GeometryError(f"Внешняя граница ячейки {self.name} должна быть ориентирована против часовой стрелки")
        for j, hole in enumerate(self.holes):
            if hole.orientation != Orientation.CLOCKWISE:
                raise GeometryError(f"Дыра {j + 1} ячейки {self.name} должна быть ориентирована по часовой стрелке")
        if self.anchors is not None:
            anchors = tuple(tuple(float(c) for c in anchor) for anchor in self.anchors)
            if len(anchors) != len(self.holes):
                raise GeometryError(f"Число точек ξ ({len(anchors)}) не совпадает с числом дыр ({len(self.holes)})")
            object.__setattr__(self, "anchors", anchors)

    @property
    def components(self) -> Tuple[BoundaryComponent, ...]:
        return (self.outer,) + self.holes

    @property
    def num_holes(self) -> int:
        return len(self.holes)

    @property
    def num_edges(self) -> int:
        return sum(component.num_edges for component in self.components)

    def rigid_motion(self, angle: float, shift) -> "PuncturedCell":
        """Образ ячейки при повороте на angle и сдвиге на shift."""
        rot = _rotation(angle)
        anchors = None
        if self.anchors is not None:
            anchors = tuple(tuple(rot @ np.asarray(a) + np.asarray(shift, dtype=float)) for a in self.anchors)
        return PuncturedCell(
            name=self.name,
            outer=self.outer.rigid_motion(angle, shift),
            holes=tuple(hole.rigid_motion(angle, shift) for hole in self.holes),
            anchors=anchors,
        )


@dataclass(frozen=True, eq=False)
class SampledBoundary:
    """
    Дискретизированная граница ячейки.

    Узлы всех компонент идут подряд: внешняя, затем дыры. Производные хранятся
    во взвешенной форме, то есть по переменной u после отображения Кресса.
    """
    cell: PuncturedCell
    n: int
    sigma: float
    points: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    component_slices: Tuple[slice, ...]
    edge_slices: Tuple[slice, ...]
    component_edge_counts: Tuple[int, ...]
    anchors: np.ndarray

    @property
    def h(self) -> float:
        return np.pi / self.n

    @property
    def num_points(self) -> int:
        return len(self.points)

    @property
    def num_holes(self) -> int:
        return len(self.component_slices) - 1

    @cached_property
    def speed(self) -> np.ndarray:
        return np.linalg.norm(self.velocity, axis=1)

    @cached_property
    def corner_mask(self) -> np.ndarray:
        return self.speed < MIN_SPEED

    @cached_property
    def weighted_normal(self) -> np.ndarray:
        """ν = (x'₂, −x'₁) = n·|x'|."""
        return np.column_stack([self.velocity[:, 1], -self.velocity[:, 0]])

    @cached_property
    def unit_tangent(self) -> np.ndarray:
        tangent = np.zeros_like(self.velocity)
        smooth = ~self.corner_mask
        tangent[smooth] = self.velocity[smooth] / self.speed[smooth, None]
        return tangent

    @cached_property
    def unit_normal(self) -> np.ndarray:
        tangent = self.unit_tangent
        return np.column_stack([tangent[:, 1], -tangent[:, 0]])

    @cached_property
    def weights(self) -> np.ndarray:
        """Веса трапеций |x'(u_i)|·h."""
        return self.speed * self.h

    @cached_property
    def complex_points(self) -> np.ndarray:
        return self.points[:, 0] + 1j * self.points[:, 1]

    @cached_property
    def complex_velocity(self) -> np.ndarray:
        return self.velocity[:, 0] + 1j * self.velocity[:, 1]

    @cached_property
    def perimeter(self) -> float:
        return float(self.weights.sum())

    @cached_property
    def component_signed_areas(self) -> np.ndarray:
        cross = self.points[:, 0] * self.velocity[:, 1] - self.points[:, 1] * self.velocity[:, 0]
        return np.array([0.5 * self.h * cross[sl].sum() for sl in self.component_slices])

    @property
    def signed_area(self) -> float:
        return float(self.component_signed_areas.sum())

    def component_values(self, values: np.ndarray, k: int) -> np.ndarray:
        """Значения на k-й компоненте (0 — внешняя граница)."""
        return np.asarray(values)[self.component_slices[k]]

    def component_points(self, k: int) -> np.ndarray:
        return self.points[self.component_slices[k]]


def winding_number(component_points: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """
    Число оборотов замкнутой ломаной вокруг точек.

    Args:
        component_points: узлы компоненты в порядке обхода, форма (M, 2)
        targets: точки, форма (k, 2)

    Returns:
        Целочисленный массив длины k
    """
    nodes = component_points[:, 0] + 1j * component_points[:, 1]
    targets = np.atleast_2d(targets)
    z = targets[:, 0] + 1j * targets[:, 1]
    offsets = nodes[None, :] - z[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.roll(offsets, -1, axis=1) / offsets
        turns = np.angle(ratios).sum(axis=1) / TWO_PI
    # точка, совпавшая с узлом, не лежит ни внутри, ни снаружи
    turns = np.where(np.isfinite(turns), turns, 0.0)
    return np.rint(turns).astype(int)


def sample_cell_boundary(cell: PuncturedCell, n: int, sigma: float = DEFAULT_SIGMA,
                         anchors: Optional[Sequence[Sequence[float]]] = None) -> SampledBoundary:
    """
    Дискретизировать границу ячейки: 2n узлов на ребро.

    Args:
        cell: ячейка
        n: половина числа узлов на ребро (n >= 2)
        sigma: параметр Кресса
        anchors: точки ξ_j; по умолчанию из ячейки или центроиды дыр

    Returns:
        SampledBoundary
    """
    if n < 2:
        error_msg = f"n должно быть >= 2, получено {n}"
        logger.error(error_msg)
        raise InvalidParameterError(error_msg)
    if sigma < 2:
        error_msg = f"Параметр Кресса должен быть >= 2, получено {sigma}"
        logger.error(error_msg)
        raise InvalidParameterError(error_msg)

    points, velocity, acceleration = [], [], []
    component_slices, edge_slices, edge_counts = [], [], []
    index = 0
    for component in cell.components:
        component_start = index
        for edge in component.edges:
            x, dx, ddx = edge.sample(n, sigma)
            points.append(x)
            velocity.append(dx)
            acceleration.append(ddx)
            edge_slices.append(slice(index, index + 2 * n))
            index += 2 * n
        component_slices.append(slice(component_start, index))
        edge_counts.append(component.num_edges)

    points = np.concatenate(points)
    if anchors is None:
        anchors = cell.anchors
    if anchors is None:
        anchors = [points[sl].mean(axis=0) for sl in component_slices[1:]]
    anchors = np.asarray(anchors, dtype=float).reshape(cell.num_holes, 2)

    boundary = SampledBoundary(
        cell=cell,
        n=n,
        sigma=float(sigma),
        points=points,
        velocity=np.concatenate(velocity),
        acceleration=np.concatenate(acceleration),
        component_slices=tuple(component_slices),
        edge_slices=tuple(edge_slices),
        component_edge_counts=tuple(edge_counts),
        anchors=anchors,
    )
    _validate_sampled(boundary)
    logger.debug(f"Ячейка {cell.name}: n={n}, σ={sigma}, N={boundary.num_points}, дыр={cell.num_holes}")
    return boundary


def _validate_sampled(sb: SampledBoundary):
    """Проверить ориентацию, положение дыр и точек ξ по дискретной границе."""
    name = sb.cell.name
    areas = sb.component_signed_areas
    if areas[0] <= 0:
        raise GeometryError(f"Ячейка {name}: внешняя граница ориентирована по часовой стрелке")
    for j in range(1, len(areas)):
        if areas[j] >= 0:
            raise GeometryError(f"Ячейка {name}: дыра {j} ориентирована против часовой стрелки")

    outer = sb.component_points(0)
    for j in range(1, sb.num_holes + 1):
        hole = sb.component_points(j)
        if np.any(winding_number(outer, hole) != 1):
            raise GeometryError(f"Ячейка {name}: дыра {j} не лежит строго внутри внешней границы")
        for other in range(1, sb.num_holes + 1):
            if other != j and np.any(winding_number(sb.component_points(other), hole) != 0):
                raise GeometryError(f"Ячейка {name}: дыры {j} и {other} пересекаются")

        anchor = sb.anchors[j - 1]
        if winding_number(hole, anchor)[0] != -1:
            raise GeometryError(f"Ячейка {name}: точка ξ_{j} = {anchor} не лежит внутри дыры {j}")
        for other in range(1, sb.num_holes + 1):
            if other != j and winding_number(sb.component_points(other), anchor)[0] != 0:
                raise GeometryError(f"Ячейка {name}: точка ξ_{j} лежит внутри дыры {other}")


def boundary_integrate(sb: SampledBoundary, values) -> float:
    """
    Правило трапеций по границе: Σ f_i |x'(u_i)| h.

    Args:
        sb: дискретизированная граница
        values: значения подынтегральной функции в узлах

    Returns:
        Приближение ∮_{∂K} f ds
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (sb.num_points,):
        error_msg = f"Ожидалось {sb.num_points} значений в узлах, получено {values.shape}"
        logger.error(error_msg)
        raise InvalidParameterError(error_msg)
    return float(values @ sb.weights)


def min_distance_to_boundary(sb: SampledBoundary, z) -> Any:
    """
    Минимальное расстояние от точки (или точек) до узлов границы.

    Args:
        sb: дискретизированная граница
        z: точка формы (2,) или массив (k, 2)

    Returns:
        float для одной точки, иначе массив длины k
    """
    z = np.asarray(z, dtype=float)
    targets = np.atleast_2d(z)
    distances = np.empty(len(targets))
    for start in range(0, len(targets), 512):
        chunk = targets[start:start + 512]
        diff = chunk[:, None, :] - sb.points[None, :, :]
        distances[start:start + 512] = np.sqrt((diff ** 2).sum(axis=2)).min(axis=1)
    if z.ndim == 1:
        return float(distances[0])
    return distances
