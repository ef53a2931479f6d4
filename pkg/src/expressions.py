"""
Небольшой замкнутый словарь выражений для следов функций:
многочлены, e^{kx₁}cos/sin(kx₂), ln|x − c|, (x − c)_i/|x − c|² и
r^α sin(αθ) относительно вершины. Все члены, кроме многочленов, гармоничны.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import InvalidParameterError, ParseError
from .geometry_io import load_yaml_document, require
from .polynomials import BivariatePolynomial

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
FORMAT_VERSION = 1


def _as_points(points) -> np.ndarray:
    return np.atleast_2d(np.asarray(points, dtype=float))


@dataclass(frozen=True)
class PolynomialTerm:
    polynomial: BivariatePolynomial

    def evaluate(self, points) -> np.ndarray:
        return self.polynomial.evaluate(points)

    def gradient(self, points) -> np.ndarray:
        return self.polynomial.gradient_at(points)


@dataclass(frozen=True)
class ExpTerm:
    """coefficient·e^{k x₁}·cos(k x₂) или ·sin(k x₂)."""
    scale: float = 1.0
    part: str = "cos"
    coefficient: float = 1.0

    def __post_init__(self):
        if self.part not in ("cos", "sin"):
            raise InvalidParameterError(f"part должен быть cos или sin, получено {self.part}")

    def evaluate(self, points) -> np.ndarray:
        p = _as_points(points)
        k = self.scale
        trig = np.cos(k * p[:, 1]) if self.part == "cos" else np.sin(k * p[:, 1])
        return self.coefficient * np.exp(k * p[:, 0]) * trig

    def gradient(self, points) -> np.ndarray:
        p = _as_points(points)
        k = self.scale
        growth = self.coefficient * k * np.exp(k * p[:, 0])
        cos, sin = np.cos(k * p[:, 1]), np.sin(k * p[:, 1])
        if self.part == "cos":
            return np.column_stack([growth * cos, -growth * sin])
        return np.column_stack([growth * sin, growth * cos])


@dataclass(frozen=True)
class LogTerm:
    """coefficient·ln|x − center|."""
    center: Tuple[float, float]
    coefficient: float = 1.0

    def evaluate(self, points) -> np.ndarray:
        d = _as_points(points) - np.asarray(self.center)
        return 0.5 * self.coefficient * np.log((d ** 2).sum(axis=1))

    def gradient(self, points) -> np.ndarray:
        d = _as_points(points) - np.asarray(self.center)
        return self.coefficient * d / (d ** 2).sum(axis=1)[:, None]


@dataclass(frozen=True)
class RationalTerm:
    """coefficient·(x − center)_i/|x − center|², i = component ∈ {1, 2}."""
    center: Tuple[float, float]
    component: int = 1
    coefficient: float = 1.0

    def __post_init__(self):
        if self.component not in (1, 2):
            raise InvalidParameterError(f"component должен быть 1 или 2, получено {self.component}")

    def evaluate(self, points) -> np.ndarray:
        d = _as_points(points) - np.asarray(self.center)
        return self.coefficient * d[:, self.component - 1] / (d ** 2).sum(axis=1)

    def gradient(self, points) -> np.ndarray:
        d = _as_points(points) - np.asarray(self.center)
        r2 = (d ** 2).sum(axis=1)
        i = self.component - 1
        other = 1 - i
        gradient = np.empty_like(d)
        gradient[:, i] = (d[:, other] ** 2 - d[:, i] ** 2) / r2 ** 2
        gradient[:, other] = -2.0 * d[:, 0] * d[:, 1] / r2 ** 2
        return self.coefficient * gradient


@dataclass(frozen=True)
class PowerSineTerm:
    """
    coefficient·r^α sin(αθ'), где (r, θ) — полярные координаты относительно
    вершины, θ' = (θ − angle_offset) mod 2π ∈ [0, 2π).
    """
    vertex: Tuple[float, float] = (0.0, 0.0)
    exponent: float = 0.5
    angle_offset: float = 0.0
    coefficient: float = 1.0

    def _polar(self, points) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        d = _as_points(points) - np.asarray(self.vertex)
        r = np.hypot(d[:, 0], d[:, 1])
        theta = np.arctan2(d[:, 1], d[:, 0])
        shifted = np.mod(theta - self.angle_offset, TWO_PI)
        return r, theta, shifted

    def evaluate(self, points) -> np.ndarray:
        r, _, shifted = self._polar(points)
        return self.coefficient * r ** self.exponent * np.sin(self.exponent * shifted)

    def gradient(self, points) -> np.ndarray:
        r, theta, shifted = self._polar(points)
        alpha = self.exponent
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = self.coefficient * alpha * r ** (alpha - 1.0)
        angle = alpha * shifted - theta
        return np.column_stack([scale * np.sin(angle), scale * np.cos(angle)])


Term = Union[PolynomialTerm, ExpTerm, LogTerm, RationalTerm, PowerSineTerm]


@dataclass(frozen=True)
class TraceExpression:
    """Сумма членов словаря; вычисляется в точках формы (k, 2)."""
    terms: Tuple[Term, ...]

    def evaluate(self, points) -> np.ndarray:
        points = _as_points(points)
        total = np.zeros(len(points))
        for term in self.terms:
            total = total + term.evaluate(points)
        return total

    def gradient(self, points) -> np.ndarray:
        points = _as_points(points)
        total = np.zeros_like(points)
        for term in self.terms:
            total = total + term.gradient(points)
        return total

    @property
    def polynomial_part(self) -> BivariatePolynomial:
        result = BivariatePolynomial()
        for term in self.terms:
            if isinstance(term, PolynomialTerm):
                result = result + term.polynomial
        return result

    def laplacian(self) -> BivariatePolynomial:
        """Лапласиан выражения: остальные члены гармоничны."""
        return self.polynomial_part.laplacian()

    def __add__(self, other: "TraceExpression") -> "TraceExpression":
        return TraceExpression(self.terms + other.terms)


@dataclass(frozen=True)
class FunctionSpec:
    """Описание функции для run_custom: выражение следа и (необязательно) Δv."""
    name: str
    expression: TraceExpression
    laplacian: Optional[BivariatePolynomial] = None

    def resolved_laplacian(self) -> BivariatePolynomial:
        return self.laplacian if self.laplacian is not None else self.expression.laplacian()


def parse_polynomial(value: Any, field: str) -> BivariatePolynomial:
    """Многочлен из списка троек [α₁, α₂, коэффициент]."""
    if not isinstance(value, list):
        raise ParseError("Многочлен задаётся списком троек [a1, a2, coefficient]", field=field)
    triples = []
    for i, item in enumerate(value):
        if not (isinstance(item, list) and len(item) == 3):
            raise ParseError("Ожидалась тройка [a1, a2, coefficient]", field=f"{field}[{i}]")
        a1, a2, coefficient = item
        if not (isinstance(a1, int) and isinstance(a2, int)) or a1 < 0 or a2 < 0:
            raise ParseError("Мультииндекс должен состоять из неотрицательных целых", field=f"{field}[{i}]")
        triples.append((a1, a2, float(coefficient)))
    try:
        return BivariatePolynomial.from_terms(triples)
    except InvalidParameterError as e:
        raise ParseError(str(e), field=field) from e


def _point(value: Any, field: str) -> Tuple[float, float]:
    if not (isinstance(value, list) and len(value) == 2):
        raise ParseError("Ожидалась точка [x1, x2]", field=field)
    return float(value[0]), float(value[1])


def _parse_term(record: Any, field: str) -> Term:
    if not isinstance(record, dict) or len(record) != 1:
        raise ParseError("Член выражения — словарь с единственным ключом-типом", field=field)
    kind, body = next(iter(record.items()))
    field = f"{field}.{kind}"
    try:
        if kind == "polynomial":
            return PolynomialTerm(parse_polynomial(body, field))
        if not isinstance(body, dict):
            raise ParseError("Параметры члена задаются словарём", field=field)
        coefficient = float(body.get("coefficient", 1.0))
        if kind == "exp":
            return ExpTerm(float(body.get("scale", 1.0)), str(body.get("part", "cos")), coefficient)
        if kind == "log":
            return LogTerm(_point(require(body, "center", field), f"{field}.center"), coefficient)
        if kind == "rational":
            return RationalTerm(_point(require(body, "center", field), f"{field}.center"),
                                int(body.get("component", 1)), coefficient)
        if kind == "power_sine":
            return PowerSineTerm(_point(body.get("vertex", [0.0, 0.0]), f"{field}.vertex"),
                                 float(body.get("exponent", 0.5)), float(body.get("angle_offset", 0.0)),
                                 coefficient)
    except InvalidParameterError as e:
        raise ParseError(str(e), field=field) from e
    except (TypeError, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"Некорректное значение: {e}", field=field) from e
    raise ParseError(f"Неизвестный тип члена {kind}", field=field)


def parse_expression(terms: Any, field: str = "terms") -> TraceExpression:
    """Выражение из списка членов."""
    if not isinstance(terms, list) or not terms:
        raise ParseError("Список членов должен быть непустым", field=field)
    return TraceExpression(tuple(_parse_term(term, f"{field}[{i}]") for i, term in enumerate(terms)))


def parse_function_specs(document: Dict[str, Any]) -> List[FunctionSpec]:
    """
    Функции из документа вида {format_version: 1, functions: {v: {...}, w: {...}}}.

    Returns:
        Список FunctionSpec в порядке документа (первые две используются как v и w)
    """
    version = require(document, "format_version", "")
    if version != FORMAT_VERSION:
        raise ParseError(f"Неподдерживаемая версия формата {version}", field="format_version")
    functions = require(document, "functions", "")
    if not isinstance(functions, dict) or not functions:
        raise ParseError("functions должен быть непустым словарём", field="functions")

    specs = []
    for name, body in functions.items():
        field = f"functions.{name}"
        expression = parse_expression(require(body, "terms", field), f"{field}.terms")
        laplacian = None
        if "laplacian" in body:
            laplacian = parse_polynomial(body["laplacian"], f"{field}.laplacian")
        specs.append(FunctionSpec(str(name), expression, laplacian))
    return specs


def load_function_specs(path: Union[str, Path]) -> List[FunctionSpec]:
    """Прочитать описания функций из файла."""
    specs = parse_function_specs(load_yaml_document(path))
    logger.info(f"Загружено описаний функций: {len(specs)} из {path}")
    return specs
