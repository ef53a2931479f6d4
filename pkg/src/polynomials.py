"""
Плотная алгебра многочленов от двух переменных.

Коэффициенты хранятся в квадратном массиве c[i, j] при x₁^i x₂^j, в
соглашениях numpy.polynomial.polynomial (polyval2d, polyder).
"""
import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, List, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import convolve2d

from .errors import InvalidParameterError
from .geometry import SampledBoundary

logger = logging.getLogger(__name__)

MAX_DEGREE = 16
ZERO_TOLERANCE = 1e-14

Number = Union[int, float]


class BivariatePolynomial:
    """
    Многочлен q(x₁, x₂) = Σ c_α x₁^{α₁} x₂^{α₂} степени не выше MAX_DEGREE.
    """

    def __init__(self, coefficients=None):
        if coefficients is None:
            coefficients = [[0.0]]
        c = np.atleast_2d(np.asarray(coefficients, dtype=float)).copy()
        if c.ndim != 2:
            raise InvalidParameterError("Коэффициенты многочлена должны быть двумерным массивом")
        c[np.abs(c) <= ZERO_TOLERANCE] = 0.0

        rows, cols = np.nonzero(c)
        degree = int((rows + cols).max()) if len(rows) else 0
        if degree > MAX_DEGREE:
            error_msg = f"Степень многочлена {degree} превышает допустимую {MAX_DEGREE}"
            logger.error(error_msg)
            raise InvalidParameterError(error_msg)

        square = np.zeros((degree + 1, degree + 1))
        keep = (rows <= degree) & (cols <= degree)
        square[rows[keep], cols[keep]] = c[rows[keep], cols[keep]]
        square.setflags(write=False)
        self._coefficients = square
        self._degree = degree

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[int, int, Number]]) -> "BivariatePolynomial":
        """
        Собрать многочлен из троек (α₁, α₂, коэффициент).

        Args:
            terms: тройки; повторяющиеся мультииндексы складываются
        """
        terms = list(terms)
        for a1, a2, _ in terms:
            if a1 < 0 or a2 < 0:
                raise InvalidParameterError(f"Мультииндекс должен быть неотрицательным, получено ({a1}, {a2})")
        size = max((a1 + a2 for a1, a2, _ in terms), default=0) + 1
        if size - 1 > MAX_DEGREE:
            raise InvalidParameterError(f"Степень многочлена {size - 1} превышает допустимую {MAX_DEGREE}")
        c = np.zeros((size, size))
        for a1, a2, coef in terms:
            c[int(a1), int(a2)] += float(coef)
        return cls(c)

    @classmethod
    def monomial(cls, a1: int, a2: int, coefficient: Number = 1.0) -> "BivariatePolynomial":
        return cls.from_terms([(a1, a2, coefficient)])

    @classmethod
    def constant(cls, value: Number) -> "BivariatePolynomial":
        return cls([[float(value)]])

    @property
    def coefficients(self) -> np.ndarray:
        return self._coefficients

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def is_zero(self) -> bool:
        return not np.any(self._coefficients)

    def terms(self) -> List[Tuple[int, int, float]]:
        """Ненулевые члены в виде троек (α₁, α₂, коэффициент)."""
        rows, cols = np.nonzero(self._coefficients)
        return [(int(i), int(j), float(self._coefficients[i, j])) for i, j in zip(rows, cols)]

    # --- evaluation and calculus ---------------------------------------

    def __call__(self, x1, x2):
        return npoly.polyval2d(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float), self._coefficients)

    def evaluate(self, points) -> np.ndarray:
        """Значения в точках формы (k, 2)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return self(points[:, 0], points[:, 1])

    def partial(self, axis: int) -> "BivariatePolynomial":
        """Частная производная по x₁ (axis=0) или x₂ (axis=1)."""
        return BivariatePolynomial(npoly.polyder(self._coefficients, axis=axis))

    def gradient(self) -> Tuple["BivariatePolynomial", "BivariatePolynomial"]:
        return self.partial(0), self.partial(1)

    def gradient_at(self, points) -> np.ndarray:
        """Градиент в точках формы (k, 2), результат той же формы."""
        dx1, dx2 = self.gradient()
        return np.column_stack([dx1.evaluate(points), dx2.evaluate(points)])

    def laplacian(self) -> "BivariatePolynomial":
        c = self._coefficients
        return BivariatePolynomial(npoly.polyder(c, m=2, axis=0)) + BivariatePolynomial(npoly.polyder(c, m=2, axis=1))

    def anti_laplacian(self) -> "BivariatePolynomial":
        """Многочлен R с ΔR = q, собранный почленно из формулы для x^α."""
        result = BivariatePolynomial()
        for a1, a2, coef in self.terms():
            result = result + coef * _monomial_anti_laplacian(a1, a2)
        return result

    # --- arithmetic ----------------------------------------------------

    def _padded(self, size: int) -> np.ndarray:
        c = np.zeros((size, size))
        d = self._degree + 1
        c[:d, :d] = self._coefficients
        return c

    def __add__(self, other) -> "BivariatePolynomial":
        if isinstance(other, (int, float)):
            other = BivariatePolynomial.constant(other)
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        size = max(self._degree, other._degree) + 1
        return BivariatePolynomial(self._padded(size) + other._padded(size))

    __radd__ = __add__

    def __neg__(self) -> "BivariatePolynomial":
        return BivariatePolynomial(-self._coefficients)

    def __sub__(self, other) -> "BivariatePolynomial":
        return self + (-other)

    def __rsub__(self, other) -> "BivariatePolynomial":
        return (-self) + other

    def __mul__(self, other) -> "BivariatePolynomial":
        if isinstance(other, (int, float, np.floating)):
            return BivariatePolynomial(self._coefficients * float(other))
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return BivariatePolynomial(convolve2d(self._coefficients, other._coefficients))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BivariatePolynomial":
        if exponent < 0:
            raise InvalidParameterError("Отрицательная степень многочлена не определена")
        result = BivariatePolynomial.constant(1.0)
        for _ in range(exponent):
            result = result * self
        return result

    def almost_equal(self, other: "BivariatePolynomial", tol: float = 1e-12) -> bool:
        difference = self - other
        return bool(np.all(np.abs(difference.coefficients) <= tol))

    def __repr__(self) -> str:
        terms = " + ".join(f"{c:g}·x1^{i}·x2^{j}" for i, j, c in self.terms()) or "0"
        return f"BivariatePolynomial({terms})"


R_SQUARED = BivariatePolynomial.from_terms([(2, 0, 1.0), (0, 2, 1.0)])


@lru_cache(maxsize=None)
def _monomial_anti_laplacian(a1: int, a2: int) -> BivariatePolynomial:
    """
    P_α = |x|²/(4(|α|+1)!) · Σ_k (−1)^k (|α|−k)!/(k+1)! (|x|²/4)^k Δ^k x^α.

    Отношения факториалов считаются точно (Fraction), в float переводится
    только итоговый множитель.
    """
    total_degree = a1 + a2
    if total_degree + 2 > MAX_DEGREE:
        raise InvalidParameterError(
            f"Анти-лапласиан x^({a1},{a2}) имеет степень {total_degree + 2} > {MAX_DEGREE}"
        )
    quarter_r2 = R_SQUARED * 0.25
    term = BivariatePolynomial.monomial(a1, a2)
    power = BivariatePolynomial.constant(1.0)
    total = BivariatePolynomial()
    for k in range(total_degree // 2 + 1):
        factor = Fraction((-1) ** k * factorial(total_degree - k), factorial(total_degree + 1) * factorial(k + 1))
        total = total + float(factor) * (power * term)
        term = term.laplacian()
        power = power * quarter_r2
    return quarter_r2 * total


def anti_laplacian_poly(q: BivariatePolynomial) -> BivariatePolynomial:
    """Полиномиальный анти-лапласиан: Δ(результат) = q."""
    return q.anti_laplacian()


def weighted_normal_derivative(q: BivariatePolynomial, sb: SampledBoundary) -> np.ndarray:
    """Значения ∇q·ν = (∂q/∂n)|x'| в узлах границы."""
    return (q.gradient_at(sb.points) * sb.weighted_normal).sum(axis=1)


def integrate_poly_over_cell(q: BivariatePolynomial, sb: SampledBoundary) -> float:
    """
    Интеграл многочлена по ячейке через теорему о дивергенции:
    ∫_K x^α dx = (2+|α|)⁻¹ ∮ (x·n) x^α ds.

    Args:
        q: многочлен
        sb: дискретизированная граница ячейки

    Returns:
        ∫_K q dx
    """
    c = q.coefficients
    size = c.shape[0]
    orders = np.add.outer(np.arange(size), np.arange(size))
    scaled = c / (2.0 + orders)
    x1, x2 = sb.points[:, 0], sb.points[:, 1]
    values = npoly.polyval2d(x1, x2, scaled)
    x_dot_nu = x1 * sb.weighted_normal[:, 0] + x2 * sb.weighted_normal[:, 1]
    return float(sb.h * (values * x_dot_nu).sum())
