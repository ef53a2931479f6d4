"""
Спектральное дифференцирование, интегрирование и тригонометрическая
интерполяция периодических следов на компонентах границы.
"""
import logging
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidParameterError
from .geometry import SampledBoundary

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
MEAN_WARNING_RATIO = 1e-6


@dataclass(frozen=True, eq=False)
class PeriodicSamples:
    """
    Значения периодической функции в равноотстоящих узлах одной компоненты.

    Параметр компоненты пробегает [0, 2π·num_edges), шаг π/n.
    """
    values: np.ndarray
    n: int
    num_edges: int = 1

    def __post_init__(self):
        if np.iscomplexobj(self.values):
            raise InvalidParameterError("Значения следа должны быть вещественными")
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        length = len(values)
        if values.ndim != 1 or length < 4 or length % 2:
            raise InvalidParameterError(f"Длина выборки должна быть чётной и >= 4, получено {length}")
        if length != 2 * self.n * self.num_edges:
            raise InvalidParameterError(
                f"Длина выборки {length} не равна 2n × число рёбер = {2 * self.n * self.num_edges}"
            )

    @property
    def step(self) -> float:
        return np.pi / self.n

    def __len__(self) -> int:
        return len(self.values)

    def angular_frequencies(self) -> np.ndarray:
        return TWO_PI * np.fft.rfftfreq(len(self.values), d=self.step)


def fft_derivative(s: PeriodicSamples) -> PeriodicSamples:
    """
    Производная по параметру через FFT; коэффициент Найквиста обнуляется.

    Args:
        s: значения G(u_k)

    Returns:
        Значения G'(u_k)
    """
    coefficients = np.fft.rfft(s.values)
    coefficients *= 1j * s.angular_frequencies()
    coefficients[-1] = 0.0
    return replace(s, values=np.fft.irfft(coefficients, n=len(s)))


def fft_antiderivative(s: PeriodicSamples) -> PeriodicSamples:
    """
    Первообразная с нулевым средним.

    Ненулевой нулевой коэффициент вычитается; если он заметен на фоне
    амплитуды входа, пишется предупреждение.

    Args:
        s: значения g(u_k) с (теоретически) нулевым средним

    Returns:
        Значения G(u_k), ∑ G = 0
    """
    coefficients = np.fft.rfft(s.values)
    mean = coefficients[0].real / len(s)
    scale = np.max(np.abs(s.values)) if len(s) else 0.0
    if abs(mean) > MEAN_WARNING_RATIO * scale:
        logger.warning(f"Среднее значение производной не равно нулю: ω₀ = {mean:.3e} (масштаб {scale:.3e})")
    else:
        logger.debug(f"Вычтено среднее ω₀ = {mean:.3e}")

    frequencies = s.angular_frequencies()
    coefficients[0] = 0.0
    coefficients[1:] /= 1j * frequencies[1:]
    coefficients[-1] = 0.0
    return replace(s, values=np.fft.irfft(coefficients, n=len(s)))


def trig_interpolate(s: PeriodicSamples, m: int) -> PeriodicSamples:
    """
    Тригонометрическая интерполяция на сетку в 2^m раз подробнее.

    Args:
        s: исходные значения
        m: показатель измельчения (m >= 0)

    Returns:
        PeriodicSamples длины 2^m·len(s)
    """
    if m < 0:
        raise InvalidParameterError(f"Показатель измельчения должен быть >= 0, получено {m}")
    if m == 0:
        return s

    length = len(s)
    refined_length = length << m
    coefficients = np.fft.rfft(s.values)
    coefficients[-1] *= 0.5
    padded = np.zeros(refined_length // 2 + 1, dtype=complex)
    padded[:len(coefficients)] = coefficients
    values = np.fft.irfft(padded, n=refined_length) * (refined_length / length)
    return PeriodicSamples(values, s.n << m, s.num_edges)


def component_samples(sb: SampledBoundary, values: np.ndarray, k: int) -> PeriodicSamples:
    """Выборка на k-й компоненте как PeriodicSamples."""
    return PeriodicSamples(sb.component_values(values, k), sb.n, sb.component_edge_counts[k])


def _per_component(sb: SampledBoundary, values, operation) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != (sb.num_points,):
        raise InvalidParameterError(f"Ожидалось {sb.num_points} значений в узлах, получено {values.shape}")
    result = np.empty_like(values)
    for k, sl in enumerate(sb.component_slices):
        result[sl] = operation(component_samples(sb, values, k)).values
    return result


def component_derivative(sb: SampledBoundary, values) -> np.ndarray:
    """Производная по параметру на каждой компоненте отдельно."""
    return _per_component(sb, values, fft_derivative)


def component_antiderivative(sb: SampledBoundary, values) -> np.ndarray:
    """Первообразная с нулевым средним на каждой компоненте отдельно."""
    return _per_component(sb, values, fft_antiderivative)


def refine_samples(sb: SampledBoundary, values, m: int) -> np.ndarray:
    """
    Интерполировать значения в узлах на сетку с n·2^m по каждой компоненте.

    Args:
        sb: исходная дискретизация
        values: значения в узлах sb
        m: показатель измельчения

    Returns:
        Массив значений в узлах измельчённой дискретизации
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (sb.num_points,):
        raise InvalidParameterError(f"Ожидалось {sb.num_points} значений в узлах, получено {values.shape}")
    return np.concatenate([
        trig_interpolate(component_samples(sb, values, k), m).values
        for k in range(len(sb.component_slices))
    ])
