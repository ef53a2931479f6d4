"""
Модуль для загрузки конфигурации из переменных окружения и параметров запуска.
"""
import os
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import InvalidParameterError

logger = logging.getLogger(__name__)

SOLVERS = ("lu", "iterative")


class Config:
    def __init__(self):
        """
        Загрузить конфигурацию по умолчанию из переменных окружения.
        """
        self._validate_values()
        logger.info("Конфигурация загружена из переменных окружения")

    def _validate_values(self):
        """Проверить, что заданные переменные окружения имеют допустимые значения."""
        errors = []
        try:
            if self.kress_sigma < 2:
                errors.append(f"KRESS_SIGMA должен быть >= 2, получено {self.kress_sigma}")
        except ValueError:
            errors.append(f"KRESS_SIGMA не число: {os.getenv('KRESS_SIGMA')}")

        if self.solver not in SOLVERS:
            errors.append(f"NYSTROM_SOLVER должен быть одним из {SOLVERS}, получено {self.solver}")

        try:
            if self.solver_tolerance <= 0:
                errors.append("SOLVER_TOLERANCE должен быть положительным")
        except ValueError:
            errors.append(f"SOLVER_TOLERANCE не число: {os.getenv('SOLVER_TOLERANCE')}")

        try:
            if self.interior_epsilon <= 0:
                errors.append("INTERIOR_EPSILON должен быть положительным")
        except ValueError:
            errors.append(f"INTERIOR_EPSILON не число: {os.getenv('INTERIOR_EPSILON')}")

        try:
            if self.max_parallel_runs < 1:
                errors.append("MAX_PARALLEL_RUNS должен быть >= 1")
        except ValueError:
            errors.append(f"MAX_PARALLEL_RUNS не целое: {os.getenv('MAX_PARALLEL_RUNS')}")

        if errors:
            error_msg = f"Некорректные переменные окружения: {'; '.join(errors)}"
            logger.error(error_msg)
            raise ValueError(error_msg)

    @property
    def log_level(self) -> str:
        """Получить уровень логирования."""
        return os.getenv('LOG_LEVEL', 'INFO')

    @property
    def kress_sigma(self) -> float:
        """Получить параметр Кресса по умолчанию."""
        return float(os.getenv('KRESS_SIGMA', '7'))

    @property
    def solver(self) -> str:
        """Получить решатель плотных систем по умолчанию (lu или iterative)."""
        return os.getenv('NYSTROM_SOLVER', 'lu').lower()

    @property
    def solver_tolerance(self) -> float:
        """Получить допуск итерационного решателя."""
        return float(os.getenv('SOLVER_TOLERANCE', '1e-12'))

    @property
    def interior_epsilon(self) -> float:
        """Получить радиус исключения точек вблизи границы."""
        return float(os.getenv('INTERIOR_EPSILON', '0.02'))

    @property
    def max_parallel_runs(self) -> int:
        """Получить число одновременно выполняемых расчётов."""
        return int(os.getenv('MAX_PARALLEL_RUNS', '4'))

    @property
    def results_dir(self) -> str:
        """Получить каталог для выходных CSV-файлов."""
        return os.getenv('RESULTS_DIR', 'results')


@dataclass(frozen=True)
class RunConfig:
    """
    Параметры одного запуска CLI.

    Ровно один источник ячейки: встроенное имя (cell) или файл геометрии (geometry).
    """
    cell: Optional[str] = None
    geometry: Optional[str] = None
    functions: Optional[str] = None
    n_values: Tuple[int, ...] = (4, 8, 16, 32, 64)
    sigma: float = 7.0
    solver: str = "lu"
    tolerance: float = 1e-12
    convergence: bool = False
    interior_grid: Optional[int] = None
    epsilon: float = 0.02
    oracle: bool = False
    refine: int = 0
    out: Optional[str] = None
    interior_out: Optional[str] = None
    log_level: str = "INFO"
    jobs: int = 4

    def __post_init__(self):
        problems = []
        if (self.cell is None) == (self.geometry is None):
            problems.append("нужно указать ровно один из параметров --cell или --geometry")
        if self.geometry is not None and self.functions is None:
            problems.append("для --geometry требуется --functions")
        if not self.n_values:
            problems.append("список --n пуст")
        for n in self.n_values:
            if n < 4 or n % 2:
                problems.append(f"n должно быть чётным и >= 4, получено {n}")
        if self.sigma < 2:
            problems.append(f"sigma должна быть >= 2, получено {self.sigma}")
        if self.solver not in SOLVERS:
            problems.append(f"неизвестный решатель {self.solver}")
        if self.tolerance <= 0:
            problems.append("tolerance должен быть положительным")
        if self.epsilon <= 0:
            problems.append("epsilon должен быть положительным")
        if self.interior_grid is not None and self.interior_grid < 2:
            problems.append("--interior-grid должен быть >= 2")
        if self.refine < 0:
            problems.append("--refine должен быть >= 0")
        if self.jobs < 1:
            problems.append("--jobs должен быть >= 1")

        if problems:
            error_msg = f"Некорректные параметры запуска: {'; '.join(problems)}"
            logger.error(error_msg)
            raise InvalidParameterError(error_msg)

    @property
    def largest_n(self) -> int:
        """Самое подробное разбиение из списка."""
        return max(self.n_values)

    @property
    def requested_n(self) -> Tuple[int, ...]:
        """Значения n, которые реально считаются: все при --convergence, иначе только наибольшее."""
        if self.convergence:
            return tuple(sorted(set(self.n_values)))
        return (self.largest_n,)

    @classmethod
    def from_args(cls, args, defaults: Config) -> "RunConfig":
        """
        Собрать конфигурацию запуска из аргументов командной строки.

        Args:
            args: результат argparse
            defaults: конфигурация из переменных окружения

        Returns:
            Проверенный RunConfig
        """
        n_values = parse_n_list(args.n) if args.n else (4, 8, 16, 32, 64)
        return cls(
            cell=args.cell,
            geometry=args.geometry,
            functions=args.functions,
            n_values=n_values,
            sigma=args.sigma if args.sigma is not None else defaults.kress_sigma,
            solver=(args.solver or defaults.solver).lower(),
            tolerance=args.tolerance if args.tolerance is not None else defaults.solver_tolerance,
            convergence=args.convergence,
            interior_grid=args.interior_grid,
            epsilon=args.epsilon if args.epsilon is not None else defaults.interior_epsilon,
            oracle=args.oracle,
            refine=args.refine,
            out=args.out,
            interior_out=args.interior_out or os.path.join(defaults.results_dir, "interior.csv"),
            log_level=args.log_level or defaults.log_level,
            jobs=args.jobs if args.jobs is not None else defaults.max_parallel_runs,
        )


def parse_n_list(text: str) -> Tuple[int, ...]:
    """
    Разобрать список вида "4,8,16".

    Args:
        text: значения через запятую

    Returns:
        Кортеж целых чисел
    """
    try:
        return tuple(int(item) for item in text.split(",") if item.strip())
    except ValueError as e:
        error_msg = f"Некорректный список n: {text}"
        logger.error(error_msg)
        raise InvalidParameterError(error_msg) from e
