"""
Точка входа: расчёт скалярных произведений на ячейках с дырами.
"""
import argparse
import asyncio
import logging
import sys
from typing import List, Optional

from .benchmarks import BENCHMARK_NAMES
from .config import SOLVERS, Config, RunConfig
from .errors import PoissonCellError
from .runner import BenchmarkRunner


def setup_logging(level: str = "INFO"):
    """
    Настроить логирование.

    Args:
        level: уровень логирования
    """
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=getattr(logging, level.upper()),
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.main",
        description="H¹ и L² скалярные произведения функций с полиномиальным лапласианом на ячейках с дырами",
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--cell", choices=BENCHMARK_NAMES, help="встроенная ячейка")
    source.add_argument("--geometry", help="файл геометрии (YAML)")
    parser.add_argument("--functions", help="файл описания функций (YAML)")
    parser.add_argument("--n", help="список n через запятую, например 4,8,16,32,64")
    parser.add_argument("--sigma", type=float, help="параметр Кресса (по умолчанию 7)")
    parser.add_argument("--solver", choices=SOLVERS, help="решатель плотных систем")
    parser.add_argument("--tolerance", type=float, help="допуск итерационного решателя")
    parser.add_argument("--convergence", action="store_true", help="посчитать все n и порядки сходимости")
    parser.add_argument("--interior-grid", type=int, metavar="R", help="сетка R×R для внутренних значений")
    parser.add_argument("--epsilon", type=float, help="радиус исключения у границы (по умолчанию 0.02)")
    parser.add_argument("--oracle", action="store_true", help="сверка с прямым интегрированием по ячейке")
    parser.add_argument("--refine", type=int, default=0, metavar="M", help="измельчение границы в 2^M раз")
    parser.add_argument("--out", help="CSV с результатами (по умолчанию stdout)")
    parser.add_argument("--interior-out", help="CSV с внутренними значениями")
    parser.add_argument("--log-level", help="уровень логирования")
    parser.add_argument("--jobs", type=int, help="число параллельных расчётов")
    return parser


async def main(argv: Optional[List[str]] = None) -> int:
    """
    Главная функция.

    Returns:
        Код завершения: 0 при успехе, 1 если хотя бы один расчёт не удался
    """
    args = build_parser().parse_args(argv)

    # Загружаем конфигурацию из переменных окружения и аргументов
    try:
        defaults = Config()
        config = RunConfig.from_args(args, defaults)
    except ValueError as e:
        print(f"❌ ОШИБКА: {e}")
        print("\nПроверьте параметры запуска и переменные окружения:")
        print("  - --cell ИМЯ или --geometry ФАЙЛ --functions ФАЙЛ")
        print("  - KRESS_SIGMA, NYSTROM_SOLVER, SOLVER_TOLERANCE, INTERIOR_EPSILON, MAX_PARALLEL_RUNS")
        return 1

    setup_logging(config.log_level)
    logger = logging.getLogger(__name__)

    logger.info("=" * 50)
    logger.info("Запуск расчёта скалярных произведений")
    logger.info("=" * 50)
    logger.info(f"Ячейка: {config.cell or config.geometry}")
    logger.info(f"Значения n: {', '.join(map(str, config.requested_n))}")
    logger.info(f"σ = {config.sigma}, решатель: {config.solver}")

    runner = BenchmarkRunner(config)
    try:
        results = await runner.run()
    except PoissonCellError as e:
        logger.error(f"Ошибка входных данных: {e}")
        return 1
    except Exception as e:
        logger.error(f"Критическая ошибка: {e}", exc_info=True)
        return 1

    return 1 if results.has_failures else 0


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
