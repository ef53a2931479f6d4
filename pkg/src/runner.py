"""
Пакетный запуск расчётов: встроенные тесты, пользовательские функции,
таблицы сходимости и внутренние значения.
"""
import asyncio
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .benchmarks import (
    Benchmark,
    constant_aligned_error,
    get_benchmark,
    linear_aligned_error,
    weighted_trace_error,
)
from .config import RunConfig
from .errors import PoissonCellError
from .expressions import FunctionSpec, load_function_specs
from .geometry import PuncturedCell, SampledBoundary, sample_cell_boundary
from .geometry_io import load_cell
from .inner_products import (
    LocalPoissonFunction,
    PreparedFunction,
    h1_semi,
    l2,
    prepare_functions,
    refine,
)
from .interior import InteriorQuery, InteriorValues, cauchy_eval, grid_points
from .oracle import oracle_products
from .results import ResultRow, ResultsTable, write_interior_csv

logger = logging.getLogger(__name__)

PairValues = Dict[Tuple[int, int], Tuple[float, float]]


def _prepare(cell: PuncturedCell, specs: Sequence[FunctionSpec], n: int,
             config: RunConfig) -> Tuple[SampledBoundary, List[PreparedFunction]]:
    sb = sample_cell_boundary(cell, n, config.sigma)
    functions = [LocalPoissonFunction.from_expression(sb, spec.expression, spec.laplacian) for spec in specs]
    return sb, prepare_functions(sb, functions, config.solver, config.tolerance)


def _refined(sb: SampledBoundary, prepared: List[PreparedFunction], m: int) -> List[PreparedFunction]:
    fine = sample_cell_boundary(sb.cell, sb.n << m, sb.sigma, anchors=sb.anchors)
    return [refine(p, m, fine) for p in prepared]


def _benchmark_specs(benchmark: Benchmark) -> List[FunctionSpec]:
    if benchmark.v is benchmark.w:
        return [FunctionSpec("v", benchmark.v)]
    return [FunctionSpec("v", benchmark.v), FunctionSpec("w", benchmark.w)]


def _intermediate_rows(benchmark: Benchmark, sb: SampledBoundary, vp: PreparedFunction) -> List[ResultRow]:
    """Ошибки промежуточных величин гармонической части v (a₁, ψ̂, wnd, Φ)."""
    exact = benchmark.exact
    cell, n = benchmark.name, sb.n
    hd = vp.harmonic
    exact_wnd = (exact.harmonic_gradient(sb.points) * sb.weighted_normal).sum(axis=1)
    rows = [ResultRow.against(cell, n, f"a{j + 1}", a, ref)
            for j, (a, ref) in enumerate(zip(hd.log_coefficients, exact.log_coefficients))]
    rows.append(ResultRow.error_metric(cell, n, "psi_hat",
                                       constant_aligned_error(sb, exact.psi_hat(sb.points), hd.psi_hat)))
    rows.append(ResultRow.error_metric(cell, n, "wnd",
                                       weighted_trace_error(sb, exact_wnd, hd.weighted_normal_derivative)))
    rows.append(ResultRow.error_metric(cell, n, "Phi",
                                       linear_aligned_error(sb, exact.anti_laplacian(sb.points),
                                                            vp.anti_laplacian.values)))
    return rows


def benchmark_rows(benchmark: Benchmark, n: int, config: RunConfig) -> List[ResultRow]:
    """
    Строки таблицы встроенного теста для одного n.

    Args:
        benchmark: встроенный тест
        n: половина числа узлов на ребро
        config: параметры запуска

    Returns:
        Промежуточные величины (если известны точные) и скалярные произведения
    """
    specs = _benchmark_specs(benchmark)
    sb, prepared = _prepare(benchmark.cell, specs, n, config)
    vp, wp = prepared[0], prepared[-1]

    rows = []
    if benchmark.exact is not None:
        rows.extend(_intermediate_rows(benchmark, sb, vp))
    h1_row = ResultRow.against(benchmark.name, n, "h1", h1_semi(vp, wp), benchmark.h1_reference)
    rows.append(h1_row)
    rows.append(ResultRow.against(benchmark.name, n, "l2", l2(vp, wp), benchmark.l2_reference))

    if config.refine:
        fine = _refined(sb, prepared, config.refine)
        rows.append(ResultRow.against(benchmark.name, n, "h1_refined", h1_semi(fine[0], fine[-1]),
                                      benchmark.h1_reference))
        rows.append(ResultRow.against(benchmark.name, n, "l2_refined", l2(fine[0], fine[-1]),
                                      benchmark.l2_reference))
    logger.info(f"Тест {benchmark.name}, n={n}: H¹ ошибка {h1_row.abs_error:.3e}")
    return rows


def benchmark_oracle_rows(benchmark: Benchmark, config: RunConfig) -> List[ResultRow]:
    """Значения оракула сравниваются с эталонами теста (n — наибольшее из списка)."""
    h1, l2_value = oracle_products(benchmark.cell, benchmark.v, benchmark.w)
    n = config.largest_n
    return [
        ResultRow.against(benchmark.name, n, "h1_oracle", h1, benchmark.h1_reference),
        ResultRow.against(benchmark.name, n, "l2_oracle", l2_value, benchmark.l2_reference),
    ]


def run_benchmark(name: str, config: RunConfig) -> List[ResultRow]:
    """
    Последовательно посчитать встроенный тест для всех запрошенных n.

    Raises:
        InvalidParameterError: неизвестное имя теста
    """
    benchmark = get_benchmark(name)
    rows = []
    for n in config.requested_n:
        rows.extend(benchmark_rows(benchmark, n, config))
    if config.oracle:
        rows.extend(benchmark_oracle_rows(benchmark, config))
    return rows


def _pairs(specs: Sequence[FunctionSpec]) -> List[Tuple[int, int]]:
    if len(specs) == 2:
        return [(0, 1)]
    return [(i, j) for i in range(len(specs)) for j in range(i, len(specs))]


def _pair_name(specs: Sequence[FunctionSpec], i: int, j: int) -> str:
    return f"{specs[i].name},{specs[j].name}"


def custom_oracle(cell: PuncturedCell, specs: Sequence[FunctionSpec]) -> PairValues:
    """
    Оракул для пар функций, заданных выражениями без явного Δv.
    """
    values = {}
    for i, j in _pairs(specs):
        if specs[i].laplacian is not None or specs[j].laplacian is not None:
            logger.warning(f"Оракул пропущен для пары ({_pair_name(specs, i, j)}): Δv задан явно")
            continue
        values[(i, j)] = oracle_products(cell, specs[i].expression, specs[j].expression)
    return values


def _oracle_rows(cell: PuncturedCell, specs: Sequence[FunctionSpec], store: PairValues,
                 config: RunConfig) -> List[ResultRow]:
    """Посчитать оракул, сохранить значения в store и вернуть их строками таблицы."""
    store.update(custom_oracle(cell, specs))
    rows = []
    for (i, j), values in sorted(store.items()):
        label = _pair_name(specs, i, j)
        rows.append(ResultRow(cell.name, config.largest_n, f"h1_oracle[{label}]", values[0]))
        rows.append(ResultRow(cell.name, config.largest_n, f"l2_oracle[{label}]", values[1]))
    return rows


def custom_rows(cell: PuncturedCell, specs: Sequence[FunctionSpec], n: int, config: RunConfig,
                oracle_values: Optional[PairValues] = None) -> List[ResultRow]:
    """
    Скалярные произведения пользовательских функций для одного n.

    Для двух функций считается пара (v, w), для другого числа функций все пары i ≤ j.
    При наличии значений оракула они служат эталоном.
    """
    sb, prepared = _prepare(cell, specs, n, config)
    if config.refine:
        prepared = _refined(sb, prepared, config.refine)
    if oracle_values is None:
        oracle_values = {}

    rows = []
    for i, j in _pairs(specs):
        label = _pair_name(specs, i, j)
        products = (h1_semi(prepared[i], prepared[j]), l2(prepared[i], prepared[j]))
        references = oracle_values.get((i, j))
        for k, kind in enumerate(("h1", "l2")):
            quantity = f"{kind}[{label}]"
            if references is None:
                rows.append(ResultRow(cell.name, n, quantity, products[k]))
            else:
                rows.append(ResultRow.against(cell.name, n, quantity, products[k], references[k]))
    logger.info(f"Ячейка {cell.name}, n={n}: посчитано пар функций {len(rows) // 2}")
    return rows


def _custom_inputs(config: RunConfig,
                   specs: Optional[Sequence[FunctionSpec]]) -> Tuple[PuncturedCell, List[FunctionSpec]]:
    cell = load_cell(config.geometry) if config.geometry else get_benchmark(config.cell).cell
    if specs is None:
        specs = load_function_specs(config.functions)
    return cell, list(specs)


def run_custom(config: RunConfig, specs: Optional[Sequence[FunctionSpec]] = None) -> List[ResultRow]:
    """
    Посчитать скалярные произведения пользовательских функций на ячейке из config.

    Args:
        config: параметры запуска (--geometry или --cell)
        specs: описания функций; по умолчанию читаются из config.functions

    Returns:
        Строки таблицы для всех запрошенных n
    """
    cell, specs = _custom_inputs(config, specs)
    oracle_values = custom_oracle(cell, specs) if config.oracle else None
    rows = []
    for n in config.requested_n:
        rows.extend(custom_rows(cell, specs, n, config, oracle_values))
    return rows


def interior_values(cell: PuncturedCell, spec: FunctionSpec,
                    config: RunConfig) -> Tuple[InteriorValues, Optional[np.ndarray], Optional[np.ndarray]]:
    """
    Значения функции на равномерной сетке при наибольшем n.

    Returns:
        (результат, точные значения, точные градиенты); точные известны,
        если функция задана выражением без явного Δv
    """
    sb, (prepared,) = _prepare(cell, [spec], config.largest_n, config)
    points = grid_points(sb, config.interior_grid)
    result = cauchy_eval(InteriorQuery(points, prepared, epsilon=config.epsilon))
    if spec.laplacian is not None:
        return result, None, None
    return result, spec.expression.evaluate(points), spec.expression.gradient(points)


@dataclass(frozen=True)
class RunJob:
    """Независимая единица работы; n = None для заданий без разбиения."""
    cell: str
    n: Optional[int]
    action: Callable[[], object]


class BenchmarkRunner:
    def __init__(self, config: RunConfig, results: Optional[ResultsTable] = None):
        """
        Инициализация исполнителя.

        Args:
            config: параметры запуска
            results: таблица для строк результатов (создаётся при None)
        """
        self.config = config
        self.results = results if results is not None else ResultsTable()
        self.interior: Optional[Tuple[InteriorValues, Optional[np.ndarray], Optional[np.ndarray]]] = None

    def plan(self) -> Tuple[List[RunJob], Optional[RunJob]]:
        """
        Составить список заданий в детерминированном порядке.

        Returns:
            (задания со строками таблицы, задание внутренних значений или None)
        """
        config = self.config
        if config.functions is None:
            benchmark = get_benchmark(config.cell)
            cell = benchmark.cell
            jobs = [RunJob(cell.name, n, lambda n=n: benchmark_rows(benchmark, n, config))
                    for n in config.requested_n]
            if config.oracle:
                jobs.append(RunJob(cell.name, None, lambda: benchmark_oracle_rows(benchmark, config)))
            interior_spec = FunctionSpec("v", benchmark.v)
        else:
            cell, specs = _custom_inputs(config, None)
            oracle_values: PairValues = {}
            jobs = []
            if config.oracle:
                jobs.append(RunJob(cell.name, None, lambda: _oracle_rows(cell, specs, oracle_values, config)))
            jobs.extend(RunJob(cell.name, n, lambda n=n: custom_rows(cell, specs, n, config, oracle_values))
                        for n in config.requested_n)
            interior_spec = specs[0]

        interior_job = None
        if config.interior_grid is not None:
            interior_job = RunJob(cell.name, config.largest_n,
                                  lambda: interior_values(cell, interior_spec, config))
        return jobs, interior_job

    async def _execute(self, job: RunJob, semaphore: asyncio.Semaphore):
        async with semaphore:
            try:
                return await asyncio.to_thread(job.action)
            except PoissonCellError as e:
                self.results.add_failure(job.cell, job.n, str(e))
                return None

    async def run(self) -> ResultsTable:
        """Выполнить все задания и записать CSV."""
        config = self.config
        jobs, interior_job = self.plan()
        logger.info(f"Запуск {len(jobs)} заданий, параллельно не более {config.jobs}")
        semaphore = asyncio.Semaphore(config.jobs)

        if config.oracle and config.functions is not None:
            # эталоны оракула нужны до расчёта строк
            outcomes = [await self._execute(jobs[0], semaphore)]
            outcomes += await asyncio.gather(*(self._execute(job, semaphore) for job in jobs[1:]))
        else:
            outcomes = await asyncio.gather(*(self._execute(job, semaphore) for job in jobs))
        for rows in outcomes:
            if rows:
                self.results.add_rows(rows)
        if config.convergence:
            self.results.add_rows(self.results.convergence_rows())

        if interior_job is not None:
            self.interior = await self._execute(interior_job, semaphore)
            if self.interior is not None:
                write_interior_csv(config.interior_out, *self.interior)

        self.results.write_csv(config.out if config.out else sys.stdout)
        stats = self.results.get_stats()
        logger.info(
            f"Готово: {stats['rows']} строк, ошибок расчёта {stats['failures']}, "
            f"наибольшая абсолютная ошибка {stats['max_abs_error']}"
        )
        return self.results
