"""
Таблица результатов расчётов и запись CSV.
"""
import csv
import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Union

import numpy as np

from .interior import InteriorValues

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ("cell", "n", "quantity", "computed", "reference", "abs_error")
INTERIOR_COLUMNS = ("x1", "x2", "v", "dv_dx1", "dv_dx2", "skipped", "in_domain")
ORDER_SUFFIX = "_order"


def format_float(value: Optional[float]) -> str:
    """Научная запись с 16 значащими цифрами; пустое значение для None."""
    if value is None:
        return ""
    return f"{float(value):.15e}"


@dataclass(frozen=True)
class ResultRow:
    cell: str
    n: int
    quantity: str
    computed: float
    reference: Optional[float] = None
    abs_error: Optional[float] = None

    @classmethod
    def against(cls, cell: str, n: int, quantity: str, computed: float, reference: float) -> "ResultRow":
        """Строка с эталоном и абсолютной ошибкой."""
        return cls(cell, n, quantity, float(computed), float(reference), abs(float(computed) - float(reference)))

    @classmethod
    def error_metric(cls, cell: str, n: int, quantity: str, error: float) -> "ResultRow":
        """Строка для метрики ошибки: эталон 0, ошибка равна самому значению."""
        return cls(cell, n, quantity, float(error), 0.0, float(error))

    def as_record(self) -> List[str]:
        return [self.cell, str(self.n), self.quantity, format_float(self.computed),
                format_float(self.reference), format_float(self.abs_error)]


@dataclass(frozen=True)
class RunFailure:
    cell: str
    n: Optional[int]
    message: str


class ResultsTable:
    """Строки результатов в порядке добавления и список неудавшихся расчётов."""

    def __init__(self):
        self._rows: List[ResultRow] = []
        self._failures: List[RunFailure] = []

    def add_row(self, row: ResultRow):
        self._rows.append(row)

    def add_rows(self, rows: Iterable[ResultRow]):
        for row in rows:
            self.add_row(row)

    def add_failure(self, cell: str, n: Optional[int], message: str):
        self._failures.append(RunFailure(cell, n, message))
        logger.error(f"Расчёт {cell} (n={n}) завершился ошибкой: {message}")

    @property
    def rows(self) -> List[ResultRow]:
        return list(self._rows)

    @property
    def failures(self) -> List[RunFailure]:
        return list(self._failures)

    @property
    def has_failures(self) -> bool:
        return bool(self._failures)

    def convergence_rows(self) -> List[ResultRow]:
        """
        Наблюдаемый порядок log₂(e(n)/e(2n)) для каждой величины с известной ошибкой.

        Строка относится к меньшему n пары; пары без удвоения n пропускаются.
        """
        errors: Dict[tuple, Dict[int, float]] = {}
        for row in self._rows:
            if row.abs_error is None or row.quantity.endswith(ORDER_SUFFIX):
                continue
            errors.setdefault((row.cell, row.quantity), {})[row.n] = row.abs_error

        orders = []
        for (cell, quantity), by_n in errors.items():
            for n in sorted(by_n):
                coarse, fine = by_n[n], by_n.get(2 * n)
                if fine is None:
                    continue
                if coarse > 0 and fine > 0:
                    order = math.log2(coarse / fine)
                else:
                    order = math.nan
                orders.append(ResultRow(cell, n, f"{quantity}{ORDER_SUFFIX}", order))
        return orders

    def write_csv(self, target: Union[str, Path, TextIO, None] = None) -> str:
        """
        Записать таблицу в CSV (UTF-8, строка заголовка, '.' как десятичный разделитель).

        Args:
            target: путь, открытый поток или None (только вернуть текст)

        Returns:
            Текст CSV
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in self._rows:
            writer.writerow(row.as_record())
        text = buffer.getvalue()

        if isinstance(target, (str, Path)):
            path = Path(target)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            logger.info(f"Таблица результатов записана в {path}: {len(self._rows)} строк")
        elif target is not None:
            target.write(text)
        return text

    def get_stats(self) -> Dict:
        """
        Получить статистику по таблице.

        Returns:
            Словарь со статистикой
        """
        errors = [row.abs_error for row in self._rows
                  if row.abs_error is not None and not row.quantity.endswith(ORDER_SUFFIX)]
        return {
            'rows': len(self._rows),
            'cells': len({row.cell for row in self._rows}),
            'failures': len(self._failures),
            'max_abs_error': max(errors) if errors else None,
        }


def write_interior_csv(path: Union[str, Path], result: InteriorValues,
                       exact_values: Optional[np.ndarray] = None,
                       exact_gradients: Optional[np.ndarray] = None) -> Path:
    """
    Записать значения во внутренних точках.

    Если известны точные значения, добавляются столбцы abs_error_v и abs_error_grad.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with_exact = exact_values is not None and exact_gradients is not None
    columns = INTERIOR_COLUMNS + (("abs_error_v", "abs_error_grad") if with_exact else ())

    with path.open("w", encoding="utf-8", newline="") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for i, (x1, x2) in enumerate(result.points):
            record = [format_float(x1), format_float(x2), format_float(result.values[i]),
                      format_float(result.gradients[i, 0]), format_float(result.gradients[i, 1]),
                      str(int(result.skipped[i])), str(int(result.in_domain[i]))]
            if with_exact:
                if result.evaluated[i]:
                    record.append(format_float(abs(result.values[i] - exact_values[i])))
                    record.append(format_float(np.linalg.norm(result.gradients[i] - exact_gradients[i])))
                else:
                    record.extend(["", ""])
            writer.writerow(record)
    logger.info(f"Внутренние значения записаны в {path}: {len(result.points)} точек")
    return path
