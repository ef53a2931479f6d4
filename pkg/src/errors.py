"""
Иерархия исключений библиотеки.

Все ошибки, которые раннер умеет перехватывать и записывать в таблицу
результатов, наследуются от PoissonCellError. Ошибки входных данных
дополнительно являются ValueError, как и ошибки конфигурации в Config.
"""
from typing import Optional


class PoissonCellError(Exception):
    """Базовое исключение для всех вычислений на ячейке."""


class GeometryError(PoissonCellError, ValueError):
    """Некорректная геометрия: незамкнутая цепочка, касп, неверная ориентация."""


class InvalidParameterError(PoissonCellError, ValueError):
    """Недопустимое значение числового параметра (n, sigma, длины массивов)."""


class CellMismatchError(PoissonCellError, ValueError):
    """Функции подготовлены на разных дискретизациях границы."""


class ParseError(PoissonCellError, ValueError):
    """
    Ошибка разбора файла геометрии или описания функций.

    Args:
        message: текст ошибки
        field: путь к полю в документе (например, components[1].edges[0].radius)
        line: номер строки (для синтаксических ошибок YAML)
    """

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"строка {line}")
        if field:
            location.append(f"поле {field}")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class SolverError(PoissonCellError, RuntimeError):
    """
    Линейная система не решена с требуемой точностью.

    Args:
        message: текст ошибки
        condition: оценка числа обусловленности матрицы (если известна)
    """

    def __init__(self, message: str, condition: Optional[float] = None):
        self.condition = condition
        if condition is not None:
            message = f"{message} (cond ≈ {condition:.3e})"
        super().__init__(message)
