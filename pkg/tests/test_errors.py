"""
Тесты для модуля errors.py
"""
import pytest

from src.errors import (
    CellMismatchError,
    GeometryError,
    InvalidParameterError,
    ParseError,
    PoissonCellError,
    SolverError,
)


@pytest.mark.parametrize("error_type", [GeometryError, InvalidParameterError, CellMismatchError, ParseError])
def test_input_errors_are_value_errors(error_type):
    """Тест: ошибки входных данных перехватываются и как ValueError, и как PoissonCellError."""
    error = error_type("сообщение")

    assert isinstance(error, ValueError)
    assert isinstance(error, PoissonCellError)


def test_parse_error_location():
    """Тест формирования сообщения с номером строки и полем."""
    error = ParseError("Отсутствует поле", field="components[0].edges", line=7)

    assert error.field == "components[0].edges"
    assert error.line == 7
    assert str(error) == "[строка 7, поле components[0].edges] Отсутствует поле"
    assert str(ParseError("Без места")) == "Без места"


def test_solver_error_condition():
    """Тест: оценка обусловленности попадает в сообщение."""
    error = SolverError("Не решено", condition=1.5e17)

    assert isinstance(error, RuntimeError)
    assert error.condition == 1.5e17
    assert "cond ≈ 1.500e+17" in str(error)
    assert SolverError("Не решено").condition is None
