"""
Тесты для модуля geometry_io.py
"""
import numpy as np
import pytest

from src.benchmarks import ghost_cell, pacman_cell, punctured_square_cell
from src.errors import ParseError
from src.geometry import sample_cell_boundary
from src.geometry_io import dump_cell, load_cell, parse_cell, save_cell
from tests.conftest import GEOMETRIES_DIR


@pytest.mark.parametrize("filename, factory", [
    ("punctured_square.yml", punctured_square_cell),
    ("pacman.yml", pacman_cell),
    ("ghost.yml", ghost_cell),
])
def test_example_files_match_builtin_cells(filename, factory):
    """Тест: файлы геометрии из репозитория описывают встроенные ячейки."""
    from_file = sample_cell_boundary(load_cell(GEOMETRIES_DIR / filename), 8)
    builtin = sample_cell_boundary(factory(), 8)

    assert from_file.cell.name == builtin.cell.name
    assert np.allclose(from_file.points, builtin.points, atol=1e-13)
    assert np.allclose(from_file.velocity, builtin.velocity, atol=1e-12)
    assert np.allclose(from_file.anchors, builtin.anchors)


def test_load_cell_from_temp_file(geometry_file):
    """Тест загрузки кольца из временного файла."""
    cell = load_cell(geometry_file)

    assert cell.name == "annulus"
    assert cell.num_holes == 1
    assert cell.anchors is None
    assert sample_cell_boundary(cell, 8).signed_area == pytest.approx(np.pi * 0.84, abs=1e-13)


def test_save_and_load(tmp_path):
    """Тест записи встроенной ячейки и повторного чтения."""
    path = tmp_path / "ghost.yml"
    save_cell(ghost_cell(), path)

    loaded = load_cell(path)

    original = sample_cell_boundary(ghost_cell(), 8)
    assert np.allclose(sample_cell_boundary(loaded, 8).points, original.points, atol=1e-14)


def test_dump_cell_structure():
    """Тест структуры документа."""
    document = dump_cell(punctured_square_cell())

    assert document["format_version"] == 1
    assert document["name"] == "punctured-square"
    assert [c["orientation"] for c in document["components"]] == ["counterclockwise", "clockwise"]
    assert document["components"][0]["edges"][0] == {
        "kind": "line", "start": [0.0, 0.0], "end": [1.0, 0.0], "corners": [True, True],
    }
    hole_edge = document["components"][1]["edges"][0]
    assert hole_edge["clockwise"] is True
    assert "corners" not in hole_edge
    assert document["anchors"] == [[0.5, 0.5]]


def test_yaml_syntax_error_reports_line(tmp_path):
    """Тест: синтаксическая ошибка YAML сообщает номер строки."""
    path = tmp_path / "broken.yml"
    path.write_text("format_version: 1\ncomponents:\n  - edges: [\n", encoding="utf-8")

    with pytest.raises(ParseError) as exc_info:
        load_cell(path)

    assert exc_info.value.line is not None
    assert "строка" in str(exc_info.value)


def test_missing_file(tmp_path):
    """Тест: отсутствующий файл превращается в ParseError."""
    with pytest.raises(ParseError):
        load_cell(tmp_path / "missing.yml")


def _document(edge):
    return {
        "format_version": 1,
        "components": [{"orientation": "counterclockwise", "edges": [edge]}],
    }


@pytest.mark.parametrize("document, field", [
    ({"components": []}, "format_version"),
    ({"format_version": 2, "components": []}, "format_version"),
    ({"format_version": 1, "components": []}, "components"),
    (_document({"kind": "spline"}), "components[0].edges[0].kind"),
    (_document({"kind": "closed_circle", "center": [0, 0]}), "components[0].edges[0].radius"),
    (_document({"kind": "closed_circle", "center": [0, 0], "radius": 1, "colour": "red"}),
     "components[0].edges[0]"),
    (_document({"kind": "line", "start": [0, 0], "end": [1, 0], "corners": [True]}),
     "components[0].edges[0].corners"),
    (_document({"kind": "closed_circle", "center": [0, 0], "radius": -1}), "components[0].edges[0]"),
    ({"format_version": 1, "components": [{"orientation": "sideways", "edges": []}]},
     "components[0].orientation"),
])
def test_parse_errors_report_field(document, field):
    """Тест: ошибки разбора указывают путь к полю."""
    with pytest.raises(ParseError) as exc_info:
        parse_cell(document)

    assert exc_info.value.field == field


def test_open_chain_reported_for_component():
    """Тест: незамкнутая цепочка сообщается как ошибка компоненты."""
    document = _document({"kind": "line", "start": [0, 0], "end": [1, 0]})

    with pytest.raises(ParseError) as exc_info:
        parse_cell(document)

    assert exc_info.value.field == "components[0]"


def test_wrong_anchor_count():
    """Тест: число точек ξ должно совпадать с числом дыр."""
    document = dump_cell(punctured_square_cell())
    document["anchors"] = [[0.5, 0.5], [0.1, 0.1]]

    with pytest.raises(ParseError) as exc_info:
        parse_cell(document)

    assert exc_info.value.field == "anchors"
