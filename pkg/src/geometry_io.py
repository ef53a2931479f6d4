"""
Чтение и запись файлов геометрии ячеек (YAML, format_version 1).

Пример документа:

    format_version: 1
    name: punctured-square
    components:
      - orientation: counterclockwise
        edges:
          - {kind: line, start: [0, 0], end: [1, 0], corners: [true, true]}
          ...
      - orientation: clockwise
        edges:
          - {kind: closed_circle, center: [0.5, 0.5], radius: 0.25, clockwise: true}
    anchors: [[0.5, 0.5]]   # необязательно
"""
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import yaml

from .errors import GeometryError, ParseError
from .geometry import REQUIRED_PARAMS, BoundaryComponent, EdgeKind, Orientation, ParametricEdge, PuncturedCell

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
OPTIONAL_PARAMS = ("rotation", "clockwise")


def load_yaml_document(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Прочитать YAML-документ, переводя синтаксические ошибки в ParseError с номером строки.
    """
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as stream:
            document = yaml.safe_load(stream)
    except OSError as e:
        error_msg = f"Не удалось открыть файл {path}: {e}"
        logger.error(error_msg)
        raise ParseError(error_msg) from e
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        error_msg = f"Синтаксическая ошибка YAML в {path}: {getattr(e, 'problem', e)}"
        logger.error(error_msg)
        raise ParseError(error_msg, line=line) from e
    if not isinstance(document, dict):
        raise ParseError(f"Файл {path} должен содержать словарь верхнего уровня")
    return document


def require(mapping: Dict[str, Any], key: str, field: str) -> Any:
    if not isinstance(mapping, dict):
        raise ParseError("Ожидался словарь", field=field)
    if key not in mapping:
        raise ParseError(f"Отсутствует обязательное поле {key}", field=f"{field}.{key}" if field else key)
    return mapping[key]


def _parse_edge(record: Dict[str, Any], field: str) -> ParametricEdge:
    kind_name = require(record, "kind", field)
    try:
        kind = EdgeKind(kind_name)
    except ValueError as e:
        raise ParseError(f"Неизвестный тип ребра {kind_name}", field=f"{field}.kind") from e

    params = {}
    for key in REQUIRED_PARAMS[kind] + OPTIONAL_PARAMS:
        if key in record:
            params[key] = record[key]
        elif key in REQUIRED_PARAMS[kind]:
            require(record, key, field)
    unknown = set(record) - set(params) - {"kind", "corners"}
    if unknown:
        raise ParseError(f"Неизвестные поля ребра: {', '.join(sorted(unknown))}", field=field)

    corners = record.get("corners", [False, False])
    if not (isinstance(corners, list) and len(corners) == 2 and all(isinstance(c, bool) for c in corners)):
        raise ParseError("corners должен быть списком из двух логических значений", field=f"{field}.corners")
    try:
        return ParametricEdge(kind, params, corners[0], corners[1])
    except (GeometryError, TypeError, ValueError) as e:
        raise ParseError(str(e), field=field) from e


def parse_cell(document: Dict[str, Any], source: str = "<document>") -> PuncturedCell:
    """
    Построить ячейку из разобранного документа.

    Args:
        document: словарь верхнего уровня
        source: имя источника для сообщений

    Returns:
        PuncturedCell
    """
    version = require(document, "format_version", "")
    if version != FORMAT_VERSION:
        raise ParseError(f"Неподдерживаемая версия формата {version}, ожидается {FORMAT_VERSION}",
                         field="format_version")
    name = str(document.get("name", Path(source).stem))
    records = require(document, "components", "")
    if not isinstance(records, list) or not records:
        raise ParseError("components должен быть непустым списком", field="components")

    components: List[BoundaryComponent] = []
    for k, record in enumerate(records):
        field = f"components[{k}]"
        orientation = require(record, "orientation", field)
        try:
            orientation = Orientation(orientation)
        except ValueError as e:
            raise ParseError(f"Неизвестная ориентация {orientation}", field=f"{field}.orientation") from e
        edge_records = require(record, "edges", field)
        if not isinstance(edge_records, list):
            raise ParseError("edges должен быть списком", field=f"{field}.edges")
        edges = tuple(_parse_edge(edge, f"{field}.edges[{i}]") for i, edge in enumerate(edge_records))
        try:
            components.append(BoundaryComponent(edges, orientation))
        except GeometryError as e:
            raise ParseError(str(e), field=field) from e

    anchors = document.get("anchors")
    try:
        cell = PuncturedCell(name=name, outer=components[0], holes=tuple(components[1:]),
                             anchors=tuple(map(tuple, anchors)) if anchors is not None else None)
    except (GeometryError, TypeError) as e:
        raise ParseError(str(e), field="anchors" if anchors is not None else "components") from e
    logger.info(f"Геометрия {name} загружена из {source}: {cell.num_edges} рёбер, {cell.num_holes} дыр")
    return cell


def load_cell(path: Union[str, Path]) -> PuncturedCell:
    """Прочитать ячейку из файла геометрии."""
    return parse_cell(load_yaml_document(path), str(path))


def _plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return [float(x) for x in value]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    return value


def dump_cell(cell: PuncturedCell) -> Dict[str, Any]:
    """Представить ячейку в виде документа формата FORMAT_VERSION."""
    components = []
    for component in cell.components:
        edges = []
        for edge in component.edges:
            record = {"kind": edge.kind.value}
            for key in REQUIRED_PARAMS[edge.kind]:
                record[key] = _plain(edge.params[key])
            if edge.kind in (EdgeKind.ELLIPSE_ARC, EdgeKind.CLOSED_ELLIPSE, EdgeKind.CLOSED_CIRCLE):
                record["rotation"] = _plain(edge.params["rotation"])
            if edge.is_closed_contour:
                record["clockwise"] = _plain(edge.params["clockwise"])
            else:
                record["corners"] = [edge.corner_left, edge.corner_right]
            edges.append(record)
        components.append({"orientation": component.orientation.value, "edges": edges})

    document = {"format_version": FORMAT_VERSION, "name": cell.name, "components": components}
    if cell.anchors is not None:
        document["anchors"] = [list(anchor) for anchor in cell.anchors]
    return document


def save_cell(cell: PuncturedCell, path: Union[str, Path]):
    """Записать ячейку в файл геометрии."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as stream:
        yaml.safe_dump(dump_cell(cell), stream, sort_keys=False, allow_unicode=True)
    logger.info(f"Геометрия {cell.name} сохранена в {path}")
