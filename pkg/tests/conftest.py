"""
Конфигурация pytest и общие фикстуры для тестов.
"""
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from src.benchmarks import get_benchmark
from src.config import Config
from src.geometry import BoundaryComponent, Orientation, ParametricEdge, PuncturedCell, sample_cell_boundary
from src.inner_products import LocalPoissonFunction, prepare_functions

ROOT = Path(__file__).resolve().parent.parent
GEOMETRIES_DIR = ROOT / "geometries"
FUNCTIONS_DIR = ROOT / "functions"

ANNULUS_OUTER = 1.0
ANNULUS_INNER = 0.4


def make_disk(radius: float = 1.0, center=(0.0, 0.0)) -> PuncturedCell:
    """Круг без дыр: одна гладкая компонента."""
    return PuncturedCell("disk", BoundaryComponent((ParametricEdge.closed_circle(center, radius),)))


def make_annulus(outer: float = ANNULUS_OUTER, inner: float = ANNULUS_INNER) -> PuncturedCell:
    """Кольцо с центром в начале координат."""
    hole = BoundaryComponent((ParametricEdge.closed_circle((0.0, 0.0), inner, clockwise=True),),
                             Orientation.CLOCKWISE)
    return PuncturedCell("annulus", BoundaryComponent((ParametricEdge.closed_circle((0.0, 0.0), outer),)),
                         (hole,), anchors=((0.0, 0.0),))


@lru_cache(maxsize=None)
def sampled_benchmark(name: str, n: int):
    """Дискретизированная граница встроенной ячейки (кэшируется на всю сессию)."""
    return sample_cell_boundary(get_benchmark(name).cell, n)


@lru_cache(maxsize=None)
def prepared_benchmark(name: str, n: int):
    """
    Подготовленные v и w встроенного теста.

    Returns:
        (benchmark, boundary, vp, wp)
    """
    benchmark = get_benchmark(name)
    sb = sampled_benchmark(name, n)
    functions = [LocalPoissonFunction.from_expression(sb, benchmark.v),
                 LocalPoissonFunction.from_expression(sb, benchmark.w)]
    vp, wp = prepare_functions(sb, functions)
    return benchmark, sb, vp, wp


@pytest.fixture(scope="session")
def disk():
    return make_disk()


@pytest.fixture(scope="session")
def annulus():
    return make_annulus()


@pytest.fixture(scope="session")
def disk_boundary(disk):
    return sample_cell_boundary(disk, 32)


@pytest.fixture(scope="session")
def annulus_boundary(annulus):
    return sample_cell_boundary(annulus, 32)


@pytest.fixture(scope="session")
def square_boundary():
    """Квадрат с круглой дырой, n = 32."""
    return sampled_benchmark("punctured-square", 32)


@pytest.fixture(scope="session")
def ghost_boundary():
    return sampled_benchmark("ghost", 32)


@pytest.fixture
def geometry_file(tmp_path):
    """
    Создать временный файл геометрии с кольцом.
    """
    path = tmp_path / "annulus.yml"
    path.write_text(
        "format_version: 1\n"
        "name: annulus\n"
        "components:\n"
        "  - orientation: counterclockwise\n"
        "    edges:\n"
        "      - {kind: closed_circle, center: [0.0, 0.0], radius: 1.0}\n"
        "  - orientation: clockwise\n"
        "    edges:\n"
        "      - {kind: closed_circle, center: [0.0, 0.0], radius: 0.4, clockwise: true}\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def temp_config(monkeypatch):
    """
    Создать временную конфигурацию для тестов через переменные окружения.
    """
    monkeypatch.setenv('LOG_LEVEL', 'DEBUG')
    monkeypatch.setenv('KRESS_SIGMA', '6')
    monkeypatch.setenv('NYSTROM_SOLVER', 'iterative')
    monkeypatch.setenv('SOLVER_TOLERANCE', '1e-11')
    monkeypatch.setenv('INTERIOR_EPSILON', '0.05')
    monkeypatch.setenv('MAX_PARALLEL_RUNS', '2')
    monkeypatch.setenv('RESULTS_DIR', '/tmp/poisson-results')

    config = Config()

    yield config


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
