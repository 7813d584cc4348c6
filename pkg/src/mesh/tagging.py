from typing import Callable

import numpy as np
from loguru import logger

from src.consts import BoundaryTag, Config
from src.mesh.triangle_mesh import TriangleMesh
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import MeshError


EdgePredicate = Callable[[np.ndarray], bool]
TagRule = tuple[EdgePredicate, BoundaryTag]


def tag_boundaries(mesh: TriangleMesh, rules: list[TagRule]) -> TriangleMesh:
    """
    Размечает граничные рёбра сетки.

    :param mesh: Сетка (старые метки отбрасываются).
    :param rules: Пары (предикат от середины ребра, метка).
    :return: Новая сетка, у которой каждое граничное ребро имеет метку.
    """

    tags = {}
    midpoints = mesh.edge_midpoints
    for edge in mesh.boundary_edges:
        matched = [tag for predicate, tag in rules if predicate(midpoints[edge])]
        if not matched:
            abort(
                f'Граничное ребро {edge} ({midpoints[edge]}) не подходит '
                f'ни под одно правило',
                MeshError,
            )
        if len(matched) > 1:
            abort(
                f'Граничное ребро {edge} ({midpoints[edge]}) подходит '
                f'под несколько правил: {[t.value for t in matched]}',
                MeshError,
            )
        tags[int(edge)] = matched[0]

    counts = {
        tag.value: sum(1 for t in tags.values() if t == tag)
        for tag in set(tags.values())
    }
    logger.debug(f'Разметка {mesh.subdomain.value}: {counts}')
    return mesh.with_tags(tags)


def on_line_x(x: float, y_range: tuple[float, float] | None = None):
    """
    Предикат "середина ребра лежит на прямой x = const".
    """

    def predicate(point: np.ndarray) -> bool:
        if abs(point[0] - x) > Config.GEOMETRY_TOL:
            return False
        return y_range is None or _inside(point[1], y_range)

    return predicate


def on_line_y(y: float, x_range: tuple[float, float] | None = None):
    def predicate(point: np.ndarray) -> bool:
        if abs(point[1] - y) > Config.GEOMETRY_TOL:
            return False
        return x_range is None or _inside(point[0], x_range)

    return predicate


def outside_x(y: float, x_range: tuple[float, float]):
    """
    Предикат "на прямой y = const, но вне интервала по x".
    """

    def predicate(point: np.ndarray) -> bool:
        return (abs(point[1] - y) <= Config.GEOMETRY_TOL
                and not _inside(point[0], x_range))

    return predicate


def _inside(value: float, bounds: tuple[float, float]) -> bool:
    low, high = bounds
    return low - Config.GEOMETRY_TOL <= value <= high + Config.GEOMETRY_TOL
