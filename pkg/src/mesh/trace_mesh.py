import numpy as np
from loguru import logger

from src.consts import BoundaryTag, Config, Subdomain
from src.mesh.triangle_mesh import TriangleMesh
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import MeshError


class TraceMesh:
    """
    Разбиение интерфейса на отрезки.

    Длина дуги отсчитывается от конца интерфейса с лексикографически
    наименьшими (x, y), поэтому обе стороны дают одну параметризацию.

    parent_edges[subdomain][k] - ребро сетки этой подобласти, внутри
    которого лежит отрезок k; parent_segments[subdomain][k] - номер
    отрезка собственного разбиения этой подобласти.
    """

    def __init__(
            self,
            breakpoints: np.ndarray,
            points: np.ndarray,
            parent_edges: dict[Subdomain, np.ndarray],
            parent_segments: dict[Subdomain, np.ndarray],
            subdomain: Subdomain | None = None,
            vertices: np.ndarray | None = None,
    ):
        self.breakpoints = np.asarray(breakpoints, dtype=float)
        self.points = np.asarray(points, dtype=float)
        self.parent_edges = {
            key: np.asarray(parent_edges[key], dtype=np.int64)
            for key in sorted(parent_edges, key=lambda s: s.value)
        }
        self.parent_segments = {
            key: np.asarray(parent_segments[key], dtype=np.int64)
            for key in sorted(parent_segments, key=lambda s: s.value)
        }
        self.subdomain = subdomain
        self.vertices = None if vertices is None else np.asarray(
            vertices, dtype=np.int64
        )

        if len(self.breakpoints) < 2 or np.any(np.diff(self.breakpoints) <= 0):
            abort('Точки разбиения интерфейса должны строго возрастать',
                  MeshError)

    @property
    def n_segments(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def n_points(self) -> int:
        return len(self.breakpoints)

    @property
    def segments(self) -> np.ndarray:
        """
        Пары соседних точек разбиения, (K, 2).
        """

        k = np.arange(self.n_segments)
        return np.stack([k, k + 1], axis=1)

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def length(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def tangents(self) -> np.ndarray:
        """
        Единичные касательные отрезков по направлению отсчёта дуги.
        """

        chords = np.diff(self.points, axis=0)
        return chords / np.linalg.norm(chords, axis=1)[:, None]

    def locate(self, s: np.ndarray) -> np.ndarray:
        """
        Номера отрезков, содержащих точки с длинами дуги s.
        """

        index = np.searchsorted(self.breakpoints, s, side='right') - 1
        return np.clip(index, 0, self.n_segments - 1)

    def point_at(self, s: np.ndarray) -> np.ndarray:
        segment = self.locate(s)
        tau = (s - self.breakpoints[segment]) / self.lengths[segment]
        start, end = self.points[segment], self.points[segment + 1]
        return start + tau[:, None] * (end - start)

    def __eq__(self, other):
        if not isinstance(other, TraceMesh):
            return NotImplemented
        if self.n_points != other.n_points:
            return False
        if self.parent_edges.keys() != other.parent_edges.keys():
            return False
        return (
                np.allclose(self.breakpoints, other.breakpoints,
                            rtol=0, atol=Config.GEOMETRY_TOL)
                and np.allclose(self.points, other.points,
                                rtol=0, atol=Config.GEOMETRY_TOL)
                and all(np.array_equal(self.parent_edges[key],
                                       other.parent_edges[key])
                        for key in self.parent_edges)
        )

    def __repr__(self):
        sides = ', '.join(key.value for key in self.parent_edges)
        return (
            f'<TraceMesh(segments={self.n_segments}, '
            f'length={self.length:.4f}, sides=[{sides}])>'
        )


def trace_mesh_size(trace: TraceMesh) -> float:
    return float(trace.lengths.max())


def extract_trace_mesh(mesh: TriangleMesh) -> TraceMesh:
    """
    Собственное разбиение интерфейса сетки подобласти.

    :param mesh: Размеченная сетка, у которой есть рёбра с меткой INTERFACE.
    :return: TraceMesh с вершинами интерфейса, упорядоченными по длине дуги.
    """

    edges = mesh.edges_with_tag(BoundaryTag.INTERFACE)
    if not len(edges):
        abort(f'У сетки {mesh!r} нет рёбер интерфейса', MeshError)

    neighbours: dict[int, list[tuple[int, int]]] = {}
    for edge in edges:
        a, b = (int(v) for v in mesh.edges[edge])
        neighbours.setdefault(a, []).append((b, int(edge)))
        neighbours.setdefault(b, []).append((a, int(edge)))

    ends = [v for v, items in neighbours.items() if len(items) == 1]
    if len(ends) != 2 or any(len(items) > 2 for items in neighbours.values()):
        abort(
            f'Интерфейс сетки {mesh.subdomain.value} не является '
            f'связной ломаной (концов: {len(ends)})',
            MeshError,
        )

    start = min(ends, key=lambda v: tuple(mesh.vertices[v]))
    chain, chain_edges = [start], []
    previous = None
    while len(chain_edges) < len(edges):
        options = [
            (v, e) for v, e in neighbours[chain[-1]] if e != previous
        ]
        if not options:
            break
        vertex, edge = options[0]
        chain.append(vertex)
        chain_edges.append(edge)
        previous = edge

    if len(chain_edges) != len(edges):
        abort(
            f'Интерфейс сетки {mesh.subdomain.value} несвязен: обойдено '
            f'{len(chain_edges)} из {len(edges)} рёбер',
            MeshError,
        )

    points = mesh.vertices[chain]
    breakpoints = np.concatenate(
        [[0.0], np.cumsum(np.linalg.norm(np.diff(points, axis=0), axis=1))]
    )
    trace = TraceMesh(
        breakpoints,
        points,
        parent_edges={mesh.subdomain: np.array(chain_edges)},
        parent_segments={mesh.subdomain: np.arange(len(chain_edges))},
        subdomain=mesh.subdomain,
        vertices=np.array(chain),
    )
    logger.debug(f'Разбиение интерфейса {mesh.subdomain.value}: {trace!r}')
    return trace


def merge_trace_partitions(first: TraceMesh, second: TraceMesh) -> TraceMesh:
    """
    Общее измельчение двух разбиений одного интерфейса.

    :return: TraceMesh с объединением точек разбиения; для каждой стороны
    известны ребро-родитель и отрезок-родитель каждого нового отрезка.
    """

    scale = max(first.length, second.length, 1.0)
    tol = Config.GEOMETRY_TOL * scale
    for name, i in (('начало', 0), ('конец', -1)):
        gap = np.linalg.norm(first.points[i] - second.points[i])
        if gap > tol:
            abort(
                f'Разбиения интерфейса не совпадают: {name} отличается '
                f'на {gap:.3e}',
                MeshError,
            )
    if abs(first.length - second.length) > tol:
        abort(
            f'Длины интерфейса не совпадают: {first.length} и {second.length}',
            MeshError,
        )

    candidates = np.sort(np.concatenate([first.breakpoints, second.breakpoints]))
    keep = np.concatenate([[True], np.diff(candidates) > tol])
    breakpoints = candidates[keep]
    breakpoints[-1] = first.length

    middles = 0.5 * (breakpoints[:-1] + breakpoints[1:])
    parent_edges, parent_segments = {}, {}
    for side in (first, second):
        segment = side.locate(middles)
        for key in side.parent_edges:
            parent_edges[key] = side.parent_edges[key][segment]
            parent_segments[key] = side.parent_segments[key][segment]

    merged = TraceMesh(
        breakpoints,
        first.point_at(breakpoints),
        parent_edges,
        parent_segments,
    )
    logger.debug(f'Общее разбиение интерфейса: {merged!r}')
    return merged
