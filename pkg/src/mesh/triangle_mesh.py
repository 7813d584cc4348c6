from typing import Callable

import numpy as np
from loguru import logger

from src.consts import BoundaryTag, Diagonal, Subdomain
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import MeshError


class TriangleMesh:
    """
    Треугольная сетка одной подобласти.

    Локальное ребро i треугольника лежит напротив его вершины i и
    проходится от вершины (i+1)%3 к вершине (i+2)%3.
    Глобальное ребро ориентировано от меньшего номера вершины к большему,
    его глобальная нормаль - касательная, повёрнутая по часовой стрелке.
    Знак ребра в треугольнике равен +1, если глобальная нормаль внешняя.
    """

    def __init__(
            self,
            vertices: np.ndarray,
            triangles: np.ndarray,
            subdomain: Subdomain,
            boundary_tags: dict[int, BoundaryTag] | None = None,
    ):
        self.vertices = np.ascontiguousarray(vertices, dtype=float)
        self.triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        self.subdomain = subdomain

        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2:
            abort('Вершины сетки должны быть массивом (N, 2)', MeshError)
        if self.triangles.ndim != 2 or self.triangles.shape[1] != 3:
            abort('Треугольники сетки должны быть массивом (M, 3)', MeshError)

        self._build_edges()
        self.boundary_tags: dict[int, BoundaryTag] = dict(boundary_tags or {})
        self._check_invariants()

        for array in (self.vertices, self.triangles, self.edges,
                      self.tri_edges, self.tri_edge_signs, self.edge_cells):
            array.flags.writeable = False

    def _build_edges(self):
        local = np.stack(
            [self.triangles[:, [(i + 1) % 3, (i + 2) % 3]] for i in range(3)],
            axis=1,
        )  # (M, 3, 2) в порядке обхода
        ordered = np.sort(local.reshape(-1, 2), axis=1)
        self.edges, inverse = np.unique(ordered, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        self.tri_edges = inverse.reshape(-1, 3)
        self.tri_edge_signs = np.where(
            local[:, :, 0] < local[:, :, 1], 1.0, -1.0
        )

        counts = np.bincount(inverse, minlength=len(self.edges))
        if np.any(counts > 2):
            bad = int(np.argmax(counts > 2))
            abort(f'Ребро {bad} принадлежит больше чем двум треугольникам',
                  MeshError)

        self.edge_cells = -np.ones((len(self.edges), 2), dtype=np.int64)
        self.edge_local = -np.ones((len(self.edges), 2), dtype=np.int64)
        for flat, edge in enumerate(inverse):
            cell, local_index = divmod(flat, 3)
            slot = 0 if self.edge_cells[edge, 0] < 0 else 1
            self.edge_cells[edge, slot] = cell
            self.edge_local[edge, slot] = local_index
        self.edge_local.flags.writeable = False

    def _check_invariants(self):
        areas = self.areas
        if np.any(areas <= 0):
            bad = int(np.argmin(areas))
            abort(
                f'Треугольник {bad} имеет неположительную площадь {areas[bad]}',
                MeshError,
            )

        boundary = set(self.boundary_edges.tolist())
        for edge in self.boundary_tags:
            if edge not in boundary:
                abort(f'Метка стоит на внутреннем ребре {edge}', MeshError)

        interior = ~self.is_boundary_edge
        cells = self.edge_cells[interior]
        local = self.edge_local[interior]
        first = self.tri_edge_signs[cells[:, 0], local[:, 0]]
        second = self.tri_edge_signs[cells[:, 1], local[:, 1]]
        if np.any(first * second != -1.0):
            abort('Знаки внутреннего ребра не противоположны', MeshError)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def is_boundary_edge(self) -> np.ndarray:
        return self.edge_cells[:, 1] < 0

    @property
    def boundary_edges(self) -> np.ndarray:
        return np.flatnonzero(self.is_boundary_edge)

    @property
    def jacobians(self) -> np.ndarray:
        """
        Якобианы аффинных отображений с опорного треугольника, (M, 2, 2).
        """

        v = self.vertices[self.triangles]
        return np.stack([v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]], axis=2)

    @property
    def areas(self) -> np.ndarray:
        return 0.5 * np.linalg.det(self.jacobians)

    @property
    def centroids(self) -> np.ndarray:
        return self.vertices[self.triangles].mean(axis=1)

    @property
    def edge_midpoints(self) -> np.ndarray:
        return self.vertices[self.edges].mean(axis=1)

    @property
    def edge_lengths(self) -> np.ndarray:
        a, b = self.vertices[self.edges[:, 0]], self.vertices[self.edges[:, 1]]
        return np.linalg.norm(b - a, axis=1)

    @property
    def h(self) -> float:
        return mesh_size(self)

    def edges_with_tag(self, tag: BoundaryTag) -> np.ndarray:
        return np.array(
            sorted(edge for edge, t in self.boundary_tags.items() if t == tag),
            dtype=np.int64,
        )

    def outward_normals(self, edges: np.ndarray) -> np.ndarray:
        """
        Единичные внешние нормали граничных рёбер, (len(edges), 2).
        """

        a = self.vertices[self.edges[edges, 0]]
        b = self.vertices[self.edges[edges, 1]]
        tangent = b - a
        normal = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)
        normal /= np.linalg.norm(normal, axis=1)[:, None]
        signs = self.tri_edge_signs[
            self.edge_cells[edges, 0], self.edge_local[edges, 0]
        ]
        return normal * signs[:, None]

    def with_tags(self, boundary_tags: dict[int, BoundaryTag]) -> 'TriangleMesh':
        return TriangleMesh(
            self.vertices, self.triangles, self.subdomain, boundary_tags
        )

    def tags_by_vertices(self) -> dict[tuple[int, int], BoundaryTag]:
        return {
            tuple(int(v) for v in self.edges[edge]): tag
            for edge, tag in self.boundary_tags.items()
        }

    def __repr__(self):
        return (
            f'<TriangleMesh({self.subdomain.value}, '
            f'vertices={self.n_vertices}, triangles={self.n_triangles}, '
            f'h={self.h:.4f})>'
        )


def mesh_size(mesh: TriangleMesh) -> float:
    """
    Максимальный диаметр треугольника (самое длинное ребро).
    """

    return float(mesh.edge_lengths.max())


def build_rectangle_mesh(
        bounds: tuple[float, float, float, float],
        nx: int,
        ny: int,
        diagonal: Diagonal = Diagonal.LEFT,
        subdomain: Subdomain = Subdomain.FLUID,
) -> TriangleMesh:
    """
    Структурированная сетка прямоугольника.

    :param bounds: (x0, x1, y0, y1).
    :param nx: Число ячеек по x.
    :param ny: Число ячеек по y.
    :param diagonal: LEFT - диагональ "\\", RIGHT - "/",
    CRISSCROSS - обе диагонали с узлом в центре ячейки.
    :param subdomain: Подобласть, которой принадлежит сетка.
    :return: Сетка без меток.
    """

    x0, x1, y0, y1 = bounds
    if nx < 1 or ny < 1:
        abort(f'Число ячеек должно быть не меньше 1 ({nx=}, {ny=})', MeshError)
    if not (x1 - x0 > 0 and y1 - y0 > 0):
        abort(f'Вырожденный прямоугольник {bounds}', MeshError)

    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    vertices = np.stack([gx.ravel(), gy.ravel()], axis=1)

    j, i = np.meshgrid(np.arange(ny), np.arange(nx), indexing='ij')
    i, j = i.ravel(), j.ravel()
    a = j * (nx + 1) + i
    b = a + 1
    c = b + nx + 1
    d = a + nx + 1

    if diagonal == Diagonal.LEFT:
        triangles = np.concatenate([
            np.stack([a, b, d], axis=1), np.stack([b, c, d], axis=1)
        ])
    elif diagonal == Diagonal.RIGHT:
        triangles = np.concatenate([
            np.stack([a, b, c], axis=1), np.stack([a, c, d], axis=1)
        ])
    else:
        centers = 0.5 * (vertices[a] + vertices[c])
        m = len(vertices) + np.arange(len(a))
        vertices = np.concatenate([vertices, centers])
        triangles = np.concatenate([
            np.stack([a, b, m], axis=1), np.stack([b, c, m], axis=1),
            np.stack([c, d, m], axis=1), np.stack([d, a, m], axis=1),
        ])

    mesh = TriangleMesh(vertices, triangles, subdomain)
    logger.debug(f'Построена сетка {mesh!r}')
    return mesh


def refine_uniform(mesh: TriangleMesh) -> TriangleMesh:
    """
    Делит каждый треугольник на 4 подобных через середины рёбер.
    Метки граничных рёбер наследуются половинками.
    """

    n = mesh.n_vertices
    midpoints = mesh.edge_midpoints
    vertices = np.concatenate([mesh.vertices, midpoints])

    v0, v1, v2 = mesh.triangles.T
    m0, m1, m2 = (n + mesh.tri_edges[:, i] for i in range(3))
    triangles = np.concatenate([
        np.stack([v0, m2, m1], axis=1),
        np.stack([m2, v1, m0], axis=1),
        np.stack([m1, m0, v2], axis=1),
        np.stack([m0, m1, m2], axis=1),
    ])

    child_tags = {}
    for edge, tag in mesh.boundary_tags.items():
        a, b = (int(v) for v in mesh.edges[edge])
        middle = n + edge
        child_tags[tuple(sorted((a, middle)))] = tag
        child_tags[tuple(sorted((middle, b)))] = tag

    refined = TriangleMesh(vertices, triangles, mesh.subdomain)
    return refined.with_tags(_tags_from_vertices(refined, child_tags))


def carve(
        mesh: TriangleMesh, predicate: Callable[[np.ndarray], np.ndarray]
) -> TriangleMesh:
    """
    Вырезает треугольники, центры которых удовлетворяют предикату.

    :param predicate: Функция от массива центров (M, 2) -> bool (M,).
    :return: Новая сетка без меток, неиспользуемые вершины удалены.
    """

    keep = ~np.asarray(predicate(mesh.centroids), dtype=bool)
    if not keep.any():
        abort('После вырезания не осталось ни одного треугольника', MeshError)

    triangles = mesh.triangles[keep]
    used, renumbered = np.unique(triangles, return_inverse=True)
    return TriangleMesh(
        mesh.vertices[used], renumbered.reshape(-1, 3), mesh.subdomain
    )


def _tags_from_vertices(
        mesh: TriangleMesh, tags: dict[tuple[int, int], BoundaryTag]
) -> dict[int, BoundaryTag]:
    lookup = {tuple(int(v) for v in edge): k for k, edge in enumerate(mesh.edges)}
    return {lookup[key]: tag for key, tag in tags.items()}


def dump_mesh(mesh: TriangleMesh, path) -> None:
    """
    Текстовый дамп сетки для отладки: одна запись на строку.
    """

    lines = [f'# {mesh.subdomain.value} mesh']
    lines += [
        f'node {k} {x:.16g} {y:.16g}' for k, (x, y) in enumerate(mesh.vertices)
    ]
    lines += [
        f'element {k} {a} {b} {c}' for k, (a, b, c) in enumerate(mesh.triangles)
    ]
    lines += [
        f'tag {edge} {mesh.edges[edge][0]} {mesh.edges[edge][1]} {tag.value}'
        for edge, tag in sorted(mesh.boundary_tags.items())
    ]
    with open(path, 'w', encoding='utf-8') as file:
        file.write('\n'.join(lines) + '\n')

