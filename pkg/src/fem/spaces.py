from typing import NamedTuple

import numpy as np
from loguru import logger

from src.consts import BoundaryTag, Field, SpaceKind, Subdomain
from src.fem.bdm import piola_map, reference_bdm1_basis
from src.mesh import TraceMesh, TriangleMesh
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import SpaceError


SKEW = np.array([[0.0, 1.0], [-1.0, 0.0]])

# Барицентрические градиенты на опорном треугольнике
_REFERENCE_GRADIENTS = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])

TRACE_KINDS = (SpaceKind.P1_TRACE_SCALAR, SpaceKind.P1_TRACE_VECTOR)


class FunctionSpace:
    """
    Дискретное пространство на сетке подобласти или на разбиении интерфейса.

    cell_dofs[c, j] - глобальная степень свободы локальной функции j ячейки
    (или отрезка интерфейса) c, cell_signs[c, j] - её знак ориентации.
    """

    def __init__(
            self,
            kind: SpaceKind,
            mesh: TriangleMesh,
            n_dofs: int,
            cell_dofs: np.ndarray,
            cell_signs: np.ndarray | None = None,
            trace: TraceMesh | None = None,
            constrained: np.ndarray | None = None,
    ):
        self.kind = kind
        self.mesh = mesh
        self.trace = trace
        self.n_dofs = int(n_dofs)
        self.cell_dofs = np.asarray(cell_dofs, dtype=np.int64)
        self.cell_signs = (
            np.ones(self.cell_dofs.shape) if cell_signs is None
            else np.asarray(cell_signs, dtype=float)
        )
        self.constrained = (
            np.zeros(self.n_dofs, dtype=bool) if constrained is None
            else np.asarray(constrained, dtype=bool)
        )

        for array in (self.cell_dofs, self.cell_signs, self.constrained):
            array.flags.writeable = False

    @property
    def subdomain(self) -> Subdomain:
        return self.mesh.subdomain

    @property
    def n_local(self) -> int:
        return self.cell_dofs.shape[1]

    @property
    def is_trace(self) -> bool:
        return self.kind in TRACE_KINDS

    def __repr__(self):
        return (
            f'<FunctionSpace({self.kind.value}, {self.subdomain.value}, '
            f'dofs={self.n_dofs})>'
        )


class Tabulation(NamedTuple):
    """
    Физические значения базисных функций в точках ячеек.

    values - (C, n, Q, *форма значения); divergence и gradient есть
    не у всех пространств.
    """

    values: np.ndarray
    divergence: np.ndarray | None
    gradient: np.ndarray | None
    dofs: np.ndarray

    def to_dict(self):
        return self._asdict()


class Spaces(NamedTuple):
    """
    Все пространства задачи в порядке блоков неизвестных.
    """

    sigma_f: FunctionSpace
    u_p: FunctionSpace
    eta_p: FunctionSpace
    u_f: FunctionSpace
    p_p: FunctionSpace
    gamma_f: FunctionSpace
    phi: FunctionSpace
    lambda_: FunctionSpace

    def by_field(self, field: Field) -> FunctionSpace:
        return self[list(Field).index(field)]

    def sizes(self) -> tuple[int, ...]:
        return tuple(space.n_dofs for space in self)

    def to_dict(self):
        return self._asdict()


def _bdm_dofs(mesh: TriangleMesh) -> tuple[np.ndarray, np.ndarray]:
    signs = mesh.tri_edge_signs
    k = np.array([0, 1])
    positive = 2 * mesh.tri_edges[:, :, None] + k
    negative = 2 * mesh.tri_edges[:, :, None] + (1 - k)
    dofs = np.where(signs[:, :, None] > 0, positive, negative)
    return dofs.reshape(-1, 6), np.repeat(signs, 2, axis=1)


def bdm1_vector_space(mesh: TriangleMesh) -> FunctionSpace:
    dofs, signs = _bdm_dofs(mesh)
    return FunctionSpace(
        SpaceKind.BDM1_VECTOR, mesh, 2 * mesh.n_edges, dofs, signs
    )


def bdm1_tensor_space(mesh: TriangleMesh) -> FunctionSpace:
    """
    Тензоры, каждая строка которых лежит в BDM1: строка r занимает
    степени свободы [r * n_bdm, (r + 1) * n_bdm).
    """

    dofs, signs = _bdm_dofs(mesh)
    n_bdm = 2 * mesh.n_edges
    return FunctionSpace(
        SpaceKind.BDM1_TENSOR_ROWS, mesh, 2 * n_bdm,
        np.concatenate([dofs, dofs + n_bdm], axis=1),
        np.concatenate([signs, signs], axis=1),
    )


def p0_space(mesh: TriangleMesh, kind: SpaceKind) -> FunctionSpace:
    cells = np.arange(mesh.n_triangles)
    if kind == SpaceKind.P0_VECTOR:
        dofs = np.stack([2 * cells, 2 * cells + 1], axis=1)
        return FunctionSpace(kind, mesh, 2 * mesh.n_triangles, dofs)
    if kind in (SpaceKind.P0_SCALAR, SpaceKind.P0_SKEW):
        return FunctionSpace(kind, mesh, mesh.n_triangles, cells[:, None])
    abort(f'{kind.value} не является пространством P0', SpaceError)


def p1_vector_space(mesh: TriangleMesh) -> FunctionSpace:
    """
    Непрерывные кусочно-линейные векторы: dof 2 * вершина + компонента.
    Вершины внешней границы помечены как закреплённые.
    """

    triangles = mesh.triangles
    dofs = np.stack(
        [2 * triangles[:, i // 2] + i % 2 for i in range(6)], axis=1
    )
    external = [
        edge for edge, tag in mesh.boundary_tags.items()
        if tag != BoundaryTag.INTERFACE
    ]
    constrained = np.zeros(2 * mesh.n_vertices, dtype=bool)
    vertices = np.unique(mesh.edges[external]) if external else []
    for c in (0, 1):
        constrained[2 * np.asarray(vertices, dtype=np.int64) + c] = True
    return FunctionSpace(
        SpaceKind.P1_VECTOR_CONTINUOUS, mesh, 2 * mesh.n_vertices, dofs,
        constrained=constrained,
    )


def trace_space(
        mesh: TriangleMesh, trace: TraceMesh, kind: SpaceKind
) -> FunctionSpace:
    """
    Непрерывные P1 функции на собственном разбиении интерфейса.
    "Ячейки" пространства - отрезки разбиения.
    """

    if trace.subdomain != mesh.subdomain:
        abort(
            f'Разбиение интерфейса {trace!r} не принадлежит сетке {mesh!r}',
            SpaceError,
        )

    segments = trace.segments
    if kind == SpaceKind.P1_TRACE_SCALAR:
        return FunctionSpace(kind, mesh, trace.n_points, segments, trace=trace)
    if kind == SpaceKind.P1_TRACE_VECTOR:
        dofs = np.stack([
            2 * segments[:, 0], 2 * segments[:, 0] + 1,
            2 * segments[:, 1], 2 * segments[:, 1] + 1,
        ], axis=1)
        return FunctionSpace(kind, mesh, 2 * trace.n_points, dofs, trace=trace)
    abort(f'{kind.value} не является пространством следов', SpaceError)


def build_spaces(
        fluid_mesh: TriangleMesh,
        poro_mesh: TriangleMesh,
        fluid_trace: TraceMesh,
        poro_trace: TraceMesh,
) -> Spaces:
    if fluid_mesh.subdomain != Subdomain.FLUID:
        abort(f'Ожидалась сетка жидкости, получена {fluid_mesh!r}', SpaceError)
    if poro_mesh.subdomain != Subdomain.POROELASTIC:
        abort(f'Ожидалась сетка пороупругой области, получена {poro_mesh!r}',
              SpaceError)

    spaces = Spaces(
        sigma_f=bdm1_tensor_space(fluid_mesh),
        u_p=bdm1_vector_space(poro_mesh),
        eta_p=p1_vector_space(poro_mesh),
        u_f=p0_space(fluid_mesh, SpaceKind.P0_VECTOR),
        p_p=p0_space(poro_mesh, SpaceKind.P0_SCALAR),
        gamma_f=p0_space(fluid_mesh, SpaceKind.P0_SKEW),
        phi=trace_space(fluid_mesh, fluid_trace, SpaceKind.P1_TRACE_VECTOR),
        lambda_=trace_space(poro_mesh, poro_trace, SpaceKind.P1_TRACE_SCALAR),
    )
    logger.debug(
        'Пространства: ' + ', '.join(
            f'{field.value}={space.n_dofs}'
            for field, space in zip(Field, spaces)
        )
    )
    return spaces


def cell_weights(mesh: TriangleMesh, weights: np.ndarray) -> np.ndarray:
    """
    Физические веса квадратуры, (M, Q).
    """

    return 2.0 * mesh.areas[:, None] * weights[None, :]


def to_reference(
        mesh: TriangleMesh, cells: np.ndarray, points: np.ndarray
) -> np.ndarray:
    """
    Опорные координаты физических точек points (P, 2) в ячейках cells (P,).
    """

    origin = mesh.vertices[mesh.triangles[cells, 0]]
    inverse = np.linalg.inv(mesh.jacobians[cells])
    return np.einsum('pij,pj->pi', inverse, points - origin)


def to_physical(mesh: TriangleMesh, ref_points: np.ndarray) -> np.ndarray:
    """
    Образы опорных точек (Q, 2) во всех ячейках, (M, Q, 2).
    """

    origin = mesh.vertices[mesh.triangles[:, 0]]
    return origin[:, None, :] + np.einsum(
        'mij,qj->mqi', mesh.jacobians, ref_points
    )


def tabulate(
        space: FunctionSpace,
        ref_points: np.ndarray,
        cells: np.ndarray | None = None,
) -> Tabulation:
    """
    Базисные функции пространства в общих опорных точках всех ячеек.

    :param ref_points: Опорные координаты, (Q, 2).
    :param cells: Номера ячеек (по умолчанию все).
    :return: Tabulation с осями (C, n, Q, ...).
    """

    if space.is_trace:
        abort(f'Пространство следов {space!r} табулируется по отрезкам',
              SpaceError)
    if cells is None:
        cells = np.arange(space.mesh.n_triangles)
    ref_points = np.atleast_2d(np.asarray(ref_points, dtype=float))
    return _tabulate(space, cells, ref_points[None])


def tabulate_at(
        space: FunctionSpace, cells: np.ndarray, ref_points: np.ndarray
) -> Tabulation:
    """
    Базисные функции в своей опорной точке для каждой ячейки.

    :param cells: Номера ячеек, (P,).
    :param ref_points: Опорные координаты, (P, 2).
    :return: Tabulation с осями (P, n, ...), без оси точек.
    """

    table = _tabulate(space, np.asarray(cells), np.asarray(ref_points)[:, None])
    return Tabulation(
        values=table.values[:, :, 0],
        divergence=None if table.divergence is None
        else table.divergence[:, :, 0],
        gradient=None if table.gradient is None else table.gradient[:, :, 0],
        dofs=table.dofs,
    )


def _tabulate(
        space: FunctionSpace, cells: np.ndarray, ref_points: np.ndarray
) -> Tabulation:
    """
    :param ref_points: (1, Q, 2) - общие точки, (C, Q, 2) - свои у ячеек.
    """

    mesh = space.mesh
    n_cells = len(cells)
    per_cell, n_points = ref_points.shape[0], ref_points.shape[1]
    dofs = space.cell_dofs[cells]
    signs = space.cell_signs[cells]
    kind = space.kind

    if kind in (SpaceKind.BDM1_VECTOR, SpaceKind.BDM1_TENSOR_ROWS):
        flat, flat_div = reference_bdm1_basis(ref_points.reshape(-1, 2))
        ref_values = flat.reshape(6, per_cell, n_points, 2).transpose(1, 0, 2, 3)
        ref_div = flat_div.reshape(6, per_cell, n_points).transpose(1, 0, 2)
        if per_cell == 1:
            ref_values, ref_div = ref_values[0], ref_div[0]
        values, divergence = piola_map(
            mesh.jacobians[cells], ref_values, ref_div
        )
        sign = signs[:, :6]
        values = values * sign[:, :, None, None]
        divergence = divergence * sign[:, :, None]
        if kind == SpaceKind.BDM1_VECTOR:
            return Tabulation(values, divergence, None, dofs)

        tensor = np.zeros((n_cells, 12, n_points, 2, 2))
        tensor_div = np.zeros((n_cells, 12, n_points, 2))
        for r in (0, 1):
            tensor[:, 6 * r:6 * r + 6, :, r, :] = values
            tensor_div[:, 6 * r:6 * r + 6, :, r] = divergence
        return Tabulation(tensor, tensor_div, None, dofs)

    if kind == SpaceKind.P0_SCALAR:
        return Tabulation(np.ones((n_cells, 1, n_points)), None, None, dofs)

    if kind == SpaceKind.P0_VECTOR:
        values = np.broadcast_to(
            np.eye(2)[None, :, None, :], (n_cells, 2, n_points, 2)
        ).copy()
        return Tabulation(values, None, None, dofs)

    if kind == SpaceKind.P0_SKEW:
        values = np.broadcast_to(SKEW, (n_cells, 1, n_points, 2, 2)).copy()
        return Tabulation(values, None, None, dofs)

    if kind == SpaceKind.P1_VECTOR_CONTINUOUS:
        x, y = ref_points[..., 0], ref_points[..., 1]
        barycentric = np.stack([1.0 - x - y, x, y], axis=1)  # (C|1, 3, Q)
        barycentric = np.broadcast_to(barycentric, (n_cells, 3, n_points))
        inverse_t = np.linalg.inv(mesh.jacobians[cells]).transpose(0, 2, 1)
        gradients = np.einsum('cij,kj->cki', inverse_t, _REFERENCE_GRADIENTS)

        values = np.zeros((n_cells, 6, n_points, 2))
        gradient = np.zeros((n_cells, 6, n_points, 2, 2))
        for i in range(3):
            for c in (0, 1):
                values[:, 2 * i + c, :, c] = barycentric[:, i]
                gradient[:, 2 * i + c, :, c, :] = gradients[:, i, None, :]
        divergence = np.einsum('cnqii->cnq', gradient)
        return Tabulation(values, divergence, gradient, dofs)

    abort(f'Табуляция {kind.value} не поддерживается', SpaceError)


def tabulate_trace(
        space: FunctionSpace, segments: np.ndarray, tau: np.ndarray
) -> Tabulation:
    """
    Функции пространства следов в точках отрезков собственного разбиения.

    :param segments: Номера отрезков, (P,).
    :param tau: Локальный параметр точки на отрезке в [0, 1], (P,).
    :return: Tabulation с осями (P, n, ...); gradient - производная
    по длине дуги.
    """

    if not space.is_trace:
        abort(f'{space!r} не является пространством следов', SpaceError)

    lengths = space.trace.lengths[segments]
    hats = np.stack([1.0 - tau, tau], axis=1)
    slopes = np.stack([-1.0 / lengths, 1.0 / lengths], axis=1)
    dofs = space.cell_dofs[segments]
    if space.kind == SpaceKind.P1_TRACE_SCALAR:
        return Tabulation(hats, None, slopes, dofs)

    values = np.zeros((len(segments), 4, 2))
    derivative = np.zeros((len(segments), 4, 2))
    for i in (0, 1):
        for c in (0, 1):
            values[:, 2 * i + c, c] = hats[:, i]
            derivative[:, 2 * i + c, c] = slopes[:, i]
    return Tabulation(values, None, derivative, dofs)
