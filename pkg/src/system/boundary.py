from typing import NamedTuple

import numpy as np
import scipy.sparse as sps
from loguru import logger

from src.consts import BoundaryTag, Config, Field, Subdomain
from src.fem import FunctionSpace, edge_moments, make_quadrature, tabulate_at
from src.fem.spaces import to_reference
from src.forms.assembly import assemble_vector
from src.mesh import TriangleMesh
from src.system.discretization import Discretization
from src.system.problem import BoundaryData
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import BoundaryConditionError


ALLOWED_TAGS = {
    Subdomain.FLUID: {
        BoundaryTag.FLUID_DIRICHLET, BoundaryTag.FLUID_NEUMANN,
        BoundaryTag.INTERFACE,
    },
    Subdomain.POROELASTIC: {
        BoundaryTag.PORO_DIRICHLET, BoundaryTag.PORO_NEUMANN,
        BoundaryTag.INTERFACE,
    },
}


class Constraints(NamedTuple):
    """
    Главные условия: глобальные степени свободы и их значения.
    """

    dofs: np.ndarray
    values: np.ndarray

    def impose(self, vector: np.ndarray) -> np.ndarray:
        result = vector.copy()
        result[self.dofs] = self.values
        return result

    def to_dict(self):
        return self._asdict()


class EdgeQuadrature(NamedTuple):
    points: np.ndarray
    weights: np.ndarray
    cells: np.ndarray
    normals: np.ndarray
    ref_points: np.ndarray


def edge_quadrature(
        mesh: TriangleMesh, edges: np.ndarray, order: int | None = None
) -> EdgeQuadrature:
    """
    Точки квадратуры на граничных рёбрах с внешними нормалями.
    """

    rule = make_quadrature(order or Config.INTERFACE_QUAD_ORDER, dim=1)
    s = rule.cartesian[:, 0]
    start = mesh.vertices[mesh.edges[edges, 0]]
    end = mesh.vertices[mesh.edges[edges, 1]]
    lengths = np.linalg.norm(end - start, axis=1)

    points = (start[:, None] + s[None, :, None] * (end - start)[:, None]).reshape(-1, 2)
    weights = (lengths[:, None] * rule.weights[None, :]).ravel()
    cells = np.repeat(mesh.edge_cells[edges, 0], len(s))
    normals = np.repeat(mesh.outward_normals(edges), len(s), axis=0)
    return EdgeQuadrature(
        points, weights, cells, normals, to_reference(mesh, cells, points)
    )


def _check_tags(mesh: TriangleMesh):
    boundary = set(mesh.boundary_edges.tolist())
    untagged = boundary - set(mesh.boundary_tags)
    if untagged:
        abort(
            f'Граничные рёбра {sorted(untagged)[:5]} сетки '
            f'{mesh.subdomain.value} без условия',
            BoundaryConditionError,
        )
    foreign = set(mesh.boundary_tags.values()) - ALLOWED_TAGS[mesh.subdomain]
    if foreign:
        abort(
            f'Метки {[t.value for t in foreign]} не имеют смысла для '
            f'{mesh.subdomain.value}',
            BoundaryConditionError,
        )


def _normal_moments(
        space: FunctionSpace, edges: np.ndarray, t: float, field, row=None
) -> tuple[np.ndarray, np.ndarray]:
    n_bdm = 2 * space.mesh.n_edges
    offset = 0 if row is None else row * n_bdm
    dofs = offset + (2 * edges[:, None] + np.array([0, 1])).ravel()
    if field is None or not len(edges):
        return dofs, np.zeros(len(dofs))

    def flux(points, normals):
        values = field(t, points)
        if row is not None:
            values = values[..., row, :]
        return np.einsum('eqi,ei->eq', values, normals)

    return dofs, edge_moments(space.mesh, edges, flux).ravel()


def essential_constraints(
        disc: Discretization, boundary: BoundaryData, t: float
) -> Constraints:
    """
    Главные условия в момент t: нормальный след sigma_f на Γ_f^N,
    нормальный поток u_p на Γ_p^N и смещение eta_p на внешней границе Γ_p.

    :return: Constraints в глобальной нумерации.
    """

    _check_tags(disc.fluid_mesh)
    _check_tags(disc.poro_mesh)
    spaces, layout = disc.spaces, disc.layout
    parts = []

    neumann = disc.fluid_mesh.edges_with_tag(BoundaryTag.FLUID_NEUMANN)
    start = layout.slice(Field.SIGMA_F).start
    for row in (0, 1):
        dofs, values = _normal_moments(
            spaces.sigma_f, neumann, t, boundary.sigma_f, row
        )
        parts.append((start + dofs, values))

    neumann = disc.poro_mesh.edges_with_tag(BoundaryTag.PORO_NEUMANN)
    dofs, values = _normal_moments(spaces.u_p, neumann, t, boundary.u_p)
    parts.append((layout.slice(Field.U_P).start + dofs, values))

    eta = spaces.eta_p
    dofs = np.flatnonzero(eta.constrained)
    if boundary.eta_p is None:
        values = np.zeros(len(dofs))
    else:
        values = np.asarray(
            boundary.eta_p(t, eta.mesh.vertices)
        ).ravel()[dofs]
    parts.append((layout.slice(Field.ETA_P).start + dofs, values))

    all_dofs = np.concatenate([p[0] for p in parts]).astype(np.int64)
    all_values = np.concatenate([p[1] for p in parts])
    order = np.argsort(all_dofs, kind='stable')
    all_dofs, all_values = all_dofs[order], all_values[order]

    repeated = np.flatnonzero(np.diff(all_dofs) == 0)
    if len(repeated):
        gap = np.abs(all_values[repeated] - all_values[repeated + 1])
        scale = max(1.0, float(np.abs(all_values).max()))
        if np.any(gap > Config.GEOMETRY_TOL * scale):
            bad = int(all_dofs[repeated[np.argmax(gap)]])
            abort(
                f'Противоречивые главные условия на степени свободы {bad}',
                BoundaryConditionError,
            )
        keep = np.concatenate([[True], np.diff(all_dofs) != 0])
        all_dofs, all_values = all_dofs[keep], all_values[keep]

    logger.debug(f'Главных условий: {len(all_dofs)} (t={t:.6g})')
    return Constraints(all_dofs, all_values)


def natural_loads(
        disc: Discretization, boundary: BoundaryData, t: float
) -> np.ndarray:
    """
    Естественные граничные слагаемые правой части:
    <τ n_f, g>_{Γ_f^D} в строках sigma_f и -<v·n_p, g_p>_{Γ_p^D} в строках u_p.
    """

    spaces, layout = disc.spaces, disc.layout
    load = np.zeros(layout.n_dofs)

    edges = disc.fluid_mesh.edges_with_tag(BoundaryTag.FLUID_DIRICHLET)
    if boundary.u_f is not None and len(edges):
        q = edge_quadrature(disc.fluid_mesh, edges)
        table = tabulate_at(spaces.sigma_f, q.cells, q.ref_points)
        g = boundary.u_f(t, q.points)
        local = np.einsum(
            'p,pjab,pb,pa->pj', q.weights, table.values, q.normals, g
        )
        load[layout.slice(Field.SIGMA_F)] += assemble_vector(
            table.dofs, local, spaces.sigma_f.n_dofs
        )

    edges = disc.poro_mesh.edges_with_tag(BoundaryTag.PORO_DIRICHLET)
    if boundary.p_p is not None and len(edges):
        q = edge_quadrature(disc.poro_mesh, edges)
        table = tabulate_at(spaces.u_p, q.cells, q.ref_points)
        g = boundary.p_p(t, q.points)
        local = -np.einsum(
            'p,pja,pa,p->pj', q.weights, table.values, q.normals, g
        )
        load[layout.slice(Field.U_P)] += assemble_vector(
            table.dofs, local, spaces.u_p.n_dofs
        )

    return load


def apply_boundary_conditions(system, constraints: Constraints):
    """
    Исключение закреплённых степеней свободы из системы Ньютона:
    строки и столбцы обнуляются, на диагонали 1, невязка 0.
    Итерация уже удовлетворяет главным условиям, поэтому поправка
    в этих степенях свободы нулевая.

    :param system: BlockSystem.
    :param constraints: Главные условия.
    :return: BlockSystem той же раскладки.
    """

    n = system.layout.n_dofs
    keep = np.ones(n)
    keep[constraints.dofs] = 0.0
    mask = sps.diags(keep)
    fixed = sps.diags(1.0 - keep)
    jacobian = (mask @ system.jacobian @ mask + fixed).tocsr()
    residual = system.residual * keep
    return system._replace(residual=residual, jacobian=jacobian)
