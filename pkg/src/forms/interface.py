from typing import Callable, NamedTuple

import numpy as np
import scipy.sparse as sps
from loguru import logger

from src.consts import Config, Subdomain
from src.fem import (
    Spaces, Tabulation, make_quadrature, tabulate_at, tabulate_trace,
    to_reference,
)
from src.forms.assembly import assemble_matrix, assemble_vector
from src.forms.params import ModelParams
from src.mesh import TraceMesh, TriangleMesh
from src.utils.solver.abort import abort
from src.utils.solver.decorators import logger_wraps
from src.utils.solver.exceptions import AssemblyError


InterfaceData = Callable[[float, np.ndarray, np.ndarray], np.ndarray]


class InterfaceForms(NamedTuple):
    """
    Формы на интерфейсе.

    B_nf - (phi x sigma_f), B_np - (lambda x u_p), C_bjs - квадратная
    матрица над [eta_p; phi], C_gamma - (lambda x [eta_p; phi]).
    """

    B_nf: sps.csr_matrix
    B_np: sps.csr_matrix
    C_bjs: sps.csr_matrix
    C_gamma: sps.csr_matrix

    def to_dict(self):
        return self._asdict()


class InterfaceQuadrature:
    """
    Точки квадратуры на отрезках общего разбиения интерфейса вместе
    с табуляциями всех пространств, которые в них нужны.
    Каждый отрезок лежит внутри одного ребра каждой стороны, так что
    подынтегральные выражения на нём - многочлены.
    """

    def __init__(
            self, spaces: Spaces, merged: TraceMesh, order: int | None = None
    ):
        fluid_mesh, poro_mesh = spaces.sigma_f.mesh, spaces.u_p.mesh
        for side in (Subdomain.FLUID, Subdomain.POROELASTIC):
            if side not in merged.parent_edges:
                abort(
                    f'Общее разбиение не знает рёбер стороны {side.value}',
                    AssemblyError,
                )

        rule = make_quadrature(order or Config.INTERFACE_QUAD_ORDER, dim=1)
        sigma_q = rule.cartesian[:, 0]
        n_q = len(sigma_q)
        lengths = merged.lengths
        start, end = merged.points[:-1], merged.points[1:]

        fluid_edges = merged.parent_edges[Subdomain.FLUID]
        poro_edges = merged.parent_edges[Subdomain.POROELASTIC]
        _check_containment(fluid_mesh, fluid_edges, start, end)
        _check_containment(poro_mesh, poro_edges, start, end)

        self.merged = merged
        self.n_q = n_q
        self.n_points = merged.n_segments * n_q
        self.segment = np.repeat(np.arange(merged.n_segments), n_q)
        self.points = (
                start[:, None, :]
                + sigma_q[None, :, None] * (end - start)[:, None, :]
        ).reshape(-1, 2)
        self.weights = (lengths[:, None] * rule.weights[None, :]).ravel()
        self.arc = (
                merged.breakpoints[:-1, None] + lengths[:, None] * sigma_q
        ).ravel()

        normals = fluid_mesh.outward_normals(fluid_edges)
        self.n_f = np.repeat(normals, n_q, axis=0)
        self.n_p = -self.n_f
        self.tangent = np.stack([-self.n_f[:, 1], self.n_f[:, 0]], axis=1)

        fluid_cells = np.repeat(fluid_mesh.edge_cells[fluid_edges, 0], n_q)
        poro_cells = np.repeat(poro_mesh.edge_cells[poro_edges, 0], n_q)
        fluid_ref = to_reference(fluid_mesh, fluid_cells, self.points)
        poro_ref = to_reference(poro_mesh, poro_cells, self.points)

        self.sigma = tabulate_at(spaces.sigma_f, fluid_cells, fluid_ref)
        self.u_p = tabulate_at(spaces.u_p, poro_cells, poro_ref)
        self.eta = tabulate_at(spaces.eta_p, poro_cells, poro_ref)
        self.phi = self._trace_table(spaces.phi, Subdomain.FLUID)
        self.lambda_ = self._trace_table(spaces.lambda_, Subdomain.POROELASTIC)

        self.n_eta = spaces.eta_p.n_dofs
        self.n_phi = spaces.phi.n_dofs
        self.spaces = spaces

    def _trace_table(self, space, side: Subdomain) -> Tabulation:
        own = space.trace
        segments = np.repeat(self.merged.parent_segments[side], self.n_q)
        tau = (self.arc - own.breakpoints[segments]) / own.lengths[segments]
        return tabulate_trace(space, segments, np.clip(tau, 0.0, 1.0))

    def combined_dofs(self) -> np.ndarray:
        """
        Степени свободы пары (eta_p, phi) в общей нумерации [eta; phi].
        """

        return np.concatenate(
            [self.eta.dofs, self.phi.dofs + self.n_eta], axis=1
        )

    def __repr__(self):
        return f'<InterfaceQuadrature(points={self.n_points})>'


def _check_containment(
        mesh: TriangleMesh, edges: np.ndarray, start: np.ndarray, end: np.ndarray
):
    a = mesh.vertices[mesh.edges[edges, 0]]
    b = mesh.vertices[mesh.edges[edges, 1]]
    direction = b - a
    length2 = np.einsum('ei,ei->e', direction, direction)
    tol = Config.GEOMETRY_TOL * max(1.0, float(np.sqrt(length2.max())))

    for point in (start, end):
        along = np.einsum('ei,ei->e', point - a, direction) / length2
        closest = a + np.clip(along, 0.0, 1.0)[:, None] * direction
        distance = np.linalg.norm(point - closest, axis=1)
        if np.any(distance > tol):
            bad = int(np.argmax(distance))
            abort(
                f'Отрезок {bad} общего разбиения не лежит в ребре '
                f'{edges[bad]} сетки {mesh.subdomain.value}',
                AssemblyError,
            )


@logger_wraps(output=False)
def assemble_interface_forms(
        params: ModelParams,
        spaces: Spaces,
        merged: TraceMesh,
        quadrature: InterfaceQuadrature | None = None,
) -> InterfaceForms:
    """
    Сборка форм интерфейса по отрезкам общего разбиения.

    :param params: Физические параметры.
    :param spaces: Пространства задачи.
    :param merged: Общее разбиение интерфейса.
    :param quadrature: Готовая квадратура на merged (если уже построена).
    :return: InterfaceForms.
    """

    q = quadrature or InterfaceQuadrature(spaces, merged)
    w = q.weights
    n_combined = q.n_eta + q.n_phi

    sigma_n = np.einsum('pjab,pb->pja', q.sigma.values, q.n_f)
    b_nf = -np.einsum('p,pia,pja->pij', w, q.phi.values, sigma_n)
    b_np = np.einsum(
        'p,pi,pja,pa->pij', w, q.lambda_.values, q.u_p.values, q.n_p
    )

    slip = np.concatenate([
        -np.einsum('pia,pa->pi', q.eta.values, q.tangent),
        np.einsum('pia,pa->pi', q.phi.values, q.tangent),
    ], axis=1)
    friction = (
            params.mu * params.alpha_bjs
            / np.sqrt(params.tangential_permeability(q.tangent))
    )
    c_bjs = np.einsum('p,pi,pj->pij', w * friction, slip, slip)

    normal = np.concatenate([
        np.einsum('pia,pa->pi', q.eta.values, q.n_p),
        np.einsum('pia,pa->pi', q.phi.values, q.n_f),
    ], axis=1)
    c_gamma = -np.einsum('p,pi,pj->pij', w, q.lambda_.values, normal)

    combined = q.combined_dofs()
    forms = InterfaceForms(
        B_nf=assemble_matrix(
            q.phi.dofs, q.sigma.dofs, b_nf,
            (spaces.phi.n_dofs, spaces.sigma_f.n_dofs),
        ),
        B_np=assemble_matrix(
            q.lambda_.dofs, q.u_p.dofs, b_np,
            (spaces.lambda_.n_dofs, spaces.u_p.n_dofs),
        ),
        C_bjs=assemble_matrix(
            combined, combined, c_bjs, (n_combined, n_combined)
        ),
        C_gamma=assemble_matrix(
            q.lambda_.dofs, combined, c_gamma,
            (spaces.lambda_.n_dofs, n_combined),
        ),
    )
    logger.debug(f'Формы интерфейса собраны на {q!r}')
    return forms


class InterfaceLoads(NamedTuple):
    eta_p: np.ndarray
    phi: np.ndarray
    lambda_: np.ndarray

    def to_dict(self):
        return self._asdict()


def assemble_interface_loads(
        quadrature: InterfaceQuadrature,
        t: float,
        g_gamma: InterfaceData | None = None,
        g_f: InterfaceData | None = None,
        g_p: InterfaceData | None = None,
) -> InterfaceLoads:
    """
    Нагрузки от невязок условий сопряжения у заданного решения:
    <g_p, xi> в строках eta_p, <g_f, psi> в строках phi,
    -<g_gamma, xi> в строках lambda.

    :param g_gamma: g(t, points, n_f) -> (P,).
    :param g_f: g(t, points, n_f) -> (P, 2).
    :param g_p: g(t, points, n_f) -> (P, 2).
    """

    q = quadrature
    spaces = q.spaces
    loads = InterfaceLoads(
        np.zeros(spaces.eta_p.n_dofs),
        np.zeros(spaces.phi.n_dofs),
        np.zeros(spaces.lambda_.n_dofs),
    )
    if g_p is not None:
        local = np.einsum(
            'p,pia,pa->pi', q.weights, q.eta.values, g_p(t, q.points, q.n_f)
        )
        loads.eta_p[:] = assemble_vector(q.eta.dofs, local, spaces.eta_p.n_dofs)
    if g_f is not None:
        local = np.einsum(
            'p,pia,pa->pi', q.weights, q.phi.values, g_f(t, q.points, q.n_f)
        )
        loads.phi[:] = assemble_vector(q.phi.dofs, local, spaces.phi.n_dofs)
    if g_gamma is not None:
        local = -np.einsum(
            'p,pi,p->pi', q.weights, q.lambda_.values, g_gamma(t, q.points, q.n_f)
        )
        loads.lambda_[:] = assemble_vector(
            q.lambda_.dofs, local, spaces.lambda_.n_dofs
        )
    return loads
