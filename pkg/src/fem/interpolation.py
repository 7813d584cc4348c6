from typing import Callable

import numpy as np

from src.consts import Config, SpaceKind
from src.fem.quadrature import make_quadrature
from src.fem.spaces import FunctionSpace, cell_weights, to_physical
from src.mesh import TriangleMesh
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import SpaceError


FieldFunction = Callable[[np.ndarray], np.ndarray]


def edge_moments(
        mesh: TriangleMesh,
        edges: np.ndarray,
        normal_flux: Callable[[np.ndarray, np.ndarray], np.ndarray],
        order: int | None = None,
) -> np.ndarray:
    """
    Моменты ∫_e g q_k ds по глобально ориентированным рёбрам.

    :param normal_flux: g(points (E, Q, 2), normals (E, 2)) -> (E, Q).
    :return: Массив (len(edges), 2): k = 0 (вес 1 - s), k = 1 (вес s).
    """

    rule = make_quadrature(order or Config.INTERFACE_QUAD_ORDER, dim=1)
    s = rule.cartesian[:, 0]
    start = mesh.vertices[mesh.edges[edges, 0]]
    end = mesh.vertices[mesh.edges[edges, 1]]
    tangent = end - start
    lengths = np.linalg.norm(tangent, axis=1)
    normals = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)
    normals /= lengths[:, None]

    points = start[:, None, :] + s[None, :, None] * tangent[:, None, :]
    flux = normal_flux(points, normals)
    weighted = flux * (rule.weights * lengths[:, None])
    return np.stack([weighted @ (1.0 - s), weighted @ s], axis=1)


def interpolate(space: FunctionSpace, f: FieldFunction) -> np.ndarray:
    """
    Интерполянт функции f в пространство.

    BDM - моменты нормального потока по рёбрам, P1 - значения в вершинах,
    P0 - средние по ячейкам, следы - значения в точках разбиения.

    :param f: Векторизованная функция точек (..., 2).
    :return: Вектор коэффициентов.
    """

    mesh = space.mesh
    kind = space.kind
    coefficients = np.zeros(space.n_dofs)

    if kind == SpaceKind.BDM1_VECTOR:
        edges = np.arange(mesh.n_edges)
        moments = edge_moments(
            mesh, edges,
            lambda points, normals: np.einsum(
                'eqi,ei->eq', f(points), normals
            ),
        )
        coefficients[:] = moments.ravel()
        return coefficients

    if kind == SpaceKind.BDM1_TENSOR_ROWS:
        edges = np.arange(mesh.n_edges)
        n_bdm = 2 * mesh.n_edges
        for r in (0, 1):
            moments = edge_moments(
                mesh, edges,
                lambda points, normals: np.einsum(
                    'eqi,ei->eq', f(points)[..., r, :], normals
                ),
            )
            coefficients[r * n_bdm:(r + 1) * n_bdm] = moments.ravel()
        return coefficients

    if kind in (SpaceKind.P0_SCALAR, SpaceKind.P0_VECTOR, SpaceKind.P0_SKEW):
        rule = make_quadrature(Config.QUAD_ORDER)
        weights = cell_weights(mesh, rule.weights)
        values = f(to_physical(mesh, rule.cartesian))
        means = np.einsum('mq...,mq->m...', values, weights)
        means /= mesh.areas.reshape((-1,) + (1,) * (means.ndim - 1))
        if kind == SpaceKind.P0_SKEW:
            means = 0.5 * (means[:, 0, 1] - means[:, 1, 0])
        coefficients[:] = means.ravel()
        return coefficients

    if kind == SpaceKind.P1_VECTOR_CONTINUOUS:
        coefficients[:] = np.asarray(f(mesh.vertices)).ravel()
        return coefficients

    if space.is_trace:
        coefficients[:] = np.asarray(f(space.trace.points)).ravel()
        return coefficients

    abort(f'Интерполяция в {kind.value} не поддерживается', SpaceError)
