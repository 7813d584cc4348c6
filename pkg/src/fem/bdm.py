from functools import lru_cache

import numpy as np

from src.fem.quadrature import make_quadrature
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import SpaceError


# Вершины опорного треугольника; ребро i напротив вершины i
REFERENCE_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

_DEGENERATE_DET = 1e-14


def reference_edge(i: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Начало и конец локального ребра i при обходе против часовой стрелки.
    """

    return REFERENCE_VERTICES[(i + 1) % 3], REFERENCE_VERTICES[(i + 2) % 3]


def _monomials(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Базис P1^2: (1,0), (x,0), (y,0), (0,1), (0,x), (0,y).

    :return: Значения (6, Q, 2) и дивергенции (6,).
    """

    x, y = points[:, 0], points[:, 1]
    one, zero = np.ones_like(x), np.zeros_like(x)
    values = np.stack([
        np.stack([one, zero], axis=1),
        np.stack([x, zero], axis=1),
        np.stack([y, zero], axis=1),
        np.stack([zero, one], axis=1),
        np.stack([zero, x], axis=1),
        np.stack([zero, y], axis=1),
    ])
    divergence = np.array([0.0, 1.0, 0.0, 0.0, 0.0, 1.0])
    return values, divergence


@lru_cache(maxsize=None)
def _dual_coefficients() -> np.ndarray:
    rule = make_quadrature(3, dim=1)
    s = rule.cartesian[:, 0]
    moments = np.zeros((6, 6))
    for i in range(3):
        start, end = reference_edge(i)
        tangent = end - start
        scaled_normal = np.array([tangent[1], -tangent[0]])
        values, _ = _monomials(start + s[:, None] * tangent)
        flux = values @ scaled_normal
        for k, q in enumerate((1.0 - s, s)):
            moments[2 * i + k] = flux @ (q * rule.weights)

    coefficients = np.linalg.inv(moments)
    coefficients.flags.writeable = False
    return coefficients


def reference_bdm1_basis(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Базис BDM1 на опорном треугольнике.

    Функция 2i+k двойственна моменту ∫_e_i (v·n) q_k ds,
    где q_0 = 1 - s, q_1 = s, s - параметр обхода ребра i.

    :param points: Точки опорного треугольника, (Q, 2).
    :return: Значения (6, Q, 2) и дивергенции (6, Q).
    """

    points = np.atleast_2d(points)
    values, divergence = _monomials(points)
    coefficients = _dual_coefficients()
    basis = np.einsum('jb,jqc->bqc', coefficients, values)
    basis_div = np.repeat((divergence @ coefficients)[:, None], len(points), 1)
    return basis, basis_div


def piola_map(
        jacobians: np.ndarray,
        ref_values: np.ndarray,
        ref_divergence: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Контравариантное преобразование Пиолы.

    :param jacobians: Якобианы ячеек, (C, 2, 2).
    :param ref_values: Значения на опорной ячейке, (n, Q, 2) или (C, n, Q, 2).
    :param ref_divergence: Дивергенции, (n, Q) или (C, n, Q).
    :return: Физические значения (C, n, Q, 2) и дивергенции (C, n, Q).
    """

    jacobians = np.asarray(jacobians, dtype=float).reshape(-1, 2, 2)
    det = np.linalg.det(jacobians)
    if np.any(np.abs(det) <= _DEGENERATE_DET):
        abort('Вырожденная ячейка в преобразовании Пиолы', SpaceError)

    if ref_values.ndim == 3:
        ref_values = np.broadcast_to(
            ref_values, (len(jacobians),) + ref_values.shape
        )
        ref_divergence = np.broadcast_to(
            ref_divergence, (len(jacobians),) + ref_divergence.shape
        )
    values = np.einsum('cij,cnqj->cnqi', jacobians, ref_values)
    values /= det[:, None, None, None]
    divergence = ref_divergence / det[:, None, None]
    return values, divergence
