import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.special import roots_jacobi

from src.utils.solver.abort import abort
from src.utils.solver.exceptions import QuadratureError


MAX_TRIANGLE_ORDER = 6
MAX_SEGMENT_ORDER = 7


class QuadratureRule(NamedTuple):
    """
    Квадратура на опорном треугольнике (dim=2) или отрезке [0, 1] (dim=1).

    points - барицентрические координаты, (Q, dim + 1);
    weights - веса в мере опорного элемента (сумма 1/2 или 1).
    """

    points: np.ndarray
    weights: np.ndarray
    order: int
    dim: int

    @property
    def cartesian(self) -> np.ndarray:
        """
        Декартовы координаты узлов на опорном элементе, (Q, dim).
        """

        return self.points[:, 1:]

    def to_dict(self):
        return self._asdict()


@lru_cache(maxsize=None)
def make_quadrature(order: int, dim: int = 2) -> QuadratureRule:
    """
    Гауссова квадратура заданной точности.

    :param order: Степень многочленов, интегрируемых точно.
    :param dim: 2 - треугольник (коллапсированное произведение
    Гаусса-Якоби и Гаусса-Лежандра), 1 - отрезок (Гаусс-Лежандр).
    :return: QuadratureRule.
    """

    max_order = {1: MAX_SEGMENT_ORDER, 2: MAX_TRIANGLE_ORDER}.get(dim)
    if max_order is None:
        abort(f'Квадратуры размерности {dim} не поддерживаются', QuadratureError)
    if not 1 <= order <= max_order:
        abort(
            f'Неподдерживаемый порядок квадратуры {order} для dim={dim} '
            f'(допустимо 1..{max_order})',
            QuadratureError,
        )

    n = math.ceil((order + 1) / 2)
    x, w = np.polynomial.legendre.leggauss(n)
    s, ws = 0.5 * (x + 1.0), 0.5 * w

    if dim == 1:
        points = np.stack([1.0 - s, s], axis=1)
        rule = QuadratureRule(points, ws, order, 1)
    else:
        # y = (1 + u) / 2 с весом (1 - y), x = s (1 - y)
        u, wu = roots_jacobi(n, 1.0, 0.0)
        y, wy = 0.5 * (1.0 + u), 0.25 * wu
        xx = np.outer(1.0 - y, s)
        yy = np.repeat(y[:, None], n, axis=1)
        weights = np.outer(wy, ws).ravel()
        x_flat, y_flat = xx.ravel(), yy.ravel()
        points = np.stack([1.0 - x_flat - y_flat, x_flat, y_flat], axis=1)
        rule = QuadratureRule(points, weights, order, 2)

    for array in (rule.points, rule.weights):
        array.flags.writeable = False
    return rule
