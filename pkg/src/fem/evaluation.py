from typing import NamedTuple

import numpy as np

from src.fem.spaces import FunctionSpace, Tabulation, tabulate


class FieldValues(NamedTuple):
    values: np.ndarray
    divergence: np.ndarray | None
    gradient: np.ndarray | None

    def to_dict(self):
        return self._asdict()


def combine(table: Tabulation, coefficients: np.ndarray) -> FieldValues:
    """
    Значения поля по табуляции: сумма коэффициентов на базисные функции.
    Работает и для табуляций с осью точек, и без неё.
    """

    local = coefficients[table.dofs]

    def reduce(array):
        if array is None:
            return None
        shape = local.shape + (1,) * (array.ndim - local.ndim)
        return (array * local.reshape(shape)).sum(axis=1)

    return FieldValues(
        reduce(table.values), reduce(table.divergence), reduce(table.gradient)
    )


def evaluate(
        space: FunctionSpace,
        coefficients: np.ndarray,
        ref_points: np.ndarray,
        cells: np.ndarray | None = None,
) -> FieldValues:
    """
    Значения дискретного поля в опорных точках ячеек, оси (C, Q, ...).
    """

    return combine(tabulate(space, ref_points, cells), coefficients)
