from typing import Callable, NamedTuple

import numpy as np

from src.consts import Config
from src.fem import (
    FunctionSpace, Spaces, cell_weights, make_quadrature, tabulate, to_physical,
)
from src.forms.assembly import assemble_vector


SourceFunction = Callable[[float, np.ndarray], np.ndarray]


class Sources(NamedTuple):
    """
    Правые части: f_f, f_p - векторные, q_p - скалярная, q_f - источник
    сжимаемости для проверочных решений (None, если не задан).
    """

    f_f: SourceFunction | None = None
    f_p: SourceFunction | None = None
    q_p: SourceFunction | None = None
    q_f: SourceFunction | None = None

    def to_dict(self):
        return self._asdict()


class Loads(NamedTuple):
    sigma_f: np.ndarray
    eta_p: np.ndarray
    u_f: np.ndarray
    p_p: np.ndarray

    def to_dict(self):
        return self._asdict()


def _functional(
        space: FunctionSpace, values_at, order: int, pairing: str
) -> np.ndarray:
    rule = make_quadrature(order)
    mesh = space.mesh
    weights = cell_weights(mesh, rule.weights)
    table = tabulate(space, rule.cartesian)
    values = values_at(to_physical(mesh, rule.cartesian))
    local = np.einsum(pairing, weights, values, table.values)
    return assemble_vector(table.dofs, local, space.n_dofs)


def assemble_load(
        t: float, sources: Sources, spaces: Spaces, order: int | None = None
) -> Loads:
    """
    Векторы правых частей в момент t.

    :param t: Время.
    :param sources: Источники (None - нулевой источник).
    :param spaces: Пространства задачи.
    :param order: Порядок квадратуры.
    :return: Loads: -½(q_f, tr τ), (f_p, ξ), (f_f, v), (q_p, w).
    """

    order = order or Config.QUAD_ORDER
    loads = Loads(
        np.zeros(spaces.sigma_f.n_dofs),
        np.zeros(spaces.eta_p.n_dofs),
        np.zeros(spaces.u_f.n_dofs),
        np.zeros(spaces.p_p.n_dofs),
    )

    if sources.q_f is not None:
        loads.sigma_f[:] = -0.5 * _functional(
            spaces.sigma_f,
            lambda points: sources.q_f(t, points),
            order,
            'mq,mq,miqaa->mi',
        )
    if sources.f_p is not None:
        loads.eta_p[:] = _functional(
            spaces.eta_p,
            lambda points: sources.f_p(t, points),
            order,
            'mq,mqa,miqa->mi',
        )
    if sources.f_f is not None:
        loads.u_f[:] = _functional(
            spaces.u_f,
            lambda points: sources.f_f(t, points),
            order,
            'mq,mqa,miqa->mi',
        )
    if sources.q_p is not None:
        loads.p_p[:] = _functional(
            spaces.p_p,
            lambda points: sources.q_p(t, points),
            order,
            'mq,mq,miq->mi',
        )
    return loads
