import numpy as np

from src.consts import Config
from src.fem import (
    FunctionSpace, cell_weights, evaluate, make_quadrature, to_physical,
)
from src.forms import ModelParams


def recover_fluid_pressure(
        sigma_space: FunctionSpace,
        velocity_space: FunctionSpace,
        sigma_f: np.ndarray,
        u_f: np.ndarray,
        params: ModelParams,
        q_f=None,
        t: float = 0.0,
        order: int | None = None,
) -> np.ndarray:
    """
    Давление жидкости по псевдонапряжению:
    p = -1/2 (tr sigma + rho_f |u|^2 - 2 mu q_f), среднее по ячейке.
    Слагаемое rho_f |u|^2 есть только при включённой конвекции.

    :param sigma_space: Пространство sigma_f.
    :param velocity_space: Пространство u_f.
    :param sigma_f: Коэффициенты sigma_f.
    :param u_f: Коэффициенты u_f.
    :param params: Параметры модели.
    :param q_f: Источник массы q_f(t, points) или None.
    :param t: Время.
    :return: Давление P0, (M,).
    """

    rule = make_quadrature(order or Config.QUAD_ORDER)
    mesh = sigma_space.mesh
    sigma = evaluate(sigma_space, sigma_f, rule.cartesian).values
    velocity = evaluate(velocity_space, u_f, rule.cartesian).values

    trace = sigma[..., 0, 0] + sigma[..., 1, 1]
    pointwise = trace
    if params.convection_on:
        pointwise = pointwise + params.rho_f * np.einsum(
            'mqa,mqa->mq', velocity, velocity
        )
    if q_f is not None:
        points = to_physical(mesh, rule.cartesian)
        pointwise = pointwise - 2.0 * params.mu * q_f(t, points)

    weights = cell_weights(mesh, rule.weights)
    return -0.5 * (weights * pointwise).sum(axis=1) / mesh.areas
