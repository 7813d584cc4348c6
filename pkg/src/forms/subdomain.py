from typing import NamedTuple

import numpy as np
import scipy.sparse as sps
from loguru import logger

from src.consts import Config, Subdomain
from src.fem import (
    FunctionSpace, Spaces, cell_weights, make_quadrature, tabulate, to_physical,
)
from src.forms.assembly import assemble_matrix
from src.forms.params import ModelParams
from src.utils.solver.abort import abort
from src.utils.solver.decorators import logger_wraps
from src.utils.solver.exceptions import AssemblyError


class SubdomainForms(NamedTuple):
    """
    Билинейные формы подобластей.

    Строки - пространство тестовых функций, столбцы - пространство
    неизвестной: B_f (u_f x sigma_f), B_p (p_p x u_p), B_pe (p_p x eta_p),
    B_sk (gamma_f x sigma_f).
    """

    A_f: sps.csr_matrix
    A_dp: sps.csr_matrix
    A_ep: sps.csr_matrix
    B_f: sps.csr_matrix
    B_p: sps.csr_matrix
    B_pe: sps.csr_matrix
    B_sk: sps.csr_matrix
    M_uf: sps.csr_matrix
    M_pp: sps.csr_matrix
    M_eta: sps.csr_matrix

    def to_dict(self):
        return self._asdict()


def _check_subdomain(space: FunctionSpace, subdomain: Subdomain, name: str):
    if space.subdomain != subdomain:
        abort(
            f'Пространство {name} построено на сетке {space.subdomain.value}, '
            f'ожидалась {subdomain.value}',
            AssemblyError,
        )


def _bilinear(rows, cols, local):
    return assemble_matrix(
        rows.dofs, cols.dofs, local,
        (rows.space.n_dofs, cols.space.n_dofs),
    )


class _Table(NamedTuple):
    space: FunctionSpace
    values: np.ndarray
    divergence: np.ndarray | None
    gradient: np.ndarray | None
    dofs: np.ndarray


def _table(space: FunctionSpace, ref_points: np.ndarray) -> _Table:
    table = tabulate(space, ref_points)
    return _Table(space, *table)


@logger_wraps(output=False)
def assemble_subdomain_forms(
        params: ModelParams, spaces: Spaces, order: int | None = None
) -> SubdomainForms:
    """
    Сборка всех форм подобластей точной квадратурой.

    :param params: Физические параметры.
    :param spaces: Пространства задачи.
    :param order: Порядок квадратуры на треугольниках.
    :return: SubdomainForms.
    """

    for name in ('sigma_f', 'u_f', 'gamma_f'):
        _check_subdomain(getattr(spaces, name), Subdomain.FLUID, name)
    for name in ('u_p', 'eta_p', 'p_p'):
        _check_subdomain(getattr(spaces, name), Subdomain.POROELASTIC, name)

    rule = make_quadrature(order or Config.QUAD_ORDER)
    ref = rule.cartesian

    # Жидкость
    fluid = spaces.sigma_f.mesh
    w = cell_weights(fluid, rule.weights)
    sigma = _table(spaces.sigma_f, ref)
    velocity = _table(spaces.u_f, ref)
    vorticity = _table(spaces.gamma_f, ref)

    trace = np.einsum('mnqaa->mnq', sigma.values)
    a_f = (
            np.einsum('mq,miqab,mjqab->mij', w, sigma.values, sigma.values)
            - 0.5 * np.einsum('mq,miq,mjq->mij', w, trace, trace)
    ) / (2.0 * params.mu)
    b_f = np.einsum('mq,mcqa,mjqa->mcj', w, velocity.values, sigma.divergence)
    b_sk = np.einsum(
        'mq,mkqab,mjqab->mkj', w, vorticity.values, sigma.values
    )
    m_uf = params.rho_f * np.einsum(
        'mq,miqa,mjqa->mij', w, velocity.values, velocity.values
    )

    # Пороупругая область
    poro = spaces.u_p.mesh
    w = cell_weights(poro, rule.weights)
    flux = _table(spaces.u_p, ref)
    displacement = _table(spaces.eta_p, ref)
    pressure = _table(spaces.p_p, ref)

    a_dp = params.mu * np.einsum(
        'mq,miqa,ab,mjqb->mij',
        w, flux.values, params.inverse_permeability, flux.values,
    )
    strain = 0.5 * (
            displacement.gradient
            + displacement.gradient.transpose(0, 1, 2, 4, 3)
    )
    a_ep = (
            2.0 * params.mu_p
            * np.einsum('mq,miqab,mjqab->mij', w, strain, strain)
            + params.lambda_p * np.einsum(
                'mq,miq,mjq->mij',
                w, displacement.divergence, displacement.divergence,
            )
    )
    b_p = -np.einsum('mq,mkq,mjq->mkj', w, pressure.values, flux.divergence)
    b_pe = -np.einsum(
        'mq,mkq,mjq->mkj', w, pressure.values, displacement.divergence
    )
    m_pp = params.s0 * np.einsum(
        'mq,miq,mjq->mij', w, pressure.values, pressure.values
    )
    m_eta = params.rho_p * np.einsum(
        'mq,miqa,mjqa->mij', w, displacement.values, displacement.values
    )

    forms = SubdomainForms(
        A_f=_bilinear(sigma, sigma, a_f),
        A_dp=_bilinear(flux, flux, a_dp),
        A_ep=_bilinear(displacement, displacement, a_ep),
        B_f=_bilinear(velocity, sigma, b_f),
        B_p=_bilinear(pressure, flux, b_p),
        B_pe=_bilinear(pressure, displacement, b_pe),
        B_sk=_bilinear(vorticity, sigma, b_sk),
        M_uf=_bilinear(velocity, velocity, m_uf),
        M_pp=_bilinear(pressure, pressure, m_pp),
        M_eta=_bilinear(displacement, displacement, m_eta),
    )
    logger.debug(
        f'Формы подобластей собраны: nnz(A_f)={forms.A_f.nnz}, '
        f'nnz(A_ep)={forms.A_ep.nnz}'
    )
    return forms


def weighted_velocity_mass(
        space: FunctionSpace, weight, order: int | None = None
) -> sps.csr_matrix:
    """
    Матрица (q u, v) на пространстве скорости жидкости.

    :param weight: Векторизованная функция точек q(points) -> (...,).
    """

    rule = make_quadrature(order or Config.QUAD_ORDER)
    mesh = space.mesh
    w = cell_weights(mesh, rule.weights) * weight(to_physical(mesh, rule.cartesian))
    table = _table(space, rule.cartesian)
    local = np.einsum('mq,miqa,mjqa->mij', w, table.values, table.values)
    return _bilinear(table, table, local)
