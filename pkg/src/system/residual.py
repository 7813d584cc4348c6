from typing import NamedTuple

import numpy as np
import scipy.sparse as sps

from src.consts import Field
from src.forms import (
    assemble_convective, assemble_interface_inertia, assemble_interface_loads,
    assemble_load, weighted_velocity_mass,
)
from src.system.boundary import natural_loads
from src.system.discretization import Discretization
from src.system.layout import BlockLayout, History
from src.system.problem import ProblemData
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import AssemblyError


class BlockSystem(NamedTuple):
    """
    Невязка и матрица Якоби в точке итерации.
    """

    residual: np.ndarray
    jacobian: sps.csr_matrix
    layout: BlockLayout

    def block_norms(self) -> dict[Field, float]:
        return {
            field: float(np.linalg.norm(block))
            for field, block in self.layout.split(self.residual).items()
        }

    def to_dict(self):
        return self._asdict()


class StepData(NamedTuple):
    """
    Части системы, не зависящие от итерации внутри шага.
    """

    t: float
    rhs: np.ndarray
    operator: sps.csr_matrix

    def to_dict(self):
        return self._asdict()


def prepare_step(
        disc: Discretization, history: History, data: ProblemData, t: float
) -> StepData:
    """
    Правая часть и линейный оператор шага t_m: источники, граничные
    слагаемые, невязки интерфейса и вклад истории по времени.
    """

    if history is None or any(part is None for part in history):
        abort(
            f'Нет истории для шага t={t}: нужны eta^(m-1), eta^(m-2), '
            f'u_f^(m-1), p_p^(m-1)',
            AssemblyError,
        )

    layout, forms, dt = disc.layout, disc.forms, disc.dt
    alpha = disc.params.alpha_p
    eta1, eta2 = history.eta_prev, history.eta_prev2

    rhs = natural_loads(disc, data.boundary, t)
    blocks = layout.split(rhs)

    loads = assemble_load(t, data.sources, disc.spaces)
    defects = assemble_interface_loads(
        disc.interface_quadrature, t, *data.defects
    )

    blocks[Field.SIGMA_F] += loads.sigma_f
    blocks[Field.ETA_P] += (
            loads.eta_p + defects.eta_p
            + forms.M_eta @ (2.0 * eta1 - eta2) / dt ** 2
            + disc.C_ee @ eta1 / dt
    )
    blocks[Field.U_F] += loads.u_f + forms.M_uf @ history.u_f_prev / dt
    blocks[Field.P_P] += (
            loads.p_p + forms.M_pp @ history.p_p_prev / dt
            - alpha * forms.B_pe @ eta1 / dt
    )
    blocks[Field.PHI] += defects.phi + disc.C_phie @ eta1 / dt
    blocks[Field.LAMBDA] += defects.lambda_ + disc.G_e @ eta1 / dt

    operator = disc.linear
    q_f = data.sources.q_f
    if q_f is not None and disc.params.convection_on:
        compressibility = weighted_velocity_mass(
            disc.spaces.u_f, lambda points: q_f(t, points)
        )
        operator = (operator + _embed(
            layout, Field.U_F, Field.U_F,
            -disc.params.rho_f * compressibility,
        )).tocsr()

    return StepData(t, rhs, operator)


def build_residual_and_jacobian(
        disc: Discretization,
        iterate: np.ndarray,
        history: History | None,
        data: ProblemData,
        t: float,
        step: StepData | None = None,
) -> BlockSystem:
    """
    Невязка полностью дискретной схемы и её точная производная.

    :param disc: Дискретизация уровня.
    :param iterate: Текущая итерация (весь вектор неизвестных).
    :param history: eta_p^(m-1), eta_p^(m-2), u_f^(m-1), p_p^(m-1).
    :param data: Источники и граничные данные.
    :param t: Время t_m.
    :param step: Заранее подготовленные части шага (иначе считаются).
    :return: BlockSystem.
    """

    step = step or prepare_step(disc, history, data, t)
    layout = disc.layout
    residual = step.operator @ iterate - step.rhs
    jacobian = step.operator

    if disc.params.convection_on:
        blocks = layout.split(iterate)
        convective = assemble_convective(
            disc.params, blocks[Field.U_F], disc.spaces,
            disc.convective_quadrature,
        )
        inertia = assemble_interface_inertia(
            disc.params, blocks[Field.PHI], disc.spaces,
            disc.interface_quadrature,
        )
        residual = residual.copy()
        residual[layout.slice(Field.SIGMA_F)] += convective.residual
        residual[layout.slice(Field.PHI)] += inertia.residual
        jacobian = jacobian + _embed(
            layout, Field.SIGMA_F, Field.U_F, convective.jacobian
        ) + _embed(layout, Field.PHI, Field.PHI, inertia.jacobian)

    return BlockSystem(residual, sps.csr_matrix(jacobian), layout)


def _embed(
        layout: BlockLayout, row: Field, col: Field, block: sps.spmatrix
) -> sps.csr_matrix:
    coo = block.tocoo()
    return sps.csr_matrix(
        (
            coo.data,
            (coo.row + layout.slice(row).start, coo.col + layout.slice(col).start),
        ),
        shape=(layout.n_dofs, layout.n_dofs),
    )
