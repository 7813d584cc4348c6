from typing import NamedTuple

import numpy as np
from loguru import logger

from src.consts import Field
from src.forms import (
    assemble_interface_loads, assemble_load, weighted_velocity_mass,
)
from src.system.discretization import Discretization
from src.system.layout import SystemState
from src.system.newton import NewtonResult
from src.system.problem import ProblemData


CONSERVATION_FACTOR = 10.0


class ConservationReport(NamedTuple):
    """
    Максимальные по модулю невязки законов сохранения на шаге:
    масса Дарси по ячейкам, импульс жидкости по ячейкам, масса на
    интерфейсе по базису множителя lambda, слабая симметрия sigma_f.
    """

    step: int
    darcy_mass: float
    fluid_momentum: float
    interface_mass: float
    weak_symmetry: float
    tolerance: float

    @property
    def worst(self) -> float:
        return max(
            self.darcy_mass, self.fluid_momentum,
            self.interface_mass, self.weak_symmetry,
        )

    @property
    def passed(self) -> bool:
        return self.worst <= CONSERVATION_FACTOR * self.tolerance

    def to_dict(self):
        return self._asdict() | {'passed': self.passed}


def conservation_residuals(
        disc: Discretization, state: SystemState, data: ProblemData
) -> dict[Field, np.ndarray]:
    """
    Законы сохранения шага, пересчитанные по состоянию и формам:

    - масса Дарси на ячейку: s0 d_t p + alpha div d_t eta + div u_p - q_p;
    - импульс жидкости на ячейку: rho_f d_t u_f - div sigma_f - f_f
      (с поправкой -rho_f q_f u_f при конвекции);
    - масса на интерфейсе по базису lambda;
    - слабая симметрия (sigma_f, chi).

    История (eta^(m-1), u_f^(m-1), p_p^(m-1)) берётся из самого state.
    """

    forms, dt, t = disc.forms, disc.dt, state.t
    params = disc.params
    loads = assemble_load(t, data.sources, disc.spaces)
    defects = assemble_interface_loads(
        disc.interface_quadrature, t, *data.defects
    )
    eta_change = (state.eta_p - state.eta_prev) / dt

    darcy = (
            forms.M_pp @ (state.p_p - state.p_p_prev) / dt
            - params.alpha_p * forms.B_pe @ eta_change
            - forms.B_p @ state.u_p
            - loads.p_p
    )

    momentum = (
            forms.M_uf @ (state.u_f - state.u_f_prev) / dt
            - forms.B_f @ state.sigma_f
            - loads.u_f
    )
    q_f = data.sources.q_f
    if q_f is not None and params.convection_on:
        compressibility = weighted_velocity_mass(
            disc.spaces.u_f, lambda points: q_f(t, points)
        )
        momentum = momentum - params.rho_f * compressibility @ state.u_f

    interface_mass = (
            disc.G_e @ eta_change
            + disc.G_phi @ state.phi
            - disc.interface.B_np @ state.u_p
            - defects.lambda_
    )

    return {
        Field.P_P: darcy,
        Field.U_F: momentum,
        Field.LAMBDA: interface_mass,
        Field.GAMMA_F: -forms.B_sk @ state.sigma_f,
    }


def conservation_report(
        disc: Discretization, result: NewtonResult, data: ProblemData
) -> ConservationReport:
    """
    Проверка законов сохранения после шага Ньютона независимо от
    невязки, на которой Ньютон остановился.
    """

    residuals = conservation_residuals(disc, result.state, data)

    def worst(field: Field) -> float:
        block = residuals[field]
        return float(np.abs(block).max()) if len(block) else 0.0

    report = ConservationReport(
        step=result.state.step,
        darcy_mass=worst(Field.P_P),
        fluid_momentum=worst(Field.U_F),
        interface_mass=worst(Field.LAMBDA),
        weak_symmetry=worst(Field.GAMMA_F),
        tolerance=result.tolerance,
    )
    if not report.passed:
        logger.warning(
            f'Шаг {report.step}: невязка законов сохранения {report.worst:.3e} '
            f'больше {CONSERVATION_FACTOR:g} x {report.tolerance:.3e}'
        )
    return report


def discrete_energy(disc: Discretization, state: SystemState) -> float:
    """
    E = 1/2 (rho_f |u_f|^2 + s0 |p_p|^2 + a_e(eta, eta) + rho_p |d_t eta|^2).
    """

    forms = disc.forms
    u, p, eta = state.u_f, state.p_p, state.eta_p
    rate = state.eta_rate(disc.dt)
    return 0.5 * float(
        u @ (forms.M_uf @ u)
        + p @ (forms.M_pp @ p)
        + eta @ (forms.A_ep @ eta)
        + rate @ (forms.M_eta @ rate)
    )
