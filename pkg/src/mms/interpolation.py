import numpy as np

from src.consts import Field
from src.fem import interpolate
from src.mms.exact import Example1Solution
from src.system import Discretization, SystemState, initial_state


def interpolate_exact(
        exact: Example1Solution, disc: Discretization, t: float
) -> np.ndarray:
    """
    Интерполянт точного решения в момент t во всех пространствах,
    один глобальный вектор.
    """

    spaces = disc.spaces
    fields = {
        Field.SIGMA_F: (spaces.sigma_f, exact.sigma_f),
        Field.U_P: (spaces.u_p, exact.u_p),
        Field.ETA_P: (spaces.eta_p, exact.eta_p),
        Field.U_F: (spaces.u_f, exact.u_f),
        Field.P_P: (spaces.p_p, exact.p_p),
        Field.GAMMA_F: (spaces.gamma_f, exact.gamma_f),
        Field.PHI: (spaces.phi, exact.u_f),
        Field.LAMBDA: (spaces.lambda_, exact.p_p),
    }
    return disc.layout.join({
        field: interpolate(space, lambda points, f=function: f(t, points))
        for field, (space, function) in fields.items()
    })


def exact_initial_state(
        exact: Example1Solution, disc: Discretization, t0: float = 0.0
) -> SystemState:
    velocity = interpolate(
        disc.spaces.eta_p, lambda points: exact.eta_rate(t0, points)
    )
    return initial_state(
        disc, interpolate_exact(exact, disc, t0), velocity, t0
    )
