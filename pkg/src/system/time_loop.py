from typing import Callable, NamedTuple

import numpy as np
from loguru import logger

from src.system.discretization import Discretization
from src.system.layout import SystemState
from src.system.newton import NewtonConfig, NewtonResult, newton_solve
from src.system.problem import ProblemData
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import ConfigError, NewtonError, TimeStepError


StepCallback = Callable[[NewtonResult], None]


class Trajectory(NamedTuple):
    """
    Результат интегрирования по времени.

    states - сохранённые слои (при keep_states=False только последний),
    iterations - число итераций Ньютона на каждом шаге.
    """

    states: list[SystemState]
    iterations: list[int]
    dt: float

    @property
    def final(self) -> SystemState:
        return self.states[-1]

    @property
    def average_iterations(self) -> float:
        return float(np.mean(self.iterations)) if self.iterations else 0.0

    def to_dict(self):
        return self._asdict()


def initial_state(
        disc: Discretization,
        vector: np.ndarray,
        solid_velocity: np.ndarray | None = None,
        t0: float = 0.0,
) -> SystemState:
    """
    Слой m=0. Фиктивный слой eta^(-1) = eta^0 - dt*u_s0 даёт
    определённую вторую разность на первом шаге.

    :param disc: Дискретизация уровня.
    :param vector: Начальные данные во всех пространствах.
    :param solid_velocity: u_s0 в пространстве смещений (None - ноль).
    :param t0: Начальный момент.
    :return: SystemState шага 0.
    """

    layout = disc.layout
    if len(vector) != layout.n_dofs:
        abort(
            f'Начальный вектор длины {len(vector)}, ожидалось {layout.n_dofs}',
            ConfigError,
        )
    vector = np.asarray(vector, dtype=float).copy()
    state = SystemState(
        t=t0, step=0, vector=vector, layout=layout,
        eta_prev=np.zeros(0), eta_prev2=np.zeros(0),
        u_f_prev=np.zeros(0), p_p_prev=np.zeros(0),
    )
    eta0 = state.eta_p.copy()
    velocity = (
        np.zeros_like(eta0) if solid_velocity is None
        else np.asarray(solid_velocity, dtype=float)
    )
    return state._replace(
        eta_prev=eta0 - disc.dt * velocity,
        eta_prev2=eta0 - 2.0 * disc.dt * velocity,
        u_f_prev=state.u_f.copy(),
        p_p_prev=state.p_p.copy(),
    )


def time_loop(
        disc: Discretization,
        data: ProblemData,
        start: SystemState,
        n_steps: int,
        cfg: NewtonConfig = NewtonConfig(),
        on_step: StepCallback | None = None,
        keep_states: bool = True,
) -> Trajectory:
    """
    Интегрирование t_m = t_0 + m*dt, m = 1..N.

    :param disc: Дискретизация уровня.
    :param data: Источники и граничные данные.
    :param start: Состояние шага 0 (см. initial_state).
    :param n_steps: Число шагов N.
    :param cfg: Параметры Ньютона.
    :param on_step: Вызывается после каждого шага с NewtonResult.
    :param keep_states: Хранить все слои или только последний.
    :return: Trajectory (слои 0..N).
    """

    if n_steps < 1:
        abort(f'Число шагов должно быть не меньше 1 ({n_steps})', ConfigError)

    states = [start]
    iterations = []
    state = start
    for m in range(1, n_steps + 1):
        t = start.t + m * disc.dt
        try:
            result = newton_solve(
                disc, state.history(), data, t, state.vector, cfg, m
            )
        except NewtonError as e:
            message = f'Шаг {m} (t={t:.6g}) не выполнен: {e}'
            logger.error(message)
            raise TimeStepError(message, step=m) from e

        state = result.state
        iterations.append(result.iterations)
        logger.info(
            f'Шаг {m}/{n_steps}: t={t:.6g}, итераций {result.iterations}, '
            f'|R|={result.residual_norm:.3e}'
        )
        if on_step is not None:
            on_step(result)
        if keep_states:
            states.append(state)
        else:
            states = [state]

    return Trajectory(states, iterations, disc.dt)
