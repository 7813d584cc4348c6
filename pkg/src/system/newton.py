from typing import NamedTuple

import numpy as np
import scipy.sparse as sps
from loguru import logger
from scipy.sparse.linalg import splu

from src.consts import Config, Field
from src.system.boundary import (
    Constraints, apply_boundary_conditions, essential_constraints,
)
from src.system.discretization import Discretization
from src.system.layout import History, SystemState
from src.system.problem import ProblemData
from src.system.residual import (
    BlockSystem, StepData, build_residual_and_jacobian, prepare_step,
)
from src.utils.solver.abort import abort
from src.utils.solver.decorators import solver_errors_catch
from src.utils.solver.exceptions import ConfigError, NewtonError


SCALINGS = ('none', 'blockwise')


class NewtonConfig(NamedTuple):
    """
    Параметры метода Ньютона.

    scaling = 'blockwise' проверяет сходимость по каждому блоку
    относительно его начальной невязки.
    """

    abs_tol: float = Config.NEWTON_ABS_TOL
    rel_tol: float = Config.NEWTON_REL_TOL
    max_iter: int = Config.NEWTON_MAX_ITER
    damping: float = 1.0
    scaling: str = 'none'

    def validate(self) -> 'NewtonConfig':
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            abort(
                f'Допуски Ньютона должны быть положительными '
                f'({self.abs_tol}, {self.rel_tol})',
                ConfigError,
            )
        if self.max_iter < 1:
            abort(f'max_iter должен быть не меньше 1 ({self.max_iter})',
                  ConfigError)
        if not 0 < self.damping <= 1:
            abort(f'Демпфирование должно лежать в (0, 1] ({self.damping})',
                  ConfigError)
        if self.scaling not in SCALINGS:
            abort(f'Неизвестное масштабирование "{self.scaling}"', ConfigError)
        return self

    def to_dict(self):
        return self._asdict()


class NewtonResult(NamedTuple):
    state: SystemState
    iterations: int
    residual_norm: float
    tolerance: float
    system: BlockSystem

    def to_dict(self):
        return self._asdict()


@solver_errors_catch(NewtonError)
def solve_linear(jacobian: sps.csr_matrix, rhs: np.ndarray) -> np.ndarray:
    """
    Прямое разреженное решение (LU с частичным выбором ведущего).
    """

    factor = splu(jacobian.tocsc())
    solution = factor.solve(rhs)
    if not np.all(np.isfinite(solution)):
        raise NewtonError('Решение линейной системы содержит нечисловые значения')
    return solution


def _tolerance(cfg: NewtonConfig, initial: float) -> float:
    return max(cfg.abs_tol, cfg.rel_tol * initial)


def _converged(
        cfg: NewtonConfig,
        system: BlockSystem,
        initial_norm: float,
        initial_blocks: dict[Field, float],
) -> bool:
    if cfg.scaling == 'blockwise':
        return all(
            norm <= _tolerance(cfg, initial_blocks[field])
            for field, norm in system.block_norms().items()
        )
    return float(np.linalg.norm(system.residual)) <= _tolerance(cfg, initial_norm)


def _constrained_system(
        disc: Discretization,
        iterate: np.ndarray,
        data: ProblemData,
        t: float,
        step: StepData,
        constraints: Constraints,
) -> BlockSystem:
    system = build_residual_and_jacobian(disc, iterate, None, data, t, step)
    return apply_boundary_conditions(system, constraints)


def newton_solve(
        disc: Discretization,
        history: History,
        data: ProblemData,
        t: float,
        guess: np.ndarray,
        cfg: NewtonConfig = NewtonConfig(),
        step_index: int = 0,
) -> NewtonResult:
    """
    Решение нелинейной системы шага t_m методом Ньютона.

    Всегда выполняется хотя бы одно линейное решение; для линейной
    задачи (конвекция выключена) - ровно одно, и невязка выше допуска
    после него тоже считается несходимостью.

    :param disc: Дискретизация уровня.
    :param history: История предыдущих слоёв.
    :param data: Источники и граничные данные.
    :param t: Время t_m.
    :param guess: Начальное приближение (решение с прошлого слоя).
    :param cfg: Параметры Ньютона.
    :param step_index: Номер шага m.
    :return: NewtonResult.
    """

    cfg.validate()
    constraints = essential_constraints(disc, data.boundary, t)
    step = prepare_step(disc, history, data, t)
    iterate = constraints.impose(guess)

    system = _constrained_system(disc, iterate, data, t, step, constraints)
    initial_norm = float(np.linalg.norm(system.residual))
    initial_blocks = system.block_norms()
    linear = not disc.params.convection_on

    norm = initial_norm
    iteration = 0
    for iteration in range(1, cfg.max_iter + 1):
        delta = solve_linear(system.jacobian, system.residual)
        damping = 1.0 if linear else cfg.damping
        iterate = iterate - damping * delta
        system = _constrained_system(disc, iterate, data, t, step, constraints)
        norm = float(np.linalg.norm(system.residual))
        logger.debug(
            f'Шаг {step_index}, итерация Ньютона {iteration}: '
            f'|R| = {norm:.3e} (начальная {initial_norm:.3e})'
        )

        if _converged(cfg, system, initial_norm, initial_blocks):
            state = SystemState(
                t=t,
                step=step_index,
                vector=iterate,
                layout=disc.layout,
                eta_prev=history.eta_prev,
                eta_prev2=history.eta_prev2,
                u_f_prev=history.u_f_prev,
                p_p_prev=history.p_p_prev,
            )
            return NewtonResult(
                state, iteration, norm, _tolerance(cfg, initial_norm), system
            )
        if linear:
            break

    if linear:
        message = (
            f'Шаг {step_index} (t={t:.6g}): невязка линейной системы '
            f'{norm:.3e} выше допуска {_tolerance(cfg, initial_norm):.3e}'
        )
    else:
        message = (
            f'Метод Ньютона не сошёлся за {iteration} итераций на шаге '
            f'{step_index} (t={t:.6g}): |R| = {norm:.3e}'
        )
    logger.error(message)
    raise NewtonError(message, iterations=iteration, residual=norm)
