from typing import NamedTuple

import numpy as np
from loguru import logger

from src.consts import Config
from src.fem import (
    FunctionSpace, cell_weights, combine, evaluate, make_quadrature,
    tabulate_trace, to_physical,
)
from src.mms.exact import Example1Solution
from src.system import Discretization, SystemState, Trajectory
from src.system.pressure import recover_fluid_pressure


# поле -> (норма по времени, пространственная норма)
NORMS = {
    'sigma_f': ('l2', 'L2 + L4/3 div'),
    'u_f': ('linf', 'L4'),
    'gamma_f': ('l2', 'L2'),
    'p_f': ('l2', 'L2'),
    'p_p': ('linf', 'L2'),
    'u_p': ('l2', 'H(div)'),
    'eta_p': ('linf', 'H1'),
    'phi': ('l2', 'H1/2'),
    'lambda': ('l2', 'H1/2'),
}

# по какому размеру сетки считается порядок
MESH_SIZES = {
    'sigma_f': 'h_f', 'u_f': 'h_f', 'gamma_f': 'h_f', 'p_f': 'h_f',
    'p_p': 'h_p', 'u_p': 'h_p', 'eta_p': 'h_p',
    'phi': 'h_tf', 'lambda': 'h_tp',
}


class LevelErrors(NamedTuple):
    """
    Ошибки одного уровня сетки.
    """

    level: int
    h_f: float
    h_p: float
    h_tf: float
    h_tp: float
    errors: dict[str, float]
    iterations: float = 0.0

    def h(self, field: str) -> float:
        return getattr(self, MESH_SIZES[field])

    def to_dict(self):
        return self._asdict()


class ErrorReport(NamedTuple):
    """
    Ошибки по уровням, уровни по убыванию h.
    """

    levels: list[LevelErrors]
    norms: dict[str, tuple[str, str]] = NORMS

    @property
    def fields(self) -> list[str]:
        return list(self.norms)

    def errors(self, field: str) -> list[float]:
        return [level.errors[field] for level in self.levels]

    def sizes(self, field: str) -> list[float]:
        return [level.h(field) for level in self.levels]

    def to_dict(self):
        return {
            'levels': [level.to_dict() for level in self.levels],
            'norms': dict(self.norms),
        }


def half_norm_surrogate(l2: float, h1: float) -> float:
    """
    Дискретная норма H^(1/2) на интерфейсе: (|e|_L2 |e|_H1)^(1/2).
    """

    return float(np.sqrt(l2 * h1))


def _trace_norms(
        space: FunctionSpace,
        coefficients: np.ndarray,
        value,
        gradient,
        t: float,
        order: int,
) -> tuple[float, float]:
    """
    L2 и H1 нормы ошибки на собственном разбиении интерфейса.

    :param value: Точное значение f(t, points).
    :param gradient: Точный градиент f по x, y.
    """

    trace = space.trace
    rule = make_quadrature(min(order, 7), dim=1)
    s = rule.cartesian[:, 0]
    segments = np.repeat(np.arange(trace.n_segments), len(s))
    tau = np.tile(s, trace.n_segments)
    start, end = trace.points[segments], trace.points[segments + 1]
    points = start + tau[:, None] * (end - start)
    weights = np.tile(rule.weights, trace.n_segments) * trace.lengths[segments]

    discrete = combine(tabulate_trace(space, segments, tau), coefficients)
    tangent = trace.tangents[segments]
    exact_slope = np.einsum('p...j,pj->p...', gradient(t, points), tangent)

    error = discrete.values - value(t, points)
    slope = discrete.gradient - exact_slope
    error = error.reshape(len(points), -1)
    slope = slope.reshape(len(points), -1)

    l2 = float(np.sqrt(weights @ (error ** 2).sum(axis=1)))
    h1 = float(np.sqrt(l2 ** 2 + weights @ (slope ** 2).sum(axis=1)))
    return l2, h1


def step_errors(
        disc: Discretization,
        state: SystemState,
        exact: Example1Solution,
        order: int | None = None,
) -> dict[str, float]:
    """
    Пространственные ошибки всех полей на одном слое.

    :return: {поле: ошибка в пространственной норме}.
    """

    order = order or Config.ERROR_QUAD_ORDER
    rule = make_quadrature(order)
    spaces, t = disc.spaces, state.t
    errors = {}

    mesh = disc.fluid_mesh
    points = to_physical(mesh, rule.cartesian)
    weights = cell_weights(mesh, rule.weights)

    def integral(density):
        return float((weights * density).sum())

    sigma = evaluate(spaces.sigma_f, state.sigma_f, rule.cartesian)
    e = sigma.values - exact.sigma_f(t, points)
    div_e = np.linalg.norm(
        sigma.divergence - exact.div_sigma_f(t, points), axis=-1
    )
    l43 = integral(div_e ** (4.0 / 3.0)) ** 0.75
    errors['sigma_f'] = float(np.sqrt(integral((e ** 2).sum(axis=(-1, -2))) + l43 ** 2))

    velocity = evaluate(spaces.u_f, state.u_f, rule.cartesian)
    e = velocity.values - exact.u_f(t, points)
    errors['u_f'] = integral(((e ** 2).sum(axis=-1)) ** 2) ** 0.25

    vorticity = evaluate(spaces.gamma_f, state.gamma_f, rule.cartesian)
    e = vorticity.values - exact.gamma_f(t, points)
    errors['gamma_f'] = float(np.sqrt(integral((e ** 2).sum(axis=(-1, -2)))))

    pressure = recover_fluid_pressure(
        spaces.sigma_f, spaces.u_f, state.sigma_f, state.u_f,
        disc.params, q_f=exact.q_f, t=t,
    )
    e = pressure[:, None] - exact.p_f(t, points)
    errors['p_f'] = float(np.sqrt(integral(e ** 2)))

    mesh = disc.poro_mesh
    points = to_physical(mesh, rule.cartesian)
    weights = cell_weights(mesh, rule.weights)

    p_p = evaluate(spaces.p_p, state.p_p, rule.cartesian)
    e = p_p.values - exact.p_p(t, points)
    errors['p_p'] = float(np.sqrt(integral(e ** 2)))

    flux = evaluate(spaces.u_p, state.u_p, rule.cartesian)
    e = flux.values - exact.u_p(t, points)
    div_e = flux.divergence - exact.div_u_p(t, points)
    errors['u_p'] = float(np.sqrt(integral((e ** 2).sum(axis=-1) + div_e ** 2)))

    displacement = evaluate(spaces.eta_p, state.eta_p, rule.cartesian)
    e = displacement.values - exact.eta_p(t, points)
    grad_e = displacement.gradient - exact.grad_eta_p(t, points)
    errors['eta_p'] = float(np.sqrt(
        integral((e ** 2).sum(axis=-1) + (grad_e ** 2).sum(axis=(-1, -2)))
    ))

    errors['phi'] = half_norm_surrogate(*_trace_norms(
        spaces.phi, state.phi, exact.u_f, exact.grad_u_f, t, order + 1,
    ))
    errors['lambda'] = half_norm_surrogate(*_trace_norms(
        spaces.lambda_, state.lambda_, exact.p_p, exact.grad_p_p, t, order + 1,
    ))
    return errors


class ErrorAccumulator:
    """
    Накопление норм по времени шаг за шагом:
    l2 = (dt sum_m |e_m|^2)^(1/2), linf = max_m |e_m|, m = 1..N.
    """

    def __init__(
            self,
            disc: Discretization,
            exact: Example1Solution,
            order: int | None = None,
    ):
        self.disc = disc
        self.exact = exact
        self.order = order
        self.steps = 0
        self._squares = dict.fromkeys(NORMS, 0.0)
        self._maxima = dict.fromkeys(NORMS, 0.0)

    def add(self, state: SystemState):
        errors = step_errors(self.disc, state, self.exact, self.order)
        for field, value in errors.items():
            self._squares[field] += self.disc.dt * value ** 2
            self._maxima[field] = max(self._maxima[field], value)
        self.steps += 1

    def result(self) -> dict[str, float]:
        return {
            field: (
                float(np.sqrt(self._squares[field])) if time_norm == 'l2'
                else self._maxima[field]
            )
            for field, (time_norm, _) in NORMS.items()
        }


def compute_error_norms(
        disc: Discretization,
        trajectory: Trajectory,
        exact: Example1Solution,
        level: int = 0,
) -> LevelErrors:
    """
    Ошибки дискретной траектории относительно точного решения.

    :param disc: Дискретизация уровня.
    :param trajectory: Траектория со слоями 0..N (слой 0 не входит в нормы).
    :param exact: Точное решение.
    :param level: Номер уровня сетки.
    :return: LevelErrors.
    """

    accumulator = ErrorAccumulator(disc, exact)
    for state in trajectory.states:
        if state.step > 0:
            accumulator.add(state)
    return level_errors(disc, accumulator, level, trajectory.average_iterations)


def level_errors(
        disc: Discretization,
        accumulator: ErrorAccumulator,
        level: int,
        iterations: float = 0.0,
) -> LevelErrors:
    errors = accumulator.result()
    logger.info(
        f'Уровень {level}: h_f={disc.h_f:.4f}, h_p={disc.h_p:.4f}, '
        f'ошибки ' + ', '.join(f'{k}={v:.3e}' for k, v in errors.items())
    )
    return LevelErrors(
        level, disc.h_f, disc.h_p, disc.h_tf, disc.h_tp, errors, iterations
    )
