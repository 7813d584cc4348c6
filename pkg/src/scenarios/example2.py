from pathlib import Path
from typing import NamedTuple

import numpy as np
from loguru import logger

from src.consts import BoundaryTag, Config, Diagonal, Scenario, Subdomain
from src.fem import evaluate
from src.mesh import (
    TriangleMesh, build_rectangle_mesh, carve, on_line_x, on_line_y,
    outside_x, tag_boundaries,
)
from src.scenarios.config import ScenarioConfig
from src.scenarios.output import write_fields, write_rows_csv
from src.system import (
    BoundaryData, Discretization, InterfaceDefects, NewtonResult, ProblemData,
    conservation_report, initial_state, recover_fluid_pressure, time_loop,
)
from src.utils.solver.abort import abort
from src.utils.solver.decorators import logger_wraps
from src.utils.solver.exceptions import ConfigError


CHANNEL = (0.0, 2.5, 0.0, 0.25)
FILTER = (1.15, 1.35, 0.0, 0.2)
CHANNEL_CELLS = (200, 20)
FILTER_CELLS = (16, 16)
BAND_FACTOR = 10.0
REPORT_TIMES = (20.0, 80.0, 200.0, 400.0)


class Snapshot(NamedTuple):
    step: int
    t: float
    p_f_min: float
    p_f_max: float
    in_band: bool
    files: list[str]

    def to_dict(self):
        return self._asdict()


class FilterResult(NamedTuple):
    """
    Итог прогона: снимки, положение максимума скорости в конце,
    число итераций Ньютона по шагам.
    """

    snapshots: list[Snapshot]
    peak_speed: float
    peak_location: tuple[float, float]
    peak_in_gap: bool
    iterations: list[int]
    conservation_passed: bool

    @property
    def band_passed(self) -> bool:
        return all(s.in_band for s in self.snapshots)

    def to_dict(self):
        return self._asdict() | {'band_passed': self.band_passed}


def _inside_filter(points: np.ndarray) -> np.ndarray:
    x0, x1, y0, y1 = FILTER
    return (
            (points[:, 0] > x0) & (points[:, 0] < x1)
            & (points[:, 1] > y0) & (points[:, 1] < y1)
    )


def example2_meshes(
        channel_cells: tuple[int, int] = CHANNEL_CELLS,
        filter_cells: tuple[int, int] = FILTER_CELLS,
) -> tuple[TriangleMesh, TriangleMesh]:
    """
    Канал с вырезанным фильтром и сетка фильтра, совпадающие на
    интерфейсе: левая и правая стенки и верх фильтра.
    """

    x0, x1, y0, y1 = FILTER
    fluid = carve(
        build_rectangle_mesh(
            CHANNEL, *channel_cells, Diagonal.LEFT, Subdomain.FLUID
        ),
        _inside_filter,
    )
    fluid = tag_boundaries(fluid, [
        (on_line_x(CHANNEL[0]), BoundaryTag.FLUID_NEUMANN),
        (on_line_x(CHANNEL[1]), BoundaryTag.FLUID_NEUMANN),
        (on_line_y(CHANNEL[3]), BoundaryTag.FLUID_DIRICHLET),
        (outside_x(CHANNEL[2], (x0, x1)), BoundaryTag.FLUID_DIRICHLET),
        (on_line_x(x0, (y0, y1)), BoundaryTag.INTERFACE),
        (on_line_x(x1, (y0, y1)), BoundaryTag.INTERFACE),
        (on_line_y(y1, (x0, x1)), BoundaryTag.INTERFACE),
    ])

    poro = build_rectangle_mesh(
        FILTER, *filter_cells, Diagonal.LEFT, Subdomain.POROELASTIC
    )
    poro = tag_boundaries(poro, [
        (on_line_x(x0), BoundaryTag.INTERFACE),
        (on_line_x(x1), BoundaryTag.INTERFACE),
        (on_line_y(y1), BoundaryTag.INTERFACE),
        (on_line_y(y0), BoundaryTag.PORO_NEUMANN),
    ])
    return fluid, poro


def filter_problem(params, p_ref: float, delta_p: float) -> ProblemData:
    """
    Данные задачи в избыточном давлении относительно p_ref:
    sigma_f n = -delta_p n на входе, 0 на выходе, источников нет.
    При alpha_p != 1 сдвиг даёт нагрузку на интерфейсе
    -(1 - alpha_p) p_ref n_p.
    """

    middle = 0.5 * (CHANNEL[0] + CHANNEL[1])

    def inlet_stress(t, points):
        pressure = np.where(points[..., 0] < middle, delta_p, 0.0)
        return -pressure[..., None, None] * np.eye(2)

    defects = InterfaceDefects()
    if params.alpha_p != 1.0:
        shift = (1.0 - params.alpha_p) * p_ref

        def g_p(t, points, n_f):
            return shift * n_f

        defects = InterfaceDefects(g_p=g_p)

    return ProblemData(
        boundary=BoundaryData(sigma_f=inlet_stress), defects=defects
    )


def peak_speed(disc: Discretization, state) -> tuple[float, np.ndarray]:
    centroid = np.array([[1.0 / 3.0, 1.0 / 3.0]])
    velocity = evaluate(disc.spaces.u_f, state.u_f, centroid).values[:, 0]
    speed = np.linalg.norm(velocity, axis=1)
    cell = int(np.argmax(speed))
    return float(speed[cell]), disc.fluid_mesh.centroids[cell]


def in_gap(point: np.ndarray) -> bool:
    x0, x1, _, y1 = FILTER
    return bool(x0 <= point[0] <= x1 and y1 <= point[1] <= CHANNEL[3])


@logger_wraps(output=False, level='INFO')
def run_example2(
        cfg: ScenarioConfig,
        p_ref: float = Config.P_REF,
        delta_p: float = Config.DELTA_P,
        meshes: tuple[TriangleMesh, TriangleMesh] | None = None,
) -> FilterResult:
    """
    Течение воздуха через фильтр.

    Расчёт ведётся в избыточном давлении, к выводу добавляется p_ref.

    :param cfg: Настройки сценария example2.
    :param p_ref: Опорное давление, кПа.
    :param delta_p: Перепад давления вход-выход, кПа.
    :param meshes: Готовые сетки (по умолчанию h = 0.0125).
    :return: FilterResult.
    """

    if cfg.scenario != Scenario.EXAMPLE2:
        abort(f'run_example2 вызван для сценария {cfg.scenario.value}',
              ConfigError)
    cfg.validate()

    fluid, poro = meshes or example2_meshes()
    disc = Discretization(fluid, poro, cfg.params, cfg.dt)
    data = filter_problem(cfg.params, p_ref, delta_p)
    start = initial_state(disc, np.zeros(disc.layout.n_dofs))

    directory = Path(cfg.out)
    low, high = -BAND_FACTOR * delta_p, delta_p + BAND_FACTOR * delta_p
    snapshots, passed = [], []

    def on_step(result: NewtonResult):
        passed.append(conservation_report(disc, result, data).passed)
        state = result.state
        report_time = any(abs(state.t - t) < 0.5 * cfg.dt for t in REPORT_TIMES)
        if state.step % cfg.cadence and not report_time:
            return

        pressure = recover_fluid_pressure(
            disc.spaces.sigma_f, disc.spaces.u_f, state.sigma_f, state.u_f,
            disc.params, t=state.t,
        )
        in_band = bool(pressure.min() >= low and pressure.max() <= high)
        if not in_band:
            logger.warning(
                f't={state.t:.6g}: давление жидкости [{pressure.min():.3e}, '
                f'{pressure.max():.3e}] вне полосы [{low:.3e}, {high:.3e}] '
                f'(относительно p_ref)'
            )
        files = write_fields(disc, state, directory, pressure_shift=p_ref)
        snapshots.append(Snapshot(
            state.step, state.t,
            float(pressure.min()) + p_ref, float(pressure.max()) + p_ref,
            in_band, [str(f) for f in files],
        ))

    trajectory = time_loop(
        disc, data, start, cfg.n_steps, cfg.newton,
        on_step=on_step, keep_states=False,
    )

    speed, location = peak_speed(disc, trajectory.final)
    result = FilterResult(
        snapshots=snapshots,
        peak_speed=speed,
        peak_location=(float(location[0]), float(location[1])),
        peak_in_gap=in_gap(location),
        iterations=trajectory.iterations,
        conservation_passed=all(passed),
    )
    write_rows_csv(
        [s.to_dict() | {'files': ';'.join(s.files)} for s in snapshots],
        directory / 'snapshots.csv',
    )
    logger.info(
        f'Фильтр: max|u_f| = {speed:.3e} в ({location[0]:.4f}, '
        f'{location[1]:.4f}), над фильтром: {result.peak_in_gap}, '
        f'полоса давлений соблюдена: {result.band_passed}'
    )
    return result
