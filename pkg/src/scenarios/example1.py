from typing import NamedTuple

from loguru import logger

from src.consts import BoundaryTag, Diagonal, Scenario, Subdomain
from src.db import db_funcs, db_session
from src.mesh import (
    TriangleMesh, build_rectangle_mesh, on_line_x, on_line_y, tag_boundaries,
)
from src.mms import (
    ErrorAccumulator, ErrorReport, Example1Solution, LevelErrors,
    convergence_rates, exact_initial_state, level_errors, problem_data,
)
from src.scenarios.config import ScenarioConfig
from src.scenarios.output import convergence_csv_path, write_convergence_csv
from src.system import (
    Discretization, NewtonResult, conservation_report, time_loop,
)
from src.utils.solver.abort import abort
from src.utils.solver.decorators import logger_wraps
from src.utils.solver.exceptions import ConfigError


FLUID_CELLS = 4
PORO_CELLS = 3


class ConvergenceResult(NamedTuple):
    report: ErrorReport
    rates: dict[str, list[float | None]]
    conservation_passed: bool
    csv_path: str | None = None

    def to_dict(self):
        return {
            'report': self.report.to_dict(),
            'rates': self.rates,
            'conservation_passed': self.conservation_passed,
            'csv_path': self.csv_path,
        }


def example1_meshes(level: int) -> tuple[TriangleMesh, TriangleMesh]:
    """
    Несогласованные сетки уровня level: Ω_f = (0,1)^2 с левыми
    диагоналями, Ω_p = (0,1)x(-1,0) крест-накрест, на каждом уровне
    число ячеек удваивается.
    """

    n_f, n_p = FLUID_CELLS * 2 ** level, PORO_CELLS * 2 ** level
    fluid = build_rectangle_mesh(
        (0.0, 1.0, 0.0, 1.0), n_f, n_f, Diagonal.LEFT, Subdomain.FLUID
    )
    fluid = tag_boundaries(fluid, [
        (on_line_y(1.0), BoundaryTag.FLUID_DIRICHLET),
        (on_line_x(0.0), BoundaryTag.FLUID_NEUMANN),
        (on_line_x(1.0), BoundaryTag.FLUID_NEUMANN),
        (on_line_y(0.0), BoundaryTag.INTERFACE),
    ])

    poro = build_rectangle_mesh(
        (0.0, 1.0, -1.0, 0.0), n_p, n_p, Diagonal.CRISSCROSS,
        Subdomain.POROELASTIC,
    )
    poro = tag_boundaries(poro, [
        (on_line_y(0.0), BoundaryTag.INTERFACE),
        (on_line_x(0.0), BoundaryTag.PORO_NEUMANN),
        (on_line_x(1.0), BoundaryTag.PORO_NEUMANN),
        (on_line_y(-1.0), BoundaryTag.PORO_DIRICHLET),
    ])
    return fluid, poro


def run_level(
        cfg: ScenarioConfig, level: int, exact: Example1Solution
) -> tuple[LevelErrors, bool]:
    """
    Один уровень сетки: интегрирование по времени с накоплением ошибок
    и проверкой законов сохранения на каждом шаге.
    """

    fluid, poro = example1_meshes(level)
    disc = Discretization(fluid, poro, cfg.params, cfg.dt)
    data = problem_data(exact)
    accumulator = ErrorAccumulator(disc, exact)
    passed = []

    def on_step(result: NewtonResult):
        accumulator.add(result.state)
        passed.append(conservation_report(disc, result, data).passed)

    trajectory = time_loop(
        disc, data, exact_initial_state(exact, disc), cfg.n_steps,
        cfg.newton, on_step=on_step, keep_states=False,
    )
    return (
        level_errors(disc, accumulator, level, trajectory.average_iterations),
        all(passed),
    )


@logger_wraps(output=False, level='INFO')
def run_convergence(cfg: ScenarioConfig) -> ConvergenceResult:
    """
    Проверка сходимости на семействе проверочных решений.

    :param cfg: Настройки (сценарий example1 или custom).
    :return: ConvergenceResult; CSV пишется в cfg.out.
    """

    cfg.validate()
    exact = Example1Solution(cfg.params)
    levels, passed = [], True
    for level in range(cfg.levels):
        errors, ok = run_level(cfg, level, exact)
        levels.append(errors)
        passed = passed and ok

    report = ErrorReport(levels)
    rates = convergence_rates(report) if len(levels) > 1 else {}
    for field, values in rates.items():
        shown = ', '.join('-' if v is None else f'{v:.3f}' for v in values)
        logger.info(f'Порядки {field}: {shown}')

    path = write_convergence_csv(report, rates, convergence_csv_path(cfg.out))
    if cfg.db:
        db_session.global_init(cfg.db)
        db_funcs.save_convergence_report(cfg, report, rates)
    return ConvergenceResult(report, rates, passed, str(path))


def run_example1(cfg: ScenarioConfig) -> ConvergenceResult:
    if cfg.scenario != Scenario.EXAMPLE1:
        abort(f'run_example1 вызван для сценария {cfg.scenario.value}',
              ConfigError)
    return run_convergence(cfg)


def run_custom(cfg: ScenarioConfig) -> ConvergenceResult:
    """
    То же семейство решений с параметрами пользователя; источники
    и невязки сопряжения пересчитываются по параметрам.
    """

    if cfg.scenario != Scenario.CUSTOM:
        abort(f'run_custom вызван для сценария {cfg.scenario.value}',
              ConfigError)
    return run_convergence(cfg)
