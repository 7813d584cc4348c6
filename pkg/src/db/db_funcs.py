import sqlalchemy as sa
from loguru import logger

from src.db.db_session import create_session
from src.db.__all_models import LevelResult, Run
from src.mms import ErrorReport


def save_convergence_report(
        cfg,
        report: ErrorReport,
        rates: dict[str, list[float | None]],
) -> int:
    """
    Сохраняет таблицу сходимости.

    :param cfg: ScenarioConfig прогона.
    :param report: Ошибки по уровням.
    :param rates: Порядки между соседними уровнями.
    :return: Айди прогона.
    """

    with create_session(do_commit=True) as db_sess:
        run = Run(
            scenario=cfg.scenario.value,
            levels=len(report.levels),
            dt=cfg.dt,
            t_final=cfg.t_final,
            convection_on=cfg.params.convection_on,
        )
        db_sess.add(run)
        db_sess.flush()

        for i, level in enumerate(report.levels):
            for field in report.fields:
                field_rates = rates.get(field, [])
                rate = field_rates[i - 1] if 0 < i <= len(field_rates) else None
                db_sess.add(LevelResult(
                    run_id=run.id,
                    level=level.level,
                    h_f=level.h_f,
                    h_p=level.h_p,
                    h_tf=level.h_tf,
                    h_tp=level.h_tp,
                    field=field,
                    error=level.errors[field],
                    rate=rate,
                    iterations=level.iterations,
                ))
        run_id = run.id

    logger.info(f'Прогон {run_id} сохранён в базу результатов')
    return run_id


def get_run(run_id: int) -> Run | None:
    """
    Возвращает прогон по айди.
    """

    with create_session() as db_sess:
        return db_sess.get(Run, run_id)


def get_level_results(
        run_id: int, field: str | None = None
) -> list[LevelResult]:
    """
    Результаты прогона по уровням.

    :param run_id: Айди прогона.
    :param field: Только это поле (None - все).
    :return: Записи, упорядоченные по уровню и полю.
    """

    with create_session() as db_sess:
        query = sa.select(LevelResult).where(LevelResult.run_id == run_id)
        if field is not None:
            query = query.where(LevelResult.field == field)
        query = query.order_by(LevelResult.level, LevelResult.field)
        return list(db_sess.scalars(query))


def list_runs(scenario: str | None = None) -> list[Run]:
    with create_session() as db_sess:
        query = sa.select(Run)
        if scenario is not None:
            query = query.where(Run.scenario == scenario)
        return list(db_sess.scalars(query.order_by(Run.id)))


def export_run(run_id: int) -> dict | None:
    """
    Прогон со всеми результатами в виде словаря (для JSON и отчётов).
    """

    run = get_run(run_id)
    if run is None:
        return None
    return run.to_dict() | {
        'results': [result.to_dict() for result in get_level_results(run_id)]
    }
