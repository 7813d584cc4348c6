import math

from loguru import logger

from src.mms.errors import ErrorReport
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import ConfigError


def rate(
        error: float, next_error: float, h: float, next_h: float
) -> float | None:
    """
    Порядок сходимости log(e_i / e_(i+1)) / log(h_i / h_(i+1)).

    :return: Порядок или None, если одна из ошибок нулевая.
    """

    if error <= 0 or next_error <= 0:
        return None
    if h == next_h:
        abort(f'Одинаковые размеры сетки {h} на соседних уровнях', ConfigError)
    return math.log(error / next_error) / math.log(h / next_h)


def convergence_rates(report: ErrorReport) -> dict[str, list[float | None]]:
    """
    Порядки сходимости по каждому полю между соседними уровнями.

    :param report: Ошибки минимум на двух уровнях.
    :return: {поле: [порядок между уровнями 0-1, 1-2, ...]}.
    """

    if len(report.levels) < 2:
        abort(
            f'Для порядков нужно хотя бы два уровня, есть {len(report.levels)}',
            ConfigError,
        )

    rates = {}
    for field in report.fields:
        errors, sizes = report.errors(field), report.sizes(field)
        rates[field] = [
            rate(errors[i], errors[i + 1], sizes[i], sizes[i + 1])
            for i in range(len(errors) - 1)
        ]
        undefined = [i for i, value in enumerate(rates[field]) if value is None]
        if undefined:
            logger.warning(
                f'Порядок для {field} не определён на парах уровней {undefined}'
            )
    return rates
