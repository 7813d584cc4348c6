from typing import Type

from loguru import logger

from src.utils.solver.exceptions import SolverError


def abort(message: str | None = None, error: Type[Exception] = SolverError):
    """
    Прерывает вычисление и пишет лог.

    :param message: Что пошло не так.
    :param error: Ошибка, которая появится.
    """

    if message:
        logger.warning(message)
    raise error(message or '')
