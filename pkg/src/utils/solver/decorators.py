import functools
from typing import Type

import numpy as np
from loguru import logger

from src.utils.solver.exceptions import SolverError


def get_func_name(func):
    return (
            getattr(func, 'func_name', None)
            or getattr(func, '__name__', None)
            or '<undefined>'
    )


def _short(value) -> str:
    """
    Массивы в логах печатаются формой, а не содержимым.
    """

    if isinstance(value, np.ndarray):
        return f'ndarray{value.shape}'
    return repr(value)


def solver_errors_catch(error: Type[SolverError] = SolverError):
    """
    Декоратор для логирования и отлавливания ошибок численных библиотек.
    (Потому что у SuperLU и numpy ошибки ничего не говорят о задаче)

    :param error: Ошибка проекта, в которую превращается исходная.
    """

    def wrapper(func):
        function_name = get_func_name(func)

        @functools.wraps(func)
        def wrapped(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except SolverError:
                raise
            except (
                    np.linalg.LinAlgError, RuntimeError, FloatingPointError
            ) as e:
                message = f'Численная ошибка в "{function_name}": {e!r}'
                logger.error(message)
                raise error(message) from e

        return wrapped

    return wrapper


def logger_wraps(
        entry: bool = True, output: bool = True, level: str = "DEBUG"
):
    """
    Логгер выполнения функций.

    :param entry: Выводить ли входные данные.
    :param output: Выводить ли выходные данные.
    :param level: Уровень
    """

    def wrapper(func):
        function_name = get_func_name(func)

        @functools.wraps(func)
        def wrapped(*args, **kwargs):
            logger_ = logger.opt(depth=1)
            if entry:
                shown_args = ', '.join(_short(arg) for arg in args)
                shown_kwargs = ', '.join(
                    f'{key}={_short(value)}' for key, value in kwargs.items()
                )
                logger_.log(
                    level,
                    f'Вызов "{function_name}" '
                    f'(args=({shown_args}), kwargs={{{shown_kwargs}}})'
                )
            result = func(*args, **kwargs)
            if output:
                logger_.log(
                    level,
                    f'Результат "{function_name}" (result={_short(result)})'
                )
            return result

        return wrapped

    return wrapper
