import argparse
import sys

from loguru import logger

from src.consts import Config, Scenario
from src.scenarios.config import (
    ScenarioConfig, default_config, load_config,
)
from src.scenarios.example1 import run_custom, run_example1
from src.scenarios.example2 import run_example2
from src.utils.solver.exceptions import SolverError


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument('--dt', type=float, help='Шаг по времени, с')
    parser.add_argument('--t-final', type=float, dest='t_final',
                        help='Конечное время, с')
    parser.add_argument('--no-convection', action='store_true',
                        dest='no_convection',
                        help='Стокс вместо Навье-Стокса')
    parser.add_argument('--out', help='Каталог вывода или путь к CSV')
    parser.add_argument('--cadence', type=int,
                        help='Снимки полей каждые N шагов')
    parser.add_argument('--newton-tol', type=float, dest='newton_tol',
                        help='Абсолютный допуск Ньютона')
    parser.add_argument('--levels', type=int, help='Число уровней сетки')
    parser.add_argument('--db', help='Файл SQLite для результатов')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='python -m src',
        description='Навье-Стокс / Био со смешанными КЭ и множителями '
                    'Лагранжа на интерфейсе',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    converge = commands.add_parser(
        'converge', help='Таблица сходимости на проверочном решении'
    )
    _add_common(converge)

    filter_ = commands.add_parser('filter', help='Течение через фильтр')
    _add_common(filter_)

    run = commands.add_parser('run', help='Прогон по файлу конфигурации')
    run.add_argument('config', help='Файл key = value')
    _add_common(run)
    return parser


def apply_overrides(
        cfg: ScenarioConfig, args: argparse.Namespace
) -> ScenarioConfig:
    """
    Флаги командной строки поверх настроек сценария.
    """

    top = {
        name: getattr(args, name)
        for name in ('dt', 't_final', 'out', 'cadence', 'levels', 'db')
        if getattr(args, name) is not None
    }
    cfg = cfg._replace(**top)
    if args.no_convection:
        cfg = cfg._replace(params=cfg.params._replace(convection_on=False))
    if args.newton_tol is not None:
        cfg = cfg._replace(newton=cfg.newton._replace(abs_tol=args.newton_tol))
    return cfg


def execute(cfg: ScenarioConfig):
    runners = {
        Scenario.EXAMPLE1: run_example1,
        Scenario.EXAMPLE2: run_example2,
        Scenario.CUSTOM: run_custom,
    }
    return runners[cfg.scenario](cfg)


def main(argv: list[str] | None = None) -> int:
    """
    Точка входа CLI.

    :param argv: Аргументы (по умолчанию sys.argv[1:]).
    :return: Код выхода: 0 - успех, 1 - ошибка решателя,
    2 - ошибка аргументов (через argparse).
    """

    args = build_parser().parse_args(argv)
    try:
        if args.command == 'converge':
            cfg = default_config(Scenario.EXAMPLE1)
        elif args.command == 'filter':
            cfg = default_config(Scenario.EXAMPLE2)
        else:
            cfg = load_config(args.config)
        if not cfg.db and Config.RESULTS_DB:
            cfg = cfg._replace(db=Config.RESULTS_DB)
        cfg = apply_overrides(cfg, args).validate()
        logger.info(f'Сценарий {cfg.scenario.value}: {cfg.to_dict()}')
        execute(cfg)
    except SolverError as e:
        logger.error(f'Прогон прерван: {e}')
        print(f'Ошибка: {e}', file=sys.stderr)
        return 1
    return 0
