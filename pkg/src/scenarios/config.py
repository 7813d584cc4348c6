from pathlib import Path
from typing import NamedTuple

from loguru import logger

from src.consts import Config, Scenario
from src.forms import ModelParams
from src.system import NewtonConfig
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import ConfigError


EXAMPLE2_PARAMS = ModelParams(
    mu=1.81e-8,
    rho_f=1.225e-3,
    rho_p=1.601e-2,
    lambda_p=1e4,
    mu_p=1e5,
    s0=7e-2,
    K=(0.505e-6, -0.495e-6, -0.495e-6, 0.505e-6),
    alpha_p=1.0,
    alpha_bjs=1.0,
    convection_on=True,
)


class ScenarioConfig(NamedTuple):
    """
    Настройки прогона.

    levels - число уровней сетки, dt / t_final - шаг и время в секундах,
    out - каталог (или путь к CSV для сходимости), cadence - снимки
    полей каждые cadence шагов, db - путь к базе результатов.
    """

    scenario: Scenario = Scenario.EXAMPLE1
    levels: int = 4
    dt: float = 1e-3
    t_final: float = 0.01
    params: ModelParams = ModelParams()
    newton: NewtonConfig = NewtonConfig()
    out: str = Config.OUTPUT_DIR
    cadence: int = 1
    db: str = Config.RESULTS_DB

    @property
    def convection_on(self) -> bool:
        return self.params.convection_on

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    def validate(self) -> 'ScenarioConfig':
        if not self.dt > 0:
            abort(f'dt должен быть положительным ({self.dt})', ConfigError)
        if self.t_final < self.dt:
            abort(f't_final={self.t_final} меньше шага dt={self.dt}',
                  ConfigError)
        if self.levels < 1:
            abort(f'Нужен хотя бы один уровень ({self.levels})', ConfigError)
        if self.cadence < 1:
            abort(f'cadence должен быть не меньше 1 ({self.cadence})',
                  ConfigError)
        if abs(self.n_steps * self.dt - self.t_final) > 1e-9 * self.t_final:
            logger.warning(
                f't_final={self.t_final} не кратно dt={self.dt}, '
                f'шагов {self.n_steps}'
            )
        self.params.validate()
        self.newton.validate()
        return self

    def to_dict(self):
        return self._asdict()


def default_config(scenario: Scenario) -> ScenarioConfig:
    if scenario == Scenario.EXAMPLE2:
        return ScenarioConfig(
            scenario=scenario,
            levels=1,
            dt=1.0,
            t_final=400.0,
            params=EXAMPLE2_PARAMS,
            newton=NewtonConfig(scaling='blockwise'),
            cadence=20,
        )
    return ScenarioConfig(scenario=scenario)


_TOP_FIELDS = ('levels', 'dt', 't_final', 'out', 'cadence', 'db')
_PARAM_FIELDS = ModelParams._fields
_NEWTON_FIELDS = tuple(f'newton_{name}' for name in NewtonConfig._fields)


def _format(value) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ', '.join(_format(v) for v in value)
    return str(value)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ('true', 'yes', '1', 'on'):
        return True
    if lowered in ('false', 'no', '0', 'off'):
        return False
    abort(f'Не булево значение "{text}"', ConfigError)


def _convert(template, text: str):
    """
    Приведение строки к типу значения-образца.
    """

    if isinstance(template, bool):
        return _parse_bool(text)
    if isinstance(template, int):
        return int(text)
    if isinstance(template, float):
        return float(text)
    if isinstance(template, tuple):
        return tuple(float(part) for part in text.split(','))
    return text


def serialize_config(cfg: ScenarioConfig) -> str:
    """
    Плоский текст key = value, по строке на поле.
    """

    lines = [f'scenario = {cfg.scenario.value}']
    lines += [f'{name} = {_format(getattr(cfg, name))}' for name in _TOP_FIELDS]
    lines += [
        f'{name} = {_format(getattr(cfg.params, name))}'
        for name in _PARAM_FIELDS
    ]
    lines += [
        f'newton_{name} = {_format(getattr(cfg.newton, name))}'
        for name in NewtonConfig._fields
    ]
    return '\n'.join(lines) + '\n'


def parse_config(text: str) -> ScenarioConfig:
    """
    Разбор текста key = value. Пустые строки и строки с # пропускаются,
    отсутствующие ключи берутся из настроек сценария по умолчанию.

    :param text: Содержимое файла.
    :return: ScenarioConfig.
    """

    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            abort(f'Строка {number}: ожидалось key = value, получено "{raw}"',
                  ConfigError)
        key, value = (part.strip() for part in line.split('=', 1))
        if key in values:
            abort(f'Строка {number}: ключ "{key}" повторяется', ConfigError)
        values[key] = value

    name = values.pop('scenario', Scenario.EXAMPLE1.value)
    if name not in {s.value for s in Scenario}:
        abort(f'Неизвестный сценарий "{name}"', ConfigError)
    scenario = Scenario(name)
    base = default_config(scenario)

    unknown = set(values) - set(_TOP_FIELDS) - set(_PARAM_FIELDS) - set(_NEWTON_FIELDS)
    if unknown:
        abort(f'Неизвестные ключи конфигурации: {sorted(unknown)}', ConfigError)

    try:
        top = {
            key: _convert(getattr(base, key), values[key])
            for key in _TOP_FIELDS if key in values
        }
        params = {
            key: _convert(getattr(base.params, key), values[key])
            for key in _PARAM_FIELDS if key in values
        }
        newton = {
            key[len('newton_'):]: _convert(
                getattr(base.newton, key[len('newton_'):]), values[key]
            )
            for key in _NEWTON_FIELDS if key in values
        }
    except ValueError as e:
        abort(f'Неверное значение в конфигурации: {e}', ConfigError)

    return base._replace(
        scenario=scenario,
        params=base.params._replace(**params),
        newton=base.newton._replace(**newton),
        **top,
    )


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.is_file():
        abort(f'Файл конфигурации {path} не найден', ConfigError)
    logger.info(f'Чтение конфигурации {path}')
    return parse_config(path.read_text(encoding='utf-8'))


def save_config(cfg: ScenarioConfig, path: str | Path):
    Path(path).write_text(serialize_config(cfg), encoding='utf-8')
