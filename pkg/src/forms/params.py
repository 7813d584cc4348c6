from typing import NamedTuple

import numpy as np

from src.utils.solver.abort import abort
from src.utils.solver.exceptions import ConfigError


class ModelParams(NamedTuple):
    """
    Физические коэффициенты задачи.

    mu - вязкость жидкости, rho_f / rho_p - плотности жидкости и скелета,
    lambda_p / mu_p - параметры Ламе, s0 - коэффициент ёмкости,
    K - тензор проницаемости (K00, K01, K10, K11), alpha_p - константа
    Био-Уиллиса, alpha_bjs - коэффициент трения BJS.
    """

    mu: float = 1.0
    rho_f: float = 1.0
    rho_p: float = 1.0
    lambda_p: float = 1.0
    mu_p: float = 1.0
    s0: float = 1.0
    K: tuple[float, float, float, float] = (1.0, 0.0, 0.0, 1.0)
    alpha_p: float = 1.0
    alpha_bjs: float = 1.0
    convection_on: bool = True

    @property
    def permeability(self) -> np.ndarray:
        return np.array(self.K, dtype=float).reshape(2, 2)

    @property
    def inverse_permeability(self) -> np.ndarray:
        return np.linalg.inv(self.permeability)

    def tangential_permeability(self, tangents: np.ndarray) -> np.ndarray:
        """
        K_t = (K t)·t для единичных касательных, (P, 2) -> (P,).
        """

        return np.einsum('pi,ij,pj->p', tangents, self.permeability, tangents)

    def validate(self) -> 'ModelParams':
        positive = ('mu', 'rho_f', 'rho_p', 'lambda_p', 'mu_p', 's0')
        for name in positive:
            value = getattr(self, name)
            if not value > 0:
                abort(f'Параметр {name} должен быть положительным ({value})',
                      ConfigError)

        if len(self.K) != 4:
            abort(f'K должен иметь 4 компоненты, получено {len(self.K)}',
                  ConfigError)
        permeability = self.permeability
        if not np.allclose(permeability, permeability.T,
                           rtol=1e-12, atol=1e-14 * np.abs(permeability).max()):
            abort(f'Тензор проницаемости несимметричен: {self.K}', ConfigError)
        eigenvalues = np.linalg.eigvalsh(permeability)
        if not np.all(eigenvalues > 0):
            abort(
                f'Тензор проницаемости не положительно определён: '
                f'собственные числа {eigenvalues}',
                ConfigError,
            )

        if not 0 < self.alpha_p <= 1:
            abort(f'alpha_p должен лежать в (0, 1], получено {self.alpha_p}',
                  ConfigError)
        if self.alpha_bjs < 0:
            abort(f'alpha_bjs должен быть неотрицательным ({self.alpha_bjs})',
                  ConfigError)
        return self

    def to_dict(self):
        return self._asdict()
