from typing import NamedTuple

import numpy as np

from src.consts import Field
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import AssemblyError


class BlockLayout(NamedTuple):
    """
    Размеры блоков глобального вектора в порядке Field.
    """

    sizes: tuple[int, ...]

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(int(v) for v in np.concatenate([[0], np.cumsum(self.sizes)]))

    @property
    def n_dofs(self) -> int:
        return int(sum(self.sizes))

    def slice(self, field: Field) -> slice:
        index = list(Field).index(field)
        offsets = self.offsets
        return slice(offsets[index], offsets[index + 1])

    def split(self, vector: np.ndarray) -> dict[Field, np.ndarray]:
        if len(vector) != self.n_dofs:
            abort(
                f'Длина вектора {len(vector)} не совпадает с раскладкой '
                f'{self.n_dofs}',
                AssemblyError,
            )
        return {field: vector[self.slice(field)] for field in Field}

    def join(self, blocks: dict[Field, np.ndarray]) -> np.ndarray:
        vector = np.zeros(self.n_dofs)
        for field, values in blocks.items():
            vector[self.slice(field)] = values
        return vector

    def to_dict(self):
        return {field.value: size for field, size in zip(Field, self.sizes)}


class SystemState(NamedTuple):
    """
    Решение на временном слое m вместе с историей, по которой оно найдено.

    vector - все неизвестные (sigma_f, u_p, eta_p, u_f, p_p, gamma_f, phi,
    lambda) одним вектором; eta_prev / eta_prev2 - смещения на слоях
    m-1 и m-2, u_f_prev / p_p_prev - на слое m-1.
    """

    t: float
    step: int
    vector: np.ndarray
    layout: BlockLayout
    eta_prev: np.ndarray
    eta_prev2: np.ndarray
    u_f_prev: np.ndarray
    p_p_prev: np.ndarray

    def field(self, field: Field) -> np.ndarray:
        return self.vector[self.layout.slice(field)]

    @property
    def sigma_f(self) -> np.ndarray:
        return self.field(Field.SIGMA_F)

    @property
    def u_p(self) -> np.ndarray:
        return self.field(Field.U_P)

    @property
    def eta_p(self) -> np.ndarray:
        return self.field(Field.ETA_P)

    @property
    def u_f(self) -> np.ndarray:
        return self.field(Field.U_F)

    @property
    def p_p(self) -> np.ndarray:
        return self.field(Field.P_P)

    @property
    def gamma_f(self) -> np.ndarray:
        return self.field(Field.GAMMA_F)

    @property
    def phi(self) -> np.ndarray:
        return self.field(Field.PHI)

    @property
    def lambda_(self) -> np.ndarray:
        return self.field(Field.LAMBDA)

    def eta_rate(self, dt: float) -> np.ndarray:
        """
        d_t eta на слое m.
        """

        return (self.eta_p - self.eta_prev) / dt

    def history(self) -> 'History':
        """
        История для следующего шага.
        """

        return History(
            eta_prev=self.eta_p.copy(),
            eta_prev2=self.eta_prev.copy(),
            u_f_prev=self.u_f.copy(),
            p_p_prev=self.p_p.copy(),
        )

    def to_dict(self):
        return self._asdict()


class History(NamedTuple):
    eta_prev: np.ndarray
    eta_prev2: np.ndarray
    u_f_prev: np.ndarray
    p_p_prev: np.ndarray

    def to_dict(self):
        return self._asdict()
