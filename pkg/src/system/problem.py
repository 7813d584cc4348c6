from typing import Callable, NamedTuple

import numpy as np

from src.forms import Sources
from src.forms.interface import InterfaceData


DataFunction = Callable[[float, np.ndarray], np.ndarray]


class BoundaryData(NamedTuple):
    """
    Граничные данные, функции (t, points) -> значения.

    u_f - скорость на Γ_f^D (естественное условие), sigma_f - тензор,
    чей нормальный след задаётся на Γ_f^N, u_p - поток Дарси,
    нормальная компонента которого задаётся на Γ_p^N, p_p - давление
    на Γ_p^D (естественное), eta_p - смещение на внешней границе Γ_p.
    None - однородное условие.
    """

    u_f: DataFunction | None = None
    sigma_f: DataFunction | None = None
    u_p: DataFunction | None = None
    p_p: DataFunction | None = None
    eta_p: DataFunction | None = None

    def to_dict(self):
        return self._asdict()


class InterfaceDefects(NamedTuple):
    """
    Невязки условий сопряжения, функции (t, points, n_f) -> значения.
    """

    g_gamma: InterfaceData | None = None
    g_f: InterfaceData | None = None
    g_p: InterfaceData | None = None

    def to_dict(self):
        return self._asdict()


class ProblemData(NamedTuple):
    sources: Sources = Sources()
    boundary: BoundaryData = BoundaryData()
    defects: InterfaceDefects = InterfaceDefects()

    def to_dict(self):
        return self._asdict()
