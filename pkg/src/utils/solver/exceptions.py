class SolverError(Exception):
    """
    Базовая ошибка решателя. Все ошибки проекта наследуются от неё,
    поэтому CLI ловит только этот тип.
    """


class MeshError(SolverError):
    pass


class SpaceError(SolverError):
    pass


class QuadratureError(SolverError):
    pass


class AssemblyError(SolverError):
    pass


class BoundaryConditionError(SolverError):
    pass


class NewtonError(SolverError):
    """
    Метод Ньютона не сошёлся или линейная система вырождена.
    """

    def __init__(
            self,
            message: str = '',
            iterations: int | None = None,
            residual: float | None = None,
    ):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class TimeStepError(SolverError):
    """
    Провал шага по времени, хранит номер шага.
    """

    def __init__(self, message: str = '', step: int | None = None):
        super().__init__(message)
        self.step = step


class ConfigError(SolverError):
    pass


class OutputError(SolverError):
    pass
