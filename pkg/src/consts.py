import os
from enum import Enum

from dotenv import load_dotenv


load_dotenv()


class Config:
    LOG_LEVEL = os.getenv('LOG_LEVEL') or 'DEBUG'
    LOG_FILE = os.getenv('LOG_FILE') or 'src/db/db_files/logs.log'
    OUTPUT_DIR = os.getenv('OUTPUT_DIR') or 'output'
    RESULTS_DB = os.getenv('RESULTS_DB') or ''

    NEWTON_ABS_TOL = float(os.getenv('NEWTON_ABS_TOL') or 1e-10)
    NEWTON_REL_TOL = float(os.getenv('NEWTON_REL_TOL') or 1e-8)
    NEWTON_MAX_ITER = int(os.getenv('NEWTON_MAX_ITER') or 20)

    # Порядки квадратур: линейные формы, конвекция, интерфейс, ошибки
    QUAD_ORDER = int(os.getenv('QUAD_ORDER') or 4)
    CONVECTIVE_QUAD_ORDER = int(os.getenv('CONVECTIVE_QUAD_ORDER') or 6)
    INTERFACE_QUAD_ORDER = int(os.getenv('INTERFACE_QUAD_ORDER') or 5)
    ERROR_QUAD_ORDER = int(os.getenv('ERROR_QUAD_ORDER') or 6)

    GEOMETRY_TOL = float(os.getenv('GEOMETRY_TOL') or 1e-10)

    # Пример 2: опорное давление и перепад, кПа
    P_REF = 100.0
    DELTA_P = 2e-6


class Subdomain(Enum):
    FLUID = 'fluid'
    POROELASTIC = 'poroelastic'


class BoundaryTag(Enum):
    FLUID_DIRICHLET = 'fluid_dirichlet'
    FLUID_NEUMANN = 'fluid_neumann'
    PORO_DIRICHLET = 'poro_dirichlet'
    PORO_NEUMANN = 'poro_neumann'
    INTERFACE = 'interface'


class SpaceKind(Enum):
    BDM1_VECTOR = 'bdm1_vector'
    BDM1_TENSOR_ROWS = 'bdm1_tensor_rows'
    P0_SCALAR = 'p0_scalar'
    P0_VECTOR = 'p0_vector'
    P0_SKEW = 'p0_skew'
    P1_VECTOR_CONTINUOUS = 'p1_vector_continuous'
    P1_TRACE_SCALAR = 'p1_trace_scalar'
    P1_TRACE_VECTOR = 'p1_trace_vector'


class Diagonal(Enum):
    LEFT = 'left'
    RIGHT = 'right'
    CRISSCROSS = 'crisscross'


class Scenario(Enum):
    EXAMPLE1 = 'example1'
    EXAMPLE2 = 'example2'
    CUSTOM = 'custom'


class Field(Enum):
    """
    Неизвестные системы в порядке блоков глобального вектора.
    """

    SIGMA_F = 'sigma_f'
    U_P = 'u_p'
    ETA_P = 'eta_p'
    U_F = 'u_f'
    P_P = 'p_p'
    GAMMA_F = 'gamma_f'
    PHI = 'phi'
    LAMBDA = 'lambda'
