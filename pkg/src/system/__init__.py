from .boundary import (
    Constraints, apply_boundary_conditions, essential_constraints,
    natural_loads,
)
from .diagnostics import (
    ConservationReport, conservation_report, conservation_residuals,
    discrete_energy,
)
from .discretization import Discretization
from .layout import BlockLayout, History, SystemState
from .newton import NewtonConfig, NewtonResult, newton_solve
from .pressure import recover_fluid_pressure
from .problem import BoundaryData, InterfaceDefects, ProblemData
from .residual import BlockSystem, build_residual_and_jacobian, prepare_step
from .time_loop import Trajectory, initial_state, time_loop
