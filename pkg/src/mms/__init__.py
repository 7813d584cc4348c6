from .errors import (
    NORMS, ErrorAccumulator, ErrorReport, LevelErrors, compute_error_norms,
    half_norm_surrogate, level_errors, step_errors,
)
from .exact import Example1Solution
from .interpolation import exact_initial_state, interpolate_exact
from .rates import convergence_rates, rate
from .sources import (
    boundary_data, interface_defects, manufactured_sources, problem_data,
)
