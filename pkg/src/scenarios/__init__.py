from .cli import build_parser, main
from .config import (
    EXAMPLE2_PARAMS, ScenarioConfig, default_config, load_config,
    parse_config, save_config, serialize_config,
)
from .example1 import (
    ConvergenceResult, example1_meshes, run_convergence, run_custom,
    run_example1,
)
from .example2 import FilterResult, example2_meshes, run_example2
from .output import (
    VtkFields, read_fields, write_convergence_csv, write_fields, write_vtk,
)
