from .bdm import piola_map, reference_bdm1_basis
from .evaluation import FieldValues, combine, evaluate
from .interpolation import edge_moments, interpolate
from .quadrature import QuadratureRule, make_quadrature
from .spaces import (
    FunctionSpace, Spaces, Tabulation, build_spaces, cell_weights, tabulate,
    tabulate_at, tabulate_trace, to_physical, to_reference,
)
