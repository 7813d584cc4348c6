from .convective import (
    ConvectiveQuadrature, NonlinearTerm, assemble_convective,
    assemble_interface_inertia,
)
from .interface import (
    InterfaceForms, InterfaceLoads, InterfaceQuadrature,
    assemble_interface_forms, assemble_interface_loads,
)
from .load import Loads, Sources, assemble_load
from .params import ModelParams
from .subdomain import (
    SubdomainForms, assemble_subdomain_forms, weighted_velocity_mass,
)
