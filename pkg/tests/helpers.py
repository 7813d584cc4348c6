from src.consts import BoundaryTag, Diagonal, Subdomain
from src.mesh import build_rectangle_mesh, on_line_x, on_line_y, tag_boundaries


def coupled_meshes(n_f: int, n_p: int, poro_diagonal=Diagonal.LEFT):
    """
    Ω_f = (0,1)^2 над Ω_p = (0,1)x(-1,0) с метками как в проверочной задаче.
    """

    fluid = tag_boundaries(
        build_rectangle_mesh(
            (0.0, 1.0, 0.0, 1.0), n_f, n_f, Diagonal.LEFT, Subdomain.FLUID
        ),
        [
            (on_line_y(1.0), BoundaryTag.FLUID_DIRICHLET),
            (on_line_x(0.0), BoundaryTag.FLUID_NEUMANN),
            (on_line_x(1.0), BoundaryTag.FLUID_NEUMANN),
            (on_line_y(0.0), BoundaryTag.INTERFACE),
        ],
    )
    poro = tag_boundaries(
        build_rectangle_mesh(
            (0.0, 1.0, -1.0, 0.0), n_p, n_p, poro_diagonal,
            Subdomain.POROELASTIC,
        ),
        [
            (on_line_y(0.0), BoundaryTag.INTERFACE),
            (on_line_x(0.0), BoundaryTag.PORO_NEUMANN),
            (on_line_x(1.0), BoundaryTag.PORO_NEUMANN),
            (on_line_y(-1.0), BoundaryTag.PORO_DIRICHLET),
        ],
    )
    return fluid, poro
