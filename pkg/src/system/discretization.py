import scipy.sparse as sps
from loguru import logger

from src.fem import Spaces, build_spaces
from src.forms import (
    ConvectiveQuadrature, InterfaceForms, InterfaceQuadrature, ModelParams,
    SubdomainForms, assemble_interface_forms, assemble_subdomain_forms,
)
from src.mesh import (
    TraceMesh, TriangleMesh, extract_trace_mesh, mesh_size,
    merge_trace_partitions, trace_mesh_size,
)
from src.system.layout import BlockLayout
from src.utils.solver.abort import abort
from src.utils.solver.exceptions import ConfigError


class Discretization:
    """
    Всё, что не меняется по времени на одном уровне сетки: сетки,
    разбиения интерфейса, пространства, собранные формы и линейная
    часть матрицы Якоби при заданном шаге dt.
    """

    def __init__(
            self,
            fluid_mesh: TriangleMesh,
            poro_mesh: TriangleMesh,
            params: ModelParams,
            dt: float,
    ):
        if not dt > 0:
            abort(f'Шаг по времени должен быть положительным ({dt})',
                  ConfigError)

        self.params = params.validate()
        self.dt = float(dt)
        self.fluid_mesh = fluid_mesh
        self.poro_mesh = poro_mesh

        self.fluid_trace: TraceMesh = extract_trace_mesh(fluid_mesh)
        self.poro_trace: TraceMesh = extract_trace_mesh(poro_mesh)
        self.merged_trace: TraceMesh = merge_trace_partitions(
            self.fluid_trace, self.poro_trace
        )

        self.spaces: Spaces = build_spaces(
            fluid_mesh, poro_mesh, self.fluid_trace, self.poro_trace
        )
        self.layout = BlockLayout(self.spaces.sizes())

        self.forms: SubdomainForms = assemble_subdomain_forms(
            params, self.spaces
        )
        self.interface_quadrature = InterfaceQuadrature(
            self.spaces, self.merged_trace
        )
        self.interface: InterfaceForms = assemble_interface_forms(
            params, self.spaces, self.merged_trace, self.interface_quadrature
        )
        self.convective_quadrature = (
            ConvectiveQuadrature(self.spaces) if params.convection_on else None
        )

        self._split_interface()
        self.linear = self._linear_operator()
        logger.info(
            f'Дискретизация: h_f={self.h_f:.4f}, h_p={self.h_p:.4f}, '
            f'неизвестных {self.layout.n_dofs}'
        )

    @property
    def h_f(self) -> float:
        return mesh_size(self.fluid_mesh)

    @property
    def h_p(self) -> float:
        return mesh_size(self.poro_mesh)

    @property
    def h_tf(self) -> float:
        return trace_mesh_size(self.fluid_trace)

    @property
    def h_tp(self) -> float:
        return trace_mesh_size(self.poro_trace)

    def _split_interface(self):
        n_eta = self.spaces.eta_p.n_dofs
        c_bjs = self.interface.C_bjs.tocsr()
        c_gamma = self.interface.C_gamma.tocsc()
        self.C_ee = c_bjs[:n_eta, :n_eta]
        self.C_ephi = c_bjs[:n_eta, n_eta:]
        self.C_phie = c_bjs[n_eta:, :n_eta]
        self.C_phiphi = c_bjs[n_eta:, n_eta:]
        self.G_e = c_gamma[:, :n_eta].tocsr()
        self.G_phi = c_gamma[:, n_eta:].tocsr()

    def _linear_operator(self) -> sps.csr_matrix:
        """
        Линейная часть матрицы системы в порядке блоков
        (sigma_f, u_p, eta_p, u_f, p_p, gamma_f, phi, lambda).
        """

        f, i, dt = self.forms, self.interface, self.dt
        alpha = self.params.alpha_p
        eta_block = f.M_eta / dt ** 2 + f.A_ep + self.C_ee / dt

        blocks = [
            [f.A_f, None, None, f.B_f.T, None, f.B_sk.T, i.B_nf.T, None],
            [None, f.A_dp, None, None, f.B_p.T, None, None, i.B_np.T],
            [None, None, eta_block, None, alpha * f.B_pe.T, None,
             self.C_ephi, -self.G_e.T],
            [-f.B_f, None, None, f.M_uf / dt, None, None, None, None],
            [None, -f.B_p, -alpha * f.B_pe / dt, None, f.M_pp / dt, None,
             None, None],
            [-f.B_sk, None, None, None, None, None, None, None],
            [-i.B_nf, None, self.C_phie / dt, None, None, None,
             self.C_phiphi, -self.G_phi.T],
            [None, -i.B_np, self.G_e / dt, None, None, None, self.G_phi, None],
        ]
        return sps.bmat(blocks, format='csr')

    def __repr__(self):
        return (
            f'<Discretization(h_f={self.h_f:.4f}, h_p={self.h_p:.4f}, '
            f'dofs={self.layout.n_dofs}, dt={self.dt})>'
        )
