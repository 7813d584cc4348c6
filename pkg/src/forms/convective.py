from typing import NamedTuple

import numpy as np
import scipy.sparse as sps

from src.consts import Config
from src.fem import Spaces, cell_weights, combine, make_quadrature, tabulate
from src.forms.assembly import assemble_matrix, assemble_vector
from src.forms.interface import InterfaceQuadrature
from src.forms.params import ModelParams


class NonlinearTerm(NamedTuple):
    """
    Нелинейное слагаемое в точке w: вклад в невязку, его производная
    по неизвестной и линейный оператор при замороженном w.
    """

    residual: np.ndarray
    jacobian: sps.csr_matrix
    operator: sps.csr_matrix

    def to_dict(self):
        return self._asdict()


class ConvectiveQuadrature:
    """
    Табуляции sigma_f и u_f на повышенной квадратуре для конвекции.
    """

    def __init__(self, spaces: Spaces, order: int | None = None):
        rule = make_quadrature(order or Config.CONVECTIVE_QUAD_ORDER)
        mesh = spaces.sigma_f.mesh
        self.weights = cell_weights(mesh, rule.weights)
        self.sigma = tabulate(spaces.sigma_f, rule.cartesian)
        self.velocity = tabulate(spaces.u_f, rule.cartesian)
        self.spaces = spaces


def assemble_convective(
        params: ModelParams,
        w_f: np.ndarray,
        spaces: Spaces,
        quadrature: ConvectiveQuadrature | None = None,
) -> NonlinearTerm:
    """
    Слагаемое κ_w(u, τ) = (ρ_f / 2μ)((w ⊗ u)^d, τ) в точке u = w.

    :param w_f: Коэффициенты скорости жидкости.
    :return: NonlinearTerm: невязка κ_w(w, τ), производная
    κ_w(δu, τ) + κ_δu(w, τ) и оператор K(w): u -> κ_w(u, τ).
    """

    q = quadrature or ConvectiveQuadrature(spaces)
    n_sigma, n_u = spaces.sigma_f.n_dofs, spaces.u_f.n_dofs
    scale = params.rho_f / (2.0 * params.mu)
    weights = scale * q.weights

    w = combine(q.velocity, w_f).values  # (M, Q, 2)
    tau = q.sigma.values  # (M, 12, Q, 2, 2)
    v = q.velocity.values  # (M, 2, Q, 2)
    identity = np.eye(2)

    outer = np.einsum('mqa,mqb->mqab', w, w)
    deviator = outer - 0.5 * np.einsum('mqa,mqa->mq', w, w)[..., None, None] * identity
    local_residual = np.einsum('mq,mqab,miqab->mi', weights, deviator, tau)

    w_v = np.einsum('mqa,mjqb->mjqab', w, v)
    w_dot_v = np.einsum('mqa,mjqa->mjq', w, v)[..., None, None] * identity
    operator = w_v - 0.5 * w_dot_v
    derivative = w_v + w_v.transpose(0, 1, 2, 4, 3) - w_dot_v

    local_operator = np.einsum('mq,mjqab,miqab->mij', weights, operator, tau)
    local_jacobian = np.einsum('mq,mjqab,miqab->mij', weights, derivative, tau)

    return NonlinearTerm(
        residual=assemble_vector(q.sigma.dofs, local_residual, n_sigma),
        jacobian=assemble_matrix(
            q.sigma.dofs, q.velocity.dofs, local_jacobian, (n_sigma, n_u)
        ),
        operator=assemble_matrix(
            q.sigma.dofs, q.velocity.dofs, local_operator, (n_sigma, n_u)
        ),
    )


def assemble_interface_inertia(
        params: ModelParams,
        zeta: np.ndarray,
        spaces: Spaces,
        quadrature: InterfaceQuadrature,
) -> NonlinearTerm:
    """
    Слагаемое l_ζ(φ, ψ) = ρ_f <ζ·n_f, φ·ψ> в точке φ = ζ.

    :param zeta: Коэффициенты следа скорости на интерфейсе.
    :return: NonlinearTerm: невязка l_ζ(ζ, ψ), производная
    l_ζ(δφ, ψ) + l_δφ(ζ, ψ) и оператор L(ζ).
    """

    q = quadrature
    n_phi = spaces.phi.n_dofs
    weights = params.rho_f * q.weights
    basis = q.phi.values  # (P, 4, 2)

    z = combine(q.phi, zeta).values  # (P, 2)
    z_n = np.einsum('pa,pa->p', z, q.n_f)
    basis_n = np.einsum('pja,pa->pj', basis, q.n_f)
    basis_z = np.einsum('pia,pa->pi', basis, z)
    mass = np.einsum('pia,pja->pij', basis, basis)

    local_operator = np.einsum('p,p,pij->pij', weights, z_n, mass)
    local_jacobian = local_operator + np.einsum(
        'p,pj,pi->pij', weights, basis_n, basis_z
    )
    local_residual = np.einsum('p,p,pi->pi', weights, z_n, basis_z)

    shape = (n_phi, n_phi)
    return NonlinearTerm(
        residual=assemble_vector(q.phi.dofs, local_residual, n_phi),
        jacobian=assemble_matrix(q.phi.dofs, q.phi.dofs, local_jacobian, shape),
        operator=assemble_matrix(q.phi.dofs, q.phi.dofs, local_operator, shape),
    )
