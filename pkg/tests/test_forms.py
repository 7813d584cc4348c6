import numpy as np
import pytest

from src.fem import cell_weights, evaluate, interpolate, make_quadrature
from src.forms import (
    ModelParams, Sources, assemble_convective, assemble_interface_forms,
    assemble_interface_inertia, assemble_load, assemble_subdomain_forms,
    weighted_velocity_mass,
)
from src.consts import Subdomain
from src.mesh import TraceMesh
from src.mms import Example1Solution
from src.scenarios.config import EXAMPLE2_PARAMS
from src.system import Discretization
from src.utils.solver.exceptions import AssemblyError, ConfigError
from tests.helpers import coupled_meshes


def _constant(value):
    value = np.asarray(value, dtype=float)
    return lambda points: np.broadcast_to(
        value, points.shape[:-1] + value.shape
    ).copy()


def _asymmetry(matrix) -> float:
    scale = max(abs(matrix).max(), 1e-300)
    return abs(matrix - matrix.T).max() / scale


# Формы подобластей

@pytest.mark.parametrize('name', [
    'A_f', 'A_dp', 'A_ep', 'M_uf', 'M_pp', 'M_eta',
])
def test_subdomain_forms_are_symmetric(tiny_disc, name):
    assert _asymmetry(getattr(tiny_disc.forms, name)) <= 1e-12


def test_interface_friction_is_symmetric(navier_disc):
    assert _asymmetry(navier_disc.interface.C_bjs) <= 1e-12


@pytest.mark.parametrize('name', ['A_f', 'A_dp'])
def test_subdomain_forms_are_semidefinite(navier_disc, rng, name):
    matrix = getattr(navier_disc.forms, name)
    for _ in range(5):
        x = rng.standard_normal(matrix.shape[0])
        assert x @ (matrix @ x) >= -1e-12 * (x @ x)


def test_friction_is_semidefinite(tiny_disc, rng):
    matrix = tiny_disc.interface.C_bjs
    for _ in range(5):
        x = rng.standard_normal(matrix.shape[0])
        assert x @ (matrix @ x) >= -1e-12 * (x @ x)


def test_elasticity_is_coercive_on_constrained_space(navier_disc, rng):
    space = navier_disc.spaces.eta_p
    for _ in range(5):
        x = rng.standard_normal(space.n_dofs)
        x[space.constrained] = 0.0
        assert x @ (navier_disc.forms.A_ep @ x) > 0.0


def test_deviatoric_form_vanishes_on_identity(navier_disc):
    identity = interpolate(navier_disc.spaces.sigma_f, _constant(np.eye(2)))

    assert identity @ (navier_disc.forms.A_f @ identity) == pytest.approx(
        0.0, abs=1e-12
    )


def test_darcy_form_with_unit_permeability(stokes_disc, rng):
    space = stokes_disc.spaces.u_p
    x = rng.standard_normal(space.n_dofs)
    rule = make_quadrature(4)
    values = evaluate(space, x, rule.cartesian).values
    weights = cell_weights(space.mesh, rule.weights)
    expected = np.einsum('mq,mqa,mqa->', weights, values, values)

    assert x @ (stokes_disc.forms.A_dp @ x) == pytest.approx(expected, rel=1e-12)


def test_darcy_divergence_is_net_flux(navier_disc):
    space = navier_disc.spaces.u_p
    matrix = navier_disc.forms.B_p.toarray()
    for cell in range(space.mesh.n_triangles):
        entries = matrix[cell, space.cell_dofs[cell]]
        assert entries == pytest.approx(-space.cell_signs[cell])


def test_weak_symmetry_kills_symmetric_stress(navier_disc):
    def strain(points):
        x, y = points[..., 0], points[..., 1]
        return np.stack([
            np.stack([2.0 * x, 0.5 * y], axis=-1),
            np.stack([0.5 * y, x], axis=-1),
        ], axis=-2)

    tau = interpolate(navier_disc.spaces.sigma_f, strain)

    assert navier_disc.forms.B_sk @ tau == pytest.approx(
        np.zeros(navier_disc.spaces.gamma_f.n_dofs), abs=1e-12
    )


def test_weighted_mass_with_unit_weight(navier_disc):
    space = navier_disc.spaces.u_f
    mass = weighted_velocity_mass(space, lambda points: np.ones(points.shape[:-1]))

    assert abs(mass - navier_disc.forms.M_uf / navier_disc.params.rho_f).max() <= 1e-14


def test_subdomain_forms_reject_wrong_mesh(navier_disc):
    spaces = navier_disc.spaces._replace(u_f=navier_disc.spaces.p_p)

    with pytest.raises(AssemblyError):
        assemble_subdomain_forms(navier_disc.params, spaces)


# Формы интерфейса

def test_darcy_flux_multiplier_oracle(stokes_disc):
    flux = interpolate(stokes_disc.spaces.u_p, _constant([0.0, 1.0]))

    assert stokes_disc.interface.B_np @ flux == pytest.approx(
        [1 / 6, 1 / 3, 1 / 3, 1 / 6]
    )


def test_fluid_traction_multiplier_oracle(stokes_disc):
    identity = interpolate(stokes_disc.spaces.sigma_f, _constant(np.eye(2)))
    load = stokes_disc.interface.B_nf @ identity

    assert load[0::2] == pytest.approx(np.zeros(5), abs=1e-14)
    assert load[1::2] == pytest.approx([1 / 8, 1 / 4, 1 / 4, 1 / 4, 1 / 8])


def test_interface_mass_form_oracle(stokes_disc):
    velocity = interpolate(stokes_disc.spaces.phi, _constant([0.0, 1.0]))

    assert stokes_disc.G_phi @ velocity == pytest.approx(
        [1 / 6, 1 / 3, 1 / 3, 1 / 6]
    )


def test_zero_friction_coefficient(navier_disc):
    forms = assemble_interface_forms(
        navier_disc.params._replace(alpha_bjs=0.0),
        navier_disc.spaces,
        navier_disc.merged_trace,
        navier_disc.interface_quadrature,
    )

    assert abs(forms.C_bjs).max() == 0.0


def test_friction_scales_with_tangential_permeability(navier_disc):
    def friction(params):
        return assemble_interface_forms(
            params, navier_disc.spaces, navier_disc.merged_trace,
            navier_disc.interface_quadrature,
        ).C_bjs

    unit = friction(ModelParams(mu=1.0, alpha_bjs=1.0))
    scaled = friction(ModelParams(mu=2.0, alpha_bjs=0.5))
    porous = friction(ModelParams(K=(4.0, 0.0, 0.0, 4.0)))

    assert abs(unit - scaled).max() <= 1e-14
    assert abs(porous - 0.5 * unit).max() <= 1e-14


def test_matching_grids_merged_partition_changes_nothing():
    params = ModelParams(alpha_bjs=0.7, K=(1.0, 0.2, 0.2, 0.5))
    disc = Discretization(*coupled_meshes(3, 3), params, dt=0.1)
    fluid, poro = disc.fluid_trace, disc.poro_trace
    assert poro.breakpoints == pytest.approx(fluid.breakpoints)

    # на совпадающих сетках отрезок k - это ребро k обеих сторон
    shared = TraceMesh(
        fluid.breakpoints,
        fluid.points,
        {
            Subdomain.FLUID: fluid.parent_edges[Subdomain.FLUID],
            Subdomain.POROELASTIC: poro.parent_edges[Subdomain.POROELASTIC],
        },
        {
            Subdomain.FLUID: np.arange(fluid.n_segments),
            Subdomain.POROELASTIC: np.arange(poro.n_segments),
        },
    )
    direct = assemble_interface_forms(params, disc.spaces, shared)
    merged = assemble_interface_forms(params, disc.spaces, disc.merged_trace)

    for name in ('B_nf', 'B_np', 'C_gamma', 'C_bjs'):
        assert abs(getattr(direct, name) - getattr(merged, name)).max() <= 1e-12
        assert abs(getattr(direct, name)).max() > 0.0


# Конвекция и инерция на интерфейсе

def test_convective_term_vanishes_at_rest(navier_disc):
    term = assemble_convective(
        navier_disc.params, np.zeros(navier_disc.spaces.u_f.n_dofs),
        navier_disc.spaces, navier_disc.convective_quadrature,
    )

    assert not term.residual.any()
    assert abs(term.jacobian).max() == 0.0


def test_convective_term_is_quadratic(navier_disc, rng):
    w = rng.standard_normal(navier_disc.spaces.u_f.n_dofs)
    args = (navier_disc.spaces, navier_disc.convective_quadrature)
    single = assemble_convective(navier_disc.params, w, *args).residual
    double = assemble_convective(navier_disc.params, 2.0 * w, *args).residual

    assert double == pytest.approx(4.0 * single, rel=1e-12, abs=1e-14)


def test_convective_deviator_oracle(navier_disc):
    spaces = navier_disc.spaces
    w = interpolate(spaces.u_f, _constant([1.0, 0.0]))
    tau = interpolate(spaces.sigma_f, _constant([[1.0, 0.0], [0.0, 0.0]]))
    term = assemble_convective(
        navier_disc.params, w, spaces, navier_disc.convective_quadrature
    )

    # ((w ⊗ w)^d, τ) = 1/2 на единичном квадрате, множитель ρ_f / 2μ
    assert term.residual @ tau == pytest.approx(0.25)


def test_convective_jacobian_matches_finite_difference(navier_disc, rng):
    spaces = navier_disc.spaces
    args = (spaces, navier_disc.convective_quadrature)
    w = rng.standard_normal(spaces.u_f.n_dofs)
    d = rng.standard_normal(spaces.u_f.n_dofs)
    eps = 1e-4

    plus = assemble_convective(navier_disc.params, w + eps * d, *args).residual
    minus = assemble_convective(navier_disc.params, w - eps * d, *args).residual
    jacobian = assemble_convective(navier_disc.params, w, *args).jacobian

    assert (plus - minus) / (2 * eps) == pytest.approx(
        jacobian @ d, rel=1e-7, abs=1e-9
    )


def test_interface_inertia_vanishes_at_rest(navier_disc):
    term = assemble_interface_inertia(
        navier_disc.params, np.zeros(navier_disc.spaces.phi.n_dofs),
        navier_disc.spaces, navier_disc.interface_quadrature,
    )

    assert not term.residual.any()
    assert abs(term.jacobian).max() == 0.0


def test_interface_inertia_hat_oracle(navier_disc):
    c = 2.0
    zeta = np.zeros(navier_disc.spaces.phi.n_dofs)
    zeta[1::2] = -c
    operator = assemble_interface_inertia(
        navier_disc.params, zeta, navier_disc.spaces,
        navier_disc.interface_quadrature,
    ).operator.toarray()

    # ∫ hat^2 = 2h/3 при h = 1/4
    expected = navier_disc.params.rho_f * c * 2.0 * 0.25 / 3.0
    for vertex in (1, 2, 3):
        for component in (0, 1):
            dof = 2 * vertex + component
            assert operator[dof, dof] == pytest.approx(expected)


def test_interface_inertia_jacobian_matches_finite_difference(navier_disc, rng):
    args = (navier_disc.spaces, navier_disc.interface_quadrature)
    zeta = rng.standard_normal(navier_disc.spaces.phi.n_dofs)
    d = rng.standard_normal(navier_disc.spaces.phi.n_dofs)
    eps = 1e-4

    plus = assemble_interface_inertia(navier_disc.params, zeta + eps * d, *args)
    minus = assemble_interface_inertia(navier_disc.params, zeta - eps * d, *args)
    jacobian = assemble_interface_inertia(navier_disc.params, zeta, *args).jacobian

    assert (plus.residual - minus.residual) / (2 * eps) == pytest.approx(
        jacobian @ d, rel=1e-7, abs=1e-9
    )


# Правые части

def test_zero_sources_give_zero_load(navier_disc):
    loads = assemble_load(0.3, Sources(), navier_disc.spaces)

    for vector in loads:
        assert not vector.any()


def test_constant_body_force_load(navier_disc):
    loads = assemble_load(
        0.0, Sources(f_f=lambda t, points: _constant([1.0, 0.0])(points)),
        navier_disc.spaces,
    )
    areas = navier_disc.fluid_mesh.areas

    assert loads.u_f[0::2] == pytest.approx(areas)
    assert loads.u_f[1::2] == pytest.approx(np.zeros_like(areas))


def test_compressibility_load_pairs_with_trace(navier_disc):
    exact = Example1Solution(navier_disc.params)
    loads = assemble_load(0.0, Sources(q_f=exact.q_f), navier_disc.spaces)
    identity = interpolate(navier_disc.spaces.sigma_f, _constant(np.eye(2)))

    # -1/2 (q_f, tr I) = -q_f |Ω_f| при q_f = -2π
    assert loads.sigma_f @ identity == pytest.approx(2.0 * np.pi)


# Параметры

@pytest.mark.parametrize('change', [
    {'mu': 0.0},
    {'rho_f': -1.0},
    {'s0': 0.0},
    {'K': (1.0, 0.5, 0.0, 1.0)},
    {'K': (1.0, 2.0, 2.0, 1.0)},
    {'K': (1.0, 0.0, 0.0)},
    {'alpha_p': 0.0},
    {'alpha_p': 1.5},
    {'alpha_bjs': -0.1},
])
def test_invalid_params_rejected(change):
    with pytest.raises(ConfigError):
        ModelParams()._replace(**change).validate()


def test_filter_permeability_eigenvalues():
    eigenvalues = np.linalg.eigvalsh(EXAMPLE2_PARAMS.permeability)

    assert eigenvalues == pytest.approx([1e-8, 1e-6], rel=1e-9)
    assert EXAMPLE2_PARAMS.validate() is EXAMPLE2_PARAMS
