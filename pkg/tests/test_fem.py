from math import factorial

import numpy as np
import pytest

from src.consts import Diagonal, Field, SpaceKind, Subdomain
from src.fem import (
    build_spaces, combine, evaluate, interpolate, make_quadrature,
    piola_map, reference_bdm1_basis, tabulate, tabulate_at, tabulate_trace,
)
from src.fem.bdm import reference_edge
from src.fem.spaces import (
    bdm1_tensor_space, bdm1_vector_space, p0_space, p1_vector_space,
    to_reference,
)
from src.mesh import (
    TriangleMesh, build_rectangle_mesh, extract_trace_mesh,
)
from src.utils.solver.exceptions import QuadratureError, SpaceError
from tests.helpers import coupled_meshes


@pytest.fixture(scope='module')
def mesh():
    return build_rectangle_mesh((0.0, 1.0, 0.0, 1.0), 2, 2, Diagonal.CRISSCROSS)


def _edge_rule(order=5):
    rule = make_quadrature(order, dim=1)
    return rule.cartesian[:, 0], rule.weights


# Квадратуры

def test_triangle_weights_sum_to_area():
    for order in range(1, 7):
        assert make_quadrature(order).weights.sum() == pytest.approx(0.5)


def test_triangle_integral_of_x2y():
    rule = make_quadrature(4)
    x, y = rule.cartesian.T

    assert rule.weights @ (x ** 2 * y) == pytest.approx(1.0 / 60.0, abs=1e-15)


def test_segment_integral_of_x5():
    rule = make_quadrature(5, dim=1)

    assert rule.weights @ rule.cartesian[:, 0] ** 5 == pytest.approx(1.0 / 6.0)


@pytest.mark.parametrize('order', range(1, 7))
def test_triangle_rule_is_exact_on_monomials(order):
    rule = make_quadrature(order)
    x, y = rule.cartesian.T
    for a in range(order + 1):
        for b in range(order + 1 - a):
            exact = factorial(a) * factorial(b) / factorial(a + b + 2)
            assert rule.weights @ (x ** a * y ** b) == pytest.approx(
                exact, rel=1e-12, abs=1e-15
            )


@pytest.mark.parametrize('order', range(1, 8))
def test_segment_rule_is_exact_on_monomials(order):
    rule = make_quadrature(order, dim=1)
    s = rule.cartesian[:, 0]
    for a in range(order + 1):
        assert rule.weights @ s ** a == pytest.approx(1.0 / (a + 1), rel=1e-12)


def test_quadrature_points_are_barycentric():
    rule = make_quadrature(6)

    assert np.all(rule.weights > 0)
    assert rule.points.sum(axis=1) == pytest.approx(np.ones(len(rule.weights)))
    assert np.all(rule.points >= 0)


@pytest.mark.parametrize('order, dim', [(0, 2), (7, 2), (0, 1), (8, 1), (2, 3)])
def test_unsupported_quadrature_rejected(order, dim):
    with pytest.raises(QuadratureError):
        make_quadrature(order, dim)


# BDM1 и Пиола

def test_bdm_basis_is_dual_to_edge_moments():
    s, w = _edge_rule()
    moments = np.zeros((6, 6))
    for i in range(3):
        start, end = reference_edge(i)
        tangent = end - start
        normal = np.array([tangent[1], -tangent[0]])
        values, _ = reference_bdm1_basis(start + s[:, None] * tangent)
        flux = values @ normal
        for k, q in enumerate((1.0 - s, s)):
            moments[2 * i + k] = flux @ (q * w)

    assert moments == pytest.approx(np.eye(6), abs=1e-12)


def test_bdm_divergence_is_constant():
    points = np.array([[0.1, 0.1], [0.6, 0.2], [0.2, 0.7], [1 / 3, 1 / 3]])
    _, divergence = reference_bdm1_basis(points)

    assert np.ptp(divergence, axis=1) == pytest.approx(np.zeros(6), abs=1e-13)


def test_piola_identity_map_keeps_values():
    points = make_quadrature(3).cartesian
    values, divergence = reference_bdm1_basis(points)
    mapped, mapped_div = piola_map(np.eye(2)[None], values, divergence)

    assert mapped[0] == pytest.approx(values)
    assert mapped_div[0] == pytest.approx(divergence)


def test_piola_scaling_divides_divergence():
    scale = 3.0
    points = make_quadrature(3).cartesian
    values, divergence = reference_bdm1_basis(points)
    mapped, mapped_div = piola_map(scale * np.eye(2)[None], values, divergence)

    assert mapped[0] == pytest.approx(values / scale)
    assert mapped_div[0] == pytest.approx(divergence / scale ** 2)


def test_piola_rejects_degenerate_cell():
    values, divergence = reference_bdm1_basis(np.array([[0.2, 0.2]]))

    with pytest.raises(SpaceError):
        piola_map(np.zeros((1, 2, 2)), values, divergence)


def test_piola_preserves_edge_flux():
    vertices = np.array([[0.0, 0.0], [2.0, 0.5], [0.3, 1.5]])
    triangle = TriangleMesh(vertices, np.array([[0, 1, 2]]), Subdomain.FLUID)
    jacobian = triangle.jacobians
    s, w = _edge_rule()

    for i in range(3):
        start, end = reference_edge(i)
        ref_points = start + s[:, None] * (end - start)
        values, divergence = reference_bdm1_basis(ref_points)
        physical, _ = piola_map(jacobian, values, divergence)

        ref_tangent = end - start
        tangent = jacobian[0] @ ref_tangent
        ref_flux = values @ np.array([ref_tangent[1], -ref_tangent[0]]) @ w
        flux = physical[0] @ np.array([tangent[1], -tangent[0]]) @ w

        assert flux == pytest.approx(ref_flux, abs=1e-12)


def test_normal_trace_is_continuous(mesh, rng):
    space = bdm1_vector_space(mesh)
    coefficients = rng.standard_normal(space.n_dofs)
    interior = np.flatnonzero(~mesh.is_boundary_edge)

    for fraction in (0.2, 0.7):
        a = mesh.vertices[mesh.edges[interior, 0]]
        b = mesh.vertices[mesh.edges[interior, 1]]
        points = a + fraction * (b - a)
        tangent = b - a
        normal = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)

        sides = []
        for side in (0, 1):
            cells = mesh.edge_cells[interior, side]
            table = tabulate_at(space, cells, to_reference(mesh, cells, points))
            values = combine(table, coefficients).values
            sides.append(np.einsum('pa,pa->p', values, normal))

        assert sides[0] == pytest.approx(sides[1], abs=1e-12)


# Интерполяция

def test_constant_field_is_reproduced(mesh, rng):
    space = bdm1_vector_space(mesh)
    coefficients = interpolate(
        space, lambda points: np.broadcast_to([1.0, -2.0], points.shape)
    )
    values = evaluate(space, coefficients, rng.uniform(0.0, 0.5, (5, 2))).values

    assert values[..., 0] == pytest.approx(np.ones(values.shape[:2]))
    assert values[..., 1] == pytest.approx(-2.0 * np.ones(values.shape[:2]))


def test_divergence_of_identity_field(mesh):
    space = bdm1_vector_space(mesh)
    coefficients = interpolate(space, lambda points: points.copy())
    divergence = evaluate(
        space, coefficients, make_quadrature(4).cartesian
    ).divergence

    assert divergence == pytest.approx(2.0 * np.ones_like(divergence))


def test_commuting_divergence(mesh):
    space = bdm1_vector_space(mesh)

    def field(points):
        x, y = points[..., 0], points[..., 1]
        return np.stack([x ** 2, x * y], axis=-1)

    coefficients = interpolate(space, field)
    divergence = evaluate(
        space, coefficients, np.array([[1 / 3, 1 / 3]])
    ).divergence[:, 0]

    assert divergence == pytest.approx(3.0 * mesh.centroids[:, 0], abs=1e-12)


def test_bdm_divergence_lies_in_p0(mesh, rng):
    space = bdm1_vector_space(mesh)
    coefficients = rng.standard_normal(space.n_dofs)
    divergence = evaluate(
        space, coefficients, make_quadrature(4).cartesian
    ).divergence

    spread = divergence.max(axis=1) - divergence.min(axis=1)
    assert spread == pytest.approx(np.zeros(mesh.n_triangles), abs=1e-12)


def test_zero_field_interpolates_to_zero(mesh):
    for space in (
            bdm1_vector_space(mesh),
            bdm1_tensor_space(mesh),
            p0_space(mesh, SpaceKind.P0_SCALAR),
            p1_vector_space(mesh),
    ):
        shape = {
            SpaceKind.BDM1_TENSOR_ROWS: (2, 2),
            SpaceKind.P0_SCALAR: (),
        }.get(space.kind, (2,))
        coefficients = interpolate(
            space, lambda points: np.zeros(points.shape[:-1] + shape)
        )
        assert not coefficients.any()


def test_constant_tensor_is_reproduced(mesh):
    space = bdm1_tensor_space(mesh)
    tensor = np.array([[1.0, 2.0], [3.0, 4.0]])
    coefficients = interpolate(
        space, lambda points: np.broadcast_to(tensor, points.shape[:-1] + (2, 2))
    )
    field = evaluate(space, coefficients, make_quadrature(2).cartesian)

    assert field.values == pytest.approx(
        np.broadcast_to(tensor, field.values.shape)
    )
    assert field.divergence == pytest.approx(np.zeros_like(field.divergence), abs=1e-12)


def test_p1_vector_linear_field(mesh):
    space = p1_vector_space(mesh)
    gradient = np.array([[1.0, 2.0], [3.0, -1.0]])
    coefficients = interpolate(space, lambda points: points @ gradient.T)
    field = evaluate(space, coefficients, make_quadrature(2).cartesian)

    assert field.gradient == pytest.approx(
        np.broadcast_to(gradient, field.gradient.shape)
    )
    assert field.divergence == pytest.approx(np.zeros_like(field.divergence))


def test_p0_skew_keeps_one_component(mesh):
    space = p0_space(mesh, SpaceKind.P0_SKEW)

    def skew(points):
        x = points[..., 0]
        zero = np.zeros_like(x)
        return np.stack(
            [np.stack([zero, x], axis=-1), np.stack([-x, zero], axis=-1)],
            axis=-2,
        )

    coefficients = interpolate(space, skew)
    values = evaluate(space, coefficients, np.array([[0.2, 0.3]])).values

    assert coefficients == pytest.approx(mesh.centroids[:, 0])
    assert values[:, 0, 0, 1] == pytest.approx(mesh.centroids[:, 0])
    assert values[:, 0, 1, 0] == pytest.approx(-mesh.centroids[:, 0])


def test_p0_vector_cell_means(mesh):
    space = p0_space(mesh, SpaceKind.P0_VECTOR)
    coefficients = interpolate(space, lambda points: points.copy())

    assert coefficients.reshape(-1, 2) == pytest.approx(mesh.centroids)


def test_trace_gradient_is_arc_derivative():
    fluid, poro = coupled_meshes(2, 3)
    spaces = build_spaces(
        fluid, poro, extract_trace_mesh(fluid), extract_trace_mesh(poro)
    )
    space = spaces.lambda_
    coefficients = interpolate(space, lambda points: 2.0 * points[..., 0])
    segments = np.arange(space.trace.n_segments)
    table = tabulate_trace(space, segments, np.full(len(segments), 0.4))
    field = combine(table, coefficients)

    assert field.gradient == pytest.approx(2.0 * np.ones(len(segments)))
    assert field.values == pytest.approx(
        2.0 * (space.trace.breakpoints[:-1] + 0.4 * space.trace.lengths)
    )


def test_tabulate_rejects_trace_space():
    fluid, poro = coupled_meshes(2, 2)
    spaces = build_spaces(
        fluid, poro, extract_trace_mesh(fluid), extract_trace_mesh(poro)
    )

    with pytest.raises(SpaceError):
        tabulate(spaces.phi, np.array([[0.2, 0.2]]))
    with pytest.raises(SpaceError):
        tabulate_trace(spaces.u_p, np.array([0]), np.array([0.5]))


def test_build_spaces_sizes(level0_meshes):
    fluid, poro = level0_meshes
    spaces = build_spaces(
        fluid, poro, extract_trace_mesh(fluid), extract_trace_mesh(poro)
    )

    assert spaces.sizes() == (224, 120, 50, 64, 36, 32, 10, 4)
    assert spaces.by_field(Field.LAMBDA) is spaces.lambda_
    assert spaces.eta_p.constrained.sum() == 20


def test_build_spaces_rejects_swapped_meshes(level0_meshes):
    fluid, poro = level0_meshes

    with pytest.raises(SpaceError):
        build_spaces(
            poro, fluid, extract_trace_mesh(poro), extract_trace_mesh(fluid)
        )
