import numpy as np
import pytest

from src.consts import Scenario
from src.forms import ModelParams
from src.mms import (
    NORMS, ErrorAccumulator, ErrorReport, Example1Solution, LevelErrors,
    convergence_rates, exact_initial_state, half_norm_surrogate,
    interface_defects, rate, step_errors,
)
from src.scenarios import default_config, example1_meshes, run_convergence
from src.scenarios.example1 import run_level
from src.system import Discretization
from src.utils.solver.exceptions import ConfigError


PARAMS = ModelParams(
    mu=0.7, rho_f=1.3, rho_p=0.9, lambda_p=2.0, mu_p=1.5, s0=0.6,
    K=(1.0, 0.2, 0.2, 0.5), alpha_p=0.8, alpha_bjs=0.9,
)

H = 1e-4


def _partial(f, points, axis, h=H):
    shift = np.zeros(2)
    shift[axis] = h
    return (f(points + shift) - f(points - shift)) / (2 * h)


def _time_derivative(f, t, h=H):
    return (f(t + h) - f(t - h)) / (2 * h)


def _divergence(f, points):
    """
    Дивергенция векторного (P, 2) или построчная тензорного (P, 2, 2) поля.
    """

    dx, dy = _partial(f, points, 0), _partial(f, points, 1)
    return dx[..., 0] + dy[..., 1]


@pytest.fixture
def samples(rng):
    t = rng.uniform(0.1, 0.9)
    fluid = rng.uniform(0.0, 1.0, size=(20, 2))
    poro = fluid - np.array([0.0, 1.0])
    return t, fluid, poro


@pytest.fixture(params=[True, False], ids=['navier', 'stokes'])
def exact(request):
    return Example1Solution(PARAMS._replace(convection_on=request.param))


# Правые части против конечных разностей

def test_fluid_source(exact, samples):
    t, points, _ = samples
    params = exact.params

    rate_u = _time_derivative(lambda s: exact.u_f(s, points), t)
    div_sigma = _divergence(lambda p: exact.sigma_f(t, p), points)
    expected = params.rho_f * rate_u - div_sigma
    if params.convection_on:
        expected -= params.rho_f * exact.q_f(t, points)[:, None] * exact.u_f(t, points)

    assert exact.f_f(t, points) == pytest.approx(expected, rel=1e-5, abs=1e-5)


def test_stress_divergence(exact, samples):
    t, points, _ = samples

    assert exact.div_sigma_f(t, points) == pytest.approx(
        _divergence(lambda p: exact.sigma_f(t, p), points), rel=1e-5, abs=1e-5
    )


def test_solid_source(exact, samples):
    t, _, points = samples
    params = exact.params
    h = 1e-3

    acceleration = (
            exact.eta_p(t + h, points) - 2.0 * exact.eta_p(t, points)
            + exact.eta_p(t - h, points)
    ) / h ** 2
    div_stress = _divergence(lambda p: exact.poro_stress(t, p), points)
    expected = params.rho_p * acceleration - div_stress

    assert exact.f_p(t, points) == pytest.approx(expected, rel=1e-4, abs=1e-4)


def test_storage_source(exact, samples):
    t, _, points = samples
    params = exact.params

    def div_eta(s):
        return _divergence(lambda p: exact.eta_p(s, p), points)

    expected = (
            params.s0 * _time_derivative(lambda s: exact.p_p(s, points), t)
            + params.alpha_p * _time_derivative(div_eta, t)
            + _divergence(lambda p: exact.u_p(t, p), points)
    )

    assert exact.q_p(t, points) == pytest.approx(expected, rel=1e-5, abs=1e-5)


def test_darcy_flux_divergence(exact, samples):
    t, _, points = samples

    assert exact.div_u_p(t, points) == pytest.approx(
        _divergence(lambda p: exact.u_p(t, p), points), rel=1e-5, abs=1e-5
    )


def test_gradients(exact, samples):
    t, fluid, poro = samples

    grad_u = np.stack([
        _partial(lambda p: exact.u_f(t, p), fluid, axis) for axis in (0, 1)
    ], axis=-1)
    grad_p = np.stack([
        _partial(lambda p: exact.p_p(t, p), poro, axis) for axis in (0, 1)
    ], axis=-1)
    grad_eta = np.stack([
        _partial(lambda p: exact.eta_p(t, p), poro, axis) for axis in (0, 1)
    ], axis=-1)

    assert exact.grad_u_f(t, fluid) == pytest.approx(grad_u, rel=1e-6, abs=1e-6)
    assert exact.grad_p_p(t, poro) == pytest.approx(grad_p, rel=1e-6, abs=1e-6)
    assert exact.grad_eta_p(t, poro) == pytest.approx(grad_eta, rel=1e-6, abs=1e-6)


def test_compressibility_source(samples):
    t, points, _ = samples
    exact = Example1Solution()

    assert exact.q_f(t, points) == pytest.approx(
        np.full(len(points), -2.0 * np.pi * np.cos(np.pi * t))
    )
    assert exact.q_f(t, points) == pytest.approx(
        _divergence(lambda p: exact.u_f(t, p), points), rel=1e-6
    )


def test_defects_vanish_for_unit_coefficients(rng):
    exact = Example1Solution()
    defects = interface_defects(exact)
    points = np.stack([rng.uniform(0, 1, 15), np.zeros(15)], axis=1)
    n_f = np.tile([0.0, -1.0], (15, 1))

    for t in (0.0, 0.37, 1.0):
        assert defects.g_gamma(t, points, n_f) == pytest.approx(
            np.zeros(15), abs=1e-12
        )
        assert defects.g_f(t, points, n_f) == pytest.approx(
            np.zeros((15, 2)), abs=1e-12
        )
        assert defects.g_p(t, points, n_f) == pytest.approx(
            np.zeros((15, 2)), abs=1e-12
        )


def test_defects_appear_for_general_coefficients(rng):
    defects = interface_defects(Example1Solution(PARAMS))
    points = np.stack([rng.uniform(0.1, 0.9, 5), np.zeros(5)], axis=1)
    n_f = np.tile([0.0, -1.0], (5, 1))

    assert np.abs(defects.g_f(0.3, points, n_f)).max() > 1e-3


# Порядки сходимости

def _level(level, h, value):
    errors = dict.fromkeys(NORMS, value)
    return LevelErrors(level, h, h, h, h, errors)


def test_rate():
    assert rate(1.0, 0.25, 0.2, 0.1) == pytest.approx(2.0)
    assert rate(1.0, 0.5, 0.4, 0.1) == pytest.approx(0.5)
    assert rate(0.0, 0.5, 0.2, 0.1) is None
    assert rate(1.0, 0.0, 0.2, 0.1) is None


@pytest.mark.parametrize('errors, sizes, expected', [
    ((0.7527, 0.2388), (0.3535, 0.1767), 1.655),
    ((0.0050, 0.0015), (0.5, 0.25), 1.737),
])
def test_rate_from_printed_errors(errors, sizes, expected):
    assert rate(*errors, *sizes) == pytest.approx(expected, abs=2e-3)


def test_rate_rejects_equal_sizes():
    with pytest.raises(ConfigError):
        rate(1.0, 0.5, 0.1, 0.1)


def test_convergence_rates():
    report = ErrorReport([
        _level(0, 0.4, 0.8), _level(1, 0.2, 0.4), _level(2, 0.1, 0.1),
    ])
    rates = convergence_rates(report)

    assert set(rates) == set(NORMS)
    for values in rates.values():
        assert values == pytest.approx([1.0, 2.0])


def test_convergence_rates_undefined_for_exact_field():
    first, second = _level(0, 0.2, 1.0), _level(1, 0.1, 0.5)
    second.errors['p_p'] = 0.0
    rates = convergence_rates(ErrorReport([first, second]))

    assert rates['p_p'] == [None]
    assert rates['u_f'] == pytest.approx([1.0])


def test_convergence_rates_need_two_levels():
    with pytest.raises(ConfigError):
        convergence_rates(ErrorReport([_level(0, 0.2, 1.0)]))


def test_half_norm_surrogate():
    assert half_norm_surrogate(4.0, 9.0) == pytest.approx(6.0)
    assert half_norm_surrogate(0.0, 3.0) == 0.0


@pytest.mark.parametrize('order_l2, order_h1', [(2.0, 1.0), (3.0, 2.0), (1.5, 0.5)])
def test_half_norm_surrogate_rate_is_mean(order_l2, order_h1):
    sizes = [0.4, 0.2, 0.1, 0.05]
    values = [
        half_norm_surrogate(0.3 * h ** order_l2, 2.5 * h ** order_h1)
        for h in sizes
    ]

    for i in range(len(sizes) - 1):
        assert rate(values[i], values[i + 1], sizes[i], sizes[i + 1]) == (
            pytest.approx(0.5 * (order_l2 + order_h1))
        )


# Накопление ошибок

@pytest.fixture(scope='module')
def interpolant(stokes_disc):
    exact = Example1Solution(stokes_disc.params)
    return exact, exact_initial_state(exact, stokes_disc, t0=0.3)


def _accumulated(disc, exact, state):
    accumulator = ErrorAccumulator(disc, exact)
    accumulator.add(state)
    return accumulator.result()


def test_accumulated_errors_obey_triangle_inequality(stokes_disc, interpolant, rng):
    exact, state = interpolant
    delta = rng.standard_normal(state.vector.shape)
    base = _accumulated(stokes_disc, exact, state)
    plus = _accumulated(stokes_disc, exact, state._replace(vector=state.vector + delta))
    minus = _accumulated(stokes_disc, exact, state._replace(vector=state.vector - delta))

    # phi и lambda - среднее геометрическое двух норм, не норма
    for field in set(NORMS) - {'phi', 'lambda'}:
        assert base[field] <= 0.5 * (plus[field] + minus[field]) * (1 + 1e-12), field


def test_accumulated_errors_grow_with_perturbation(stokes_disc, interpolant, rng):
    exact, state = interpolant
    delta = rng.standard_normal(state.vector.shape)
    errors = [
        _accumulated(stokes_disc, exact, state._replace(vector=state.vector + s * delta))
        for s in (1e2, 1e3, 1e4)
    ]

    for field in NORMS:
        values = [e[field] for e in errors]
        assert values[0] < values[1] < values[2], field
        assert values[2] / values[1] == pytest.approx(10.0, rel=1e-2), field


# Ошибки интерполянта

def test_interpolation_errors_decrease_with_refinement():
    exact = Example1Solution()
    errors = []
    for level in (0, 1):
        disc = Discretization(*example1_meshes(level), exact.params, dt=1e-3)
        state = exact_initial_state(exact, disc, t0=0.3)
        errors.append(step_errors(disc, state, exact))

    assert set(errors[0]) == set(NORMS)
    for field in NORMS:
        assert 0.0 < errors[1][field] < errors[0][field], field


def test_exact_initial_state_velocity():
    exact = Example1Solution()
    disc = Discretization(*example1_meshes(0), exact.params, dt=1e-3)
    state = exact_initial_state(exact, disc, t0=0.0)

    # eta(0) = 0, d_t eta(0) = π w
    assert not state.eta_p.any()
    vertices = disc.poro_mesh.vertices
    expected = exact.eta_rate(0.0, vertices).ravel()
    assert state.eta_rate(disc.dt) == pytest.approx(expected)


@pytest.mark.slow
def test_coarsest_level_matches_reference():
    cfg = default_config(Scenario.EXAMPLE1)
    exact = Example1Solution(cfg.params)
    errors, passed = run_level(cfg, 0, exact)

    assert passed
    assert errors.errors['u_f'] == pytest.approx(0.6321, rel=0.2)
    assert errors.iterations == pytest.approx(2.2, abs=1.0)


@pytest.mark.slow
def test_convergence_table(tmp_path):
    cfg = default_config(Scenario.EXAMPLE1)._replace(
        levels=3, dt=1e-4, t_final=1e-3, out=str(tmp_path), db='',
    )
    result = run_convergence(cfg)

    assert result.conservation_passed
    for field in ('sigma_f', 'u_f', 'gamma_f', 'p_f', 'p_p', 'u_p', 'eta_p'):
        assert result.rates[field][-1] == pytest.approx(1.0, abs=0.25), field
    for field in ('phi', 'lambda'):
        assert result.rates[field][-1] >= 1.3, field

