import numpy as np

from src.forms import Sources
from src.mms.exact import Example1Solution
from src.system import BoundaryData, InterfaceDefects, ProblemData


def manufactured_sources(exact: Example1Solution) -> Sources:
    """
    Правые части f_f, f_p, q_p и источник сжимаемости q_f = div u_f
    для проверочного решения.
    """

    return Sources(
        f_f=exact.f_f,
        f_p=exact.f_p,
        q_p=exact.q_p,
        q_f=exact.q_f,
    )


def boundary_data(exact: Example1Solution) -> BoundaryData:
    """
    Неоднородные граничные данные - следы точного решения.
    """

    return BoundaryData(
        u_f=exact.u_f,
        sigma_f=exact.sigma_f,
        u_p=exact.u_p,
        p_p=exact.p_p,
        eta_p=exact.eta_p,
    )


def _slip_traction(exact: Example1Solution, t, points, n_f) -> np.ndarray:
    params = exact.params
    tangent = np.stack([-n_f[..., 1], n_f[..., 0]], axis=-1)
    slip = np.einsum(
        '...i,...i->...',
        exact.u_f(t, points) - exact.eta_rate(t, points), tangent,
    )
    friction = (
            params.mu * params.alpha_bjs
            / np.sqrt(params.tangential_permeability(tangent.reshape(-1, 2)))
    ).reshape(slip.shape)
    return (friction * slip)[..., None] * tangent


def interface_defects(exact: Example1Solution) -> InterfaceDefects:
    """
    Невязки условий сопряжения у точного решения:
    g_gamma = u_f·n_f + (d_t eta + u_p)·n_p,
    g_f = T_f n_f + BJS + p_p n_f, g_p = σ_p n_p + p_p n_p - BJS.
    """

    def g_gamma(t, points, n_f):
        n_p = -n_f
        return (
                np.einsum('...i,...i->...', exact.u_f(t, points), n_f)
                + np.einsum(
                    '...i,...i->...',
                    exact.eta_rate(t, points) + exact.u_p(t, points), n_p,
                )
        )

    def g_f(t, points, n_f):
        traction = np.einsum('...ij,...j->...i', exact.fluid_stress(t, points), n_f)
        return (
                traction
                + _slip_traction(exact, t, points, n_f)
                + exact.p_p(t, points)[..., None] * n_f
        )

    def g_p(t, points, n_f):
        n_p = -n_f
        traction = np.einsum('...ij,...j->...i', exact.poro_stress(t, points), n_p)
        return (
                traction
                + exact.p_p(t, points)[..., None] * n_p
                - _slip_traction(exact, t, points, n_f)
        )

    return InterfaceDefects(g_gamma=g_gamma, g_f=g_f, g_p=g_p)


def problem_data(exact: Example1Solution) -> ProblemData:
    return ProblemData(
        sources=manufactured_sources(exact),
        boundary=boundary_data(exact),
        defects=interface_defects(exact),
    )
