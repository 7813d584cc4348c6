import numpy as np

from src.forms import ModelParams


def _xy(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    points = np.asarray(points, dtype=float)
    return points[..., 0], points[..., 1]


def _vector(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.broadcast_arrays(a, b)
    return np.stack([a, b], axis=-1)


def _tensor(a00, a01, a10, a11) -> np.ndarray:
    a00, a01, a10, a11 = np.broadcast_arrays(a00, a01, a10, a11)
    return np.stack(
        [np.stack([a00, a01], axis=-1), np.stack([a10, a11], axis=-1)],
        axis=-2,
    )


class Example1Solution:
    """
    Проверочное решение на Ω_f = (0,1)^2, Ω_p = (0,1)x(-1,0):

        u_f = π cos(πt) w,  eta_p = sin(πt) w,  w = (-3x + cos y, y + 1),
        p_p = e^t sin(πx) cos(πy/2),  p_f = p_p + 2π cos(πt),
        u_p = -(1/mu) K ∇p_p.

    Все функции векторизованы по точкам (..., 2).
    """

    def __init__(self, params: ModelParams = ModelParams()):
        self.params = params

    # временные множители: u_f = a(t) w, eta_p = b(t) w, b' = a
    @staticmethod
    def _a(t: float) -> float:
        return np.pi * np.cos(np.pi * t)

    @staticmethod
    def _a_dot(t: float) -> float:
        return -np.pi ** 2 * np.sin(np.pi * t)

    @staticmethod
    def _b(t: float) -> float:
        return np.sin(np.pi * t)

    @staticmethod
    def _w(points):
        x, y = _xy(points)
        return _vector(-3.0 * x + np.cos(y), y + 1.0)

    @staticmethod
    def _grad_w(points):
        x, y = _xy(points)
        zero = np.zeros_like(x)
        return _tensor(zero - 3.0, -np.sin(y), zero, zero + 1.0)

    @staticmethod
    def _strain_w(points):
        x, y = _xy(points)
        zero = np.zeros_like(x)
        return _tensor(zero - 3.0, -0.5 * np.sin(y), -0.5 * np.sin(y), zero + 1.0)

    @staticmethod
    def _div_strain_w(points):
        x, y = _xy(points)
        return _vector(-0.5 * np.cos(y), np.zeros_like(x))

    def u_f(self, t, points):
        return self._a(t) * self._w(points)

    def grad_u_f(self, t, points):
        return self._a(t) * self._grad_w(points)

    def p_p(self, t, points):
        x, y = _xy(points)
        return np.exp(t) * np.sin(np.pi * x) * np.cos(np.pi * y / 2.0)

    def grad_p_p(self, t, points):
        x, y = _xy(points)
        return np.exp(t) * _vector(
            np.pi * np.cos(np.pi * x) * np.cos(np.pi * y / 2.0),
            -0.5 * np.pi * np.sin(np.pi * x) * np.sin(np.pi * y / 2.0),
        )

    def hessian_p_p(self, t, points):
        x, y = _xy(points)
        pressure = self.p_p(t, points)
        mixed = (
                -0.5 * np.pi ** 2 * np.exp(t)
                * np.cos(np.pi * x) * np.sin(np.pi * y / 2.0)
        )
        return _tensor(
            -np.pi ** 2 * pressure, mixed, mixed, -0.25 * np.pi ** 2 * pressure
        )

    def p_f(self, t, points):
        return self.p_p(t, points) + 2.0 * np.pi * np.cos(np.pi * t)

    def u_p(self, t, points):
        return -np.einsum(
            'ij,...j->...i', self.params.permeability, self.grad_p_p(t, points)
        ) / self.params.mu

    def div_u_p(self, t, points):
        return -np.einsum(
            'ij,...ij->...', self.params.permeability, self.hessian_p_p(t, points)
        ) / self.params.mu

    def eta_p(self, t, points):
        return self._b(t) * self._w(points)

    def grad_eta_p(self, t, points):
        return self._b(t) * self._grad_w(points)

    def eta_rate(self, t, points):
        return self._a(t) * self._w(points)

    def fluid_stress(self, t, points):
        """
        T_f = -p_f I + 2 mu e(u_f).
        """

        strain = self._a(t) * self._strain_w(points)
        pressure = self.p_f(t, points)[..., None, None]
        return -pressure * np.eye(2) + 2.0 * self.params.mu * strain

    def sigma_f(self, t, points):
        """
        Псевдонапряжение T_f - rho_f u_f ⊗ u_f (без конвекции - T_f).
        """

        stress = self.fluid_stress(t, points)
        if not self.params.convection_on:
            return stress
        u = self.u_f(t, points)
        return stress - self.params.rho_f * np.einsum('...i,...j->...ij', u, u)

    def div_sigma_f(self, t, points):
        params = self.params
        divergence = (
                -self.grad_p_p(t, points)
                + 2.0 * params.mu * self._a(t) * self._div_strain_w(points)
        )
        if not params.convection_on:
            return divergence
        u = self.u_f(t, points)
        convection = (
                np.einsum('...ij,...j->...i', self.grad_u_f(t, points), u)
                + self.q_f(t, points)[..., None] * u
        )
        return divergence - params.rho_f * convection

    def gamma_f(self, t, points):
        """
        Завихренность (∇u_f - ∇u_f^T)/2 в виде кососимметричного тензора.
        """

        gradient = self.grad_u_f(t, points)
        return 0.5 * (gradient - np.swapaxes(gradient, -1, -2))

    def poro_stress(self, t, points):
        """
        Полное напряжение σ_p = λ_p div eta I + 2 mu_p e(eta) - alpha_p p_p I.
        """

        params = self.params
        b = self._b(t)
        divergence = -2.0 * b
        pressure = self.p_p(t, points)[..., None, None]
        elastic = (
                params.lambda_p * divergence * np.eye(2)
                + 2.0 * params.mu_p * b * self._strain_w(points)
        )
        return elastic - params.alpha_p * pressure * np.eye(2)

    def q_f(self, t, points):
        x, _ = _xy(points)
        return np.full_like(x, -2.0 * self._a(t))

    def f_f(self, t, points):
        params = self.params
        acceleration = self._a_dot(t) * self._w(points)
        if params.convection_on:
            u = self.u_f(t, points)
            acceleration = acceleration + np.einsum(
                '...ij,...j->...i', self.grad_u_f(t, points), u
            )
        return (
                params.rho_f * acceleration
                + self.grad_p_p(t, points)
                - 2.0 * params.mu * self._a(t) * self._div_strain_w(points)
        )

    def f_p(self, t, points):
        params = self.params
        # div eta постоянна по пространству, ∇(div eta) = 0
        return (
                params.rho_p * self._a_dot(t) * self._w(points)
                - 2.0 * params.mu_p * self._b(t) * self._div_strain_w(points)
                + params.alpha_p * self.grad_p_p(t, points)
        )

    def q_p(self, t, points):
        params = self.params
        return (
                params.s0 * self.p_p(t, points)
                - 2.0 * params.alpha_p * self._a(t)
                + self.div_u_p(t, points)
        )

    def __repr__(self):
        return f'<Example1Solution(params={self.params!r})>'
