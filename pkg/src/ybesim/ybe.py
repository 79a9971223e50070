"""Two-dimensional Yang-Baxter operators and the Lorentz-like parameter relation.

The equation checked throughout is

    A(theta1) B(theta2) A(theta3) == B(theta3) A(theta2) B(theta1)

with ``A(t) = diag(e^{-it}, e^{it})`` and ``B(t) = cos t I - i sin t X``.  It holds
exactly when ``tan theta2 = sin(theta1 + theta3) / cos(theta1 - theta3)``.

Spectral parameters enter only through the dimensionless product ``x = beta * u``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .linalg import I2, max_abs, mat_mul, tensor

POLE_ATOL = 1e-12
BACKSUB_ATOL = 1e-12


class SecantPoleError(ValueError):
    """``theta1 - theta3`` sits on the pole ``pi/2 mod pi`` of the constraint."""


class CompositionPoleError(ValueError):
    """``1 + x_u x_v`` vanishes, so the spectral composition is undefined."""


class AngleTriple(NamedTuple):
    """Operator angles in radians."""

    theta1: float
    theta2: float
    theta3: float

    @classmethod
    def from_degrees(cls, theta1: float, theta2: float, theta3: float) -> "AngleTriple":
        return cls(math.radians(theta1), math.radians(theta2), math.radians(theta3))

    def degrees(self) -> tuple[float, float, float]:
        return tuple(math.degrees(t) for t in self)


@dataclass(frozen=True)
class SpectralPoint:
    x: float
    epsilon: int = 1

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon!r}")
        if not math.isfinite(self.x):
            raise ValueError("spectral parameter must be finite")


@dataclass(frozen=True)
class SpectralMapResult:
    theta: float
    rho: complex


def wrap_pi(theta: float) -> float:
    """Reduce an angle into ``[0, pi)``."""
    w = math.fmod(theta, math.pi)
    if w < 0:
        w += math.pi
    if w >= math.pi:
        w -= math.pi
    return w


def angle_diff_mod_pi(a, b):
    """Distance between angles modulo pi, in ``[0, pi/2]``; works on arrays."""
    return np.abs(np.mod(np.asarray(a) - np.asarray(b) + np.pi / 2, np.pi) - np.pi / 2)


def op_A(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-1j * theta), 0], [0, np.exp(1j * theta)]], dtype=complex
    )


def op_B(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def as_triple(t: Sequence[float]) -> AngleTriple:
    if isinstance(t, AngleTriple):
        return t
    t1, t2, t3 = t
    return AngleTriple(float(t1), float(t2), float(t3))


def lhs(t: Sequence[float]) -> np.ndarray:
    """``A(theta1) B(theta2) A(theta3)``."""
    t = as_triple(t)
    return mat_mul(op_A(t.theta1), op_B(t.theta2), op_A(t.theta3))


def rhs(t: Sequence[float]) -> np.ndarray:
    """``B(theta3) A(theta2) B(theta1)``."""
    t = as_triple(t)
    return mat_mul(op_B(t.theta3), op_A(t.theta2), op_B(t.theta1))


def check_secant_pole(theta1: float, theta3: float) -> float:
    c = math.cos(theta1 - theta3)
    if abs(c) < POLE_ATOL:
        raise SecantPoleError(
            f"theta1 - theta3 = {math.degrees(theta1 - theta3):.6f} deg is on the secant pole"
        )
    return c


def theta2_star(theta1: float, theta3: float) -> float:
    """Middle angle that makes both sides equal, wrapped into ``[0, pi)``.

    Raises:
        SecantPoleError: if ``cos(theta1 - theta3)`` vanishes.
    """
    c = check_secant_pole(theta1, theta3)
    return wrap_pi(math.atan(math.sin(theta1 + theta3) / c))


def theta2_star_grid(theta1, theta3):
    """Vectorized ``theta2_star`` continued through the pole, where the limit is ``pi/2``.

    Only for grid bookkeeping; single-point callers should use ``theta2_star``.
    """
    t1 = np.asarray(theta1, dtype=float)
    return np.mod(np.arctan2(np.sin(t1 + theta3), np.cos(t1 - theta3)), np.pi)


def constraint_residual(t: Sequence[float]) -> complex:
    """``(e^{-2i theta2} + 1)(i - sec(theta1 - theta3) sin(theta1 + theta3)) - 2i``."""
    t = as_triple(t)
    c = check_secant_pole(t.theta1, t.theta3)
    return (np.exp(-2j * t.theta2) + 1) * (1j - math.sin(t.theta1 + t.theta3) / c) - 2j


def _spectral_ratio(x: float, epsilon: int) -> complex:
    # (1 + x^2 + 2i eps x) / (1 + x^2 - 2i eps x), scaled to stay finite for large |x|
    if abs(x) <= 1.0:
        num = complex(1 + x * x, 2 * epsilon * x)
    else:
        num = complex(1 / (x * x) + 1, 2 * epsilon / x)
    return num / num.conjugate()


def theta_from_spectral(p: SpectralPoint) -> SpectralMapResult:
    """Map a spectral point to the optical angle and the normalization ``rho = e^{i theta}``.

    ``theta = -arctan(2 eps x / (1 + x^2))``; the result is checked by substituting
    back into the defining ratio.
    """
    x, eps = p.x, p.epsilon
    frac = 2 * eps * x / (1 + x * x) if abs(x) <= 1.0 else 2 * eps / (x + 1 / x)
    theta = -math.atan(frac)
    gap = abs(_spectral_ratio(x, eps) - complex(np.exp(-2j * theta)))
    if gap > BACKSUB_ATOL:
        raise ArithmeticError(f"spectral back-substitution failed (residual {gap:.3e})")
    return SpectralMapResult(theta=theta, rho=complex(np.exp(1j * theta)))


def lorentz_compose(xu: float, xv: float) -> float:
    """Velocity-addition law ``(x_u + x_v) / (1 + x_u x_v)``."""
    den = 1 + xu * xv
    if abs(den) < POLE_ATOL:
        raise CompositionPoleError(f"1 + x_u x_v = {den!r} vanishes")
    return (xu + xv) / den


def spectral_triple(xu: float, xv: float, epsilon: int = 1) -> tuple[AngleTriple, float]:
    """Angle triple realizing spectral parameters ``(u, u23, v)`` and the composed ``x23``."""
    x23 = lorentz_compose(xu, xv)
    thetas = [theta_from_spectral(SpectralPoint(x, epsilon)).theta for x in (xu, x23, xv)]
    return AngleTriple(*thetas), x23


def braid_residual(b: np.ndarray) -> float:
    """Max-elementwise residual of ``b12 b23 b12 - b23 b12 b23``.

    ``b12 = b (x) I`` and ``b23 = I (x) b``; the identity factor has the local
    dimension (``sqrt(dim b)`` for a two-site operator, 2 for a one-site 2x2 operator).
    """
    b = np.asarray(b, dtype=complex)
    d = b.shape[0]
    n = math.isqrt(d)
    local = n if n * n == d and d > 2 else 2
    eye = np.eye(local, dtype=complex)
    b12, b23 = tensor(b, eye), tensor(eye, b)
    return max_abs(b12 @ b23 @ b12 - b23 @ b12 @ b23)


def pair_braid_residual(a: np.ndarray, b: np.ndarray) -> float:
    """``max|aba - bab|``, the braid relation for the reduced generator pair."""
    return max_abs(mat_mul(a, b, a) - mat_mul(b, a, b))


def braid_point_residual(theta: float) -> float:
    """Reduced braid residual with ``A = op_A(theta)``, ``B = op_B(theta)``."""
    return pair_braid_residual(op_A(theta), op_B(theta))


def tensor_lifted_braid_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Reduced braid residual with ``a``, ``b`` embedded on either factor of ``V (x) V``."""
    return max(
        pair_braid_residual(tensor(a, I2), tensor(b, I2)),
        pair_braid_residual(tensor(I2, a), tensor(I2, b)),
    )
