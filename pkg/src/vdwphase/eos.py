"""Van der Waals equation of state and its subcritical pressure landscape.

Volumes are specific volumes ``v > b``. Every function accepts scalars or
numpy arrays for ``v`` and returns the same shape.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._roots import safe_newton
from .errors import DomainError, OutOfBandError, SupercriticalError

# Root tolerance on volumes and the relative width of the band around the
# critical temperature inside which the landscape is not resolved.
ROOT_XTOL = 1e-13
NEAR_CRITICAL = 1e-8


@dataclass(frozen=True)
class EosParams:
    """Van der Waals constants and a fixed temperature.

    The defaults are the reduced normalization with critical point
    ``(v_c, p_c, theta_c) = (1, 1, 1)``.
    """

    a: float = 3.0
    b: float = 1.0 / 3.0
    R: float = 8.0 / 3.0
    theta: float = 0.85

    def __post_init__(self):
        for name in ("a", "b", "R", "theta"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
                raise DomainError(f"{name} must be a positive finite number, got {val!r}")

    @property
    def theta_c(self):
        return critical_temperature(self)

    @property
    def subcritical(self):
        return self.theta < self.theta_c

    def with_theta(self, theta):
        return EosParams(self.a, self.b, self.R, theta)


@dataclass(frozen=True)
class Landscape:
    """Distinguished volumes and pressures of a subcritical isotherm.

    Attributes
    ----------
    alpha, beta : float
        Local minimum and local maximum of ``p`` (spinodal points).
    alpha0, beta0 : float
        Maxwell (coexistence) volumes.
    alpha_bar : float
        Volume on the liquid branch with ``p = sigma_hi``.
    beta_bar : float
        Volume on the vapor branch with ``p = sigma_lo``; ``inf`` when
        ``sigma_lo <= 0`` since ``p`` stays positive on the vapor branch.
    sigma_lo, sigma_hi : float
        ``p(alpha)`` and ``p(beta)``.
    sigma0 : float
        Maxwell pressure.
    lambda0 : float
        Maxwell level ``Phi(alpha0) + sigma0 * alpha0`` of the tilted
        potential, with ``Phi`` from :func:`free_potential`. The level for a
        potential normalized at ``vbar`` is ``lambda0 - Phi(vbar)``.
    """

    alpha: float
    beta: float
    alpha0: float
    beta0: float
    alpha_bar: float
    beta_bar: float
    sigma_lo: float
    sigma_hi: float
    sigma0: float
    lambda0: float

    @property
    def band_lo(self):
        """Lower end of the pressure band with three distinct isobar roots."""
        return max(self.sigma_lo, 0.0)

    def lambda0_for(self, params, vbar):
        """Maxwell level of ``W + sigma0 v`` with ``W`` normalized at ``vbar``."""
        return self.lambda0 - float(free_potential(params, vbar))

    def as_dict(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "alpha0": self.alpha0,
            "beta0": self.beta0,
            "alpha_bar": self.alpha_bar,
            "beta_bar": self.beta_bar,
            "sigma_lo": self.sigma_lo,
            "sigma_hi": self.sigma_hi,
            "sigma0": self.sigma0,
            "lambda0": self.lambda0,
        }


def _volume(params, v):
    arr = np.asarray(v, dtype=float)
    if np.any(~(arr > params.b)):
        raise DomainError(f"volume must exceed b = {params.b!r}")
    return arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def critical_temperature(params):
    """Critical temperature ``8a / (27 R b)``."""
    return 8.0 * params.a / (27.0 * params.R * params.b)


def pressure(params, v):
    """Pressure ``R theta / (v - b) - a / v**2``."""
    v = _volume(params, v)
    return _out(params.R * params.theta / (v - params.b) - params.a / v**2)


def pressure_derivatives(params, v, order):
    """Closed-form first or second derivative of the pressure in ``v``."""
    v = _volume(params, v)
    rt = params.R * params.theta
    if order == 1:
        return _out(-rt / (v - params.b) ** 2 + 2.0 * params.a / v**3)
    if order == 2:
        return _out(2.0 * rt / (v - params.b) ** 3 - 6.0 * params.a / v**4)
    raise DomainError(f"unsupported derivative order {order!r}")


def free_potential(params, v):
    """Antiderivative ``Phi(v) = -a/v - R theta ln(v - b)`` with ``Phi' = -p``."""
    v = _volume(params, v)
    return _out(-params.a / v - params.R * params.theta * np.log(v - params.b))


def secant_slope(params, c, r):
    """Return ``(p(c) - p(c + r)) / r`` without cancellation.

    Valid for ``r = 0`` as well, where it equals ``-p'(c)``. Both ``c`` and
    ``c + r`` must exceed ``b``.
    """
    c = np.asarray(c, dtype=float)
    r = np.asarray(r, dtype=float)
    d = c + r
    return _out(params.R * params.theta / ((c - params.b) * (d - params.b))
                - params.a * (2.0 * c + r) / (c**2 * d**2))


def _require_subcritical(params):
    tc = critical_temperature(params)
    if params.theta >= tc:
        raise SupercriticalError(
            f"theta = {params.theta!r} is not below the critical temperature {tc!r}; "
            "the isotherm has no phase transition (need 0 < theta < theta_c)")


def spinodal_points(params):
    """Local minimum ``alpha`` and local maximum ``beta`` of the pressure.

    Both lie on either side of ``3b``, where ``p'`` is positive below the
    critical temperature. Returns ``(alpha, beta)``.
    """
    _require_subcritical(params)
    b = params.b
    vc = 3.0 * b

    def dp(v):
        return pressure_derivatives(params, v, 1)

    def d2p(v):
        return pressure_derivatives(params, v, 2)

    if not dp(vc) > 0:
        raise SupercriticalError("spinodal roots are not resolvable this close to theta_c")
    lo = b * (1.0 + 1e-12)
    alpha = safe_newton(dp, d2p, lo, vc, xtol=ROOT_XTOL)
    hi = max(2.0 * params.a / (params.R * params.theta), vc) * 1.01
    beta = safe_newton(dp, d2p, vc, hi, xtol=ROOT_XTOL)
    return alpha, beta


def _isobar_root(params, sigma, lo, hi):
    return safe_newton(lambda v: pressure(params, v) - sigma,
                       lambda v: pressure_derivatives(params, v, 1),
                       lo, hi, xtol=ROOT_XTOL)


def liquid_root(params, alpha, sigma):
    """Root of ``p = sigma`` on the liquid branch ``(b, alpha)``."""
    return _isobar_root(params, sigma, params.b * (1.0 + 1e-12), alpha)


def vapor_root(params, beta, sigma):
    """Root of ``p = sigma`` on the vapor branch ``(beta, inf)``; ``sigma > 0``."""
    # p < R theta / (v - b) so p < sigma at v = b + R theta / sigma
    hi = max(params.b + params.R * params.theta / sigma, beta) * 1.01
    return _isobar_root(params, sigma, beta, hi)


def solve_isobar(params, landscape, sigma):
    """Three roots ``alpha_s < xi_s < beta_s`` of ``p(v) = sigma``.

    Raises
    ------
    OutOfBandError
        If ``sigma`` is not inside ``(max(sigma_lo, 0), sigma_hi)``. For
        ``sigma <= 0`` the vapor branch has no root.
    """
    lam = landscape
    if not (lam.band_lo < sigma < lam.sigma_hi):
        raise OutOfBandError(
            f"sigma = {sigma!r} outside the three-root band "
            f"({lam.band_lo!r}, {lam.sigma_hi!r})")
    a_s = liquid_root(params, lam.alpha, sigma)
    x_s = _isobar_root(params, sigma, lam.alpha, lam.beta)
    b_s = vapor_root(params, lam.beta, sigma)
    return a_s, x_s, b_s


def companion_points(params, alpha, beta):
    """Outer-branch volumes ``alpha_bar`` with ``p = p(beta)`` and
    ``beta_bar`` with ``p = p(alpha)``.

    ``beta_bar`` is ``inf`` when ``p(alpha) <= 0`` (low temperatures), since
    the vapor branch is positive and decreases to zero.
    """
    _require_subcritical(params)
    s_lo = pressure(params, alpha)
    s_hi = pressure(params, beta)
    alpha_bar = liquid_root(params, alpha, s_hi)
    beta_bar = vapor_root(params, beta, s_lo) if s_lo > 0 else math.inf
    return alpha_bar, beta_bar
