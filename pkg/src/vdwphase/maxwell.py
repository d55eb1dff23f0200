"""Maxwell equal-area construction and region classification."""

import enum
from dataclasses import dataclass

from . import eos
from ._roots import safe_newton
from .errors import ConvergenceError, DomainError, SupercriticalError

SNAP_TOL = 1e-10


class Region(enum.Enum):
    UNSTABLE = "Unstable"
    METASTABLE = "Metastable"
    STABLE = "Stable"


@dataclass(frozen=True)
class RegionLabel:
    tag: Region
    in_maxwell: bool


def area_residual(params, alpha, beta, sigma):
    """Signed area ``int_{a_s}^{b_s} (p - sigma) dv`` between the outer isobar roots.

    Uses the closed-form antiderivative of ``p``. Returns
    ``(area, a_s, b_s)``. The area decreases in ``sigma`` with slope
    ``-(b_s - a_s)``.
    """
    a_s = eos.liquid_root(params, alpha, sigma)
    b_s = eos.vapor_root(params, beta, sigma)
    phi = eos.free_potential
    area = phi(params, a_s) - phi(params, b_s) - sigma * (b_s - a_s)
    return area, a_s, b_s


def construct(params):
    """Build the full :class:`~vdwphase.eos.Landscape` for ``params``.

    The Maxwell pressure is the zero of the monotone equal-area residual,
    located by Newton steps safeguarded by bisection.
    """
    tc = eos.critical_temperature(params)
    if params.theta >= tc:
        eos._require_subcritical(params)
    if tc - params.theta < eos.NEAR_CRITICAL * tc:
        raise SupercriticalError(
            f"theta = {params.theta!r} is within {eos.NEAR_CRITICAL} of theta_c; "
            "coexistence volumes are not resolvable")
    alpha, beta = eos.spinodal_points(params)
    s_lo = eos.pressure(params, alpha)
    s_hi = eos.pressure(params, beta)
    delta = 1e-9 * (s_hi - s_lo)
    lo = max(s_lo, 0.0) + delta
    hi = s_hi - delta

    def resid(s):
        return area_residual(params, alpha, beta, s)[0]

    def dresid(s):
        _, a_s, b_s = area_residual(params, alpha, beta, s)
        return -(b_s - a_s)

    try:
        sigma0 = safe_newton(resid, dresid, lo, hi, xtol=1e-14)
    except ConvergenceError as exc:
        raise ConvergenceError(
            f"equal-area construction failed on ({lo!r}, {hi!r}): {exc}") from exc
    area, alpha0, beta0 = area_residual(params, alpha, beta, sigma0)
    if abs(area) > 1e-10:
        raise ConvergenceError(f"equal-area residual {area!r} after convergence")
    alpha_bar, beta_bar = eos.companion_points(params, alpha, beta)
    lambda0 = float(eos.free_potential(params, alpha0)) + sigma0 * alpha0
    return eos.Landscape(
        alpha=alpha, beta=beta, alpha0=alpha0, beta0=beta0,
        alpha_bar=alpha_bar, beta_bar=beta_bar,
        sigma_lo=s_lo, sigma_hi=s_hi, sigma0=sigma0, lambda0=lambda0)


def classify(landscape, v, b=None):
    """Region of the volume ``v``.

    Points within ``1e-10`` of ``alpha0``, ``alpha``, ``beta`` or ``beta0``
    are snapped onto that boundary before the half-open comparisons.
    ``b`` is the co-volume used for the domain check; when omitted only
    positivity is required.
    """
    lam = landscape
    floor = 0.0 if b is None else b
    if not v > floor:
        raise DomainError(f"volume {v!r} must exceed b")
    for edge in (lam.alpha0, lam.alpha, lam.beta, lam.beta0):
        if abs(v - edge) < SNAP_TOL:
            v = edge
            break
    if lam.alpha < v < lam.beta:
        tag = Region.UNSTABLE
    elif lam.alpha0 < v <= lam.alpha or lam.beta <= v < lam.beta0:
        tag = Region.METASTABLE
    else:
        tag = Region.STABLE
    return RegionLabel(tag=tag, in_maxwell=lam.alpha0 < v < lam.beta0)
