"""Linearized Fourier stability of constant states.

Perturbations ``exp(i n x + lambda t)`` of a constant density ``rho0``
evolve under the matrix

    A = [[-eps n**2,            i n rho0 ],
         [(i n / rho0) p_rho,   -n**2    ]],

with ``p_rho = dp/drho`` at ``rho0``. Its trace is ``-(eps + 1) n**2`` and
its determinant ``eps n**4 + p_rho n**2``, so mode ``n`` grows exactly when
the determinant is negative, i.e. ``0 < |n| < sqrt(-p_rho / eps)``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import eos
from .errors import CrossCheckError, DomainError


@dataclass
class ModeSpectrum:
    rho0: float
    eps_rho: float
    modes: list = field(default_factory=list)
    cutoff: float = 0.0

    @property
    def largest_unstable(self):
        """Largest tabulated wavenumber with positive growth, or 0."""
        unstable = [n for n, g in self.modes if g > 0]
        return max(unstable) if unstable else 0

    def as_dict(self):
        return {
            "rho0": self.rho0,
            "eps_rho": self.eps_rho,
            "cutoff": self.cutoff,
            "largest_unstable": self.largest_unstable,
            "n_max": max((n for n, _ in self.modes), default=0),
        }


def _check(params, rho0, eps_rho):
    if not (0.0 < rho0 < 1.0 / params.b):
        raise DomainError(f"rho0 = {rho0!r} must lie in (0, 1/b)")
    if not eps_rho > 0:
        raise DomainError("eps_rho must be positive")


def pressure_density_slope(params, rho0):
    """``dp/drho = -v**2 dp/dv`` at ``v = 1 / rho0``."""
    v = 1.0 / rho0
    return -v * v * eos.pressure_derivatives(params, v, 1)


def stability_matrix(params, rho0, eps_rho, n):
    """The complex 2x2 matrix governing mode ``n``."""
    _check(params, rho0, eps_rho)
    pr = pressure_density_slope(params, rho0)
    return np.array([[-eps_rho * n * n, 1j * n * rho0],
                     [1j * n / rho0 * pr, -float(n * n)]])


def growth_rate(params, rho0, eps_rho, n):
    """Largest real part of the eigenvalues of the mode-``n`` matrix."""
    _check(params, rho0, eps_rho)
    pr = pressure_density_slope(params, rho0)
    n2 = float(n) * float(n)
    tr = -(eps_rho + 1.0) * n2
    det = eps_rho * n2 * n2 + pr * n2
    disc = tr * tr - 4.0 * det
    if disc >= 0:
        return 0.5 * (tr + math.sqrt(disc))
    return 0.5 * tr


def cutoff_wavenumber(params, rho0, eps_rho):
    """``sqrt(-p_rho / eps)`` when ``p_rho < 0``, else 0."""
    _check(params, rho0, eps_rho)
    pr = pressure_density_slope(params, rho0)
    return math.sqrt(-pr / eps_rho) if pr < 0 else 0.0


def unstable_band(params, rho0, eps_rho, n_max):
    """Tabulate growth rates for ``0 <= n <= n_max`` next to the cutoff.

    Raises
    ------
    CrossCheckError
        If the sign of a growth rate disagrees with the determinant test.
    """
    pr = pressure_density_slope(params, rho0)
    modes = []
    for n in range(int(n_max) + 1):
        g = growth_rate(params, rho0, eps_rho, n)
        det = eps_rho * n**4 + pr * n**2
        if (g > 0) != (det < 0):
            raise CrossCheckError(f"growth sign disagrees with the determinant at n = {n}")
        modes.append((n, g))
    return ModeSpectrum(rho0=rho0, eps_rho=eps_rho, modes=modes,
                        cutoff=cutoff_wavenumber(params, rho0, eps_rho))
