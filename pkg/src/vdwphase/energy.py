"""Energies of steady states and their small-viscosity expansion.

For a steady state with parameters ``(sigma, lambda)`` and ``2N``
transitions the energy

    E = eps int (W(v) + v_y**2 / 2) dy

reduces, through the first integral, to

    E = 2 (-sigma vbar + lambda) + 2 sqrt(2) eps N int_z1^z2 sqrt(f) ds.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import eos
from ._quad import adaptive
from .errors import CrossCheckError, DomainError, MeanViolationError, NoSolutionError
from .orbit import Well
from .viscous import constant_solution, double_well_H, potential_W, solve_2N

CROSS_RTOL = 1e-6


@dataclass
class EnergyReport:
    """Energy of a solution next to its small-viscosity prediction.

    ``comparisons`` lists ``(label, energy)`` pairs, ``None`` for classes
    that could not be solved.
    """

    e_value: float
    leading: float
    slope_S: float
    residual: float
    epsilon: float
    comparisons: list = field(default_factory=list)

    def as_dict(self):
        return {
            "e_value": self.e_value,
            "leading": self.leading,
            "slope_S": self.slope_S,
            "residual": self.residual,
            "epsilon": self.epsilon,
            "comparisons": [[label, e] for label, e in self.comparisons],
        }


def _mean_check(values, what):
    m = float(np.mean(values))
    if abs(m) > 1e-8:
        raise MeanViolationError(f"{what} has mean {m!r}, expected zero")


def functional_G(params, vbar, V, epsilon):
    """``int_{-1}^{1} (H(V) + eps**2 V_x**2 / 2) dx`` on a periodic grid.

    ``V`` holds samples at ``x_j = -1 + 2j/n``, ``j = 0..n-1``. The
    derivative is a centered difference and the integral the periodic
    trapezoid rule.
    """
    V = np.asarray(V, dtype=float)
    _mean_check(V, "V")
    n = V.size
    dx = 2.0 / n
    Vx = (np.roll(V, -1) - np.roll(V, 1)) / (2.0 * dx)
    return float(dx * np.sum(double_well_H(params, vbar, V) + 0.5 * epsilon**2 * Vx**2))


def _spectral_derivative(v, period):
    n = v.size
    k = 2.0 * np.pi * np.fft.rfftfreq(n, d=period / n)
    vh = np.fft.rfft(v) * 1j * k
    if n % 2 == 0:
        vh[-1] = 0.0
    return np.fft.irfft(vh, n)


def energy_closed(params, vbar, solution):
    """Energy from the first-integral reduction."""
    if solution.kind == "Constant":
        return 2.0 * float(potential_W(params, vbar, vbar))
    fi = solution.first_integral
    orb = solution.orbit
    return (2.0 * (-fi.sigma * vbar + fi.lam)
            + 2.0 * math.sqrt(2.0) * solution.epsilon * solution.N * orb.root_integral)


def energy_grid(params, vbar, solution):
    """Energy by periodic trapezoid quadrature of the sampled profile.

    The slope is a spectral derivative of the samples, independent of the
    first integral.
    """
    eps = solution.epsilon
    v = solution.v[:-1]
    period = 2.0 / eps
    vy = _spectral_derivative(v, period)
    dy = period / v.size
    return float(eps * dy * np.sum(potential_W(params, vbar, v) + 0.5 * vy**2))


def energy_E(params, vbar, solution, rtol=CROSS_RTOL):
    """Energy of a steady state, cross-checked between two routes.

    Raises
    ------
    CrossCheckError
        If the closed form and the grid quadrature disagree by more than
        ``rtol`` relative.
    """
    closed = energy_closed(params, vbar, solution)
    grid = energy_grid(params, vbar, solution)
    scale = max(abs(closed), abs(grid))
    if abs(closed - grid) > rtol * scale and abs(closed - grid) > 1e-14:
        raise CrossCheckError(
            f"energy routes disagree: closed {closed!r}, grid {grid!r}")
    return closed


def leading_energy(params, landscape, vbar):
    """``2 (-sigma0 vbar + lambda0)`` with the potential normalized at ``vbar``."""
    return 2.0 * (-landscape.sigma0 * vbar + landscape.lambda0_for(params, vbar))


def excess_energy(params, landscape, vbar, solution):
    """``E - leading`` computed from parameter offsets, free of cancellation."""
    orb = solution.orbit
    return (2.0 * (-orb.dsigma * vbar + orb.dlevel)
            + 2.0 * math.sqrt(2.0) * solution.epsilon * solution.N * orb.root_integral)


def energy_gradient(params, vbar, solution):
    """``(dE/dsigma, dE/dlambda)``; both vanish on solutions of the period and
    mass conditions."""
    orb = solution.orbit
    eps, N = solution.epsilon, solution.N
    return -2.0 * vbar + 2.0 * eps * N * orb.I1, 2.0 - 2.0 * eps * N * orb.I0


def asymptotic_S(params, landscape, rtol=1e-12):
    """Slope ``S`` of the energy in ``eps`` at vanishing viscosity.

    ``S = 2 sqrt(2) int_{alpha0}^{beta0} sqrt(f0(s)) ds`` with
    ``f0 = W(s) - W(beta0) + sigma0 (s - beta0)``, the Maxwell-level
    first integral. ``f0`` has double zeros at both ends, and in the offset
    ``u`` from either end ``sqrt(f0) = u sqrt(Q(u))`` with ``Q`` smooth, so
    each half is a regular integral.
    """
    lam = landscape
    xi0 = eos._isobar_root(params, lam.sigma0, lam.alpha, lam.beta)
    total = 0.0
    for base, sgn, hill in ((lam.alpha0, 1, xi0 - lam.alpha0), (lam.beta0, -1, lam.beta0 - xi0)):
        well = Well(params, base, sgn, hill)
        pan = adaptive(lambda u, w=well: u * np.sqrt(w.Q(u)), [0.0, 0.5 * hill, hill], rtol=rtol)
        total += pan.totals[0]
    return 2.0 * math.sqrt(2.0) * total


def second_variation(params, vbar, solution, eta, eta_y=None):
    """``J = int (eta_y**2 + W''(v) eta**2) dy`` over one period.

    ``eta`` is sampled on the solution grid (endpoint included). Without
    ``eta_y`` the derivative is a periodic centered difference.
    """
    eta = np.asarray(eta, dtype=float)
    if eta.size != solution.y.size:
        raise DomainError("eta must be sampled on the solution grid")
    e = eta[:-1]
    _mean_check(e, "eta")
    dy = solution.y[1] - solution.y[0]
    if eta_y is None:
        ey = (np.roll(e, -1) - np.roll(e, 1)) / (2.0 * dy)
    else:
        ey = np.asarray(eta_y, dtype=float)[:-1]
    w2 = -eos.pressure_derivatives(params, solution.v[:-1], 1)
    return float(dy * np.sum(ey**2 + w2 * e**2))


def _bump(y, center, width, period):
    d = np.mod(y - center + 0.5 * period, period) - 0.5 * period
    inside = np.abs(d) < 0.5 * width
    arg = 2.0 * np.pi * d / width
    val = np.where(inside, 0.5 * (1.0 + np.cos(arg)), 0.0)
    der = np.where(inside, -0.5 * np.sin(arg) * 2.0 * np.pi / width, 0.0)
    return val, der


def splice_test_vector(params, solution, width_fraction=0.1):
    """Perturbation that lowers the energy of a multi-transition state.

    ``eta0`` equals ``v_y`` on the first cell ``[-1/eps, -1/eps + 2/(eps N)]``
    and vanishes elsewhere; ``eta1`` is a cosine bump of height one centred
    at ``-1/eps`` minus an equal bump at the cell midpoint, so it has zero
    mean and vanishes at the far end of the cell. Because ``v_y`` solves the
    linearized equation, ``J(eta0) = 0`` and the cross term is
    ``-v_yy(-1/eps)``, so

        J(eta0 + t eta1) = -2 t v_yy(-1/eps) + t**2 J(eta1).

    Returns ``(eta0, eta0_y, eta1, eta1_y, vyy_start)``.
    """
    if solution.N < 2:
        raise DomainError("the splice vector needs at least two cells")
    y = solution.y
    eps = solution.epsilon
    L = 1.0 / eps
    period = 2.0 * L
    cell = period / solution.N
    # half-open: eta0_y jumps at both cell ends, and counting one end in full
    # is the trapezoid weight of the two half jumps
    first = (y >= -L) & (y < -L + cell)
    vyy = solution.sigma - eos.pressure(params, solution.v)
    eta0 = np.where(first, solution.vy, 0.0)
    eta0_y = np.where(first, vyy, 0.0)
    width = width_fraction * period
    if width >= cell:
        raise DomainError("bump width must be smaller than one cell")
    b1, d1 = _bump(y, -L, width, period)
    b2, d2 = _bump(y, -L + 0.5 * cell, width, period)
    return eta0, eta0_y, b1 - b2, d1 - d2, float(vyy[0])


def energy_ordering(params, landscape, vbar, epsilon, maxN=2, grid_size=4096):
    """Energies of the constant state and of ``2N``-transition states, ``N <= maxN``.

    The report's ``e_value`` is the ``N = 1`` energy when it exists and the
    constant energy otherwise.
    """
    const = energy_E(params, vbar, constant_solution(params, vbar, epsilon, grid_size))
    comps = [("constant", const)]
    lead = leading_energy(params, landscape, vbar)
    S = asymptotic_S(params, landscape)
    e1 = None
    for N in range(1, maxN + 1):
        try:
            sol = solve_2N(params, landscape, vbar, epsilon, N, grid_size=grid_size)
        except NoSolutionError:
            comps.append((f"N={N}", None))
            continue
        e = energy_E(params, vbar, sol)
        comps.append((f"N={N}", e))
        if N == 1:
            e1 = e
    ev = const if e1 is None else e1
    return EnergyReport(e_value=ev, leading=lead, slope_S=S, residual=ev - lead - epsilon * S,
                        epsilon=epsilon, comparisons=comps)


def ordering_holds(report):
    """True iff the ``N = 1`` energy is strictly below every other entry."""
    vals = dict(report.comparisons)
    e1 = vals.get("N=1")
    if e1 is None:
        return False
    return all(e is None or e1 < e for label, e in report.comparisons if label != "N=1")
