"""Viscosity sweeps toward the sharp-interface limit."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import sharp
from .energy import energy_E, energy_grid, excess_energy
from .errors import InsufficientDataError, NoSolutionError
from .viscous import (HCoordinates, _make_solution, _newton, _orientation, _predict, asymptotic_log_h,
                      geometric_ladder, plateau_times, solve_orbit)

PROBES = (-0.9, -0.5, 0.0, 0.5, 0.9)
BAND_FACTOR = 10.0


@dataclass
class SweepRow:
    epsilon: float
    sigma: float
    lam: float
    z1: float
    z2: float
    dz1: float
    dz2: float
    eT1: float
    eT2: float
    sup_distance: float
    energy: float
    energy_grid: float
    excess_energy: float
    probe_distance: dict
    residual: float

    def as_dict(self):
        d = {k: getattr(self, k) for k in (
            "epsilon", "sigma", "lam", "z1", "z2", "dz1", "dz2", "eT1", "eT2",
            "sup_distance", "energy", "energy_grid", "excess_energy", "residual")}
        d["probe_distance"] = {f"{x:g}": val for x, val in self.probe_distance.items()}
        return d


@dataclass
class SweepResult:
    vbar: float
    kind: str
    l1: float
    l2: float
    eps_ladder: list
    rows: list = field(default_factory=list)
    truncated: bool = False
    message: str = ""

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows])


def aligned_sharp_profile(landscape, vbar, orientation):
    """Sharp profile whose central plateau is centred at ``x = 0``.

    The viscous profile has its extremum at ``y = 0``; the matching sharp
    plateau is ``alpha0`` for a valley and ``beta0`` for a peak.
    """
    l1, l2 = sharp.phase_lengths(landscape, vbar)
    if orientation == "valley":
        return sharp.build_profile(landscape, vbar, "SingleValley", 1.0 - 0.5 * l1)
    return sharp.build_profile(landscape, vbar, "SinglePeak", 1.0 - 0.5 * l2)


def interface_mask(x, breakpoints, epsilon, factor=BAND_FACTOR):
    """True where ``x`` is farther than ``factor * eps |ln eps| / 2`` from every jump."""
    half = 0.5 * factor * epsilon * abs(math.log(epsilon))
    keep = np.ones(np.shape(x), dtype=bool)
    for bp in breakpoints:
        keep &= np.abs(x - bp) > half
    return keep


def sharp_distance(solution, profile, factor=BAND_FACTOR):
    """Sup-distance to ``profile`` outside the interface bands, and the
    distances at the probe points (``nan`` inside a band)."""
    x, v = solution.x, solution.v
    keep = interface_mask(x, profile.breakpoints, solution.epsilon, factor)
    diff = np.abs(v - profile(x))
    sup = float(np.max(diff[keep])) if np.any(keep) else float("nan")
    probes = {}
    for xp in PROBES:
        j = int(np.argmin(np.abs(x - xp)))
        probes[xp] = float(diff[j]) if keep[j] else float("nan")
    return sup, probes


def _row(params, landscape, vbar, sol, profile):
    orb = sol.orbit
    T1, T2 = plateau_times(sol)
    sup, probes = sharp_distance(sol, profile)
    fi = sol.first_integral
    return SweepRow(
        epsilon=sol.epsilon, sigma=fi.sigma, lam=fi.lam, z1=fi.z1, z2=fi.z2,
        dz1=abs(orb.z1_offset(landscape.alpha0)), dz2=abs(orb.z2_offset(landscape.beta0)),
        eT1=sol.epsilon * T1, eT2=sol.epsilon * T2, sup_distance=sup,
        energy=energy_E(params, vbar, sol),
        energy_grid=energy_grid(params, vbar, sol),
        excess_energy=excess_energy(params, landscape, vbar, sol),
        probe_distance=probes,
        residual=max(abs(sol.residuals["period"]), abs(sol.residuals["mass"])))


def run_sweep(params, landscape, vbar, eps_start, eps_end, ratio=0.8, kind="valley",
              grid_size=2**15):
    """Continuation down a geometric viscosity ladder.

    Each rung is warm-started from the previous ones. When a rung fails the
    ladder is truncated with a warning and the rows solved so far are
    returned.
    """
    orientation = _orientation(kind)
    ladder = geometric_ladder(eps_start, eps_end, ratio)
    l1, l2 = sharp.phase_lengths(landscape, vbar)
    res = SweepResult(vbar=vbar, kind=orientation, l1=l1, l2=l2, eps_ladder=ladder)
    profile = aligned_sharp_profile(landscape, vbar, orientation)
    hist = []
    for eps in ladder:
        try:
            if not hist:
                orb, hc, r = solve_orbit(params, landscape, vbar, eps)
                k = hc.k
            else:
                orb, k, r = _newton(params, landscape, vbar, eps, 1, _predict(hist, eps))
        except NoSolutionError as exc:
            res.truncated = True
            res.message = f"continuation stopped at eps = {eps!r}: {exc}"
            warnings.warn(res.message, RuntimeWarning, stacklevel=2)
            break
        hc = HCoordinates.from_k(params, landscape, vbar, eps, k)
        sol = _make_solution(params, landscape, vbar, eps, 1, orb, hc, r, orientation,
                             grid_size)
        hist.append((eps, np.array(orb.log_h)))
        res.rows.append(_row(params, landscape, vbar, sol, profile))
    return res


def _affine_fit(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else float("nan")
    return float(coef[0]), float(coef[1]), r2


def fit_decay(result, min_rows=4):
    """Fit ``log |z_i - endpoint|`` against ``1/eps``.

    Returns ``(C1, C2, r2_1, r2_2)`` where ``C_i`` is minus the fitted
    slope, positive for exponential decay.

    Raises
    ------
    InsufficientDataError
        With fewer than ``min_rows`` rows or fewer than two distinct
        viscosities.
    """
    rows = result.rows
    if len(rows) < min_rows:
        raise InsufficientDataError(f"need at least {min_rows} rows, got {len(rows)}")
    inv = 1.0 / np.array([r.epsilon for r in rows])
    if np.unique(inv).size < 2:
        raise InsufficientDataError("viscosity ladder is degenerate")
    out = []
    for name in ("dz1", "dz2"):
        d = np.array([getattr(r, name) for r in rows])
        if np.any(d <= 0):
            raise InsufficientDataError(f"{name} vanishes on some rung; cannot take logs")
        slope, _, r2 = _affine_fit(inv, np.log(d))
        out.append((-slope, r2))
    return out[0][0], out[1][0], out[0][1], out[1][1]


def predicted_decay_rates(params, landscape, vbar):
    """Leading decay rates of ``|z1 - alpha0|`` and ``|z2 - beta0|`` in ``1/eps``.

    Both are set by the vapor-side height ``h2 ~ exp(-c2 / (sqrt2 eps))``:
    the pressure shift ``sigma - sigma0`` is of order ``h2`` (the liquid
    height is much smaller) and moves ``alpha_s`` by the same order, while
    the vapor turning point sits ``~ sqrt(h2)`` inside ``beta_s``. This
    holds when ``c2 <= c1``; otherwise the roles of the two sides swap.
    """
    _, _, c = HCoordinates.constants(params, landscape, vbar)
    rate = float(min(c[0], c[1]) / math.sqrt(2.0))
    if c[1] <= c[0]:
        return rate, 0.5 * rate
    return 0.5 * rate, rate
