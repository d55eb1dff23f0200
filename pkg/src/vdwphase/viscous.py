"""Smooth periodic steady states with artificial viscosity.

In the stretched variable ``y = x / eps`` the steady problem on one period
``[-1/eps, 1/eps]`` is

    -v_yy = p(v) - sigma,    mean(v) = vbar,

with first integral ``v_y**2 / 2 = f(v) = W(v) + sigma v - lambda``. A
solution with ``2N`` transitions is an ``N``-fold tiling of one closed
orbit whose half-period and first moment satisfy

    eps N I0 = 1,    eps N I1 = vbar.

Newton runs in the rescaled height coordinates ``(k1, k2)`` of
:class:`HCoordinates` because the heights of ``lambda`` above the two well
bottoms are exponentially small in ``1/eps``.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from . import eos, maxwell
from .errors import (ConvergenceError, DomainError, InadmissibleError,
                     NoSolutionError, QuadratureError, VdwError)
from .orbit import OrbitFamily

DEFAULT_GRID = 4096
NEWTON_TOL = 1e-11
FD_STEP = 1e-6


@lru_cache(maxsize=64)
def _landscape(params):
    return maxwell.construct(params)


@lru_cache(maxsize=64)
def _family(params, landscape):
    return OrbitFamily(params, landscape)


def potential_W(params, vbar, v):
    """Double-well potential ``W(v) = -int_vbar^v p``, zero at ``vbar``."""
    eos._volume(params, vbar)
    return eos.free_potential(params, v) - eos.free_potential(params, vbar)


def double_well_H(params, vbar, V):
    """``H(V) = int_0^V (p(vbar) - p(s + vbar)) ds`` for a deviation ``V``."""
    V = np.asarray(V, dtype=float)
    eos._volume(params, V + vbar)
    eos._volume(params, vbar)
    a, b = params.a, params.b
    out = (eos.pressure(params, vbar) * V - a * (1.0 / (V + vbar) - 1.0 / vbar)
           - params.R * params.theta * np.log((V + vbar - b) / (vbar - b)))
    return float(out) if np.ndim(out) == 0 else out


# -- parameter records ---------------------------------------------------------

@dataclass(frozen=True)
class FirstIntegral:
    """Parameters and turning points of ``f(v) = W(v) + sigma v - lambda``.

    ``lam`` uses the potential ``W`` normalized at the mean volume.
    """

    sigma: float
    lam: float
    z1: float
    z2: float


@dataclass(frozen=True)
class HCoordinates:
    """Rescaled heights ``h_i = exp(mu_i k_i) exp(-c_i / eps)``.

    ``h1`` and ``h2`` may underflow to zero; ``log_h1`` and ``log_h2`` are
    always exact.
    """

    h1: float
    h2: float
    k1: float
    k2: float
    mu1: float
    mu2: float
    B1: float
    B2: float
    c1: float
    c2: float
    log_h1: float
    log_h2: float
    epsilon: float

    @staticmethod
    def constants(params, landscape, vbar):
        """``(B, mu, c)`` as length-2 arrays."""
        lam = landscape
        w0 = lam.beta0 - lam.alpha0
        d2 = np.array([-eos.pressure_derivatives(params, lam.alpha0, 1),
                       -eos.pressure_derivatives(params, lam.beta0, 1)])
        B = 1.0 / np.sqrt(2.0 * d2)
        mu = 1.0 / (B * w0)
        c = np.array([2.0 * (lam.beta0 - vbar), 2.0 * (vbar - lam.alpha0)]) / (B * w0)
        return B, mu, c

    @classmethod
    def from_k(cls, params, landscape, vbar, epsilon, k):
        B, mu, c = cls.constants(params, landscape, vbar)
        lh = mu * np.asarray(k, dtype=float) - c / epsilon
        return cls._make(B, mu, c, lh, k, epsilon)

    @classmethod
    def from_log_h(cls, params, landscape, vbar, epsilon, log_h):
        B, mu, c = cls.constants(params, landscape, vbar)
        lh = np.asarray(log_h, dtype=float)
        k = (lh + c / epsilon) / mu
        return cls._make(B, mu, c, lh, k, epsilon)

    @classmethod
    def _make(cls, B, mu, c, lh, k, epsilon):
        return cls(h1=math.exp(lh[0]), h2=math.exp(lh[1]), k1=float(k[0]), k2=float(k[1]),
                   mu1=float(mu[0]), mu2=float(mu[1]), B1=float(B[0]), B2=float(B[1]),
                   c1=float(c[0]), c2=float(c[1]), log_h1=float(lh[0]),
                   log_h2=float(lh[1]), epsilon=epsilon)

    @property
    def k(self):
        return np.array([self.k1, self.k2])

    @property
    def log_h(self):
        return np.array([self.log_h1, self.log_h2])


@dataclass
class ViscousSolution:
    """A sampled periodic steady state.

    ``y`` covers ``[-1/eps, 1/eps]`` with both endpoints included; ``x`` is
    ``eps * y``. ``vy`` is the slope from the first integral. ``orientation``
    is ``"valley"`` when a minimum sits at ``y = shift``.
    """

    epsilon: float
    first_integral: FirstIntegral
    n_transitions: int
    kind: str
    vbar: float
    orientation: str
    y: np.ndarray
    x: np.ndarray
    v: np.ndarray
    vy: np.ndarray
    residuals: dict
    hcoords: HCoordinates = None
    orbit: object = field(default=None, repr=False)

    @property
    def N(self):
        return self.n_transitions // 2

    @property
    def sigma(self):
        return self.first_integral.sigma

    @property
    def lam(self):
        return self.first_integral.lam

    def header(self):
        fi = self.first_integral
        out = {
            "epsilon": self.epsilon,
            "sigma": fi.sigma,
            "lambda": fi.lam,
            "z1": fi.z1,
            "z2": fi.z2,
            "N": self.N,
            "n_transitions": self.n_transitions,
            "kind": self.kind,
            "orientation": self.orientation,
            "vbar": self.vbar,
            "grid_size": int(self.y.size - 1),
            "residuals": dict(self.residuals),
        }
        if self.hcoords is not None:
            hc = self.hcoords
            out["log_h1"] = hc.log_h1
            out["log_h2"] = hc.log_h2
            out["k1"] = hc.k1
            out["k2"] = hc.k2
        return out


# -- first integral on explicit (sigma, lambda) ----------------------------------

def _phi_lambda(params, vbar, lam):
    # convert lambda from the W(vbar)=0 normalization to the free-potential one
    return lam + float(eos.free_potential(params, vbar))


def turning_points(params, vbar, sigma, lam, landscape=None):
    """Turning points ``z1 < z2`` of ``f = W + sigma v - lam``.

    Raises
    ------
    InadmissibleError
        If ``(sigma, lam)`` is outside the admissible domain; the message
        names the violated inequality and the active branch.
    """
    land = _landscape(params) if landscape is None else landscape
    if not land.band_lo < sigma < land.sigma_hi:
        raise InadmissibleError(
            f"sigma = {sigma!r} outside ({land.band_lo!r}, {land.sigma_hi!r})")
    orb = _family(params, land).orbit_at(sigma, _phi_lambda(params, vbar, lam))
    return orb.z1, orb.z2


def period_integrals(params, vbar, sigma, lam, landscape=None):
    """Half-period and first-moment integrals ``(I0, I1)`` of the orbit.

    ``I0 = (1/sqrt 2) int_z1^z2 ds / sqrt(f)`` and
    ``I1 = (1/sqrt 2) int_z1^z2 s ds / sqrt(f)``.

    Raises
    ------
    QuadratureError
        If the turning points nearly coincide or one of them is not a simple
        zero of ``f``; both situations make the heights computed from
        ``lam`` meaningless in double precision.
    """
    land = _landscape(params) if landscape is None else landscape
    if not land.band_lo < sigma < land.sigma_hi:
        raise InadmissibleError(
            f"sigma = {sigma!r} outside ({land.band_lo!r}, {land.sigma_hi!r})")
    orb = _family(params, land).orbit_at(sigma, _phi_lambda(params, vbar, lam))
    if orb.z2 - orb.z1 < 1e-10:
        raise QuadratureError("turning points within 1e-10 of each other")
    for side, z in ((0, orb.z1), (1, orb.z2)):
        slope = abs(sigma - eos.pressure(params, z))
        if slope < 1e-12:
            raise QuadratureError(f"turning point {z!r} is not a simple zero of f")
    return orb.I0, orb.I1


def triviality_threshold(params, landscape):
    """Viscosity ``eps* = sqrt(max_[alpha, beta] p') / pi`` above which only the
    constant state exists."""
    lam = landscape
    res = minimize_scalar(lambda v: -eos.pressure_derivatives(params, v, 1),
                          bounds=(lam.alpha, lam.beta), method="bounded",
                          options={"xatol": 1e-12})
    return math.sqrt(-res.fun) / math.pi


# -- Newton solve ------------------------------------------------------------

def _residual(family, vbar, eps, N, log_h):
    orb = family.orbit(float(log_h[0]), float(log_h[1]))
    r = np.array([eps * N * orb.I0 - 1.0, eps * N * orb.I1 - vbar])
    return r, orb


def asymptotic_log_h(params, landscape, vbar, epsilon):
    """Small-viscosity estimate of ``(log h1, log h2)``.

    A heteroclinic layer in the liquid well decays like ``exp(-y / (sqrt2 B1))``
    in ``y``, and the orbit spends a time ``l_i / eps`` near each plateau,
    which gives ``log h_i ~ -c_i / (sqrt(2) eps)``.
    """
    _, _, c = HCoordinates.constants(params, landscape, vbar)
    return -c / (math.sqrt(2.0) * epsilon)


def _newton(params, landscape, vbar, eps, N, log_h0, tol=NEWTON_TOL, maxiter=40):
    family = _family(params, landscape)
    hc = HCoordinates.from_log_h(params, landscape, vbar, eps, log_h0)
    B, mu, c = HCoordinates.constants(params, landscape, vbar)

    def to_log_h(k):
        return mu * k - c / eps

    k = hc.k
    try:
        r, orb = _residual(family, vbar, eps, N, to_log_h(k))
    except VdwError as exc:
        raise NoSolutionError(f"initial guess is not admissible: {exc}") from exc
    for _ in range(maxiter):
        nr = float(np.max(np.abs(r)))
        if nr < tol:
            return orb, k, r
        J = np.empty((2, 2))
        for j in range(2):
            kk = k.copy()
            kk[j] += FD_STEP
            try:
                J[:, j] = (_residual(family, vbar, eps, N, to_log_h(kk))[0] - r) / FD_STEP
            except VdwError:
                kk[j] -= 2 * FD_STEP
                J[:, j] = (r - _residual(family, vbar, eps, N, to_log_h(kk))[0]) / FD_STEP
        try:
            dk = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            break
        t = 1.0
        accepted = False
        while t > 1e-6:
            try:
                rn, on = _residual(family, vbar, eps, N, to_log_h(k + t * dk))
                if np.max(np.abs(rn)) < (1.0 - 1e-4 * t) * nr:
                    accepted = True
                    break
            except VdwError:
                pass
            t *= 0.5
        if not accepted:
            if nr < 100 * tol:
                return orb, k, r
            break
        k = k + t * dk
        r, orb = rn, on
    raise NoSolutionError(
        f"Newton iteration failed at eps = {eps!r}, N = {N}; "
        f"final residual max|r| = {float(np.max(np.abs(r)))!r}",
        residual=float(np.max(np.abs(r))))


def _predict(history, eps):
    """Warm start from previous rungs, extrapolating ``eps * log h`` in ``eps``."""
    if len(history) == 1:
        e0, lh0 = history[-1]
        return lh0 * e0 / eps
    (e1, l1), (e2, l2) = history[-2], history[-1]
    g1, g2 = e1 * l1, e2 * l2
    g = g2 + (g2 - g1) * (eps - e2) / (e2 - e1)
    return g / eps


def solve_orbit(params, landscape, vbar, epsilon, N=1, eps_start=None, ratio=0.8,
                log_h_guess=None):
    """Solve the period and mass conditions; returns ``(orbit, HCoordinates, residual)``.

    Strategy: Newton from ``log_h_guess`` (default: the small-viscosity
    estimate). When ``eps_start > epsilon`` is given, a geometric ladder
    from ``eps_start`` down to ``epsilon`` is walked first. If the direct
    attempt fails, rungs below ``epsilon`` (where the estimate is sharper)
    are solved and continued upward to ``epsilon``.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    if N < 1 or int(N) != N:
        raise DomainError("N must be a positive integer")
    lam = landscape
    if not lam.alpha0 < vbar < lam.beta0:
        raise NoSolutionError(
            f"vbar = {vbar!r} outside the Maxwell interval; only the constant state exists")
    # each of the N cells is a single-cell state at viscosity eps N
    thr = triviality_threshold(params, landscape)
    if epsilon * N >= thr:
        raise NoSolutionError(
            f"eps N = {epsilon * N!r} is not below eps* = {thr!r}; only the constant state exists",
            threshold=thr)

    def finish(orb, k, r):
        hc = HCoordinates.from_k(params, landscape, vbar, epsilon, k)
        return orb, hc, r

    if eps_start is not None and eps_start > epsilon:
        ladder = geometric_ladder(eps_start, epsilon, ratio)
        hist = []
        for e in ladder:
            guess = (asymptotic_log_h(params, landscape, vbar, e) if not hist
                     else _predict(hist, e))
            orb, k, r = _newton(params, landscape, vbar, e, N, guess)
            hist.append((e, np.array(orb.log_h)))
        return finish(orb, k, r)

    guess = (asymptotic_log_h(params, landscape, vbar, epsilon)
             if log_h_guess is None else np.asarray(log_h_guess, dtype=float))
    try:
        return finish(*_newton(params, landscape, vbar, epsilon, N, guess))
    except NoSolutionError as first:
        failure = first
    # continue upward from a smaller viscosity
    e = epsilon
    for _ in range(12):
        e *= ratio
        try:
            orb, k, r = _newton(params, landscape, vbar, e, N,
                                asymptotic_log_h(params, landscape, vbar, e))
        except NoSolutionError:
            continue
        hist = [(e, np.array(orb.log_h))]
        while e < epsilon:
            e_next = min(e / ratio, epsilon)
            step_ok = False
            for _ in range(6):
                try:
                    orb, k, r = _newton(params, landscape, vbar, e_next, N, _predict(hist, e_next))
                    step_ok = True
                    break
                except NoSolutionError:
                    e_next = e + 0.5 * (e_next - e)
            if not step_ok:
                raise failure
            hist.append((e_next, np.array(orb.log_h)))
            e = e_next
        return finish(orb, k, r)
    raise failure


def geometric_ladder(eps_start, eps_end, ratio):
    """Strictly decreasing ``eps_start * ratio**j`` down to ``eps_end`` (inclusive)."""
    if not (0 < ratio < 1):
        raise DomainError("ratio must lie in (0, 1)")
    if not (eps_start > 0 and eps_end > 0):
        raise DomainError("viscosities must be positive")
    out = [eps_start]
    while out[-1] * ratio > eps_end * (1.0 + 1e-12):
        out.append(out[-1] * ratio)
    if out[-1] > eps_end * (1.0 + 1e-12):
        out.append(eps_end)
    return out


# -- profiles ------------------------------------------------------------------

def _sample(orb, epsilon, N, orientation, grid_size, shift):
    L = 1.0 / epsilon
    y = np.linspace(-L, L, grid_size + 1)
    cell = 2.0 * L / N
    half = 0.5 * cell
    yc = np.mod(y - shift + L, cell) - half
    # the valley sits at yc = 0 of every cell
    t = np.abs(yc)
    if orientation == "peak":
        t = half - t
    t = t * (orb.I0 / half)
    v, speed = orb.branch(t)
    sgn = np.sign(yc)
    vy = speed * (sgn if orientation == "valley" else -sgn)
    return y, v, vy


def _profile_residuals(params, epsilon, sigma, y, v):
    dy = y[1] - y[0]
    vv = v[:-1]
    vp = np.roll(vv, -1)
    vm = np.roll(vv, 1)
    d2 = (vp - 2.0 * vv + vm) / dy**2
    ode = float(np.max(np.abs(-d2 - (eos.pressure(params, vv) - sigma))))
    mean = float(np.mean(vv))
    return ode, mean, float(abs(v[0] - v[-1]))


def _make_solution(params, landscape, vbar, epsilon, N, orb, hc, r, orientation,
                   grid_size, shift=0.0):
    if grid_size < 64:
        raise DomainError("grid_size must be at least 64")
    if orientation not in ("valley", "peak"):
        raise DomainError(f"orientation must be 'valley' or 'peak', got {orientation!r}")
    y, v, vy = _sample(orb, epsilon, N, orientation, grid_size, shift)
    lam = landscape.lambda0_for(params, vbar) + orb.dlevel
    fi = FirstIntegral(sigma=orb.sigma, lam=lam, z1=orb.z1, z2=orb.z2)
    ode, mean, per = _profile_residuals(params, epsilon, orb.sigma, y, v)
    res = {
        "period": float(r[0]),
        "mass": float(r[1]),
        "ode_max": ode,
        "mean_error": mean - vbar,
        "periodicity": per,
    }
    if N == 1:
        kind = "SingleValley" if orientation == "valley" else "SinglePeak"
    else:
        kind = "MultiInterface"
    return ViscousSolution(epsilon=epsilon, first_integral=fi, n_transitions=2 * N,
                           kind=kind, vbar=vbar, orientation=orientation, y=y,
                           x=epsilon * y, v=v, vy=vy, residuals=res, hcoords=hc, orbit=orb)


def _orientation(kind):
    k = str(kind).lower()
    if k in ("valley", "singlevalley", "single_valley"):
        return "valley"
    if k in ("peak", "singlepeak", "single_peak"):
        return "peak"
    raise DomainError(f"unknown profile kind {kind!r}")


def solve_two_interface(params, landscape, vbar, epsilon, kind="valley",
                        grid_size=DEFAULT_GRID, eps_start=None, ratio=0.8, shift=0.0,
                        log_h_guess=None):
    """Single-peak or single-valley steady state with two smooth interfaces.

    Raises
    ------
    NoSolutionError
        When Newton fails after continuation; carries the final residual and
        the triviality threshold.
    """
    return solve_2N(params, landscape, vbar, epsilon, 1, kind=kind, grid_size=grid_size,
                    eps_start=eps_start, ratio=ratio, shift=shift, log_h_guess=log_h_guess)


def solve_2N(params, landscape, vbar, epsilon, N, kind="valley", grid_size=DEFAULT_GRID,
             eps_start=None, ratio=0.8, shift=0.0, log_h_guess=None):
    """Steady state with ``2N`` transitions: an ``N``-fold tiled orbit."""
    orientation = _orientation(kind)
    try:
        orb, hc, r = solve_orbit(params, landscape, vbar, epsilon, N=N,
                                 eps_start=eps_start, ratio=ratio, log_h_guess=log_h_guess)
    except NoSolutionError as exc:
        exc.threshold = triviality_threshold(params, landscape)
        raise
    return _make_solution(params, landscape, vbar, epsilon, N, orb, hc, r, orientation,
                          grid_size, shift)


def reconstruct_profile(params, vbar, epsilon, fi, kind="valley", grid_size=DEFAULT_GRID,
                        N=1, landscape=None, shift=0.0):
    """Sample the orbit of a given :class:`FirstIntegral` on a uniform grid.

    The rising branch ``y(v) = int_z1^v ds / sqrt(2 f)`` is integrated
    piecewise and inverted; the falling branch is its mirror image.
    """
    land = _landscape(params) if landscape is None else landscape
    fam = _family(params, land)
    orb = fam.orbit_at(fi.sigma, _phi_lambda(params, vbar, fi.lam))
    r = np.array([epsilon * N * orb.I0 - 1.0, epsilon * N * orb.I1 - vbar])
    hc = HCoordinates.from_log_h(params, land, vbar, epsilon, orb.log_h)
    return _make_solution(params, land, vbar, epsilon, N, orb, hc, r, _orientation(kind),
                          grid_size, shift)


def constant_solution(params, vbar, epsilon, grid_size=DEFAULT_GRID):
    """The trivial steady state ``v = vbar`` with ``sigma = p(vbar)``."""
    sigma = float(eos.pressure(params, vbar))
    fi = FirstIntegral(sigma=sigma, lam=sigma * vbar, z1=vbar, z2=vbar)
    L = 1.0 / epsilon
    y = np.linspace(-L, L, grid_size + 1)
    v = np.full_like(y, vbar)
    ode, mean, per = _profile_residuals(params, epsilon, sigma, y, v)
    res = {"period": 0.0, "mass": 0.0, "ode_max": ode, "mean_error": mean - vbar,
           "periodicity": per}
    return ViscousSolution(epsilon=epsilon, first_integral=fi, n_transitions=0,
                           kind="Constant", vbar=vbar, orientation="none", y=y,
                           x=epsilon * y, v=v, vy=np.zeros_like(y), residuals=res)


def plateau_times(solution, width=None):
    """Times ``(T1, T2)`` per period spent within ``width`` (default ``eps``)
    of the turning points ``z1`` and ``z2``."""
    if solution.orbit is None:
        raise DomainError("solution carries no orbit")
    w = solution.epsilon if width is None else width
    orb = solution.orbit
    scale = 2.0 * solution.N
    return scale * orb.time_within(0, w), scale * orb.time_within(1, w)


def first_integral_defect(params, solution):
    """``max |v_y**2 / 2 - f(v)|`` with ``v_y`` from centered differences."""
    y, v = solution.y, solution.v[:-1]
    dy = y[1] - y[0]
    vy = (np.roll(v, -1) - np.roll(v, 1)) / (2.0 * dy)
    fi = solution.first_integral
    f = potential_W(params, solution.vbar, v) + fi.sigma * v - fi.lam
    return float(np.max(np.abs(0.5 * vy**2 - f)))


def poincare_ratio(coeffs_cos, coeffs_sin, n_grid=1024):
    """``||f|| / ||f_x||`` for a zero-mean trigonometric polynomial on ``[-1, 1]``.

    ``f(x) = sum_m a_m cos(m pi x) + b_m sin(m pi x)`` for ``m = 1, 2, ...``;
    both norms are evaluated by the periodic trapezoid rule, exact for
    polynomials of degree below ``n_grid / 2``.
    """
    a = np.asarray(coeffs_cos, dtype=float)
    b = np.asarray(coeffs_sin, dtype=float)
    m = np.arange(1, a.size + 1)
    x = -1.0 + 2.0 * np.arange(n_grid) / n_grid
    arg = np.pi * np.outer(m, x)
    f = a @ np.cos(arg) + b @ np.sin(arg)
    fx = (np.pi * m * b) @ np.cos(arg) - (np.pi * m * a) @ np.sin(arg)
    return math.sqrt(np.mean(f**2) / np.mean(fx**2))
