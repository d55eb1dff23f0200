"""Closed orbits of the first integral ``v_y**2 / 2 = W(v) + sigma v - lambda``.

The orbit between the turning points ``z1 < z2`` is split at the hilltop
``xi`` of ``W + sigma v`` into two wells. In each well, ``u`` is the
distance from the well bottom (``alpha_s`` on the liquid side, ``beta_s``
on the vapor side) and the level above the bottom is

    g(u) = int_0^u t K(t) dt,    K(t) = (p(c) - p(c + sgn t)) / (sgn t),

so the turning point offset ``u0`` solves ``g(u0) = h`` with ``h`` the
height of ``lambda`` above the bottom level. The substitution
``u = u0 cosh(tau)`` removes the inverse square root at the turning point
and stays well conditioned when ``h`` is exponentially small, which is the
regime of small viscosity. Heights enter only through ``log h``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre

from . import eos
from ._quad import adaptive, gauss_legendre, gauss_legendre_unit, legendre_coefficients
from ._roots import safe_newton
from .errors import ConvergenceError, InadmissibleError, QuadratureError

INNER_NODES = 24
PANEL_ORDER = 16
QUAD_RTOL = 1e-12
LN2 = math.log(2.0)


def log_cosh(t):
    t = np.abs(t)
    return t + np.log1p(np.exp(-2.0 * t)) - LN2


class Well:
    """One half of the orbit, parametrized by the offset from the well bottom.

    Parameters
    ----------
    params : EosParams
    base : float
        Well bottom, ``alpha_s`` or ``beta_s``.
    sgn : int
        ``+1`` when the orbit lies to the right of ``base`` (liquid well),
        ``-1`` otherwise (vapor well).
    hill : float
        Offset of the hilltop ``xi`` from ``base``.
    """

    def __init__(self, params, base, sgn, hill):
        self.params = params
        self.base = base
        self.sgn = sgn
        self.hill = hill
        t, w = gauss_legendre_unit(INNER_NODES)
        self._t = t
        self._w = w

    def K(self, u):
        return eos.secant_slope(self.params, self.base, self.sgn * np.asarray(u, dtype=float))

    def Q(self, u):
        """``g(u) / u**2``, smooth down to ``u = 0``."""
        u = np.asarray(u, dtype=float)
        k = self.K(u[..., None] * self._t)
        return (k * self._t) @ self._w

    def log_level(self, log_u):
        return 2.0 * log_u + math.log(float(self.Q(math.exp(log_u))))

    def log_hill_height(self):
        return self.log_level(math.log(self.hill))

    def log_offset(self, log_h):
        """Solve ``g(u0) = h`` for ``log u0`` given ``log h``."""
        hi = math.log(self.hill)
        if not log_h < self.log_level(hi):
            raise InadmissibleError("level is above the hilltop")

        def fun(lu):
            return self.log_level(lu) - log_h

        def dfun(lu):
            u = math.exp(lu)
            return float(self.K(u) / self.Q(u))

        lo = 0.5 * (log_h - math.log(float(self.Q(0.0)))) - 1.0
        for _ in range(60):
            if fun(lo) < 0:
                break
            lo -= 2.0
        else:
            raise ConvergenceError("could not bracket the turning point offset")
        return safe_newton(fun, dfun, lo, hi, xtol=1e-14)

    def integrand(self, log_u0, tau):
        """Integrands in ``tau`` for one well.

        Returns rows ``ds / sqrt(f)``, ``s ds / sqrt(f)``, ``sqrt(f) ds``
        and the value of ``s``.
        """
        lc = log_cosh(tau)
        u = np.exp(log_u0 + lc)
        rho = np.exp(-lc)
        t = self._t
        mix = (1.0 - t) * rho[:, None] + t
        kk = self.K(u[:, None] * mix)
        F = ((mix * kk) @ self._w) / (rho + 1.0)
        if np.any(F <= 0):
            raise QuadratureError("first integral is not positive inside the orbit")
        root = np.sqrt(F)
        g = 1.0 / root
        s = self.base + self.sgn * u
        sq = (u * np.tanh(tau)) ** 2 * root
        return np.vstack([g, s * g, sq, s])

    def tau_max(self, log_u0):
        lm = math.log(self.hill) - log_u0
        if lm <= 0:
            return 0.0
        return lm + math.log1p(math.sqrt(-math.expm1(-2.0 * lm)))


def _breaks(tm):
    pts = {0.0, tm}
    k = 0.25
    while k < 0.5 * tm:
        pts.add(k)
        pts.add(tm - k)
        k *= 2.0
    return np.array(sorted(pts))


@dataclass
class Orbit:
    """A closed orbit with both half-wells integrated.

    ``I0`` and ``I1`` are the half-period and first-moment integrals
    ``(1/sqrt 2) int ds / sqrt(f)`` and ``(1/sqrt 2) int s ds / sqrt(f)``
    over ``[z1, z2]``; ``root_integral`` is ``int sqrt(f) ds``. ``dlevel``
    is ``lambda - lambda0`` computed without cancellation.
    """

    params: object
    sigma: float
    dsigma: float
    alpha_s: float
    xi_s: float
    beta_s: float
    dalpha: float
    dbeta: float
    log_h: tuple
    log_u0: tuple
    wells: tuple
    panels: tuple
    dlevel: float = 0.0
    I0: float = field(init=False)
    I1: float = field(init=False)
    root_integral: float = field(init=False)

    def __post_init__(self):
        tl = self.panels[0].totals
        tr = self.panels[1].totals
        self.I0 = (tl[0] + tr[0]) / math.sqrt(2.0)
        self.I1 = (tl[1] + tr[1]) / math.sqrt(2.0)
        self.root_integral = tl[2] + tr[2]

    @property
    def u0(self):
        return tuple(math.exp(x) for x in self.log_u0)

    @property
    def z1(self):
        return self.alpha_s + math.exp(self.log_u0[0])

    @property
    def z2(self):
        return self.beta_s - math.exp(self.log_u0[1])

    def z1_offset(self, alpha0):
        """``z1 - alpha0`` without cancellation."""
        return self.dalpha + math.exp(self.log_u0[0])

    def z2_offset(self, beta0):
        """``beta0 - z2`` without cancellation."""
        return math.exp(self.log_u0[1]) - self.dbeta

    def half_times(self):
        """Time ``y`` spent in each half-well over half a period."""
        tl = self.panels[0].totals[0]
        tr = self.panels[1].totals[0]
        return tl / math.sqrt(2.0), tr / math.sqrt(2.0)

    def time_within(self, side, width):
        """Time over half a period with ``|s - z_side| < width``; ``side`` is 0 or 1."""
        well = self.wells[side]
        lu0 = self.log_u0[side]
        u0 = math.exp(lu0)
        target = u0 + width
        if target >= well.hill:
            tl, tr = self.half_times()
            return (tl, tr)[side] + self._time_other(side, width)
        lr = math.log(target) - lu0
        tau = lr + math.log1p(math.sqrt(-math.expm1(-2.0 * lr)))
        return self._cumulative(side, np.array([tau]))[0]

    def _time_other(self, side, width):
        # portion of the opposite well within ``width`` of this turning point
        other = 1 - side
        z = (self.z1, self.z2)[side]
        well = self.wells[other]
        lim = abs(z + (width if side == 0 else -width) - well.base)
        lu0 = self.log_u0[other]
        if lim >= well.hill:
            return 0.0
        tl, tr = self.half_times()
        total = (tl, tr)[other]
        if lim <= math.exp(lu0):
            return total
        lr = math.log(lim) - lu0
        tau = lr + math.log1p(math.sqrt(-math.expm1(-2.0 * lr)))
        return total - self._cumulative(other, np.array([tau]))[0]

    def _coeffs(self, side):
        cache = self.__dict__.setdefault("_coef_cache", {})
        if side not in cache:
            pan = self.panels[side]
            c = legendre_coefficients(pan.values[0], pan.order) / math.sqrt(2.0)
            anti = np.array([legendre.legint(ci, lbnd=-1) for ci in c])
            half = 0.5 * (pan.b - pan.a)
            anti = anti * half[:, None]
            edge = np.concatenate([[0.0], np.cumsum(legendre.legval(1.0, anti.T))])
            cache[side] = (anti, edge)
        return cache[side]

    def _cumulative(self, side, tau):
        """Time from the turning point to parameter ``tau`` in one well."""
        pan = self.panels[side]
        anti, edge = self._coeffs(side)
        idx = np.clip(np.searchsorted(pan.b, tau), 0, pan.a.size - 1)
        xloc = (2.0 * tau - pan.a[idx] - pan.b[idx]) / (pan.b[idx] - pan.a[idx])
        return edge[idx] + legendre.legval(xloc, anti[idx].T, tensor=False)

    def invert_time(self, side, y):
        """Parameter ``tau`` reached after time ``y`` from the turning point."""
        pan = self.panels[side]
        anti, edge = self._coeffs(side)
        y = np.asarray(y, dtype=float)
        idx = np.clip(np.searchsorted(edge, y, side="right") - 1, 0, pan.a.size - 1)
        target = y - edge[idx]
        c = anti[idx]
        dc = np.array([legendre.legder(ci) for ci in anti])[idx]
        lo = np.full(y.shape, -1.0)
        hi = np.full(y.shape, 1.0)
        x = np.zeros(y.shape)
        for _ in range(100):
            val = legendre.legval(x, c.T, tensor=False) - target
            lo = np.where(val < 0, x, lo)
            hi = np.where(val >= 0, x, hi)
            d = legendre.legval(x, dc.T, tensor=False)
            xn = x - val / np.where(d > 0, d, 1.0)
            bad = (d <= 0) | (xn <= lo) | (xn >= hi)
            xn = np.where(bad, 0.5 * (lo + hi), xn)
            if np.max(np.abs(xn - x)) < 1e-15:
                x = xn
                break
            x = xn
        return pan.a[idx] + 0.5 * (x + 1.0) * (pan.b[idx] - pan.a[idx])

    def state_at(self, side, tau):
        """Volume and ``|v_y|`` at parameter ``tau`` of one well."""
        well = self.wells[side]
        vals = well.integrand(self.log_u0[side], np.atleast_1d(tau))
        s = vals[3]
        # sqrt(2 f) = sqrt(2) * u0 sinh(tau) * sqrt(F) with sqrt(F) = 1 / g
        lc = log_cosh(tau)
        u = np.exp(self.log_u0[side] + lc)
        vy = math.sqrt(2.0) * u * np.tanh(tau) / vals[0]
        return s, vy

    def branch(self, t):
        """Rising branch from ``z1`` at ``t = 0`` to ``z2`` at ``t = I0``.

        Returns ``(v, v_y)`` for times ``t`` in ``[0, I0]``.
        """
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.I0)
        tl, tr = self.half_times()
        v = np.empty_like(t)
        vy = np.empty_like(t)
        left = t <= tl
        if np.any(left):
            tau = self.invert_time(0, t[left])
            v[left], vy[left] = self.state_at(0, tau)
        right = ~left
        if np.any(right):
            rem = np.clip(self.I0 - t[right], 0.0, tr)
            tau = self.invert_time(1, rem)
            v[right], vy[right] = self.state_at(1, tau)
        return v, vy


class OrbitFamily:
    """Orbits of a fixed isotherm parametrized by ``(log h1, log h2)``.

    Heights are measured from the bottoms of the liquid and vapor wells of
    ``W + sigma v``. Their difference fixes ``sigma`` through the signed
    equal-area residual ``A(sigma) = h2 - h1``.
    """

    def __init__(self, params, landscape, rtol=QUAD_RTOL):
        self.params = params
        self.land = landscape
        self.rtol = rtol
        lam = landscape
        self._w0 = lam.beta0 - lam.alpha0
        self._small = 1e-3 * self._w0 * (lam.sigma_hi - lam.band_lo)

    # -- pressure level from the height difference --------------------------

    def _width(self, dsig):
        s = self.land.sigma0 + dsig
        a = eos.liquid_root(self.params, self.land.alpha, s)
        b = eos.vapor_root(self.params, self.land.beta, s)
        return a, b

    def _area_small(self, d):
        """``A(sigma0 + d)`` as ``-int_0^d (beta_t - alpha_t) dt`` and offsets."""
        x, w = gauss_legendre(8)
        t = 0.5 * d * (x + 1.0)
        wa = np.empty(8)
        ia = np.empty(8)
        ib = np.empty(8)
        for j, tj in enumerate(t):
            a, b = self._width(tj)
            wa[j] = b - a
            ia[j] = 1.0 / eos.pressure_derivatives(self.params, a, 1)
            ib[j] = 1.0 / eos.pressure_derivatives(self.params, b, 1)
        h = 0.5 * d
        return -h * (w @ wa), h * (w @ ia), h * (w @ ib)

    def pressure_level(self, target):
        """Solve ``A(sigma) = target``.

        Returns ``(sigma, dsigma, alpha_s, beta_s, alpha_s - alpha0,
        beta_s - beta0)`` with offsets free of cancellation.
        """
        lam = self.land
        p = self.params
        if abs(target) < self._small:
            def fun(d):
                return self._area_small(d)[0] - target

            def dfun(d):
                a, b = self._width(d)
                return -(b - a)

            d = -target / self._w0
            for _ in range(50):
                val = fun(d)
                step = val / dfun(d)
                d -= step
                if abs(step) <= 1e-15 * abs(d) or d == 0.0:
                    break
            else:
                raise ConvergenceError("pressure level iteration did not converge")
            _, da, db = self._area_small(d)
            sig = lam.sigma0 + d
            return sig, d, lam.alpha0 + da, lam.beta0 + db, da, db
        from .maxwell import area_residual

        span = lam.sigma_hi - lam.band_lo
        lo = lam.band_lo + 1e-12 * span
        hi = lam.sigma_hi - 1e-12 * span

        def fun(s):
            return area_residual(p, lam.alpha, lam.beta, s)[0] - target

        def dfun(s):
            _, a, b = area_residual(p, lam.alpha, lam.beta, s)
            return -(b - a)

        try:
            sig = safe_newton(fun, dfun, lo, hi, xtol=1e-15)
        except ConvergenceError as exc:
            raise InadmissibleError(
                f"height difference {target!r} is outside the attainable range") from exc
        _, a, b = area_residual(p, lam.alpha, lam.beta, sig)
        return sig, sig - lam.sigma0, a, b, a - lam.alpha0, b - lam.beta0

    # -- orbit construction --------------------------------------------------

    def orbit(self, log_h1, log_h2, rtol=None):
        """Build and integrate the orbit with heights ``exp(log_h1)``, ``exp(log_h2)``."""
        if max(log_h1, log_h2) > 50.0:
            raise InadmissibleError("level is far above the hilltop")
        target = math.exp(log_h2) - math.exp(log_h1)
        level = self.pressure_level(target)
        return self._build(level, log_h1, log_h2, rtol)

    def orbit_at(self, sigma, lam, rtol=None):
        """Orbit for an explicit pair ``(sigma, lam)``, with ``lam`` measured in
        the normalization of :func:`~vdwphase.eos.free_potential`.

        Heights are formed by direct subtraction, so this entry point is
        meant for moderate heights only.
        """
        lam_ = self.land
        a_s, _, b_s = eos.solve_isobar(self.params, lam_, sigma)
        phi = eos.free_potential
        h1 = lam - (phi(self.params, a_s) + sigma * a_s)
        h2 = lam - (phi(self.params, b_s) + sigma * b_s)
        branch = "sigma > sigma0" if sigma > lam_.sigma0 else "sigma <= sigma0"
        if h1 <= 0 or h2 <= 0:
            which = "liquid" if h1 <= 0 else "vapor"
            raise InadmissibleError(
                f"lambda is not above the {which}-well level of W + sigma v "
                f"(active branch: {branch}; h1 = {h1!r}, h2 = {h2!r})")
        level = (sigma, sigma - lam_.sigma0, a_s, b_s, a_s - lam_.alpha0, b_s - lam_.beta0)
        try:
            return self._build(level, math.log(h1), math.log(h2), rtol)
        except InadmissibleError as exc:
            raise InadmissibleError(
                f"lambda is not below the hilltop level W(xi)+sigma*xi "
                f"(active branch: {branch})") from exc

    def _build(self, level, log_h1, log_h2, rtol):
        rtol = self.rtol if rtol is None else rtol
        sig, dsig, a_s, b_s, da, db = level
        x_s = safe_newton(lambda v: eos.pressure(self.params, v) - sig,
                          lambda v: eos.pressure_derivatives(self.params, v, 1),
                          self.land.alpha, self.land.beta, xtol=eos.ROOT_XTOL)
        wl = Well(self.params, a_s, +1, x_s - a_s)
        wr = Well(self.params, b_s, -1, b_s - x_s)
        lu = []
        for well, lh, name in ((wl, log_h1, "liquid"), (wr, log_h2, "vapor")):
            try:
                lu.append(well.log_offset(lh))
            except InadmissibleError as exc:
                raise InadmissibleError(
                    f"{name}-side level exceeds the hilltop W(xi)+sigma*xi") from exc
        panels = []
        for well, l0 in zip((wl, wr), lu):
            tm = well.tau_max(l0)
            if tm <= 0:
                raise QuadratureError("turning points merged at the hilltop")
            panels.append(adaptive(lambda t, w=well, l=l0: w.integrand(l, t)[:3],
                                   _breaks(tm), rtol=rtol, order=PANEL_ORDER))
        # lambda - lambda0 = h1 + int_0^dsig alpha_(sigma0 + t) dt
        if abs(dsig) < 1e-6:
            shift = dsig * (self.land.alpha0 + 0.5 * da)
        else:
            phi = eos.free_potential
            shift = (phi(self.params, a_s) + sig * a_s) - self.land.lambda0
        dlevel = math.exp(log_h1) + shift
        return Orbit(params=self.params, sigma=sig, dsigma=dsig, alpha_s=a_s,
                     xi_s=x_s, beta_s=b_s, dalpha=da, dbeta=db,
                     log_h=(log_h1, log_h2), log_u0=tuple(lu),
                     wells=(wl, wr), panels=tuple(panels), dlevel=dlevel)
