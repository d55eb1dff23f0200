"""Composite Gauss-Legendre quadrature with adaptive panel halving."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre

from .errors import QuadratureError


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Nodes and weights of the ``n``-point rule on ``[-1, 1]`` (read-only)."""
    x, w = legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@lru_cache(maxsize=None)
def gauss_legendre_unit(n):
    """Nodes and weights of the ``n``-point rule on ``[0, 1]``."""
    x, w = gauss_legendre(n)
    t = 0.5 * (x + 1.0)
    ww = 0.5 * w
    t.flags.writeable = False
    ww.flags.writeable = False
    return t, ww


@dataclass
class Panels:
    """Accepted panels of an adaptive rule.

    Attributes
    ----------
    a, b : ndarray, shape (P,)
        Panel endpoints, sorted and contiguous.
    values : ndarray, shape (m, P, order)
        Integrand components at the Gauss nodes of each panel.
    order : int
        Points per panel.
    """

    a: np.ndarray
    b: np.ndarray
    values: np.ndarray
    order: int

    @property
    def sums(self):
        """Per-panel integrals, shape (m, P)."""
        _, w = gauss_legendre(self.order)
        return 0.5 * (self.b - self.a) * (self.values @ w)

    @property
    def totals(self):
        return self.sums.sum(axis=1)

    def nodes(self):
        x, _ = gauss_legendre(self.order)
        return 0.5 * (self.a + self.b)[:, None] + 0.5 * (self.b - self.a)[:, None] * x


def _nodes(a, b, x):
    return (0.5 * (a + b))[:, None] + (0.5 * (b - a))[:, None] * x


def adaptive(func, breaks, rtol=1e-12, order=16, max_panels=50000):
    """Integrate a vector-valued function by adaptive panel halving.

    Every panel is integrated once with ``order`` points and once as two
    halves; it is accepted when the two agree to
    ``rtol * max(|halves|, total * width / length)`` in every component,
    with ``total`` a running estimate of the full integral. Accepted panels
    keep the half-panel node values.

    Parameters
    ----------
    func : callable
        Maps a 1-D array of abscissae to an array of shape ``(m, n)``.
    breaks : array_like
        Initial partition (increasing).
    rtol : float
        Relative tolerance.
    order : int
        Gauss points per panel.

    Returns
    -------
    Panels
    """
    x, w = gauss_legendre(order)
    breaks = np.asarray(breaks, dtype=float)
    pa = breaks[:-1].copy()
    pb = breaks[1:].copy()
    length = breaks[-1] - breaks[0]
    acc_a, acc_b, acc_v = [], [], []
    total = None
    done = 0.0
    while pa.size:
        if sum(v.shape[1] for v in acc_v) + 2 * pa.size > max_panels:
            raise QuadratureError("adaptive quadrature exceeded its panel budget")
        pm = 0.5 * (pa + pb)
        P = pa.size
        # coarse nodes, then left and right halves, evaluated in one call
        t = np.concatenate([_nodes(pa, pb, x).ravel(),
                            _nodes(pa, pm, x).ravel(),
                            _nodes(pm, pb, x).ravel()])
        vals = np.asarray(func(t), dtype=float)
        if vals.ndim == 1:
            vals = vals[None, :]
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("non-finite integrand value")
        m = vals.shape[0]
        vals = vals.reshape(m, 3, P, order)
        coarse = 0.5 * (pb - pa) * (vals[:, 0] @ w)
        left = 0.5 * (pm - pa) * (vals[:, 1] @ w)
        right = 0.5 * (pb - pm) * (vals[:, 2] @ w)
        fine = left + right
        if total is None:
            total = np.abs(fine.sum(axis=1))
        scale = np.maximum(np.abs(fine), total[:, None] * ((pb - pa) / length)[None, :])
        ok = np.all(np.abs(coarse - fine) <= rtol * scale, axis=0)
        if np.any(ok):
            acc_a += [pa[ok], pm[ok]]
            acc_b += [pm[ok], pb[ok]]
            acc_v += [vals[:, 1][:, ok], vals[:, 2][:, ok]]
            done = done + fine[:, ok].sum(axis=1)
        total = np.abs(done + fine[:, ~ok].sum(axis=1))
        bad = ~ok
        pa, pb = (np.concatenate([pa[bad], pm[bad]]),
                  np.concatenate([pm[bad], pb[bad]]))
    a = np.concatenate(acc_a)
    b = np.concatenate(acc_b)
    v = np.concatenate(acc_v, axis=1)
    idx = np.argsort(a)
    return Panels(a=a[idx], b=b[idx], values=v[:, idx], order=order)


def legendre_coefficients(values, order):
    """Legendre coefficients on ``[-1, 1]`` of the polynomial interpolating
    Gauss-node values (last axis)."""
    x, w = gauss_legendre(order)
    V = legendre.legvander(x, order - 1)
    scale = (2.0 * np.arange(order) + 1.0) / 2.0
    return (values * w) @ V * scale
