"""Bracketed scalar root finding."""

import math

from .errors import ConvergenceError


def safe_newton(f, df, lo, hi, xtol=1e-13, maxiter=200, rtol=4e-16):
    """Find a root of ``f`` in ``[lo, hi]`` by Newton steps guarded by bisection.

    ``f(lo)`` and ``f(hi)`` must have opposite signs (or one of them vanish).
    Newton iterates that leave the current bracket, or fail to halve it fast
    enough, are replaced by bisection steps.

    Parameters
    ----------
    f, df : callable
        Function and its derivative.
    lo, hi : float
        Bracket endpoints.
    xtol, rtol : float
        Absolute and relative tolerance on the root; the relative part only
        matters for roots far beyond unit scale.
    maxiter : int
        Iteration cap.

    Returns
    -------
    float
        The root.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ConvergenceError(
            f"root not bracketed on [{lo!r}, {hi!r}]: f = {flo!r}, {fhi!r}")
    # orient so that f(a) < 0 < f(b)
    if flo < 0:
        a, b = lo, hi
    else:
        a, b = hi, lo
    x = 0.5 * (lo + hi)
    dx_old = abs(hi - lo)
    dx = dx_old
    fx = f(x)
    dfx = df(x)
    for _ in range(maxiter):
        if fx == 0.0:
            return x
        if fx < 0:
            a = x
        else:
            b = x
        use_bisect = (
            dfx == 0.0
            or not math.isfinite(dfx)
            or ((x - b) * dfx - fx) * ((x - a) * dfx - fx) > 0.0
            or abs(2.0 * fx) > abs(dx_old * dfx)
        )
        dx_old = dx
        if use_bisect:
            dx = 0.5 * (b - a)
            x = a + dx
        else:
            dx = fx / dfx
            x = x - dx
        tol = xtol + rtol * abs(x)
        if abs(dx) < tol or abs(b - a) < tol:
            return x
        fx = f(x)
        dfx = df(x)
    raise ConvergenceError(
        f"no convergence in {maxiter} iterations; bracket [{a!r}, {b!r}]")


def bisect(f, lo, hi, xtol=1e-13, maxiter=200):
    """Plain bisection on a sign change; used where derivatives are unavailable."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ConvergenceError(f"root not bracketed on [{lo!r}, {hi!r}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or 0.5 * abs(hi - lo) < xtol:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
