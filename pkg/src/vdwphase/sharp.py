"""Piecewise-constant steady states taking only the Maxwell volumes.

Profiles live on ``[-1, 1]``. A two-phase profile spends a total length
``l1`` at ``alpha0`` and ``l2`` at ``beta0``, with

    l1 = 2 (beta0 - vbar) / (beta0 - alpha0),   l2 = 2 (vbar - alpha0) / (beta0 - alpha0),

so that its mean equals ``vbar``. The position of the interfaces is a free
translation parameter.
"""

from dataclasses import dataclass

import numpy as np

from . import eos
from .errors import DomainError, InfeasibleError

KINDS = ("Constant", "SinglePeak", "SingleValley", "GeneralTwoValue")


@dataclass(frozen=True)
class SharpProfile:
    """A piecewise-constant profile on ``[-1, 1]``.

    ``pieces`` lists ``(start, end, value)`` triples covering ``[-1, 1]``
    in order; ``breakpoints`` are the interior jump locations. ``offset`` is
    the free translation: the length of the leading ``alpha0`` piece for
    single-peak profiles and of the leading ``beta0`` piece for
    single-valley ones.
    """

    kind: str
    values: tuple
    breakpoints: tuple
    l1: float
    l2: float
    offset: float
    vbar: float
    pieces: tuple

    @property
    def l11(self):
        return self.offset

    def mean(self):
        """Exact mean over ``[-1, 1]``."""
        return sum((e - s) * val for s, e, val in self.pieces) / 2.0

    def __call__(self, x):
        """Evaluate at ``x``; jump points take the value of the right piece."""
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, self.pieces[0][2])
        for s, _, val in self.pieces[1:]:
            out = np.where(x >= s, val, out)
        return out

    def as_dict(self):
        return {
            "kind": self.kind,
            "vbar": self.vbar,
            "values": list(self.values),
            "l1": self.l1,
            "l2": self.l2,
            "offset": self.offset,
            "breakpoints": list(self.breakpoints),
            "pieces": [[s, e, val] for s, e, val in self.pieces],
        }


def exists_two_phase(landscape, vbar, b=0.0):
    """True iff ``vbar`` lies strictly inside ``(alpha0, beta0)``."""
    if not vbar > b:
        raise DomainError(f"vbar = {vbar!r} must exceed b")
    return bool(landscape.alpha0 < vbar < landscape.beta0)


def phase_lengths(landscape, vbar):
    """Total lengths ``(l1, l2)`` of the ``alpha0`` and ``beta0`` phases."""
    a0, b0 = landscape.alpha0, landscape.beta0
    l1 = 2.0 * (b0 - vbar) / (b0 - a0)
    return l1, 2.0 - l1


def _merge(pieces):
    out = []
    for s, e, val in pieces:
        if e - s <= 0.0:
            continue
        if out and out[-1][2] == val:
            out[-1] = (out[-1][0], e, val)
        else:
            out.append((s, e, val))
    return tuple(out)


def build_profile(landscape, vbar, kind, offset=0.0):
    """Build a constant, single-peak or single-valley profile.

    Parameters
    ----------
    landscape : Landscape
    vbar : float
        Mean volume.
    kind : str
        ``"Constant"``, ``"SinglePeak"`` or ``"SingleValley"``.
    offset : float
        Length of the leading ``alpha0`` piece (peak, ``0 <= offset <= l1``)
        or leading ``beta0`` piece (valley, ``0 <= offset <= l2``).

    Raises
    ------
    InfeasibleError
        Non-constant kind with ``vbar`` outside ``(alpha0, beta0)``.
    DomainError
        Offset out of range or unknown kind.
    """
    if kind == "Constant":
        return SharpProfile(kind=kind, values=(vbar,), breakpoints=(), l1=0.0, l2=0.0,
                            offset=0.0, vbar=vbar, pieces=((-1.0, 1.0, vbar),))
    if kind not in ("SinglePeak", "SingleValley"):
        raise DomainError(f"unknown profile kind {kind!r}")
    if not landscape.alpha0 < vbar < landscape.beta0:
        raise InfeasibleError(
            f"vbar = {vbar!r} is outside the Maxwell interval "
            f"({landscape.alpha0!r}, {landscape.beta0!r}); only the constant state exists")
    a0, b0 = landscape.alpha0, landscape.beta0
    l1, l2 = phase_lengths(landscape, vbar)
    if kind == "SinglePeak":
        first, second, lead, mid = a0, b0, l1, l2
    else:
        first, second, lead, mid = b0, a0, l2, l1
    if not 0.0 <= offset <= lead:
        raise DomainError(f"offset {offset!r} outside [0, {lead!r}]")
    x1 = -1.0 + offset
    x2 = min(x1 + mid, 1.0)
    pieces = _merge([(-1.0, x1, first), (x1, x2, second), (x2, 1.0, first)])
    bps = tuple(s for s, _, _ in pieces[1:])
    return SharpProfile(kind=kind, values=(a0, b0), breakpoints=bps, l1=l1, l2=l2,
                        offset=offset, vbar=vbar, pieces=pieces)


def general_profile(landscape, vbar, vapor_intervals, tol=1e-12):
    """Two-value profile equal to ``beta0`` on a finite union of intervals.

    ``vapor_intervals`` are disjoint ``(start, end)`` pairs in ``[-1, 1]``
    whose total length must equal ``l2``.
    """
    if not landscape.alpha0 < vbar < landscape.beta0:
        raise InfeasibleError(f"vbar = {vbar!r} is outside the Maxwell interval")
    a0, b0 = landscape.alpha0, landscape.beta0
    l1, l2 = phase_lengths(landscape, vbar)
    ivs = sorted((float(s), float(e)) for s, e in vapor_intervals)
    pieces = []
    cur = -1.0
    total = 0.0
    for s, e in ivs:
        if s < cur - tol or e < s or e > 1.0 + tol:
            raise DomainError("vapor intervals must be ordered, disjoint and inside [-1, 1]")
        pieces.append((cur, s, a0))
        pieces.append((s, e, b0))
        total += e - s
        cur = e
    pieces.append((cur, 1.0, a0))
    if abs(total - l2) > 1e-10:
        raise DomainError(f"vapor length {total!r} differs from l2 = {l2!r}")
    pieces = _merge(pieces)
    bps = tuple(s for s, _, _ in pieces[1:])
    return SharpProfile(kind="GeneralTwoValue", values=(a0, b0), breakpoints=bps, l1=l1,
                        l2=l2, offset=0.0, vbar=vbar, pieces=pieces)


def weierstrass_erdmann_check(params, landscape, profile, tol=1e-10):
    """Corner conditions at the jumps of a two-value profile.

    Both values must satisfy ``W'(v) = -sigma0`` and ``W + sigma0 v`` must be
    continuous across every jump. Constant profiles pass vacuously.
    """
    if profile.kind == "Constant" or not profile.breakpoints:
        return True
    s0 = landscape.sigma0
    used = {val for _, _, val in profile.pieces}
    for v in used:
        if abs(eos.pressure(params, v) - s0) > tol:
            return False
    for (_, _, left), (_, _, right) in zip(profile.pieces[:-1], profile.pieces[1:]):
        jump = (eos.free_potential(params, right) + s0 * right
                - eos.free_potential(params, left) - s0 * left)
        if abs(jump) > tol:
            return False
    return True


def tilted_functional(params, landscape, profile):
    """``int_{-1}^{1} (W(v) + sigma0 v) dx`` evaluated piecewise exactly."""
    s0 = landscape.sigma0
    ref = eos.free_potential(params, profile.vbar)
    return float(sum((e - s) * (eos.free_potential(params, val) - ref + s0 * val)
                     for s, e, val in profile.pieces))


def sample(profile, n):
    """``(x, v)`` on ``n + 1`` uniform points of ``[-1, 1]``."""
    x = np.linspace(-1.0, 1.0, n + 1)
    return x, profile(x)
