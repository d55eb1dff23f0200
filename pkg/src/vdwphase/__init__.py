"""Steady liquid-vapor phase transitions for the van der Waals fluid.

Modules
-------
eos        equation of state and pressure landscape
maxwell    equal-area construction and region labels
sharp      piecewise-constant two-phase profiles
viscous    smooth periodic states with artificial viscosity
energy     energies, the small-viscosity slope and second variation
stability  Fourier stability of constant states
limits     viscosity sweeps toward the sharp-interface limit
cli        command-line entry point
"""

from .eos import EosParams, Landscape
from .maxwell import construct

__all__ = ["EosParams", "Landscape", "construct"]
__version__ = "0.1.0"
