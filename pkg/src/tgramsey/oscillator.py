"""Harmonic-oscillator basis states and the fixed k-space quadrature grid.

All routines work in units with hbar = 1; the configuration layer feeds them
quantities already expressed in the internal unit system (m = 1, lengths in
units of the ground-state width).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "OscillatorBasis",
    "QuadratureGrid",
    "hermite",
    "ho_momentum_amplitude",
    "ho_position_amplitude",
    "build_k_grid",
]

# Documented supported range for the Hermite recurrence; beyond this
# double precision overflows for moderate |x|.
HERMITE_NMAX = 200

# Warn when the trap center sits closer than this many cloud widths to the
# origin (the launch region must not overlap the field regions).
SEPARATION_MULTIPLIER = 6.0


def hermite(n, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence.

    Accepts scalar or array ``x``.  Supported for n <= 200; larger orders
    overflow double precision for moderate arguments.
    """
    if n < 0:
        raise ValueError(f"hermite order must be nonnegative, got n={n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for m in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
    return h if h.ndim else float(h)


@dataclass(frozen=True)
class OscillatorBasis:
    """Launch-state basis: kicked, shifted eigenstates of a harmonic trap.

    mass and omega are in internal units (hbar = 1); x0 is the trap center,
    k0 the momentum-kick wavenumber.
    """

    mass: float
    omega: float
    x0: float
    k0: float

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def delta0(self) -> float:
        """Spatial width of the n=0 state, [1/(2 m omega)]^(1/2)."""
        return math.sqrt(1.0 / (2.0 * self.mass * self.omega))

    def delta_n(self, n: int) -> float:
        """Spatial width (root variance) of level n, [(n+1/2)/(m omega)]^(1/2)."""
        return math.sqrt((n + 0.5) / (self.mass * self.omega))

    def check_separation(self, nmax: int, multiplier: float = SEPARATION_MULTIPLIER):
        """Warn if the trap center overlaps the field region for level nmax."""
        dn = self.delta_n(nmax)
        if abs(self.x0) < multiplier * dn:
            warnings.warn(
                f"|x0|={abs(self.x0):.3g} is less than {multiplier:g} cloud "
                f"widths ({multiplier * dn:.3g}) for n={nmax}; the launch "
                "cloud overlaps the field region",
                stacklevel=2,
            )


def ho_momentum_amplitude(n: int, k, basis: OscillatorBasis):
    """Wavenumber amplitude of the kicked, shifted level-n trap eigenstate.

    phi_tilde_n(k) = (-i)^n / sqrt(2^n n!) * (2 d0^2/pi)^(1/4)
                     * exp(-d0^2 (k-k0)^2) * exp(-i k x0)
                     * H_n(sqrt(2) d0 (k-k0))
    """
    if n < 0:
        raise ValueError(f"level index must be nonnegative, got n={n}")
    k = np.asarray(k, dtype=float)
    d0 = basis.delta0
    u = k - basis.k0
    pref = (-1j) ** n / math.sqrt(2.0**n * math.factorial(n))
    pref *= (2.0 * d0**2 / math.pi) ** 0.25
    amp = pref * np.exp(-(d0**2) * u**2) * np.exp(-1j * k * basis.x0)
    amp = amp * hermite(n, math.sqrt(2.0) * d0 * u)
    return amp if np.ndim(amp) else complex(amp)


def ho_position_amplitude(n: int, x, basis: OscillatorBasis):
    """Position amplitude e^{i k0 (x-x0)} phi_n(x-x0) of the kicked state.

    Fourier partner of :func:`ho_momentum_amplitude`; peak modulus of the
    n=0 state is (2 pi d0^2)^(-1/4).
    """
    if n < 0:
        raise ValueError(f"level index must be nonnegative, got n={n}")
    x = np.asarray(x, dtype=float)
    d0 = basis.delta0
    u = x - basis.x0
    pref = (1.0 / (2.0 * math.pi * d0**2)) ** 0.25
    pref /= math.sqrt(2.0**n * math.factorial(n))
    amp = pref * hermite(n, u / (math.sqrt(2.0) * d0)) * np.exp(-(u**2) / (4.0 * d0**2))
    amp = amp * np.exp(1j * basis.k0 * u)
    return amp if np.ndim(amp) else complex(amp)


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform composite-trapezoid grid in k-space."""

    nodes: np.ndarray
    weights: np.ndarray
    center: float
    halfwidth: float

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.shape != weights.shape:
            raise ValueError("node and weight counts differ")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def integrate(self, values) -> complex:
        return np.sum(self.weights * np.asarray(values), axis=-1)


def build_k_grid(basis: OscillatorBasis, nmax: int, nodes: int = 2048,
                 width_mult: float = 8.0) -> QuadratureGrid:
    """Trapezoid grid centered at k0 covering levels n <= nmax.

    Half-width is width_mult * sqrt(nmax+1) / delta0.  Rejects grids that
    reach k <= 0: the wavepacket would not be fully right-moving.
    """
    if nodes < 64:
        raise ValueError(f"need at least 64 quadrature nodes, got {nodes}")
    if nmax < 0:
        raise ValueError(f"nmax must be nonnegative, got {nmax}")
    halfwidth = width_mult * math.sqrt(nmax + 1.0) / basis.delta0
    lo = basis.k0 - halfwidth
    if lo <= 0:
        raise ValueError(
            f"k grid reaches k={lo:.3g} <= 0: kick k0={basis.k0:.3g} too small "
            f"for half-width {halfwidth:.3g}; wavepacket not fully right-moving"
        )
    ks = np.linspace(lo, basis.k0 + halfwidth, nodes)
    w = np.full(nodes, ks[1] - ks[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return QuadratureGrid(nodes=ks, weights=w, center=basis.k0, halfwidth=halfwidth)
