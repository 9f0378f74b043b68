"""Fringe-level physics: the closed-form semiclassical Ramsey pattern, the
quantum wavepacket excitation probabilities per trap level, detuning scans,
and the projection-noise figure of merit.

Quantum quantities are computed in internal units (hbar = m = 1); the
semiclassical formula is unit-agnostic since it only sees the products
Omega*tau and Delta*T.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .oscillator import OscillatorBasis, QuadratureGrid, ho_momentum_amplitude
from .scattering import FieldGeometry, scattering_amplitudes_batch

__all__ = [
    "RamseyParams",
    "FringeScan",
    "IllConditionedPointError",
    "semiclassical_fringe",
    "level_excitation",
    "excited_wavepacket",
    "total_excitation",
    "fringe_scan",
    "projection_noise_ratio",
    "half_height_point",
    "ll_gamma",
]

THREADS_ENV = "TGRAMSEY_THREADS"


class IllConditionedPointError(ValueError):
    """Raised when the fringe slope is too small to divide by."""


@dataclass(frozen=True)
class RamseyParams:
    """Semiclassical timing parameters of one interferometer run."""

    v0: float
    tau: float
    T: float
    N: int

    @property
    def nmax(self) -> int:
        return self.N - 1

    @classmethod
    def from_geometry(cls, geometry: FieldGeometry, v0: float, N: int) -> "RamseyParams":
        return cls(v0=v0, tau=geometry.l / v0, T=geometry.L / v0, N=N)


@dataclass(frozen=True)
class FringeScan:
    """Detuning scan: quantum (TG-averaged) and semiclassical excitation
    probabilities per grid point, plus optional per-level columns."""

    detunings: np.ndarray
    P_quantum: np.ndarray
    P_scl: np.ndarray
    per_level: np.ndarray | None = None

    def __post_init__(self):
        d = np.asarray(self.detunings, dtype=float)
        object.__setattr__(self, "detunings", d)
        object.__setattr__(self, "P_quantum", np.asarray(self.P_quantum, dtype=float))
        object.__setattr__(self, "P_scl", np.asarray(self.P_scl, dtype=float))
        if np.any(np.diff(d) <= 0):
            raise ValueError("detuning grid must be strictly increasing")
        for name in ("P_quantum", "P_scl"):
            col = getattr(self, name)
            if col.shape != d.shape:
                raise ValueError(f"{name} length does not match the detuning grid")
            if np.any((col < -1e-12) | (col > 1 + 1e-12)):
                raise ValueError(f"{name} contains values outside [0, 1]")

    def column(self, which: str) -> np.ndarray:
        if which == "quantum":
            return self.P_quantum
        if which == "semiclassical":
            return self.P_scl
        raise ValueError(f"unknown scan column {which!r}")


def semiclassical_fringe(delta, Omega, tau, T):
    """Closed-form two-zone Ramsey excitation probability.

    P = (4 Omega^2/Omega'^2) sin^2(Omega' tau/2)
        [cos(Omega' tau/2) cos(Delta T/2)
         - (Delta/Omega') sin(Omega' tau/2) sin(Delta T/2)]^2,
    Omega' = sqrt(Omega^2 + Delta^2).  Accepts scalar or array delta.
    """
    if Omega < 0:
        raise ValueError(f"Omega must be nonnegative, got {Omega}")
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if T < 0:
        raise ValueError(f"T must be nonnegative, got {T}")
    delta = np.asarray(delta, dtype=float)
    Op = np.hypot(Omega, delta)
    if Omega == 0.0:
        out = np.zeros_like(delta)
        return out if out.ndim else 0.0
    s = np.sin(Op * tau / 2.0)
    c = np.cos(Op * tau / 2.0)
    bracket = c * np.cos(delta * T / 2.0) - (delta / Op) * s * np.sin(delta * T / 2.0)
    P = 4.0 * Omega**2 / Op**2 * s**2 * bracket**2
    return P if P.ndim else float(P)


def _excitation_curve(geometry: FieldGeometry, grid: QuadratureGrid) -> np.ndarray:
    """Monochromatic excitation (q/k)|T_ge|^2 over the quadrature nodes."""
    _, T_ge, _, _, q, open_e, _ = scattering_amplitudes_batch(grid.nodes, geometry)
    return np.where(open_e, (q / grid.nodes) * np.abs(T_ge) ** 2, 0.0)


def _level_weight(n: int, basis: OscillatorBasis, grid: QuadratureGrid) -> np.ndarray:
    return np.abs(ho_momentum_amplitude(n, grid.nodes, basis)) ** 2


def level_excitation(n: int, geometry: FieldGeometry, basis: OscillatorBasis,
                     grid: QuadratureGrid) -> float:
    """Asymptotic excited-state norm of the kicked level-n wavepacket,
    p_n = integral dk (q/k) |T_ge(k)|^2 |phi_tilde_n(k)|^2."""
    if np.any(grid.nodes <= 0):
        raise ValueError("quadrature grid reaches k <= 0; invalid regime")
    curve = _excitation_curve(geometry, grid)
    return float(grid.integrate(curve * _level_weight(n, basis, grid)))


def excited_wavepacket(n: int, x, t: float, geometry: FieldGeometry,
                       basis: OscillatorBasis, grid: QuadratureGrid):
    """Excited-channel amplitude of the level-n packet after full traversal,

        (1/sqrt(2 pi)) integral dk e^{i q x - i k^2 t/2} T_ge(k) phi_tilde_n(k).

    Only valid once the packet has cleared both field regions; a safe choice
    is t > (|x0| + 2l + L)/v0 plus several dispersion times.  Closed-channel
    k components carry no outgoing excited flux and are dropped.
    """
    if np.any(grid.nodes <= 0):
        raise ValueError("quadrature grid reaches k <= 0; invalid regime")
    x = np.asarray(x, dtype=float)
    ks = grid.nodes
    _, T_ge, _, _, q, open_e, _ = scattering_amplitudes_batch(ks, geometry)
    amp_k = np.where(open_e, T_ge, 0.0) * ho_momentum_amplitude(n, ks, basis)
    amp_k = amp_k * np.exp(-0.5j * ks**2 * t) * grid.weights
    phase = np.exp(1j * np.multiply.outer(x, np.where(open_e, q, 0.0)))
    out = phase @ amp_k / math.sqrt(2.0 * math.pi)
    return out if out.ndim else complex(out)


def total_excitation(geometry: FieldGeometry, basis: OscillatorBasis, N: int,
                     grid: QuadratureGrid) -> float:
    """TG-gas excitation probability: mean of p_n over the N lowest levels."""
    if N < 1:
        raise ValueError(f"particle number must be at least 1, got {N}")
    curve = _excitation_curve(geometry, grid)
    p = [float(grid.integrate(curve * _level_weight(n, basis, grid))) for n in range(N)]
    return float(np.mean(p))


def _scan_point(delta, geometry, basis, N, grid):
    g = replace(geometry, delta=float(delta))
    curve = _excitation_curve(g, grid)
    p = np.array([float(grid.integrate(curve * _level_weight(n, basis, grid)))
                  for n in range(N)])
    return p


def fringe_scan(delta_grid, geometry: FieldGeometry, basis: OscillatorBasis,
                N: int, grid: QuadratureGrid, v0: float | None = None,
                per_level: bool = False, workers: int | None = None) -> FringeScan:
    """Scan the detuning grid; ``geometry`` provides l, L, Omega (its delta
    field is replaced per point).

    v0 defaults to the packet's central group velocity k0 (hbar = m = 1) and
    sets tau, T for the semiclassical column.  Points are independent; with
    workers > 1 (default from the TGRAMSEY_THREADS environment variable) they
    are evaluated in a thread pool and assembled in grid order.
    """
    delta_grid = np.asarray(delta_grid, dtype=float)
    if delta_grid.ndim != 1 or len(delta_grid) == 0:
        raise ValueError("detuning grid must be a nonempty 1-d array")
    if len(delta_grid) > 1 and np.any(np.diff(delta_grid) <= 0):
        raise ValueError("detuning grid must be strictly increasing")
    if N < 1:
        raise ValueError(f"particle number must be at least 1, got {N}")
    if v0 is None:
        v0 = basis.k0
    tau = geometry.l / v0
    T = geometry.L / v0

    if workers is None:
        workers = int(os.environ.get(THREADS_ENV, "1") or "1")
    per = np.empty((len(delta_grid), N))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_point, d, geometry, basis, N, grid)
                       for d in delta_grid]
            for i, fut in enumerate(futures):
                per[i] = fut.result()
    else:
        for i, d in enumerate(delta_grid):
            per[i] = _scan_point(d, geometry, basis, N, grid)

    P_q = per.mean(axis=1)
    P_s = semiclassical_fringe(delta_grid, geometry.Omega, tau, T)
    return FringeScan(
        detunings=delta_grid,
        P_quantum=np.clip(P_q, 0.0, 1.0),
        P_scl=np.atleast_1d(P_s),
        per_level=per if per_level else None,
    )


def projection_noise_ratio(scan: FringeScan, delta: float, N: int,
                           column: str = "quantum",
                           slope_threshold: float = 1e-12) -> float:
    """Frequency-estimation figure r = Delta S_Z / |d<S_Z>/d delta| at the
    scan point nearest ``delta``, for N uncorrelated atoms.

    <S_Z> = N (P - 1/2), Delta S_Z = sqrt(N P (1-P)); the slope is a central
    finite difference on the scan grid, so ``delta`` must be interior.
    """
    if N < 1:
        raise ValueError(f"particle number must be at least 1, got {N}")
    d = scan.detunings
    if not (d[0] <= delta <= d[-1]):
        raise ValueError(f"delta={delta:g} outside the scan range [{d[0]:g}, {d[-1]:g}]")
    i = int(np.argmin(np.abs(d - delta)))
    if i == 0 or i == len(d) - 1:
        raise ValueError("delta falls on a scan endpoint; no central difference")
    P = scan.column(column)
    slope = (P[i + 1] - P[i - 1]) / (d[i + 1] - d[i - 1])
    if abs(slope) < slope_threshold:
        raise IllConditionedPointError(
            f"fringe slope {slope:.3g} at delta={d[i]:g} below threshold; "
            "the noise ratio diverges at fringe extrema"
        )
    Pi = min(max(P[i], 0.0), 1.0)
    return math.sqrt(N * Pi * (1.0 - Pi)) / (N * abs(slope))


def half_height_point(scan: FringeScan, column: str = "quantum",
                      evaluator=None, xtol: float = 1e-12) -> float:
    """Smallest positive detuning where the scan column crosses half the
    central-fringe maximum.

    The crossing is bracketed by linear interpolation on the grid; if a
    callable ``evaluator`` (P as a function of delta) is supplied the root is
    refined by bisection to ``xtol``.
    """
    d = scan.detunings
    P = scan.column(column)
    i0 = int(np.argmin(np.abs(d)))
    peak = P[i0]
    if i0 in (0, len(d) - 1):
        raise ValueError("central-fringe maximum must be interior to the scan")
    target = peak / 2.0
    for i in range(i0, len(d) - 1):
        if (P[i] - target) * (P[i + 1] - target) <= 0 and P[i] != P[i + 1]:
            frac = (P[i] - target) / (P[i] - P[i + 1])
            guess = d[i] + frac * (d[i + 1] - d[i])
            if evaluator is None:
                return float(guess)
            lo, hi = d[i], d[i + 1]
            flo = evaluator(lo) - target
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fm = evaluator(mid) - target
                if fm == 0.0 or hi - lo < xtol:
                    return float(mid)
                if flo * fm < 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            return float(0.5 * (lo + hi))
    raise ValueError("no half-height crossing inside the scan range")


def ll_gamma(g1d: float, density: float, mass: float = 1.0,
             hbar: float = 1.0) -> float:
    """Dimensionless Lieb-Liniger parameter gamma = m g_1D / (hbar^2 n)."""
    if density <= 0:
        raise ValueError(f"linear density must be positive, got {density}")
    return mass * g1d / (hbar**2 * density)
