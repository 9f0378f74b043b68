"""Stationary two-channel scattering of a two-level atom off the two field
regions, via transfer matrices through piecewise-constant potential blocks.

Internal units hbar = m = 1 throughout.  The field regions occupy [0, l] and
[l+L, 2l+L] with Rabi coupling Omega inside and zero elsewhere; the detuning
enters as a constant energy offset -delta in the excited channel, so the free
excited-channel wavenumber is q = sqrt(k^2 + 2*delta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FieldGeometry",
    "ChannelState",
    "ScatteringAmplitudes",
    "channel_state",
    "region_transfer",
    "scattering_amplitudes",
    "scattering_amplitudes_batch",
    "monochromatic_excitation",
    "monochromatic_excitation_batch",
    "wall_well_reflection",
]

# 2*pi to extended precision, for analytic phase reduction of the large
# propagation phases (k*l can reach ~1e5 rad at realistic geometries).
_TWO_PI_EP = np.longdouble("6.283185307179586476925286766559005768394")


def _reduced_phase(kappa, width):
    """kappa*width reduced mod 2*pi, with the product taken in extended
    precision so the reduced phase keeps full double accuracy."""
    prod = np.longdouble(kappa) * np.longdouble(width)
    return np.asarray(np.mod(prod, _TWO_PI_EP), dtype=float)


@dataclass(frozen=True)
class FieldGeometry:
    """Field-region geometry and drive parameters (internal units)."""

    l: float
    L: float
    Omega: float
    delta: float

    def __post_init__(self):
        if self.l <= 0:
            raise ValueError(f"field-region length l must be positive, got {self.l}")
        if self.L < 0:
            raise ValueError(f"field separation L must be nonnegative, got {self.L}")
        if self.Omega < 0:
            raise ValueError(f"Rabi frequency Omega must be nonnegative, got {self.Omega}")


@dataclass(frozen=True)
class ChannelState:
    """Asymptotic channel wavenumbers at one incident ground-channel k."""

    k: float
    q: float
    excited_open: bool


@dataclass(frozen=True)
class ScatteringAmplitudes:
    T_gg: complex
    T_ge: complex
    R_gg: complex
    R_ge: complex
    flux_defect: float


def channel_state(k: float, geometry: FieldGeometry) -> ChannelState:
    """Excited-channel wavenumber q = sqrt(k^2 + 2*delta), or the evanescent
    decay constant when the channel is closed."""
    if k <= 0:
        raise ValueError(f"incident wavenumber must be positive, got k={k}")
    qsq = k * k + 2.0 * geometry.delta
    if qsq > 0:
        return ChannelState(k=k, q=math.sqrt(qsq), excited_open=True)
    return ChannelState(k=k, q=math.sqrt(-qsq), excited_open=False)


def _field_eigensystem(geometry: FieldGeometry, field_on: bool):
    """Dressed-channel energies and the orthogonal channel rotation for one
    region.  With the field off the channels decouple (U = identity)."""
    delta, Omega = geometry.delta, geometry.Omega
    if field_on and Omega != 0.0:
        Oprime = math.hypot(Omega, delta)
        lam = np.array([(-delta + Oprime) / 2.0, (-delta - Oprime) / 2.0])
        U = np.empty((2, 2))
        for i in range(2):
            v = np.array([Omega / 2.0, lam[i]])
            U[:, i] = v / np.linalg.norm(v)
    else:
        lam = np.array([0.0, -delta])
        U = np.eye(2)
    return lam, U


def _scalar_entries(ksq, width):
    """Value/derivative transfer entries (cos, sin/kappa, -kappa*sin) for a
    single channel of local kinetic energy ksq/2 across ``width``.

    ksq may have either sign; negative values propagate hyperbolically.
    Shapes broadcast; returns three arrays shaped like ksq.
    """
    ksq = np.asarray(ksq, dtype=float)
    kap = np.sqrt(np.abs(ksq))
    pos = ksq >= 0
    ph = np.where(pos, _reduced_phase(kap, width), kap * width)
    c = np.where(pos, np.cos(ph), np.cosh(ph))
    s = np.where(pos, np.sin(ph), np.sinh(ph))
    # sin(kappa w)/kappa -> w as kappa -> 0 (both branches)
    with np.errstate(invalid="ignore", divide="ignore"):
        s_over = np.where(kap > 0, s / np.where(kap > 0, kap, 1.0), width)
    ks = np.where(pos, -kap * s, kap * s)
    return c, s_over, ks


def _region_transfer_batch(ks, width, field_on, geometry):
    """(nk, 4, 4) real transfer matrices mapping (psi_g, psi_e, psi_g',
    psi_e') across one region, batched over incident wavenumbers ``ks``."""
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    lam, U = _field_eigensystem(geometry, field_on)
    ksq = ks[:, None] ** 2 - 2.0 * lam[None, :]  # (nk, 2) dressed channels
    c, s_over, kps = _scalar_entries(ksq, width)
    nk = len(ks)
    M = np.zeros((nk, 4, 4))
    for i in range(2):
        M[:, i, i] = c[:, i]
        M[:, i, i + 2] = s_over[:, i]
        M[:, i + 2, i] = kps[:, i]
        M[:, i + 2, i + 2] = c[:, i]
    P = np.zeros((4, 4))
    P[:2, :2] = U
    P[2:, 2:] = U
    return P @ M @ P.T


def region_transfer(width: float, field_on: bool, state: ChannelState,
                    geometry: FieldGeometry) -> np.ndarray:
    """4x4 transfer matrix across a single region at incident wavenumber
    state.k, in the (psi_g, psi_e, psi_g', psi_e') representation."""
    if width <= 0:
        raise ValueError(f"region width must be positive, got {width}")
    return _region_transfer_batch(np.array([state.k]), width, field_on, geometry)[0]


def scattering_amplitudes_batch(ks, geometry: FieldGeometry):
    """Vectorized scattering solve over an array of incident wavenumbers.

    Returns (T_gg, T_ge, R_gg, R_ge, q, excited_open, flux_defect), each an
    array over ks.  Transmission amplitudes carry the global plane-wave
    convention psi_g -> T_gg e^{ikx}, psi_e -> T_ge e^{iqx} beyond the second
    field; closed excited channels decay and carry no flux.
    """
    ks = np.asarray(ks, dtype=float)
    if np.any(ks <= 0):
        raise ValueError("all incident wavenumbers must be positive")
    nk = len(ks)
    qsq = ks**2 + 2.0 * geometry.delta
    open_e = qsq > 0
    q = np.sqrt(np.abs(qsq))

    M = _region_transfer_batch(ks, geometry.l, True, geometry)
    if geometry.L > 0:
        M = _region_transfer_batch(ks, geometry.L, False, geometry) @ M
    M = _region_transfer_batch(ks, geometry.l, True, geometry) @ M
    M = M.astype(complex)

    # Unknowns (R_gg, R_ge, t_gg, t_ge); t_* are amplitudes at the right edge
    # x_R = 2l+L.  Left of the barrier: psi_g = e^{ikx} + R_gg e^{-ikx},
    # psi_e = R_ge e^{-iqx} (open) or R_ge e^{+kappa x} (closed, decaying).
    a_in = np.zeros((nk, 4), dtype=complex)
    a_in[:, 0] = 1.0
    a_in[:, 2] = 1j * ks
    A_R = np.zeros((nk, 4, 2), dtype=complex)
    A_R[:, 0, 0] = 1.0
    A_R[:, 2, 0] = -1j * ks
    A_R[:, 1, 1] = 1.0
    A_R[:, 3, 1] = np.where(open_e, -1j * q, q)
    B_T = np.zeros((nk, 4, 2), dtype=complex)
    B_T[:, 0, 0] = 1.0
    B_T[:, 2, 0] = 1j * ks
    B_T[:, 1, 1] = 1.0
    B_T[:, 3, 1] = np.where(open_e, 1j * q, -q)

    A = np.concatenate([-(M @ A_R), B_T], axis=2)
    rhs = np.einsum("nij,nj->ni", M, a_in)
    try:
        sol = np.linalg.solve(A, rhs[:, :, None])[:, :, 0]
    except np.linalg.LinAlgError as exc:
        conds = np.linalg.cond(A)
        raise np.linalg.LinAlgError(
            f"singular scattering system (max condition number {conds.max():.3g})"
        ) from exc

    R_gg, R_ge, t_gg, t_ge = sol[:, 0], sol[:, 1], sol[:, 2], sol[:, 3]
    x_R = 2.0 * geometry.l + geometry.L
    T_gg = t_gg * np.exp(-1j * _reduced_phase(ks, x_R))
    T_ge = np.where(open_e, t_ge * np.exp(-1j * _reduced_phase(q, x_R)), t_ge)

    flux = np.abs(T_gg) ** 2 + np.abs(R_gg) ** 2
    flux = flux + np.where(open_e, (q / ks) * (np.abs(T_ge) ** 2 + np.abs(R_ge) ** 2), 0.0)
    return T_gg, T_ge, R_gg, R_ge, q, open_e, np.abs(flux - 1.0)


def scattering_amplitudes(k: float, geometry: FieldGeometry) -> ScatteringAmplitudes:
    """Full five-region scattering solution at one incident wavenumber."""
    if k <= 0:
        raise ValueError(f"incident wavenumber must be positive, got k={k}")
    T_gg, T_ge, R_gg, R_ge, _, _, fd = scattering_amplitudes_batch(np.array([k]), geometry)
    return ScatteringAmplitudes(
        T_gg=complex(T_gg[0]), T_ge=complex(T_ge[0]),
        R_gg=complex(R_gg[0]), R_ge=complex(R_ge[0]),
        flux_defect=float(fd[0]),
    )


def monochromatic_excitation_batch(ks, geometry: FieldGeometry):
    """(q/k) |T_ge|^2 over an array of incident wavenumbers; zero where the
    excited channel is closed."""
    _, T_ge, _, _, q, open_e, _ = scattering_amplitudes_batch(ks, geometry)
    ks = np.asarray(ks, dtype=float)
    return np.where(open_e, (q / ks) * np.abs(T_ge) ** 2, 0.0)


def monochromatic_excitation(k: float, geometry: FieldGeometry) -> float:
    """Excited-state probability (q/k)|T_ge|^2 for monochromatic ground-state
    incidence at wavenumber k."""
    if k <= 0:
        raise ValueError(f"incident wavenumber must be positive, got k={k}")
    return float(monochromatic_excitation_batch(np.array([k]), geometry)[0])


def wall_well_reflection(V_w: float, L_w: float, E: float) -> complex:
    """Reflection amplitude off a hard wall at x=0 dressed with a square well
    of depth V_w on (0, L_w), for a particle of energy E incident from the
    right (psi = e^{-ikx} + R e^{ikx} outside).

    Pure hard wall (V_w = 0) gives R = -1; in the narrow-deep limit with
    sqrt(2 V_w) L_w = pi/2 held fixed, R -> +1.  |R| = 1 always.
    """
    if V_w < 0:
        raise ValueError(f"well depth must be nonnegative, got {V_w}")
    if L_w <= 0:
        raise ValueError(f"well width must be positive, got {L_w}")
    if E <= 0:
        raise ValueError(f"energy must be positive, got {E}")
    k = math.sqrt(2.0 * E)
    k_in = math.sqrt(2.0 * (E + V_w))
    ph = _reduced_phase(k_in, L_w)
    ts, tc = math.sin(ph), math.cos(ph)
    # Matching psi = sin(k_in x) inside to the outside wave at L_w; written
    # with sin/cos rather than cot so poles of cot are harmless.
    num = k_in * tc + 1j * k * ts
    den = 1j * k * ts - k_in * tc
    return complex(np.exp(-2j * _reduced_phase(k, L_w)) * num / den)
