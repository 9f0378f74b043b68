"""Many-body layer: Slater determinants (spinless and two-level spinor),
the antisymmetric unit function and Fermi-Bose mapping, single-particle
densities, and the internal-space Pauli / singlet-triplet algebra with the
exchange-collision plane waves.

Internal one-particle basis ordering is {g, e}; two-particle basis ordering
is {gg, ge, eg, ee} with the first label belonging to particle 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "SpinorOrbital",
    "ParticleConfiguration",
    "LABELS",
    "antisymmetric_unit",
    "slater_determinant",
    "map_fermi_to_bose",
    "spinor_slater",
    "spinor_bose_amplitude",
    "density",
    "pauli",
    "spin_half",
    "singlet_triplet_projectors",
    "singlet_projector_from_spins",
    "collision_plane_wave",
]

LABELS = ("g", "e")
TWO_BODY_BASIS = ("gg", "ge", "eg", "ee")

# Direct determinant evaluation is meant for desk-scale verification.
MAX_PARTICLES = 8


@dataclass(frozen=True)
class SpinorOrbital:
    """One-particle two-component state: callables for the g and e parts.

    Either component may be None, meaning identically zero (but not both).
    """

    n: int
    g: Callable | None = None
    e: Callable | None = None

    def __post_init__(self):
        if self.g is None and self.e is None:
            raise ValueError(f"spinor orbital {self.n} has no nonzero component")

    def component(self, label: str) -> Callable:
        if label not in LABELS:
            raise ValueError(f"internal label must be 'g' or 'e', got {label!r}")
        f = self.g if label == "g" else self.e
        if f is None:
            return lambda x: np.zeros_like(np.asarray(x, dtype=complex))
        return f


@dataclass(frozen=True)
class ParticleConfiguration:
    """Positions and internal labels of N particles."""

    positions: np.ndarray
    internal: tuple

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "internal", tuple(self.internal))
        if pos.ndim != 1:
            raise ValueError("positions must be a 1-d sequence")
        if len(pos) != len(self.internal):
            raise ValueError("positions and internal labels differ in length")
        for b in self.internal:
            if b not in LABELS:
                raise ValueError(f"internal label must be 'g' or 'e', got {b!r}")

    @property
    def size(self) -> int:
        return len(self.positions)


def antisymmetric_unit(positions) -> int:
    """Product of sgn(x_k - x_j) over all pairs j < k; 0 on any coincidence."""
    positions = np.asarray(positions, dtype=float)
    sign = 1
    for j in range(len(positions)):
        for k in range(j + 1, len(positions)):
            d = positions[k] - positions[j]
            if d == 0.0:
                return 0
            if d < 0:
                sign = -sign
    return sign


def slater_determinant(orbitals: Sequence[Callable], positions) -> complex:
    """(1/sqrt(N!)) det phi_n(x_k) for N spinless one-particle functions."""
    positions = np.asarray(positions, dtype=float)
    N = len(orbitals)
    if len(positions) != N:
        raise ValueError(f"{N} orbitals but {len(positions)} positions")
    mat = np.array([[orb(x) for x in positions] for orb in orbitals], dtype=complex)
    return complex(np.linalg.det(mat) / math.sqrt(math.factorial(N)))


def map_fermi_to_bose(fermi_value: complex, positions) -> complex:
    """Multiply a fermionic amplitude by the antisymmetric unit function."""
    return antisymmetric_unit(positions) * fermi_value


def spinor_slater(spinors: Sequence[SpinorOrbital],
                  config: ParticleConfiguration) -> complex:
    """Generalized Slater amplitude <x_1 b_1, ..., x_N b_N | Psi_F>.

    Column k of the determinant uses the b_k component of every spinor:
    (1/sqrt(N!)) det phi_n^{(b_k)}(x_k).
    """
    N = len(spinors)
    if config.size != N:
        raise ValueError(f"{N} spinors but configuration of size {config.size}")
    if N > MAX_PARTICLES:
        raise ValueError(f"direct determinant evaluation supports N <= {MAX_PARTICLES}")
    mat = np.array(
        [[orb.component(b)(x) for x, b in zip(config.positions, config.internal)]
         for orb in spinors],
        dtype=complex,
    )
    return complex(np.linalg.det(mat) / math.sqrt(math.factorial(N)))


def spinor_bose_amplitude(spinors: Sequence[SpinorOrbital],
                          config: ParticleConfiguration) -> complex:
    """Bosonic amplitude: antisymmetric unit function times the generalized
    Slater amplitude.  Zero at coincident positions by convention."""
    return antisymmetric_unit(config.positions) * spinor_slater(spinors, config)


def density(orbitals: Sequence[Callable], x):
    """Single-particle density sum_n |phi_n(x)|^2 of an orthonormal set;
    identical for the free fermions and the mapped bosons."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    for orb in orbitals:
        out = out + np.abs(np.asarray(orb(x), dtype=complex)) ** 2
    return out if out.ndim else float(out)


_SIGMA = {
    # basis order (g, e); sigma_Z = |e><e| - |g><g|
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, 1j], [-1j, 0.0]], dtype=complex),
    "Z": np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex),
}


def pauli(op_name: str, particle: int | None = None) -> np.ndarray:
    """Pauli operator; 2x2 one-particle matrix, or the 4x4 embedding acting
    on particle 1 or 2 of a pair (basis order gg, ge, eg, ee)."""
    if op_name not in _SIGMA:
        raise ValueError(f"Pauli name must be one of X, Y, Z, got {op_name!r}")
    sig = _SIGMA[op_name]
    if particle is None:
        return sig.copy()
    if particle == 1:
        return np.kron(sig, np.eye(2))
    if particle == 2:
        return np.kron(np.eye(2), sig)
    raise ValueError(f"particle index must be 1 or 2, got {particle}")


def spin_half(axis: str, particle: int | None = None) -> np.ndarray:
    """Spin-1/2 component S = sigma/2."""
    return pauli(axis, particle) / 2.0


def _ket(name: str) -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[TWO_BODY_BASIS.index(name)] = 1.0
    return v


def singlet_triplet_projectors() -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto the two-particle singlet and triplet subspaces,
    built from the outer products of |->, and {|gg>, |ee>, |+>}."""
    minus = (_ket("eg") - _ket("ge")) / math.sqrt(2.0)
    plus = (_ket("eg") + _ket("ge")) / math.sqrt(2.0)
    P_s = np.outer(minus, minus.conj())
    P_t = sum(np.outer(v, v.conj()) for v in (_ket("gg"), _ket("ee"), plus))
    return P_s, P_t


def singlet_projector_from_spins() -> np.ndarray:
    """Independent construction of the singlet projector, 1/4 - S_1 . S_2."""
    S1dotS2 = sum(spin_half(a, 1) @ spin_half(a, 2) for a in "XYZ")
    return 0.25 * np.eye(4, dtype=complex) - S1dotS2


def collision_plane_wave(k: float, kp: float, b: str, bp: str,
                         x1: float, x2: float) -> np.ndarray:
    """Exchange-collision plane-wave amplitude in the sector x_1 < x_2.

    Returns the 4-component internal amplitude (basis gg, ge, eg, ee) of
    e^{ikx_1} e^{ik'x_2} |b b'> - e^{ik'x_1} e^{ikx_2} |b' b>: the particles
    swap momentum and internal state with a hard-core minus sign.
    """
    if b not in LABELS or bp not in LABELS:
        raise ValueError(f"internal labels must be 'g' or 'e', got {b!r}, {bp!r}")
    if not x1 < x2:
        raise ValueError(f"sector violation: need x1 < x2, got x1={x1}, x2={x2}")
    out = np.zeros(4, dtype=complex)
    out[TWO_BODY_BASIS.index(b + bp)] += np.exp(1j * k * x1) * np.exp(1j * kp * x2)
    out[TWO_BODY_BASIS.index(bp + b)] -= np.exp(1j * kp * x1) * np.exp(1j * k * x2)
    return out
