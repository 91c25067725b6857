"""Lipkin and extended Lipkin (ELM) Hamiltonians.

Collective form (dimension ``N+1``)::

    H_L  = (1 - lam) (S + Sz) - (4 lam / N) Sx^2
    H_EL = H_L - (lam / N) [alpha^2 (S + Sz)^2 - 2 alpha (Sx (S + Sz) + (S + Sz) Sx)]

The qubit form (dimension ``2**N``) is the same operator with
``Sx = sum_i sigma_x^i / 2``, ``Sz = sum_i sigma_z^i / 2`` and ``S = N/2``
expanded into one- and two-site Pauli strings.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .spin import CollectiveBasis, QubitSpace, collective_operator, pauli_string

QUBIT_CAP = 12


@dataclass(frozen=True)
class ModelParams:
    """One ELM instance: particle number and the two control parameters."""

    N: int
    lam: float
    alpha: float = 0.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam!r}")
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha!r}")


@dataclass(frozen=True)
class CompactCoefficients:
    """Coefficients of ``g0 + gz Sz + gx Sx + gzz Sz^2 + gxx Sx^2 + gxz (Sx+Sz)^2``."""

    g0: float
    gz: float
    gx: float
    gzz: float
    gxx: float
    gxz: float


@dataclass(frozen=True)
class IbaParams:
    rho: float
    chi: float


def lipkin_collective(params: ModelParams) -> np.ndarray:
    return elm_collective(ModelParams(params.N, params.lam, 0.0))


def elm_collective(params: ModelParams) -> np.ndarray:
    basis = CollectiveBasis(params.N)
    N, lam, a = params.N, params.lam, params.alpha
    Sz = collective_operator("Sz", basis)
    Sx = collective_operator("Sx", basis)
    A = basis.S * np.eye(basis.dim) + Sz
    H = (1 - lam) * A - (4 * lam / N) * (Sx @ Sx)
    if a != 0.0:
        H = H - (lam / N) * (a**2 * (A @ A) - 2 * a * (Sx @ A + A @ Sx))
    return 0.5 * (H + H.T)


def compact_coefficients(params: ModelParams) -> CompactCoefficients:
    N, lam, a = params.N, params.lam, params.alpha
    return CompactCoefficients(
        g0=(1 - lam) * N / 2 - lam * a**2 * N / 4,
        gz=1 - (1 + a**2) * lam,
        gx=2 * a * lam,
        gzz=-(a**2 + 2 * a) * lam / N,
        gxx=-(4 + 2 * a) * lam / N,
        gxz=2 * a * lam / N,
    )


def assemble_compact(coeffs: CompactCoefficients, Sz: np.ndarray, Sx: np.ndarray) -> np.ndarray:
    """Build the compact-form Hamiltonian from given ``Sz``/``Sx`` matrices."""
    I = np.eye(Sz.shape[0])
    Sxz = Sx + Sz
    return (
        coeffs.g0 * I
        + coeffs.gz * Sz
        + coeffs.gx * Sx
        + coeffs.gzz * (Sz @ Sz)
        + coeffs.gxx * (Sx @ Sx)
        + coeffs.gxz * (Sxz @ Sxz)
    )


def _check_cap(N: int, cap: int):
    if N > cap:
        raise ValueError(f"qubit representation limited to N <= {cap}, got N={N}")


def _sum_single(space, axis):
    return sum(pauli_string([i], [axis], space) for i in range(1, space.N + 1))


def _sum_pairs(space, a, b):
    total = np.zeros((space.dim, space.dim))
    for i, j in combinations(range(1, space.N + 1), 2):
        total = total + np.real(pauli_string([i, j], [a, b], space))
    return total


def lipkin_qubit(params: ModelParams, cap: int = QUBIT_CAP) -> np.ndarray:
    return elm_qubit(ModelParams(params.N, params.lam, 0.0), cap=cap)


def elm_qubit(params: ModelParams, cap: int = QUBIT_CAP) -> np.ndarray:
    """ELM Hamiltonian on ``N`` qubits as a sum of Pauli strings.

    Uses ``(sum_i s_i)^2 = N + 2 sum_{i<j} s_i s_j`` for each Pauli axis and
    ``sigma_x^i sigma_z^i + sigma_z^i sigma_x^i = 0`` for the mixed term.
    """
    N, lam, a = params.N, params.lam, params.alpha
    _check_cap(N, cap)
    space = QubitSpace(N)
    S = N / 2
    I = np.eye(space.dim)
    sz = _sum_single(space, "z")
    xx = _sum_pairs(space, "x", "x")

    # (1-lam)(S + Sz) - (4 lam/N) Sx^2
    H = (1 - lam) * (S * I + 0.5 * sz) - (lam / N) * (N * I + 2 * xx)
    if a != 0.0:
        sx = _sum_single(space, "x")
        zz = _sum_pairs(space, "z", "z")
        xz = _sum_pairs(space, "x", "z") + _sum_pairs(space, "z", "x")
        # (S + Sz)^2 = S^2 + N/4 + S sum sz + (1/2) sum_{i<j} zz
        a_sq = (S**2 + N / 4) * I + S * sz + 0.5 * zz
        # Sx (S+Sz) + (S+Sz) Sx = S sum sx + (1/2) sum_{i<j} (xz + zx)
        mixed = S * sx + 0.5 * xz
        H = H - (lam / N) * (a**2 * a_sq - 2 * a * mixed)
    return 0.5 * (H + H.T)


def qubit_spin_ops(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Collective ``(Sz, Sx)`` acting on the full qubit register."""
    space = QubitSpace(N)
    return 0.5 * _sum_single(space, "z"), 0.5 * _sum_single(space, "x")


def iba_to_elm(iba: IbaParams) -> tuple[float, float]:
    """Map IBA ``(rho, chi)`` to ELM ``(lambda, alpha)``."""
    return iba.rho, -iba.chi * np.sqrt(2.0 / 7.0)


def elm_to_iba(lam: float, alpha: float) -> IbaParams:
    return IbaParams(rho=lam, chi=-np.sqrt(7.0 / 2.0) * alpha)


def alpha_from_theta(theta: float) -> float:
    """``alpha = sqrt(2/3) sin(pi/3 - theta)``, the angle parametrisation of the phase diagram."""
    return np.sqrt(2.0 / 3.0) * np.sin(np.pi / 3 - theta)
