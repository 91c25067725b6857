"""Collective-spin and qubit-register linear algebra.

Conventions
-----------
Collective basis ``|S, M>`` with ``S = N/2`` is ordered by increasing ``M``,
so index 0 is ``M = -S``.

Qubit basis states are ordered by their binary value with qubit 1 as the
most significant bit. Bit value 1 is ``|up>`` (``sigma_z = +1``) and bit 0 is
``|down>``; index 0 is therefore ``|down ... down>``.

Hamiltonians are real symmetric ``float64`` arrays. Complex numbers only
appear in state vectors and unitaries.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

SYMMETRY_TOL = 1e-14

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    # row 0 is |up> (bit 1) for a single qubit, see ``_single_qubit``
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


@dataclass(frozen=True)
class CollectiveBasis:
    """The ``S = N/2`` multiplet of ``N`` spin-1/2 particles."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")

    @property
    def S(self) -> float:
        return self.N / 2

    @property
    def dim(self) -> int:
        return self.N + 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.dim) - self.S


@dataclass(frozen=True)
class QubitSpace:
    """Register of ``N`` qubits, dimension ``2**N``."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")

    @property
    def dim(self) -> int:
        return 2**self.N

    def bit(self, site: int) -> int:
        """Bit mask of 1-based ``site`` (site 1 is the most significant bit)."""
        if not 1 <= site <= self.N:
            raise ValueError(f"qubit index {site} out of range 1..{self.N}")
        return 1 << (self.N - site)

    def basis_state(self, spins) -> np.ndarray:
        """Product state from a sequence of ``'u'``/``'d'`` (or 1/0) per site."""
        spins = list(spins)
        if len(spins) != self.N:
            raise ValueError(f"need {self.N} spins, got {len(spins)}")
        index = 0
        for s in spins:
            up = s in ("u", "U", "up", 1, True, "↑")
            index = (index << 1) | int(up)
        psi = np.zeros(self.dim, dtype=complex)
        psi[index] = 1.0
        return psi


def collective_operator(kind: str, basis: CollectiveBasis | int) -> np.ndarray:
    """Matrix of a collective spin operator in the ``M``-ordered basis.

    ``kind`` is one of ``Sz``, ``Splus``, ``Sminus``, ``Sx`` or ``Sy``. All are
    returned as real arrays except ``Sy``, which is returned as a complex
    Hermitian array.
    """
    if not isinstance(basis, CollectiveBasis):
        basis = CollectiveBasis(basis)
    S, m = basis.S, basis.m_values
    if kind == "Sz":
        return np.diag(m).astype(float)
    # <S, M+1 | S+ | S, M> = sqrt(S(S+1) - M(M+1))
    splus = np.diag(np.sqrt(S * (S + 1) - m[:-1] * (m[:-1] + 1)), k=-1)
    if kind == "Splus":
        return splus
    if kind == "Sminus":
        return splus.T.copy()
    if kind == "Sx":
        return 0.5 * (splus + splus.T)
    if kind == "Sy":
        return -0.5j * (splus - splus.T)
    raise ValueError(f"unknown collective operator {kind!r}")


def collective_ops(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Convenience pair ``(Sz, Sx)`` for ``N`` particles."""
    basis = CollectiveBasis(N)
    return collective_operator("Sz", basis), collective_operator("Sx", basis)


def _single_qubit(axis: str) -> np.ndarray:
    # Reorder so that row/col 0 is bit 0 = |down>.
    p = _PAULI[axis]
    return p[::-1, ::-1]


def pauli_string(sites, axes, space: QubitSpace | int) -> np.ndarray:
    """Tensor product of Pauli matrices on ``sites`` (1-based), identity elsewhere.

    Returns a real array when the string has an even number of ``y`` factors,
    otherwise a complex array.
    """
    if not isinstance(space, QubitSpace):
        space = QubitSpace(space)
    sites, axes = list(sites), list(axes)
    if len(sites) != len(axes) or len(sites) not in (1, 2):
        raise ValueError("need one or two (site, axis) pairs")
    if len(set(sites)) != len(sites):
        raise ValueError(f"duplicate qubit index in {sites}")
    for s in sites:
        space.bit(s)
    factors = [np.eye(2, dtype=complex)] * space.N
    for s, a in zip(sites, axes):
        if a not in _PAULI:
            raise ValueError(f"unknown Pauli axis {a!r}")
        factors[s - 1] = _single_qubit(a)
    mat = reduce(np.kron, factors)
    if axes.count("y") % 2 == 0:
        return mat.real.copy()
    return mat


class PauliString:
    """Pauli string acting on computational basis states as a signed permutation.

    ``P |b> = phase(b) |b ^ flip>``, so ``(P psi)[c] = phase(c ^ flip) psi[c ^ flip]``.
    """

    def __init__(self, sites, axes, space: QubitSpace):
        self.sites = tuple(sites)
        self.axes = tuple(axes)
        idx = np.arange(space.dim)
        flip = 0
        phase = np.ones(space.dim, dtype=complex)
        for s, a in zip(sites, axes):
            bit = space.bit(s)
            up = (idx & bit) != 0
            if a == "x":
                flip |= bit
            elif a == "y":
                # sigma_y |down> = -i |up>, sigma_y |up> = i |down>
                flip |= bit
                phase *= np.where(up, 1j, -1j)
            elif a == "z":
                phase *= np.where(up, 1.0, -1.0)
            else:
                raise ValueError(f"unknown Pauli axis {a!r}")
        self.perm = idx ^ flip
        self.phase = phase[self.perm]

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.phase * psi[self.perm]

    def matrix(self) -> np.ndarray:
        dim = len(self.perm)
        m = np.zeros((dim, dim), dtype=complex)
        m[np.arange(dim), self.perm] = self.phase
        return m


def is_symmetric(H: np.ndarray, tol: float = SYMMETRY_TOL) -> bool:
    H = np.asarray(H)
    return H.ndim == 2 and H.shape[0] == H.shape[1] and np.max(np.abs(H - H.T), initial=0.0) <= tol


def eigh(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric matrix."""
    H = np.asarray(H)
    if np.iscomplexobj(H):
        raise ValueError("expected a real symmetric matrix")
    scale = max(1.0, float(np.max(np.abs(H), initial=0.0)))
    if not is_symmetric(H, SYMMETRY_TOL * scale * 10):
        raise ValueError("matrix is not symmetric")
    return np.linalg.eigh(H)


def propagator(H: np.ndarray, t: float, decomposition=None) -> np.ndarray:
    """Exact time-evolution operator ``exp(-i H t)``.

    A precomputed ``(eigenvalues, eigenvectors)`` pair may be passed to avoid
    repeated diagonalisation.
    """
    w, V = decomposition if decomposition is not None else eigh(H)
    return (V * np.exp(-1j * w * t)) @ V.T


def unitarity_error(U: np.ndarray) -> float:
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def normalize(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return psi / np.linalg.norm(psi)
