"""Exact diagonalisation along parameter paths, ground-state order parameter."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .hamiltonians import QUBIT_CAP, ModelParams, elm_collective, elm_qubit
from .spin import CollectiveBasis, collective_operator, eigh

DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SpectrumResult:
    params: ModelParams
    energies_per_particle: np.ndarray
    ground_vector: np.ndarray
    degeneracy_tolerance: float = DEGENERACY_TOL

    @property
    def ground_energy(self) -> float:
        return float(self.energies_per_particle[0])


class PathKind(Enum):
    PATH1 = 1
    PATH2 = 2
    PATH3 = 3
    CUSTOM = 0


@dataclass(frozen=True)
class PathSpec:
    """Straight line through the ``(lambda, alpha)`` plane.

    ``PATH1``: alpha = 0, lambda in [0, 1]. ``PATH2``: alpha = 1/sqrt(2),
    lambda in [0, 1]. ``PATH3``: lambda = 1, alpha in [0, 1].
    ``CUSTOM`` uses ``start``/``stop`` as ``(lambda, alpha)`` endpoints.
    """

    kind: PathKind
    samples: int = 11
    start: tuple[float, float] | None = None
    stop: tuple[float, float] | None = None

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("a path needs at least two samples")
        if self.kind is PathKind.CUSTOM and (self.start is None or self.stop is None):
            raise ValueError("custom paths need start and stop points")

    def points(self) -> np.ndarray:
        """Array of shape ``(samples, 2)`` with columns ``(lambda, alpha)``."""
        s = np.linspace(0.0, 1.0, self.samples)
        if self.kind is PathKind.PATH1:
            return np.column_stack([s, np.zeros_like(s)])
        if self.kind is PathKind.PATH2:
            return np.column_stack([s, np.full_like(s, 1 / np.sqrt(2))])
        if self.kind is PathKind.PATH3:
            return np.column_stack([np.ones_like(s), s])
        a, b = np.asarray(self.start, float), np.asarray(self.stop, float)
        return a + s[:, None] * (b - a)

    def control_values(self) -> np.ndarray:
        pts = self.points()
        if self.kind is PathKind.PATH3:
            return pts[:, 1]
        if self.kind is PathKind.CUSTOM:
            return np.linspace(0.0, 1.0, self.samples)
        return pts[:, 0]


def hamiltonian(params: ModelParams, representation: str = "collective") -> np.ndarray:
    if representation == "collective":
        return elm_collective(params)
    if representation == "qubit":
        return elm_qubit(params, cap=QUBIT_CAP)
    raise ValueError(f"unknown representation {representation!r}")


def solve(params: ModelParams, representation: str = "collective") -> SpectrumResult:
    w, V = eigh(hamiltonian(params, representation))
    return SpectrumResult(params, w / params.N, V[:, 0].astype(complex))


def ground_energy(params: ModelParams, representation: str = "collective") -> float:
    """Ground-state energy per particle."""
    return float(eigh(hamiltonian(params, representation))[0][0] / params.N)


def order_parameter(params: ModelParams, tol: float = DEGENERACY_TOL) -> float:
    """``(<Sz> + N/2) / N`` in the ground state.

    A degenerate ground space is handled by averaging ``<Sz>`` over an
    orthonormal basis of it (the normalised trace of the projected ``Sz``),
    which does not depend on the basis the eigensolver happens to return.
    """
    basis = CollectiveBasis(params.N)
    w, V = eigh(elm_collective(params))
    scale = max(1.0, abs(w[0]))
    deg = int(np.sum(w - w[0] <= tol * scale))
    Sz = collective_operator("Sz", basis)
    block = V[:, :deg]
    sz_mean = np.trace(block.T @ Sz @ block) / deg
    return float((sz_mean + params.N / 2) / params.N)


def spectrum_along_path(path: PathSpec, N: int, level_count: int = 4, representation="collective"):
    """Lowest ``level_count`` energies per particle plus order parameter at each path sample.

    Returns ``(control_values, energies, order_parameters)`` with ``energies``
    of shape ``(samples, level_count)``.
    """
    controls = path.control_values()
    energies, orders = [], []
    for lam, alpha in path.points():
        p = ModelParams(N, float(np.clip(lam, 0, 1)), float(alpha))
        res = solve(p, representation)
        energies.append(res.energies_per_particle[:level_count])
        orders.append(order_parameter(p))
    return controls, np.array(energies), np.array(orders)
