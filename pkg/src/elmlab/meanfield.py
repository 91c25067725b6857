"""Large-N energy surface and phase lines of the ELM."""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Phase(Enum):
    SYMMETRIC = 0
    BROKEN = 1


@dataclass(frozen=True)
class PhaseLabel:
    phase: Phase
    coexistence: bool = False

    @property
    def label(self) -> int:
        return self.phase.value


@dataclass(frozen=True)
class SurfacePoint:
    beta: float
    energy_per_particle: float


def energy_surface(lam, alpha, beta):
    """Mean-field energy per particle as a function of the deformation ``beta``.

    Vectorised over ``beta``.
    """
    beta = np.asarray(beta, dtype=float)
    b2 = beta * beta
    bracket = b2 * (1 - (1 + alpha**2) * lam) - 4 * alpha * lam * beta + (1 - 5 * lam)
    return b2 / (1 + b2) ** 2 * bracket


def critical_lambda(alpha):
    return 1.0 / (5.0 + np.asarray(alpha, dtype=float) ** 2)


def spinodal_lambda(alpha):
    a2 = np.asarray(alpha, dtype=float) ** 2
    return (a2 - np.sqrt(a2 * a2 + 10 * a2 + 16) + 6) / (a2 + 10)


def antispinodal_lambda(alpha):
    return np.full_like(np.asarray(alpha, dtype=float), 0.2)


def phase_lines(alphas) -> dict[str, np.ndarray]:
    alphas = np.asarray(alphas, dtype=float)
    return {
        "alpha": alphas,
        "lambda_s": spinodal_lambda(alphas),
        "lambda_c": critical_lambda(alphas),
        "lambda_as": antispinodal_lambda(alphas),
    }


def classify_point(lam: float, alpha: float) -> PhaseLabel:
    """Phase of ``(lam, alpha)``; points exactly on the critical line count as broken."""
    phase = Phase.SYMMETRIC if lam < critical_lambda(alpha) else Phase.BROKEN
    coexist = bool(alpha > 0 and spinodal_lambda(alpha) < lam < antispinodal_lambda(alpha))
    return PhaseLabel(phase, coexist)


def phase_label(lam: float, alpha: float) -> int:
    return classify_point(lam, alpha).label


def _golden_section(f, a, b, tol):
    invphi = (np.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def minimize_surface(lam, alpha, beta_max=5.0, step=1e-3, tol=1e-10) -> list[SurfacePoint]:
    """All local minima of the energy surface on ``[0, beta_max]``, lowest energy first.

    A dense scan brackets every minimum, which golden-section search then
    refines. The boundary ``beta = 0`` counts as a minimum when the surface
    does not decrease away from it.
    """
    f = lambda b: float(energy_surface(lam, alpha, b))
    grid = np.arange(0.0, beta_max + step / 2, step)
    vals = energy_surface(lam, alpha, grid)
    minima = []
    # the surface is O(beta^2) at the origin, so compare against the curvature
    curvature = 1 - 5 * lam
    if curvature > 0 or (curvature == 0 and vals[1] >= vals[0]):
        minima.append(SurfacePoint(0.0, 0.0))
    for k in range(1, len(grid) - 1):
        if vals[k] <= vals[k - 1] and vals[k] < vals[k + 1]:
            b = _golden_section(f, grid[k - 1], grid[k + 1], tol)
            if b > tol * 10:
                minima.append(SurfacePoint(b, f(b)))
    return sorted(minima, key=lambda p: p.energy_per_particle)
