"""Statevector simulation of ADAPT-VQE for the ELM on ``N`` qubits.

Every pool generator is a sum of at most two commuting Pauli strings, each
squaring to the identity, so ``exp(i theta A)`` is applied exactly as a
product of ``cos + i sin P`` factors without building any matrix
exponential.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np
from scipy.optimize import minimize

from .hamiltonians import ModelParams, elm_qubit
from .spin import PauliString, QubitSpace

log = logging.getLogger(__name__)

ONE_BODY = ("Gplus", "Gminus", "G0")
TWO_BODY = ("Tplus", "Tminus", "Uplus", "Uminus", "Vplus", "Vminus", "V0")

# (coefficient, axes) terms of each generator; axes are for sites (j, k), j < k
_TERMS = {
    "Gplus": [(1.0, "x")],
    "Gminus": [(1.0, "y")],
    "G0": [(1.0, "z")],
    "Tplus": [(0.5, "xx"), (-0.5, "yy")],
    "Tminus": [(0.5, "xy"), (0.5, "yx")],
    "Uplus": [(0.5, "xx"), (0.5, "yy")],
    "Uminus": [(0.5, "yx"), (-0.5, "xy")],
    "Vplus": [(1.0, "xz")],
    "Vminus": [(1.0, "yz")],
    "V0": [(1.0, "zz")],
}

_LABELS = {
    "Gplus": "G+",
    "Gminus": "G-",
    "G0": "G0",
    "Tplus": "T+",
    "Tminus": "T-",
    "Uplus": "U+",
    "Uminus": "U-",
    "Vplus": "V+",
    "Vminus": "V-",
    "V0": "V0",
}


@dataclass
class PoolOperator:
    """Hermitian pool generator ``A = sum_k c_k P_k`` on one or two sites."""

    kind: str
    sites: tuple
    terms: list = field(repr=False)

    @property
    def label(self) -> str:
        return f"{_LABELS[self.kind]}({','.join(map(str, self.sites))})"

    def apply(self, psi):
        out = np.zeros_like(psi)
        for c, p in self.terms:
            out += c * p.apply(psi)
        return out

    def expi(self, theta: float, psi: np.ndarray) -> np.ndarray:
        """``exp(i theta A) psi``; the string terms commute and square to one."""
        for c, p in self.terms:
            psi = np.cos(c * theta) * psi + 1j * np.sin(c * theta) * p.apply(psi)
        return psi

    def matrix(self) -> np.ndarray:
        return sum(c * p.matrix() for c, p in self.terms)


def build_pool(N: int) -> list[PoolOperator]:
    """Ordered pool: one-body kinds per site, then two-body kinds per pair ``j < k``."""
    space = QubitSpace(N)
    pool = []
    for kind in ONE_BODY:
        for i in range(1, N + 1):
            terms = [(c, PauliString([i], ax, space)) for c, ax in _TERMS[kind]]
            pool.append(PoolOperator(kind, (i,), terms))
    for kind in TWO_BODY:
        for j, k in combinations(range(1, N + 1), 2):
            terms = [(c, PauliString([j, k], ax, space)) for c, ax in _TERMS[kind]]
            pool.append(PoolOperator(kind, (j, k), terms))
    assert len(pool) == 3 * N + 7 * comb(N, 2)
    return pool


def reference_state(params: ModelParams, H: np.ndarray | None = None) -> np.ndarray:
    """Computational basis state of lowest energy expectation (lowest index on ties)."""
    if H is None:
        H = elm_qubit(params)
    diag = np.real(np.diag(H))
    index = int(np.flatnonzero(diag <= diag.min() + 1e-12)[0])
    psi = np.zeros(len(diag), dtype=complex)
    psi[index] = 1.0
    return psi


def gradient(state: np.ndarray, H: np.ndarray, A: PoolOperator, tol: float = 1e-12) -> float:
    """``i <n|[H, A]|n> = -2 Im <n|H A|n>`` for Hermitian ``H`` and ``A``."""
    if abs(np.linalg.norm(state) - 1.0) > 1e-10:
        raise ValueError("state must be normalised")
    Hpsi = H @ state
    Apsi = A.apply(state)
    value = 1j * (np.vdot(Hpsi, Apsi) - np.vdot(Apsi, Hpsi))
    if abs(value.imag) > tol * max(1.0, abs(value.real)):
        raise ArithmeticError(f"gradient has imaginary part {value.imag:g}")
    return float(value.real)


def pool_gradients(state: np.ndarray, H: np.ndarray, pool: list[PoolOperator]) -> np.ndarray:
    Hpsi = H @ state
    return np.array([-2.0 * np.imag(np.vdot(Hpsi, A.apply(state))) for A in pool])


def apply_ansatz(reference: np.ndarray, steps, pool: list[PoolOperator]) -> np.ndarray:
    """``prod_k exp(i theta_k A_k) |ref>``, with step 1 applied first."""
    psi = np.asarray(reference, dtype=complex)
    for index, theta in steps:
        psi = pool[index].expi(theta, psi)
    return psi


def energy_and_gradient(thetas, ops, reference, H):
    """Energy of the ansatz and its exact gradient in all angles (reverse sweep)."""
    psi = reference
    for A, th in zip(ops, thetas):
        psi = A.expi(th, psi)
    sigma = H @ psi
    energy = float(np.real(np.vdot(psi, sigma)))
    grad = np.empty(len(ops))
    for k in range(len(ops) - 1, -1, -1):
        A, th = ops[k], thetas[k]
        grad[k] = -2.0 * np.imag(np.vdot(sigma, A.apply(psi)))
        psi = A.expi(-th, psi)
        sigma = A.expi(-th, sigma)
    return energy, grad


@dataclass
class AdaptConfig:
    max_iterations: int = 400
    gradient_stop: float = 1e-8
    relative_energy_stop: float | None = 1e-5
    optimizer_gtol: float = 1e-10
    optimizer_maxiter: int = 2000
    # escape from zero-gradient non-eigenstates by jittering the angles
    escape_attempts: int = 5
    escape_scale: float = 0.05
    variance_tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.gradient_stop <= 0:
            raise ValueError("gradient_stop must be positive")
        if self.relative_energy_stop is not None and self.relative_energy_stop <= 0:
            raise ValueError("relative_energy_stop must be positive")


@dataclass
class IterationRecord:
    iteration: int
    operator: str | None
    max_gradient: float
    energy: float
    relative_error: float | None
    note: str = ""


@dataclass
class AdaptTrace:
    params: ModelParams
    records: list[IterationRecord]
    steps: list[tuple[int, float]]
    state: np.ndarray
    stop_reason: str
    exact_energy: float | None = None

    @property
    def energy(self) -> float:
        return self.records[-1].energy

    @property
    def energy_per_particle(self) -> float:
        return self.energy / self.params.N

    @property
    def iterations(self) -> int:
        return self.records[-1].iteration

    def to_dict(self) -> dict:
        return {
            "N": self.params.N,
            "lambda": self.params.lam,
            "alpha": self.params.alpha,
            "exact_energy": self.exact_energy,
            "stop_reason": self.stop_reason,
            "records": [vars(r) for r in self.records],
            "steps": [[int(i), float(t)] for i, t in self.steps],
        }


def relative_error(energy: float, exact: float) -> float:
    # absolute error when the exact energy vanishes
    denom = abs(exact) if exact != 0 else 1.0
    return abs(energy - exact) / denom


def run(params: ModelParams, config: AdaptConfig | None = None, exact_energy: float | None = None) -> AdaptTrace:
    """Grow the ansatz one pool operator at a time, re-optimising every angle.

    ``exact_energy`` is the total (not per-particle) ground energy; when given,
    relative errors are recorded and used as a stopping criterion.
    """
    config = config or AdaptConfig()
    H = elm_qubit(params)
    pool = build_pool(params.N)
    ref = reference_state(params, H)
    psi = ref
    thetas = np.zeros(0)
    indices: list[int] = []
    energy = float(np.real(np.vdot(psi, H @ psi)))

    def record(it, label, gmax, note=""):
        rel = relative_error(energy, exact_energy) if exact_energy is not None else None
        records.append(IterationRecord(it, label, gmax, energy, rel, note))
        return rel

    records: list[IterationRecord] = []
    stop = "max_iterations"
    rng = np.random.default_rng(config.seed)
    escapes = 0
    pending_note = ""
    for it in range(config.max_iterations + 1):
        grads = pool_gradients(psi, H, pool)
        best = int(np.argmax(np.abs(grads)))  # argmax picks the lowest index on ties
        gmax = float(abs(grads[best]))
        if it == 0:
            rel = record(0, None, gmax)
        if exact_energy is not None and config.relative_energy_stop is not None:
            if rel < config.relative_energy_stop:
                stop = "relative_energy"
                break
        if gmax < config.gradient_stop:
            Hpsi = H @ psi
            variance = float(np.real(np.vdot(Hpsi, Hpsi))) - energy**2
            if variance <= config.variance_tol * max(1.0, energy**2) or escapes >= config.escape_attempts or not len(thetas):
                stop = "gradient"
                break
            # stationary for every pool direction but not an eigenstate
            escapes += 1
            thetas = thetas + config.escape_scale * rng.standard_normal(len(thetas))
            psi = apply_ansatz(ref, zip(indices, thetas), pool)
            energy = float(np.real(np.vdot(psi, H @ psi)))
            pending_note = f"escape {escapes} from stationary non-eigenstate (variance {variance:.3g})"
            log.info("iter %d: %s", it, pending_note)
            grads = pool_gradients(psi, H, pool)
            best = int(np.argmax(np.abs(grads)))
            gmax = float(abs(grads[best]))
        if it == config.max_iterations:
            break

        indices.append(best)
        ops = [pool[i] for i in indices]
        x0 = np.append(thetas, 0.0)
        res = minimize(
            energy_and_gradient,
            x0,
            args=(ops, ref, H),
            jac=True,
            method="BFGS",
            options={"gtol": config.optimizer_gtol, "maxiter": config.optimizer_maxiter},
        )
        note = "; ".join(n for n in (pending_note, "" if res.success else f"optimizer: {res.message}") if n)
        pending_note = ""
        if res.fun <= energy + 1e-12 or not np.isfinite(energy):
            thetas = res.x
        else:
            # keep the previous optimum with the new angle at zero
            thetas = x0
            note = (note + "; " if note else "") + "optimizer raised the energy, step discarded"
        psi = apply_ansatz(ref, zip(indices, thetas), pool)
        energy = float(np.real(np.vdot(psi, H @ psi)))
        rel = record(it + 1, pool[best].label, gmax, note)
        log.debug("iter %d %s |g|=%.3e E=%.10f", it + 1, pool[best].label, gmax, energy)

    return AdaptTrace(params, records, list(zip(indices, map(float, thetas))), psi, stop, exact_energy)
