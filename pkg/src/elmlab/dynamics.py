"""Exact and first-order Trotter time evolution of the ELM, with observables.

Time is dimensionless. The Trotter step evolves under ``H1``, then ``H2``,
then ``H3``::

    U_step = exp(-i H3 dt) exp(-i H2 dt) exp(-i H1 dt)
    H1 = gz Sz + gzz Sz^2,  H2 = gx Sx + gxx Sx^2,  H3 = gxz (Sx + Sz)^2

and the constant ``g0`` enters as the global phase ``exp(-i g0 t)`` so that
``U_T -> U`` entrywise as the number of steps grows.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .hamiltonians import ModelParams, compact_coefficients, qubit_spin_ops
from .spin import CollectiveBasis, PauliString, QubitSpace, collective_ops, eigh

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class TrotterSplit:
    H1: np.ndarray
    H2: np.ndarray
    H3: np.ndarray
    g0: float

    @property
    def terms(self):
        return (self.H1, self.H2, self.H3)

    def total(self) -> np.ndarray:
        return self.H1 + self.H2 + self.H3 + self.g0 * np.eye(self.H1.shape[0])


def spin_ops(N: int, representation: str):
    if representation == "collective":
        return collective_ops(N)
    if representation == "qubit":
        return qubit_spin_ops(N)
    raise ValueError(f"unknown representation {representation!r}")


def trotter_split(params: ModelParams, representation: str = "collective") -> TrotterSplit:
    c = compact_coefficients(params)
    Sz, Sx = spin_ops(params.N, representation)
    Sxz = Sx + Sz
    return TrotterSplit(
        H1=c.gz * Sz + c.gzz * (Sz @ Sz),
        H2=c.gx * Sx + c.gxx * (Sx @ Sx),
        H3=c.gxz * (Sxz @ Sxz),
        g0=c.g0,
    )


class Evolver:
    """Propagators for one parameter point, with cached eigendecompositions."""

    def __init__(self, params: ModelParams, representation: str = "collective"):
        self.params = params
        self.representation = representation
        self.split = trotter_split(params, representation)
        self.H = self.split.total()
        self._exact = eigh(self.H)
        self._parts = [eigh(h) for h in self.split.terms]

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def exact(self, t: float) -> np.ndarray:
        w, V = self._exact
        return (V * np.exp(-1j * w * t)) @ V.T

    def trotter_step(self, dt: float) -> np.ndarray:
        U = np.eye(self.dim, dtype=complex)
        for w, V in self._parts:
            U = ((V * np.exp(-1j * w * dt)) @ V.T) @ U
        return U

    def trotter(self, t: float, n_steps: int) -> np.ndarray:
        if n_steps < 1:
            raise ValueError("number of Trotter steps must be at least 1")
        step = self.trotter_step(t / n_steps)
        return np.exp(-1j * self.split.g0 * t) * np.linalg.matrix_power(step, n_steps)

    def propagator(self, t: float, kind="exact") -> np.ndarray:
        n = trotter_steps_of(kind)
        return self.exact(t) if n is None else self.trotter(t, n)

    def evolve(self, phi0: np.ndarray, times, kind="exact") -> np.ndarray:
        """States ``U(t) phi0`` for every ``t``, shape ``(len(times), dim)``."""
        times = np.asarray(times, dtype=float)
        phi0 = np.asarray(phi0, dtype=complex)
        n = trotter_steps_of(kind)
        if n is None:
            w, V = self._exact
            coeffs = V.T @ phi0
            return (np.exp(-1j * np.outer(times, w)) * coeffs) @ V.T
        return np.array([self.trotter(t, n) @ phi0 for t in times])


def trotter_steps_of(kind) -> int | None:
    """Parse a propagator kind: ``"exact"``, an int, or ``"trotter:<n>"``/``("trotter", n)``."""
    if kind is None or kind == "exact":
        return None
    if isinstance(kind, (int, np.integer)):
        n = int(kind)
    elif isinstance(kind, tuple) and kind[0] == "trotter":
        n = int(kind[1])
    elif isinstance(kind, str) and kind.startswith("trotter"):
        n = int(kind.split(":")[1])
    else:
        raise ValueError(f"unknown propagator kind {kind!r}")
    if n < 1:
        raise ValueError("number of Trotter steps must be at least 1")
    return n


def exact_propagator(params: ModelParams, t: float, representation="collective") -> np.ndarray:
    return Evolver(params, representation).exact(t)


def trotter_propagator(params: ModelParams, t: float, n_steps: int, representation="collective") -> np.ndarray:
    return Evolver(params, representation).trotter(t, n_steps)


def trotter_fidelity(params, t, n_steps, phi0, representation="qubit", mode="overlap", evolver=None) -> float:
    """Fidelity of the Trotterised evolution for one initial state.

    ``mode="overlap"`` gives ``|<phi0| U_T^dagger U |phi0>|^2``, the overlap of the
    exactly and approximately evolved states. ``mode="verbatim"`` gives
    ``|<phi0| U_T U |phi0>|^2`` (no adjoint), which is not 1 at ``t > 0`` even
    for an exact split.
    """
    ev = evolver or Evolver(params, representation)
    phi0 = np.asarray(phi0, dtype=complex)
    if abs(np.linalg.norm(phi0) - 1) > 1e-12:
        raise ValueError("initial state must be normalised")
    UT, U = ev.trotter(t, n_steps), ev.exact(t)
    if mode == "overlap":
        amp = np.vdot(UT @ phi0, U @ phi0)
    elif mode == "verbatim":
        amp = np.vdot(phi0, UT @ (U @ phi0))
    else:
        raise ValueError(f"unknown fidelity mode {mode!r}")
    return float(abs(amp) ** 2)


def gate_budget(N: int, n_steps: int, f_single: float = 0.999999, f_ms: float = 0.999) -> float:
    """Multiplicative gate-fidelity estimate ``[(f_s)^(6N) (f_MS)^3]^n_T``."""
    if not (0 < f_single <= 1 and 0 < f_ms <= 1):
        raise ValueError("gate fidelities must lie in (0, 1]")
    if n_steps < 0:
        raise ValueError("number of Trotter steps must be non-negative")
    return float((f_single ** (6 * N) * f_ms**3) ** n_steps)


@dataclass
class FidelityReport:
    params: ModelParams
    times: np.ndarray
    n_steps: list
    fidelity: np.ndarray  # shape (len(n_steps), len(times))
    gate_budget: dict = field(default_factory=dict)
    mode: str = "overlap"

    def to_dict(self) -> dict:
        return {
            "N": self.params.N,
            "lambda": self.params.lam,
            "alpha": self.params.alpha,
            "mode": self.mode,
            "times": [float(t) for t in self.times],
            "trotter_steps": [int(n) for n in self.n_steps],
            "fidelity": [[float(f) for f in row] for row in self.fidelity],
            "gate_budget": {str(k): v for k, v in self.gate_budget.items()},
        }


def fidelity_report(params, phi0, times, n_steps_list, mode="overlap", f_single=0.999999, f_ms=0.999):
    ev = Evolver(params, "qubit" if len(phi0) == 2**params.N and params.N > 1 else "collective")
    times = np.asarray(times, dtype=float)
    fid = np.array([[trotter_fidelity(params, t, n, phi0, mode=mode, evolver=ev) for t in times] for n in n_steps_list])
    budget = {n: gate_budget(params.N, n, f_single, f_ms) for n in n_steps_list}
    return FidelityReport(params, times, list(n_steps_list), fid, budget, mode)


@dataclass
class DynamicsTrace:
    observable: str
    initial_state: str
    times: np.ndarray
    values: np.ndarray


def time_grid(t_max: float = 4.0, dt: float = 0.04) -> np.ndarray:
    n = int(round(t_max / dt))
    return np.arange(n + 1) * dt


def default_sz_state(N: int) -> np.ndarray:
    """``(|M=-N/2> + |M=0> + |M=N/2>) / sqrt(3)`` in the collective basis (even ``N``)."""
    if N % 2:
        raise ValueError("the default S_z initial state needs an even N")
    basis = CollectiveBasis(N)
    psi = np.zeros(basis.dim, dtype=complex)
    psi[[0, N // 2, N]] = 1 / np.sqrt(3)
    return psi


def neel_state(N: int) -> np.ndarray:
    """``|up down up down ...>`` on ``N`` qubits."""
    return QubitSpace(N).basis_state(["u" if k % 2 == 0 else "d" for k in range(N)])


def sz_trace(params, phi0=None, times=None, kind="exact", evolver=None) -> DynamicsTrace:
    """``<S_z>(t)`` evolved in the collective basis."""
    label = "default" if phi0 is None else "custom"
    phi0 = default_sz_state(params.N) if phi0 is None else np.asarray(phi0, dtype=complex)
    times = time_grid() if times is None else np.asarray(times, dtype=float)
    ev = evolver or Evolver(params, "collective")
    states = ev.evolve(phi0, times, kind)
    m = CollectiveBasis(params.N).m_values
    values = np.abs(states) ** 2 @ m
    return DynamicsTrace("sz", label, times, values)


def _expectation_rows(states, p: PauliString) -> np.ndarray:
    return np.real(np.sum(states.conj() * (states[:, p.perm] * p.phase), axis=1))


def correlation_trace(params, nu, i, j, phi0=None, times=None, kind="exact", evolver=None) -> DynamicsTrace:
    """``C_nu(i, j, t) = <s_i s_j> - <s_i><s_j>`` for Pauli axis ``nu`` on qubits ``i != j``."""
    if i == j:
        raise ValueError("correlation needs two distinct qubits")
    label = "neel" if phi0 is None else "custom"
    phi0 = neel_state(params.N) if phi0 is None else np.asarray(phi0, dtype=complex)
    times = time_grid() if times is None else np.asarray(times, dtype=float)
    ev = evolver or Evolver(params, "qubit")
    states = ev.evolve(phi0, times, kind)
    values = correlations_from_states(states, params.N, [(nu, i, j)])[0]
    return DynamicsTrace(f"c{nu}({i},{j})", label, times, values)


def correlation_index(N: int) -> list[tuple[str, int, int]]:
    """All ``(axis, i, j)`` with ``i < j``, axis-major: ``3 N (N-1) / 2`` entries."""
    return [(nu, i, j) for nu in AXES for i, j in combinations(range(1, N + 1), 2)]


def correlations_from_states(states: np.ndarray, N: int, index) -> np.ndarray:
    """Connected two-point functions for each ``(axis, i, j)`` in ``index``.

    ``states`` has shape ``(T, 2**N)``; the result has shape ``(len(index), T)``.
    """
    space = QubitSpace(N)
    cache = {}

    def single(nu, i):
        if (nu, i) not in cache:
            p = PauliString([i], nu, space)
            cache[nu, i] = _expectation_rows(states, p)
        return cache[nu, i]

    out = np.empty((len(index), len(states)))
    for r, (nu, i, j) in enumerate(index):
        pair = PauliString([i, j], nu + nu, space)
        both = _expectation_rows(states, pair)
        out[r] = both - single(nu, i) * single(nu, j)
    return out


def all_correlations(params, phi0=None, times=None, kind="exact", evolver=None) -> np.ndarray:
    """The ``3 N (N-1) / 2`` distinct correlation traces, shape ``(n_corr, T)``."""
    phi0 = neel_state(params.N) if phi0 is None else np.asarray(phi0, dtype=complex)
    times = time_grid() if times is None else np.asarray(times, dtype=float)
    ev = evolver or Evolver(params, "qubit")
    states = ev.evolve(phi0, times, kind)
    return correlations_from_states(states, params.N, correlation_index(params.N))
