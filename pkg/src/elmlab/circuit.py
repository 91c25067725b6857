"""Digital-analog circuit for Trotterised ELM evolution on trapped ions.

Gate semantics:

* ``SQR(axis, q, theta) = exp(i theta/2 sigma_axis^q)``
* ``MS(theta) = exp(-i theta Sx^2)`` on the whole register

With ``W = R_y(phi)`` on every qubit, ``W Sx W^dagger = cos(phi) Sx + sin(phi) Sz``,
so a layer ``R_y^dagger(phi)``, ``MS``, ``R_y(phi)`` (in time order) evolves
under ``Sz^2`` for ``phi = pi/2`` and under ``(Sx + Sz)^2 / 2`` for
``phi = pi/4``. One Trotter step, in time order::

    R_z layer        exp(-i gz dt Sz)
    R_y^dag MS R_y   exp(-i gzz dt Sz^2)            (phi = pi/2)
    R_x layer        exp(-i gx dt Sx)
    MS               exp(-i gxx dt Sx^2)
    R_y^dag MS R_y   exp(-i gxz dt (Sx + Sz)^2)     (phi = pi/4, MS angle 2 gxz dt)

which is ``exp(-i H3 dt) exp(-i H2 dt) exp(-i H1 dt)`` with 6N single-qubit
rotations and three MS gates.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .dynamics import gate_budget
from .hamiltonians import ModelParams, compact_coefficients, qubit_spin_ops
from .spin import PauliString, QubitSpace

GENERATOR_VERSION = "elmlab-circuit/1"


class CircuitFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SQR:
    axis: str
    qubit: int
    theta: float

    def __post_init__(self):
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"bad rotation axis {self.axis!r}")
        if not np.isfinite(self.theta):
            raise ValueError("rotation angle must be finite")


@dataclass(frozen=True)
class MS:
    theta: float

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise ValueError("MS angle must be finite")


@dataclass
class CircuitProgram:
    n: int
    gates: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for g in self.gates:
            if isinstance(g, SQR) and not 1 <= g.qubit <= self.n:
                raise ValueError(f"qubit {g.qubit} out of range 1..{self.n}")

    def counts(self) -> tuple[int, int]:
        sqr = sum(isinstance(g, SQR) for g in self.gates)
        return sqr, len(self.gates) - sqr


@dataclass(frozen=True)
class ResourceEstimate:
    sqr_count: int
    ms_count: int
    fidelity: float


def _layer(axis, theta, n):
    return [SQR(axis, q, theta) for q in range(1, n + 1)]


def _rotated_ms(theta_ms, phi, n):
    return _layer("y", -phi, n) + [MS(theta_ms)] + _layer("y", phi, n)


def emit_trotter_circuit(params: ModelParams, t: float, n_steps: int) -> CircuitProgram:
    if n_steps < 1:
        raise ValueError("number of Trotter steps must be at least 1")
    c = compact_coefficients(params)
    n, dt = params.N, t / n_steps
    step = (
        _layer("z", -c.gz * dt, n)
        + _rotated_ms(c.gzz * dt, np.pi / 2, n)
        + _layer("x", -c.gx * dt, n)
        + [MS(c.gxx * dt)]
        + _rotated_ms(2 * c.gxz * dt, np.pi / 4, n)
    )
    meta = {
        "lambda": params.lam,
        "alpha": params.alpha,
        "t": t,
        "trotter_steps": n_steps,
        "g0": c.g0,
        "generator": GENERATOR_VERSION,
    }
    return CircuitProgram(n, step * n_steps, meta)


class _Simulator:
    def __init__(self, n):
        self.space = QubitSpace(n)
        self._paulis = {}
        _, Sx = qubit_spin_ops(n)
        self._ms = np.linalg.eigh(Sx @ Sx)

    def pauli(self, axis, q):
        key = (axis, q)
        if key not in self._paulis:
            self._paulis[key] = PauliString([q], axis, self.space)
        return self._paulis[key]

    def apply(self, gate, U):
        if isinstance(gate, SQR):
            p = self.pauli(gate.axis, gate.qubit)
            return np.cos(gate.theta / 2) * U + 1j * np.sin(gate.theta / 2) * (p.phase[:, None] * U[p.perm])
        if isinstance(gate, MS):
            w, V = self._ms
            return (V * np.exp(-1j * gate.theta * w)) @ (V.T @ U)
        raise CircuitFormatError(f"unknown gate {gate!r}")


def simulate_circuit(program: CircuitProgram) -> np.ndarray:
    """Unitary of the program, gates applied in list order."""
    sim = _Simulator(program.n)
    U = np.eye(2**program.n, dtype=complex)
    for gate in program.gates:
        U = sim.apply(gate, U)
    return U


def phase_aligned_distance(U: np.ndarray, V: np.ndarray) -> float:
    """``min_phi max|U - e^{i phi} V|``, with the phase fixed by the overlap ``tr(V^dag U)``."""
    overlap = np.vdot(V, U)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(U - phase * V)))


def resource_estimate(program: CircuitProgram, f_single=0.999999, f_ms=0.999) -> ResourceEstimate:
    sqr, ms = program.counts()
    return ResourceEstimate(sqr, ms, float(f_single**sqr * f_ms**ms))


def standard_budget(N: int, n_steps: int, f_single=0.999999, f_ms=0.999) -> float:
    return gate_budget(N, n_steps, f_single, f_ms)


def to_dict(program: CircuitProgram) -> dict:
    gates = []
    for g in program.gates:
        if isinstance(g, SQR):
            gates.append({"g": "sqr", "axis": g.axis, "q": g.qubit, "theta": float(g.theta)})
        else:
            gates.append({"g": "ms", "theta": float(g.theta)})
    return {"n": program.n, "gates": gates, "meta": program.meta}


def serialize(program: CircuitProgram) -> str:
    # json writes floats with repr, which round-trips IEEE-754 doubles exactly
    return json.dumps(to_dict(program), indent=1)


def _field(gate, key, index, kind):
    if key not in gate:
        raise CircuitFormatError(f"gate {index}: missing field {key!r}")
    value = gate[key]
    if kind is float and (isinstance(value, bool) or not isinstance(value, (int, float))):
        raise CircuitFormatError(f"gate {index}: field {key!r} must be a number")
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise CircuitFormatError(f"gate {index}: field {key!r} must be an integer")
    return value


def deserialize(text: str) -> CircuitProgram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict) or "n" not in data or "gates" not in data:
        raise CircuitFormatError("program must be an object with fields 'n' and 'gates'")
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise CircuitFormatError("field 'n' must be a positive integer")
    gates = []
    for index, gate in enumerate(data["gates"]):
        if not isinstance(gate, dict):
            raise CircuitFormatError(f"gate {index}: expected an object")
        kind = gate.get("g")
        theta = float(_field(gate, "theta", index, float))
        if kind == "sqr":
            axis = _field(gate, "axis", index, str)
            q = _field(gate, "q", index, int)
            if axis not in ("x", "y", "z"):
                raise CircuitFormatError(f"gate {index}: field 'axis' must be x, y or z")
            if not 1 <= q <= n:
                raise CircuitFormatError(f"gate {index}: field 'q' out of range 1..{n}")
            gates.append(SQR(axis, q, theta))
        elif kind == "ms":
            gates.append(MS(theta))
        else:
            raise CircuitFormatError(f"gate {index}: field 'g' must be 'sqr' or 'ms'")
    return CircuitProgram(n, gates, data.get("meta", {}))
