"""Trotter fidelity on the Neel state, and the trapped-ion circuit for one step.

    python demos/trotter_circuit.py
"""
import numpy as np

from elmlab.circuit import emit_trotter_circuit, phase_aligned_distance, resource_estimate, simulate_circuit
from elmlab.dynamics import fidelity_report, neel_state, trotter_propagator
from elmlab.hamiltonians import ModelParams

p = ModelParams(6, 0.2, 1 / np.sqrt(2))
times = np.linspace(0, 4, 9)
rep = fidelity_report(p, neel_state(6), times, [1, 2, 4, 8])
print("t     " + "  ".join(f"n_T={n:<3d}" for n in rep.n_steps))
for k, t in enumerate(times):
    print(f"{t:4.1f}  " + "  ".join(f"{f:7.5f}" for f in rep.fidelity[:, k]))
print("gate budgets:", {n: round(f, 6) for n, f in rep.gate_budget.items()})

# One Trotter step as single-qubit rotations plus three MS gates.
prog = emit_trotter_circuit(p, 1.0, 1)
est = resource_estimate(prog)
print(f"\ncircuit: {est.sqr_count} SQR + {est.ms_count} MS, budget {est.fidelity:.6f}")
dev = phase_aligned_distance(simulate_circuit(prog), trotter_propagator(p, 1.0, 1, "qubit"))
print(f"deviation from the Trotter propagator: {dev:.2e}")
