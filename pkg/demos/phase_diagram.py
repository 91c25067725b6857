"""Mean-field phase lines and the N = 6 exact spectrum along the three paths.

    python demos/phase_diagram.py
"""
import numpy as np

from elmlab.meanfield import minimize_surface, phase_lines
from elmlab.spectra import PathKind, PathSpec, spectrum_along_path

# The three mean-field lines. Spinodal <= critical <= antispinodal, and all
# three meet at lambda = 0.2 for alpha = 0 (a second-order point).
alphas = np.linspace(0, 1, 6)
lines = phase_lines(alphas)
print("alpha   lambda_s  lambda_c  lambda_as")
for a, s, c, x in zip(alphas, lines["lambda_s"], lines["lambda_c"], lines["lambda_as"]):
    print(f"{a:5.2f}  {s:8.5f}  {c:8.5f}  {x:8.5f}")

# Inside the coexistence band there are two minima of the energy surface.
for lam in (0.15, 0.17, 0.19):
    mins = minimize_surface(lam, 1.0)
    print(f"lambda={lam}: " + ", ".join(f"beta={m.beta:.4f} E/N={m.energy_per_particle:+.6f}" for m in mins))

# Exact ground level and order parameter, N = 6.
for kind in PathKind:
    if kind is PathKind.CUSTOM:
        continue
    c, e, order = spectrum_along_path(PathSpec(kind), 6, level_count=2)
    print(f"\n{kind.name}: control, E0/N, E1/N, order parameter")
    for row in zip(c, e[:, 0], e[:, 1], order):
        print("  %.1f  %+.7f  %+.7f  %.4f" % row)
