"""Published N = 6 ground-state energies per particle along the three paths."""

import numpy as np

N_TABLE = 6
CONTROL = tuple(round(0.1 * k, 1) for k in range(11))

# exact E/N; path 1: alpha = 0, path 2: alpha = 1/sqrt(2) (control is lambda),
# path 3: lambda = 1 (control is alpha)
EXACT = {
    1: (0.0, -0.0184795, -0.0437171, -0.0877474, -0.1713733, -0.2881459,
        -0.4201005, -0.5596571, -0.7037515, -0.8508333, -0.9999999),
    2: (0.0, -0.0189216, -0.0565697, -0.2145307, -0.4420432, -0.6892442,
        -0.9451139, -1.2055931, -1.4688170, -1.7338069, -1.9999999),
    3: (-0.9999999, -1.1051249, -1.2209975, -1.3483562, -1.4879215, -1.6403882,
        -1.8064183, -1.9866367, -2.1816263, -2.3919270, -2.6180339),
}


def table_points() -> list[tuple[int, float, float, float]]:
    """Rows ``(path, lambda, alpha, exact E/N)``, 11 per path."""
    rows = []
    for path, values in EXACT.items():
        for c, e in zip(CONTROL, values):
            lam, alpha = {1: (c, 0.0), 2: (c, 1 / np.sqrt(2)), 3: (1.0, c)}[path]
            rows.append((path, lam, alpha, e))
    return rows
