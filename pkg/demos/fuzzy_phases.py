"""Unsupervised phase boundary from all 45 spin correlations.

    python demos/fuzzy_phases.py
"""
import numpy as np

from elmlab.phaseml.dataset import GridSpec, generate_dataset
from elmlab.phaseml.fuzzy import ClusterConfig, critical_line_estimate, fuzzy_cmeans, standardize

data = generate_dataset(GridSpec.reduced(0.05), "allcorr")
x = standardize(data.features.reshape(len(data), -1))
result = fuzzy_cmeans(x, ClusterConfig(k=2, m=4))
print(f"{result.iterations} iterations, objective {result.objective[0]:.1f} -> {result.objective[-1]:.1f}")

est = critical_line_estimate(result, data.lam, data.alpha)
print("alpha   estimate  lambda_c")
for a, l, c in zip(est["alpha"], est["lambda"], est["critical"]):
    print(f"{a:5.2f}   {l:6.2f}    {c:.4f}")
