"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``. The machine-learning criteria average
over ``SEEDS`` independent seeds (split, initialisation and batching all
change with the seed) because one held-out sample is worth ~1.3 percentage
points on the reduced grid.
"""

import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from elmlab.adaptvqe import build_pool, gradient, relative_error, run
from elmlab.circuit import emit_trotter_circuit, phase_aligned_distance, resource_estimate, simulate_circuit
from elmlab.dynamics import Evolver, gate_budget, neel_state, trotter_fidelity
from elmlab.hamiltonians import ModelParams, elm_qubit
from elmlab.meanfield import antispinodal_lambda, critical_lambda, minimize_surface, spinodal_lambda
from elmlab.phaseml.classify import TrainConfig, crossing, evaluate, train_classifier, train_partial
from elmlab.phaseml.cnn import Network, NetworkConfig
from elmlab.phaseml.dataset import PATH2_ALPHA, GridSpec, generate_dataset, split_dataset
from elmlab.phaseml.fuzzy import ClusterConfig, critical_line_estimate, fuzzy_cmeans, standardize
from elmlab.reference import N_TABLE, table_points
from elmlab.spectra import ground_energy
from elmlab.spin import normalize

SEEDS = range(5)
GRID = GridSpec.reduced(0.05)
PATH_LAMBDAS = np.round(np.arange(101) * 0.01, 12)

# collected lines are printed in the terminal summary (see conftest.py)
ACCEPTANCE_LINES = {}


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def train_config(seed):
    return TrainConfig(epochs=50, seed=seed, final_lr_fraction=0.01)


@lru_cache(maxsize=None)
def dataset(kind="exact", noise_sigma=0.0, observable="cz"):
    return generate_dataset(GRID, observable, kind, noise_sigma, seed=0)


@lru_cache(maxsize=None)
def seed_runs(kind="exact", noise_sigma=0.0):
    """Train one model per seed; returns (test accuracies, models)."""
    raw = dataset(kind, noise_sigma)
    accs, models = [], []
    for seed in SEEDS:
        d = split_dataset(raw, seed=seed)
        model = train_classifier(d, NetworkConfig(), train_config(seed))
        accs.append(evaluate(model, d, "test")["accuracy"])
        models.append(model)
    return np.array(accs), models


def path_crossing(models, alpha):
    pts = np.column_stack([PATH_LAMBDAS, np.full_like(PATH_LAMBDAS, alpha)])
    feats = generate_dataset(GRID, points=pts).features
    pbs = np.mean([m.predict_pbs(feats) for m in models], axis=0)
    return crossing(PATH_LAMBDAS, pbs), pbs


def test_criterion_01_table_exact():
    t0 = time.perf_counter()
    worst = max(abs(ground_energy(ModelParams(N_TABLE, lam, a)) - e) for _, lam, a, e in table_points())
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 1.0
    report(1, ok, f"{len(table_points())} table points, max |dE/N| = {worst:.2e}, {elapsed:.2f} s")
    assert ok


def test_criterion_02_table_adapt():
    t0 = time.perf_counter()
    worst, max_iter = 0.0, 0
    for _, lam, a, _ in table_points():
        p = ModelParams(N_TABLE, lam, a)
        exact = ground_energy(p) * p.N
        trace = run(p, exact_energy=exact)
        worst = max(worst, relative_error(trace.energy, exact))
        max_iter = max(max_iter, trace.iterations)
    ok = worst < 1e-5 and max_iter <= 400
    report(2, ok, f"max relative error {worst:.2e}, max iterations {max_iter}, {time.perf_counter() - t0:.0f} s")
    assert ok


def test_criterion_03_cross_representation():
    worst = 0.0
    for N in (2, 4, 6, 8):
        for lam in np.linspace(0, 1, 5):
            for a in np.linspace(0, 1, 5):
                p = ModelParams(N, float(lam), float(a))
                worst = max(worst, N * abs(ground_energy(p, "qubit") - ground_energy(p)))
    ok = worst <= 1e-9
    report(3, ok, f"max |E_qubit - E_collective| = {worst:.2e}")
    assert ok


def test_criterion_04_meanfield_lines():
    exact = critical_lambda(0.0) == spinodal_lambda(0.0) == antispinodal_lambda(0.0) == 0.2
    gaps = []
    for a in (0.2, 0.5, 1 / np.sqrt(2), 1.0):
        minima = minimize_surface(float(critical_lambda(a)), a)
        gaps.append(abs(minima[0].energy_per_particle - minima[1].energy_per_particle) if len(minima) == 2 else np.inf)
    ok = bool(exact) and max(gaps) <= 1e-8
    report(4, ok, f"lines at alpha=0 exact: {bool(exact)}, max double-minimum gap {max(gaps):.1e}")
    assert ok


def test_criterion_05_trotter():
    p = ModelParams(6, 0.2, 1 / np.sqrt(2))
    phi = neel_state(6)
    ev = Evolver(p, "qubit")
    f0 = max(abs(trotter_fidelity(p, 0.0, n, phi, evolver=ev) - 1) for n in (1, 2, 4, 8))
    ts = np.linspace(0, 1, 26)
    f_t = [trotter_fidelity(p, t, 1, phi, evolver=ev) for t in ts]
    mono_t = bool(np.all(np.diff(f_t) <= 1e-12))
    steps = [1, 2, 4, 8, 16]
    mono_n = all(
        np.all(np.diff([trotter_fidelity(p, t, n, phi, evolver=ev) for n in steps]) >= -1e-12) for t in (1.0, 2.0)
    )
    U = ev.exact(1.0)
    errs = [np.linalg.norm(ev.trotter(1.0, n) - U, 2) for n in steps]
    slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
    ok = f0 <= 1e-12 and mono_t and mono_n and -1.3 <= slope <= -0.7
    report(5, ok, f"|F(0)-1| = {f0:.1e}, F down in t: {mono_t}, F up in n_T: {mono_n}, slope {slope:.3f}")
    assert ok


def test_criterion_06_circuit():
    rng = np.random.default_rng(6)
    worst, counts_ok = 0.0, True
    for N in (2, 4, 6):
        for n in (1, 3):
            p = ModelParams(N, float(rng.uniform()), float(rng.uniform()))
            prog = emit_trotter_circuit(p, float(rng.uniform(0.2, 2)), n)
            t = prog.meta["t"]
            worst = max(worst, phase_aligned_distance(simulate_circuit(prog), Evolver(p, "qubit").trotter(t, n)))
            counts_ok &= prog.counts() == (n * 6 * N, n * 3)
    budget = resource_estimate(emit_trotter_circuit(ModelParams(6, 0.2, 0.5), 1.0, 1)).fidelity
    ok = worst <= 1e-8 and counts_ok and abs(budget - 0.996967) <= 1e-6 and budget == gate_budget(6, 1)
    report(6, ok, f"max deviation {worst:.1e}, counts ok: {counts_ok}, budget {budget:.7f}")
    assert ok


def test_criterion_07_classifier():
    t0 = time.perf_counter()
    clean, models = seed_runs()
    trotter, _ = seed_runs(kind=1)
    c1, _ = path_crossing(models, 0.0)
    c2, _ = path_crossing(models, PATH2_ALPHA)
    elapsed = time.perf_counter() - t0
    drop = 100 * (clean.mean() - trotter.mean())
    checks = {
        "accuracy": clean.mean() >= 0.95,
        "path1": abs(c1 - 0.20) <= 0.03,
        "path2": abs(c2 - 0.18) <= 0.03,
        "trotter": drop <= 2.0,
        "runtime": elapsed <= 600,
    }
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    report(
        7,
        ok,
        f"test accuracy {clean.mean():.4f}, path crossings {c1:.3f} / {c2:.3f}, "
        f"n_T=1 accuracy {trotter.mean():.4f} (drop {drop:.2f} pp), {elapsed:.0f} s"
        + (f"; failing: {', '.join(failed)}" if failed else ""),
    )
    assert ok, checks


def test_criterion_08_partial():
    raw = dataset()
    accs, train_accs = [], []
    for seed in SEEDS:
        _, result = train_partial(raw, NetworkConfig(), train_config(seed))
        accs.append(result["alpha_positive"]["accuracy"])
        train_accs.append(result["train"]["accuracy"])
    ok = np.mean(accs) >= 0.90
    report(8, ok, f"alpha>0 accuracy {np.mean(accs):.4f} (training {np.mean(train_accs):.4f})")
    assert ok


def test_criterion_09_noise():
    clean, _ = seed_runs()
    noisy, _ = seed_runs(noise_sigma=0.2)
    drop = 100 * (clean.mean() - noisy.mean())
    ok = drop <= 5.0
    report(9, ok, f"clean {clean.mean():.4f}, sigma=0.2 {noisy.mean():.4f} (drop {drop:.2f} pp)")
    assert ok


def test_criterion_10_fuzzy():
    d = dataset(observable="allcorr")
    x = standardize(d.features.reshape(len(d), -1))
    result = fuzzy_cmeans(x, ClusterConfig())
    rows = float(np.max(np.abs(result.membership.sum(axis=1) - 1)))
    h = np.array(result.objective)
    mono = bool(np.all(np.diff(h) <= 1e-10 * np.abs(h[:-1]) + 1e-10))
    est = critical_line_estimate(result, d.lam, d.alpha)
    dev = float(np.max(np.abs(est["lambda"] - est["critical"])))
    ok = rows <= 1e-12 and mono and dev <= 0.05
    report(10, ok, f"row error {rows:.1e}, objective nonincreasing: {mono}, max |dlambda| {dev:.3f}")
    assert ok


def test_criterion_11_gradient_oracles():
    rng = np.random.default_rng(11)
    N = 6
    pool = build_pool(N)
    worst_adapt = 0.0
    for _ in range(20):
        H = elm_qubit(ModelParams(N, float(rng.uniform()), float(rng.uniform())))
        psi = normalize(rng.normal(size=2**N) + 1j * rng.normal(size=2**N))
        A = pool[rng.integers(len(pool))]
        h = 1e-5
        e = [np.vdot(phi, H @ phi).real for phi in (A.expi(h, psi), A.expi(-h, psi))]
        worst_adapt = max(worst_adapt, abs(gradient(psi, H, A) - (e[0] - e[1]) / (2 * h)))

    cfg = NetworkConfig(conv_blocks=[(3, 3, 2), (2, 3, 2)], dense=[5], dropout=0.0)
    net = Network(cfg, 1, 16, np.random.default_rng(0))
    x, y = rng.normal(size=(8, 1, 16)), rng.integers(0, 2, size=8)
    net.loss_and_grads(x, y, training=False)
    worst_net = 0.0
    for p, g in zip(net.params, [g.copy() for g in net.grads]):
        fd = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + 1e-4
            lp = net.loss_and_grads(x, y, training=False)
            p[idx] = old - 1e-4
            lm = net.loss_and_grads(x, y, training=False)
            p[idx] = old
            fd[idx] = (lp - lm) / 2e-4
        worst_net = max(worst_net, np.linalg.norm(g - fd) / max(np.linalg.norm(fd), 1e-12))
    ok = worst_adapt <= 1e-6 and worst_net <= 1e-4
    report(11, ok, f"ADAPT max abs error {worst_adapt:.1e}, backprop max relative error {worst_net:.1e}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
