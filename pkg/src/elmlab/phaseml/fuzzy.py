"""Fuzzy C-means clustering and critical-line extraction from memberships."""

from dataclasses import dataclass, field

import numpy as np

from ..meanfield import critical_lambda


@dataclass
class ClusterConfig:
    k: int = 2
    m: float = 4.0
    max_iterations: int = 300
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("need at least two clusters")
        if not self.m > 1:
            raise ValueError("fuzziness m must exceed 1")


@dataclass
class ClusterResult:
    centroids: np.ndarray
    membership: np.ndarray
    objective: list = field(default_factory=list)
    iterations: int = 0


def memberships(x, centroids, m) -> np.ndarray:
    """``w_ij = 1 / sum_j' (d_ij / d_ij')^(2/(m-1))``; a zero distance gives a hard assignment."""
    d = np.sqrt(np.maximum(((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2), 0.0))
    w = np.empty_like(d)
    zero = d == 0
    hit = zero.any(axis=1)
    if (~hit).any():
        # 1/w_ij = sum_j' (d_ij/d_ij')^p  ->  w_ij = d_ij^-p / sum_j' d_ij'^-p, in log space
        logd = np.log(d[~hit])
        e = -2.0 / (m - 1) * logd
        e -= e.max(axis=1, keepdims=True)
        w[~hit] = np.exp(e) / np.exp(e).sum(axis=1, keepdims=True)
    if hit.any():
        # split evenly between coincident centroids
        w[hit] = zero[hit] / zero[hit].sum(axis=1, keepdims=True)
    return w


def objective(x, centroids, w, m) -> float:
    d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return float(np.sum(w**m * d2))


def fuzzy_cmeans(x, config: ClusterConfig | None = None, init=None) -> ClusterResult:
    """Alternate membership and centroid updates until the centroids stop moving."""
    config = config or ClusterConfig()
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("features must be finite")
    rng = np.random.default_rng(config.seed)
    if init is None:
        c = x[rng.choice(len(x), config.k, replace=False)].copy()
    else:
        c = np.array(init, dtype=float)
    w = memberships(x, c, config.m)
    history = []
    it = 0
    for it in range(1, config.max_iterations + 1):
        wm = w**config.m
        new_c = (wm.T @ x) / wm.sum(axis=0)[:, None]
        shift = float(np.max(np.abs(new_c - c)))
        c = new_c
        w = memberships(x, c, config.m)
        history.append(objective(x, c, w, config.m))
        if shift < config.tol:
            break
    return ClusterResult(c, w, history, it)


def standardize(x) -> np.ndarray:
    std = x.std(axis=0)
    return (x - x.mean(axis=0)) / np.where(std > 1e-12, std, 1.0)


def argmax_lines(membership, lam, alpha) -> tuple[np.ndarray, np.ndarray]:
    """For each cluster and alpha, the lambda with the largest membership.

    Returns ``(alphas, lines)`` with ``lines`` of shape ``(k, len(alphas))``.
    """
    lam, alpha = np.asarray(lam), np.asarray(alpha)
    alphas = np.unique(alpha)
    lines = np.empty((membership.shape[1], len(alphas)))
    for a_idx, a in enumerate(alphas):
        sel = np.flatnonzero(alpha == a)
        for j in range(membership.shape[1]):
            lines[j, a_idx] = lam[sel[np.argmax(membership[sel, j])]]
    return alphas, lines


def critical_line_estimate(result: ClusterResult, lam, alpha) -> dict:
    """Membership-maximum lambda per alpha for the critical-like cluster.

    Unsupervised clusters carry no labels, so the critical-like cluster is
    the one whose membership-maximum line lies closest, on average over
    alpha, to ``1/(5 + alpha^2)``.
    """
    alphas, lines = argmax_lines(result.membership, lam, alpha)
    lc = critical_lambda(alphas)
    distance = np.mean(np.abs(lines - lc), axis=1)
    j = int(np.argmin(distance))
    return {"alpha": alphas, "lambda": lines[j], "cluster": j, "critical": lc, "mean_distance": float(distance[j])}
