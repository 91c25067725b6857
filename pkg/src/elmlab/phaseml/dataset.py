"""Labelled datasets of ELM dynamics over a ``(lambda, alpha)`` grid."""

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..dynamics import (
    Evolver,
    correlation_index,
    correlations_from_states,
    default_sz_state,
    neel_state,
    time_grid,
    trotter_steps_of,
)
from ..hamiltonians import ModelParams
from ..meanfield import phase_label

# Independent random streams derived from the single user seed:
# np.random.default_rng([seed, stream_id]).
STREAM_NOISE = 1
STREAM_SPLIT = 2
STREAM_INIT = 3
STREAM_TRAIN = 4
STREAM_CLUSTER = 5

PATH2_ALPHA = 1 / np.sqrt(2)

SPLITS = ("train", "test", "path-test")


def rng_stream(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(stream)])


def _axis(start, stop, step):
    n = int(round((stop - start) / step))
    return np.round(start + np.arange(n + 1) * step, 12)


@dataclass(frozen=True)
class GridSpec:
    lam_start: float = 0.0
    lam_stop: float = 1.0
    lam_step: float = 0.01
    alpha_start: float = 0.0
    alpha_stop: float = 1.0
    alpha_step: float = 0.01
    t_max: float = 4.0
    dt: float = 0.04

    @classmethod
    def reduced(cls, step: float = 0.05, **kw) -> "GridSpec":
        return cls(lam_step=step, alpha_step=step, **kw)

    @property
    def lambdas(self) -> np.ndarray:
        return _axis(self.lam_start, self.lam_stop, self.lam_step)

    @property
    def alphas(self) -> np.ndarray:
        return _axis(self.alpha_start, self.alpha_stop, self.alpha_step)

    @property
    def times(self) -> np.ndarray:
        return time_grid(self.t_max, self.dt)

    def points(self) -> np.ndarray:
        """``(lambda, alpha)`` pairs, lambda varying fastest."""
        L, A = np.meshgrid(self.lambdas, self.alphas)
        return np.column_stack([L.ravel(), A.ravel()])


@dataclass
class Dataset:
    """Samples with features of shape ``(n, channels, T)``."""

    lam: np.ndarray
    alpha: np.ndarray
    features: np.ndarray
    labels: np.ndarray
    split: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.lam)

    def subset(self, mask) -> "Dataset":
        mask = np.asarray(mask)
        return Dataset(
            self.lam[mask], self.alpha[mask], self.features[mask], self.labels[mask], self.split[mask], dict(self.meta)
        )

    def tagged(self, tag: str) -> "Dataset":
        return self.subset(self.split == tag)


def features_at(params: ModelParams, observable, times, kind="exact") -> np.ndarray:
    """Feature matrix ``(channels, T)`` for one parameter point.

    ``observable`` is ``"sz"``, ``"allcorr"``, or ``("cz", i, j)``.
    """
    if observable == "sz":
        ev = Evolver(params, "collective")
        states = ev.evolve(default_sz_state(params.N), times, kind)
        m = np.arange(params.N + 1) - params.N / 2
        return (np.abs(states) ** 2 @ m)[None, :]
    ev = Evolver(params, "qubit")
    states = ev.evolve(neel_state(params.N), times, kind)
    if observable == "allcorr":
        return correlations_from_states(states, params.N, correlation_index(params.N))
    name, i, j = observable
    if name not in ("cx", "cy", "cz"):
        raise ValueError(f"unknown observable {observable!r}")
    return correlations_from_states(states, params.N, [(name[1], i, j)])


def parse_observable(text: str):
    """``"sz"``, ``"allcorr"``, ``"cz"`` (qubits 1, 2) or ``"cz:i,j"``."""
    if text in ("sz", "allcorr"):
        return text
    if text[:2] in ("cx", "cy", "cz"):
        if ":" in text:
            i, j = (int(v) for v in text.split(":")[1].split(","))
        else:
            i, j = 1, 2
        return (text[:2], i, j)
    raise ValueError(f"unknown observable {text!r}")


def observable_name(observable) -> str:
    if isinstance(observable, str):
        return observable
    return f"{observable[0]}:{observable[1]},{observable[2]}"


def _noise(features, sigma, seed):
    if not sigma:
        return features
    return features + rng_stream(seed, STREAM_NOISE).normal(0.0, sigma, size=features.shape)


def generate_dataset(
    grid: GridSpec | None = None,
    observable=("cz", 1, 2),
    kind="exact",
    noise_sigma: float = 0.0,
    seed: int = 0,
    N: int = 6,
    points=None,
) -> Dataset:
    """Evolve every grid point and label it with the mean-field phase.

    ``points`` overrides the grid's ``(lambda, alpha)`` pairs, e.g. for a path.
    Gaussian noise, when requested, is added to the features only.
    """
    grid = grid or GridSpec()
    if isinstance(observable, str):
        observable = parse_observable(observable)
    trotter_steps_of(kind)
    times = grid.times
    pts = grid.points() if points is None else np.asarray(points, dtype=float)
    feats = np.array([features_at(ModelParams(N, float(l), float(a)), observable, times, kind) for l, a in pts])
    feats = _noise(feats, noise_sigma, seed)
    labels = np.array([phase_label(l, a) for l, a in pts], dtype=int)
    meta = {
        "grid": asdict(grid),
        "N": N,
        "observable": observable_name(observable),
        "propagator": str(kind),
        "noise_sigma": noise_sigma,
        "seed": seed,
    }
    split = np.full(len(pts), "train", dtype=object)
    return Dataset(pts[:, 0].copy(), pts[:, 1].copy(), feats, labels, split, meta)


def path_mask(lam, alpha, alpha_step) -> np.ndarray:
    """Grid points on path 1 (alpha = 0), path 3 (lambda = 1), or the alpha row nearest 1/sqrt(2)."""
    lam, alpha = np.asarray(lam), np.asarray(alpha)
    alphas = np.unique(alpha)
    nearest = alphas[np.argmin(np.abs(alphas - PATH2_ALPHA))]
    on_path2 = np.isclose(alpha, nearest) & (abs(nearest - PATH2_ALPHA) <= alpha_step / 2 + 1e-12)
    return np.isclose(alpha, 0.0) | np.isclose(lam, 1.0) | on_path2


def split_dataset(dataset: Dataset, seed: int = 0, test_fraction: float = 0.2) -> Dataset:
    """Tag path points ``path-test`` and a random ``test_fraction`` of the rest ``test``."""
    step = dataset.meta.get("grid", {}).get("alpha_step", 0.01)
    on_path = path_mask(dataset.lam, dataset.alpha, step)
    rest = np.flatnonzero(~on_path)
    n_test = int(round(test_fraction * len(rest)))
    test = rng_stream(seed, STREAM_SPLIT).permutation(rest)[:n_test]
    split = np.full(len(dataset), "train", dtype=object)
    split[on_path] = "path-test"
    split[test] = "test"
    out = dataset.subset(np.ones(len(dataset), bool))
    out.split = split
    out.meta["split_seed"] = seed
    out.meta["test_fraction"] = test_fraction
    return out


def validation_mask(n: int, rng: np.random.Generator, fraction: float = 0.2) -> np.ndarray:
    mask = np.zeros(n, bool)
    mask[rng.permutation(n)[: int(round(fraction * n))]] = True
    return mask


def save_dataset(dataset: Dataset, directory) -> Path:
    """Write ``manifest.json`` and ``features.csv`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    n, C, T = dataset.features.shape
    manifest = dict(dataset.meta, channels=C, samples_per_channel=T, n_samples=n)
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    with open(directory / "features.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lambda", "alpha", "label", "split"] + [f"f{k}" for k in range(C * T)])
        for k in range(n):
            row = [repr(float(dataset.lam[k])), repr(float(dataset.alpha[k])), int(dataset.labels[k]), dataset.split[k]]
            w.writerow(row + [repr(float(v)) for v in dataset.features[k].ravel()])
    return directory


def load_dataset(directory) -> Dataset:
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise FileNotFoundError(f"no manifest.json in {directory}")
    meta = json.loads(manifest_path.read_text())
    C, T = meta.pop("channels"), meta.pop("samples_per_channel")
    meta.pop("n_samples", None)
    lam, alpha, labels, split, feats = [], [], [], [], []
    with open(directory / "features.csv", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            lam.append(float(row[0]))
            alpha.append(float(row[1]))
            labels.append(int(row[2]))
            split.append(row[3])
            feats.append(np.array(row[4:], dtype=float).reshape(C, T))
    return Dataset(
        np.array(lam), np.array(alpha), np.array(feats), np.array(labels), np.array(split, dtype=object), meta
    )
