"""Training and evaluation of the phase classifier."""

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .cnn import Adam, Network, NetworkConfig, load_network, save_network
from .dataset import STREAM_INIT, STREAM_TRAIN, Dataset, rng_stream, validation_mask

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 1e-3
    validation_fraction: float = 0.2
    seed: int = 0
    # cosine decay of the step size from learning_rate to final_lr_fraction * learning_rate
    final_lr_fraction: float = 1.0

    def lr_at(self, epoch: int) -> float:
        frac = 0.5 * (1 + np.cos(np.pi * epoch / max(self.epochs - 1, 1)))
        return self.learning_rate * (self.final_lr_fraction + (1 - self.final_lr_fraction) * frac)


@dataclass
class Standardizer:
    """Per-feature zero mean / unit variance, fitted on the training samples."""

    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, x):
        std = x.std(axis=0)
        return cls(x.mean(axis=0), np.where(std > 1e-12, std, 1.0))

    def __call__(self, x):
        return (x - self.mean) / self.std


@dataclass
class Classifier:
    net: Network
    scaler: Standardizer
    log: list = field(default_factory=list)

    def predict_proba(self, features) -> np.ndarray:
        features = np.asarray(features, dtype=float)
        if features.ndim == 2:
            features = features[None]
        return self.net.predict_proba(self.scaler(features))

    def predict_pbs(self, features) -> np.ndarray:
        """Probability of the broken-symmetry phase for each sample."""
        return self.predict_proba(features)[:, 1]

    def save(self, path, meta=None):
        extra = {"scaler_mean": self.scaler.mean.ravel().tolist(), "scaler_std": self.scaler.std.ravel().tolist()}
        extra["training_log"] = self.log
        extra["meta"] = meta or {}
        save_network(self.net, path, extra)

    @classmethod
    def load(cls, path) -> "Classifier":
        net, data = load_network(path)
        shape = (net.in_channels, net.length)
        scaler = Standardizer(np.reshape(data["scaler_mean"], shape), np.reshape(data["scaler_std"], shape))
        return cls(net, scaler, data.get("training_log", []))


def accuracy(labels, proba) -> float:
    return float(np.mean(np.argmax(proba, axis=1) == labels))


def train_classifier(
    dataset: Dataset, net_config: NetworkConfig | None = None, config: TrainConfig | None = None, mask=None
) -> Classifier:
    """Train on the ``train`` split (or on ``mask`` when given).

    Each epoch holds out a fresh random validation fraction of the training
    pool; the log records training loss and validation accuracy.
    """
    net_config = net_config or NetworkConfig()
    config = config or TrainConfig()
    pool = dataset.split == "train" if mask is None else np.asarray(mask)
    x, y = dataset.features[pool], dataset.labels[pool]
    if len(x) == 0:
        raise ValueError("no training samples")
    scaler = Standardizer.fit(x)
    x = scaler(x)
    _, C, T = x.shape
    net = Network(net_config, C, T, rng_stream(config.seed, STREAM_INIT))
    opt = Adam(net.params, lr=config.learning_rate)
    rng = rng_stream(config.seed, STREAM_TRAIN)
    history = []
    for epoch in range(config.epochs):
        opt.lr = config.lr_at(epoch)
        val = validation_mask(len(x), rng, config.validation_fraction)
        if val.all():
            val[:] = False
        xt, yt = x[~val], y[~val]
        order = rng.permutation(len(xt))
        losses = []
        for k in range(0, len(order), config.batch_size):
            batch = order[k : k + config.batch_size]
            losses.append(net.loss_and_grads(xt[batch], yt[batch]) * len(batch))
            opt.step(net.grads)
        entry = {"epoch": epoch + 1, "loss": float(np.sum(losses) / len(xt))}
        if val.any():
            entry["val_accuracy"] = accuracy(y[val], net.predict_proba(x[val]))
        history.append(entry)
        log.debug("epoch %(epoch)d loss %(loss).4f", entry)
    return Classifier(net, scaler, history)


def evaluate(model: Classifier, dataset: Dataset, tag: str | None = None) -> dict:
    """Categorical accuracy and confusion counts on samples tagged ``tag`` (all when None)."""
    data = dataset if tag is None else dataset.tagged(tag)
    if len(data) == 0:
        raise ValueError(f"no samples tagged {tag!r}")
    proba = model.predict_proba(data.features)
    return metrics(data.labels, proba)


def metrics(labels, proba) -> dict:
    pred = np.argmax(proba, axis=1)
    labels = np.asarray(labels)
    confusion = [[int(np.sum((labels == a) & (pred == b))) for b in (0, 1)] for a in (0, 1)]
    return {"accuracy": float(np.mean(pred == labels)), "confusion": confusion, "n": int(len(labels))}


def crossing(control, pbs, level=0.5) -> float:
    """First control value at which ``pbs`` reaches ``level``, linearly interpolated."""
    control, pbs = np.asarray(control, float), np.asarray(pbs, float)
    above = np.flatnonzero(pbs >= level)
    if len(above) == 0:
        return float("nan")
    k = above[0]
    if k == 0:
        return float(control[0])
    x0, x1, y0, y1 = control[k - 1], control[k], pbs[k - 1], pbs[k]
    return float(x0 + (level - y0) * (x1 - x0) / (y1 - y0))


def train_partial(dataset: Dataset, net_config=None, config=None, alpha_zero_tol=1e-12):
    """Train on every ``alpha = 0`` sample and evaluate on all ``alpha > 0`` samples.

    Returns ``(model, {"train": metrics, "alpha_positive": metrics})``.
    """
    zero = np.abs(dataset.alpha) <= alpha_zero_tol
    model = train_classifier(dataset, net_config, config, mask=zero)
    result = {
        "train": metrics(dataset.labels[zero], model.predict_proba(dataset.features[zero])),
        "alpha_positive": metrics(dataset.labels[~zero], model.predict_proba(dataset.features[~zero])),
    }
    return model, result


def config_dict(net_config: NetworkConfig, config: TrainConfig) -> dict:
    return {"network": asdict(net_config), "training": asdict(config)}
