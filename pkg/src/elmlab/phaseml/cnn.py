"""Small 1-D convolutional classifier written directly in numpy.

Layout: ``[Conv1D(same) -> ReLU -> MaxPool] * blocks -> Flatten ->
[Dense -> ReLU -> Dropout] * dense -> Dense(2) -> softmax``. Inputs have
shape ``(batch, channels, length)``.
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass
class NetworkConfig:
    conv_blocks: list = field(default_factory=lambda: [(32, 3, 2)] * 3)  # (channels, kernel, pool)
    dense: list = field(default_factory=lambda: [512] * 4)
    dropout: float = 0.2
    n_classes: int = 2

    def __post_init__(self):
        self.conv_blocks = [tuple(int(v) for v in b) for b in self.conv_blocks]
        self.dense = [int(v) for v in self.dense]
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout probability must lie in [0, 1)")

    def flat_size(self, length: int) -> int:
        for ch, _, pool in self.conv_blocks:
            length //= pool
            if length < 1:
                raise ValueError("input too short for the configured pooling")
        return length * (self.conv_blocks[-1][0] if self.conv_blocks else 1)


class Conv1D:
    def __init__(self, c_in, c_out, kernel, rng):
        bound = np.sqrt(6.0 / (c_in * kernel))
        self.W = rng.uniform(-bound, bound, size=(c_out, c_in, kernel))
        self.b = np.zeros(c_out)
        self.kernel = kernel

    @property
    def params(self):
        return [self.W, self.b]

    def forward(self, x, training=False):
        B, C, T = x.shape
        K = self.kernel
        left = (K - 1) // 2
        xp = np.pad(x, ((0, 0), (0, 0), (left, K - 1 - left)))
        # cols[b, t, c, k] = xp[b, c, t + k]
        cols = np.lib.stride_tricks.sliding_window_view(xp, K, axis=2).transpose(0, 2, 1, 3)
        self._cache = (x.shape, cols)
        out = cols.reshape(B, T, C * K) @ self.W.reshape(len(self.W), -1).T + self.b
        return out.transpose(0, 2, 1)

    def backward(self, dout):
        (B, C, T), cols = self._cache
        K = self.kernel
        d = dout.transpose(0, 2, 1)  # (B, T, F)
        self.dW = np.einsum("btf,btk->fk", d, cols.reshape(B, T, C * K)).reshape(self.W.shape)
        self.db = d.sum(axis=(0, 1))
        dcols = (d @ self.W.reshape(len(self.W), -1)).reshape(B, T, C, K)
        left = (K - 1) // 2
        dxp = np.zeros((B, C, T + K - 1))
        for k in range(K):
            dxp[:, :, k : k + T] += dcols[:, :, :, k].transpose(0, 2, 1)
        return dxp[:, :, left : left + T]

    @property
    def grads(self):
        return [self.dW, self.db]


class ReLU:
    params = grads = []

    def forward(self, x, training=False):
        self._mask = x > 0
        return x * self._mask

    def backward(self, dout):
        return dout * self._mask


class MaxPool1D:
    params = grads = []

    def __init__(self, size):
        self.size = size

    def forward(self, x, training=False):
        B, C, T = x.shape
        To = T // self.size
        win = x[:, :, : To * self.size].reshape(B, C, To, self.size)
        idx = win.argmax(axis=3)
        self._cache = (x.shape, idx)
        return np.take_along_axis(win, idx[..., None], axis=3)[..., 0]

    def backward(self, dout):
        (B, C, T), idx = self._cache
        To = T // self.size
        dwin = np.zeros((B, C, To, self.size))
        np.put_along_axis(dwin, idx[..., None], dout[..., None], axis=3)
        dx = np.zeros((B, C, T))
        dx[:, :, : To * self.size] = dwin.reshape(B, C, To * self.size)
        return dx


class Flatten:
    params = grads = []

    def forward(self, x, training=False):
        self._shape = x.shape
        return x.reshape(len(x), -1)

    def backward(self, dout):
        return dout.reshape(self._shape)


class Dense:
    def __init__(self, n_in, n_out, rng):
        bound = np.sqrt(6.0 / n_in)
        self.W = rng.uniform(-bound, bound, size=(n_in, n_out))
        self.b = np.zeros(n_out)

    @property
    def params(self):
        return [self.W, self.b]

    def forward(self, x, training=False):
        self._x = x
        return x @ self.W + self.b

    def backward(self, dout):
        self.dW = self._x.T @ dout
        self.db = dout.sum(axis=0)
        return dout @ self.W.T

    @property
    def grads(self):
        return [self.dW, self.db]


class Dropout:
    params = grads = []

    def __init__(self, p, rng):
        self.p = p
        self.rng = rng

    def forward(self, x, training=False):
        if not training or self.p == 0:
            self._mask = None
            return x
        self._mask = (self.rng.random(x.shape) >= self.p) / (1 - self.p)
        return x * self._mask

    def backward(self, dout):
        return dout if self._mask is None else dout * self._mask


def softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class Network:
    def __init__(self, config: NetworkConfig, in_channels: int, length: int, rng: np.random.Generator):
        self.config = config
        self.in_channels = in_channels
        self.length = length
        self.layers = []
        c = in_channels
        for ch, kernel, pool in config.conv_blocks:
            self.layers += [Conv1D(c, ch, kernel, rng), ReLU(), MaxPool1D(pool)]
            c = ch
        self.layers.append(Flatten())
        n = config.flat_size(length) if config.conv_blocks else in_channels * length
        for width in config.dense:
            self.layers += [Dense(n, width, rng), ReLU(), Dropout(config.dropout, rng)]
            n = width
        self.layers.append(Dense(n, config.n_classes, rng))

    @property
    def params(self):
        return [p for layer in self.layers for p in layer.params]

    @property
    def grads(self):
        return [g for layer in self.layers for g in layer.grads]

    def _check(self, x):
        if x.ndim != 3 or x.shape[1:] != (self.in_channels, self.length):
            raise ValueError(f"expected input of shape (batch, {self.in_channels}, {self.length}), got {x.shape}")

    def logits(self, x, training=False):
        self._check(x)
        for layer in self.layers:
            x = layer.forward(x, training)
        return x

    def predict_proba(self, x, batch=512):
        return np.concatenate([softmax(self.logits(x[k : k + batch])) for k in range(0, len(x), batch)])

    def loss_and_grads(self, x, y, training=True):
        """Mean cross-entropy; fills each layer's gradients."""
        p = softmax(self.logits(x, training))
        n = len(x)
        loss = -np.mean(np.log(p[np.arange(n), y] + 1e-300))
        d = p.copy()
        d[np.arange(n), y] -= 1
        d /= n
        for layer in reversed(self.layers):
            d = layer.backward(d)
        return loss

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "in_channels": self.in_channels,
            "length": self.length,
            "shapes": [list(p.shape) for p in self.params],
            "params": [p.ravel().tolist() for p in self.params],
        }

    @classmethod
    def from_dict(cls, data) -> "Network":
        net = cls(NetworkConfig(**data["config"]), data["in_channels"], data["length"], np.random.default_rng(0))
        for p, shape, flat in zip(net.params, data["shapes"], data["params"]):
            if list(p.shape) != list(shape):
                raise ValueError(f"parameter shape mismatch: {p.shape} vs {shape}")
            p[...] = np.asarray(flat, dtype=float).reshape(shape)
        return net


class Adam:
    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = params
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        scale = self.lr * np.sqrt(1 - b2**self.t) / (1 - b1**self.t)
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= b1
            m += (1 - b1) * g
            v *= b2
            v += (1 - b2) * g * g
            p -= scale * m / (np.sqrt(v) + self.eps)


def save_network(net: Network, path, extra=None):
    data = net.to_dict()
    if extra:
        data.update(extra)
    with open(path, "w") as fh:
        json.dump(data, fh)


def load_network(path) -> tuple[Network, dict]:
    with open(path) as fh:
        data = json.load(fh)
    return Network.from_dict(data), data
