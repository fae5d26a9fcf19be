"""From-scratch fully connected regressor: rectified-linear hidden layers,
two-unit linear head (tau, P_tot), mean-squared loss, Adam updates.

Five registered configurations differ in hidden widths, whether the door
distance is appended to the input, and raw vs log target space.
"""

import json
from dataclasses import dataclass, asdict, field

import numpy as np

from .features import FeatureConfig

N_OUTPUTS = 2


@dataclass(frozen=True)
class ModelConfig:
    model_id: int
    hidden_layers: tuple
    input_size: int
    output_transform: str  # "raw" or "log"
    log_epsilon: float = 1e-3
    learning_rate: float = 0.001
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    batch_size: int = 32
    epochs: int = 200
    seed: int = 0

    def __post_init__(self):
        if any(w <= 0 for w in self.hidden_layers):
            raise ValueError("hidden widths must be positive")
        if self.learning_rate <= 0 or self.log_epsilon <= 0:
            raise ValueError("learning_rate and log_epsilon must be positive")
        if self.output_transform not in ("raw", "log"):
            raise ValueError(f"unknown output transform {self.output_transform!r}")


MODEL_REGISTRY = {
    1: {"hidden_layers": (128,), "output_transform": "raw", "uses_door_distance": False},
    2: {"hidden_layers": (128,), "output_transform": "log", "uses_door_distance": False},
    3: {"hidden_layers": (256,), "output_transform": "log", "uses_door_distance": False},
    4: {"hidden_layers": (128,), "output_transform": "log", "uses_door_distance": True},
    5: {"hidden_layers": (256, 256), "output_transform": "log", "uses_door_distance": True},
}


def config_for_model(model_id: int, m: int = 9, **overrides) -> ModelConfig:
    spec = MODEL_REGISTRY[model_id]
    input_size = m * m * 5 + (1 if spec["uses_door_distance"] else 0)
    return ModelConfig(model_id=model_id, hidden_layers=spec["hidden_layers"],
                       input_size=input_size, output_transform=spec["output_transform"],
                       **overrides)


def feature_config_for_model(model_id: int, m: int = 9,
                             normalize_distance: bool = False) -> FeatureConfig:
    return FeatureConfig(m=m, include_door_distance=MODEL_REGISTRY[model_id]["uses_door_distance"],
                         normalize_distance=normalize_distance)


class MlpModel:
    """Weights + the configs needed to reproduce its inputs and outputs."""

    def __init__(self, weights, biases, config: ModelConfig, features: FeatureConfig):
        dims = [config.input_size, *config.hidden_layers, N_OUTPUTS]
        if len(weights) != len(dims) - 1:
            raise ValueError("layer count mismatch")
        for k, (w, b) in enumerate(zip(weights, biases)):
            if w.shape != (dims[k], dims[k + 1]) or b.shape != (dims[k + 1],):
                raise ValueError(f"layer {k} dimension mismatch: {w.shape}")
        self.weights = [np.asarray(w, dtype=float) for w in weights]
        self.biases = [np.asarray(b, dtype=float) for b in biases]
        self.config = config
        self.features = features

    @classmethod
    def initialize(cls, config: ModelConfig, features: FeatureConfig) -> "MlpModel":
        """Uniform +-sqrt(6 / (fan_in + fan_out)) init, deterministic by seed."""
        rng = np.random.default_rng(config.seed)
        dims = [config.input_size, *config.hidden_layers, N_OUTPUTS]
        weights, biases = [], []
        for fan_in, fan_out in zip(dims, dims[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases, config, features)

    def parameters(self):
        return self.weights + self.biases


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Batch forward pass; accepts (n, d) or a single (d,) vector."""
    single = x.ndim == 1
    h = np.atleast_2d(np.asarray(x, dtype=float))
    if h.shape[1] != model.config.input_size:
        raise ValueError(f"expected input size {model.config.input_size}, got {h.shape[1]}")
    last = len(model.weights) - 1
    for k, (w, b) in enumerate(zip(model.weights, model.biases)):
        h = h @ w + b
        if k < last:
            h = np.maximum(h, 0.0)
    return h[0] if single else h


def _forward_cached(model, x):
    """Forward pass keeping pre-activations and activations for backprop."""
    acts = [x]
    pre = []
    h = x
    last = len(model.weights) - 1
    for k, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = h @ w + b
        pre.append(z)
        h = np.maximum(z, 0.0) if k < last else z
        acts.append(h)
    return pre, acts


def mse(pred: np.ndarray, target: np.ndarray) -> float:
    return float(np.mean((pred - target) ** 2))


def gradients(model: MlpModel, x: np.ndarray, y: np.ndarray):
    """Analytic gradients of batch MSE w.r.t. every weight matrix and bias."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if x.shape[1] != model.config.input_size or y.shape[1] != N_OUTPUTS:
        raise ValueError("batch dimension mismatch")
    n = x.shape[0]
    pre, acts = _forward_cached(model, x)
    delta = 2.0 * (acts[-1] - y) / (n * N_OUTPUTS)
    grad_w = [None] * len(model.weights)
    grad_b = [None] * len(model.biases)
    for k in range(len(model.weights) - 1, -1, -1):
        grad_w[k] = acts[k].T @ delta
        grad_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ model.weights[k].T) * (pre[k - 1] > 0)
    return grad_w, grad_b


class AdamState:
    def __init__(self, model: MlpModel):
        self.m = [np.zeros_like(p) for p in model.parameters()]
        self.v = [np.zeros_like(p) for p in model.parameters()]
        self.t = 0

    def step(self, model: MlpModel, grad_w, grad_b):
        cfg = model.config
        self.t += 1
        params = model.parameters()
        grads = grad_w + grad_b
        for i, (p, g) in enumerate(zip(params, grads)):
            self.m[i] = cfg.adam_beta1 * self.m[i] + (1 - cfg.adam_beta1) * g
            self.v[i] = cfg.adam_beta2 * self.v[i] + (1 - cfg.adam_beta2) * g * g
            m_hat = self.m[i] / (1 - cfg.adam_beta1 ** self.t)
            v_hat = self.v[i] / (1 - cfg.adam_beta2 ** self.t)
            p -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_epsilon)


def transform_targets(y: np.ndarray, config: ModelConfig) -> np.ndarray:
    if config.output_transform == "log":
        return np.log(np.maximum(y, config.log_epsilon))
    return np.asarray(y, dtype=float)


def inverse_transform(y: np.ndarray, config: ModelConfig) -> np.ndarray:
    if config.output_transform == "log":
        return np.exp(y)
    return np.asarray(y, dtype=float)


def train(x: np.ndarray, y_raw: np.ndarray, config: ModelConfig,
          features: FeatureConfig = None,
          x_val: np.ndarray = None, y_val_raw: np.ndarray = None):
    """Mini-batch Adam on MSE in the configured target space.

    Returns the trained model and a history list of
    (epoch, train_mse, val_mse) in transformed space (val entries are NaN
    when no validation set is given).
    """
    x = np.asarray(x, dtype=float)
    y_raw = np.asarray(y_raw, dtype=float)
    if x.size == 0 or y_raw.size == 0:
        raise ValueError("empty training set")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y_raw))):
        raise ValueError("non-finite features or targets")
    if features is None:
        features = FeatureConfig(m=9)
    y = transform_targets(y_raw, config)
    y_val = transform_targets(np.asarray(y_val_raw, dtype=float), config) if y_val_raw is not None else None

    model = MlpModel.initialize(config, features)
    adam = AdamState(model)
    rng = np.random.default_rng(config.seed + 1)
    n = x.shape[0]
    history = []
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            gw, gb = gradients(model, x[idx], y[idx])
            adam.step(model, gw, gb)
        train_mse = mse(forward(model, x), y)
        val_mse = mse(forward(model, x_val), y_val) if y_val is not None else float("nan")
        history.append((epoch, train_mse, val_mse))
    return model, history


def predict_stats(model: MlpModel, features_vec: np.ndarray) -> np.ndarray:
    """Physical-unit predictions (tau kW, P_tot kWh) for one or many EVSEs."""
    return inverse_transform(forward(model, features_vec), model.config)


def save_model(model: MlpModel, path):
    payload = {
        "config": {**asdict(model.config), "hidden_layers": list(model.config.hidden_layers)},
        "features": asdict(model.features),
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
    }
    with open(path, "w") as f:
        json.dump(payload, f)


def load_model(path) -> MlpModel:
    with open(path) as f:
        payload = json.load(f)
    try:
        cfg_raw = dict(payload["config"])
        cfg_raw["hidden_layers"] = tuple(cfg_raw["hidden_layers"])
        config = ModelConfig(**cfg_raw)
        features = FeatureConfig(**payload["features"])
        weights = [np.array(w, dtype=float) for w in payload["weights"]]
        biases = [np.array(b, dtype=float) for b in payload["biases"]]
        return MlpModel(weights, biases, config, features)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model file {path}: {exc}") from exc
