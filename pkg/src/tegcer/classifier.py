"""Dense neural classifier: V one-hot inputs -> 512 ReLU -> dropout -> softmax.

Hand-written forward/backward passes over numpy, minibatch Adam, inverted
dropout, best-validation-epoch snapshotting, Pred@k and per-class
precision/recall evaluation. Training is a single-threaded deterministic loop:
the same (dataset, config, seed) reproduces the model bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .diagnostics import TemplateRegistry
from .encoder import FeatureVocabulary
from .repair import ClassTable


@dataclass(frozen=True)
class NetworkConfig:
    hidden_units: int = 512
    dropout_rate: float = 0.2
    epochs: int = 6
    batch_size: int = 32
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    seed: int = 0
    split: tuple[float, float, float] = (0.70, 0.10, 0.20)

    def __post_init__(self):
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")
        if abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")
        for name in ("hidden_units", "epochs", "batch_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass
class Params:
    W1: np.ndarray  # (H, V)
    b1: np.ndarray  # (H,)
    W2: np.ndarray  # (K, H)
    b2: np.ndarray  # (K,)

    def copy(self) -> "Params":
        return Params(self.W1.copy(), self.b1.copy(), self.W2.copy(), self.b2.copy())

    def flat(self) -> list[np.ndarray]:
        return [self.W1, self.b1, self.W2, self.b2]


@dataclass
class TrainedModel:
    vocab: FeatureVocabulary
    class_table: ClassTable
    template_registry: TemplateRegistry
    params: Params
    config: NetworkConfig
    metrics: dict = field(default_factory=dict)

    @property
    def num_classes(self) -> int:
        return self.params.W2.shape[0]


@dataclass
class EvalReport:
    pred_at_k: dict[int, float]
    # class_id -> (precision, recall, support, top_confusion or None)
    per_class: dict[int, tuple[float, float, int, int | None]]


class DatasetError(ValueError):
    pass


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def init_params(rng: np.random.Generator, n_inputs: int, hidden: int, n_classes: int) -> Params:
    # He-normal for the ReLU layer; zero biases.
    w1 = rng.normal(0.0, np.sqrt(2.0 / n_inputs), size=(hidden, n_inputs)).astype(np.float32)
    w2 = rng.normal(0.0, np.sqrt(2.0 / hidden), size=(n_classes, hidden)).astype(np.float32)
    return Params(w1, np.zeros(hidden, np.float32), w2, np.zeros(n_classes, np.float32))


def forward(
    params: Params,
    x: np.ndarray,
    training: bool = False,
    dropout_rate: float = 0.0,
    dropout_mask: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
):
    """Forward pass for one input (V,) or a batch (N, V).

    Inverted dropout: during training kept hidden units are scaled by
    1/(1-p), so inference applies no correction. Returns (probs, hidden).
    """
    h = np.maximum(x @ params.W1.T + params.b1, 0.0)
    if training and dropout_rate > 0.0:
        if dropout_mask is None:
            if rng is None:
                raise ValueError("training with dropout needs a mask or an rng")
            dropout_mask = (rng.random(h.shape) >= dropout_rate).astype(h.dtype)
        h = h * dropout_mask / (1.0 - dropout_rate)
    probs = softmax(h @ params.W2.T + params.b2)
    return probs, h


def loss_and_grads(params: Params, x: np.ndarray, y_onehot: np.ndarray,
                   dropout_rate: float = 0.0, rng: np.random.Generator | None = None):
    """Mean cross-entropy over the batch and gradients for all parameters."""
    x = np.atleast_2d(x)
    y_onehot = np.atleast_2d(y_onehot)
    n = x.shape[0]
    drop_scale = None
    if dropout_rate > 0.0:
        if rng is None:
            raise ValueError("training with dropout needs an rng")
        mask = (rng.random((n, params.W1.shape[0])) >= dropout_rate)
        probs, h = forward(params, x, training=True, dropout_rate=dropout_rate,
                           dropout_mask=mask.astype(np.float32))
        drop_scale = mask / (1.0 - dropout_rate)
    else:
        probs, h = forward(params, x)
    loss = float(-np.mean(np.sum(y_onehot * np.log(probs + 1e-12), axis=1)))
    dz2 = (probs - y_onehot) / n            # (N, K)
    gW2 = dz2.T @ h
    gb2 = dz2.sum(axis=0)
    dh = dz2 @ params.W2                    # (N, H)
    # ReLU gate plus the inverted-dropout scale on kept units.
    dz1 = dh * (h > 0.0)
    if drop_scale is not None:
        dz1 = dz1 * drop_scale
    gW1 = dz1.T @ x
    gb1 = dz1.sum(axis=0)
    return loss, Params(gW1.astype(np.float32), gb1.astype(np.float32),
                        gW2.astype(np.float32), gb2.astype(np.float32))


class Adam:
    def __init__(self, params: Params, config: NetworkConfig):
        self.cfg = config
        self.t = 0
        self.m = [np.zeros_like(p) for p in params.flat()]
        self.v = [np.zeros_like(p) for p in params.flat()]

    def step(self, params: Params, grads: Params) -> None:
        cfg = self.cfg
        self.t += 1
        for i, (p, g) in enumerate(zip(params.flat(), grads.flat())):
            self.m[i] = cfg.adam_beta1 * self.m[i] + (1 - cfg.adam_beta1) * g
            self.v[i] = cfg.adam_beta2 * self.v[i] + (1 - cfg.adam_beta2) * g * g
            m_hat = self.m[i] / (1 - cfg.adam_beta1 ** self.t)
            v_hat = self.v[i] / (1 - cfg.adam_beta2 ** self.t)
            p -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_epsilon)


def split_dataset(labels: np.ndarray, config: NetworkConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Deterministic seeded 70/10/20 split, stratified by class.

    Classes with fewer than 5 members are assigned proportionally with at
    least one member forced into training. Returns (train, val, test) index
    arrays.
    """
    rng = np.random.default_rng(config.seed)
    train_frac, val_frac, _ = config.split
    train, val, test = [], [], []
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        idx = idx[rng.permutation(len(idx))]
        n = len(idx)
        n_train = max(1, int(round(n * train_frac)))
        n_val = int(round(n * val_frac))
        if n_train + n_val > n:
            n_val = n - n_train
        train.extend(idx[:n_train])
        val.extend(idx[n_train:n_train + n_val])
        test.extend(idx[n_train + n_val:])
    return (np.sort(np.array(train, dtype=np.int64)),
            np.sort(np.array(val, dtype=np.int64)),
            np.sort(np.array(test, dtype=np.int64)))


def _pred_at_k(params: Params, x: np.ndarray, y: np.ndarray, k: int) -> float:
    if len(y) == 0:
        return 0.0
    probs, _ = forward(params, x)
    # Stable sort on -p keeps ascending class id on ties.
    topk = np.argsort(-probs, axis=1, kind="stable")[:, :k]
    return float(np.mean((topk == y[:, None]).any(axis=1)))


def train(
    dataset: list[tuple[np.ndarray, int]],
    config: NetworkConfig,
    vocab: FeatureVocabulary | None = None,
    class_table: ClassTable | None = None,
    template_registry: TemplateRegistry | None = None,
) -> TrainedModel:
    """Train on (feature vector, class id) pairs; returns the epoch snapshot
    with the best validation Pred@1 (ties favor the earlier epoch)."""
    if not dataset:
        raise DatasetError("empty dataset")
    X = np.stack([x for x, _ in dataset]).astype(np.float32)
    y = np.array([c for _, c in dataset], dtype=np.int64)
    n_classes = int(y.max()) + 1

    train_idx, val_idx, test_idx = split_dataset(y, config)
    present = set(np.unique(y[train_idx]).tolist())
    missing = sorted(set(range(n_classes)) - present)
    if missing:
        raise DatasetError(f"classes absent from training split: {missing}")

    rng = np.random.default_rng(config.seed)
    params = init_params(rng, X.shape[1], config.hidden_units, n_classes)
    optimizer = Adam(params, config)
    onehot = np.eye(n_classes, dtype=np.float32)

    best = params.copy()
    best_pred1 = -1.0
    best_epoch = -1
    history = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(train_idx))
        epoch_loss = 0.0
        batches = 0
        for start in range(0, len(order), config.batch_size):
            batch = train_idx[order[start:start + config.batch_size]]
            loss, grads = loss_and_grads(
                params, X[batch], onehot[y[batch]],
                dropout_rate=config.dropout_rate, rng=rng,
            )
            optimizer.step(params, grads)
            epoch_loss += loss
            batches += 1
        val_pred1 = _pred_at_k(params, X[val_idx], y[val_idx], 1)
        history.append({"epoch": epoch, "train_loss": epoch_loss / max(batches, 1),
                        "val_pred1": val_pred1})
        if val_pred1 > best_pred1:
            best_pred1 = val_pred1
            best_epoch = epoch
            best = params.copy()

    model = TrainedModel(
        vocab=vocab or FeatureVocabulary([f"f{i}" for i in range(X.shape[1])]),
        class_table=class_table or _trivial_class_table(n_classes),
        template_registry=template_registry or TemplateRegistry(frozen=True),
        params=best,
        config=config,
        metrics={
            "history": history,
            "best_epoch": best_epoch,
            "val_pred1": best_pred1,
            "split_sizes": [len(train_idx), len(val_idx), len(test_idx)],
        },
    )
    test_report = evaluate(model, [(X[i], int(y[i])) for i in test_idx]) if len(test_idx) else None
    if test_report is not None:
        model.metrics["test_pred_at_k"] = {k: v for k, v in test_report.pred_at_k.items()}
    return model


def _trivial_class_table(n_classes: int) -> ClassTable:
    from .repair import ErrorRepairClass, RepairTokenSet
    return ClassTable([
        ErrorRepairClass(i, (i + 1,), RepairTokenSet((f"T{i}",), ()), 1)
        for i in range(n_classes)
    ])


def predict_topk(model: TrainedModel, x: np.ndarray, k: int) -> list[tuple[int, float]]:
    """Top-k classes by descending probability; ties break toward the lower
    class id (the higher-frequency class)."""
    if not 1 <= k <= model.num_classes:
        raise ValueError(f"k must be in [1, {model.num_classes}]")
    probs, _ = forward(model.params, x)
    order = np.argsort(-probs, kind="stable")[:k]
    return [(int(i), float(probs[i])) for i in order]


def evaluate(model: TrainedModel, test_set: list[tuple[np.ndarray, int]]) -> EvalReport:
    """Pred@{1,3,5} plus per-class precision/recall from the top-1 confusion."""
    if not test_set:
        raise ValueError("empty test set")
    X = np.stack([x for x, _ in test_set]).astype(np.float32)
    y = np.array([c for _, c in test_set], dtype=np.int64)
    k_values = [k for k in (1, 3, 5) if k <= model.num_classes] or [1]
    pred_at_k = {k: _pred_at_k(model.params, X, y, k) for k in k_values}

    probs, _ = forward(model.params, X)
    top1 = np.argsort(-probs, axis=1, kind="stable")[:, 0]
    K = model.num_classes
    confusion = np.zeros((K, K), dtype=np.int64)
    for true, pred in zip(y, top1):
        confusion[true, pred] += 1
    per_class = {}
    for c in range(K):
        support = int(confusion[c].sum())
        tp = int(confusion[c, c])
        predicted = int(confusion[:, c].sum())
        precision = tp / predicted if predicted else 0.0
        recall = tp / support if support else 0.0
        wrong = confusion[c].copy()
        wrong[c] = 0
        top_confusion = int(np.argmax(wrong)) if wrong.sum() else None
        per_class[c] = (precision, recall, support, top_confusion)
    return EvalReport(pred_at_k, per_class)


def gradient_check(n_inputs: int = 5, hidden: int = 4, n_classes: int = 3,
                   n_samples: int = 3, seed: int = 0, step: float = 1e-5) -> float:
    """Max relative error of analytic vs central-finite-difference gradients
    on a small random network with dropout off."""
    rng = np.random.default_rng(seed)
    params = init_params(rng, n_inputs, hidden, n_classes)
    # float64 for a meaningful finite-difference comparison
    params = Params(*(p.astype(np.float64) for p in params.flat()))
    X = rng.random((n_samples, n_inputs))
    y = rng.integers(0, n_classes, n_samples)
    Y = np.eye(n_classes)[y]

    _, grads = loss_and_grads(params, X, Y)
    max_rel = 0.0
    for p, g in zip(params.flat(), grads.flat()):
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = p[idx]
            p[idx] = orig + step
            lp, _ = loss_and_grads(params, X, Y)
            p[idx] = orig - step
            lm, _ = loss_and_grads(params, X, Y)
            p[idx] = orig
            numeric = (lp - lm) / (2 * step)
            denom = max(abs(numeric), abs(float(g[idx])), 1e-8)
            max_rel = max(max_rel, abs(numeric - float(g[idx])) / denom)
    return max_rel
