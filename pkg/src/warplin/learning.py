"""Losses, stochastic subgradients, ADAM and the training loop."""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .classifiers import Classifier, bias_mask, decide, discriminant, param_shape
from .data import Dataset
from .errors import DimensionMismatch, EmptyDataset, IndexOutOfRange, LabelDomainError, LabelOutOfRange

log = logging.getLogger(__name__)

BINARY_LOSSES = ("adaline", "perceptron", "margin_perceptron", "hinge", "logistic")
LOSSES = BINARY_LOSSES + ("multinomial",)
HINGE_DEFAULT_LAMBDA = 1e-4


@dataclass(frozen=True)
class Loss:
    name: str
    xi: float = 1.0

    def __post_init__(self):
        if self.name not in LOSSES:
            raise ValueError(f"unknown loss {self.name!r}; choose from {LOSSES}")
        if self.name == "margin_perceptron" and not self.xi > 0:
            raise ValueError("margin perceptron needs xi > 0")


def as_loss(kind) -> Loss:
    return kind if isinstance(kind, Loss) else Loss(str(kind))


def _check_binary(loss: Loss, y):
    allowed = (0, 1) if loss.name == "logistic" else (-1, 1)
    if y not in allowed:
        raise LabelDomainError(f"{loss.name} loss needs y in {allowed}, got {y!r}")


def _check_multinomial(y, yhat):
    yhat = np.asarray(yhat, dtype=np.float64)
    if yhat.ndim != 1 or yhat.size < 2:
        raise LabelDomainError("multinomial loss needs a vector of at least two scores")
    if not (isinstance(y, (int, np.integer)) and 1 <= y <= yhat.size):
        raise LabelDomainError(f"multinomial label must be an integer in 1..{yhat.size}, got {y!r}")
    return yhat


def _log_softmax(s: np.ndarray) -> np.ndarray:
    top = s.max()
    return s - top - math.log(np.exp(s - top).sum())


def loss_value(kind, y, yhat):
    loss = as_loss(kind)
    if loss.name == "multinomial":
        s = _check_multinomial(y, yhat)
        return float(-_log_softmax(s)[y - 1])
    _check_binary(loss, y)
    yhat = float(yhat)
    if loss.name == "adaline":
        return 0.5 * (y - yhat) ** 2
    if loss.name == "perceptron":
        return max(0.0, -y * yhat)
    if loss.name == "margin_perceptron":
        return max(0.0, loss.xi - y * yhat)
    if loss.name == "hinge":
        return max(0.0, 1.0 - y * yhat)
    # logistic, y in {0, 1}: log(1 + e^yhat) - y*yhat
    return float(np.logaddexp(0.0, yhat) - y * yhat)


def loss_derivative(kind, y, yhat):
    """Derivative with respect to the prediction; 0 at the hinge kinks."""
    loss = as_loss(kind)
    if loss.name == "multinomial":
        s = _check_multinomial(y, yhat)
        g = np.exp(_log_softmax(s))
        g[y - 1] -= 1.0
        return g
    _check_binary(loss, y)
    yhat = float(yhat)
    if loss.name == "adaline":
        return -(y - yhat)
    if loss.name == "perceptron":
        return -float(y) if -y * yhat > 0 else 0.0
    if loss.name == "margin_perceptron":
        return -float(y) if loss.xi - y * yhat > 0 else 0.0
    if loss.name == "hinge":
        return -float(y) if 1.0 - y * yhat > 0 else 0.0
    return 1.0 / (1.0 + math.exp(-yhat)) - y if yhat >= 0 else math.exp(yhat) / (1.0 + math.exp(yhat)) - y


def p_inflation(u, p: int, c: int) -> np.ndarray:
    """Stack of ``c`` segments with ``u`` in segment ``p`` (1-based) and zeros elsewhere."""
    u = np.asarray(u, dtype=np.float64).ravel()
    if not 1 <= p <= c:
        raise IndexOutOfRange(f"segment {p} outside 1..{c}")
    out = np.zeros(c * u.size)
    out[(p - 1) * u.size : p * u.size] = u
    return out
    return out


@dataclass
class TrainConfig:
    elasticity: int = 1
    loss: str = "multinomial"
    lam: float = 0.0
    xi: float = 1.0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    max_epochs: int = 5000
    patience: int = 100
    seed: int = 0
    lr: Optional[float] = None
    regularize_bias: bool = False
    band: Optional[float] = None
    num_discriminants: Optional[int] = None
    positive_label: int = 1
    init_scale: float = 0.01
    lr_trial_epochs: int = 100

    def __post_init__(self):
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("ADAM decay rates must lie in [0, 1)")
        if self.max_epochs < 1 or self.patience < 1:
            raise ValueError("max_epochs and patience must be positive")
        if self.lam < 0:
            raise ValueError("regularization weight must be non-negative")
        if self.elasticity < 1:
            raise ValueError("elasticity must be positive")
        as_loss(self.loss)
        if self.loss == "hinge" and self.lam == 0:
            self.lam = HINGE_DEFAULT_LAMBDA

    @property
    def loss_spec(self) -> Loss:
        return Loss(self.loss, self.xi)

    def to_dict(self) -> dict:
        return asdict(self)


# ------------------------------------------------------------- per example


def _reg_mask(clf: Classifier, regularize_bias: bool) -> np.ndarray:
    shape = clf.params.shape[1:]
    if regularize_bias:
        return np.ones(shape, dtype=bool)
    return ~bias_mask(clf.kind, shape)


def _targets(clf: Classifier, label: int, loss: Loss):
    """Per-discriminant binary targets, or the class label for multinomial."""
    if not 1 <= label <= clf.n_classes:
        raise LabelOutOfRange(f"label {label} outside 1..{clf.n_classes}")
    if loss.name == "multinomial":
        if clf.single:
            raise ValueError("multinomial loss needs K discriminants")
        return int(label)
    if clf.single:
        ys = [1 if label == clf.positive_label else -1]
    else:
        # one-vs-rest
        ys = [1 if label == k + 1 else -1 for k in range(clf.n_classes)]
    if loss.name == "logistic":
        ys = [(y + 1) // 2 for y in ys]
    return ys


def _loss_and_dloss(values: np.ndarray, target, loss: Loss):
    if loss.name == "multinomial":
        return loss_value(loss, target, values), loss_derivative(loss, target, values)
    vals = [loss_value(loss, y, v) for y, v in zip(target, values)]
    ders = [loss_derivative(loss, y, v) for y, v in zip(target, values)]
    return float(sum(vals)), np.array(ders)


def regularizer(clf: Classifier, regularize_bias: bool = False) -> float:
    """``||theta||^2`` over all discriminants, bias slots excluded unless requested."""
    m = _reg_mask(clf, regularize_bias)
    return float(np.sum(clf.params[:, m] ** 2))


def example_loss(clf: Classifier, example, cfg: TrainConfig) -> float:
    """Regularized per-example loss ``l(y, f(x)) + lam * rho(theta)``."""
    x, label = example
    xa = clf.augment(x)
    values = np.array([discriminant(clf, th, xa)[0] for th in clf.params])
    value, _ = _loss_and_dloss(values, _targets(clf, int(label), cfg.loss_spec), cfg.loss_spec)
    return value + cfg.lam * regularizer(clf, cfg.regularize_bias)


def subgradient_step(clf: Classifier, example, cfg: TrainConfig, _xa=None) -> np.ndarray:
    """Subgradient of :func:`example_loss` with respect to ``clf.params``.

    The loss part of discriminant ``k`` is ``dl/df_k`` times the feature of
    its active component (the optimal path for WP/EP, the smallest active
    index for ML). The regularizer contributes ``2 * lam * theta`` on every
    non-bias slot.
    """
    x, label = example
    xa = clf.augment(x) if _xa is None else _xa
    out = np.empty_like(clf.params)
    values = np.empty(clf.num_discriminants)
    for k, theta in enumerate(clf.params):
        values[k], out[k] = discriminant(clf, theta, xa)
    _, dl = _loss_and_dloss(values, _targets(clf, int(label), cfg.loss_spec), cfg.loss_spec)
    out *= np.reshape(dl, (-1,) + (1,) * (out.ndim - 1))
    if cfg.lam:
        m = _reg_mask(clf, cfg.regularize_bias)
        out[:, m] += 2.0 * cfg.lam * clf.params[:, m]
    return out


def adam_update(m, v, t: int, g, lr: float, beta1=0.9, beta2=0.999, eps=1e-8):
    """One bias-corrected ADAM step.

    Returns ``(delta, m, v)`` where ``delta`` is to be added to the parameters.
    """
    if t < 1:
        raise ValueError("ADAM step counter starts at 1")
    m = beta1 * m + (1.0 - beta1) * g
    v = beta2 * v + (1.0 - beta2) * g * g
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    return -lr * m_hat / (np.sqrt(v_hat) + eps), m, v


# ------------------------------------------------------------- risk


def _augmented(clf: Classifier, ds: Dataset) -> list[np.ndarray]:
    return [clf.augment(s) for s in ds.series]


def _risk_and_accuracy(clf: Classifier, xas, labels, cfg: TrainConfig) -> tuple[float, float]:
    loss = cfg.loss_spec
    total, correct = 0.0, 0
    for xa, y in zip(xas, labels):
        values = np.array([discriminant(clf, th, xa)[0] for th in clf.params])
        total += _loss_and_dloss(values, _targets(clf, int(y), loss), loss)[0]
        correct += decide(clf, values) == y
    n = len(labels)
    return total / n + cfg.lam * regularizer(clf, cfg.regularize_bias), 100.0 * correct / n


def regularized_risk(clf: Classifier, ds: Dataset, loss="multinomial", lam: float = 0.0,
                     regularize_bias: bool = False) -> float:
    """Mean loss over ``ds`` plus ``lam * ||theta||^2``."""
    if len(ds) == 0:
        raise EmptyDataset("risk of an empty dataset")
    spec = as_loss(loss)
    cfg = TrainConfig(loss=spec.name, xi=spec.xi, lam=lam, regularize_bias=regularize_bias)
    if spec.name == "hinge":
        cfg.lam = lam
    return _risk_and_accuracy(clf, _augmented(clf, ds), ds.labels, cfg)[0]


# ------------------------------------------------------------- training


@dataclass
class TrainTrace:
    """Per-epoch rows ``(epoch, risk, accuracy)``; epoch 0 is the initial model."""

    rows: list[tuple[int, float, float]] = field(default_factory=list)
    lr: float = float("nan")
    best_epoch: int = 0
    best_risk: float = float("inf")

    @property
    def risks(self) -> list[float]:
        return [r for _, r, _ in self.rows]

    def to_csv(self, path=None, sep=",") -> str:
        text = sep.join(("epoch", "risk", "accuracy")) + "\n"
        text += "".join(f"{e}{sep}{r!r}{sep}{a!r}\n" for e, r, a in self.rows)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def declared_length(ds: Dataset) -> int:
    """Augmented input length ``d`` for a training set."""
    return 1 + ds.max_length


def init_classifier(kind: str, cfg: TrainConfig, ds: Dataset, d: Optional[int] = None,
                    rng: Optional[np.random.Generator] = None) -> Classifier:
    d = declared_length(ds) if d is None else d
    nd = ds.n_classes if cfg.num_discriminants is None else cfg.num_discriminants
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    shape = (nd,) + param_shape(kind, d, cfg.elasticity)
    params = rng.uniform(-cfg.init_scale, cfg.init_scale, size=shape)
    return Classifier(kind, ds.n_classes, params, d, cfg.elasticity, cfg.band, cfg.positive_label,
                      metadata={"config": cfg.to_dict()})


def _check_dataset(ds: Dataset):
    if len(ds) == 0:
        raise EmptyDataset("cannot train on an empty dataset")
    if ds.labels.min() < 1 or ds.labels.max() > ds.n_classes:
        raise LabelOutOfRange(f"labels must lie in 1..{ds.n_classes}")


def _run(kind: str, cfg: TrainConfig, ds: Dataset, lr: float, max_epochs: int,
         patience: Optional[int], d: Optional[int] = None) -> tuple[Classifier, TrainTrace]:
    rng = np.random.default_rng(cfg.seed)
    clf = init_classifier(kind, cfg, ds, d=d, rng=rng)
    xas = _augmented(clf, ds)
    labels = ds.labels
    m = np.zeros_like(clf.params)
    v = np.zeros_like(clf.params)
    t = 0

    trace = TrainTrace(lr=lr)
    risk, acc = _risk_and_accuracy(clf, xas, labels, cfg)
    trace.rows.append((0, risk, acc))
    best_params, trace.best_risk, trace.best_epoch = clf.params.copy(), risk, 0
    stale = 0
    for epoch in range(1, max_epochs + 1):
        for i in rng.permutation(len(xas)):
            g = subgradient_step(clf, (None, labels[i]), cfg, _xa=xas[i])
            t += 1
            delta, m, v = adam_update(m, v, t, g, lr, cfg.beta1, cfg.beta2, cfg.eps)
            clf.params += delta
        risk, acc = _risk_and_accuracy(clf, xas, labels, cfg)
        trace.rows.append((epoch, risk, acc))
        if risk < trace.best_risk:
            best_params, trace.best_risk, trace.best_epoch = clf.params.copy(), risk, epoch
            stale = 0
        else:
            stale += 1
            if patience is not None and stale >= patience:
                break
    clf.params = best_params
    return clf, trace


def select_initial_lr(trial: Callable[[float, Dataset, int], Sequence[float]], ds: Dataset,
                      start: float = 0.8, epochs: int = 100, threshold: float = 0.2,
                      floor: float = 2.0**-20) -> float:
    """Halve the learning rate until a trial run rarely fails to improve.

    ``trial(lr, ds, epochs)`` must train a freshly initialized classifier and
    return the risk before training followed by the risk after each epoch.
    An epoch counts as stale when its risk is not below the best one seen so
    far; the first rate whose stale fraction is below ``threshold`` wins.
    """
    if len(ds) == 0:
        raise EmptyDataset("learning-rate selection needs data")
    lr = start
    while True:
        lr /= 2.0
        if lr < floor:
            log.warning("no learning rate above %g passed the selection test; using the floor", floor)
            return floor
        risks = list(trial(lr, ds, epochs))
        best, stale = risks[0], 0
        for r in risks[1 : epochs + 1]:
            if r < best:
                best = r
            else:
                stale += 1
        if stale / epochs < threshold:
            return lr


def train(cfg: TrainConfig, ds: Dataset, kind: str, d: Optional[int] = None) -> tuple[Classifier, TrainTrace]:
    """Stochastic subgradient training with ADAM and early stopping.

    Returns the parameters with the lowest regularized empirical risk seen at
    any epoch boundary (including the initial ones).
    """
    _check_dataset(ds)
    if cfg.lr is not None:
        lr = cfg.lr
    else:
        def trial(rate, data, epochs):
            return _run(kind, cfg, data, rate, epochs, None, d)[1].risks

        lr = select_initial_lr(trial, ds, epochs=cfg.lr_trial_epochs)
    clf, trace = _run(kind, cfg, ds, lr, cfg.max_epochs, cfg.patience, d)
    clf.metadata.update({"lr": lr, "best_epoch": trace.best_epoch, "best_risk": trace.best_risk})
    return clf, trace
