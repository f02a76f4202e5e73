"""Accuracy, comparison metrics and the experimental protocols."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .classifiers import Classifier, decision_values, decide, nn_dtw_predict
from .data import Dataset, kfold_split
from .errors import DivisionDomain, EmptyDataset, ShapeMismatch
from .learning import TrainConfig, train

ELASTICITY_GRID = (1, 2, 3, 4, 5, 7, 10, 15, 20, 25, 30, 35, 40, 45, 50)


def predictions(clf: Classifier, ds: Dataset, seed: int = 0) -> np.ndarray:
    """Predicted labels; argmax ties draw from a generator seeded with ``seed``."""
    rng = np.random.default_rng(seed)
    return np.array([decide(clf, decision_values(clf, s), rng) for s in ds.series], dtype=np.int64)


def accuracy(clf: Classifier, ds: Dataset, seed: int = 0) -> float:
    if len(ds) == 0:
        raise EmptyDataset("accuracy of an empty dataset")
    return 100.0 * float(np.mean(predictions(clf, ds, seed) == ds.labels))


def nn_dtw_accuracy(train_ds: Dataset, test_ds: Dataset) -> float:
    if len(test_ds) == 0:
        raise EmptyDataset("accuracy of an empty dataset")
    hits = [nn_dtw_predict(train_ds, s) == y for s, y in test_ds]
    return 100.0 * float(np.mean(hits))


def _as_accs(accs) -> np.ndarray:
    a = np.asarray(accs, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] == 0:
        raise ShapeMismatch(f"expected a (classifiers, datasets) matrix, got shape {a.shape}")
    return a


def winning_percentage(accs) -> np.ndarray:
    """``w[i, j]``: percentage of datasets where classifier i beats j strictly."""
    a = _as_accs(accs)
    wins = (a[:, None, :] > a[None, :, :]).sum(axis=2)
    return 100.0 * wins / a.shape[1]


def tie_percentage(accs) -> np.ndarray:
    w = winning_percentage(accs)
    return 100.0 - w - w.T


def mean_percentage_difference(accs) -> np.ndarray:
    a = _as_accs(accs)
    num = a[:, None, :] - a[None, :, :]
    den = a[:, None, :] + a[None, :, :]
    if np.any(den == 0):
        raise DivisionDomain("accuracies of a pair sum to zero on some dataset")
    return 100.0 * 2.0 / a.shape[1] * (num / den).sum(axis=2)


@dataclass
class RankTable:
    ranks: np.ndarray  # (classifiers, datasets), mean ranks on ties
    counts: np.ndarray  # (classifiers, n_classifiers): datasets with rank r+1 (ties rounded down)
    mean: np.ndarray
    std: np.ndarray


def rank_table(accs) -> RankTable:
    """Rank 1 is the highest accuracy; ties share the mean of their positions."""
    a = _as_accs(accs)
    ranks = np.column_stack([rankdata(-a[:, d], method="average") for d in range(a.shape[1])])
    c = a.shape[0]
    counts = np.zeros((c, c), dtype=np.int64)
    for i in range(c):
        for r in ranks[i]:
            counts[i, int(np.floor(r)) - 1] += 1
    return RankTable(ranks, counts, ranks.mean(axis=1), ranks.std(axis=1))


@dataclass
class GridResult:
    best: int
    risks: dict[int, float] = field(default_factory=dict)
    models: dict[int, Classifier] = field(default_factory=dict)


def elasticity_grid(base: TrainConfig, grid: Sequence[int], ds: Dataset, kind: str = "ep") -> GridResult:
    """Train one model per elasticity; pick the lowest training risk (smallest e on ties).

    Every run uses ``base.seed`` unchanged, so results do not depend on grid order.
    """
    result = GridResult(best=-1)
    for e in grid:
        clf, trace = train(replace(base, elasticity=int(e)), ds, kind)
        result.risks[int(e)] = trace.best_risk
        result.models[int(e)] = clf
    result.best = min(sorted(result.risks), key=lambda e: result.risks[e])
    return result


def cross_validate(cfg: TrainConfig, ds: Dataset, kind: str, folds: int = 10,
                   seed: int = 0) -> list[float]:
    """Test accuracy per fold of a stratified k-fold split."""
    out = []
    for f, (tr, te) in enumerate(kfold_split(ds, folds, seed)):
        clf, _ = train(cfg, tr, kind)
        out.append(accuracy(clf, te, seed + f))
    return out


@dataclass
class LabelDependencyResult:
    """Training and test accuracies of EP_min, EP_max and EP_2."""

    train_acc: dict[str, float]
    test_acc: dict[str, float]
    single_by_positive: dict[int, float]
    ep2_labeling: int
    models: dict[str, Classifier]


def label_dependency(cfg: TrainConfig, train_ds: Dataset, test_ds: Optional[Dataset] = None,
                     kind: str = "ep", seed: int = 0) -> LabelDependencyResult:
    """Single-discriminant models under both sign assignments against a two-discriminant model.

    EP_min/EP_max are the single-discriminant runs with the worse/better
    training accuracy. EP_2 uses two discriminants with a multinomial loss
    on a labeling (identity or swapped) drawn from ``seed``.
    """
    if train_ds.n_classes != 2:
        raise ValueError("label dependency needs a two-category problem")
    test_ds = train_ds if test_ds is None else test_ds
    single_loss = "logistic" if cfg.loss == "multinomial" else cfg.loss
    runs = {}
    for pos in (1, 2):
        c = replace(cfg, num_discriminants=1, positive_label=pos, loss=single_loss)
        clf, _ = train(c, train_ds, kind)
        runs[pos] = (clf, accuracy(clf, train_ds, seed), accuracy(clf, test_ds, seed))
    lo, hi = sorted(runs, key=lambda p: (runs[p][1], -p))
    swap = int(np.random.default_rng(seed).integers(2))
    mapping = {1: 2, 2: 1} if swap else {1: 1, 2: 2}
    c2 = replace(cfg, num_discriminants=2, loss="multinomial")
    clf2, _ = train(c2, train_ds.relabel(mapping), kind)
    ep2_train = accuracy(clf2, train_ds.relabel(mapping), seed)
    ep2_test = accuracy(clf2, test_ds.relabel(mapping), seed)
    return LabelDependencyResult(
        train_acc={"ep_min": runs[lo][1], "ep_max": runs[hi][1], "ep_2": ep2_train},
        test_acc={"ep_min": runs[lo][2], "ep_max": runs[hi][2], "ep_2": ep2_test},
        single_by_positive={p: runs[p][1] for p in runs},
        ep2_labeling=swap,
        models={"ep_min": runs[lo][0], "ep_max": runs[hi][0], "ep_2": clf2},
    )


def format_table(header: Sequence[str], rows: Sequence[Sequence], sep: str = "\t") -> str:
    def cell(v):
        if isinstance(v, (float, np.floating)):
            return f"{float(v):.4f}"
        return str(v)

    lines = [sep.join(header)] + [sep.join(cell(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def format_matrix(names: Sequence[str], mat: np.ndarray, sep: str = "\t") -> str:
    return format_table([""] + list(names), [[n] + list(row) for n, row in zip(names, mat)], sep)
