"""Datasets: UCR-style ingestion, synthetic label-dependency problems, splits."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import EmptyDataset, EmptyFile, ParseError, TooFewExamples


@dataclass
class Dataset:
    """Univariate series with labels in ``1..n_classes``."""

    series: list[np.ndarray]
    labels: np.ndarray
    n_classes: int
    name: str = ""
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.series = [np.asarray(s, dtype=np.float64) for s in self.series]
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if len(self.series) != self.labels.size:
            raise ValueError("series and labels differ in length")
        if self.labels.size and (self.labels.min() < 1 or self.labels.max() > self.n_classes):
            raise ValueError(f"labels must lie in 1..{self.n_classes}")

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self):
        return iter(zip(self.series, self.labels))

    @property
    def max_length(self) -> int:
        if not self.series:
            raise EmptyDataset("dataset is empty")
        return max(s.size for s in self.series)

    def subset(self, indices) -> "Dataset":
        idx = [int(i) for i in indices]
        return Dataset(
            [self.series[i] for i in idx],
            self.labels[idx],
            self.n_classes,
            self.name,
            dict(self.provenance),
        )

    def relabel(self, mapping: dict[int, int]) -> "Dataset":
        return Dataset(
            self.series,
            np.array([mapping[int(y)] for y in self.labels]),
            self.n_classes,
            self.name,
            dict(self.provenance),
        )

    def znormalized(self) -> "Dataset":
        out = []
        for s in self.series:
            sd = s.std()
            out.append((s - s.mean()) / sd if sd > 0 else s - s.mean())
        prov = dict(self.provenance, znorm=True)
        return Dataset(out, self.labels, self.n_classes, self.name, prov)


def load_ucr(path) -> Dataset:
    """Read a UCR-format file: one example per line, label first.

    Fields are comma- or whitespace/tab-separated (detected from the first
    data line). Labels are remapped to ``1..K`` by order of first appearance.
    """
    path = Path(path)
    text = path.read_text()
    lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), start=1)]
    lines = [(n, ln) for n, ln in lines if ln]
    if not lines:
        raise EmptyFile(f"{path} contains no examples")
    splitter = re.compile(r"\s*,\s*") if "," in lines[0][1] else re.compile(r"\s+")

    raw_labels, series = [], []
    for n, ln in lines:
        tokens = [t for t in splitter.split(ln) if t != ""]
        if len(tokens) < 2:
            raise ParseError("expected a label followed by at least one value", line=n)
        try:
            label = float(tokens[0])
            values = np.array([float(t) for t in tokens[1:]])
        except ValueError as exc:
            raise ParseError(str(exc), line=n) from None
        if not np.all(np.isfinite(values)) or not np.isfinite(label):
            raise ParseError("non-finite value", line=n)
        raw_labels.append(int(label) if label.is_integer() else label)
        series.append(values)

    mapping: dict = {}
    for lab in raw_labels:
        mapping.setdefault(lab, len(mapping) + 1)
    labels = np.array([mapping[lab] for lab in raw_labels])
    return Dataset(
        series,
        labels,
        len(mapping),
        name=path.stem,
        provenance={"path": str(path), "label_map": {str(k): v for k, v in mapping.items()}},
    )


def save_ucr(ds: Dataset, path) -> None:
    with open(path, "w") as fh:
        for s, y in ds:
            fh.write(",".join([str(int(y))] + [repr(float(v)) for v in s]) + "\n")


def kfold_split(ds: Dataset, k: int, seed: int = 0) -> list[tuple[Dataset, Dataset]]:
    """Stratified, seeded k-fold partition.

    Examples of each class are shuffled and dealt round-robin onto the
    folds, continuing where the previous class stopped so fold sizes stay
    balanced.
    """
    n = len(ds)
    if k < 2 or k > n:
        raise TooFewExamples(f"cannot split {n} examples into {k} folds")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    offset = 0
    for cls in range(1, ds.n_classes + 1):
        idx = np.flatnonzero(ds.labels == cls)
        idx = idx[rng.permutation(idx.size)]
        fold_of[idx] = (np.arange(idx.size) + offset) % k
        offset = (offset + idx.size) % k
    folds = []
    for f in range(k):
        test = np.flatnonzero(fold_of == f)
        train = np.flatnonzero(fold_of != f)
        folds.append((ds.subset(train), ds.subset(test)))
    return folds


def holdout_split(ds: Dataset, test_fraction: float = 1 / 3, seed: int = 0) -> tuple[Dataset, Dataset]:
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(ds))
    n_test = int(round(test_fraction * len(ds)))
    if n_test < 1 or n_test >= len(ds):
        raise TooFewExamples(f"holdout split of {len(ds)} examples leaves an empty side")
    return ds.subset(np.sort(perm[n_test:])), ds.subset(np.sort(perm[:n_test]))


SYNTH_KINDS = ("disk", "ring3", "grid9", "square2")


def _sample_annulus(rng, n, r_in, r_out):
    # area-uniform radius
    r = np.sqrt(rng.uniform(r_in**2, r_out**2, size=n))
    t = rng.uniform(0.0, 2 * np.pi, size=n)
    return np.column_stack((r * np.cos(t), r * np.sin(t)))


def _sample_open_annulus(rng, n, r_in, r_out):
    """Uniform in ``r_in < |x| <= r_out`` (rejects the measure-zero inner circle)."""
    out = _sample_annulus(rng, n, r_in, r_out)
    bad = np.linalg.norm(out, axis=1) <= r_in
    while bad.any():
        out[bad] = _sample_annulus(rng, int(bad.sum()), r_in, r_out)
        bad = np.linalg.norm(out, axis=1) <= r_in
    return out


def _sample_disk(rng, n, radius):
    out = _sample_annulus(rng, n, 0.0, radius)
    bad = np.linalg.norm(out, axis=1) >= radius
    while bad.any():
        out[bad] = _sample_annulus(rng, int(bad.sum()), 0.0, radius)
        bad = np.linalg.norm(out, axis=1) >= radius
    return out


def _sample_frame(rng, n, inner, outer):
    """Uniform in the square ``[-outer, outer]^2`` minus ``[-inner, inner]^2``."""
    pts = np.empty((0, 2))
    while len(pts) < n:
        cand = rng.uniform(-outer, outer, size=(2 * n, 2))
        cand = cand[np.max(np.abs(cand), axis=1) > inner]
        pts = np.vstack((pts, cand))
    return pts[:n]


def synth_generate(kind: str, n_per_class: int, seed: int = 0) -> Dataset:
    """Two-dimensional points (length-2 series) from the label-dependency problems.

    ``disk``: unit disk (class 1) vs the annulus ``1 < r <= 2`` (class 2).
    ``ring3``: disk ``r < 1``, ring ``1 <= r < 1.5``, outer ring up to ``r = 2.5``.
    ``grid9``: nine unit squares of a 3x3 grid on ``[0, 3]^2``; class ``3*row + col + 1``.
    ``square2``: unit square ``[-0.5, 0.5]^2`` (class 1) vs the frame up to ``|x|_inf <= 1.5``.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be positive")
    rng = np.random.default_rng(seed)
    blocks: list[np.ndarray]
    if kind == "disk":
        blocks = [_sample_disk(rng, n_per_class, 1.0), _sample_open_annulus(rng, n_per_class, 1.0, 2.0)]
    elif kind == "ring3":
        inner = _sample_disk(rng, n_per_class, 1.0)
        ring = _sample_annulus(rng, n_per_class, 1.0, 1.5)
        ring = ring[np.linalg.norm(ring, axis=1) < 1.5]
        while len(ring) < n_per_class:
            extra = _sample_annulus(rng, n_per_class - len(ring), 1.0, 1.5)
            ring = np.vstack((ring, extra[np.linalg.norm(extra, axis=1) < 1.5]))
        outer = _sample_annulus(rng, n_per_class, 1.5, 2.5)
        blocks = [inner, ring, outer]
    elif kind == "grid9":
        blocks = []
        for row in range(3):
            for col in range(3):
                blocks.append(rng.uniform(0.0, 1.0, size=(n_per_class, 2)) + (col, row))
    elif kind == "square2":
        blocks = [rng.uniform(-0.5, 0.5, size=(n_per_class, 2)), _sample_frame(rng, n_per_class, 0.5, 1.5)]
    else:
        raise ValueError(f"unknown synthetic kind {kind!r}; choose from {SYNTH_KINDS}")
    series = [pt for block in blocks for pt in block]
    labels = np.repeat(np.arange(1, len(blocks) + 1), n_per_class)
    return Dataset(
        series,
        labels,
        len(blocks),
        name=kind,
        provenance={"generator": kind, "n_per_class": n_per_class, "seed": seed},
    )


def concat(parts: Sequence[Dataset]) -> Dataset:
    first = parts[0]
    series = [s for p in parts for s in p.series]
    labels = np.concatenate([p.labels for p in parts])
    return Dataset(series, labels, first.n_classes, first.name, dict(first.provenance))
