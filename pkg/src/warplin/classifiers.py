"""Classifier families SM, WP, EP and ML, the 1-NN-DTW baseline, persistence.

Parameters of all discriminants are stacked in one array whose leading axis
indexes the discriminant:

====  ===================  =========================================
kind  ``params`` shape     discriminant ``f_k(x)``
====  ===================  =========================================
sm    ``(D, d)``           ``theta_k @ (1, x)``
wp    ``(D, e)``           warped product with ``(0, 1, x, 0)``
ep    ``(D, d, e)``        elastic product with ``(1, x)``
ml    ``(D, c, d)``        ``max_p theta_k[p] @ (1, x)``
====  ===================  =========================================

``D`` is either ``K`` or 1; the single-discriminant form requires ``K == 2``
and assigns ``positive_label`` iff ``f(x) > 0``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional

import numpy as np

from . import _dp
from .data import Dataset
from .errors import DimensionMismatch, EmptyDataset, FormatVersionMismatch, InfeasibleConstraint
from .products import dtw_distance
from .warping import band_constraint

KINDS = ("sm", "wp", "ep", "ml")
AUGMENTATIONS = ("lead_one", "lead_one_pad_zeros")
FORMAT_HEADER = "warplin-model v1"


def augment(x, mode: str = "lead_one") -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if mode == "lead_one":
        return np.concatenate(([1.0], x))
    if mode == "lead_one_pad_zeros":
        return np.concatenate(([0.0, 1.0], x, [0.0]))
    raise ValueError(f"unknown augmentation mode {mode!r}")


@lru_cache(maxsize=4096)
def _mask(m: int, n: int, band: Optional[float]) -> np.ndarray:
    if band is None:
        mask = np.ones((m, n), dtype=bool)
        mask.setflags(write=False)
        return mask
    return band_constraint(m, n, band).mask


@dataclass(eq=False)
class Classifier:
    kind: str
    n_classes: int
    params: np.ndarray
    d: int
    elasticity: int = 1
    band: Optional[float] = None
    positive_label: int = 1
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        self.params = np.asarray(self.params, dtype=np.float64)
        if self.num_discriminants not in (1, self.n_classes):
            raise ValueError("number of discriminants must be 1 or K")
        if self.num_discriminants == 1 and self.n_classes != 2:
            raise ValueError("single-discriminant mode requires K == 2")
        expected = param_shape(self.kind, self.d, self.elasticity)
        if self.params.shape[1:] != expected:
            raise DimensionMismatch(f"{self.kind} parameters need shape (D, {expected}), got {self.params.shape}")

    @classmethod
    def zeros(cls, kind, n_classes, d, elasticity=1, num_discriminants=None, **kw) -> "Classifier":
        nd = n_classes if num_discriminants is None else num_discriminants
        return cls(kind, n_classes, np.zeros((nd,) + param_shape(kind, d, elasticity)), d, elasticity, **kw)

    @property
    def num_discriminants(self) -> int:
        return self.params.shape[0]

    @property
    def single(self) -> bool:
        return self.num_discriminants == 1

    @property
    def augmentation(self) -> str:
        return "lead_one_pad_zeros" if self.kind == "wp" else "lead_one"

    def augment(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "sm" and x.size != self.d - 1:
            raise DimensionMismatch(f"SM needs series of length {self.d - 1}, got {x.size}")
        if self.kind in ("ep", "ml") and x.size > self.d - 1:
            raise DimensionMismatch(f"series of length {x.size} exceeds the declared maximum {self.d - 1}")
        if self.kind == "ml" and x.size != self.d - 1:
            raise DimensionMismatch(f"ML needs series of length {self.d - 1}, got {x.size}")
        return augment(x, self.augmentation)

    def copy(self) -> "Classifier":
        return Classifier(
            self.kind, self.n_classes, self.params.copy(), self.d, self.elasticity,
            self.band, self.positive_label, json.loads(json.dumps(self.metadata)),
        )


def param_shape(kind: str, d: int, elasticity: int) -> tuple[int, ...]:
    if kind == "sm":
        return (d,)
    if kind == "wp":
        return (elasticity,)
    if kind == "ep":
        return (d, elasticity)
    if kind == "ml":
        return (elasticity, d)
    raise ValueError(f"unknown classifier kind {kind!r}")


def bias_mask(kind: str, shape: tuple[int, ...]) -> np.ndarray:
    """True on the bias slots of a single discriminant's parameter block."""
    out = np.zeros(shape, dtype=bool)
    if kind in ("sm", "wp"):
        out[0] = True
    elif kind == "ep":
        out[0, :] = True
    else:
        out[:, 0] = True
    return out


def _dot(a, b) -> float:
    return float(np.dot(np.ascontiguousarray(a), np.ascontiguousarray(b)))


def discriminant(clf: Classifier, theta: np.ndarray, xa: np.ndarray) -> tuple[float, np.ndarray]:
    """Value of one discriminant at augmented input ``xa`` and its active feature.

    The feature ``g`` has the shape of ``theta`` and ``value == sum(theta * g)``:
    the input itself (SM), ``M_p x`` (WP), the p-matrix ``X_p`` (EP), or the
    input placed in the slot of the active component (ML).
    """
    kind = clf.kind
    if kind == "sm":
        return _dot(theta, xa), xa
    if kind == "ml":
        s = theta @ xa
        k = int(np.argmax(s))
        g = np.zeros_like(theta)
        g[k] = xa
        return float(s[k]), g
    if kind == "wp":
        mask = _mask(theta.size, xa.size, clf.band)
        value, rows, cols = _dp.maxplus(np.outer(theta, xa), mask)
        if value == -np.inf:
            raise InfeasibleConstraint("no admissible warping path")
        g = np.zeros_like(theta)
        np.add.at(g, rows, xa[cols])
        return float(value), g
    length = xa.size
    sub = theta[:length]
    if theta.shape[1] == 1 and clf.band is None:
        # a single column admits exactly one path; sum it the way SM does
        g = np.zeros_like(theta)
        g[:length, 0] = xa
        return _dot(sub[:, 0], xa), g
    mask = _mask(length, theta.shape[1], clf.band)
    value, rows, cols = _dp.maxplus(sub * xa[:, None], mask)
    if value == -np.inf:
        raise InfeasibleConstraint("no admissible warping path")
    g = np.zeros_like(theta)
    g[rows, cols] = xa[rows]
    return float(value), g


def decision_values(clf: Classifier, x) -> np.ndarray:
    """``f_k(x)`` for every discriminant (length 1 in single-discriminant mode)."""
    xa = clf.augment(x)
    return np.array([discriminant(clf, theta, xa)[0] for theta in clf.params])


def decide(clf: Classifier, values: np.ndarray, rng=None) -> int:
    """Label from decision values; argmax ties are broken uniformly with ``rng``.

    Without an ``rng`` the lowest tied label wins.
    """
    if clf.single:
        negative = 2 if clf.positive_label == 1 else 1
        return clf.positive_label if values[0] > 0 else negative
    top = np.flatnonzero(values == values.max())
    if top.size == 1 or rng is None:
        return int(top[0]) + 1
    return int(rng.choice(top)) + 1


def predict(clf: Classifier, x, rng=None) -> int:
    return decide(clf, decision_values(clf, x), rng)


def nn_dtw_predict(train: Dataset, x) -> int:
    """Label of the nearest training series under DTW; ties go to the lowest index."""
    if len(train) == 0:
        raise EmptyDataset("1-NN needs at least one training example")
    best, label = np.inf, None
    for s, y in train:
        dist = dtw_distance(s, x)
        if dist < best:
            best, label = dist, int(y)
    return label


# ---------------------------------------------------------------- persistence


def _fmt_floats(values) -> str:
    return ",".join(repr(float(v)) for v in np.ravel(values))


def save_model(clf: Classifier, path) -> None:
    lines = [
        FORMAT_HEADER,
        f"kind = {clf.kind}",
        f"n_classes = {clf.n_classes}",
        f"num_discriminants = {clf.num_discriminants}",
        f"d = {clf.d}",
        f"elasticity = {clf.elasticity}",
        f"augmentation = {clf.augmentation}",
        f"band = {'none' if clf.band is None else repr(float(clf.band))}",
        f"positive_label = {clf.positive_label}",
        f"metadata = {json.dumps(clf.metadata, sort_keys=True)}",
        f"shape = {','.join(str(s) for s in clf.params.shape)}",
    ]
    for k, theta in enumerate(clf.params):
        lines.append(f"[discriminant {k}]")
        # rows of the (last-axis) matrix view, one per line
        for row in theta.reshape(-1, theta.shape[-1]):
            lines.append(_fmt_floats(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path) -> Classifier:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise FormatVersionMismatch(f"{path}: expected header {FORMAT_HEADER!r}")
    try:
        header, blocks, current = {}, [], None
        for ln in lines[1:]:
            ln = ln.strip()
            if not ln:
                continue
            if ln.startswith("[discriminant"):
                current = []
                blocks.append(current)
            elif current is None:
                key, _, value = ln.partition(" = ")
                header[key.strip()] = value.strip()
            else:
                current.append([float(v) for v in ln.split(",")])
        shape = tuple(int(s) for s in header["shape"].split(","))
        params = np.array([np.array(b, dtype=np.float64).reshape(shape[1:]) for b in blocks])
        if params.shape != shape:
            raise ValueError(f"parameter shape {params.shape} does not match declared {shape}")
        band = None if header["band"] == "none" else float(header["band"])
        clf = Classifier(
            kind=header["kind"],
            n_classes=int(header["n_classes"]),
            params=params,
            d=int(header["d"]),
            elasticity=int(header["elasticity"]),
            band=band,
            positive_label=int(header["positive_label"]),
            metadata=json.loads(header["metadata"]),
        )
        if header.get("augmentation", clf.augmentation) != clf.augmentation:
            raise ValueError("augmentation does not match classifier kind")
    except (KeyError, ValueError, IndexError) as exc:
        raise FormatVersionMismatch(f"{path}: corrupted model file ({exc})") from None
    return clf
