"""Executable oracle checks behind ``warplin verify``.

Each check compares a production code path against an independent route
(brute-force enumeration, explicit matrix algebra, finite differences or a
closed form) on seeded random instances and reports one line.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classifiers import Classifier, decision_values, predict
from .data import Dataset
from .evaluation import mean_percentage_difference, tie_percentage, winning_percentage
from .learning import TrainConfig, example_loss, regularized_risk, subgradient_step
from .maxlinear import maxlinear_to_ep, maxlinear_to_wp_padded, pad_input
from .products import (
    elastic_product,
    p_matrix,
    p_projection,
    path_score_elastic,
    path_score_warped,
    warped_product,
)
from .separability import max_lin_separable, square_construction
from .warping import embedding_matrices, enumerate_paths, warping_matrix


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def delannoy(m: int, n: int) -> int:
    table = [[1] * n for _ in range(m)]
    for i in range(1, m):
        for j in range(1, n):
            table[i][j] = table[i - 1][j] + table[i][j - 1] + table[i - 1][j - 1]
    return table[m - 1][n - 1]


def brute_max(score, paths):
    return max(score(p) for p in paths)


def check_path_counts(max_size: int = 7) -> tuple[bool, str]:
    bad = [(m, n) for m in range(1, max_size + 1) for n in range(1, max_size + 1)
           if len(enumerate_paths(m, n)) != delannoy(m, n)]
    return not bad, f"{max_size * max_size} lattices, mismatches={bad}"


def check_dp_oracle(instances: int = 200, max_size: int = 6, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        d, e = rng.integers(1, max_size + 1, size=2)
        w, x = rng.normal(size=e), rng.normal(size=d)
        paths = enumerate_paths(e, d)
        worst = max(worst, abs(warped_product(w, x)[0] - brute_max(lambda p: path_score_warped(w, x, p), paths)))
        W = rng.normal(size=(d, e))
        paths = enumerate_paths(d, e)
        worst = max(worst, abs(elastic_product(W, x)[0] - brute_max(lambda p: path_score_elastic(W, x, p), paths)))
    return worst <= 1e-12, f"{instances} instances, max |DP - brute force| = {worst:.2e}"


def check_identities(max_size: int = 6, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst, embed_ok, count = 0.0, True, 0
    for m in range(1, max_size + 1):
        for n in range(1, max_size + 1):
            w, x = rng.normal(size=m), rng.normal(size=n)
            W, xe = rng.normal(size=(m, n)), rng.normal(size=m)
            for p in enumerate_paths(m, n):
                M = warping_matrix(p)
                phi, psi = embedding_matrices(p)
                embed_ok &= bool(np.array_equal(phi.T @ psi, M))
                s = path_score_warped(w, x, p)
                se = path_score_elastic(W, xe, p)
                worst = max(worst, abs(s - w @ (M @ x)), abs(s - (M.T @ w) @ x),
                            abs(se - np.sum(W * p_matrix(xe, p, m, n))), abs(se - p_projection(W, p) @ xe))
                count += 1
    ok = embed_ok and worst <= 1e-12
    return ok, f"{count} paths, embedding identity {'exact' if embed_ok else 'BROKEN'}, max deviation {worst:.2e}"


def check_constructions(models: int = 50, inputs: int = 100, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst, failures = 0.0, []
    for _ in range(models):
        c, d = int(rng.integers(1, 6)), int(rng.integers(2, 7))
        A = rng.normal(size=(c, d))
        X = rng.normal(size=(inputs, d))
        truth = (X @ A.T).max(axis=1)
        w, qw = maxlinear_to_wp_padded(A)
        got = np.array([warped_product(w, pad_input(x), qw)[0] for x in X])
        worst = max(worst, np.abs(got - truth).max())
        try:
            W, qe = maxlinear_to_ep(A)
        except ValueError as exc:
            failures.append(f"ep(c={c},d={d}): {exc}")
            continue
        got = np.array([elastic_product(W, x, qe)[0] for x in X])
        worst = max(worst, np.abs(got - truth).max())
    ok = worst <= 1e-9 and not failures
    detail = f"{models} models x {inputs} inputs, max deviation {worst:.2e}"
    if failures:
        detail += f", {len(failures)} unsupported: {failures[0]}"
    return ok, detail


def _random_classifier(kind, rng, nd=2, d=4, e=3):
    shape = {"sm": (d,), "wp": (e,), "ep": (d, e), "ml": (e, d)}[kind]
    return Classifier(kind, 2, rng.normal(size=(nd,) + shape), d, e)


def _margin_ok(clf, x, margin=1e-3) -> bool:
    """All discriminants have a unique active component by at least ``margin``."""
    from .maxlinear import ep_to_maxlinear, wp_to_maxlinear

    xa = clf.augment(x)
    for theta in clf.params:
        if clf.kind == "sm":
            continue
        if clf.kind == "ml":
            s = np.sort(theta @ xa)
        elif clf.kind == "ep":
            s = np.sort(ep_to_maxlinear(theta, None, xa.size).components @ xa)
        else:
            s = np.sort(wp_to_maxlinear(theta, None, xa.size).components @ xa)
        # components sharing identical weights are the same function
        if s.size > 1 and s[-1] - s[-2] <= margin:
            return False
    return True


def check_subgradients(points: int = 100, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst, n = 0.0, 0
    kinds = ("sm", "wp", "ep", "ml")
    while n < points:
        kind = kinds[n % 4]
        loss = ("logistic", "multinomial")[(n // 4) % 2]
        lam = (0.0, 0.01)[(n // 8) % 2]
        nd = 1 if loss == "logistic" else 2
        clf = _random_classifier(kind, rng, nd=nd)
        x = rng.normal(size=3)
        if not _margin_ok(clf, x):
            continue
        label = int(rng.integers(1, 3))
        cfg = TrainConfig(loss=loss, lam=lam)
        g = subgradient_step(clf, (x, label), cfg)
        fd = np.zeros_like(clf.params)
        h = 1e-6
        flat = clf.params.reshape(-1)
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + h
            up = example_loss(clf, (x, label), cfg)
            flat[i] = old - h
            down = example_loss(clf, (x, label), cfg)
            flat[i] = old
            fd.reshape(-1)[i] = (up - down) / (2 * h)
        err = np.linalg.norm(g - fd) / max(np.linalg.norm(fd), 1e-12)
        worst = max(worst, err)
        n += 1
    return worst <= 1e-5, f"{points} points, max relative error {worst:.2e}"


def check_sm_ep(seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    d = 6
    theta = rng.normal(size=(3, d))
    sm = Classifier("sm", 3, theta, d)
    ep = Classifier("ep", 3, theta[:, :, None], d, 1)
    series = [rng.normal(size=d - 1) for _ in range(50)]
    ds = Dataset(series, rng.integers(1, 4, size=50), 3)
    same_pred = all(predict(sm, s) == predict(ep, s) for s in series)
    same_vals = all(np.array_equal(decision_values(sm, s), decision_values(ep, s)) for s in series)
    r_sm = regularized_risk(sm, ds, "multinomial", 0.01)
    r_ep = regularized_risk(ep, ds, "multinomial", 0.01)
    ok = same_pred and same_vals and r_sm == r_ep
    return ok, f"values identical={same_vals}, predictions identical={same_pred}, risks {r_sm!r} vs {r_ep!r}"


def check_separability() -> tuple[bool, str]:
    U, V = square_construction()
    forward, backward = max_lin_separable(U, V), max_lin_separable(V, U)
    return forward and not backward, f"U from V: {forward}, V from U: {backward}"


def check_metrics(seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        accs = rng.integers(40, 101, size=(4, 12)).astype(float)
        w = winning_percentage(accs)
        worst = max(worst, np.abs(w + w.T + tie_percentage(accs) - 100).max())
        a = mean_percentage_difference(accs)
        worst = max(worst, np.abs(a + a.T).max())
    hand = mean_percentage_difference([[90.0], [85.0]])[0, 1]
    ok = worst <= 1e-9 and abs(hand - 100 * 2 * 5 / 175) <= 1e-9
    return ok, f"identity deviation {worst:.2e}, a_12(90, 85) = {hand:.6f}"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "dp-vs-enumeration": check_dp_oracle,
    "constructions": check_constructions,
    "matrix-identities": check_identities,
    "subgradients": check_subgradients,
    "path-counts": check_path_counts,
    "sm-equals-ep1": check_sm_ep,
    "separability-asymmetry": check_separability,
    "metric-identities": check_metrics,
}


def run_checks(names=None) -> list[CheckResult]:
    out = []
    for name in names or CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = CHECKS[name]()
        except Exception as exc:  # reported, not raised: verify prints every line
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        out.append(CheckResult(name, ok, detail, time.perf_counter() - t0))
    return out
