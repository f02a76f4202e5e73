"""Command-line entry point.

Every report is a delimited text table without timestamps, so a run with
fixed inputs and seed reproduces its output files byte for byte.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .classifiers import KINDS, load_model, save_model
from .data import Dataset, holdout_split, kfold_split, load_ucr, save_ucr, synth_generate
from .errors import WarplinError
from .evaluation import (
    ELASTICITY_GRID,
    accuracy,
    cross_validate,
    elasticity_grid,
    format_matrix,
    format_table,
    label_dependency,
    mean_percentage_difference,
    nn_dtw_accuracy,
    predictions,
    rank_table,
    tie_percentage,
    winning_percentage,
)
from .learning import TrainConfig, train
from .verification import CHECKS, run_checks

log = logging.getLogger("warplin")
SYNTH_KINDS = ("disk", "ring3", "grid9", "square2")


def _training_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("training")
    g.add_argument("--kind", choices=KINDS, default="ep")
    g.add_argument("--elasticity", type=int, default=1)
    g.add_argument("--loss", default="multinomial",
                   choices=("adaline", "perceptron", "margin_perceptron", "hinge", "logistic", "multinomial"))
    g.add_argument("--xi", type=float, default=1.0, help="margin of the margin perceptron")
    g.add_argument("--lambda", dest="lam", type=float, default=0.0)
    g.add_argument("--band", type=float, default=None, help="Sakoe-Chiba half width")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-epochs", type=int, default=5000)
    g.add_argument("--patience", type=int, default=100)
    g.add_argument("--lr", type=float, default=None, help="fixed learning rate (skips selection)")
    g.add_argument("--znorm", action="store_true", help="z-normalize every series")
    g.add_argument("--discriminants", choices=("1", "k"), default="k")
    g.add_argument("--positive-label", type=int, default=1)
    return p


def _config(args, elasticity=None) -> TrainConfig:
    return TrainConfig(
        elasticity=args.elasticity if elasticity is None else elasticity,
        loss=args.loss,
        lam=args.lam,
        xi=args.xi,
        max_epochs=args.max_epochs,
        patience=args.patience,
        seed=args.seed,
        lr=args.lr,
        band=args.band,
        num_discriminants=1 if args.discriminants == "1" else None,
        positive_label=args.positive_label,
    )


def _load(path, znorm=False) -> Dataset:
    ds = load_ucr(path)
    return ds.znormalized() if znorm else ds


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str):
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def _plot_rows(ds: Dataset, labels=None) -> str:
    labels = ds.labels if labels is None else labels
    rows = [(float(s[0]), float(s[1]), int(y)) for s, y in zip(ds.series, labels) if s.size >= 2]
    return "x,y,label\n" + "".join(f"{x!r},{y!r},{lab}\n" for x, y, lab in rows)


# ----------------------------------------------------------------- commands


def cmd_train(args) -> int:
    ds = _load(args.data, args.znorm)
    clf, trace = train(_config(args), ds, args.kind)
    out = _out_dir(args.out)
    save_model(clf, out / "model.txt")
    _write(out / "trace.tsv", trace.to_csv(sep="\t"))
    acc = accuracy(clf, ds, args.seed)
    rows = [["kind", clf.kind], ["elasticity", clf.elasticity], ["lr", repr(trace.lr)],
            ["best_epoch", trace.best_epoch], ["best_risk", repr(trace.best_risk)],
            ["train_accuracy", acc]]
    _write(out / "summary.tsv", format_table(["key", "value"], rows))
    print(f"training accuracy {acc:.2f}% (risk {trace.best_risk:.6g} at epoch {trace.best_epoch})")
    return 0


def cmd_predict(args) -> int:
    clf = load_model(args.model)
    ds = _load(args.data, args.znorm)
    pred = predictions(clf, ds, args.seed)
    acc = 100.0 * float(np.mean(pred == ds.labels))
    out = _out_dir(args.out)
    rows = [[i, int(y), int(p)] for i, (y, p) in enumerate(zip(ds.labels, pred))]
    _write(out / "predictions.tsv", format_table(["index", "label", "predicted"], rows))
    if ds.series and all(s.size == 2 for s in ds.series):
        _write(out / "predictions_plot.csv", _plot_rows(ds, pred))
    print(f"accuracy {acc:.2f}%")
    return 0


def cmd_cv(args) -> int:
    ds = _load(args.data, args.znorm)
    out = _out_dir(args.out)
    if args.test is not None:
        test = _load(args.test, args.znorm)
        splits = [(ds, test)]
    elif args.holdout is not None:
        splits = [holdout_split(ds, args.holdout, args.seed)]
    else:
        splits = None
    if args.kind_nn:
        if splits is None:
            splits = kfold_split(ds, args.folds, args.seed)
        accs = [nn_dtw_accuracy(tr, te) for tr, te in splits]
    elif splits is None:
        accs = cross_validate(_config(args), ds, args.kind, args.folds, args.seed)
    else:
        accs = []
        for f, (tr, te) in enumerate(splits):
            clf, _ = train(_config(args), tr, args.kind)
            accs.append(accuracy(clf, te, args.seed + f))
    rows = [[f, a] for f, a in enumerate(accs)] + [["mean", float(np.mean(accs))], ["std", float(np.std(accs))]]
    _write(out / "cv.tsv", format_table(["fold", "accuracy"], rows))
    print(f"mean accuracy {np.mean(accs):.2f}% over {len(accs)} split(s)")
    return 0


def cmd_grid(args) -> int:
    ds = _load(args.data, args.znorm)
    grid = [int(v) for v in args.grid.split(",")] if args.grid else list(ELASTICITY_GRID)
    res = elasticity_grid(_config(args), grid, ds, args.kind)
    out = _out_dir(args.out)
    _write(out / "grid.tsv", format_table(["elasticity", "risk"], [[e, repr(r)] for e, r in res.risks.items()]))
    save_model(res.models[res.best], out / "model.txt")
    print(f"best elasticity {res.best} (risk {res.risks[res.best]:.6g})")
    return 0


def cmd_synth(args) -> int:
    ds = synth_generate(args.shape, args.n_per_class, args.seed)
    out = _out_dir(args.out)
    save_ucr(ds, out / f"{args.shape}.txt")
    _write(out / f"{args.shape}_plot.csv", _plot_rows(ds))
    print(f"{len(ds)} points in {ds.n_classes} classes")
    return 0


def cmd_labeldep(args) -> int:
    ds = _load(args.data, args.znorm) if args.data else synth_generate(args.shape, args.n_per_class, args.seed)
    test = _load(args.test, args.znorm) if args.test else None
    res = label_dependency(_config(args), ds, test, args.kind, args.seed)
    out = _out_dir(args.out)
    rows = [[k, res.train_acc[k], res.test_acc[k]] for k in ("ep_min", "ep_max", "ep_2")]
    _write(out / "labeldep.tsv", format_table(["model", "train_accuracy", "test_accuracy"], rows))
    for name, clf in res.models.items():
        save_model(clf, out / f"{name}.txt")
        if all(s.size == 2 for s in ds.series):
            _write(out / f"{name}_plot.csv", _plot_rows(ds, predictions(clf, ds, args.seed)))
    for k, _, _ in rows:
        print(f"{k}: train {res.train_acc[k]:.2f}%  test {res.test_acc[k]:.2f}%")
    return 0


def _read_accs(path):
    """Rows ``dataset<TAB>acc_1<TAB>...``; the header names the classifiers."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if len(lines) < 2:
        raise WarplinError(f"{path}: need a header and at least one dataset row")
    sep = "\t" if "\t" in lines[0] else ","
    names = [c.strip() for c in lines[0].split(sep)[1:]]
    accs = np.array([[float(v) for v in ln.split(sep)[1:]] for ln in lines[1:]])
    if accs.shape[1] != len(names):
        raise WarplinError(f"{path}: rows do not match the header")
    return names, accs.T


def cmd_report(args) -> int:
    names, accs = _read_accs(args.accuracies)
    out = _out_dir(args.out)
    _write(out / "winning.tsv", format_matrix(names, winning_percentage(accs)))
    _write(out / "ties.tsv", format_matrix(names, tie_percentage(accs)))
    _write(out / "mean_pct_diff.tsv", format_matrix(names, mean_percentage_difference(accs)))
    rt = rank_table(accs)
    header = ["classifier"] + [f"rank_{r + 1}" for r in range(len(names))] + ["mean", "std"]
    rows = [[n] + list(rt.counts[i]) + [rt.mean[i], rt.std[i]] for i, n in enumerate(names)]
    _write(out / "ranks.tsv", format_table(header, rows))
    print(format_table(header, rows), end="")
    return 0


def cmd_verify(args) -> int:
    results = run_checks(args.check or None)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="warplin", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    tf = _training_flags()

    p = sub.add_parser("train", parents=[tf], help="train a classifier on a UCR-format file")
    p.add_argument("data")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="apply a saved model")
    p.add_argument("model")
    p.add_argument("data")
    p.add_argument("--znorm", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="seed of the argmax tie-break")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("cv", parents=[tf], help="k-fold, holdout or train/test evaluation")
    p.add_argument("data")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--test", help="separate test file (train on DATA, test here)")
    p.add_argument("--holdout", type=float, help="holdout test fraction instead of k folds")
    p.add_argument("--nn-dtw", dest="kind_nn", action="store_true", help="evaluate the 1-NN DTW baseline")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("grid", parents=[tf], help="pick the elasticity with minimum training risk")
    p.add_argument("data")
    p.add_argument("--grid", help="comma-separated elasticities (default: the standard grid)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("synth", help="generate a two-dimensional synthetic dataset")
    p.add_argument("shape", choices=SYNTH_KINDS)
    p.add_argument("--n-per-class", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("labeldep", parents=[tf], help="single- vs two-discriminant label dependency")
    p.add_argument("--data", help="two-class UCR-format file (default: a synthetic shape)")
    p.add_argument("--test")
    p.add_argument("--shape", choices=SYNTH_KINDS, default="disk")
    p.add_argument("--n-per-class", type=int, default=500)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_labeldep)

    p = sub.add_parser("report", help="comparison tables from an accuracy matrix")
    p.add_argument("accuracies", help="delimited file: dataset column, then one column per classifier")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="run the oracle suite")
    p.add_argument("--check", action="append", choices=sorted(CHECKS))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (WarplinError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
