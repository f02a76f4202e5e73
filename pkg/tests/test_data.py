import numpy as np
import pytest

from warplin.data import Dataset, concat, holdout_split, kfold_split, load_ucr, save_ucr, synth_generate
from warplin.errors import EmptyFile, ParseError, TooFewExamples


def write(tmp_path, text, name="d.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_comma(tmp_path):
    ds = load_ucr(write(tmp_path, "1,0.5,0.7\n2,0.1,0.2"))
    assert len(ds) == 2 and ds.n_classes == 2
    np.testing.assert_array_equal(ds.series[0], [0.5, 0.7])


def test_load_whitespace_and_ragged(tmp_path):
    ds = load_ucr(write(tmp_path, " 3\t1.0\t2.0\t3.0\n\n 1  4.0  5.0  \n"))
    assert [s.size for s in ds.series] == [3, 2]
    assert ds.labels.tolist() == [1, 2]


def test_label_remap_first_appearance(tmp_path):
    ds = load_ucr(write(tmp_path, "-1,1\n1,2\n-1,3\n"))
    assert ds.labels.tolist() == [1, 2, 1]
    assert ds.provenance["label_map"] == {"-1": 1, "1": 2}


def test_malformed_token(tmp_path):
    with pytest.raises(ParseError) as exc:
        load_ucr(write(tmp_path, "1,0.5\n2,abc\n"))
    assert exc.value.line == 2


def test_empty_file(tmp_path):
    with pytest.raises(EmptyFile):
        load_ucr(write(tmp_path, "\n \n"))


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_ucr(tmp_path / "nope.txt")


def test_save_round_trip(tmp_path, rng):
    ds = Dataset([rng.normal(size=n) for n in (3, 4, 2)], [1, 2, 1], 2)
    save_ucr(ds, tmp_path / "r.txt")
    back = load_ucr(tmp_path / "r.txt")
    for a, b in zip(ds.series, back.series):
        np.testing.assert_array_equal(a, b)
    assert back.labels.tolist() == ds.labels.tolist()


def toy(n=10, k=2):
    return Dataset([np.array([float(i)]) for i in range(n)], [i % k + 1 for i in range(n)], k)


def test_kfold_singletons():
    folds = kfold_split(toy(10), 10, seed=3)
    assert all(len(te) == 1 for _, te in folds)


def test_kfold_partition():
    ds = toy(23, 3)
    folds = kfold_split(ds, 5, seed=1)
    seen = sorted(float(s[0]) for _, te in folds for s in te.series)
    assert seen == [float(i) for i in range(23)]
    for tr, te in folds:
        assert len(tr) + len(te) == 23
        assert not {float(s[0]) for s in tr.series} & {float(s[0]) for s in te.series}
    # round-trip: concatenated test folds recover the multiset
    merged = concat([te for _, te in folds])
    assert sorted(merged.labels.tolist()) == sorted(ds.labels.tolist())


def test_kfold_stratified_and_seeded():
    ds = toy(40, 2)
    folds = kfold_split(ds, 4, seed=9)
    for _, te in folds:
        assert np.bincount(te.labels, minlength=3)[1:].tolist() == [5, 5]
    again = kfold_split(ds, 4, seed=9)
    for (_, a), (_, b) in zip(folds, again):
        assert [float(s[0]) for s in a.series] == [float(s[0]) for s in b.series]


def test_kfold_too_few():
    with pytest.raises(TooFewExamples):
        kfold_split(toy(3), 4)


def test_holdout():
    tr, te = holdout_split(toy(30), 1 / 3, seed=0)
    assert (len(tr), len(te)) == (20, 10)


def test_synth_disk():
    ds = synth_generate("disk", 500, seed=4)
    assert len(ds) == 1000 and np.bincount(ds.labels).tolist() == [0, 500, 500]
    r = np.array([np.linalg.norm(s) for s in ds.series])
    assert np.all(r[ds.labels == 1] < 1)
    assert np.all((r[ds.labels == 2] > 1) & (r[ds.labels == 2] <= 2))
    again = synth_generate("disk", 500, seed=4)
    assert all(np.array_equal(a, b) for a, b in zip(ds.series, again.series))


def test_synth_other_shapes():
    ring = synth_generate("ring3", 50, seed=0)
    r = np.array([np.linalg.norm(s) for s in ring.series])
    assert np.all(r[ring.labels == 1] < 1)
    assert np.all((r[ring.labels == 2] >= 1) & (r[ring.labels == 2] < 1.5))
    assert np.all((r[ring.labels == 3] >= 1.5) & (r[ring.labels == 3] <= 2.5))
    grid = synth_generate("grid9", 20, seed=0)
    assert grid.n_classes == 9
    for s, y in grid:
        col, row = np.floor(s).astype(int)
        assert 3 * row + col + 1 == y
    sq = synth_generate("square2", 30, seed=0)
    inf = np.array([np.abs(s).max() for s in sq.series])
    assert np.all(inf[sq.labels == 1] <= 0.5)
    assert np.all((inf[sq.labels == 2] > 0.5) & (inf[sq.labels == 2] <= 1.5))


def test_synth_rejects():
    with pytest.raises(ValueError):
        synth_generate("torus", 5)
    with pytest.raises(ValueError):
        synth_generate("disk", 0)


def test_znorm():
    ds = Dataset([np.array([1.0, 2.0, 3.0]), np.array([5.0, 5.0])], [1, 2], 2).znormalized()
    assert ds.series[0].mean() == pytest.approx(0) and ds.series[0].std() == pytest.approx(1)
    np.testing.assert_array_equal(ds.series[1], [0.0, 0.0])
