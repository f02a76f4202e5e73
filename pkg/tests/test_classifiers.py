import numpy as np
import pytest

from warplin.classifiers import (
    Classifier,
    augment,
    decide,
    decision_values,
    load_model,
    nn_dtw_predict,
    predict,
    save_model,
)
from warplin.data import Dataset
from warplin.errors import DimensionMismatch, FormatVersionMismatch
from warplin.products import elastic_product, warped_product
from warplin.warping import band_constraint


def test_augment():
    np.testing.assert_array_equal(augment([5, 7], "lead_one"), [1, 5, 7])
    np.testing.assert_array_equal(augment([5, 7], "lead_one_pad_zeros"), [0, 1, 5, 7, 0])
    assert augment([3], "lead_one").size == 2 and augment([3], "lead_one_pad_zeros").size == 4


def test_zero_sm_values():
    clf = Classifier.zeros("sm", 3, 4)
    assert not decision_values(clf, [1.0, 2.0, 3.0]).any()


def test_ep_e1_matches_linear_scores(rng):
    theta = rng.normal(size=(2, 4))
    ep = Classifier("ep", 2, theta[:, :, None], 4, 1)
    x = rng.normal(size=3)
    np.testing.assert_allclose(decision_values(ep, x), theta @ np.r_[1.0, x], atol=1e-12)
    sm = Classifier("sm", 2, theta, 4)
    np.testing.assert_array_equal(decision_values(sm, x), decision_values(ep, x))


def test_values_match_products(rng):
    W = rng.normal(size=(2, 5, 3))
    ep = Classifier("ep", 2, W, 5, 3)
    x = rng.normal(size=3)  # shorter than the declared maximum of 4
    xa = np.r_[1.0, x]
    np.testing.assert_allclose(decision_values(ep, x), [elastic_product(Wk, xa)[0] for Wk in W], atol=1e-12)
    w = rng.normal(size=(2, 4))
    wp = Classifier("wp", 2, w, 5, 4)
    xp = np.r_[0.0, 1.0, x, 0.0]
    np.testing.assert_allclose(decision_values(wp, x), [warped_product(wk, xp)[0] for wk in w], atol=1e-12)
    A = rng.normal(size=(2, 3, 4))
    ml = Classifier("ml", 2, A, 4, 3)
    np.testing.assert_allclose(decision_values(ml, x), (A @ xa).max(axis=1), atol=1e-12)


def test_band_restricts_paths(rng):
    W = rng.normal(size=(1, 4, 4))
    clf = Classifier("ep", 2, W, 4, 4, band=0)
    x = rng.normal(size=3)
    xa = np.r_[1.0, x]
    assert decision_values(clf, x)[0] == pytest.approx(elastic_product(W[0], xa, band_constraint(4, 4, 0))[0])


def test_decide_examples():
    clf = Classifier.zeros("sm", 2, 2)
    assert decide(clf, np.array([3.0, 1.0])) == 1
    picks = {decide(clf, np.array([2.0, 2.0]), np.random.default_rng(s)) for s in range(20)}
    assert picks == {1, 2}
    a = [decide(clf, np.array([2.0, 2.0]), np.random.default_rng(5)) for _ in range(3)]
    assert len(set(a)) == 1


def test_single_discriminant_boundary_is_negative():
    clf = Classifier.zeros("sm", 2, 2, num_discriminants=1, positive_label=2)
    assert predict(clf, [1.0]) == 1
    clf.params[0, 0] = 0.5
    assert predict(clf, [1.0]) == 2


def test_input_length_checks():
    with pytest.raises(DimensionMismatch):
        decision_values(Classifier.zeros("sm", 2, 3), [1.0])
    with pytest.raises(DimensionMismatch):
        decision_values(Classifier.zeros("ep", 2, 3, 2), [1.0, 2.0, 3.0])
    decision_values(Classifier.zeros("ep", 2, 3, 2), [1.0])


def test_construction_validation():
    with pytest.raises(ValueError):
        Classifier.zeros("sm", 3, 2, num_discriminants=1)
    with pytest.raises(DimensionMismatch):
        Classifier("ep", 2, np.zeros((2, 3)), 3, 2)
    with pytest.raises(ValueError):
        Classifier.zeros("xx", 2, 2)


def test_nn_dtw():
    train = Dataset([np.array([0.0, 0.0]), np.array([3.0, 3.0, 3.0])], [1, 2], 2)
    assert nn_dtw_predict(train, [3.0, 3.0, 3.0]) == 2
    # dtw((1,2),(0,0)) = 1 + 4 = 5; dtw((1,2),(3,3,3)) = 4 + 1 + 1 = 6
    assert nn_dtw_predict(train, [1.0, 2.0]) == 1
    one = Dataset([np.array([9.0])], [2], 2)
    assert nn_dtw_predict(one, [-5.0, 1.0]) == 2


@pytest.mark.parametrize("kind", ["sm", "wp", "ep", "ml"])
def test_save_load_round_trip(tmp_path, rng, kind):
    shape = {"sm": (5,), "wp": (3,), "ep": (5, 3), "ml": (3, 5)}[kind]
    clf = Classifier(kind, 2, rng.normal(size=(2,) + shape), 5, 3, band=1.0 if kind == "ep" else None,
                     metadata={"note": "x"})
    save_model(clf, tmp_path / "m.txt")
    back = load_model(tmp_path / "m.txt")
    assert back.band == clf.band and back.kind == kind and back.metadata == {"note": "x"}
    for _ in range(100):
        x = rng.normal(size=4)
        np.testing.assert_array_equal(decision_values(back, x), decision_values(clf, x))


def test_load_corrupted(tmp_path, rng):
    clf = Classifier("sm", 2, rng.normal(size=(2, 3)), 3)
    p = tmp_path / "m.txt"
    save_model(clf, p)
    text = p.read_text()
    (tmp_path / "bad1.txt").write_text(text.replace("warplin-model v1", "warplin-model v0"))
    (tmp_path / "bad2.txt").write_text(text.rsplit("\n", 2)[0] + "\n")
    (tmp_path / "bad3.txt").write_text(text.replace(",", ";"))
    for name in ("bad1.txt", "bad2.txt", "bad3.txt"):
        with pytest.raises(FormatVersionMismatch):
            load_model(tmp_path / name)
