import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from mobiusinfo.estimators import CLLSubsetClassifier, EntropyLattice, MobiusTransformer, check_lattice_rows


@pytest.mark.parametrize("op", ["m", "M", "X", "P", "R", "F:3", "I"])
@pytest.mark.parametrize("n", [2, 3])
def test_transformer_round_trip(op, n, rng):
    X = rng.standard_normal((4, 1 << n))
    t = MobiusTransformer(op).fit(X)
    np.testing.assert_allclose(t.inverse_transform(t.transform(X)), X, atol=1e-12)


def test_transformer_params_and_clone():
    t = MobiusTransformer("M", convention="paper-18")
    assert t.get_params()["convention"] == "paper-18"
    assert clone(t).operator == "M"


def test_transformer_pipeline(rng):
    X = rng.standard_normal((3, 8))
    pipe = make_pipeline(MobiusTransformer("m"), MobiusTransformer("m"))
    np.testing.assert_allclose(pipe.fit_transform(X), X, atol=1e-12)


def test_transformer_validation(rng):
    with pytest.raises(ValueError):
        MobiusTransformer().fit(rng.standard_normal((2, 6)))
    t = MobiusTransformer().fit(rng.standard_normal((2, 8)))
    with pytest.raises(ValueError):
        t.transform(rng.standard_normal((2, 4)))
    with pytest.raises(ValueError):
        MobiusTransformer("F:8").fit(rng.standard_normal((1, 8)))


def test_check_lattice_rows():
    X, n = check_lattice_rows([[1, 2, 3, 4]])
    assert n == 2 and X.dtype == np.float64


def test_entropy_lattice_estimator(rng):
    x = rng.integers(0, 2, (5000, 2))
    codes = np.column_stack([x, x[:, 0] ^ x[:, 1]])
    e = EntropyLattice().fit(codes)
    assert e.interaction_[7] == pytest.approx(-np.log(2), abs=0.01)
    assert e.transform().shape == (1, 8)
    with pytest.raises(ValueError):
        EntropyLattice().fit(np.array([[0.5, 1.0]]))


def test_classifier(rng):
    x = rng.integers(0, 2, (1000, 3))
    y = np.where(x[:, 0] ^ x[:, 2], "yes", "no")
    c = CLLSubsetClassifier(max_degree=2).fit(x, y)
    assert c.subset_ == (0, 2)
    assert c.score(x, y) == 1.0
    proba = c.predict_proba(x[:5])
    np.testing.assert_allclose(proba.sum(axis=1), 1.0)
    with pytest.raises(ValueError):
        c.predict(x[:, :2])


def test_classifier_unseen_configuration_uses_marginal():
    x = np.array([[0], [0], [1]])
    y = np.array([0, 0, 1])
    c = CLLSubsetClassifier(max_degree=1).fit(x, y)
    np.testing.assert_allclose(c.predict_proba(np.array([[5]])), [[2 / 3, 1 / 3]])
