"""
scikit-learn style wrappers.

``MobiusTransformer`` maps rows of lattice values through one operator,
``EntropyLattice`` fits the plug-in entropy lattice of categorical columns and
``CLLSubsetClassifier`` predicts a target from its best conditioning subset.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .data import Dataset
from .lattice import LatticeError, SignConvention, as_convention, check_n
from .measures import entropy_lattice_from_samples, interaction_information, multi_information
from .operators import ConventionSet, apply_batch, operator
from .predict import predict as _predict


def check_lattice_rows(X) -> tuple:
    """Validate a ``(k, 2**n)`` float array and return it with ``n``."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    width = X.shape[1]
    n = width.bit_length() - 1
    if width != 1 << n:
        raise ValueError(f"row length must be a power of two, got {width}")
    check_n(n)
    return X, n


def check_codes(X) -> np.ndarray:
    """Validate a 2-D array of nonnegative integer category codes."""
    X = check_array(X, dtype=None, ensure_2d=True)
    if X.dtype.kind not in "iu":
        if X.dtype.kind == "f" and np.all(np.isfinite(X)) and np.all(X == np.round(X)):
            X = X.astype(np.int64)
        else:
            raise ValueError("expected integer category codes")
    if X.size and X.min() < 0:
        raise ValueError("category codes must be nonnegative")
    return X.astype(np.int64)


class MobiusTransformer(TransformerMixin, BaseEstimator):
    """Apply one lattice operator to every row of a ``(k, 2**n)`` array.

    Parameters
    ----------
    operator : str
        ``"m"``, ``"M"``, ``"X"``, ``"P"``, ``"R"`` or ``"F:<mask>"``.
    convention : str
        Sign convention for the down-set / up-set operators.
    generalized_convention : str
        Sign convention for ``F``.
    """

    def __init__(self, operator="m", convention="paper-3a", generalized_convention="paper-18"):
        self.operator = operator
        self.convention = convention
        self.generalized_convention = generalized_convention

    def _conventions(self):
        c = as_convention(self.convention)
        return ConventionSet(c, c, as_convention(self.generalized_convention))

    def fit(self, X, y=None):
        X, n = check_lattice_rows(X)
        self._op = operator(self.operator, self._conventions())
        if self._op.kind == "F" and self._op.reference >> n:
            raise LatticeError(f"reference mask {self._op.reference} out of range for n={n}")
        self.n_ = n
        self.n_features_in_ = X.shape[1]
        return self

    def _check(self, X):
        check_is_fitted(self, "n_")
        X, n = check_lattice_rows(X)
        if n != self.n_:
            raise ValueError(f"fitted for n={self.n_}, got rows for n={n}")
        return X

    def transform(self, X):
        X = self._check(X)
        return apply_batch(self._op, X, self.n_)

    def _undo(self, kind, X):
        cs = self._conventions()
        if kind in ("m", "M", "F", "I"):
            op = self._op if kind == "F" else operator(kind, cs)
            return apply_batch(op, X, self.n_)
        if kind == "X":
            out = apply_batch(operator("X", cs), X, self.n_)
            # X squares to (-1)**n times the identity
            return -out if self.n_ % 2 else out
        if kind in ("P", "R"):
            # P = X M and R = X m, so undo X first
            return self._undo("M" if kind == "P" else "m", self._undo("X", X))
        raise ValueError(f"no inverse available for operator {self.operator!r}")

    def inverse_transform(self, X):
        """Exact inverse of ``transform``."""
        X = self._check(X)
        return self._undo(self._op.kind, X)


class EntropyLattice(BaseEstimator):
    """Plug-in entropy lattice of categorical columns.

    Attributes set by ``fit``: ``entropy_``, ``interaction_``, ``multi_information_``
    (all ``LatticeFunction``) and ``n_features_in_``.
    """

    def __init__(self, base="e"):
        self.base = base

    def fit(self, X, y=None):
        codes = check_codes(X)
        names = getattr(X, "columns", None)
        variables = [str(c) for c in names] if names is not None else None
        self.entropy_ = entropy_lattice_from_samples(codes, variables, self.base)
        self.interaction_ = interaction_information(self.entropy_)
        self.multi_information_ = multi_information(self.entropy_)
        self.n_features_in_ = codes.shape[1]
        return self

    def transform(self, X=None):
        check_is_fitted(self, "entropy_")
        return self.entropy_.values[None, :].copy()


class CLLSubsetClassifier(ClassifierMixin, BaseEstimator):
    """Predict from the conditioning subset with the lowest conditional entropy.

    Unseen parent configurations fall back to the training marginal of ``y``.
    """

    def __init__(self, max_degree=2, base="e"):
        self.max_degree = max_degree
        self.base = base

    def fit(self, X, y):
        codes = check_codes(X)
        y = np.asarray(y)
        if y.ndim != 1 or len(y) != len(codes):
            raise ValueError("y must be 1-D with one entry per row of X")
        self.classes_, y_codes = np.unique(y, return_inverse=True)
        k = codes.shape[1]
        names = [f"x{i}" for i in range(k)]
        data = Dataset.from_codes(np.column_stack([codes, y_codes]), names + ["y"])
        report = _predict(data, "y", max_degree=min(self.max_degree, k), base=self.base)
        self.report_ = report
        self.subset_ = tuple(names.index(s) for s in report.selected.subset)
        self.conditional_entropy_ = report.selected.conditional_entropy
        cols = list(self.subset_)
        n_classes = len(self.classes_)
        self.marginal_ = np.bincount(y_codes, minlength=n_classes) / len(y_codes)
        table = {}
        for key, label in zip(map(tuple, codes[:, cols].tolist()), y_codes.tolist()):
            table.setdefault(key, np.zeros(n_classes))[label] += 1
        self.cpt_ = {key: c / c.sum() for key, c in table.items()}
        self.n_features_in_ = k
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "cpt_")
        codes = check_codes(X)
        if codes.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {codes.shape[1]}")
        rows = codes[:, list(self.subset_)].tolist()
        return np.array([self.cpt_.get(tuple(r), self.marginal_) for r in rows])

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


__all__ = ["CLLSubsetClassifier", "EntropyLattice", "MobiusTransformer", "SignConvention",
           "check_codes", "check_lattice_rows"]
