"""
Search for the conditioning subset that best predicts one variable.

Every subset of the other variables up to ``max_degree`` is scored by the
plug-in conditional entropy ``H(target | subset)`` on a training split. The
minimum conditional entropy is the maximum expected conditional
log-likelihood. Raw plug-in scores can only improve as subsets grow, so the
report also keeps the best subset of each size and an optional holdout score.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import DataError, Dataset

TIE_TOL = 1e-12


@dataclass(frozen=True)
class Candidate:
    subset: tuple
    mask: int
    conditional_entropy: float
    sample_count: int

    @property
    def pi(self) -> float:
        """Conditional log-likelihood function value, equal to the conditional entropy."""
        return self.conditional_entropy

    @property
    def expected_log_likelihood(self) -> float:
        return 0.0 - self.conditional_entropy

    def to_dict(self) -> dict:
        return {"subset": list(self.subset), "mask": self.mask, "pi": self.pi,
                "expected_log_likelihood": self.expected_log_likelihood,
                "conditional_entropy": self.conditional_entropy, "sample_count": self.sample_count}


@dataclass
class PredictorReport:
    target: str
    candidates: list
    selected: Candidate
    per_size_best: dict
    cpt: list
    target_categories: list
    train_rows: int
    holdout_rows: int = 0
    holdout_cll: Optional[float] = None
    holdout_unscored: int = 0
    dropped_rows: int = 0
    base: str = "e"

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "log_base": self.base,
            "selected": self.selected.to_dict(),
            "per_size_best": {str(k): v.to_dict() for k, v in sorted(self.per_size_best.items())},
            "candidates": [c.to_dict() for c in self.candidates],
            "cpt": {"target_categories": self.target_categories, "rows": self.cpt},
            "train_rows": self.train_rows,
            "holdout_rows": self.holdout_rows,
            "holdout_mean_log_likelihood": self.holdout_cll,
            "holdout_unscored_rows": self.holdout_unscored,
            "dropped_rows": self.dropped_rows,
        }


def _log(base):
    return np.log2 if base in (2, "2") else np.log


def conditional_entropy(y: np.ndarray, parents: np.ndarray, base="e") -> float:
    """Plug-in ``H(y | parents)``; ``parents`` is ``(rows, k)`` and may have ``k = 0``."""
    log = _log(base)
    joint = np.column_stack([parents, y]) if parents.shape[1] else y[:, None]
    _, jc = np.unique(joint, axis=0, return_counts=True)
    total = len(y)
    h_joint = -float(np.sum(jc / total * log(jc / total)))
    if parents.shape[1] == 0:
        return max(h_joint, 0.0)
    _, pc = np.unique(parents, axis=0, return_counts=True)
    h_parent = -float(np.sum(pc / total * log(pc / total)))
    return max(h_joint - h_parent, 0.0)


def _cpt(y, parents, n_classes):
    """Map parent configuration -> (count, probability vector over target codes)."""
    table = {}
    for row, v in zip(map(tuple, parents.tolist()), y.tolist()):
        table.setdefault(row, np.zeros(n_classes, dtype=np.int64))[v] += 1
    return {k: (int(c.sum()), c / c.sum()) for k, c in sorted(table.items())}


def search_subsets(X: np.ndarray, y: np.ndarray, max_degree: int, base="e"):
    """Score every column subset of ``X`` of size ``<= max_degree``.

    Returns the candidate list in (size, mask) order and the selected one:
    lowest conditional entropy, ties to the smaller subset, then the smaller mask.
    """
    k = X.shape[1]
    cands = []
    for size in range(0, max_degree + 1):
        for cols in itertools.combinations(range(k), size):
            h = conditional_entropy(y, X[:, list(cols)], base)
            mask = sum(1 << c for c in cols)
            cands.append((cols, mask, h))
    cands.sort(key=lambda c: (len(c[0]), c[1]))
    best = cands[0]
    for c in cands[1:]:
        if c[2] < best[2] - TIE_TOL:
            best = c
    return cands, best


def _canonical_order(codes: np.ndarray) -> np.ndarray:
    return np.lexsort(codes.T[::-1])


def predict(data: Dataset, target: str, max_degree: int = 2, holdout_fraction: float = 0.0,
            seed: int = 0, base="e") -> PredictorReport:
    """Select the best conditioning subset for ``target`` and report its conditional table."""
    if target not in data.columns:
        raise DataError(f"target column {target!r} not found (columns: {', '.join(data.names)})")
    others = [n for n in data.names if n != target]
    if not others:
        raise DataError("need at least one column besides the target")
    if not 1 <= max_degree <= len(others):
        raise DataError(f"max_degree must be between 1 and {len(others)}, got {max_degree}")
    if not 0.0 <= holdout_fraction < 1.0:
        raise DataError(f"holdout fraction must be in [0, 1), got {holdout_fraction}")
    if data.row_count == 0:
        raise DataError("dataset is empty")

    codes = data.codes(others + [target])
    codes = codes[_canonical_order(codes)]
    n_hold = int(math.floor(holdout_fraction * len(codes)))
    if n_hold:
        perm = np.random.default_rng(seed).permutation(len(codes))
        hold, train = codes[perm[:n_hold]], codes[perm[n_hold:]]
    else:
        hold, train = codes[:0], codes
    if len(train) == 0:
        raise DataError("no training rows left after the holdout split")
    X, y = train[:, :-1], train[:, -1]

    raw, best = search_subsets(X, y, max_degree, base)
    cands = [Candidate(tuple(others[c] for c in cols), _mask(cols, others, data.names), h, len(y))
             for cols, _, h in raw]
    # tie-break and reporting use masks over the dataset's column order
    by_cols = {cols: c for (cols, _, _), c in zip(raw, cands)}
    selected = by_cols[best[0]]
    per_size = {}
    for (cols, _, h), c in zip(raw, cands):
        cur = per_size.get(len(cols))
        if cur is None or h < cur.conditional_entropy - TIE_TOL:
            per_size[len(cols)] = c

    n_classes = data.cardinality(target)
    cols = list(best[0])
    table = _cpt(y, X[:, cols], n_classes)
    tmap = data.category_maps[target]
    cpt_rows = []
    for key, (count, probs) in table.items():
        cond = {others[c]: data.category_maps[others[c]][v] for c, v in zip(cols, key)}
        cpt_rows.append({"condition": cond, "count": count, "probabilities": [float(p) for p in probs]})

    holdout_cll, unscored = None, 0
    if n_hold:
        log = _log(base)
        marginal = np.bincount(y, minlength=n_classes) / len(y)
        total, scored = 0.0, 0
        for row in hold:
            key = tuple(int(v) for v in row[cols])
            probs = table[key][1] if key in table else marginal
            p = probs[int(row[-1])]
            if p > 0:
                total += float(log(p))
                scored += 1
            else:
                unscored += 1
        holdout_cll = total / scored if scored else None

    return PredictorReport(target, cands, selected, per_size, cpt_rows, list(tmap), len(train),
                           n_hold, holdout_cll, unscored, data.dropped_count, str(base))


def _mask(cols, others, names) -> int:
    return sum(1 << names.index(others[c]) for c in cols)
