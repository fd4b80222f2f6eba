"""
Entropy lattices and the information measures derived from them.

All measures are plug-in quantities of a discrete joint distribution. Values
are in nats unless ``base=2`` is requested.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .lattice import (
    LatticeError,
    LatticeFunction,
    SignConvention,
    check_n,
    fast_signed_transform,
    full_mask,
    insert_zero_bit,
    naive_convolve,
)

PROB_TOL = 1e-12


class DistributionError(ValueError):
    pass


def _log(base):
    if base in (None, "e", math.e):
        return np.log
    if base in (2, "2"):
        return np.log2
    raise ValueError(f"log base must be 'e' or 2, got {base!r}")


@dataclass(frozen=True)
class JointDistribution:
    """Probability table over named discrete variables; axis ``i`` is variable ``i``."""

    variables: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64)
        variables = tuple(str(v) for v in self.variables)
        if probs.ndim != len(variables):
            raise DistributionError(f"{len(variables)} variables but a {probs.ndim}-dimensional table")
        if probs.size == 0 or np.any(~np.isfinite(probs)) or probs.min() < 0:
            raise DistributionError("probabilities must be finite and nonnegative")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise DistributionError(f"probabilities sum to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "probs", probs)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def cardinalities(self) -> tuple:
        return self.probs.shape

    @classmethod
    def from_weights(cls, weights, variables=None) -> "JointDistribution":
        w = np.asarray(weights, dtype=np.float64)
        if variables is None:
            variables = [f"X{i + 1}" for i in range(w.ndim)]
        total = w.sum()
        if not total > 0:
            raise DistributionError("weights must have a positive sum")
        return cls(tuple(variables), w / total)

    @classmethod
    def from_samples(cls, codes, cardinalities=None, variables=None) -> "JointDistribution":
        """Empirical distribution of the rows of an integer array ``(n_rows, n_vars)``."""
        counts = empirical_counts(codes, cardinalities)
        return cls.from_weights(counts, variables)

    def marginal(self, mask: int) -> "JointDistribution":
        keep = [i for i in range(self.n) if mask >> i & 1]
        drop = tuple(i for i in range(self.n) if not mask >> i & 1)
        p = self.probs.sum(axis=drop) if drop else self.probs
        return JointDistribution(tuple(self.variables[i] for i in keep), np.asarray(p).reshape(
            tuple(self.cardinalities[i] for i in keep)))

    def condition(self, index: int, value: int) -> tuple:
        """``(P(X_index = value), distribution of the other variables given it)``."""
        slab = np.take(self.probs, value, axis=index)
        weight = float(slab.sum())
        rest = self.variables[:index] + self.variables[index + 1:]
        if weight <= 0:
            return 0.0, None
        return weight, JointDistribution(rest, slab / weight)


def empirical_counts(codes, cardinalities=None) -> np.ndarray:
    codes = np.asarray(codes)
    if codes.ndim != 2 or codes.shape[0] == 0:
        raise DistributionError("need a nonempty 2-D array of category codes")
    if codes.dtype.kind not in "iu" or codes.min() < 0:
        raise DistributionError("category codes must be nonnegative integers")
    if cardinalities is None:
        cardinalities = tuple(int(c) + 1 for c in codes.max(axis=0))
    flat = np.ravel_multi_index(tuple(codes.T), cardinalities)
    return np.bincount(flat, minlength=int(np.prod(cardinalities))).reshape(cardinalities)


def _entropy_of(p: np.ndarray, log=np.log) -> float:
    p = p[p > 0]
    return float(-(p * log(p)).sum()) if p.size else 0.0


def entropy(dist: JointDistribution, base="e") -> float:
    """Shannon entropy with ``0 log 0 = 0``."""
    return max(_entropy_of(dist.probs.ravel(), _log(base)), 0.0)


def entropy_lattice(dist: JointDistribution, base="e") -> LatticeFunction:
    """Marginal entropy of every subset of the variables."""
    n = check_n(dist.n)
    log = _log(base)
    values = np.zeros(1 << n)
    # marginals over subsets in decreasing order reuse the smallest superset already summed
    tables = {full_mask(n): dist.probs}
    for mask in range(full_mask(n), 0, -1):
        if mask not in tables:
            missing = (~mask) & full_mask(n)
            bit = missing & -missing
            parent = tables[mask | bit]
            axis = bin((mask | bit) & (bit - 1)).count("1")
            tables[mask] = parent.sum(axis=axis)
        values[mask] = max(_entropy_of(tables[mask].ravel(), log), 0.0)
    return LatticeFunction(n, values, dist.variables, "entropy")


def entropy_lattice_from_samples(codes, variables=None, base="e") -> LatticeFunction:
    """Plug-in entropy lattice straight from rows of category codes.

    Counts each subset's joint configurations directly, which avoids building
    the full product table when there are many variables.
    """
    codes = np.asarray(codes)
    if codes.ndim != 2 or codes.shape[0] == 0:
        raise DistributionError("need a nonempty 2-D array of category codes")
    n = check_n(codes.shape[1])
    log = _log(base)
    total = codes.shape[0]
    values = np.zeros(1 << n)
    for mask in range(1, 1 << n):
        cols = [i for i in range(n) if mask >> i & 1]
        _, counts = np.unique(codes[:, cols], axis=0, return_counts=True)
        values[mask] = max(_entropy_of(counts / total, log), 0.0)
    if variables is None:
        variables = [f"X{i + 1}" for i in range(n)]
    return LatticeFunction(n, values, variables, "entropy")


def _warn_role(H: LatticeFunction, name: str):
    if H.role != "entropy":
        warnings.warn(f"{name} expects an entropy lattice, got role {H.role!r}", stacklevel=3)


def interaction_information(H: LatticeFunction) -> LatticeFunction:
    """Down-set transform of the entropy lattice; mutual information on pairs."""
    _warn_role(H, "interaction_information")
    out = fast_signed_transform(H, "down", SignConvention.PAPER_3A)
    return out.replace(role="interaction")


def interaction_chain_oracle(dist: JointDistribution, order: Optional[Sequence[int]] = None, base="e") -> float:
    """Interaction information of all variables by the conditioning recursion.

    ``I(v) = I(v minus last) - E_x[I(v minus last | last = x)]`` with ``I`` of one
    variable equal to its entropy. Independent of the lattice transforms.
    """
    if order is None:
        order = range(dist.n)
    order = list(order)
    if sorted(order) != list(range(dist.n)) or not order:
        raise DistributionError(f"order must be a permutation of 0..{dist.n - 1}")
    log = _log(base)

    def recurse(p: np.ndarray, axes: list) -> float:
        # p has one axis per entry of ``axes`` (original variable ids), in that order
        if len(axes) == 1:
            return _entropy_of(p.ravel(), log)
        last = axes[-1]
        pos = axes.index(last)
        rest_axes = axes[:pos] + axes[pos + 1:]
        head = recurse(p.sum(axis=pos), rest_axes)
        cond = 0.0
        for v in range(p.shape[pos]):
            slab = np.take(p, v, axis=pos)
            w = slab.sum()
            if w > 0:
                cond += w * recurse(slab / w, rest_axes)
        return head - cond

    perm = np.transpose(dist.probs, order)
    return recurse(perm, order)


def conditional_interaction(dist: JointDistribution, x: int, base="e") -> float:
    """``E_v[I(others | X_x = v)]`` via the chain oracle on each conditional slice."""
    total = 0.0
    for v in range(dist.cardinalities[x]):
        w, sub = dist.condition(x, v)
        if w > 0:
            total += w * interaction_chain_oracle(sub, base=base)
    return total


def _check_index(H: LatticeFunction, x: int):
    if not 0 <= x < H.n:
        raise LatticeError(f"variable index {x} out of range for n={H.n}")


def delta(H: LatticeFunction, x: int) -> float:
    """Differential interaction information of variable ``x`` with all the others.

    The up-set transform of ``H`` at the singleton ``{x}``.
    """
    _check_index(H, x)
    value = naive_convolve(H, 1 << x, H.full, SignConvention.PAPER_3A)
    top = H.full
    diff = (naive_convolve(H, top, 0, SignConvention.PAPER_3A)
            - naive_convolve(H, top ^ (1 << x), 0, SignConvention.PAPER_3A))
    if abs(value - diff) > 1e-9 * max(1.0, abs(value)):
        raise ArithmeticError(f"up-set value {value} disagrees with interaction difference {diff}")
    return value


def symmetric_delta(H: LatticeFunction, sign_mode: str = "product") -> float:
    """Product of the deltas over every variable; ``"negated-product"`` flips the sign."""
    if sign_mode not in ("product", "negated-product"):
        raise ValueError(f"sign_mode must be 'product' or 'negated-product', got {sign_mode!r}")
    if H.n < 2:
        raise LatticeError("symmetric delta needs at least two variables")
    value = float(np.prod([delta(H, x) for x in range(H.n)]))
    return -value if sign_mode == "negated-product" else value


def differential_entropy(H: LatticeFunction, x: int) -> LatticeFunction:
    """``H(tau + x) - H(tau)`` for every ``tau`` not containing ``x``, on the remaining variables.

    Equal to the conditional entropy ``H(X_x | tau)``.
    """
    _check_index(H, x)
    masks = insert_zero_bit(np.arange(1 << (H.n - 1)), x)
    values = H.values[masks | (1 << x)] - H.values[masks]
    labels = None if H.labels is None else H.labels[:x] + H.labels[x + 1:]
    return LatticeFunction(H.n - 1, values, labels, "conditional-entropy")


def multi_information(H: LatticeFunction) -> LatticeFunction:
    """Sum of single-variable entropies in ``tau`` minus the joint entropy of ``tau``."""
    _warn_role(H, "multi_information")
    singles = np.zeros(1 << H.n)
    for i in range(H.n):
        singles.reshape(-1, 2, 1 << i)[:, 1, :] += H.values[1 << i]
    return H.replace(values=singles - H.values, role="multi-information")


def cll(dist_or_H, x: int, cond: int) -> float:
    """Expected conditional log-likelihood ``pi(X_x | cond) = H(cond + x) - H(cond)``."""
    H = dist_or_H if isinstance(dist_or_H, LatticeFunction) else entropy_lattice(dist_or_H)
    _check_index(H, x)
    if cond >> x & 1:
        raise LatticeError(f"variable {x} is part of the conditioning set")
    return float(H.values[cond | (1 << x)] - H.values[cond])


def cll_direct(dist: JointDistribution, x: int, cond: int, base="e") -> float:
    """``-<log P(X_x | cond)>`` computed from the probability table itself."""
    if cond >> x & 1:
        raise LatticeError(f"variable {x} is part of the conditioning set")
    log = _log(base)
    joint = dist.marginal(cond | (1 << x)).probs
    keep = [i for i in range(dist.n) if (cond | (1 << x)) >> i & 1]
    pos = keep.index(x)
    parent = joint.sum(axis=pos, keepdims=True)
    nz = joint > 0
    ratio = np.where(nz, joint / np.where(parent > 0, parent, 1.0), 1.0)
    return float(-(joint[nz] * log(ratio[nz])).sum())


def mutual_information(dist: JointDistribution, i: int, j: int, base="e") -> float:
    """``sum p(a,b) log p(a,b) / (p(a) p(b))`` from the pair marginal."""
    log = _log(base)
    pair = dist.marginal((1 << i) | (1 << j)).probs
    if i > j:
        pair = pair.T
    pa = pair.sum(axis=1, keepdims=True)
    pb = pair.sum(axis=0, keepdims=True)
    nz = pair > 0
    return float((pair[nz] * log((pair / (pa * pb))[nz])).sum())
