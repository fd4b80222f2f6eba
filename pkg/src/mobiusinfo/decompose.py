"""Additive decompositions of the full-lattice convolution into sub-cube terms.

Cutting the n-cube by a plane perpendicular to axis ``k`` leaves two
(n-1)-cubes: the subsets without variable ``k`` and those with it. The
convolution over the whole cube is the sum of the convolutions over the two
halves, and each half can be written as a generalized operator term anchored
at any of its own vertices (the evaluation point is then the antipodal vertex
of that half).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import (
    LatticeError,
    SignConvention,
    as_lattice_function,
    full_mask,
    geodesic_interval,
    naive_convolve,
)

MIN_SPLIT_N = 2
MAX_SPLIT_N = 6


@dataclass(frozen=True)
class OperatorTerm:
    """``F_reference f`` evaluated at ``tau``; spans the interval ``[lo, hi]``."""

    reference: int
    tau: int

    @property
    def lo(self):
        return self.reference & self.tau

    @property
    def hi(self):
        return self.reference | self.tau


@dataclass(frozen=True)
class SubCube:
    lo: int
    hi: int
    candidates: tuple

    @property
    def dimension(self) -> int:
        return bin(self.hi ^ self.lo).count("1")


@dataclass(frozen=True)
class DecompositionSpec:
    n: int
    split_axis: int
    terms: tuple  # two SubCube halves: without the axis variable, with it

    @property
    def expression_count(self) -> int:
        count = 1
        for half in self.terms:
            count *= len(half.candidates)
        return count


def _half(lo: int, hi: int) -> SubCube:
    candidates = tuple(OperatorTerm(ref, lo | (hi & ~ref)) for ref in geodesic_interval(lo, hi))
    return SubCube(lo, hi, candidates)


def enumerate_cube_splits(n: int) -> list:
    """One :class:`DecompositionSpec` per axis of the ``n``-cube."""
    if not MIN_SPLIT_N <= n <= MAX_SPLIT_N:
        raise LatticeError(f"cube splits need {MIN_SPLIT_N} <= n <= {MAX_SPLIT_N}, got {n}")
    top = full_mask(n)
    specs = []
    for axis in range(n):
        bit = 1 << axis
        specs.append(DecompositionSpec(n, axis, (_half(0, top ^ bit), _half(bit, top))))
    return specs


def single_split_count(n: int) -> int:
    """Operator-expression decompositions using one cut (both halves left whole)."""
    return sum(spec.expression_count for spec in enumerate_cube_splits(n))


def decomposition_count_formula(n: int, max_bits: int = 1 << 20) -> int:
    """``3**(2**(n-2) - 1) * 4**(2**(n-2))`` as an exact integer.

    Raises ``OverflowError`` rather than building a result wider than
    ``max_bits`` bits.
    """
    if n < 2:
        raise LatticeError(f"the count formula needs n >= 2, got {n}")
    if n - 2 > 64:
        raise OverflowError(f"count formula for n={n} is astronomically large")
    k = 1 << (n - 2)
    bits = (k - 1) * np.log2(3) + 2 * k
    if bits > max_bits:
        raise OverflowError(f"count formula for n={n} needs ~{int(bits)} bits (limit {max_bits})")
    return 3 ** (k - 1) * 4 ** k


def recurrence_count(n: int, splits_per_level=3) -> int:
    """Decompositions cutting recursively down to squares, each square a single term.

    ``splits_per_level=3`` reproduces the published recurrence (three cuts at
    every level); pass ``splits_per_level=None`` to use the ``m`` axes an
    ``m``-cube actually has.
    """
    if n < 2:
        raise LatticeError(f"recurrence needs n >= 2, got {n}")
    count = 4
    for m in range(3, n + 1):
        cuts = m if splits_per_level is None else splits_per_level
        count = cuts * count * count
    return count


def verify_decompositions(f, convention=SignConvention.PAPER_18, atol=1e-12) -> list:
    """Check every single-cut decomposition numerically on ``f``.

    Returns ``(axis, reference_a, reference_b, deviation)`` tuples, one per
    operator expression, where ``deviation`` is the absolute difference between
    the whole-lattice convolution and the sum of the two half terms.
    """
    f = as_lattice_function(f)
    whole = naive_convolve(f, f.full, 0, convention)
    rows = []
    for spec in enumerate_cube_splits(f.n):
        a, b = spec.terms
        for ta in a.candidates:
            va = naive_convolve(f, ta.tau, ta.reference, convention)
            for tb in b.candidates:
                vb = naive_convolve(f, tb.tau, tb.reference, convention)
                rows.append((spec.split_axis, ta.reference, tb.reference, abs(whole - (va + vb))))
    return rows


def split_identity_sides(f, convention, axis: int = 0, removed_face_local: bool = True):
    """Both sides of the three-term identity for a cut along ``axis``.

    Left: whole-lattice convolution anchored at the empty set. Right: the half
    containing ``axis`` anchored at the singleton ``{axis}``, plus the half
    without it anchored at the empty set. With ``removed_face_local`` the
    second term is computed on the restricted function (its own smaller
    lattice) so that conventions depending on the lattice size see the face's
    size; the ambient size is still passed for conventions that use it.
    """
    f = as_lattice_function(f)
    top = f.full
    bit = 1 << axis
    left = naive_convolve(f, top, 0, convention)
    first = naive_convolve(f, top, bit, convention)
    face = top ^ bit
    if removed_face_local:
        g = f.restrict(face)
        second = naive_convolve(g, g.full, 0, convention, ambient_n=f.n)
    else:
        second = naive_convolve(f, face, 0, convention)
    return left, first + second
