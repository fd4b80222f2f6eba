import pytest

from mobiusinfo.decompose import (
    decomposition_count_formula,
    enumerate_cube_splits,
    recurrence_count,
    single_split_count,
    split_identity_sides,
    verify_decompositions,
)
from mobiusinfo.lattice import LatticeError, LatticeFunction, SignConvention


def test_formula_values():
    assert decomposition_count_formula(2) == 4
    assert decomposition_count_formula(3) == 48
    assert decomposition_count_formula(4) == 6912
    assert decomposition_count_formula(5) == 143327232


def test_formula_overflow_guard():
    with pytest.raises(OverflowError):
        decomposition_count_formula(40)
    with pytest.raises(LatticeError):
        decomposition_count_formula(1)


def test_recurrences():
    assert recurrence_count(3) == 48
    assert recurrence_count(4) == 6912
    assert recurrence_count(4, None) == 9216
    for n in range(2, 7):
        assert recurrence_count(n) == decomposition_count_formula(n)


def test_single_split_count_matches_at_three():
    assert single_split_count(3) == 48


def count_by_brute_force(n):
    """Cut along each axis; a half [lo, hi] admits one term per reference mask inside it."""
    full = (1 << n) - 1
    total = 0
    for axis in range(n):
        bit = 1 << axis
        per_half = []
        for lo, hi in ((0, full ^ bit), (bit, full)):
            per_half.append(sum(1 for r in range(1 << n) if r & lo == lo and r | hi == hi))
        total += per_half[0] * per_half[1]
    return total


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_single_split_brute_force(n):
    assert single_split_count(n) == count_by_brute_force(n)


def test_split_halves_partition_cube():
    for spec in enumerate_cube_splits(3):
        lo_half, hi_half = spec.terms
        members = set()
        for h in (lo_half, hi_half):
            members |= {z for z in range(8) if z & h.lo == h.lo and z | h.hi == h.hi}
        assert members == set(range(8))
        for h in (lo_half, hi_half):
            assert all(t.lo == h.lo and t.hi == h.hi for t in h.candidates)


def test_range_guard():
    with pytest.raises(LatticeError):
        enumerate_cube_splits(1)
    with pytest.raises(LatticeError):
        enumerate_cube_splits(7)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("convention", [SignConvention.PAPER_3A, SignConvention.PAPER_18])
def test_every_split_expression_holds(n, convention, rng):
    for _ in range(10):
        f = LatticeFunction(n, rng.standard_normal(1 << n))
        assert max(r[3] for r in verify_decompositions(f, convention)) < 1e-12


@pytest.mark.parametrize("convention,holds", [("paper-3a", True), ("paper-18", True),
                                              ("paper-2a", False), ("plain-mobius", False)])
def test_three_term_identity(convention, holds, rng):
    f = LatticeFunction(3, rng.standard_normal(8))
    left, right = split_identity_sides(f, convention, axis=1)
    assert bool(abs(left - right) < 1e-12) is holds


def test_three_term_identity_by_hand(rng):
    # F_{}f_123 = F_{2} f_123 + F_{} f_13 written out with (-1)^(3 - |zeta|) signs
    v = rng.standard_normal(8)
    f = LatticeFunction(3, v)
    s = lambda z: (-1) ** (3 - bin(z).count("1"))  # noqa: E731
    whole = sum(s(z) * v[z] for z in range(8))
    with_2 = sum(s(z) * v[z] for z in range(8) if z & 0b010)
    without_2 = sum(s(z) * v[z] for z in range(8) if not z & 0b010)
    assert whole == pytest.approx(with_2 + without_2, abs=1e-12)
    left, right = split_identity_sides(f, "paper-18", axis=1)
    assert left == pytest.approx(whole, abs=1e-12)
    assert right == pytest.approx(with_2 + without_2, abs=1e-12)
