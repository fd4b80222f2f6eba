import itertools

import numpy as np
import pytest

from mobiusinfo.measures import JointDistribution


def xor_distribution():
    """X3 = X1 xor X2 with X1, X2 fair and independent."""
    p = np.zeros((2, 2, 2))
    for a, b in itertools.product((0, 1), repeat=2):
        p[a, b, a ^ b] = 0.25
    return JointDistribution(("X1", "X2", "X3"), p)


def random_distribution(rng, n, max_card=3):
    shape = tuple(int(c) for c in rng.integers(2, max_card + 1, size=n))
    return JointDistribution.from_weights(rng.uniform(size=shape))


def brute_entropy(dist, mask):
    """Marginal entropy by summing the probability table cell by cell."""
    keep = [i for i in range(dist.n) if mask >> i & 1]
    acc = {}
    for idx in itertools.product(*(range(c) for c in dist.cardinalities)):
        key = tuple(idx[i] for i in keep)
        acc[key] = acc.get(key, 0.0) + dist.probs[idx]
    return -sum(p * np.log(p) for p in acc.values() if p > 0)


@pytest.fixture
def xor():
    return xor_distribution()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    """Remember one acceptance verdict; the terminal summary prints them in order."""
    ACCEPTANCE[criterion] = (bool(ok), detail)
    print(f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'} {detail}")
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
