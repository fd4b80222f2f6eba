"""
Functions on the Boolean lattice of subsets of ``n`` variables.

A subset is encoded as an integer bitmask: bit ``i`` is set iff variable
``i`` (0-indexed) belongs to the subset. The empty set is mask ``0`` and the
full set is ``2**n - 1``. A lattice function stores one real value per mask in
a dense array of length ``2**n``, so that ``values[k]`` is the value at the
subset whose bitmask is ``k``::

    values[0b101] ~ f({X0, X2})

Every signed convolution used by the operators factorizes over coordinates,
which gives the O(n 2**n) transforms below.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

DEFAULT_N_CAP = 24
N_CAP_ENV = "MOBIUSINFO_N_CAP"


class LatticeError(ValueError):
    """Invalid lattice element or lattice function."""


class CapacityError(LatticeError):
    """Requested lattice exceeds the configured size cap."""


class SignConvention(str, enum.Enum):
    """Sign rule ``sign(tau, zeta)`` applied to each term of a convolution.

    ``PAPER_3A``      (-1)**(|zeta| - 1), both directions
    ``PAPER_2A``      (-1)**(|nu| - |zeta|), ``nu`` the function's own full set
    ``PAPER_18``      (-1)**(n - |zeta|), ``n`` the ambient lattice size
    ``PLAIN_MOBIUS``  (-1)**(|tau| - |zeta|), the classical (non-involutive) inverse
    """

    PAPER_3A = "paper-3a"
    PAPER_2A = "paper-2a"
    PAPER_18 = "paper-18"
    PLAIN_MOBIUS = "plain-mobius"

    def __str__(self):
        return self.value


def as_convention(convention) -> SignConvention:
    if isinstance(convention, SignConvention):
        return convention
    try:
        return SignConvention(str(convention))
    except ValueError:
        names = ", ".join(c.value for c in SignConvention)
        raise LatticeError(f"unknown sign convention {convention!r} (expected one of {names})") from None


def n_cap() -> int:
    """Largest admissible lattice size, overridable through ``MOBIUSINFO_N_CAP``."""
    raw = os.environ.get(N_CAP_ENV)
    if raw is None:
        return DEFAULT_N_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise CapacityError(f"{N_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise CapacityError(f"{N_CAP_ENV} must be nonnegative, got {cap}")
    return cap


def check_n(n: int, cap: Optional[int] = None) -> int:
    cap = n_cap() if cap is None else cap
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise LatticeError(f"lattice size must be a nonnegative integer, got {n!r}")
    if n > cap:
        raise CapacityError(
            f"lattice of {n} variables exceeds the cap of {cap} "
            f"({2 ** n} values); raise {N_CAP_ENV} to allow it"
        )
    return int(n)


# -- masks ------------------------------------------------------------------

def full_mask(n: int) -> int:
    return (1 << n) - 1


def cardinality(mask: int) -> int:
    """Number of variables in the subset ``mask``."""
    if mask < 0:
        raise LatticeError(f"mask must be nonnegative, got {mask}")
    return bin(mask).count("1")


def _check_mask(mask: int, n: int) -> None:
    if mask < 0 or mask >> n:
        raise LatticeError(f"mask {mask:#b} is not a subset of a {n}-variable lattice")


def complement(mask: int, n: int) -> int:
    """Set complement of ``mask`` relative to the full ``n``-set."""
    _check_mask(mask, n)
    return full_mask(n) ^ mask


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def mobius_mu(nu: int, tau: int) -> int:
    """Mobius function of the inclusion order, ``(-1)**(|nu| - |tau|)`` for ``tau <= nu``."""
    if not is_subset(tau, nu):
        raise LatticeError(f"{tau:#b} is not a subset of {nu:#b}")
    return -1 if (cardinality(nu) - cardinality(tau)) % 2 else 1


def geodesic_interval(tau: int, eta: int) -> Iterator[int]:
    """Yield every mask on some shortest hypercube path between ``tau`` and ``eta``.

    These are exactly the masks between ``tau & eta`` and ``tau | eta``, each
    yielded once, in increasing order.
    """
    lo, hi = tau & eta, tau | eta
    free = hi ^ lo
    sub = 0
    while True:
        yield lo | sub
        sub = (sub - free) & free
        if sub == 0:
            return


def subsets(mask: int) -> Iterator[int]:
    return geodesic_interval(mask, 0)


def mask_label(mask: int, labels: Optional[Sequence[str]] = None) -> str:
    """Human readable subset label, ``"{}"`` for the empty set."""
    names = [labels[i] if labels is not None else str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1]
    return "{" + ",".join(names) + "}"


def insert_zero_bit(masks, bit: int):
    """Widen masks of a lattice missing variable ``bit`` into the full lattice."""
    low = masks & ((1 << bit) - 1)
    return ((masks ^ low) << 1) | low


def popcounts(n: int) -> np.ndarray:
    """``|k|`` for every mask ``k`` of an ``n``-variable lattice."""
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts.reshape(-1, 2, 1 << i)[:, 1, :] += 1
    return counts


def parity_signs(n: int) -> np.ndarray:
    """``(-1)**|k|`` for every mask ``k``."""
    return 1 - 2 * (popcounts(n) & 1)


# -- lattice functions ------------------------------------------------------

@dataclass(frozen=True)
class LatticeFunction:
    """A real-valued function on all ``2**n`` subsets of ``n`` variables.

    Parameters
    ----------
    n : int
        Number of variables.
    values : array_like
        Length ``2**n``; ``values[k]`` is the value at mask ``k``.
    labels : sequence of str, optional
        Variable names, one per bit.
    role : str
        Free-form tag. ``"entropy"`` additionally enforces ``values[0] == 0``,
        nonnegativity and monotonicity under inclusion.
    """

    n: int
    values: np.ndarray
    labels: Optional[tuple] = None
    role: str = ""
    _tol: float = field(default=1e-9, repr=False, compare=False)

    def __post_init__(self):
        n = check_n(self.n)
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (1 << n,):
            raise LatticeError(f"expected {1 << n} values for n={n}, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", values)
        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            if len(labels) != n:
                raise LatticeError(f"expected {n} labels, got {len(labels)}")
            object.__setattr__(self, "labels", labels)
        if self.role == "entropy":
            self._check_entropy()

    def _check_entropy(self):
        v, tol = self.values, self._tol
        if abs(v[0]) > tol:
            raise LatticeError(f"entropy of the empty set must be 0, got {v[0]}")
        if v.min() < -tol:
            raise LatticeError("entropy values must be nonnegative")
        for i in range(self.n):
            pairs = v.reshape(-1, 2, 1 << i)
            if np.any(pairs[:, 1, :] < pairs[:, 0, :] - tol * (1 + np.abs(pairs[:, 0, :]))):
                raise LatticeError(f"entropy lattice is not monotone along variable {i}")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, mask):
        return self.values[mask]

    def __neg__(self):
        return self.replace(values=-self.values)

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def replace(self, values=None, role=None, labels=None) -> "LatticeFunction":
        return LatticeFunction(
            self.n,
            self.values if values is None else values,
            self.labels if labels is None else labels,
            self.role if role is None else role,
        )

    def label(self, mask: int) -> str:
        return mask_label(mask, self.labels)

    def restrict(self, face: int) -> "LatticeFunction":
        """Restriction to the subsets of ``face``, re-indexed as a ``|face|``-variable lattice."""
        _check_mask(face, self.n)
        bits = [i for i in range(self.n) if face >> i & 1]
        k = len(bits)
        masks = np.zeros(1 << k, dtype=np.int64)
        for j, bit in enumerate(bits):
            masks.reshape(-1, 2, 1 << j)[:, 1, :] |= 1 << bit
        labels = None if self.labels is None else [self.labels[b] for b in bits]
        return LatticeFunction(k, self.values[masks], labels, self.role)

    def to_dict(self) -> dict:
        out = {"n": self.n}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        out["role"] = self.role
        out["values"] = [float(v) + 0.0 for v in self.values]  # no negative zeros
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeFunction":
        try:
            n, values = data["n"], data["values"]
        except (KeyError, TypeError):
            raise LatticeError("lattice JSON needs 'n' and 'values'") from None
        if not isinstance(n, int) or isinstance(n, bool):
            raise LatticeError(f"'n' must be an integer, got {n!r}")
        if not isinstance(values, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
        ):
            raise LatticeError("'values' must be a list of numbers")
        return cls(n, values, data.get("labels"), data.get("role", ""))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "LatticeFunction":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LatticeError(f"invalid lattice JSON: {exc}") from None
        return cls.from_dict(data)


def as_lattice_function(f) -> LatticeFunction:
    if isinstance(f, LatticeFunction):
        return f
    values = np.asarray(f, dtype=np.float64)
    n = int(round(np.log2(max(len(values), 1))))
    if values.ndim != 1 or (1 << n) != len(values):
        raise LatticeError(f"length {len(values)} is not a power of two")
    return LatticeFunction(n, values)


# -- signed convolutions ----------------------------------------------------

def term_sign(convention, tau: int, zeta: int, n: int, ambient_n: Optional[int] = None) -> int:
    """Sign attached to ``f(zeta)`` when convolving at ``tau``.

    ``n`` is the size of the function's own lattice; ``ambient_n`` (default
    ``n``) the size of the lattice it is embedded in. Only ``PAPER_18`` reads
    ``ambient_n``.
    """
    convention = as_convention(convention)
    k = cardinality(zeta)
    if convention is SignConvention.PAPER_3A:
        e = k - 1
    elif convention is SignConvention.PAPER_2A:
        e = n - k
    elif convention is SignConvention.PAPER_18:
        e = (n if ambient_n is None else ambient_n) - k
    else:
        e = cardinality(tau) - k
    return -1 if e % 2 else 1


def naive_convolve(f, tau: int, reference: int, convention=SignConvention.PAPER_18,
                   ambient_n: Optional[int] = None) -> float:
    """Signed sum of ``f`` over the geodesic interval between ``tau`` and ``reference``.

    Direct enumeration, used as the brute-force oracle for the fast transforms.
    """
    f = as_lattice_function(f)
    _check_mask(tau, f.n)
    _check_mask(reference, f.n)
    total = 0.0
    for zeta in geodesic_interval(tau, reference):
        total += term_sign(convention, tau, zeta, f.n, ambient_n) * f.values[zeta]
    return total


def _coordinate_blocks(convention: SignConvention):
    """2x2 blocks ``B[t][z]`` for a down-type and an up-type coordinate, plus the global sign
    for an ``n``-lattice as a function of ``n``."""
    if convention is SignConvention.PAPER_3A:
        w = lambda t, z: (-1) ** z  # noqa: E731
        global_sign = lambda n: -1  # noqa: E731
    elif convention in (SignConvention.PAPER_2A, SignConvention.PAPER_18):
        w = lambda t, z: (-1) ** (1 - z)  # noqa: E731
        global_sign = lambda n: 1  # noqa: E731
    else:
        w = lambda t, z: (-1) ** (t - z)  # noqa: E731
        global_sign = lambda n: 1  # noqa: E731
    down = np.array([[w(t, z) if z <= t else 0 for z in (0, 1)] for t in (0, 1)], dtype=np.int64)
    up = np.array([[w(t, z) if z >= t else 0 for z in (0, 1)] for t in (0, 1)], dtype=np.int64)
    return down, up, global_sign


def coordinate_transform(values: np.ndarray, n: int, reference: int, convention) -> np.ndarray:
    """Apply the convolution anchored at ``reference`` along the last axis of ``values``.

    Bits set in ``reference`` get the up-type 2x2 update, the others the
    down-type one. The input is not modified. Works for float and integer
    arrays with arbitrary leading batch dimensions.
    """
    convention = as_convention(convention)
    down, up, global_sign = _coordinate_blocks(convention)
    work = np.array(values, copy=True)
    batch = work.shape[:-1]
    if work.shape[-1] != 1 << n:
        raise LatticeError(f"expected trailing dimension {1 << n}, got {work.shape[-1]}")
    for i in range(n):
        block = up if reference >> i & 1 else down
        view = work.reshape(batch + (1 << (n - 1 - i), 2, 1 << i))
        x0 = view[..., 0, :].copy()
        x1 = view[..., 1, :]
        (a, b), (c, d) = block
        # every block has one zero entry and unit magnitudes elsewhere
        new0 = a * x0 if b == 0 else b * x1 + a * x0
        if c == 0:
            x1 *= d
        else:
            x1 *= d
            x1 += c * x0
        view[..., 0, :] = new0
    g = global_sign(n)
    if g != 1:
        work *= g
    return work


def fast_signed_transform(f, direction: str = "down", convention=SignConvention.PAPER_3A) -> LatticeFunction:
    """Down-set (``"down"``) or up-set (``"up"``) signed convolution of every value of ``f``.

    Agrees with :func:`naive_convolve` anchored at the empty set (down) or the
    full set (up) at every mask, in O(n 2**n).
    """
    f = as_lattice_function(f)
    if direction == "down":
        reference = 0
    elif direction == "up":
        reference = f.full
    else:
        raise LatticeError(f"direction must be 'down' or 'up', got {direction!r}")
    return f.replace(values=coordinate_transform(f.values, f.n, reference, convention), role="")


def generalized_transform(f, reference: int, convention=SignConvention.PAPER_18) -> LatticeFunction:
    """Convolution over the geodesic interval between each mask and ``reference``."""
    f = as_lattice_function(f)
    _check_mask(reference, f.n)
    return f.replace(values=coordinate_transform(f.values, f.n, reference, convention), role="")
