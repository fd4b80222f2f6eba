"""
Registry of algebraic identities among the operators and information measures,
evaluated mechanically.

Each claim is checked at one of three levels:

* ``operator-matrix``: exact integer matrices, no tolerance;
* ``function``: seeded random lattice functions, absolute tolerance 1e-12;
* ``entropy``: seeded random distributions plus a structured suite
  (independent, XOR, copied variables), relative tolerance 1e-9.

Per-sample comparisons are folded into the worst case. A claim that holds
exactly at one parity of ``n`` and up to a global sign at the other is
summarized as ``ParityDependent``.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from .decompose import recurrence_count, split_identity_sides
from .lattice import (
    LatticeFunction,
    SignConvention,
    as_convention,
    full_mask,
    geodesic_interval,
    insert_zero_bit,
    naive_convolve,
)
from .measures import (
    JointDistribution,
    cll_direct,
    conditional_interaction,
    delta,
    differential_entropy,
    entropy_lattice,
    interaction_chain_oracle,
    interaction_information,
    multi_information,
    mutual_information,
)
from .operators import (
    DEFAULT_CONVENTIONS,
    ConventionSet,
    MobiusOperator,
    OPERATOR_CLAIMS,
    apply,
    convention_search,
    evaluate_operator_claim,
    s3_representation_check,
    verify_group_table,
)

FUNCTION_ATOL = 1e-12
ENTROPY_RTOL = 1e-9
DEFAULT_SAMPLES = 100
RANKING_TOP = 10

C3A = SignConvention.PAPER_3A
C18 = SignConvention.PAPER_18
ALL_CONVENTIONS = tuple(SignConvention)


class ClaimError(ValueError):
    pass


# -- verdict bookkeeping ----------------------------------------------------

class Tally:
    """Accumulates (lhs, rhs) comparisons and classifies the worst case."""

    def __init__(self, atol=0.0, rtol=0.0):
        self.atol, self.rtol = atol, rtol
        self.exact = self.flip = self.bad = self.neutral = 0
        self.deviation = 0.0
        self.samples = 0

    def _close(self, a, b):
        scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
        return np.abs(a - b) <= self.atol + self.rtol * scale

    def add(self, lhs, rhs):
        lhs, rhs = np.atleast_1d(np.asarray(lhs, float)), np.atleast_1d(np.asarray(rhs, float))
        same = self._close(lhs, rhs)
        neg = self._close(lhs, -rhs)
        both = same & neg
        self.neutral += int(both.sum())
        self.exact += int((same & ~both).sum())
        self.flip += int((neg & ~both).sum())
        self.bad += int((~same & ~neg).sum())
        self.deviation = max(self.deviation, float(np.max(np.abs(lhs - rhs))))
        self.samples += 1

    def status(self) -> str:
        if self.bad or (self.exact and self.flip):
            return "Mismatch"
        if self.flip:
            return "SignFlip"
        return "ExactMatch"

    def detail(self) -> Optional[str]:
        if self.exact and self.flip and not self.bad:
            return f"mixed: {self.exact} exact, {self.flip} sign-flipped comparisons"
        if self.bad:
            total = self.exact + self.flip + self.bad + self.neutral
            return f"{self.bad} of {total} comparisons differ"
        return None


@dataclass(frozen=True)
class Outcome:
    status: str
    deviation: Optional[float] = None
    samples: int = 1
    detail: Optional[str] = None


def _outcome(t: Tally) -> Outcome:
    dev = None if t.status() == "ExactMatch" else t.deviation
    return Outcome(t.status(), dev, t.samples, t.detail())


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    level: str
    framings: tuple
    conventions: tuple
    n_range: tuple
    check: Callable = field(repr=False, compare=False)
    expected: Optional[Callable] = field(default=None, repr=False, compare=False)
    strict_conventions: tuple = ()
    strict_framings: Optional[tuple] = None

    def expectation(self, n: int, convention, framing) -> Optional[str]:
        """Status that a correct build must reproduce, or ``None`` if exploratory."""
        if self.expected is None or as_convention(convention) not in self.strict_conventions:
            return None
        if self.strict_framings is not None and framing not in self.strict_framings:
            return None
        return self.expected(n)

    def to_dict(self) -> dict:
        return {"id": self.id, "statement": self.statement, "level": self.level,
                "framings": list(self.framings), "conventions": [c.value for c in self.conventions],
                "n_range": list(self.n_range)}


@dataclass(frozen=True)
class ClaimResult:
    claim: str
    n: int
    convention: str
    framing: str
    status: str
    samples: int
    seed: Optional[int]
    deviation: Optional[float] = None
    detail: Optional[str] = None
    expected: Optional[str] = None

    @property
    def meets_expectation(self) -> bool:
        return self.expected is None or self.status == self.expected

    def to_dict(self) -> dict:
        out = {"claim": self.claim, "n": self.n, "convention": self.convention, "framing": self.framing,
               "status": self.status, "samples": self.samples, "seed": self.seed}
        if self.deviation is not None:
            out["max_deviation"] = self.deviation
        if self.detail is not None:
            out["detail"] = self.detail
        if self.expected is not None:
            out["expected"] = self.expected
        return out


REGISTRY: dict = {}


def register(claim: Claim) -> Claim:
    if claim.id in REGISTRY:
        raise ClaimError(f"duplicate claim id {claim.id!r}")
    if not claim.framings:
        raise ClaimError(f"claim {claim.id!r} needs at least one framing")
    REGISTRY[claim.id] = claim
    return claim


def always(status):
    return lambda n: status


def parity(even, odd):
    return lambda n: even if n % 2 == 0 else odd


# -- sample suites ----------------------------------------------------------

def random_functions(n: int, seed: int, samples: int) -> list:
    rng = np.random.default_rng([seed, n, 1])
    return [LatticeFunction(n, rng.standard_normal(1 << n)) for _ in range(samples)]


def structured_distributions(n: int) -> list:
    """Independent, XOR (third = first xor second) and fully copied variables."""
    names = [f"X{i + 1}" for i in range(n)]
    out = []
    marg = [np.array([0.3, 0.7]) if i % 2 else np.array([0.2, 0.5, 0.3]) for i in range(n)]
    p = marg[0]
    for m in marg[1:]:
        p = np.multiply.outer(p, m)
    out.append(("independent", JointDistribution(tuple(names), p)))
    if n >= 3:
        p = np.zeros((2,) * n)
        for bits in itertools.product((0, 1), repeat=n):
            if bits[2] == bits[0] ^ bits[1]:
                p[bits] = 1.0
        out.append(("xor", JointDistribution.from_weights(p, names)))
    p = np.zeros((2,) * n)
    p[(0,) * n] = p[(1,) * n] = 0.5
    out.append(("copied", JointDistribution(tuple(names), p)))
    return out


@functools.lru_cache(maxsize=64)
def distribution_suite(n: int, seed: int, samples: int) -> tuple:
    """Random positive distributions (cardinalities 2 or 3) followed by the structured suite."""
    rng = np.random.default_rng([seed, n, 2])
    names = tuple(f"X{i + 1}" for i in range(n))
    dists = []
    for _ in range(samples):
        shape = tuple(int(c) for c in rng.integers(2, 4, size=n))
        dists.append(JointDistribution.from_weights(rng.uniform(size=shape), names))
    dists.extend(d for _, d in structured_distributions(n))
    return tuple((d, entropy_lattice(d)) for d in dists)


# -- shared pieces for entropy-level claims ---------------------------------

def _interaction_full(H: LatticeFunction, mask: int) -> float:
    return naive_convolve(H, mask, 0, C3A)


def _upset_at(f: LatticeFunction, x: int) -> float:
    return naive_convolve(f, 1 << x, f.full, C3A)


def _embed(values, n: int, x: int, containing: bool) -> LatticeFunction:
    masks = insert_zero_bit(np.arange(1 << (n - 1)), x)
    if containing:
        masks = masks | (1 << x)
    out = np.zeros(1 << n)
    out[masks] = values
    return LatticeFunction(n, out)


def _downset_of_differential(values, n: int, x: int, framing: str, H: LatticeFunction) -> float:
    """Down-set transform of a differential function of ``x``, read at its top, under a framing."""
    if framing == "complement-cube":
        g = LatticeFunction(n - 1, values)
        return naive_convolve(g, g.full, 0, C3A)
    if framing == "containing-cube":
        return naive_convolve(_embed(values, n, x, True), full_mask(n), 1 << x, C3A)
    # level-difference: the transform taken at the two lattice levels, then differenced
    top = full_mask(n)
    return _interaction_full(H, top) - _interaction_full(H, top ^ (1 << x))


def _pi_table(dist: JointDistribution, x: int) -> np.ndarray:
    n = dist.n
    masks = insert_zero_bit(np.arange(1 << (n - 1)), x)
    return np.array([cll_direct(dist, x, int(c)) for c in masks])


def _entropy_claim(fn):
    """Wrap ``fn(tally, dist, H, framing)`` into a check over the distribution suite."""
    def check(n, convention, framing, seed, samples):
        t = Tally(rtol=ENTROPY_RTOL)
        for dist, H in distribution_suite(n, seed, samples):
            fn(t, dist, H, framing)
        return _outcome(t)
    return check


def _function_claim(fn):
    def check(n, convention, framing, seed, samples):
        t = Tally(atol=FUNCTION_ATOL)
        for f in random_functions(n, seed, samples):
            fn(t, f, as_convention(convention), framing)
        return _outcome(t)
    return check


def _operator_claim(claim_id, subject):
    def check(n, convention, framing, seed, samples):
        c = as_convention(convention)
        if subject == "F":
            cs = ConventionSet(DEFAULT_CONVENTIONS.down, DEFAULT_CONVENTIONS.up, c)
        else:
            cs = ConventionSet(c, c, DEFAULT_CONVENTIONS.generalized)
        v = evaluate_operator_claim(claim_id, cs, n)
        return Outcome(v.status, v.deviation, 1, v.detail)
    return check


# -- operator-matrix claims -------------------------------------------------

_OPERATOR_SPECS = [
    ("downset-involution", "m m = I", "mM", (1, 6), always("ExactMatch"), (C3A,)),
    ("upset-involution", "M M = I", "mM", (1, 6), always("ExactMatch"), (C3A,)),
    ("complement-involution", "X X = I", "mM", (1, 6), parity("ExactMatch", "SignFlip"), (C3A,)),
    ("cycle-P-order-3", "P P P = I (P = X M is a 3-cycle on {f, g, h})", "mM", (1, 5), None, ()),
    ("cycle-R-order-3", "R R R = I (R = X m is a 3-cycle on {f, g, h})", "mM", (1, 5), None, ()),
    ("cycle-PR-inverse", "P R = I", "mM", (1, 5), None, ()),
    ("duality-route-XM", "with g = m f and h = M f: X M g = h", "mM", (1, 5), None, ()),
    ("duality-route-Xm", "with g = m f and h = M f: X m g = h", "mM", (1, 5), None, ()),
    ("generalized-involution", "F_eta F_eta = I for every reference eta", "F", (1, 5),
     always("ExactMatch"), (C18,)),
    ("generalized-empty-is-downset", "F_{} = m", "mM", (1, 5), parity("SignFlip", "ExactMatch"), (C3A,)),
    ("generalized-full-is-upset", "F_nu = M", "mM", (1, 5), parity("SignFlip", "ExactMatch"), (C3A,)),
    ("generalized-conjugation", "F_mu F_eta = X F_eta F_mu X for all mu, eta", "F", (2, 5), None, ()),
    ("generalized-tilde-product", "F_mu F_eta = ~F_eta ~F_mu with ~F = X F X", "F", (2, 5), None, ()),
    ("generalized-tilde-swap", "F_mu ~F_eta = F_eta ~F_mu", "F", (2, 5), None, ()),
    ("generalized-complement-reference", "F_mu = -~F_{complement(mu)}", "F", (2, 5), None, ()),
    ("complementary-subgroups-s3", "F_mu, F_{complement(mu)} and X generate a group isomorphic to S3",
     "F", (2, 4), None, ()),
]

for _id, _stmt, _subject, _range, _expected, _strict in _OPERATOR_SPECS:
    register(Claim(_id, _stmt, "operator-matrix", ("matrix",), ALL_CONVENTIONS, _range,
                   _operator_claim(_id, _subject), _expected, _strict))


def _product_table_check(n, convention, framing, seed, samples):
    report = verify_group_table(n, ConventionSet(as_convention(convention), as_convention(convention)))
    counts = report.counts()
    if counts["ExactMatch"] == 36:
        return Outcome("ExactMatch")
    if counts["SignFlip"] == 36:
        return Outcome("SignFlip")
    dev = max((c.verdict.deviation or 0.0) for c in report.cells)
    return Outcome("Mismatch", dev, 1,
                   f"{counts['ExactMatch']} exact, {counts['SignFlip']} sign-flipped, {counts['Mismatch']} mismatched cells")


register(Claim("product-table", "the 36 products of {I, m, X, M, P, R} follow the stated product table",
               "operator-matrix", ("matrix",), ALL_CONVENTIONS, (1, 6), _product_table_check))


# -- function-level claims --------------------------------------------------

def _whole_lattice_constancy(t, f, conv, framing):
    n = f.n
    top = f.full
    reference_value = naive_convolve(f, top, 0, conv)
    values = []
    for mu in range(1 << n):
        g = apply(MobiusOperator("F", ConventionSet(generalized=conv), reference=mu), f)
        values.append(g[top ^ mu])
    t.add(values, [reference_value] * len(values))


register(Claim(
    "generalized-whole-lattice-constancy",
    "F_mu f(complement(mu)) takes the same value for every mu",
    "function", ("all-references",), ALL_CONVENTIONS, (1, 5),
    _function_claim(_whole_lattice_constancy), always("ExactMatch"), (C18,)))


def _split(t, f, conv, framing):
    left, right = split_identity_sides(f, conv, axis=1, removed_face_local=framing == "face-local")
    t.add(left, right)


register(Claim(
    "split-decomposition",
    "F_{} f_123 = F_{2} f_123 + F_{} f_13 (cube cut through variable 2, generalized to n variables)",
    "function", ("face-local", "ambient"), ALL_CONVENTIONS, (2, 5),
    _function_claim(_split), always("ExactMatch"), (C18, C3A), ("face-local",)))


def _function_involution(t, f, conv, framing):
    for eta in range(1 << f.n):
        op = MobiusOperator("F", ConventionSet(generalized=conv), reference=eta)
        t.add(apply(op, apply(op, f)).values, f.values)


register(Claim(
    "generalized-involution-functions", "F_eta F_eta f = f on random f, every eta",
    "function", ("all-references",), ALL_CONVENTIONS, (1, 5),
    _function_claim(_function_involution), always("ExactMatch"), (C18,)))


# -- entropy-level claims ---------------------------------------------------

E = (C3A,)


def _delta_upset(t, dist, H, framing):
    top = H.full
    for x in range(H.n):
        up = _upset_at(H, x)
        if framing == "interaction-difference":
            t.add(up, _interaction_full(H, top) - _interaction_full(H, top ^ (1 << x)))
        else:
            t.add(up, -conditional_interaction(dist, x))


register(Claim("delta-is-upset-of-entropy",
               "Delta(rest; X) = M H(X) = -I(rest | X)", "entropy",
               ("interaction-difference", "conditional-oracle"), E, (2, 5),
               _entropy_claim(_delta_upset), always("ExactMatch"), E))


def _join_irreducible(t, dist, H, framing):
    top = H.full
    for x in range(H.n):
        up = _upset_at(H, x)
        if framing == "expectation":
            rhs = conditional_interaction(dist, x)
        else:
            rhs = _interaction_full(H, top) - _interaction_full(H, top ^ (1 << x))
        t.add(up, rhs)


register(Claim("join-irreducible-conditional",
               "M f(X) = g(rest | X) with g = m f, the conditional form of g with X instantiated",
               "entropy", ("expectation", "differential"), E, (2, 5), _entropy_claim(_join_irreducible)))


def _multi_downset(t, dist, H, framing):
    omega = multi_information(H)
    t.add(naive_convolve(omega, omega.full, 0, C3A), _interaction_full(H, H.full) * -1)


register(Claim("multiinfo-downset", "m Omega(nu) = -I(nu)", "entropy", ("full-set",), E, (2, 5),
               _entropy_claim(_multi_downset), always("ExactMatch"), E))


def _multi_upset(t, dist, H, framing):
    omega = multi_information(H)
    for x in range(H.n):
        t.add(_upset_at(omega, x), -delta(H, x))


register(Claim("multiinfo-upset", "M Omega(X) = -Delta(rest; X)", "entropy", ("singletons",), E, (3, 5),
               _entropy_claim(_multi_upset), always("ExactMatch"), E))


def _multi_expansion(t, dist, H, framing):
    om = multi_information(H).values
    if framing == "delta-form":
        # Delta(12;3) = I(13) + I(23) - Omega(123)
        t.add(delta(H, 2), om[0b101] + om[0b110] - om[0b111])
    elif framing == "upset-form":
        t.add(_upset_at(multi_information(H), 2), -om[0b110] - om[0b101] + om[0b111])
    else:
        # the expansion is also asserted to equal Delta(12;3) itself
        t.add(-om[0b110] - om[0b101] + om[0b111], delta(H, 2))


register(Claim("multiinfo-delta-expansion",
               "M Omega(X3) = -Omega(23) - Omega(13) + Omega(123); Delta(12;3) = I(13) + I(23) - Omega(123)",
               "entropy", ("delta-form", "upset-form", "upset-form-equals-delta"), E, (3, 3),
               _entropy_claim(_multi_expansion), always("ExactMatch"), E, ("delta-form", "upset-form")))


def _multi_double(t, dist, H, framing):
    omega = multi_information(H)
    if framing == "involution":
        back = apply(MobiusOperator("m"), apply(MobiusOperator("m"), omega))
        t.add(back.values, omega.values)
    else:
        # transform both sides of m Omega = -I: Omega against -m I = -H
        t.add(omega.values, -H.values)


register(Claim("multiinfo-compound-behaviour",
               "m applied to both sides of m Omega = -I", "entropy", ("involution", "both-sides"), E, (2, 5),
               _entropy_claim(_multi_double)))


def _cll_two_routes(t, dist, H, framing):
    d1 = delta(H, 0)
    t.add(d1, H[1] - H[0b011] - H[0b101] + H[0b111])
    t.add(d1, -cll_direct(dist, 1, 0b001) + cll_direct(dist, 1, 0b101))
    t.add(d1, -cll_direct(dist, 2, 0b001) + cll_direct(dist, 2, 0b011))


register(Claim("cll-delta-two-routes",
               "Delta(23;1) = H1 - H12 - H13 + H123 = -pi(2|1) + pi(2|13) = -pi(3|1) + pi(3|12)",
               "entropy", ("direct-cll",), E, (3, 3), _entropy_claim(_cll_two_routes), always("ExactMatch"), E))


def _cll_entropy_difference(t, dist, H, framing):
    for x in range(H.n):
        rest = H.full ^ (1 << x)
        for cond in geodesic_interval(rest, 0):
            t.add(cll_direct(dist, x, cond), H[cond | (1 << x)] - H[cond])


register(Claim("cll-is-entropy-difference",
               "pi(X | tau) = -<ln P(X | tau)> = H(tau + X) - H(tau)", "entropy", ("all-conditions",), E, (2, 5),
               _entropy_claim(_cll_entropy_difference), always("ExactMatch"), E))


def _two_variable(t, dist, H, framing):
    mi = mutual_information(dist, 0, 1)
    t.add(interaction_information(H)[0b11], mi)
    t.add(multi_information(H)[0b11], mi)


register(Claim("two-variable-mutual-information",
               "for two variables interaction information and multi-information equal mutual information",
               "entropy", ("pair",), E, (2, 2), _entropy_claim(_two_variable), always("ExactMatch"), E))


def _chain(t, dist, H, framing):
    ii = interaction_information(H)[H.full]
    for order in itertools.permutations(range(H.n)):
        t.add(ii, interaction_chain_oracle(dist, order))


register(Claim("interaction-chain-rule",
               "I(v_n) = I(v_{n-1}) - I(v_{n-1} | X_n) agrees with the down-set transform for every order",
               "entropy", ("all-orders",), E, (1, 4), _entropy_claim(_chain), always("ExactMatch"), E))


def _entropy_chain(t, dist, H, framing):
    for x in range(H.n):
        rest = H.full ^ (1 << x)
        t.add(H[H.full], H[rest] + cll_direct(dist, x, rest))


register(Claim("entropy-chain-rule", "H(v_n) = H(v_{n-1}) + H(X_n | v_{n-1})", "entropy", ("last-variable",),
               E, (1, 5), _entropy_claim(_entropy_chain), always("ExactMatch"), E))


DIFFERENTIAL_FRAMINGS = ("complement-cube", "containing-cube", "level-difference")


def _differential_downset(source):
    def fn(t, dist, H, framing):
        for x in range(H.n):
            vals = differential_entropy(H, x).values if source == "entropy" else _pi_table(dist, x)
            t.add(_downset_of_differential(vals, H.n, x, framing, H), _upset_at(H, x))
    return fn


register(Claim("differential-entropy-downset", "m dH(v_n) = I(v_n) - I(v_{n-1}) = M H(X_n)", "entropy",
               DIFFERENTIAL_FRAMINGS, E, (2, 5), _entropy_claim(_differential_downset("entropy"))))

register(Claim("cll-downset-is-delta", "m pi(X_n | v_{n-1}) = M H(X_n) = Delta(v_{n-1}; X_n)", "entropy",
               DIFFERENTIAL_FRAMINGS, E, (2, 5), _entropy_claim(_differential_downset("cll"))))


def _operator_forms(source):
    m, M, X, R, P = (MobiusOperator(k) for k in "mMXRP")

    def fn(t, dist, H, framing):
        n = H.n
        RH = apply(R, H)
        for x in range(n):
            vals = differential_entropy(H, x).values if source == "entropy" else _pi_table(dist, x)
            scalar = vals[-1]
            if framing == "mM-at-singleton":
                t.add(scalar, apply(m, apply(M, H))[1 << x])
            elif framing == "Xm-at-singleton":
                t.add(scalar, apply(X, apply(m, H))[1 << x])
            elif framing == "R-at-singleton":
                t.add(scalar, RH[1 << x])
            elif framing in ("complement-cube", "containing-cube"):
                masks = insert_zero_bit(np.arange(1 << (n - 1)), x)
                if framing == "containing-cube":
                    masks = masks | (1 << x)
                t.add(vals, RH.values[masks])
            elif framing.startswith("inverse-"):
                e = _embed(vals, n, x, framing == "inverse-containing-cube")
                t.add(apply(P, e)[1 << x], H[1 << x])
    return fn


register(Claim("differential-entropy-operator-forms",
               "dH(v_n) = m M H(X_n) = X m H(X_n) = R H(X_n) and H(X_n) = P dH(v_n)", "entropy",
               ("mM-at-singleton", "Xm-at-singleton", "R-at-singleton", "complement-cube", "containing-cube",
                "inverse-complement-cube", "inverse-containing-cube"),
               E, (2, 5), _entropy_claim(_operator_forms("entropy"))))

register(Claim("cll-operator-form", "pi(X_n | v_{n-1}) = dH(v_n) = R H(X_n)", "entropy",
               ("R-at-singleton", "complement-cube", "containing-cube"),
               E, (2, 5), _entropy_claim(_operator_forms("cll"))))


def _complement_remap(t, dist, H, framing):
    m, M, X = MobiusOperator("m"), MobiusOperator("M"), MobiusOperator("X")
    phi = apply(X, apply(M, H))
    back = apply(X, apply(m if framing == "downset-route" else M, phi))
    t.add(back.values, H.values)


register(Claim("complement-remap",
               "Phi = X Delta with Delta = M H on the whole lattice; X m Phi = X m X Delta = H",
               "function", ("downset-route", "upset-route"), E, (1, 5), _entropy_claim(_complement_remap)))


def _sym_delta(t, dist, H, framing):
    deltas = [delta(H, x) for x in range(H.n)]
    product = float(np.prod(deltas))
    if framing == "cll-product":
        pis = [_downset_of_differential(_pi_table(dist, x), H.n, x, "level-difference", H) for x in range(H.n)]
        t.add(product, float(np.prod(pis)))
    else:
        # negated product of the up-set values against the plain product of deltas
        t.add(-float(np.prod([_upset_at(H, x) for x in range(H.n)])), product)


register(Claim("symmetric-delta-forms",
               "symmetric delta = prod Delta = prod m pi; also stated as -prod M H(X)", "entropy",
               ("cll-product", "negated-upset-product"), E, (2, 5), _entropy_claim(_sym_delta),
               always("ExactMatch"), E, ("cll-product",)))


def _nonnegativity(t, dist, H, framing):
    om = multi_information(H).values
    t.add(np.minimum(om, 0.0), np.zeros_like(om))
    for x in range(H.n):
        ce = differential_entropy(H, x).values
        t.add(np.minimum(ce, 0.0), np.zeros_like(ce))
    for i in range(H.n):
        pairs = H.values.reshape(-1, 2, 1 << i)
        diff = pairs[:, 1, :] - pairs[:, 0, :]
        t.add(np.minimum(diff, 0.0), np.zeros_like(diff))


register(Claim("measure-nonnegativity",
               "Omega >= 0, conditional entropies >= 0, entropy monotone under inclusion", "entropy",
               ("all-subsets",), E, (1, 5), _entropy_claim(_nonnegativity), always("ExactMatch"), E))


def _xor_fixed_points(n, convention, framing, seed, samples):
    _, dist = structured_distributions(3)[1]
    H = entropy_lattice(dist)
    ln2 = float(np.log(2.0))
    t = Tally(atol=FUNCTION_ATOL)
    t.add(interaction_information(H)[0b111], -ln2)
    t.add(multi_information(H)[0b111], ln2)
    t.add(delta(H, 0), -ln2)
    t.add(cll_direct(dist, 0, 0b110), 0.0)
    return _outcome(t)


register(Claim("xor-fixed-points",
               "third variable = xor of two fair bits: I = -ln 2, Omega = ln 2, Delta(23;1) = -ln 2, pi(1|23) = 0",
               "entropy", ("analytic",), E, (3, 3), _xor_fixed_points, always("ExactMatch"), E))


# -- evaluation and reports -------------------------------------------------

def evaluate_claim(claim, n: int, convention, framing: str, seed: Optional[int] = 0,
                   samples: int = DEFAULT_SAMPLES) -> ClaimResult:
    """Evaluate one claim at one ``(n, convention, framing, seed)`` point."""
    if isinstance(claim, str):
        try:
            claim = REGISTRY[claim]
        except KeyError:
            raise ClaimError(f"unknown claim id {claim!r}") from None
    if framing not in claim.framings:
        raise ClaimError(f"claim {claim.id!r} has no framing {framing!r} (have {', '.join(claim.framings)})")
    lo, hi = claim.n_range
    if not lo <= n <= hi:
        raise ClaimError(f"claim {claim.id!r} supports n in {lo}..{hi}, got {n}")
    convention = as_convention(convention)
    if claim.level == "operator-matrix":
        seed = None
    out = claim.check(n, convention, framing, seed if seed is not None else 0, samples)
    return ClaimResult(claim.id, n, convention.value, framing, out.status, out.samples, seed,
                       out.deviation, out.detail, claim.expectation(n, convention, framing))


def summarize(results) -> list:
    """Fold per-``n`` results of each (claim, convention, framing) into one status."""
    groups = {}
    for r in results:
        groups.setdefault((r.claim, r.convention, r.framing), []).append(r)
    rows = []
    for (cid, conv, framing), rs in sorted(groups.items()):
        per_n = {}
        for r in rs:
            per_n.setdefault(r.n, set()).add(r.status)
        # seeds at one n fold like samples: any disagreement is a mismatch
        per_n = {k: v.pop() if len(v) == 1 else "Mismatch" for k, v in per_n.items()}
        statuses = set(per_n.values())
        if statuses == {"ExactMatch"}:
            status = "ExactMatch"
        elif statuses == {"SignFlip"}:
            status = "SignFlip"
        elif "Mismatch" in statuses:
            status = "Mismatch"
        else:
            even = {per_n[k] for k in per_n if k % 2 == 0}
            odd = {per_n[k] for k in per_n if k % 2 == 1}
            status = "ParityDependent" if len(even) == 1 and len(odd) == 1 and even != odd else "Mismatch"
        rows.append({"claim": cid, "convention": conv, "framing": framing, "status": status,
                     "per_n": {str(k): v for k, v in sorted(per_n.items())}})
    return rows


SEARCH_CLAIMS = ("downset-involution", "upset-involution", "complement-involution",
                 "generalized-empty-is-downset", "generalized-full-is-upset",
                 "cycle-P-order-3", "cycle-R-order-3", "cycle-PR-inverse") + tuple(
    k for k in OPERATOR_CLAIMS if k.startswith("product-table:"))


def _anomalies(results, summary, n_range) -> list:
    notes = []
    notes.extend(s3_representation_check().anomalies)
    by = {(r["claim"], r["convention"], r["framing"]): r["status"] for r in summary}
    if by.get(("symmetric-delta-forms", "paper-3a", "negated-upset-product")) == "SignFlip":
        notes.append("the negated up-set product form of the symmetric delta has the opposite sign "
                     "of the plain product of deltas")
    if by.get(("multiinfo-delta-expansion", "paper-3a", "upset-form-equals-delta")) == "SignFlip":
        notes.append("the up-set expansion of Omega at X3 equals -Delta(12;3), not Delta(12;3)")
    if recurrence_count(4) != recurrence_count(4, None):
        notes.append(f"a 4-cube has 4 cutting axes, not 3: recursive count {recurrence_count(4, None)} "
                     f"versus the published {recurrence_count(4)}")
    for r in results:
        if r.claim == "product-table" and r.convention == "paper-3a" and r.status != "ExactMatch":
            notes.append(f"product table fails at n={r.n} under paper-3a: {r.detail}")
    if by.get(("multiinfo-compound-behaviour", "paper-3a", "involution")) == "ExactMatch":
        notes.append("m m Omega = Omega holds like for any function; only transforming both sides "
                     "of m Omega = -I fails")
    return notes


def run_report(n_range=(2, 4), seeds=(0,), samples: int = DEFAULT_SAMPLES, claims=None) -> dict:
    """Evaluate every registered claim over the given sizes and seeds."""
    lo, hi = n_range
    if lo < 1 or hi < lo or hi > 6:
        raise ClaimError(f"n range must satisfy 1 <= lo <= hi <= 6, got {lo}..{hi}")
    seeds = sorted(set(int(s) for s in seeds))
    if not seeds:
        raise ClaimError("need at least one seed")
    ids = sorted(REGISTRY) if claims is None else sorted(claims)
    results = []
    for cid in ids:
        claim = REGISTRY[cid]
        for n in range(max(lo, claim.n_range[0]), min(hi, claim.n_range[1]) + 1):
            for conv in claim.conventions:
                for framing in claim.framings:
                    for seed in ([None] if claim.level == "operator-matrix" else seeds):
                        results.append(evaluate_claim(claim, n, conv, framing, seed, samples))
    results.sort(key=lambda r: (r.claim, r.n, r.convention, r.framing, -1 if r.seed is None else r.seed))
    summary = summarize(results)
    table1 = {str(n): verify_group_table(n).to_dict() for n in range(lo, min(hi, 6) + 1)}
    ranking = []
    for n in range(lo, min(hi, 5) + 1):
        rows = convention_search(n, SEARCH_CLAIMS)
        default = DEFAULT_CONVENTIONS.to_dict()
        rank = next(i for i, r in enumerate(rows) if r["conventions"] == default)
        ranking.append({"n": n, "claims": list(SEARCH_CLAIMS), "combinations": len(rows),
                        "default_rank": rank + 1, "default": rows[rank], "top": rows[:RANKING_TOP]})
    failures = [r.to_dict() for r in results if not r.meets_expectation]
    return {
        "generated_for": {"tool": "mobiusinfo", "version": __version__, "n_range": [lo, hi],
                          "seeds": seeds, "samples": samples},
        "registry": [REGISTRY[c].to_dict() for c in ids],
        "claims": [r.to_dict() for r in results],
        "summary": summary,
        "table1": table1,
        "s3": s3_representation_check().to_dict(),
        "convention_ranking": ranking,
        "anomalies": _anomalies(results, summary, n_range),
        "expectation_failures": failures,
    }


def clear_caches():
    """Drop memoized matrices and sample suites, e.g. after patching a transform."""
    from . import operators
    operators._mats.cache_clear()
    operators._generalized.cache_clear()
    distribution_suite.cache_clear()


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"
