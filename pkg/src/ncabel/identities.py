"""Both sides of the noncommutative Abel-Hurwitz identities and their classical forms.

Every side is built from the ring elements ``X``, ``Y`` and ``x_1..x_n`` of
a :class:`Setup`, so the same builders serve all four models:

``UNIVERSAL_XY``
    ``Y := c - X`` with ``c`` central.  Any ring in which ``X + Y`` is
    central is a homomorphic image of this one, so a zero difference here
    proves the identity in general.
``UNIVERSAL_XYV``
    ``Y := d - X - x(V)`` with ``d`` central, the analogous model for the
    hypothesis that ``X + Y + x(V)`` is central.
``FREE``
    ``X`` and ``Y`` independent noncommuting generators, no hypothesis.
``COMMUTATIVE``
    everything central (the classical polynomial identities); this ring also
    carries a central ``z`` used for the one-variable Abel specialization.

"Interpreted as 1" conventions are explicit case splits; no negative power
is ever formed.
"""
from __future__ import annotations

import copy
import enum
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator

from .errors import ContractViolation
from .freealg import Polynomial, RingSpec, poly_sum


class Model(enum.Enum):
    UNIVERSAL_XY = "universal_xy"
    UNIVERSAL_XYV = "universal_xyv"
    FREE = "free"
    COMMUTATIVE = "commutative"


class Identity(enum.Enum):
    THM1 = "thm1"
    THM2 = "thm2"
    THM4 = "thm4"
    THM5 = "thm5"
    POLAR1 = "polar1"
    POLAR2 = "polar2"
    ABEL1 = "abel1"
    ABEL2 = "abel2"
    ABEL3 = "abel3"
    HURWITZ1 = "hurwitz1"
    HURWITZ2 = "hurwitz2"
    HURWITZ3 = "hurwitz3"

    @property
    def model(self) -> Model:
        return _MODEL_OF[self]


_MODEL_OF = {
    Identity.THM1: Model.UNIVERSAL_XY,
    Identity.THM2: Model.UNIVERSAL_XY,
    Identity.THM4: Model.UNIVERSAL_XY,
    Identity.THM5: Model.UNIVERSAL_XYV,
    Identity.POLAR1: Model.FREE,
    Identity.POLAR2: Model.FREE,
    **{i: Model.COMMUTATIVE for i in (Identity.ABEL1, Identity.ABEL2, Identity.ABEL3,
                                      Identity.HURWITZ1, Identity.HURWITZ2, Identity.HURWITZ3)},
}


class Side(enum.Enum):
    LHS = "lhs"
    RHS = "rhs"


@dataclass(frozen=True)
class Setup:
    """Ground set ``V = {1..n}`` and the ring elements of one model."""

    n: int
    model: Model
    ring: RingSpec = field(init=False, repr=False, compare=False)
    X: Polynomial = field(init=False, repr=False, compare=False)
    Y: Polynomial = field(init=False, repr=False, compare=False)
    xs: tuple[Polynomial, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ContractViolation(f"ground-set size must be nonnegative, got {self.n}")
        names = tuple(f"x{s}" for s in range(1, self.n + 1))
        if self.model is Model.UNIVERSAL_XY:
            ring = RingSpec(("X",) + names, ("c",))
        elif self.model is Model.UNIVERSAL_XYV:
            ring = RingSpec(("X",) + names, ("d",))
        elif self.model is Model.FREE:
            ring = RingSpec(("X", "Y") + names, ())
        else:
            ring = RingSpec((), ("X", "Y") + names + ("z",))
        X = ring.var("X")
        xs = tuple(ring.var(name) for name in names)
        if self.model is Model.UNIVERSAL_XY:
            Y = ring.var("c") - X
        elif self.model is Model.UNIVERSAL_XYV:
            Y = ring.var("d") - X - poly_sum(ring, xs)
        else:
            Y = ring.var("Y")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "xs", xs)

    @property
    def ground_set(self) -> range:
        return range(1, self.n + 1)

    def x(self, s: int) -> Polynomial:
        return self.xs[s - 1]

    def with_Y(self, Y: Polynomial) -> "Setup":
        """Same ring and ``X, x_s`` with a different element playing ``Y``."""
        if Y.ring != self.ring:
            raise ContractViolation("replacement Y must live in the setup's ring")
        other = copy.copy(self)
        object.__setattr__(other, "Y", Y)
        return other


@dataclass(frozen=True)
class IdentityCase:
    identity: Identity
    n: int
    m: int | None = None

    def __post_init__(self):
        if isinstance(self.identity, str):
            object.__setattr__(self, "identity", Identity(self.identity.lower()))
        if self.n < 0:
            raise ContractViolation(f"n must be nonnegative, got {self.n}")
        if self.identity is Identity.POLAR2:
            if self.m is None or not 0 <= self.m < self.n:
                raise ContractViolation(f"polar2 needs 0 <= m < n, got n={self.n}, m={self.m}")
        elif self.m is not None:
            raise ContractViolation(f"m is only meaningful for polar2, got m={self.m} for {self.identity.value}")

    @property
    def model(self) -> Model:
        return self.identity.model

    def label(self) -> str:
        if self.m is None:
            return f"{self.identity.value}(n={self.n})"
        return f"{self.identity.value}(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class VerificationReport:
    case: IdentityCase
    equal: bool
    lhs_terms: int
    rhs_terms: int
    diff: Polynomial
    elapsed: float
    lhs: Polynomial = field(repr=False, compare=False)
    rhs: Polynomial = field(repr=False, compare=False)

    @property
    def model(self) -> Model:
        return self.case.model


# ground-set combinatorics

def subsets(n: int) -> Iterator[tuple[int, ...]]:
    """All subsets of ``{1..n}`` in increasing bitmask order (bit i is element i+1)."""
    for mask in range(1 << n):
        yield tuple(i + 1 for i in range(n) if mask >> i & 1)


def injective_tuples(elements: Iterable[int]) -> Iterator[tuple[int, ...]]:
    """Every ordered tuple of distinct elements, including ``()``, by depth-first search."""
    elements = tuple(elements)

    def walk(prefix, remaining):
        yield prefix
        for i, e in enumerate(remaining):
            yield from walk(prefix + (e,), remaining[:i] + remaining[i + 1:])

    yield from walk((), elements)


def subset_sum(setup: Setup, S: Iterable[int]) -> Polynomial:
    """``x(S)``, the sum of ``x_s`` over ``s`` in ``S``."""
    S = tuple(S)
    for s in S:
        if not 1 <= s <= setup.n:
            raise IndexError(f"element {s} outside ground set {{1..{setup.n}}}")
    if len(set(S)) != len(S):
        raise ContractViolation(f"repeated elements in subset {S}")
    return poly_sum(setup.ring, (setup.x(s) for s in S))


def _complement(setup: Setup, S: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(s for s in setup.ground_set if s not in S)


def _x_part(setup: Setup, S: tuple[int, ...]) -> Polynomial:
    """``X (X + x(S))^(|S|-1)``, read as 1 when ``S`` is empty."""
    if not S:
        return setup.ring.one()
    return setup.X * (setup.X + subset_sum(setup, S)) ** (len(S) - 1)


# noncommutative identities (also used verbatim in the commutative model)

def thm1_lhs(setup: Setup) -> Polynomial:
    X, Y, n = setup.X, setup.Y, setup.n
    parts = []
    for S in subsets(n):
        xS = subset_sum(setup, S)
        parts.append((X + xS) ** len(S) * (Y - xS) ** (n - len(S)))
    return poly_sum(setup.ring, parts)


def _tuple_products(setup: Setup, elements: tuple[int, ...]):
    """Yield ``(tuple, x_{i1}...x_{ik})`` for every injective tuple, extending products along the DFS."""

    def walk(prefix, product, remaining):
        yield prefix, product
        for i, e in enumerate(remaining):
            yield from walk(prefix + (e,), product * setup.x(e), remaining[:i] + remaining[i + 1:])

    yield from walk((), setup.ring.one(), elements)


def thm1_rhs(setup: Setup) -> Polynomial:
    """Sum over every ordered tuple of distinct elements; like terms are left to the kernel."""
    n = setup.n
    s = setup.X + setup.Y
    powers = [setup.ring.one()]
    for _ in range(n):
        powers.append(powers[-1] * s)
    parts = [powers[n - len(tup)] * word for tup, word in _tuple_products(setup, tuple(setup.ground_set))]
    return poly_sum(setup.ring, parts)


def thm2_lhs(setup: Setup) -> Polynomial:
    Y, n = setup.Y, setup.n
    parts = []
    for S in subsets(n):
        parts.append(_x_part(setup, S) * (Y - subset_sum(setup, S)) ** (n - len(S)))
    return poly_sum(setup.ring, parts)


def thm2_rhs(setup: Setup) -> Polynomial:
    return (setup.X + setup.Y) ** setup.n


def thm4_lhs(setup: Setup) -> Polynomial:
    Y, n = setup.Y, setup.n
    xV = subset_sum(setup, setup.ground_set)
    parts = []
    for S in subsets(n):
        if len(S) == n:
            right = setup.ring.one()
        else:
            right = (Y - subset_sum(setup, S)) ** (n - len(S) - 1) * (Y - xV)
        parts.append(_x_part(setup, S) * right)
    return poly_sum(setup.ring, parts)


def thm4_rhs(setup: Setup) -> Polynomial:
    if setup.n == 0:
        return setup.ring.one()
    s = setup.X + setup.Y
    return (s - subset_sum(setup, setup.ground_set)) * s ** (setup.n - 1)


def thm5_lhs(setup: Setup) -> Polynomial:
    Y, n = setup.Y, setup.n
    parts = []
    for S in subsets(n):
        if len(S) == n:
            right = setup.ring.one()
        else:
            right = (Y + subset_sum(setup, _complement(setup, S))) ** (n - len(S) - 1) * Y
        parts.append(_x_part(setup, S) * right)
    return poly_sum(setup.ring, parts)


def thm5_rhs(setup: Setup) -> Polynomial:
    if setup.n == 0:
        return setup.ring.one()
    s = setup.X + setup.Y
    return s * (s + subset_sum(setup, setup.ground_set)) ** (setup.n - 1)


# classical commutative identities

def hurwitz3_lhs(setup: Setup) -> Polynomial:
    """Classical order ``X(X+x(S))^(|S|-1) Y (Y + x(V\\S))^(n-|S|-1)``."""
    Y, n = setup.Y, setup.n
    parts = []
    for S in subsets(n):
        if len(S) == n:
            right = setup.ring.one()
        else:
            right = Y * (Y + subset_sum(setup, _complement(setup, S))) ** (n - len(S) - 1)
        parts.append(_x_part(setup, S) * right)
    return poly_sum(setup.ring, parts)


def _abel_vars(setup: Setup):
    ring = setup.ring
    return setup.X, setup.Y, ring.var("z")


def abel1_lhs(setup: Setup) -> Polynomial:
    X, Y, z = _abel_vars(setup)
    n = setup.n
    return poly_sum(setup.ring, (comb(n, k) * ((X + k * z) ** k * (Y - k * z) ** (n - k))
                                 for k in range(n + 1)))


def abel1_rhs(setup: Setup) -> Polynomial:
    X, Y, z = _abel_vars(setup)
    n = setup.n
    return poly_sum(setup.ring, ((factorial(n) // factorial(k)) * ((X + Y) ** k * z ** (n - k))
                                 for k in range(n + 1)))


def _abel_x_part(setup: Setup, k: int) -> Polynomial:
    X, _, z = _abel_vars(setup)
    if k == 0:
        return setup.ring.one()
    return X * (X + k * z) ** (k - 1)


def abel2_lhs(setup: Setup) -> Polynomial:
    _, Y, z = _abel_vars(setup)
    n = setup.n
    return poly_sum(setup.ring, (comb(n, k) * (_abel_x_part(setup, k) * (Y - k * z) ** (n - k))
                                 for k in range(n + 1)))


def abel3_lhs(setup: Setup) -> Polynomial:
    _, Y, z = _abel_vars(setup)
    n = setup.n
    parts = []
    for k in range(n + 1):
        right = setup.ring.one() if k == n else Y * (Y + (n - k) * z) ** (n - k - 1)
        parts.append(comb(n, k) * (_abel_x_part(setup, k) * right))
    return poly_sum(setup.ring, parts)


def abel3_rhs(setup: Setup) -> Polynomial:
    X, Y, z = _abel_vars(setup)
    if setup.n == 0:
        return setup.ring.one()
    return (X + Y) * (X + Y + setup.n * z) ** (setup.n - 1)


# polarization

def alternating_sum(setup: Setup, base: Polynomial, W: Iterable[int], m: int) -> Polynomial:
    """``sum over S in W of (-1)^(|W|-|S|) (base + x(S))^m``."""
    W = tuple(sorted(W))
    parts = []
    for mask in range(1 << len(W)):
        S = tuple(w for i, w in enumerate(W) if mask >> i & 1)
        term = (base + subset_sum(setup, S)) ** m
        parts.append(term if (len(W) - len(S)) % 2 == 0 else -term)
    return poly_sum(setup.ring, parts)


def polarization_sum(setup: Setup, m: int) -> Polynomial:
    if m < 0:
        raise ContractViolation(f"exponent must be nonnegative, got {m}")
    return alternating_sum(setup, setup.X, setup.ground_set, m)


def permutation_sum(setup: Setup, W: Iterable[int] | None = None) -> Polynomial:
    """Sum of ``x_{i1} ... x_{ik}`` over all orderings of ``W`` (default: all of V)."""
    W = tuple(setup.ground_set if W is None else W)
    return poly_sum(setup.ring, (word for tup, word in _tuple_products(setup, W) if len(tup) == len(W)))


# dispatch

_BUILDERS = {
    Identity.THM1: (thm1_lhs, thm1_rhs),
    Identity.THM2: (thm2_lhs, thm2_rhs),
    Identity.THM4: (thm4_lhs, thm4_rhs),
    Identity.THM5: (thm5_lhs, thm5_rhs),
    Identity.HURWITZ1: (thm1_lhs, thm1_rhs),
    Identity.HURWITZ2: (thm2_lhs, thm2_rhs),
    Identity.HURWITZ3: (hurwitz3_lhs, thm5_rhs),
    Identity.ABEL1: (abel1_lhs, abel1_rhs),
    Identity.ABEL2: (abel2_lhs, thm2_rhs),
    Identity.ABEL3: (abel3_lhs, abel3_rhs),
}


def build_side(setup: Setup, case: IdentityCase, side: Side | str) -> Polynomial:
    side = Side(side) if isinstance(side, str) else side
    if setup.model is not case.model:
        raise ContractViolation(
            f"{case.identity.value} is stated in the {case.model.value} model, setup uses {setup.model.value}")
    if setup.n != case.n:
        raise ContractViolation(f"setup has n={setup.n}, case has n={case.n}")
    if case.identity is Identity.POLAR1:
        return polarization_sum(setup, case.n) if side is Side.LHS else permutation_sum(setup)
    if case.identity is Identity.POLAR2:
        return polarization_sum(setup, case.m) if side is Side.LHS else setup.ring.zero()
    lhs, rhs = _BUILDERS[case.identity]
    return lhs(setup) if side is Side.LHS else rhs(setup)


def build_sides(case: IdentityCase) -> tuple[Setup, Polynomial, Polynomial]:
    setup = Setup(case.n, case.model)
    return setup, build_side(setup, case, Side.LHS), build_side(setup, case, Side.RHS)


def verify(case: IdentityCase, rhs_case: IdentityCase | None = None) -> VerificationReport:
    """Build both sides exactly and compare.

    ``rhs_case`` swaps in another identity's right-hand side (same model and
    n); that is only useful as a negative control.
    """
    start = time.perf_counter()
    setup = Setup(case.n, case.model)
    lhs = build_side(setup, case, Side.LHS)
    rhs = build_side(setup, rhs_case or case, Side.RHS)
    diff = lhs - rhs
    elapsed = time.perf_counter() - start
    return VerificationReport(case, diff.is_zero(), len(lhs), len(rhs), diff, elapsed, lhs, rhs)


def catalog(n_max: int, m_all: bool = True) -> list[IdentityCase]:
    """Every identity case with ``n <= n_max`` (all valid ``m`` for polar2)."""
    cases = []
    for ident in Identity:
        for n in range(n_max + 1):
            if ident is Identity.POLAR2:
                ms = range(n) if m_all else range(min(n, 1))
                cases.extend(IdentityCase(ident, n, m) for m in ms)
            else:
                cases.append(IdentityCase(ident, n))
    return cases


# the n = 2 worked examples and the weakened hypothesis

def free_diff_thm1(n: int) -> Polynomial:
    """LHS - RHS of ``thm1`` with ``X`` and ``Y`` unrelated generators."""
    setup = Setup(n, Model.FREE)
    return thm1_lhs(setup) - thm1_rhs(setup)


def free_diff_thm2(n: int) -> Polynomial:
    setup = Setup(n, Model.FREE)
    return thm2_lhs(setup) - thm2_rhs(setup)


def commutator(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b - b * a


def _homogeneous_degree(p: Polynomial) -> int:
    degrees = {len(c) + len(w) for c, w in p.term_dict()}
    if len(degrees) != 1:
        raise ContractViolation(f"expected a homogeneous polynomial, found degrees {sorted(degrees)}")
    return degrees.pop()


def two_sided_multiples(rels: Iterable[Polynomial], degree: int) -> list[Polynomial]:
    """All ``u * r * v`` with ``u, v`` words and ``u*r*v`` of the given total degree.

    Each relation must be homogeneous; the result spans the degree-``degree``
    part of the two-sided ideal the relations generate.
    """
    out = []
    for r in rels:
        d = _homogeneous_degree(r)
        extra = degree - d
        if extra < 0:
            continue
        ring = r.ring
        gens = [ring.var(g) for g in ring.noncommuting]
        by_len = {0: [ring.one()]}
        for length in range(1, extra + 1):
            by_len[length] = [w * g for w in by_len[length - 1] for g in gens]
        for left_len in range(extra + 1):
            for u in by_len[left_len]:
                for v in by_len[extra - left_len]:
                    out.append(u * r * v)
    return out


def in_rational_span(target: Polynomial, spanning: list[Polynomial]) -> bool:
    """Exact test whether ``target`` is a rational combination of ``spanning``."""
    keys = sorted({k for p in spanning + [target] for k in p.term_dict()})
    index = {k: i for i, k in enumerate(keys)}
    # one row per monomial, one column per spanning element, last column the target
    rows = [[Fraction(0)] * (len(spanning) + 1) for _ in keys]
    for j, p in enumerate(spanning + [target]):
        for k, coeff in p.term_dict().items():
            rows[index[k]][j] = Fraction(coeff)
    return _rank(rows, len(spanning)) == _rank(rows, len(spanning) + 1)


def _rank(rows, ncols: int) -> int:
    mat = [row[:ncols] for row in rows]
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col] / p
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank
