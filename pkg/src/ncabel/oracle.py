"""Randomized cross-check by evaluation in matrix rings over Z/p.

Noncommuting generators become random ``dim x dim`` matrices and central
variables become scalars (scalar matrices are exactly the center of a full
matrix ring over a field), so every centrality hypothesis holds at the
evaluation point.  A nonzero evaluation of ``lhs - rhs`` refutes an identity
outright; all-zero evaluations only make equality likely.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ContractViolation, RingMismatchError
from .freealg import Polynomial, RingSpec

DEFAULT_MODULUS = 1_000_000_007
DEFAULT_DIM = 3
DEFAULT_TRIALS = 20
WITNESS_TRIALS = 200

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (covers every 64-bit modulus)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class OracleConfig:
    dim: int = DEFAULT_DIM
    modulus: int = DEFAULT_MODULUS
    trials: int = DEFAULT_TRIALS
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"matrix dimension must be >= 1, got {self.dim}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        if self.modulus != DEFAULT_MODULUS and not is_prime(self.modulus):
            warnings.warn(f"modulus {self.modulus} is not prime; oracle verdicts lose their guarantees",
                          RuntimeWarning, stacklevel=3)

    @property
    def dtype(self):
        return _dtype_for(self.dim, self.modulus)


def _dtype_for(dim: int, modulus: int):
    # int64 matmul is exact while dim * (p-1)^2 fits
    return np.int64 if dim * (modulus - 1) ** 2 < 2 ** 63 else object


@dataclass(frozen=True)
class Assignment:
    """Matrices for the generators and scalars for the central variables of a ring."""

    ring: RingSpec
    modulus: int
    dim: int
    matrices: dict[str, np.ndarray]
    scalars: dict[str, int]
    seed: Optional[int] = None
    trial: Optional[int] = None

    def to_text(self) -> str:
        lines = [f"modulus: {self.modulus}", f"dimension: {self.dim}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        if self.trial is not None:
            lines.append(f"trial: {self.trial}")
        for name in self.ring.noncommuting:
            entries = " ".join(str(int(v)) for v in np.asarray(self.matrices[name]).ravel())
            lines.append(f"matrix {name}: {entries}")
        for name in self.ring.central:
            lines.append(f"scalar {name}: {self.scalars[name]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, ring: RingSpec) -> "Assignment":
        header: dict[str, int] = {}
        matrices: dict[str, np.ndarray] = {}
        scalars: dict[str, int] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(":")
            parts = key.split()
            if parts[0] == "matrix":
                matrices[parts[1]] = np.array([int(v) for v in value.split()], dtype=object)
            elif parts[0] == "scalar":
                scalars[parts[1]] = int(value)
            else:
                header[parts[0]] = int(value)
        dim = header["dimension"]
        modulus = header["modulus"]
        for name, flat in matrices.items():
            if flat.size != dim * dim:
                raise ValueError(f"matrix {name} has {flat.size} entries, expected {dim * dim}")
            matrices[name] = flat.reshape(dim, dim).astype(_dtype_for(dim, modulus))
        missing = [g for g in ring.noncommuting if g not in matrices] + [c for c in ring.central if c not in scalars]
        if missing:
            raise KeyError(f"assignment text lacks values for {', '.join(missing)}")
        return cls(ring, modulus, dim, matrices, scalars, header.get("seed"), header.get("trial"))


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def random_assignment(cfg: OracleConfig, ring: RingSpec, trial: int = 0) -> Assignment:
    """Uniform entries from Z/p; a fixed ``(seed, trial)`` always gives the same assignment."""
    rng = _trial_rng(cfg.seed, trial)
    matrices = {}
    for name in ring.noncommuting:
        m = rng.integers(0, cfg.modulus, size=(cfg.dim, cfg.dim), dtype=np.int64)
        matrices[name] = m.astype(cfg.dtype)
    scalars = {name: int(rng.integers(0, cfg.modulus)) for name in ring.central}
    return Assignment(ring, cfg.modulus, cfg.dim, matrices, scalars, cfg.seed, trial)


def _eval_batch(p: Polynomial, gens: list[np.ndarray], scals: list[np.ndarray], modulus: int, dim: int, dtype,
                batch: int):
    """Evaluate ``p`` at a batch of points.

    ``gens[g]`` has shape ``(T, dim, dim)`` and ``scals[c]`` shape ``(T,)``.
    Terms are first collected per word so each distinct word costs one
    batched matrix product, reusing the product of its longest prefix.
    """
    word_scalars: dict[tuple, np.ndarray] = {}
    central_cache: dict[tuple, np.ndarray] = {(): np.ones(batch, dtype=dtype)}
    for (central, word), coeff in p.term_dict().items():
        sc = central_cache.get(central)
        if sc is None:
            sc = central_cache[()]
            for cid in central:
                sc = sc * scals[cid] % modulus
            central_cache[central] = sc
        s = sc * (coeff % modulus) % modulus
        prev = word_scalars.get(word)
        word_scalars[word] = s if prev is None else (prev + s) % modulus
    eye = np.broadcast_to(np.eye(dim, dtype=dtype), (batch, dim, dim))
    products: dict[tuple, np.ndarray] = {(): eye}

    def word_matrix(word):
        m = products.get(word)
        if m is None:
            m = np.matmul(word_matrix(word[:-1]), gens[word[-1]]) % modulus
            products[word] = m
        return m

    total = np.zeros((batch, dim, dim), dtype=dtype)
    for word in sorted(word_scalars, key=lambda w: (len(w), w)):
        total = (total + word_scalars[word][:, None, None] * word_matrix(word)) % modulus
    return total


def _stack(assignments: list[Assignment], ring: RingSpec, dtype):
    gens = [np.stack([np.asarray(a.matrices[g]) for a in assignments]).astype(dtype) for g in ring.noncommuting]
    scals = [np.array([a.scalars[c] for a in assignments], dtype=dtype) for c in ring.central]
    return gens, scals


def eval_matrix(p: Polynomial, a: Assignment, cfg: OracleConfig | None = None) -> np.ndarray:
    """Image of ``p`` under the homomorphism fixed by ``a``: a ``dim x dim`` matrix mod p."""
    missing = [g for g in p.ring.noncommuting if g not in a.matrices]
    missing += [c for c in p.ring.central if c not in a.scalars]
    if missing:
        raise KeyError(f"assignment lacks values for {', '.join(missing)}")
    modulus = cfg.modulus if cfg else a.modulus
    dim = cfg.dim if cfg else a.dim
    dtype = _dtype_for(dim, modulus)
    gens, scals = _stack([a], p.ring, dtype)
    gens = [g % modulus for g in gens]
    scals = [s % modulus for s in scals]
    return _eval_batch(p, gens, scals, modulus, dim, dtype, 1)[0]


@dataclass(frozen=True)
class OracleVerdict:
    equal_whp: bool
    trials: int
    degree: int
    cfg: OracleConfig
    witness: Optional[Assignment] = None
    witness_trial: Optional[int] = None
    difference: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def verdict(self) -> str:
        return "EQUAL_WHP" if self.equal_whp else "UNEQUAL"

    @property
    def failure_bound(self) -> float:
        """Heuristic bound ``(d/p)^trials`` on a wrong EQUAL_WHP (total degree d).

        The Schwartz-Zippel degree bound is stated for commutative polynomials;
        it is reported here as a guide, not a theorem about matrix evaluation.
        """
        if not self.equal_whp:
            return 0.0
        per_trial = min(1.0, max(self.degree, 0) / self.cfg.modulus)
        return per_trial ** self.trials


def probabilistic_verify(lhs: Polynomial, rhs: Polynomial, cfg: OracleConfig | None = None) -> OracleVerdict:
    """Compare ``eval(lhs)`` and ``eval(rhs)`` at ``cfg.trials`` seeded random assignments.

    Both sides are evaluated separately (never their symbolic difference), so
    the check is independent of the kernel's cancellation.  UNEQUAL carries
    the witness with the lowest trial index.
    """
    cfg = cfg or OracleConfig()
    if lhs.ring != rhs.ring:
        raise RingMismatchError(lhs.ring, rhs.ring)
    ring = lhs.ring
    degree = max(lhs.total_degree(), rhs.total_degree())
    assignments = [random_assignment(cfg, ring, t) for t in range(cfg.trials)]
    gens, scals = _stack(assignments, ring, cfg.dtype)
    left = _eval_batch(lhs, gens, scals, cfg.modulus, cfg.dim, cfg.dtype, cfg.trials)
    right = _eval_batch(rhs, gens, scals, cfg.modulus, cfg.dim, cfg.dtype, cfg.trials)
    diff = (left - right) % cfg.modulus
    nonzero = np.flatnonzero(diff.reshape(cfg.trials, -1).any(axis=1))
    if nonzero.size:
        t = int(nonzero[0])
        return OracleVerdict(False, cfg.trials, degree, cfg, assignments[t], t, diff[t])
    return OracleVerdict(True, cfg.trials, degree, cfg)


# weakened centrality: [x1+...+xn+X, X+Y] = 0 without X+Y central

@dataclass(frozen=True)
class WeakCentralityWitness:
    """Matrices with ``X + Y`` commuting with ``x(V) + X`` yet the ``thm1`` sides differing."""

    assignment: Assignment
    trial: int
    poly_coeffs: tuple[int, ...]  # X + Y = sum_i poly_coeffs[i] * (x(V) + X)^i
    difference: np.ndarray = field(repr=False)

    def to_text(self) -> str:
        coeffs = " ".join(str(c) for c in self.poly_coeffs)
        return f"# X+Y = polynomial in (x1+...+xn+X) with coefficients: {coeffs}\n" + self.assignment.to_text()


def _matpow_poly(coeffs, T: np.ndarray, modulus: int) -> np.ndarray:
    dim = T.shape[0]
    out = np.zeros_like(T)
    power = np.eye(dim, dtype=T.dtype)
    for c in coeffs:
        out = (out + c * power) % modulus
        power = power @ T % modulus
    return out


def weak_centrality_witness(n: int = 3, cfg: OracleConfig | None = None, force_scalar: bool = False,
                            degree: int = 2) -> Optional[WeakCentralityWitness]:
    """Search for a failure of ``thm1`` under the weakened hypothesis.

    Each trial draws random ``X, x_1..x_n``, sets ``T = x(V) + X`` and
    ``C = a_0 + a_1 T + ... + a_degree T^degree`` (``C = a_0`` when
    ``force_scalar``), then ``Y := C - X``.  ``C`` commutes with ``T``, so the
    weakened hypothesis holds exactly, but ``C`` need not be central.
    Returns the first trial at which the two sides differ, or ``None``.
    """
    from .identities import Model, Setup, thm1_lhs, thm1_rhs

    cfg = cfg or OracleConfig(trials=WITNESS_TRIALS)
    if cfg.dim < 2:
        raise ContractViolation("a non-central C needs matrices of dimension >= 2")
    setup = Setup(n, Model.FREE)
    lhs, rhs = thm1_lhs(setup), thm1_rhs(setup)
    ring = setup.ring
    p = cfg.modulus
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.seed, trial)
        X = rng.integers(0, p, size=(cfg.dim, cfg.dim), dtype=np.int64).astype(cfg.dtype)
        xs = [rng.integers(0, p, size=(cfg.dim, cfg.dim), dtype=np.int64).astype(cfg.dtype) for _ in range(n)]
        coeffs = [int(v) for v in rng.integers(0, p, size=degree + 1)]
        if force_scalar:
            coeffs = coeffs[:1]
        elif not any(coeffs[1:]):
            coeffs[1] = 1
        T = (X + sum(xs, np.zeros_like(X))) % p
        C = _matpow_poly(coeffs, T, p)
        if np.any((C @ T - T @ C) % p):
            raise AssertionError("C fails to commute with x(V) + X")  # cannot happen
        Y = (C - X) % p
        matrices = {"X": X, "Y": Y, **{f"x{s}": xs[s - 1] for s in range(1, n + 1)}}
        a = Assignment(ring, p, cfg.dim, matrices, {}, cfg.seed, trial)
        diff = (eval_matrix(lhs, a) - eval_matrix(rhs, a)) % p
        if np.any(diff):
            return WeakCentralityWitness(a, trial, tuple(coeffs), diff)
    return None


def check_weak_witness(witness_text: str, n: int = 3) -> tuple[bool, bool]:
    """Replay a serialized witness.

    Returns ``(hypothesis_holds, identity_fails)``: whether
    ``[x(V) + X, X + Y] = 0`` exactly and whether the two sides differ.
    """
    from .identities import Model, Setup, thm1_lhs, thm1_rhs

    setup = Setup(n, Model.FREE)
    a = Assignment.from_text(witness_text, setup.ring)
    p = a.modulus
    m = a.matrices
    T = (m["X"] + sum(m[f"x{s}"] for s in range(1, n + 1))) % p
    S = (m["X"] + m["Y"]) % p
    hypothesis = not np.any((T @ S - S @ T) % p)
    fails = bool(np.any((eval_matrix(thm1_lhs(setup), a) - eval_matrix(thm1_rhs(setup), a)) % p))
    return hypothesis, fails
