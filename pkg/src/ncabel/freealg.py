"""Exact arithmetic in Z[c1..cm]<g1..gk>.

Noncommuting generators ``g`` multiply as words in the free monoid; the
central variables ``c`` commute with everything.  Coefficients are Python
ints.  A :class:`Polynomial` is immutable and always stored in canonical
form (no zero coefficients), so equality is a dict comparison.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Mapping, NamedTuple, Union

from . import kernel
from .errors import ContractViolation, RingMismatchError

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

Scalar = int


@dataclass(frozen=True)
class RingSpec:
    """Names of the noncommuting generators and central variables.

    Ids are positions: generator ``i`` is ``noncommuting[i]``, central
    variable ``j`` is ``central[j]``.
    """

    noncommuting: tuple[str, ...] = ()
    central: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "noncommuting", tuple(self.noncommuting))
        object.__setattr__(self, "central", tuple(self.central))
        names = self.noncommuting + self.central
        for name in names:
            if not isinstance(name, str) or not _NAME.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate variable names: {', '.join(dupes)}")
        object.__setattr__(self, "_gen_ids", {n: i for i, n in enumerate(self.noncommuting)})
        object.__setattr__(self, "_central_ids", {n: i for i, n in enumerate(self.central)})

    @classmethod
    def parse(cls, decl: str) -> "RingSpec":
        """Parse a declaration such as ``"central:c; free:X,x1"``."""
        free: list[str] = []
        central: list[str] = []
        for part in decl.split(";"):
            part = part.strip()
            if not part:
                continue
            kind, sep, names = part.partition(":")
            kind = kind.strip().lower()
            if not sep or kind not in ("free", "noncommuting", "central"):
                raise ValueError(f"bad ring declaration segment {part!r}; expected 'free:...' or 'central:...'")
            target = central if kind == "central" else free
            target.extend(n.strip() for n in names.split(",") if n.strip())
        return cls(tuple(free), tuple(central))

    def __str__(self) -> str:
        return f"central:{','.join(self.central)}; free:{','.join(self.noncommuting)}"

    def has(self, name: str) -> bool:
        return name in self._gen_ids or name in self._central_ids

    def is_central(self, name: str) -> bool:
        if name in self._central_ids:
            return True
        if name in self._gen_ids:
            return False
        raise KeyError(f"{name!r} is not declared in ring {self}")

    def generator_id(self, name: str) -> int:
        try:
            return self._gen_ids[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a noncommuting generator of ring {self}") from None

    def central_id(self, name: str) -> int:
        try:
            return self._central_ids[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a central variable of ring {self}") from None

    # element constructors

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, k: int) -> "Polynomial":
        return Polynomial(self, {((), ()): k} if k else {})

    def var(self, name: str) -> "Polynomial":
        """The generator or central variable called ``name``."""
        if self.is_central(name):
            return Polynomial(self, {((self._central_ids[name],), ()): 1})
        return Polynomial(self, {((), (self._gen_ids[name],)): 1})

    def vars(self, *names: str) -> list["Polynomial"]:
        return [self.var(n) for n in names]


class Monomial(NamedTuple):
    """``central`` is a sorted multiset of central ids, ``word`` a tuple of generator ids."""

    central: tuple[int, ...]
    word: tuple[int, ...]

    @property
    def degrees(self) -> dict[int, int]:
        """Central multidegree as ``{central id: exponent}``, zeros omitted."""
        return {i: len(list(g)) for i, g in groupby(self.central)}

    @property
    def total_degree(self) -> int:
        return len(self.central) + len(self.word)


def monomial_order_key(key) -> tuple:
    """Sort key of the canonical monomial order.

    Word length first, then the word lexicographically by generator id, then
    the central multidegree as its sorted ``(id, exponent)`` sequence.
    """
    central, word = key
    return (len(word), word, tuple((i, len(list(g))) for i, g in groupby(central)))


class Polynomial:
    """Immutable element of a free algebra over a central polynomial ring."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping | None = None):
        self.ring = ring
        # callers inside the package hand over fresh canonical dicts
        self._terms = terms if isinstance(terms, dict) else dict(terms or {})
        self._hash = None

    # inspection

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_central(self) -> bool:
        return all(not word for _, word in self._terms)

    def terms(self) -> list[tuple[Monomial, int]]:
        """Terms in canonical monomial order."""
        keys = sorted(self._terms, key=monomial_order_key)
        return [(Monomial(*k), self._terms[k]) for k in keys]

    def coefficient(self, monomial) -> int:
        """Coefficient of a ``Monomial`` key, or of a single monomial given as a polynomial."""
        if isinstance(monomial, Polynomial):
            if len(monomial._terms) != 1 or next(iter(monomial._terms.values())) != 1:
                raise ContractViolation("coefficient() needs a single monomial with coefficient 1")
            monomial = next(iter(monomial._terms))
        return self._terms.get(tuple(monomial), 0)

    def total_degree(self) -> int:
        """Largest word length plus central degree over all terms; -1 for zero."""
        return max((len(c) + len(w) for c, w in self._terms), default=-1)

    def term_dict(self) -> dict:
        """A copy of the raw term mapping."""
        return dict(self._terms)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(self.ring, other.ring)
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, kernel.active.add_terms(self._terms, other._terms, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, kernel.active.add_terms(self._terms, other._terms, -1))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Polynomial(self.ring, kernel.active.scale_terms(self._terms, -1))

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return Polynomial(self.ring, kernel.active.scale_terms(self._terms, other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, kernel.active.mul_terms(self._terms, other._terms))

    def __rmul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return Polynomial(self.ring, kernel.active.scale_terms(self._terms, other))
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        if k < 0:
            raise ContractViolation(f"negative exponent {k}; negative powers are never formed")
        # right-multiplying by the (small) base keeps each step at |result| * |base|
        mul = kernel.active.mul_terms
        result = {((), ()): 1}
        for _ in range(k):
            result = mul(result, self._terms)
        return Polynomial(self.ring, result)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def substitute(self, name: str, r: "Polynomial | int") -> "Polynomial":
        return substitute(self, name, r)

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"Polynomial({serialize(self)!r})"


PolyLike = Union[Polynomial, int]


def _check_same(p: Polynomial, q: Polynomial) -> None:
    if p.ring is not q.ring and p.ring != q.ring:
        raise RingMismatchError(p.ring, q.ring)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p + q


def sub(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p - q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same(p, q)
    return p * q


def pow(p: Polynomial, k: int) -> Polynomial:  # noqa: A001 - mirrors the ring operation name
    return p ** k


def equals(p: Polynomial, q: Polynomial) -> bool:
    _check_same(p, q)
    return p._terms == q._terms


def poly_sum(ring: RingSpec, parts: Iterable[Polynomial]) -> Polynomial:
    """Sum many polynomials with a single accumulation pass."""
    dicts = []
    for part in parts:
        if part.ring is not ring and part.ring != ring:
            raise RingMismatchError(ring, part.ring)
        dicts.append(part._terms)
    return Polynomial(ring, kernel.active.sum_terms(dicts))


def substitute(p: Polynomial, name: str, r: PolyLike) -> Polynomial:
    """Image of ``p`` under the ring map sending ``name`` to ``r`` and fixing everything else."""
    ring = p.ring
    if isinstance(r, int):
        r = ring.const(r)
    _check_same(p, r)
    mul_terms = kernel.active.mul_terms
    rt = r._terms
    parts = []
    if ring.is_central(name):
        if not r.is_central():
            raise ContractViolation(
                f"cannot substitute non-central {serialize(r)!r} for central variable {name!r}")
        cid = ring.central_id(name)
        powers = [{((), ()): 1}]
        for (central, word), coeff in p._terms.items():
            e = central.count(cid)
            if not e:
                parts.append({(central, word): coeff})
                continue
            while len(powers) <= e:
                powers.append(mul_terms(powers[-1], rt))
            rest = tuple(i for i in central if i != cid)
            parts.append(mul_terms({(rest, word): coeff}, powers[e]))
    else:
        gid = ring.generator_id(name)
        for (central, word), coeff in p._terms.items():
            if gid not in word:
                parts.append({(central, word): coeff})
                continue
            acc = {(central, ()): coeff}
            start = 0
            for pos, letter in enumerate(word):
                if letter == gid:
                    if pos > start:
                        acc = mul_terms(acc, {((), word[start:pos]): 1})
                    acc = mul_terms(acc, rt)
                    start = pos + 1
            if start < len(word):
                acc = mul_terms(acc, {((), word[start:]): 1})
            parts.append(acc)
    return Polynomial(ring, kernel.active.sum_terms(parts))


def _term_text(ring: RingSpec, central, word, coeff: int) -> str:
    factors = []
    for cid, grp in groupby(central):
        e = len(list(grp))
        name = ring.central[cid]
        factors.append(name if e == 1 else f"{name}^{e}")
    if word:
        factors.append(".".join(ring.noncommuting[g] for g in word))
    if not factors:
        return str(coeff)
    if coeff == 1:
        return "*".join(factors)
    return f"{coeff}*" + "*".join(factors)


def serialize(p: Polynomial, max_terms: int | None = None) -> str:
    """Canonical text, e.g. ``"2*c*X.x1 - 3*x2.x2"``.

    With ``max_terms`` the output stops after that many terms and ends with
    an explicit ``... [truncated: N terms total]`` marker.
    """
    if not p._terms:
        return "0"
    keys = sorted(p._terms, key=monomial_order_key)
    truncated = max_terms is not None and len(keys) > max_terms
    if truncated:
        keys = keys[:max_terms]
    out = []
    for i, key in enumerate(keys):
        coeff = p._terms[key]
        body = _term_text(p.ring, key[0], key[1], abs(coeff))
        if i == 0:
            out.append(("-" if coeff < 0 else "") + body)
        else:
            out.append((" - " if coeff < 0 else " + ") + body)
    if truncated:
        out.append(f" ... [truncated: {len(p._terms)} terms total]")
    return "".join(out)

