"""Dirichlet characters: representation, evaluation, enumeration and algebra.

A character mod q is an exponent vector on the unit-group generators of a
FactoredModulus.  Enumeration order is lexicographic on exponent vectors and
is part of the public contract (CSV outputs reference these indices);
index 0 is always the principal character.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .residue import (
    ONE,
    ZERO,
    FactoredModulus,
    UnitValue,
    build_modulus,
    divisors,
    root_of_unity,
)


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: FactoredModulus
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        reduced = tuple(
            e % d for e, d in zip(self.exponents, self.modulus.component_orders)
        )
        object.__setattr__(self, "exponents", reduced)

    @property
    def q(self) -> int:
        return self.modulus.q

    def __call__(self, n: int) -> UnitValue:
        m = self.modulus
        if m.q == 1:
            return ONE
        n %= m.q
        if math.gcd(n, m.q) != 1:
            return ZERO
        ph = Fraction(0)
        for e, d, k in zip(self.exponents, m.component_orders, m.dlog(n)):
            ph += Fraction(e * k, d)
        return root_of_unity(ph.numerator, ph.denominator)

    def value(self, n: int) -> complex:
        return self(n).embed()

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus,
            tuple(-e for e in self.exponents),
        )

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        return multiply(self, other)

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    @property
    def order(self) -> int:
        orders = [
            d // math.gcd(e, d)
            for e, d in zip(self.exponents, self.modulus.component_orders)
        ]
        return math.lcm(*orders) if orders else 1

    @property
    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        if self.q <= 2:
            return 1
        v = self(self.q - 1)
        return 1 if v.is_one() else -1

    @property
    def index(self) -> int:
        """Position in the frozen lexicographic enumeration."""
        idx = 0
        for e, d in zip(self.exponents, self.modulus.component_orders):
            idx = idx * d + e
        return idx

    def as_key(self) -> dict:
        """JSON-serializable identity (q, exponent vector)."""
        return {"q": self.q, "exponents": list(self.exponents)}


@dataclass(frozen=True)
class CharacterMeta:
    order: int
    parity: int
    conductor: int
    is_primitive: bool
    is_principal: bool


def _as_modulus(q: FactoredModulus | int) -> FactoredModulus:
    return q if isinstance(q, FactoredModulus) else build_modulus(q)


def principal_character(q: FactoredModulus | int) -> DirichletCharacter:
    m = _as_modulus(q)
    return DirichletCharacter(m, (0,) * len(m.component_orders))


def character_by_index(q: FactoredModulus | int, idx: int) -> DirichletCharacter:
    m = _as_modulus(q)
    exps = []
    for d in reversed(m.component_orders):
        exps.append(idx % d)
        idx //= d
    return DirichletCharacter(m, tuple(reversed(exps)))


def enumerate_characters(q: FactoredModulus | int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, lexicographic on exponent vectors."""
    m = _as_modulus(q)
    return [
        DirichletCharacter(m, exps)
        for exps in itertools.product(*(range(d) for d in m.component_orders))
    ]


def characters_of_order(q: FactoredModulus | int, g: int) -> list[DirichletCharacter]:
    """All characters mod q of exact multiplicative order g."""
    if g < 1:
        raise ValueError("order must be >= 1")
    return [chi for chi in enumerate_characters(q) if chi.order == g]


def conductor(chi: DirichletCharacter) -> int:
    """Smallest d | q such that chi is trivial on units = 1 (mod d).

    Brute force over divisors; independently verifiable at desk scale.
    """
    q = chi.q
    if q == 1 or chi.is_principal:
        return 1
    for d in divisors(q):
        ok = True
        for u in range(1 + d, q, d):
            if math.gcd(u, q) == 1 and not chi(u).is_one():
                ok = False
                break
        if ok:
            return d
    return q


def character_meta(chi: DirichletCharacter) -> CharacterMeta:
    cond = conductor(chi)
    return CharacterMeta(
        order=chi.order,
        parity=chi.parity,
        conductor=cond,
        is_primitive=cond == chi.q,
        is_principal=chi.is_principal,
    )


def _character_from_values(
    m: FactoredModulus, values: list[UnitValue]
) -> DirichletCharacter:
    """Character mod m with the given values on m.generators."""
    exps = []
    for v, d in zip(values, m.component_orders):
        f = v.phase * d
        if f.denominator != 1:
            raise ValueError("value is not an order-compatible root of unity")
        exps.append(int(f) % d)
    return DirichletCharacter(m, tuple(exps))


def primitivize(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character mod conductor(chi) inducing chi."""
    f = conductor(chi)
    if f == chi.q:
        return chi
    mf = build_modulus(f)
    values = []
    for g in mf.generators:
        n = g
        while math.gcd(n, chi.q) != 1:
            n += f
        values.append(chi(n))
    return _character_from_values(mf, values)


def multiply(
    chi1: DirichletCharacter, chi2: DirichletCharacter
) -> DirichletCharacter:
    """Product character mod lcm(q1, q2), lifting both factors."""
    L = math.lcm(chi1.q, chi2.q)
    ml = build_modulus(L)
    values = [chi1(g) * chi2(g) for g in ml.generators]
    return _character_from_values(ml, values)


def induce(chi: DirichletCharacter, q: int) -> DirichletCharacter:
    """Lift chi to the multiple modulus q (values vanish off units mod q)."""
    if q % chi.q != 0:
        raise ValueError("can only induce to a multiple of the modulus")
    m = build_modulus(q)
    values = [chi(g) for g in m.generators]
    return _character_from_values(m, values)
