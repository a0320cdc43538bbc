"""Multiplicative infrastructure: factorization, unit-group structure,
primes, smooth numbers, and exact root-of-unity arithmetic.

Unit groups (Z/qZ)* are decomposed into cyclic components per prime power,
with deterministic generator choices so that character indexing is
reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

#: Euler-Mascheroni constant (correct to 16 digits).
EULER_GAMMA = 0.5772156649015329

_TRIAL_LIMIT = 1_000_000


# ---------------------------------------------------------------------------
# primes


@lru_cache(maxsize=32)
def primes_up_to(y: int) -> tuple[int, ...]:
    """All primes <= y in ascending order (empty for y < 2)."""
    if y < 2:
        return ()
    sieve = np.ones(y + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(y) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return tuple(int(p) for p in np.nonzero(sieve)[0])


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the 10^12 working range."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


def _pollard_rho(n: int) -> int:
    # Brent's variant; n is composite, odd, with no small prime factor.
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed for {n}")


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as ascending (prime, exponent) pairs."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 7
    while p * p <= n and p <= _TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return sorted(out.items())


def largest_prime_factor(n: int) -> int:
    """P(n), the largest prime factor of n >= 2."""
    if n < 2:
        raise ValueError("largest_prime_factor requires n >= 2")
    return factorize(n)[-1][0]


def totient(n: int) -> int:
    """Euler's phi from the factorization formula."""
    phi = 1
    for p, a in factorize(n):
        phi *= (p - 1) * p ** (a - 1)
    return phi


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(a > 1 for _, a in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, a in factorize(n):
        divs = [d * p**e for d in divs for e in range(a + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# smooth numbers


@lru_cache(maxsize=16)
def greatest_prime_factor_array(limit: int) -> np.ndarray:
    """gpf[n] = largest prime factor of n for 2 <= n <= limit; gpf[0]=gpf[1]=0."""
    gpf = np.zeros(limit + 1, dtype=np.int64)
    for p in primes_up_to(limit):
        gpf[p::p] = p
    return gpf


@dataclass(frozen=True)
class SmoothSet:
    """The y-smooth integers up to `limit`, ascending."""

    y: int
    limit: int
    members: tuple[int, ...]

    def __contains__(self, n: int) -> bool:
        return n in self._member_set

    @property
    def _member_set(self) -> frozenset[int]:
        cached = self.__dict__.get("_members_cache")
        if cached is None:
            cached = frozenset(self.members)
            self.__dict__["_members_cache"] = cached
        return cached

    def indicator(self) -> np.ndarray:
        """Boolean array s of length limit+1 with s[n] = (n is y-smooth)."""
        ind = np.zeros(self.limit + 1, dtype=bool)
        ind[list(self.members)] = True
        return ind


def smooth_indicator(y: float, limit: int) -> np.ndarray:
    """Boolean array s[0..limit]; s[n] iff n >= 1 and every prime factor <= y."""
    gpf = greatest_prime_factor_array(limit)
    ind = gpf <= y
    ind[0] = False
    return ind


def smooth_numbers(y: int, limit: int) -> SmoothSet:
    """S(y) intersected with [1, limit]."""
    if y < 1 or limit < 1:
        raise ValueError("smooth_numbers requires y >= 1 and limit >= 1")
    ind = smooth_indicator(y, limit)
    members = tuple(int(n) for n in np.nonzero(ind)[0])
    return SmoothSet(y=y, limit=limit, members=members)


def mertens_progression_sum(
    ell: int, a: int, y: int, include_below_ell: bool = False
) -> float:
    """Sum of 1/p over primes p <= y with p = a (mod ell), default p >= ell.

    The lower cutoff p >= ell matches the paper's convention for the
    progression sum; pass include_below_ell=True to drop it.
    """
    if math.gcd(a, ell) != 1:
        raise ValueError("residue class must be reduced: gcd(a, ell) = 1")
    if y < 2:
        raise ValueError("mertens_progression_sum requires y >= 2")
    lo = 2 if include_below_ell else max(2, ell)
    return math.fsum(
        1.0 / p for p in primes_up_to(y) if p >= lo and p % ell == a % ell
    )


# ---------------------------------------------------------------------------
# exact roots of unity


@dataclass(frozen=True)
class UnitValue:
    """Exactly e(num/den) = exp(2*pi*i*num/den), or zero.

    Stored in lowest terms with 0 <= num < den.  Closed under product,
    conjugation, and integer powers; only `embed` leaves exact arithmetic.
    """

    num: int = 0
    den: int = 1
    zero: bool = False

    def __post_init__(self) -> None:
        if self.zero:
            object.__setattr__(self, "num", 0)
            object.__setattr__(self, "den", 1)
            return
        f = Fraction(self.num, self.den)
        f -= math.floor(f)
        object.__setattr__(self, "num", f.numerator)
        object.__setattr__(self, "den", f.denominator)

    @property
    def phase(self) -> Fraction:
        if self.zero:
            raise ValueError("zero value has no phase")
        return Fraction(self.num, self.den)

    def __mul__(self, other: "UnitValue") -> "UnitValue":
        if self.zero or other.zero:
            return ZERO
        f = self.phase + other.phase
        return UnitValue(f.numerator, f.denominator)

    def __pow__(self, k: int) -> "UnitValue":
        if self.zero:
            if k <= 0:
                raise ZeroDivisionError("0 ** nonpositive power")
            return ZERO
        f = k * self.phase
        return UnitValue(f.numerator, f.denominator)

    def conjugate(self) -> "UnitValue":
        if self.zero:
            return ZERO
        return UnitValue(-self.num, self.den)

    def embed(self) -> complex:
        if self.zero:
            return 0j
        return complex(np.exp(2j * np.pi * self.num / self.den))

    def __complex__(self) -> complex:
        return self.embed()

    def is_one(self) -> bool:
        return not self.zero and self.num == 0


ZERO = UnitValue(zero=True)
ONE = UnitValue(0, 1)


def root_of_unity(num: int, den: int) -> UnitValue:
    return UnitValue(num, den)


# ---------------------------------------------------------------------------
# unit-group structure


def _primitive_root_prime_power(p: int, a: int) -> int:
    """Smallest primitive root mod p, adjusted to generate mod p^a (p odd)."""
    phi_p = p - 1
    prime_divs = [r for r, _ in factorize(phi_p)]
    g = 2
    while True:
        if math.gcd(g, p) == 1 and all(
            pow(g, phi_p // r, p) != 1 for r in prime_divs
        ):
            break
        g += 1
    if a == 1:
        return g
    # g lifts to a generator mod p^a iff g^(p-1) != 1 (mod p^2)
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _Block:
    """Cyclic decomposition of (Z/p^a Z)*: one or two components."""

    modulus: int  # p^a
    generators: tuple[int, ...]  # local generators mod p^a
    orders: tuple[int, ...]


@dataclass(eq=False)
class FactoredModulus:
    """A modulus q with its factorization and unit-group structure.

    Generators are lifted mod q (each is 1 modulo the other prime powers);
    discrete-log tables per prime-power block are built lazily.
    """

    q: int
    factors: tuple[tuple[int, int], ...]
    blocks: tuple[_Block, ...]
    generators: tuple[int, ...]
    component_orders: tuple[int, ...]
    _tables: list[dict[int, tuple[int, ...]] | None] = field(repr=False, default_factory=list)

    def __hash__(self) -> int:
        return hash(self.q)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FactoredModulus) and other.q == self.q

    @property
    def phi(self) -> int:
        out = 1
        for d in self.component_orders:
            out *= d
        return out

    @property
    def group_exponent(self) -> int:
        return math.lcm(*self.component_orders) if self.component_orders else 1

    def is_unit(self, n: int) -> bool:
        return math.gcd(n % self.q, self.q) == 1 if self.q > 1 else True

    def _block_table(self, i: int) -> dict[int, tuple[int, ...]]:
        table = self._tables[i]
        if table is None:
            blk = self.blocks[i]
            table = {}
            if len(blk.generators) == 1:
                g, d = blk.generators[0], blk.orders[0]
                u = 1
                for k in range(d):
                    table[u] = (k,)
                    u = u * g % blk.modulus
            else:  # 2^a, a >= 3: components {-1, 5}
                g0, g1 = blk.generators
                d0, d1 = blk.orders
                for e0 in range(d0):
                    for e1 in range(d1):
                        u = pow(g0, e0, blk.modulus) * pow(g1, e1, blk.modulus)
                        table[u % blk.modulus] = (e0, e1)
            self._tables[i] = table
        return table

    def dlog(self, n: int) -> tuple[int, ...]:
        """Exponent vector of n on the generators; requires gcd(n, q) = 1."""
        n %= self.q
        if not self.is_unit(n):
            raise ValueError(f"{n} is not a unit mod {self.q}")
        out: list[int] = []
        for i, blk in enumerate(self.blocks):
            out.extend(self._block_table(i)[n % blk.modulus])
        return tuple(out)

    def dlog_table(self) -> dict[int, tuple[int, ...]]:
        """Full map unit residue -> exponent vector (desk-scale q only)."""
        return {
            u: self.dlog(u)
            for u in range(self.q if self.q > 1 else 1)
            if self.is_unit(u)
        }

    def units(self) -> list[int]:
        if self.q == 1:
            return [0]
        return [u for u in range(1, self.q) if self.is_unit(u)]


def _crt_lift(local: int, pa: int, q: int) -> int:
    """x = local (mod pa), x = 1 (mod q/pa)."""
    rest = q // pa
    if rest == 1:
        return local % q
    inv = pow(rest, -1, pa)
    x = (1 + rest * ((local - 1) * inv % pa)) % q
    return x


@lru_cache(maxsize=None)
def build_modulus(q: int) -> FactoredModulus:
    """Unit-group structure of (Z/qZ)* with deterministic generators."""
    if q < 1:
        raise ValueError("build_modulus requires q >= 1")
    factors = tuple(factorize(q))
    blocks: list[_Block] = []
    for p, a in factors:
        pa = p**a
        if p == 2:
            if a == 1:
                continue  # trivial group
            if a == 2:
                blocks.append(_Block(4, (3,), (2,)))
            else:
                blocks.append(_Block(pa, (pa - 1, 5), (2, 2 ** (a - 2))))
        else:
            g = _primitive_root_prime_power(p, a)
            blocks.append(_Block(pa, (g,), ((p - 1) * p ** (a - 1),)))
    gens: list[int] = []
    orders: list[int] = []
    for blk in blocks:
        for g, d in zip(blk.generators, blk.orders):
            gens.append(_crt_lift(g, blk.modulus, q))
            orders.append(d)
    return FactoredModulus(
        q=q,
        factors=factors,
        blocks=tuple(blocks),
        generators=tuple(gens),
        component_orders=tuple(orders),
        _tables=[None] * len(blocks),
    )
