"""The pretentious distance between characters and its consequences.

Distance over primes up to y, its unit-disc-sequence generalization and the
triangle inequality, nearest-small-conductor-character search, the odd-order
savings constant delta_g with its trigonometric identities, L(1, chi)
approximations, the partial-sum lower-bound inequality, and the exact
inequalities behind the extremal-constant bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .characters import (
    DirichletCharacter,
    character_meta,
    enumerate_characters,
)
from .residue import (
    factorize,
    primes_up_to,
    totient,
)
from .sums import character_values, l1_exact


# ---------------------------------------------------------------------------
# distances


@dataclass(frozen=True)
class DistanceReport:
    chi_ref: dict
    psi_ref: dict
    y: int
    dist_sq: float
    per_prime: tuple[tuple[int, float], ...] | None = None


@dataclass(frozen=True)
class UnitDiscSequence:
    """Complex values at primes, each of modulus <= 1."""

    values: dict[int, complex]

    def __post_init__(self) -> None:
        for p, z in self.values.items():
            if abs(z) > 1 + 1e-12:
                raise ValueError(f"|value at p={p}| exceeds 1")

    def at(self, p: int) -> complex:
        try:
            return self.values[p]
        except KeyError:
            raise ValueError(f"sequence undefined at prime {p}") from None

    @classmethod
    def ones(cls, y: int) -> "UnitDiscSequence":
        return cls({p: 1.0 + 0j for p in primes_up_to(y)})

    @classmethod
    def from_character(cls, chi: DirichletCharacter, y: int) -> "UnitDiscSequence":
        vals = character_prime_values(chi, primes_up_to(y))
        return cls(dict(zip(primes_up_to(y), (complex(v) for v in vals))))

    def pointwise_product(self, other: "UnitDiscSequence") -> "UnitDiscSequence":
        common = self.values.keys() & other.values.keys()
        return UnitDiscSequence({p: self.values[p] * other.values[p] for p in common})


def character_prime_values(
    chi: DirichletCharacter, primes: tuple[int, ...]
) -> np.ndarray:
    """chi(p) for each prime in `primes`, as a complex array."""
    vals = character_values(chi)
    return vals[np.mod(primes, chi.q)]


def distance_sq(
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    y: int,
    per_prime: bool = False,
) -> DistanceReport:
    """D(chi, psi; y)^2 = sum over p <= y of (1 - Re chi(p) conj(psi)(p))/p."""
    if y < 2:
        raise ValueError("distance requires y >= 2")
    ps = primes_up_to(y)
    terms = []
    for p in ps:
        v = chi(p) * psi(p).conjugate()
        if v.zero:
            terms.append(1.0 / p)
        elif v.is_one():
            terms.append(0.0)
        else:
            terms.append((1.0 - math.cos(2.0 * math.pi * v.num / v.den)) / p)
    contributions = tuple((p, t) for p, t in zip(ps, terms)) if per_prime else None
    return DistanceReport(
        chi_ref=chi.as_key(),
        psi_ref=psi.as_key(),
        y=y,
        dist_sq=math.fsum(terms),
        per_prime=contributions,
    )


def distance_sq_general(
    z: UnitDiscSequence,
    w: UnitDiscSequence,
    y: int,
    weights: Callable[[int], float] | None = None,
) -> float:
    """Generalized squared distance over p <= y with weights a(p) (default 1/p)."""
    terms = []
    for p in primes_up_to(y):
        a = weights(p) if weights is not None else 1.0 / p
        terms.append(a * (1.0 - (z.at(p) * w.at(p).conjugate()).real))
    return math.fsum(terms)


def triangle_defect(
    z1: UnitDiscSequence,
    w1: UnitDiscSequence,
    z2: UnitDiscSequence,
    w2: UnitDiscSequence,
    y: int,
    weights: Callable[[int], float] | None = None,
) -> float:
    """D(z1,w1;y) + D(z2,w2;y) - D(z1 z2, w1 w2; y); never below -1e-12."""
    d1 = math.sqrt(max(distance_sq_general(z1, w1, y, weights), 0.0))
    d2 = math.sqrt(max(distance_sq_general(z2, w2, y, weights), 0.0))
    d12 = math.sqrt(
        max(
            distance_sq_general(
                z1.pointwise_product(z2), w1.pointwise_product(w2), y, weights
            ),
            0.0,
        )
    )
    return d1 + d2 - d12


# ---------------------------------------------------------------------------
# nearest small-conductor character


@dataclass(frozen=True)
class NearestPretender:
    xi: DirichletCharacter
    conductor: int
    dist_sq: float
    parity_product: int
    runners_up: tuple[tuple[DirichletCharacter, float], ...]


@lru_cache(maxsize=32)
def primitive_characters_up_to(bound: int) -> tuple[DirichletCharacter, ...]:
    """All primitive characters of conductor <= bound, ordered by
    (conductor, index); conductor 1 contributes the trivial character."""
    out: list[DirichletCharacter] = []
    for m in range(1, bound + 1):
        for chi in enumerate_characters(m):
            if character_meta(chi).is_primitive:
                out.append(chi)
    return tuple(out)


def nearest_character(
    chi: DirichletCharacter, conductor_bound: int, y: int
) -> NearestPretender:
    """Exhaustive nearest-pretender search over primitive characters with
    conductor <= conductor_bound; ties go to the smallest conductor, then
    the smallest character index."""
    candidates = primitive_characters_up_to(conductor_bound)
    scored = [
        (distance_sq(chi, psi, y).dist_sq, psi) for psi in candidates
    ]
    order = sorted(range(len(scored)), key=lambda i: scored[i][0])
    best = order[0]
    d0, xi = scored[best]
    return NearestPretender(
        xi=xi,
        conductor=xi.q,
        dist_sq=d0,
        parity_product=chi.parity * xi.parity,
        runners_up=tuple((scored[i][1], scored[i][0]) for i in order[1:]),
    )


def ordered_distances(
    chi: DirichletCharacter, conductor_bound: int, y: int, A: int
) -> list[float]:
    """The A smallest values of D(chi, psi; y)^2 over the primitive family."""
    candidates = primitive_characters_up_to(conductor_bound)
    if len(candidates) < A:
        raise ValueError(
            f"only {len(candidates)} primitive characters below {conductor_bound}"
        )
    dists = sorted(distance_sq(chi, psi, y).dist_sq for psi in candidates)
    return dists[:A]


# ---------------------------------------------------------------------------
# the odd-order savings constant and its trigonometry


def delta_g(g: int) -> float:
    """1 - (g/pi) sin(pi/g); the odd-order savings exponent constant."""
    if g < 1:
        raise ValueError("order must be >= 1")
    return 1.0 - (g / math.pi) * math.sin(math.pi / g)


def root_min_term(g: int, k: int, ell: int) -> tuple[float, float]:
    """min over z in {0} union g-th roots of unity of 1 - Re z e(-ell/k).

    Returns (brute-force minimum, closed trigonometric form); the two agree
    to 1e-12.  The closed form is 1 - cos((2 pi / g) ||ell g / k||) where
    ||.|| is distance to the nearest integer.
    """
    if g < 1 or k < 1:
        raise ValueError("g and k must be >= 1")
    target = 2 * math.pi * ell / k
    brute = 1.0  # z = 0
    for j in range(g):
        brute = min(brute, 1.0 - math.cos(2 * math.pi * j / g - target))
    t = ell * g / k
    frac_dist = abs(t - round(t))
    closed = 1.0 - math.cos(2 * math.pi / g * frac_dist)
    return brute, closed


def lemma32_average(g: int, k_star: int) -> tuple[float, float]:
    """Average of 1 - cos(2 pi ell/(g k*)) over -k*/2 < ell <= k*/2,
    against the closed form 1 - sin(pi/g)/(k* tan(pi/(g k*)))."""
    if k_star < 2 or k_star % 2:
        raise ValueError("k* must be even and >= 2")
    if g % 2 == 0:
        raise ValueError("g must be odd")
    lhs = math.fsum(
        1.0 - math.cos(2 * math.pi * ell / (g * k_star))
        for ell in range(-k_star // 2 + 1, k_star // 2 + 1)
    ) / k_star
    rhs = 1.0 - math.sin(math.pi / g) / (k_star * math.tan(math.pi / (g * k_star)))
    return lhs, rhs


# ---------------------------------------------------------------------------
# L(1, chi) approximations


def l1_truncated(chi: DirichletCharacter, cutoff: int) -> complex:
    """sum_{n <= cutoff} chi(n)/n."""
    if chi.is_principal:
        raise ValueError("L(1, chi) requires a non-principal character")
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    n = np.arange(1, cutoff + 1)
    return complex(np.sum(character_values(chi)[n % chi.q] / n))


def l1_accelerated(chi: DirichletCharacter) -> complex:
    """L(1, chi) to absolute accuracy well below 1e-10."""
    return l1_exact(chi)


def l1_euler_product(chi: DirichletCharacter, y: float) -> complex:
    """prod over p <= y of (1 - chi(p)/p)^(-1)."""
    if chi.is_principal and chi.q == 1:
        pass  # trivial-sequence analog is allowed
    elif chi.is_principal:
        raise ValueError("Euler product requires a non-principal character")
    out = 1 + 0j
    for p in primes_up_to(int(y)):
        out /= 1 - chi.value(p) / p
    return out


def mertens_product(y: int) -> float:
    """prod over p <= y of (1 - 1/p)^(-1), ~ e^gamma log y."""
    out = 1.0
    for p in primes_up_to(y):
        out /= 1 - 1 / p
    return out


# ---------------------------------------------------------------------------
# partial-sum lower bound (exact averaging inequality)


class PartialSumBound(NamedTuple):
    max_prefix: float
    max_tail: float
    l_shifted: float


# The tail-variant averaging identity writes the shifted sum as tail(1)
# minus an integral whose weights total 1 - 1/e, so the exact consequence
# carries this constant: max_tail >= l_shifted / (2 - 1/e).
TAIL_VARIANT_FACTOR = 2.0 - math.exp(-1.0)


def partial_sum_lower_bound_check(eta: DirichletCharacter) -> PartialSumBound:
    """max_N |sum_{n<=N} eta(n)/n| against |sum_{n<=r} eta(n)/n^(1+d)|,
    d = 1/log r, for primitive non-principal eta mod r.

    The prefix variant is an exact consequence of the averaging identity
    (the weights r^-d and d t^(-1-d) dt integrate to 1): max_prefix >=
    l_shifted.  The tail variant's identity yields max_tail >=
    l_shifted / TAIL_VARIANT_FACTOR.
    """
    meta = character_meta(eta)
    if meta.is_principal or not meta.is_primitive or eta.q < 3:
        raise ValueError("requires a primitive non-principal character, r >= 3")
    r = eta.q
    delta = 1.0 / math.log(r)
    n = np.arange(1, r + 1)
    terms = character_values(eta)[n % r] / n
    prefix = np.cumsum(terms)
    tails = np.cumsum(terms[::-1])[::-1]  # tails[N-1] = sum_{N<=n<=r}
    l_shifted = abs(np.sum(terms * n ** (-delta)))
    return PartialSumBound(
        max_prefix=float(np.max(np.abs(prefix))),
        max_tail=float(np.max(np.abs(tails))),
        l_shifted=float(l_shifted),
    )


# ---------------------------------------------------------------------------
# bounded multiplicative functions


@dataclass(frozen=True)
class MultiplicativeFunction:
    """A multiplicative function with |f(n)| <= 1, defined by prime-power
    values; completely multiplicative if `completely` is set (then only the
    prime values matter)."""

    prime_values: dict[int, complex]
    completely: bool = True
    prime_power_values: dict[tuple[int, int], complex] | None = None

    def at_prime(self, p: int) -> complex:
        z = self.prime_values.get(p, 0j)
        if abs(z) > 1 + 1e-12:
            raise ValueError(f"|f({p})| exceeds 1")
        return z

    def at_prime_power(self, p: int, a: int) -> complex:
        if self.completely or self.prime_power_values is None:
            return self.at_prime(p) ** a
        return self.prime_power_values.get((p, a), self.at_prime(p) ** a)

    def value_array(self, limit: int) -> np.ndarray:
        """f(n) for n = 0..limit (f(0) = 0), via factorization of each n."""
        out = np.zeros(limit + 1, dtype=complex)
        out[1] = 1
        for m in range(2, limit + 1):
            v = 1 + 0j
            for p, a in factorize(m):
                v *= self.at_prime_power(p, a)
            out[m] = v
        return out

    @classmethod
    def from_character(cls, chi: DirichletCharacter, limit: int) -> "MultiplicativeFunction":
        return cls(
            prime_values={p: chi.value(p) for p in primes_up_to(limit)},
            completely=True,
        )

    @classmethod
    def constant_one(cls, limit: int) -> "MultiplicativeFunction":
        return cls(prime_values={p: 1 + 0j for p in primes_up_to(limit)})


def _harmonic_sum(values: np.ndarray) -> complex:
    n = np.arange(len(values))
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(n > 0, values / np.maximum(n, 1), 0)
    return complex(np.sum(terms))


def lemma43_bound_report(
    f: MultiplicativeFunction, x: int
) -> tuple[float, float, float]:
    """|sum_{n<=x} f(n)/n| against the two pretentious-distance envelopes.

    bound1 = 1 + log x exp(-sum_{p<=x} (2 - |1 + f(p)|)/p),
    bound2 = 1 + log x exp(-D(1, f; x)^2 / 2);
    bound1 <= bound2 always since 2 - |1+z| >= (1 - Re z)/2.
    """
    vals = f.value_array(x)
    lhs = abs(_harmonic_sum(vals))
    s1 = math.fsum((2.0 - abs(1 + f.at_prime(p))) / p for p in primes_up_to(x))
    s2 = math.fsum((1.0 - f.at_prime(p).real) / p for p in primes_up_to(x))
    bound1 = 1.0 + math.log(x) * math.exp(-s1) if x > 1 else 1.0
    bound2 = 1.0 + math.log(x) * math.exp(-s2 / 2) if x > 1 else 1.0
    if bound1 > bound2 * (1 + 1e-12):
        raise ArithmeticError("envelope ordering violated")
    return lhs, bound1, bound2


def euler_factor_strip(
    f: MultiplicativeFunction, ell: int, x: int
) -> tuple[complex, complex, float]:
    """Strip the primes dividing ell out of sum_{n<=x} f(n)/n.

    Returns (lhs, main term prod_{p|ell} (1-f(p)/p)^(-1) * coprime sum,
    |difference|); the defect is O((loglog(ell+2))^2) for completely
    multiplicative f.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    vals = f.value_array(x)
    lhs = _harmonic_sum(vals)
    n = np.arange(x + 1)
    coprime = np.gcd(n, ell) == 1
    masked = np.where(coprime, vals, 0)
    factor = 1 + 0j
    for p, _ in factorize(ell):
        factor /= 1 - f.at_prime(p) / p
    rhs_main = factor * _harmonic_sum(masked)
    return complex(lhs), complex(rhs_main), abs(complex(lhs) - complex(rhs_main))


# ---------------------------------------------------------------------------
# the exact lambda inequalities


def _lambda_factor(chi_bar_value: Callable[[int], complex], r: int) -> complex:
    """prod over p^a || r of (chibar(p^a) - chibar(p^(a-1))) / phi(r)."""
    prod = 1 + 0j
    for p, a in factorize(r):
        prod *= chi_bar_value(p**a) - chi_bar_value(p ** (a - 1))
    return prod / totient(r)


def lambda_inequality_check(
    chi: DirichletCharacter, r1: int, r2: int
) -> float:
    """max(|l1|, |l2|, |l1 - l2|) phi(r1 r2)/(r1 r2), never above 1 + 1e-9.

    l_j combines the prime-power differences of conj(chi) at r_j with the
    Euler factors over primes dividing r1 r2.
    """
    if r1 < 1 or r2 < 1:
        raise ValueError("moduli must be >= 1")
    chib = chi.conjugate()
    cache: dict[int, complex] = {}

    def cb(n: int) -> complex:
        if n not in cache:
            cache[n] = chib.value(n)
        return cache[n]

    euler = 1 + 0j
    for p, _ in factorize(r1 * r2):
        euler /= 1 - cb(p) / p
    lam1 = _lambda_factor(cb, r1) * euler
    lam2 = _lambda_factor(cb, r2) * euler
    lhs = max(abs(lam1), abs(lam2), abs(lam1 - lam2))
    return lhs * totient(r1 * r2) / (r1 * r2)


def prime_power_inequality_check(chi: DirichletCharacter, r: int) -> float:
    """|1 - prod_{p^a || r}(chibar(p^a) - chibar(p^(a-1)))/phi(r)| times
    prod_{p|r} |(p-1)/(p - chibar(p))|, never above 1 + 1e-9."""
    if r < 1:
        raise ValueError("r must be >= 1")
    chib = chi.conjugate()
    lead = abs(1 - _lambda_factor(chib.value, r))
    for p, _ in factorize(r):
        lead *= abs((p - 1) / (p - chib.value(p)))
    return lead
