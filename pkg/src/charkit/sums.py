"""Finite character-sum computations.

Prefix sums and M(chi), interval sums, Gauss sums, the Fourier expansion of
prefix sums, twisted harmonic sums (optionally restricted to smooth numbers),
hyper-Kloosterman sums, and the Bateman-Chowla mean-square identity.

Bulk helpers evaluate all characters of one modulus at once through a shared
discrete-log matrix, which is what makes full modulus scans feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import digamma

from .characters import (
    DirichletCharacter,
    character_meta,
    enumerate_characters,
    primitivize,
)
from .residue import (
    FactoredModulus,
    build_modulus,
    mobius,
    smooth_indicator,
)

_EXACT_PHASE_LIMIT = 2_000_000
_ARGMAX_TOL = 1e-9


# ---------------------------------------------------------------------------
# bulk evaluation


@lru_cache(maxsize=128)
def _bulk_tables(q: int):
    """Per-modulus dlog matrix D (q x ncomp), unit mask, group exponent L,
    and the table of L-th roots of unity."""
    m = build_modulus(q)
    ncomp = len(m.component_orders)
    D = np.zeros((max(q, 1), ncomp), dtype=np.int64)
    mask = np.zeros(max(q, 1), dtype=bool)
    if q == 1:
        mask[0] = True
    else:
        for n in range(q):
            if math.gcd(n, q) == 1:
                mask[n] = True
                D[n] = m.dlog(n)
    L = m.group_exponent
    roots = np.exp(2j * np.pi * np.arange(L) / L)
    return m, D, mask, L, roots


def _weights(chi: DirichletCharacter, L: int) -> np.ndarray:
    m = chi.modulus
    return np.array(
        [e * (L // d) % L for e, d in zip(chi.exponents, m.component_orders)],
        dtype=np.int64,
    )


def character_phases(chi: DirichletCharacter) -> tuple[np.ndarray, np.ndarray, int]:
    """(phase numerators mod L, unit mask, L) for chi at residues 0..q-1."""
    _, D, mask, L, _ = _bulk_tables(chi.q)
    ph = (D @ _weights(chi, L)) % L
    return ph, mask, L

def character_values(chi: DirichletCharacter) -> np.ndarray:
    """Complex array v of length q with v[n] = chi(n), n = 0..q-1."""
    _, D, mask, L, roots = _bulk_tables(chi.q)
    ph = (D @ _weights(chi, L)) % L
    vals = roots[ph]
    vals[~mask] = 0
    return vals


def character_value_matrix(
    modulus: FactoredModulus | int,
    chars: list[DirichletCharacter],
) -> np.ndarray:
    """Matrix of shape (q, len(chars)) with column j = values of chars[j]."""
    q = modulus.q if isinstance(modulus, FactoredModulus) else modulus
    _, D, mask, L, roots = _bulk_tables(q)
    W = np.stack([_weights(c, L) for c in chars], axis=1)
    ph = (D @ W) % L
    vals = roots[ph]
    vals[~mask, :] = 0
    return vals


def bulk_m_values(
    modulus: FactoredModulus | int,
    chars: list[DirichletCharacter] | None = None,
    chunk: int = 256,
) -> tuple[np.ndarray, np.ndarray]:
    """M(chi) and its smallest argmax x for many characters of one modulus.

    Returns (m_values, argmax_x), aligned with `chars` (default: the full
    enumeration; M of the principal character is reported as the max prefix
    magnitude too, callers that care must filter it out).
    """
    m = modulus if isinstance(modulus, FactoredModulus) else build_modulus(modulus)
    if chars is None:
        chars = enumerate_characters(m)
    mv = np.zeros(len(chars))
    ax = np.zeros(len(chars), dtype=np.int64)

    # conjugate characters share |prefix| pointwise: compute one per pair
    orders = m.component_orders
    seen: dict[tuple, int] = {}
    compute: list[int] = []
    mirror: list[tuple[int, int]] = []
    for i, c in enumerate(chars):
        conj_key = tuple((-e) % d for e, d in zip(c.exponents, orders))
        if conj_key in seen and conj_key != c.exponents:
            mirror.append((i, seen[conj_key]))
        else:
            seen[c.exponents] = i
            compute.append(i)

    for lo in range(0, len(compute), chunk):
        idx = compute[lo : lo + chunk]
        vals = character_value_matrix(m, [chars[i] for i in idx])
        # row x of the cumsum is the prefix sum to x, since vals[0] = 0;
        # squared magnitudes avoid a hypot over the whole matrix
        pref2 = np.cumsum(vals.real, axis=0) ** 2
        pref2 += np.cumsum(vals.imag, axis=0) ** 2
        best = np.sqrt(np.max(pref2, axis=0))
        thr = (best - _ARGMAX_TOL * np.maximum(1.0, best)) ** 2
        ax[idx] = np.argmax(pref2 >= thr, axis=0)
        mv[idx] = best
    for i, j in mirror:
        mv[i] = mv[j]
        ax[i] = ax[j]
    return mv, ax


# ---------------------------------------------------------------------------
# prefix profiles


@dataclass(frozen=True)
class CharSumProfile:
    """Prefix sums of chi with the maximum M(chi) and its first location."""

    chi_ref: dict
    prefix: np.ndarray  # prefix[x] = sum_{n<=x} chi(n), x = 0..q
    m_value: float
    argmax_x: int


def prefix_profile(chi: DirichletCharacter) -> CharSumProfile:
    """All prefix sums of chi and M(chi); rejects the principal character."""
    if chi.is_principal:
        raise ValueError("M(chi) is only defined for non-principal characters")
    vals = character_values(chi)
    cums = np.cumsum(vals[1:])  # x = 1 .. q-1; chi(q) = chi(0) = 0
    prefix = np.concatenate([[0j], cums, cums[-1:]])
    mags = np.abs(prefix)
    m_value = float(np.max(mags))
    # smallest x attaining the max, with a tolerance so that exact ties are
    # not broken by rounding noise
    argmax = int(np.argmax(mags >= m_value - _ARGMAX_TOL * max(1.0, m_value)))
    return CharSumProfile(
        chi_ref=chi.as_key(),
        prefix=prefix,
        m_value=m_value,
        argmax_x=argmax,
    )


def interval_sum(chi: DirichletCharacter, x: int, y: int) -> complex:
    """Sum of chi(n) over x <= n <= x + y via prefix differences."""
    q = chi.q
    if not (0 <= x and x + y <= q and y >= 0):
        raise ValueError("interval [x, x+y] must lie within [0, q]")
    vals = character_values(chi)
    lo = max(x, 1)
    return complex(np.sum(vals[np.arange(lo, x + y + 1) % q]))


# ---------------------------------------------------------------------------
# Gauss sums


@dataclass(frozen=True)
class GaussSumResult:
    value: complex
    modulus_sqrt_ratio: float


def gauss_sum(chi: DirichletCharacter) -> GaussSumResult:
    """tau(chi) = sum over a mod q of chi(a) e(a/q).

    Phases are accumulated exactly (integer numerators over a common root
    order) and embedded to complex once at the end, when the common order is
    small enough; large moduli fall back to a float dot product.
    """
    q = chi.q
    if q == 1:
        return GaussSumResult(value=1 + 0j, modulus_sqrt_ratio=1.0)
    ph, mask, L = character_phases(chi)
    Lp = math.lcm(L, q)
    if Lp <= _EXACT_PHASE_LIMIT:
        n = np.arange(q, dtype=np.int64)
        nums = (ph * (Lp // L) + n * (Lp // q)) % Lp
        counts = np.bincount(nums[mask], minlength=Lp)
        idx = np.nonzero(counts)[0]
        value = complex(
            np.sum(counts[idx] * np.exp(2j * np.pi * idx / Lp))
        )
    else:
        vals = character_values(chi)
        value = complex(np.sum(vals * np.exp(2j * np.pi * np.arange(q) / q)))
    return GaussSumResult(
        value=value, modulus_sqrt_ratio=abs(value) / math.sqrt(q)
    )


def gauss_sum_induced(chi: DirichletCharacter) -> complex:
    """mu(q/q') chi'(q/q') tau(chi') for the inducing primitive chi'."""
    prim = primitivize(chi)
    d = chi.q // prim.q
    return mobius(d) * prim.value(d) * gauss_sum(prim).value


def twisted_gauss_check(
    chi: DirichletCharacter, b: int
) -> tuple[complex, complex]:
    """lhs = sum_a chi(a) e(ab/q), rhs = conj(chi)(b) tau(chi).

    The two agree for all integers b when chi is primitive, and for b
    coprime to q in general.
    """
    q = chi.q
    vals = character_values(chi)
    lhs = complex(np.sum(vals * np.exp(2j * np.pi * b * np.arange(q) / q)))
    rhs = chi.conjugate().value(b) * gauss_sum(chi).value
    return lhs, rhs


# ---------------------------------------------------------------------------
# Fourier expansion of prefix sums


def polya_expansion(
    chi: DirichletCharacter, x: int, N: int
) -> tuple[complex, complex, float]:
    """Compare sum_{n<=x} chi(n) with its truncated Fourier expansion.

    rhs = (tau(chi)/2*pi*i) * sum_{1<=|n|<=N} conj(chi)(n)/n (1 - e(-nx/q)).
    Returns (lhs, rhs, |lhs - rhs|); the residual is O(1 + q log q / N).
    """
    if not character_meta(chi).is_primitive or chi.q == 1:
        raise ValueError("the Fourier expansion requires a primitive character")
    q = chi.q
    if not (1 <= x <= q and N >= 1):
        raise ValueError("need 1 <= x <= q and N >= 1")
    vals_conj = np.conj(character_values(chi))
    tau = gauss_sum(chi).value
    n = np.arange(1, N + 1)
    chin = vals_conj[n % q]
    pos = np.sum(chin / n * (1 - np.exp(-2j * np.pi * n * x / q)))
    neg = np.sum(
        vals_conj[(-n) % q] / (-n) * (1 - np.exp(2j * np.pi * n * x / q))
    )
    rhs = tau / (2j * np.pi) * (pos + neg)
    vals = character_values(chi)
    lhs = complex(np.sum(vals[np.arange(1, x + 1) % q]))
    return lhs, complex(rhs), abs(lhs - complex(rhs))


def twisted_harmonic_sum(
    chi: DirichletCharacter,
    alpha: float,
    cutoff: int,
    smooth_y: float | None = None,
) -> complex:
    """sum over n <= cutoff (n y-smooth if smooth_y given) of
    conj(chi)(n) e(n alpha) / n."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    q = chi.q
    n = np.arange(1, cutoff + 1)
    coeff = np.conj(character_values(chi))[n % q] / n
    if smooth_y is not None:
        coeff = coeff * smooth_indicator(smooth_y, cutoff)[1:]
    return complex(np.sum(coeff * np.exp(2j * np.pi * alpha * n)))


# ---------------------------------------------------------------------------
# arcs


@dataclass(frozen=True)
class ArcConfig:
    """Thresholds for major/minor arc classification.

    Q is q itself in the unconditional normalization or log q in the
    GRH-flavored one; s and S are the denominator thresholds.
    """

    q: int
    Q: float
    s: float
    S: float

    @classmethod
    def for_modulus(cls, q: int, y_policy: str = "q") -> "ArcConfig":
        Q = float(q) if y_policy == "q" else math.log(q)
        lq = math.log(Q)
        return cls(q=q, Q=Q, s=lq ** (1 / 3), S=math.exp(lq ** (5 / 6)))


@dataclass(frozen=True)
class ArcPoint:
    alpha: float
    b: int
    r: int
    N: float
    is_major: bool


def _convergents(alpha: Fraction, max_den: int):
    """Continued-fraction convergents b/r of alpha with r <= max_den."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = alpha
    out = []
    while q1 <= max_den:
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_den:
            break
        out.append((p1, q1))
        frac = x - a
        if frac == 0:
            break
        x = 1 / frac
    return out


def classify_arc(alpha: float, cfg: ArcConfig) -> ArcPoint:
    """Major/minor classification of alpha in [0, 1).

    Searches continued-fraction convergents b/r with r <= S satisfying
    |alpha - b/r| <= 1/(rS); the smallest such r decides (major iff r <= s).
    """
    if not (0 <= alpha < 1):
        raise ValueError("alpha must lie in [0, 1)")
    a = Fraction(alpha)
    Sf = Fraction(cfg.S)
    best = None
    for b, r in _convergents(a, int(cfg.S)):
        if abs(a - Fraction(b, r)) <= 1 / (r * Sf):
            best = (b, r)
            break  # convergents have increasing r; first hit is smallest
    if best is None:
        # always exists by Dirichlet's theorem; guard for float corner cases
        raise ArithmeticError("no rational approximation found below S")
    b, r = best
    err = abs(r * alpha - b)
    N = float(cfg.q) if err == 0 else min(float(cfg.q), 1.0 / err)
    return ArcPoint(alpha=alpha, b=b, r=r, N=N, is_major=r <= cfg.s)


# ---------------------------------------------------------------------------
# Kloosterman sums and the Gauss-moment identity


def kloosterman(n: int, b: int, q: int) -> complex:
    """Hyper-Kloosterman sum Kl_n(b, q), by exact enumeration.

    Sum of e((x_1 + ... + x_n)/q) over units with x_1 ... x_n = b (mod q).
    """
    if n < 1:
        raise ValueError("arity must be >= 1")
    if math.gcd(b, q) != 1:
        raise ValueError("Kl_n(b, q) requires gcd(b, q) = 1")
    if q ** (n - 1) > 10**7:
        raise ValueError("direct enumeration infeasible: q^(n-1) > 1e7")
    if n == 1:
        return complex(np.exp(2j * np.pi * (b % q) / q))
    units = np.array([u for u in range(1, q) if math.gcd(u, q) == 1])
    inv = {int(u): pow(int(u), -1, q) for u in units}
    # accumulate counts of (x_1+...+x_n) mod q exactly, embed once
    counts = np.zeros(q, dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    prods = np.ones(1, dtype=np.int64)
    for _ in range(n - 1):
        sums = (sums[:, None] + units[None, :]).ravel() % q
        prods = (prods[:, None] * units[None, :]).ravel() % q
    last = np.array([b * inv[int(p)] % q for p in prods])
    np.add.at(counts, (sums + last) % q, 1)
    idx = np.nonzero(counts)[0]
    return complex(np.sum(counts[idx] * np.exp(2j * np.pi * idx / q)))


def gauss_moment_identity(n: int, a: int, q: int) -> tuple[complex, complex]:
    """Both sides of the odd-character Gauss-sum moment identity at prime q:

    lhs = (2/phi(q)) sum_{chi odd} chi(a) tau(chi)^n
    rhs = Kl_n(abar, q) - Kl_n(-abar, q).
    """
    from .residue import is_prime

    if q == 2 or not is_prime(q):
        raise ValueError("the identity is stated for odd prime modulus")
    if math.gcd(a, q) != 1:
        raise ValueError("need gcd(a, q) = 1")
    total = 0j
    for chi in enumerate_characters(q):
        if chi.parity == -1:
            total += chi.value(a) * gauss_sum(chi).value ** n
    lhs = 2 * total / (q - 1)
    abar = pow(a, -1, q)
    rhs = kloosterman(n, abar, q) - kloosterman(n, (-abar) % q, q)
    return complex(lhs), complex(rhs)


# ---------------------------------------------------------------------------
# L(1, chi) helper and the Bateman-Chowla identity


def l1_exact(chi: DirichletCharacter) -> complex:
    """L(1, chi) for non-principal chi, via -1/q sum_a chi(a) psi(a/q).

    psi here is the digamma function; absolute error is far below 1e-10.
    """
    if chi.is_principal:
        raise ValueError("L(1, chi) diverges for the principal character")
    q = chi.q
    a = np.arange(1, q)
    vals = character_values(chi)[1:]
    return complex(-np.sum(vals * digamma(a / q)) / q)


def bateman_chowla_check(chi: DirichletCharacter) -> tuple[float, float]:
    """Both sides of the Bateman-Chowla mean-square identity for primitive chi.

    lhs = (1/q) sum_{N<=q} |sum_{n<=N} chi(n) - c|^2 with
    c = (tau(chi)/i pi) ((1 - chi(-1))/2) L(1, conj(chi));
    rhs = q/12 prod_{p|q} (1 - 1/p^2).
    """
    meta = character_meta(chi)
    if meta.is_principal or not meta.is_primitive:
        raise ValueError("identity requires a primitive non-principal character")
    q = chi.q
    prefix = np.cumsum(character_values(chi))  # prefix[N-1] = sum_{n<=N}
    c = 0j
    if chi.parity == -1:
        c = gauss_sum(chi).value / (1j * np.pi) * l1_exact(chi.conjugate())
    lhs = float(np.mean(np.abs(prefix - c) ** 2))
    rhs = q / 12.0
    for p, _ in chi.modulus.factors:
        rhs *= 1 - 1 / p**2
    return lhs, rhs


# ---------------------------------------------------------------------------
# direction statistics


def direction_statistics(q: int, x: int) -> list[dict]:
    """For every odd chi mod prime q: the prefix sum at x in polar form.

    Rows are sorted by ascending magnitude; the last column normalizes by
    sqrt(q) loglog q, the scale of the extremal constant e^gamma/pi.
    """
    from .residue import is_prime

    if not is_prime(q):
        raise ValueError("direction statistics are defined for prime q")
    if not (1 <= x <= q):
        raise ValueError("need 1 <= x <= q")
    m = build_modulus(q)
    odd = [chi for chi in enumerate_characters(m) if chi.parity == -1]
    scale = math.sqrt(q) * math.log(math.log(q)) if q > 15 else math.sqrt(q)
    rows = []
    chunk = 256
    for lo in range(0, len(odd), chunk):
        block = odd[lo : lo + chunk]
        vals = character_value_matrix(m, block)
        sums = np.sum(vals[1 : x + 1], axis=0)
        for chi, s in zip(block, sums):
            rows.append(
                {
                    "chi_index": chi.index,
                    "sum": complex(s),
                    "angle": float(np.angle(s)),
                    "normalized_magnitude": abs(s) / scale,
                }
            )
    rows.sort(key=lambda r: (r["normalized_magnitude"], r["chi_index"]))
    return rows
