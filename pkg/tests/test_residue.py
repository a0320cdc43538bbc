import math

import numpy as np
import pytest

from charkit.residue import (
    EULER_GAMMA,
    UnitValue,
    build_modulus,
    divisors,
    factorize,
    is_prime,
    largest_prime_factor,
    mertens_progression_sum,
    mobius,
    primes_up_to,
    root_of_unity,
    smooth_numbers,
    totient,
)


def brute_factorize(n):
    out = []
    d = 2
    while d * d <= n:
        a = 0
        while n % d == 0:
            n //= d
            a += 1
        if a:
            out.append((d, a))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_factorize_examples():
    assert factorize(1) == []
    assert factorize(12) == [(2, 2), (3, 1)]
    assert factorize(97) == [(97, 1)]


def test_factorize_matches_oracle():
    for n in range(1, 2000):
        assert factorize(n) == brute_factorize(n)


def test_factorize_reconstructs():
    for n in (2**10 * 3**5, 999983, 10**12 + 39):
        assert math.prod(p**a for p, a in factorize(n)) == n


def test_primes_up_to():
    assert primes_up_to(10) == (2, 3, 5, 7)
    assert primes_up_to(2) == (2,)
    assert len(primes_up_to(100)) == 25
    assert primes_up_to(1) == ()


def test_is_prime():
    ps = set(primes_up_to(10_000))
    for n in range(10_000):
        assert is_prime(n) == (n in ps)


def test_largest_prime_factor():
    assert largest_prime_factor(12) == 3
    assert largest_prime_factor(97) == 97
    assert largest_prime_factor(360) == 5
    with pytest.raises(ValueError):
        largest_prime_factor(1)


def test_totient_mobius_divisors():
    assert [totient(n) for n in (1, 2, 9, 10)] == [1, 1, 6, 4]
    assert [mobius(n) for n in (1, 2, 4, 6, 30)] == [1, -1, 0, 1, -1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_smooth_numbers_examples():
    s = smooth_numbers(3, 20)
    assert s.members == (1, 2, 3, 4, 6, 8, 9, 12, 16, 18)
    assert smooth_numbers(1, 10).members == (1,)
    assert smooth_numbers(100, 50).members == tuple(range(1, 51))
    assert 12 in s and 10 not in s


def test_smooth_numbers_against_factorization():
    for y in (2, 5, 13, 50):
        s = smooth_numbers(y, 300)
        expected = tuple(
            n
            for n in range(1, 301)
            if all(p <= y for p, _ in brute_factorize(n)) or n == 1
        )
        assert s.members == expected


def test_mertens_progression_sum():
    all_p = mertens_progression_sum(1, 1, 100, include_below_ell=True)
    assert abs(all_p - math.fsum(1 / p for p in primes_up_to(100))) < 1e-15
    assert abs(all_p - 1.8029) < 5e-4
    assert abs(mertens_progression_sum(4, 1, 100) - 0.4922) < 5e-4
    with pytest.raises(ValueError):
        mertens_progression_sum(4, 2, 100)


def test_unit_value_arithmetic():
    rng = np.random.default_rng(7)
    for _ in range(500):
        k1, d1 = int(rng.integers(0, 100)), int(rng.integers(1, 100))
        k2, d2 = int(rng.integers(0, 100)), int(rng.integers(1, 100))
        a, b = root_of_unity(k1, d1), root_of_unity(k2, d2)
        assert abs((a * b).embed() - a.embed() * b.embed()) < 1e-12
        assert abs(a.conjugate().embed() - a.embed().conjugate()) < 1e-12
        assert abs((a**3).embed() - a.embed() ** 3) < 1e-12
    assert UnitValue(zero=True).embed() == 0
    assert root_of_unity(5, 10).num == 1 and root_of_unity(5, 10).den == 2
    assert abs(abs(root_of_unity(3, 7).embed()) - 1) < 1e-15


def test_build_modulus_examples():
    m7 = build_modulus(7)
    assert m7.component_orders == (6,)
    assert m7.generators == (3,)
    m8 = build_modulus(8)
    assert m8.component_orders == (2, 2)
    m1 = build_modulus(1)
    assert m1.phi == 1 and m1.generators == ()


def test_unit_group_structure():
    for q in range(1, 400):
        m = build_modulus(q)
        assert math.prod(pa[0] ** pa[1] for pa in m.factors) == q
        assert m.phi == totient(q)
        for u in m.units():
            if q == 1:
                continue
            vec = m.dlog(u)
            rebuilt = 1
            for g, e in zip(m.generators, vec):
                rebuilt = rebuilt * pow(g, e, q) % q
            assert rebuilt == u


def test_euler_gamma():
    assert abs(EULER_GAMMA - 0.5772156649015329) < 1e-15
