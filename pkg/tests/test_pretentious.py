import math

import numpy as np
import pytest

from charkit.characters import (
    character_by_index,
    enumerate_characters,
    principal_character,
)
from charkit.pretentious import (
    MultiplicativeFunction,
    UnitDiscSequence,
    delta_g,
    distance_sq,
    distance_sq_general,
    euler_factor_strip,
    l1_accelerated,
    l1_euler_product,
    l1_truncated,
    lambda_inequality_check,
    lemma32_average,
    lemma43_bound_report,
    mertens_product,
    nearest_character,
    ordered_distances,
    partial_sum_lower_bound_check,
    prime_power_inequality_check,
    primitive_characters_up_to,
    root_min_term,
    triangle_defect,
)
from charkit.residue import EULER_GAMMA, primes_up_to


def test_distance_sq_examples():
    chi = character_by_index(3, 1)
    triv = principal_character(1)
    rep = distance_sq(chi, triv, 10, per_prime=True)
    assert abs(rep.dist_sq - 26 / 15) < 1e-12
    assert abs(sum(t for _, t in rep.per_prime) - rep.dist_sq) < 1e-12
    assert abs(distance_sq(chi, chi, 1000).dist_sq - 1 / 3) < 1e-12
    # chi vs itself with no prime <= y dividing q
    chi7 = character_by_index(7, 1)
    assert distance_sq(chi7, chi7, 5).dist_sq == 0.0


def test_distance_symmetry_and_bound():
    for q1, q2 in ((5, 7), (8, 9)):
        for c1 in enumerate_characters(q1):
            for c2 in enumerate_characters(q2):
                d12 = distance_sq(c1, c2, 50).dist_sq
                d21 = distance_sq(c2, c1, 50).dist_sq
                assert abs(d12 - d21) < 1e-12
                conj = distance_sq(c1.conjugate(), c2.conjugate(), 50).dist_sq
                assert abs(d12 - conj) < 1e-12
                cap = 2 * math.fsum(1 / p for p in primes_up_to(50))
                assert -1e-12 <= d12 <= cap + 1e-12


def test_distance_sq_general():
    ones = UnitDiscSequence.ones(10)
    assert distance_sq_general(ones, ones, 10) == 0.0
    minus = UnitDiscSequence({p: -1.0 + 0j for p in primes_up_to(10)})
    expected = 2 * (1 / 2 + 1 / 3 + 1 / 5 + 1 / 7)
    assert abs(distance_sq_general(ones, minus, 10) - expected) < 1e-12
    chi = character_by_index(3, 1)
    z = UnitDiscSequence.from_character(chi, 100)
    w = UnitDiscSequence.ones(100)
    general = distance_sq_general(z, w, 100)
    assert abs(general - distance_sq(chi, principal_character(1), 100).dist_sq) < 1e-12
    with pytest.raises(ValueError):
        UnitDiscSequence({2: 2.0 + 0j})
    with pytest.raises(ValueError):
        distance_sq_general(UnitDiscSequence({2: 1.0}), ones, 10)


def test_triangle_defect():
    y = 100
    chi = character_by_index(3, 1)
    z1 = UnitDiscSequence.from_character(chi, y)
    w1 = UnitDiscSequence.ones(y)
    assert abs(triangle_defect(z1, w1, w1, w1, y)) < 1e-12
    z2 = UnitDiscSequence.from_character(chi.conjugate(), y)
    d = triangle_defect(z1, w1, z2, w1, y)
    assert d >= -1e-12
    rng = np.random.default_rng(3)
    ps = primes_up_to(1000)
    for _ in range(200):
        seqs = [
            UnitDiscSequence(
                {p: complex(np.exp(2j * np.pi * t)) for p, t in zip(ps, row)}
            )
            for row in rng.random((4, len(ps)))
        ]
        assert triangle_defect(*seqs, 1000) >= -1e-12
        weights = dict(zip(ps, rng.random(len(ps))))
        assert (
            triangle_defect(*seqs, 1000, weights=lambda p: weights[p])
            >= -1e-12
        )


def test_primitive_family_ordering():
    fam = primitive_characters_up_to(10)
    assert fam[0].q == 1
    conds = [c.q for c in fam]
    assert conds == sorted(conds)
    assert 2 not in conds  # no primitive character mod 2
    for c in fam:
        from charkit.characters import character_meta

        assert character_meta(c).is_primitive


def test_nearest_character():
    chi = character_by_index(3, 1)
    near = nearest_character(chi, 30, 1000)
    assert near.xi == chi and abs(near.dist_sq - 1 / 3) < 1e-12
    assert near.parity_product == 1
    triv = principal_character(1)
    assert nearest_character(triv, 5, 100).dist_sq == 0.0
    # minimality audit
    for q in (31, 101):
        for chi in enumerate_characters(q)[1:6]:
            near = nearest_character(chi, 12, q)
            for psi in primitive_characters_up_to(12):
                assert near.dist_sq <= distance_sq(chi, psi, q).dist_sq + 1e-12
    ups = [d for _, d in near.runners_up]
    assert ups == sorted(ups)


def test_ordered_distances():
    chi = character_by_index(3, 1)
    dists = ordered_distances(chi, 10, 100, 5)
    assert dists == sorted(dists)
    assert abs(dists[0] - nearest_character(chi, 10, 100).dist_sq) < 1e-12
    with pytest.raises(ValueError):
        ordered_distances(chi, 1, 100, 5)


def test_delta_g():
    assert abs(delta_g(3) - (1 - 3 * math.sqrt(3) / (2 * math.pi))) < 1e-15
    assert abs(delta_g(5) - 0.0645107) < 1e-6
    assert delta_g(1) == 1.0
    vals = [delta_g(g) for g in range(3, 30, 2)]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))


def test_root_min_term():
    brute, closed = root_min_term(3, 2, 0)
    assert brute == closed == 0.0
    brute, closed = root_min_term(3, 2, 1)
    assert abs(brute - 0.5) < 1e-12 and abs(closed - 0.5) < 1e-12
    brute, closed = root_min_term(5, 4, 1)
    assert abs(closed - (1 - math.cos(math.pi / 10))) < 1e-12
    assert abs(brute - closed) < 1e-12


def test_lemma32_average():
    lhs, rhs = lemma32_average(3, 2)
    assert abs(lhs - 0.25) < 1e-12 and abs(rhs - 0.25) < 1e-12
    lhs, rhs = lemma32_average(5, 2)
    expected = 1 - math.sin(math.radians(36)) / (2 * math.tan(math.radians(18)))
    assert abs(rhs - expected) < 1e-12 and abs(lhs - rhs) < 1e-12
    for g in (3, 5, 7, 9):
        for k in (2, 4, 6, 8, 10, 12):
            lhs, rhs = lemma32_average(g, k)
            assert abs(lhs - rhs) < 1e-12
            assert rhs > delta_g(g) - 1e-12  # k* tan(pi/(g k*)) > pi/g
    with pytest.raises(ValueError):
        lemma32_average(3, 3)


def test_l1_variants():
    chi = character_by_index(3, 1)
    assert abs(l1_truncated(chi, 3) - 0.5) < 1e-12
    assert abs(l1_truncated(chi, 1) - 1) < 1e-12
    target = math.pi / (3 * math.sqrt(3))
    assert abs(l1_accelerated(chi) - target) < 1e-10
    ep = l1_euler_product(chi, 10_000)
    assert abs(ep - target) / target < 0.02
    assert l1_euler_product(chi, 1.5) == 1
    with pytest.raises(ValueError):
        l1_truncated(principal_character(5), 10)


def test_mertens_product():
    y = 100_000
    assert abs(mertens_product(y) / (math.exp(EULER_GAMMA) * math.log(y)) - 1) < 0.01


def test_partial_sum_lower_bound():
    chi = character_by_index(3, 1)
    b = partial_sum_lower_bound_check(chi)
    assert abs(b.max_prefix - 1.0) < 1e-12
    assert b.max_prefix >= b.l_shifted - 1e-12
    for q in primes_up_to(100):
        if q < 3:
            continue
        for chi in enumerate_characters(q)[1:]:
            b = partial_sum_lower_bound_check(chi)
            assert b.max_prefix >= b.l_shifted - 1e-12
    with pytest.raises(ValueError):
        partial_sum_lower_bound_check(principal_character(7))


def test_lemma43_bound_report():
    one = MultiplicativeFunction.constant_one(1000)
    lhs, b1, b2 = lemma43_bound_report(one, 1000)
    assert abs(lhs - math.fsum(1 / n for n in range(1, 1001))) < 1e-9
    assert abs(b1 - (1 + math.log(1000))) < 1e-9
    assert b1 <= b2 * (1 + 1e-12)
    leg7 = MultiplicativeFunction.from_character(
        next(c for c in enumerate_characters(7) if c.order == 2), 10_000
    )
    for x in (100, 1000, 10_000):
        lhs, b1, b2 = lemma43_bound_report(leg7, x)
        assert lhs <= 10 * b1
        assert b1 <= b2 * (1 + 1e-12)
    minus = MultiplicativeFunction({p: -1 + 0j for p in primes_up_to(10_000)})
    lhs, b1, _ = lemma43_bound_report(minus, 10_000)
    assert lhs < 1.0 and b1 < 1 + math.log(10_000)


def test_euler_factor_strip():
    one = MultiplicativeFunction.constant_one(10_000)
    lhs, rhs, defect = euler_factor_strip(one, 1, 1000)
    assert defect == 0.0
    _, _, defect = euler_factor_strip(one, 2, 10_000)
    assert defect <= 2
    chi5 = next(c for c in enumerate_characters(5) if c.order == 4)
    f = MultiplicativeFunction.from_character(chi5, 5000)
    _, _, defect = euler_factor_strip(f, 6, 5000)
    assert defect <= 10 * math.log(math.log(8)) ** 2


def test_lambda_inequalities():
    chi = character_by_index(5, 1)
    assert abs(lambda_inequality_check(chi, 1, 1) - 1.0) < 1e-12
    leg13 = next(c for c in enumerate_characters(13) if c.order == 2)
    assert abs(leg13.value(2) - (-1)) < 1e-12
    assert abs(leg13.value(3) - 1) < 1e-12
    assert abs(lambda_inequality_check(leg13, 2, 3) - 2 / 3) < 1e-12
    for q in (7, 12):
        for chi in enumerate_characters(q):
            for r1 in range(1, 20):
                for r2 in range(1, 20):
                    assert lambda_inequality_check(chi, r1, r2) <= 1 + 1e-9


def test_prime_power_inequality():
    chi = character_by_index(5, 1)
    assert prime_power_inequality_check(chi, 1) == 0.0
    # boundary: chibar(p) = 1 at prime r
    chi7 = next(c for c in enumerate_characters(7) if c.order == 2)
    assert abs(chi7.value(2) - 1) < 1e-12  # 2 is a QR mod 7
    assert abs(prime_power_inequality_check(chi7, 2) - 1.0) < 1e-12
    for q in (7, 12):
        for chi in enumerate_characters(q):
            for r in range(1, 60):
                assert prime_power_inequality_check(chi, r) <= 1 + 1e-9
