import random
from fractions import Fraction
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatlat import linalg
from quatlat.errors import NotIntegral, NotPositiveDefinite, ResourceLimit
from quatlat.forms import (QuadForm, divisor_count, divisors, format_form,
                           fundamental_discriminant, invariants,
                           kronecker_character, parse_form, parse_form_string,
                           reduce_form, represent_count, theta_coeffs)

from .conftest import random_primitive_form
from .oracles import naive_divisor_count, naive_represent_count, naive_theta


def test_parse_four_squares(four_squares):
    assert four_squares.gram == ((2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2))


def test_parse_watson(watson):
    assert watson.gram == ((2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 14, 0), (0, 0, 0, 14))


def test_parse_d6780(d6780):
    assert d6780.gram == ((2, 0, 0, 0), (0, 6, 3, 3), (0, 3, 10, 1), (0, 3, 1, 68))


def test_parse_rejects_bad_input():
    with pytest.raises(NotIntegral):
        parse_form((1, 0, 0))
    with pytest.raises(NotIntegral):
        parse_form((1.5, 0, 0, 0, 1, 0, 0, 1, 0, 1))
    with pytest.raises(NotPositiveDefinite):
        parse_form((1, 0, 0, 0, -1, 0, 0, 1, 0, 1))
    with pytest.raises(NotPositiveDefinite):
        parse_form((1, 5, 0, 0, 1, 0, 0, 1, 0, 1))


def test_discriminants(four_squares, watson, d6780):
    assert four_squares.disc == 16
    assert watson.disc == 784
    assert d6780.disc == 6780


def test_levels(four_squares, watson, d6780):
    assert four_squares.level == 4
    assert watson.level == 28
    assert d6780.level == 6780


def test_level_minimality(four_squares, watson):
    # no proper divisor of the level produces an integral even-diagonal N A^{-1}
    for q in (four_squares, watson):
        a = [list(r) for r in q.gram]
        d = linalg.det(a)
        adj = linalg.adjugate(a)

        def works(n):
            for i in range(4):
                for j in range(4):
                    if (n * adj[i][j]) % d:
                        return False
                if (n * adj[i][i] // d) % 2:
                    return False
            return True

        assert works(q.level)
        assert not any(works(m) for m in divisors(q.level) if m < q.level)


def test_invariant_sanity(corpus):
    for q in corpus:
        inv = invariants(q)
        assert inv.disc > 0
        assert (4 * inv.disc) % inv.level == 0
        assert inv.level ** 4 % inv.disc == 0


def test_char_disc(four_squares, watson, d6780):
    assert four_squares.char_disc == 1
    assert watson.char_disc == 1
    assert d6780.char_disc == 6780
    assert fundamental_discriminant(12) == 12
    assert fundamental_discriminant(9) == 1
    assert fundamental_discriminant(5) == 5


def test_kronecker_examples():
    assert all(kronecker_character(1, m) == 1 for m in range(1, 30))
    assert kronecker_character(16, 3) == 1
    assert kronecker_character(-4, 3) == -1


def test_kronecker_against_euler_criterion():
    for p in (3, 5, 7, 11, 13):
        for d in range(-20, 21):
            if d % p == 0:
                assert kronecker_character(d, p) == 0
                continue
            euler = pow(d % p, (p - 1) // 2, p)
            expect = 1 if euler == 1 else -1
            assert kronecker_character(d, p) == expect


@given(st.integers(-40, 40), st.integers(1, 40), st.integers(1, 40))
@settings(max_examples=60, deadline=None)
def test_kronecker_multiplicative(d, m1, m2):
    assert kronecker_character(d, m1 * m2) == \
        kronecker_character(d, m1) * kronecker_character(d, m2)


def test_divisor_count():
    assert divisor_count(1) == 1
    assert divisor_count(12) == 6
    assert all(divisor_count(p) == 2 for p in (2, 3, 5, 7, 97))
    for n in (4, 30, 36, 240):
        assert divisor_count(n) == naive_divisor_count(n)


def test_represent_count_examples(four_squares, watson):
    assert represent_count(four_squares, 0) == 1
    assert represent_count(four_squares, 1) == 8
    assert represent_count(four_squares, 1) == naive_represent_count(four_squares, 1)
    assert represent_count(watson, 3) == 0


def test_theta_four_squares(four_squares):
    assert theta_coeffs(four_squares, 4) == [1, 8, 24, 32, 24]
    assert theta_coeffs(four_squares, 0) == [1]
    # classical divisor-sum identity as an independent check
    for n in range(1, 40):
        sigma = sum(d for d in range(1, n + 1) if n % d == 0 and d % 4 != 0)
        assert theta_coeffs(four_squares, 40)[n] == 8 * sigma


def test_theta_watson_misses_three(watson):
    assert theta_coeffs(watson, 3)[-1] == 0


def test_theta_matches_naive(small_corpus):
    for q in small_corpus[:4]:
        assert theta_coeffs(q, 15) == naive_theta(q, 15)


def test_theta_consistent_with_represent(small_corpus):
    for q in small_corpus[:3]:
        theta = theta_coeffs(q, 12)
        for n in range(13):
            assert theta[n] == represent_count(q, n)


def test_resource_limit(four_squares):
    with pytest.raises(ResourceLimit):
        theta_coeffs(four_squares, 500, cap=10)


def test_enum_cap_env(four_squares, monkeypatch):
    monkeypatch.setenv("QUATLAT_ENUM_CAP", "5")
    from quatlat.forms import _ENUM_CACHE
    with pytest.raises(ResourceLimit):
        theta_coeffs(four_squares, 500)
    monkeypatch.delenv("QUATLAT_ENUM_CAP")


def _random_unimodular(rng):
    m = linalg.identity(4)
    for _ in range(12):
        i, j = rng.sample(range(4), 2)
        c = rng.randint(-2, 2)
        for r in range(4):
            m[r][j] += c * m[r][i]
    return m


def _apply(q, u):
    g = [list(r) for r in q.gram]
    ut = linalg.transpose(u)
    new = linalg.mat_mul(ut, linalg.mat_mul(g, u))
    return QuadForm(tuple(tuple(row) for row in new))


def test_reduce_identity(four_squares):
    red = reduce_form(four_squares)
    assert red.form.gram == four_squares.gram
    assert red.transform == tuple(tuple(row) for row in linalg.identity(4))


def test_reduce_scrambled_four_squares(four_squares):
    rng = random.Random(7)
    for _ in range(5):
        u = _random_unimodular(rng)
        scrambled = _apply(four_squares, u)
        red = reduce_form(scrambled)
        # the orthogonal basis is recovered up to signed permutation
        assert sorted(abs(x) for row in red.form.gram for x in row) == \
            sorted(abs(x) for row in four_squares.gram for x in row)
        assert theta_coeffs(red.form, 10) == theta_coeffs(four_squares, 10)


def test_reduce_invariants(small_corpus, d6780):
    for q in list(small_corpus[:5]) + [d6780]:
        red = reduce_form(q)
        d = red.outer_coeffs
        assert prod(d) == Fraction(q.disc, 16)
        for i in range(3):
            assert d[i] >= Fraction(3, 4) * d[i + 1]
        for i in range(4):
            for j in range(i + 1, 4):
                assert abs(red.offdiag[i][j]) <= Fraction(1, 2)
        # transform carries the original form to the reduced one
        t = [list(r) for r in red.transform]
        g = [list(r) for r in q.gram]
        carried = linalg.mat_mul(linalg.transpose(t), linalg.mat_mul(g, t))
        assert tuple(tuple(r) for r in carried) == red.form.gram
        assert red.form.disc == q.disc


def test_represent_count_unimodular_invariance(small_corpus):
    rng = random.Random(3)
    for q in small_corpus[:3]:
        u = _random_unimodular(rng)
        qu = _apply(q, u)
        for n in range(1, 12):
            assert represent_count(q, n) == represent_count(qu, n)
        assert q.disc == qu.disc


def test_format_round_trip(four_squares, watson, d6780, small_corpus):
    for q in [four_squares, watson, d6780] + list(small_corpus):
        assert parse_form_string(format_form(q)) == q
