import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatlat import linalg, localcount
from quatlat.errors import PrecisionTooLow
from quatlat.forms import QuadForm, parse_form
from quatlat.padic import (INFINITE, anisotropy_depth, hasse_invariant,
                           hilbert_symbol, is_anisotropic, jordan_decompose,
                           min_precision, rational_diagonal)


def test_hilbert_examples():
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(2, 5, 5) == -1
    assert hilbert_symbol(-1, -1, INFINITE) == -1
    assert hilbert_symbol(-1, 2, INFINITE) == 1


def test_hilbert_unramified():
    for p in (3, 5, 7, 11):
        for a in range(1, p):
            for b in range(1, p):
                assert hilbert_symbol(a, b, p) == 1


def _places(a, b):
    out = {2, INFINITE}
    for x in (a, b):
        x = abs(x)
        f = 2
        while f * f <= x:
            while x % f == 0:
                out.add(f)
                x //= f
            f += 1
        if x > 1:
            out.add(x)
    return out


@given(st.integers(-10 ** 4, 10 ** 4).filter(lambda x: x != 0),
       st.integers(-10 ** 4, 10 ** 4).filter(lambda x: x != 0))
@settings(max_examples=80, deadline=None)
def test_hilbert_reciprocity(a, b):
    prod = 1
    for v in _places(a, b):
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1


def test_jordan_four_squares_odd(four_squares):
    split = jordan_decompose(four_squares, 7)
    assert split.scales == (0, 0, 0, 0)
    assert all(len(g) == 1 for _, g in split.blocks)


def test_jordan_watson_at_7(watson):
    split = jordan_decompose(watson, 7)
    assert split.scales == (0, 0, 1, 1)


def test_jordan_four_squares_at_2(four_squares):
    split = jordan_decompose(four_squares, 2)
    assert split.scales == (0, 0, 0, 0)
    assert all(len(g) == 1 for _, g in split.blocks)


def test_jordan_precision_guard(watson):
    with pytest.raises(PrecisionTooLow):
        jordan_decompose(watson, 7, precision=1)


def _ord_frac(x, p):
    v = 0
    n, d = x.numerator, x.denominator
    assert d % p
    while n % p == 0:
        n //= p
        v += 1
    return v


def test_jordan_invariants(small_corpus, d6780):
    for q in list(small_corpus[:5]) + [d6780]:
        for p in (2, 3, 7):
            split = jordan_decompose(q, p)
            k = split.precision
            dims = [len(g) for _, g in split.blocks]
            assert sum(dims) == 4
            assert list(split.scales) == sorted(split.scales)
            # valuation budget: scales plus block determinants account for D
            total = 0
            for (scale, gram), dim in zip(split.blocks, dims):
                detg = linalg.det([list(r) for r in gram])
                assert detg % p ** (k - 2) != 0  # unit after removing the scale
                total += scale * dim + localcount.ordp(detg, p)
            want = localcount.ordp(q.disc, p) if q.disc % p == 0 else 0
            assert total == want
            if p == 2:
                for _, gram in split.blocks:
                    if len(gram) == 2:
                        assert gram[0][1] % 2 == 1
                        detg = gram[0][0] * gram[1][1] - gram[0][1] ** 2
                        assert detg % 8 in (3, 7)
            # reassembly: basis transports the form onto the block diagonal
            b = split.basis
            g = q.gram
            carried = [[sum(b[r][i] * g[r][t] * b[t][j]
                            for r in range(4) for t in range(4))
                        for j in range(4)] for i in range(4)]
            expected = [[Fraction(0)] * 4 for _ in range(4)]
            off = 0
            for scale, gram in split.blocks:
                d = len(gram)
                for i in range(d):
                    for j in range(d):
                        expected[off + i][off + j] = Fraction(p ** scale * gram[i][j])
                off += d
            for i in range(4):
                for j in range(4):
                    diff = carried[i][j] - expected[i][j]
                    assert diff == 0 or _ord_frac(diff, p) >= k
            # change of basis is invertible over Z_p
            detb = linalg.det([list(r) for r in b])
            assert detb != 0 and _ord_frac(detb, p) == 0


def test_hasse_examples(four_squares):
    for p in (3, 5, 7):
        assert hasse_invariant(four_squares, p) == 1
    assert hasse_invariant(four_squares, 2) == 1


def test_hasse_diagonalization_independent(small_corpus):
    rng = random.Random(11)
    for q in small_corpus[:4]:
        base = {p: hasse_invariant(q, p) for p in (2, 3, 5, 7)}
        for _ in range(3):
            u = linalg.identity(4)
            for _ in range(8):
                i, j = rng.sample(range(4), 2)
                c = rng.randint(-2, 2)
                for r in range(4):
                    u[r][j] += c * u[r][i]
            g = linalg.mat_mul(linalg.transpose(u),
                               linalg.mat_mul([list(r) for r in q.gram], u))
            q2 = QuadForm(tuple(tuple(row) for row in g))
            for p, val in base.items():
                assert hasse_invariant(q2, p) == val


def test_anisotropy_examples(four_squares, watson):
    assert is_anisotropic(watson, 7) is True
    assert is_anisotropic(four_squares, 3) is False
    assert is_anisotropic(four_squares, 2) is True


def test_anisotropy_only_at_ramified(small_corpus):
    for q in small_corpus[:5]:
        for p in (3, 5, 7, 11, 13):
            if (2 * q.disc) % p != 0:
                assert not is_anisotropic(q, p)


def test_depth_examples(four_squares, watson):
    assert anisotropy_depth(watson, 7).r_p == INFINITE
    assert anisotropy_depth(four_squares, 2).r_p == INFINITE
    report = anisotropy_depth(watson, 3)
    assert report.r_p == 0
    assert report.witness is not None


def test_depth_witness_properties(small_corpus, watson):
    for q in list(small_corpus[:5]) + [watson]:
        for p in (2, 3, 5, 7):
            report = anisotropy_depth(q, p)
            if report.anisotropic:
                assert report.r_p == INFINITE and report.witness is None
                continue
            level_ord = localcount.ordp(q.level, p) if q.level % p == 0 else 0
            assert 0 <= report.r_p <= level_ord
            big = 2 * (level_ord + 3)
            w = list(report.witness)
            assert any(x % p ** big for x in w) or any(w)
            assert q.value(w) % p ** big == 0
            # the witness is primitive: dividing by p would lower the depth
            assert any(x % p for x in w)
            # depth value is realized by the witness in Jordan coordinates
            split = jordan_decompose(q, p)
            binv = linalg.adjugate([list(r) for r in split.basis])
            detb = linalg.det([list(r) for r in split.basis])
            coords = [Fraction(s, 1) / detb
                      for s in linalg.mat_vec(binv, w)]
            vals = []
            off = 0
            for scale, gram in split.blocks:
                dim = len(gram)
                part = coords[off:off + dim]
                vord = min((_ord_frac(x, p) if x else 10 ** 9 for x in part),
                           default=10 ** 9)
                if vord < 10 ** 9:
                    vals.append(scale + vord)
                off += dim
            assert min(vals) == report.r_p


def test_depth_deterministic(watson):
    a = anisotropy_depth(watson, 3)
    b = anisotropy_depth(watson, 3)
    assert a == b


def test_min_precision(watson):
    assert min_precision(watson, 7) == localcount.ordp(2 * 784, 7) + 3
