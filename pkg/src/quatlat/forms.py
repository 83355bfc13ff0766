"""Quaternary quadratic forms: parsing, invariants, reduction, enumeration.

A form Q(x) = (1/2) x^T A x is carried by its Gram matrix A (symmetric,
integer, even diagonal, positive definite).  Enumeration is exact rational
completing-the-square; no floating point enters any count.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt

from . import linalg
from .errors import NotIntegral, NotPositiveDefinite, ResourceLimit

DEFAULT_ENUM_CAP = 10 ** 8

COEFF_ORDER = ("c11", "c12", "c13", "c14", "c22", "c23", "c24", "c33", "c34", "c44")


def _resolve_cap(cap):
    if cap is not None:
        return int(cap)
    env = os.environ.get("QUATLAT_ENUM_CAP")
    if env is not None:
        return int(env)
    return DEFAULT_ENUM_CAP


@dataclass(frozen=True)
class QuadForm:
    """An integer-valued positive-definite quaternary form via its Gram matrix."""

    gram: tuple

    def __post_init__(self):
        g = self.gram
        if len(g) != 4 or any(len(row) != 4 for row in g):
            raise NotIntegral("Gram matrix must be 4x4")
        for i in range(4):
            for j in range(4):
                if not isinstance(g[i][j], int):
                    raise NotIntegral("Gram entries must be integers")
                if g[i][j] != g[j][i]:
                    raise NotIntegral("Gram matrix must be symmetric")
            if g[i][i] % 2:
                raise NotIntegral("Gram diagonal must be even")
        if not linalg.is_positive_definite([list(r) for r in g]):
            raise NotPositiveDefinite("form is not positive definite")

    @cached_property
    def coeffs(self):
        """Upper-triangle coefficients of Q = sum c_ij x_i x_j, row-major."""
        g = self.gram
        out = []
        for i in range(4):
            out.append(g[i][i] // 2)
            out.extend(g[i][i + 1:])
        return tuple(out)

    @cached_property
    def is_primitive(self):
        return gcd(*self.coeffs) == 1

    @cached_property
    def disc(self):
        return linalg.det([list(r) for r in self.gram])

    @cached_property
    def level(self):
        d = self.disc
        adj = linalg.adjugate([list(r) for r in self.gram])
        n = 1
        for i in range(4):
            for j in range(4):
                den = d // gcd(adj[i][j], d) if adj[i][j] else 1
                n = n * den // gcd(n, den)
        if any((n * adj[i][i] // d) % 2 for i in range(4)):
            n *= 2
        return n

    @cached_property
    def char_disc(self):
        return fundamental_discriminant(self.disc)

    def value(self, x):
        """Q(x) for an integer vector x."""
        acc = 0
        g = self.gram
        for i in range(4):
            acc += g[i][i] * x[i] * x[i]
            for j in range(i + 1, 4):
                acc += 2 * g[i][j] * x[i] * x[j]
        assert acc % 2 == 0
        return acc // 2


@dataclass(frozen=True)
class FormInvariants:
    disc: int
    level: int
    char_disc: int

    def to_dict(self):
        return {"disc": self.disc, "level": self.level, "char_disc": self.char_disc}


@dataclass(frozen=True)
class ReducedForm:
    form: QuadForm
    transform: tuple
    outer_coeffs: tuple
    offdiag: tuple


def parse_form(coeffs) -> QuadForm:
    """Build a form from the ten coefficients c11,c12,...,c44 of its upper triangle."""
    vals = list(coeffs)
    if len(vals) != 10:
        raise NotIntegral("expected 10 coefficients")
    ints = []
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, int):
            if isinstance(v, Fraction) and v.denominator == 1:
                v = int(v)
            else:
                raise NotIntegral(f"coefficient {v!r} is not an integer")
        ints.append(v)
    c11, c12, c13, c14, c22, c23, c24, c33, c34, c44 = ints
    gram = (
        (2 * c11, c12, c13, c14),
        (c12, 2 * c22, c23, c24),
        (c13, c23, 2 * c33, c34),
        (c14, c24, c34, 2 * c44),
    )
    return QuadForm(gram)


def parse_form_string(text: str) -> QuadForm:
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError as exc:
        raise NotIntegral(f"bad form string {text!r}") from exc
    return parse_form(parts)


def format_form(q: QuadForm) -> str:
    return ",".join(str(c) for c in q.coeffs)


def invariants(q: QuadForm) -> FormInvariants:
    return FormInvariants(q.disc, q.level, q.char_disc)


def discriminant(q: QuadForm) -> int:
    return q.disc


def level(q: QuadForm) -> int:
    return q.level


# ---------------------------------------------------------------------------
# elementary number theory


def factorize(n: int) -> dict:
    """Prime factorization by trial division; adequate for form invariants."""
    n = abs(int(n))
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisor_count(n: int) -> int:
    if n < 1:
        raise NotIntegral("divisor_count needs a positive integer")
    out = 1
    for e in factorize(n).values():
        out *= e + 1
    return out


def divisors(n: int):
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt(d)) for positive d."""
    if d <= 0:
        raise NotPositiveDefinite("expected a positive discriminant")
    s = 1
    for p, e in factorize(d).items():
        if e % 2:
            s *= p
    return s if s % 4 == 1 else 4 * s


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_character(d: int, m: int) -> int:
    """Kronecker symbol (d|m) with the standard conventions."""
    d, m = int(d), int(m)
    if m == 0:
        return 1 if d in (1, -1) else 0
    res = 1
    if m < 0:
        m = -m
        if d < 0:
            res = -res
    while m % 2 == 0:
        m //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            res = -res
    return res * _jacobi(d, m)


# ---------------------------------------------------------------------------
# reduction

_REDUCE_CACHE: dict = {}


def reduce_form(q: QuadForm) -> ReducedForm:
    """Exact lattice reduction of the Gram matrix.

    Size reduction keeps every |m_ij| <= 1/2; adjacent swaps enforce the
    projected-length condition, so writing the form with the pure square on
    the first variable the outer coefficients satisfy a_i >= (3/4) a_{i+1}.
    """
    cached = _REDUCE_CACHE.get(q.gram)
    if cached is not None:
        return cached
    g = [list(row) for row in q.gram]
    t = linalg.identity(4)

    def col_update(j, i, c):
        # basis_j -= c * basis_i
        for r in range(4):
            g[r][j] -= c * g[r][i]
        for r in range(4):
            g[j][r] -= c * g[i][r]
        for r in range(4):
            t[r][j] -= c * t[r][i]

    def swap(i, j):
        for r in range(4):
            g[r][i], g[r][j] = g[r][j], g[r][i]
        g[i], g[j] = g[j], g[i]
        for r in range(4):
            t[r][i], t[r][j] = t[r][j], t[r][i]

    for _ in range(20000):
        f = [[Fraction(g[i][j], 2) for j in range(4)] for i in range(4)]
        d, mu = linalg.ldl(f)
        action = None
        for j in range(1, 4):
            for i in range(j - 1, -1, -1):
                if abs(mu[i][j]) > Fraction(1, 2):
                    action = ("size", i, j)
                    break
            if action:
                break
        if action is None:
            for i in range(3):
                if d[i + 1] + mu[i][i + 1] ** 2 * d[i] < d[i]:
                    action = ("swap", i, i + 1)
                    break
        if action is None:
            break
        if action[0] == "size":
            _, i, j = action
            col_update(j, i, round(mu[i][j]))
        else:
            swap(action[1], action[2])
    else:
        raise ResourceLimit("reduction did not converge")

    form = QuadForm(tuple(tuple(row) for row in g))
    # report in the convention that puts the pure square on the first variable
    outer = tuple(d[3 - k] for k in range(4))
    offdiag = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            offdiag[i][j] = mu[3 - j][3 - i]
    red = ReducedForm(
        form=form,
        transform=tuple(tuple(row) for row in t),
        outer_coeffs=outer,
        offdiag=tuple(tuple(row) for row in offdiag),
    )
    _REDUCE_CACHE[q.gram] = red
    return red


reduce = reduce_form


# ---------------------------------------------------------------------------
# exact enumeration

_ENUM_CACHE: dict = {}


def _floor_sqrt_frac(fr: Fraction) -> int:
    return isqrt(fr.numerator * fr.denominator) // fr.denominator


def _floor_plus_sqrt(c: Fraction, r2: Fraction) -> int:
    """floor(c + sqrt(r2)) for rational c and r2 >= 0, exactly."""
    k = math.floor(c) + _floor_sqrt_frac(r2)
    while True:
        step = k + 1 - c
        if step <= 0 or step * step <= r2:
            k += 1
        else:
            return k


def _sym_range(c: Fraction, r2: Fraction):
    """All integers x with (x + c)^2 <= r2."""
    if r2 < 0:
        return range(0)
    hi = _floor_plus_sqrt(-c, r2)
    lo = -_floor_plus_sqrt(c, r2)
    return range(lo, hi + 1)


def _exact_sqrt(fr: Fraction):
    a = isqrt(fr.numerator)
    b = isqrt(fr.denominator)
    if a * a == fr.numerator and b * b == fr.denominator:
        return Fraction(a, b)
    return None


def _enum_data(q: QuadForm):
    data = _ENUM_CACHE.get(q.gram)
    if data is not None:
        return data
    red = reduce_form(q)
    # reduced order puts the largest outer coefficient on the outermost loop
    g = red.form.gram
    f = [[Fraction(g[i][j], 2) for j in range(4)] for i in range(4)]
    d, mu = linalg.ldl(f)
    diagonal = all(mu[i][j] == 0 for i in range(4) for j in range(i + 1, 4))
    if diagonal and all(x.denominator == 1 for x in d):
        data = ("diag", tuple(int(x) for x in d))
    else:
        data = ("general", tuple(d), tuple(tuple(row) for row in mu))
    _ENUM_CACHE[q.gram] = data
    return data


def _counts_diag(d, bound, cap):
    d0, d1, d2, d3 = d
    counts = [0] * (bound + 1)
    visits = 0
    for x3 in range(isqrt(bound // d3) + 1):
        v3 = d3 * x3 * x3
        m3 = 1 if x3 == 0 else 2
        r3 = bound - v3
        for x2 in range(isqrt(r3 // d2) + 1):
            v2 = v3 + d2 * x2 * x2
            m2 = m3 * (1 if x2 == 0 else 2)
            r2 = bound - v2
            for x1 in range(isqrt(r2 // d1) + 1):
                v1 = v2 + d1 * x1 * x1
                m1 = m2 * (1 if x1 == 0 else 2)
                r1 = bound - v1
                top = isqrt(r1 // d0)
                visits += top + 1
                if visits > cap:
                    raise ResourceLimit("enumeration budget exceeded")
                counts[v1] += m1
                for x0 in range(1, top + 1):
                    counts[v1 + d0 * x0 * x0] += 2 * m1
    return counts


def _counts_general(d, mu, bound, cap):
    d0, d1, d2, d3 = d
    bnd = Fraction(bound)
    counts = [0] * (bound + 1)
    visits = 0
    for x3 in _sym_range(Fraction(0), bnd / d3):
        v3 = d3 * x3 * x3
        c2 = mu[2][3] * x3
        for x2 in _sym_range(c2, (bnd - v3) / d2):
            v2 = v3 + d2 * (x2 + c2) ** 2
            c1 = mu[1][2] * x2 + mu[1][3] * x3
            for x1 in _sym_range(c1, (bnd - v2) / d1):
                v1 = v2 + d1 * (x1 + c1) ** 2
                c0 = mu[0][1] * x1 + mu[0][2] * x2 + mu[0][3] * x3
                for x0 in _sym_range(c0, (bnd - v1) / d0):
                    visits += 1
                    if visits > cap:
                        raise ResourceLimit("enumeration budget exceeded")
                    val = v1 + d0 * (x0 + c0) ** 2
                    assert val.denominator == 1
                    counts[int(val)] += 1
    return counts


def theta_coeffs(q: QuadForm, bound: int, cap=None):
    """[r_Q(0), ..., r_Q(bound)] by one exact sweep of the ellipsoid Q <= bound."""
    if bound < 0:
        raise NotIntegral("bound must be nonnegative")
    if bound == 0:
        return [1]
    budget = _resolve_cap(cap)
    data = _enum_data(q)
    if data[0] == "diag":
        counts = _counts_diag(data[1], bound, budget)
    else:
        counts = _counts_general(data[1], data[2], bound, budget)
    return counts


def _count_single_diag(d, n, cap):
    d0, d1, d2, d3 = d
    total = 0
    visits = 0
    for x3 in range(isqrt(n // d3) + 1):
        v3 = d3 * x3 * x3
        m3 = 1 if x3 == 0 else 2
        r3 = n - v3
        for x2 in range(isqrt(r3 // d2) + 1):
            v2 = v3 + d2 * x2 * x2
            m2 = m3 * (1 if x2 == 0 else 2)
            r2 = n - v2
            for x1 in range(isqrt(r2 // d1) + 1):
                visits += 1
                if visits > cap:
                    raise ResourceLimit("enumeration budget exceeded")
                rem = r2 - d1 * x1 * x1
                m1 = m2 * (1 if x1 == 0 else 2)
                if rem % d0 == 0:
                    t = rem // d0
                    r = isqrt(t)
                    if r * r == t:
                        total += m1 * (1 if r == 0 else 2)
    return total


def _count_single_general(d, mu, n, cap):
    d0, d1, d2, d3 = d
    nn = Fraction(n)
    total = 0
    visits = 0
    for x3 in _sym_range(Fraction(0), nn / d3):
        v3 = d3 * x3 * x3
        c2 = mu[2][3] * x3
        for x2 in _sym_range(c2, (nn - v3) / d2):
            v2 = v3 + d2 * (x2 + c2) ** 2
            c1 = mu[1][2] * x2 + mu[1][3] * x3
            for x1 in _sym_range(c1, (nn - v2) / d1):
                visits += 1
                if visits > cap:
                    raise ResourceLimit("enumeration budget exceeded")
                v1 = v2 + d1 * (x1 + c1) ** 2
                c0 = mu[0][1] * x1 + mu[0][2] * x2 + mu[0][3] * x3
                t = (nn - v1) / d0
                if t < 0:
                    continue
                s = _exact_sqrt(t)
                if s is None:
                    continue
                for root in {-c0 + s, -c0 - s}:
                    if root.denominator == 1:
                        total += 1
    return total


def represent_count(q: QuadForm, n: int, cap=None) -> int:
    """Exact number of integer vectors with Q(x) = n."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    budget = _resolve_cap(cap)
    data = _enum_data(q)
    if data[0] == "diag":
        return _count_single_diag(data[1], n, budget)
    return _count_single_general(data[1], data[2], n, budget)
