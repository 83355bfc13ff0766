"""Eisenstein coefficients a_E(n) from local densities, and cuspidal residues.

a_E(n) = (4 pi^2 n / sqrt(D)) * prod_p beta_p(n).  The infinite product of
unramified factors collapses to 1/L(2, chi) times finitely many corrections,
so the only inexact ingredient is the L-value; everything else is rational.
When chi is trivial (square discriminant) even the L-value cancels and the
coefficient is an exact rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import mpmath

from . import localcount, padic
from .errors import PreconditionViolated
from .forms import QuadForm, factorize, kronecker_character
from .forms import represent_count as _represent_count


@dataclass(frozen=True)
class LValue:
    char_disc: int
    value: float
    error: float


@dataclass(frozen=True)
class EisensteinCoefficient:
    n: int
    value: float
    error: float
    rational_factor: Fraction  # a_E = rational_factor * pi^2 / (sqrt(D) L(2, chi))
    archimedean: float
    local_factors: dict

    def to_dict(self):
        return {
            "n": self.n,
            "a_e": self.value,
            "error": self.error,
            "rational_factor": f"{self.rational_factor.numerator}/{self.rational_factor.denominator}",
        }


@lru_cache(maxsize=None)
def dirichlet_L2(char_disc: int, tol: float = 1e-9) -> LValue:
    """L(2, chi) for the Kronecker character of char_disc, to within tol."""
    if tol <= 0:
        raise PreconditionViolated("tolerance must be positive")
    q = abs(char_disc)
    dps = max(30, int(-math.log10(tol)) + 15)
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for a in range(1, q + 1):
            chi = kronecker_character(char_disc, a)
            if chi:
                total += chi * mpmath.zeta(2, mpmath.mpf(a) / q)
        total /= q * q
        value = float(total)
    return LValue(char_disc=char_disc, value=value, error=tol)


def _relevant_primes(q: QuadForm, n: int):
    return sorted(set(factorize(2 * q.disc)) | set(factorize(n)))


def eisenstein_coeff(q: QuadForm, n: int, tol: float = 1e-9) -> EisensteinCoefficient:
    if n < 1:
        raise PreconditionViolated("coefficient index must be positive")
    disc = q.disc
    arch = 4 * math.pi ** 2 * n / math.sqrt(disc)
    primes = _relevant_primes(q, n)
    local = {}
    for p in primes:
        blocks = padic.jordan_blocks(q, p)
        local[p] = localcount.local_density(p, blocks, n)
    if any(v == 0 for v in local.values()):
        return EisensteinCoefficient(n, 0.0, 0.0, Fraction(0), arch, local)
    rational = Fraction(4 * n)
    for p, beta in local.items():
        chi = kronecker_character(q.char_disc, p)
        rational *= beta / (1 - Fraction(chi, p * p))
    if q.char_disc == 1:
        # trivial character: L(2, chi) = pi^2/6 and sqrt(D) is an integer
        root = isqrt(disc)
        assert root * root == disc
        exact = rational * 6 / root
        return EisensteinCoefficient(n, float(exact), 0.0, rational, arch, local)
    lval = dirichlet_L2(q.char_disc, tol)
    value = float(rational) * math.pi ** 2 / (math.sqrt(disc) * lval.value)
    err = abs(value) * lval.error / lval.value
    return EisensteinCoefficient(n, value, err, rational, arch, local)


def eisenstein_exact(q: QuadForm, n: int) -> Fraction:
    """Exact rational a_E(n); only defined when the character is trivial."""
    if q.char_disc != 1:
        raise PreconditionViolated("exact value needs a square discriminant")
    coeff = eisenstein_coeff(q, n)
    root = isqrt(q.disc)
    return coeff.rational_factor * 6 / root


def cuspidal_coeff(q: QuadForm, n: int, tol: float = 1e-9) -> float:
    """a_C(n) = r_Q(n) - a_E(n), same error bound as the Eisenstein part."""
    return _represent_count(q, n) - eisenstein_coeff(q, n, tol).value
