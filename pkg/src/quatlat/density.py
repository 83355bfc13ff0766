"""Local representation densities and the local solubility predicates.

Three independent routes to the same rational number: stabilized raw counts
(density_bruteforce), the good/zero/bad recursion (density_recursive) and
closed formulas where they apply (density_unramified, yang_good_density).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import localcount, padic
from .errors import PreconditionViolated
from .forms import QuadForm, factorize, kronecker_character

BRUTE = "BRUTE"
RECURSIVE = "RECURSIVE"
CLOSED = "CLOSED"

STRONG = "STRONG"
PRIMITIVE = "PRIMITIVE"
GENERAL = "GENERAL"


@dataclass(frozen=True)
class DensityValue:
    value: Fraction
    prime: int
    n: int
    method: str

    def __post_init__(self):
        assert self.value >= 0
        den = self.value.denominator
        while den % self.prime == 0:
            den //= self.prime
        assert den == 1, "density denominator must be a power of p"

    def to_dict(self):
        return {"p": self.prime, "n": self.n, "method": self.method,
                "beta": f"{self.value.numerator}/{self.value.denominator}"}


@dataclass(frozen=True)
class SolutionTypeCensus:
    prime: int
    k: int
    good: int
    zero: int
    bad_i: int
    bad_ii: int
    total: int

    def to_dict(self):
        return {"modulus": self.prime ** self.k, "good": self.good,
                "zero": self.zero, "bad_i": self.bad_i, "bad_ii": self.bad_ii,
                "total": self.total}


def ramified_primes(q: QuadForm):
    return sorted(factorize(2 * q.disc))


def density_bruteforce(q: QuadForm, n: int, p: int) -> DensityValue:
    if n < 1:
        raise PreconditionViolated("density target must be positive")
    blocks = padic.jordan_blocks(q, p)
    val = localcount.brute_density(p, blocks, n, q.disc)
    return DensityValue(val, p, n, BRUTE)


def density_recursive(q: QuadForm, n: int, p: int) -> DensityValue:
    if n < 1:
        raise PreconditionViolated("density target must be positive")
    blocks = padic.jordan_blocks(q, p)
    val = localcount.local_density(p, blocks, n)
    return DensityValue(val, p, n, RECURSIVE)


def census(q: QuadForm, n: int, p: int, k: int) -> SolutionTypeCensus:
    if k < 1:
        raise PreconditionViolated("census level must be at least 1")
    blocks = padic.jordan_blocks(q, p)
    vecs = localcount.class_vectors(p, k, blocks)
    idx = n % p ** k
    return SolutionTypeCensus(
        prime=p, k=k,
        good=vecs["good"][idx], zero=vecs["zero"][idx],
        bad_i=vecs["bad_i"][idx], bad_ii=vecs["bad_ii"][idx],
        total=vecs["total"][idx],
    )


def density_unramified(q: QuadForm, n: int, p: int) -> DensityValue:
    if q.level % p == 0:
        raise PreconditionViolated(f"p = {p} divides the level")
    if n % p:
        chi = kronecker_character(q.char_disc, p)
        return DensityValue(1 - Fraction(chi, p * p), p, n, CLOSED)
    return density_recursive(q, n, p)


def yang_good_density(q: QuadForm, n: int, p: int) -> DensityValue:
    """Closed unit-part formula for odd p and p coprime to n."""
    if p == 2:
        raise PreconditionViolated("closed formula needs an odd prime")
    if n % p == 0:
        raise PreconditionViolated("closed formula needs p coprime to n")
    blocks = padic.jordan_blocks(q, p)
    unit_coeffs = [g[0][0] // 2 for scale, g in blocks if scale == 0]
    dim1 = len(unit_coeffs)
    det1 = 1
    for c in unit_coeffs:
        det1 *= c
    eps = kronecker_character(-1, p)
    half = dim1 // 2
    if dim1 % 2 == 0:
        val = 1 - Fraction(eps ** half * kronecker_character(det1, p), p ** half)
    else:
        val = 1 + Fraction(eps ** half * kronecker_character(det1 * n, p), p ** half)
    return DensityValue(val, p, n, CLOSED)


def is_locally_represented(q: QuadForm, n: int) -> bool:
    """Positive local density at every ramified prime; automatic elsewhere."""
    if n < 1:
        raise PreconditionViolated("representation target must be positive")
    for p in ramified_primes(q):
        blocks = padic.jordan_blocks(q, p)
        if localcount.local_density(p, blocks, n) == 0:
            return False
    return True


def has_strong_local_solubility(q: QuadForm, n: int) -> bool:
    """Locally represented with good-type solutions at every ramified prime."""
    if not is_locally_represented(q, n):
        return False
    for p in ramified_primes(q):
        blocks = padic.jordan_blocks(q, p)
        if localcount.good_density(p, blocks, n) == 0:
            return False
    return True


def is_primitively_locally_represented(q: QuadForm, n: int) -> bool:
    """Some p-adic solution keeps a unit coordinate, at every ramified prime."""
    if not is_locally_represented(q, n):
        return False
    for p in ramified_primes(q):
        blocks = padic.jordan_blocks(q, p)
        parts = localcount.top_components(p, blocks, n)
        if parts["good"] + parts["bad_i"] + parts["bad_ii"] == 0:
            return False
    return True


def _ordp(n, p):
    return localcount.ordp(n, p) if n % p == 0 else 0


def density_lower_bound(q: QuadForm, n: int, p: int, condition: str) -> Fraction:
    """Guaranteed floor for the local density under the stated condition."""
    if condition == STRONG:
        if not has_strong_local_solubility(q, n):
            raise PreconditionViolated("strong local solubility does not hold")
        return Fraction(1, 4) if p == 2 else 1 - Fraction(1, p)
    if condition == PRIMITIVE:
        if not is_primitively_locally_represented(q, n):
            raise PreconditionViolated("primitive local representation does not hold")
        vd = _ordp(q.disc, p)
        if p == 2:
            return Fraction(1, 16) * Fraction(1, 2 ** ((vd + 1) // 2))
        return Fraction(1, p ** (vd // 2)) * (1 - Fraction(1, p))
    if condition == GENERAL:
        if not is_locally_represented(q, n):
            raise PreconditionViolated("n is not locally represented")
        report = padic.anisotropy_depth(q, p)
        vn = _ordp(n, p)
        depth = vn if report.anisotropic else min(report.r_p, vn)
        if p == 2:
            return Fraction(1, 2 ** (1 + depth))
        return (1 - Fraction(1, p)) * Fraction(1, p ** depth)
    raise PreconditionViolated(f"unknown condition {condition!r}")
