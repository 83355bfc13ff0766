"""The finite quadratic module L'/L, cusp combinatorics and rescaled lattices.

Everything except petersson_bound is exact rational arithmetic end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .errors import PreconditionViolated
from .forms import QuadForm, divisors, factorize

__all__ = [
    "DiscGroup", "CuspDatum", "CosetResult", "RescaledLattice",
    "smith_normal_form", "disc_group", "subgroup_sizes", "dcstar_coset",
    "rescaled_lattice", "cusps", "cusp_table", "cusp_sum", "g_of_c",
    "h_of_p", "gamma0_index", "petersson_bound",
]

smith_normal_form = linalg.smith_normal_form


@dataclass(frozen=True)
class DiscGroup:
    factors: tuple  # invariant factors d1 | d2 | d3 | d4
    generators: tuple  # rational 4-vectors in the dual lattice
    bilinear: tuple  # generators' pairings in Q/Z (4x4 Fractions in [0,1))
    quadratic: tuple  # Q(g_i) mod 1

    @property
    def order(self):
        out = 1
        for d in self.factors:
            out *= d
        return out

    @property
    def exponent(self):
        return self.factors[-1]


@dataclass(frozen=True)
class CosetResult:
    coords: tuple  # representative in generator coordinates
    vector: tuple  # representative as a rational 4-vector
    equal: bool  # whether the shifted coset coincides with the plain image


@dataclass(frozen=True)
class CuspDatum:
    denominator: int
    multiplicity: int
    width: int
    image_size: int | None = None  # |D^c|
    kernel_size: int | None = None  # |D_c|
    coset_equal: bool | None = None
    r_disc: int | None = None

    def to_dict(self):
        return {"c": self.denominator, "multiplicity": self.multiplicity,
                "width": self.width, "image_size": self.image_size,
                "kernel_size": self.kernel_size, "coset_equal": self.coset_equal,
                "r_disc": self.r_disc}


@dataclass(frozen=True)
class RescaledLattice:
    basis: tuple  # rational columns spanning the intermediate lattice
    gram: tuple  # integer Gram of the rescaled form, even diagonal
    scale: int  # 4 * width
    index: int  # [T : L]
    disc: int


def _frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def disc_group(q: QuadForm) -> DiscGroup:
    a = [list(r) for r in q.gram]
    u, s, _ = linalg.smith_normal_form(a)
    d = [s[i][i] for i in range(4)]
    ua = linalg.mat_mul(u, a)
    deta = linalg.det(ua)
    adj = linalg.adjugate(ua)
    gens = tuple(
        tuple(Fraction(adj[r][i], deta) for r in range(4)) for i in range(4)
    )
    bil = []
    for i in range(4):
        row = []
        gi_a = [sum(q.gram[r][t] * gens[i][t] for t in range(4)) for r in range(4)]
        for j in range(4):
            row.append(_frac_mod1(sum(gi_a[r] * gens[j][r] for r in range(4))))
        bil.append(tuple(row))
    quad = []
    for i in range(4):
        gi_a = [sum(q.gram[r][t] * gens[i][t] for t in range(4)) for r in range(4)]
        val = sum(gi_a[r] * gens[i][r] for r in range(4)) / 2
        quad.append(_frac_mod1(val))
    return DiscGroup(factors=tuple(d), generators=gens,
                     bilinear=tuple(bil), quadratic=tuple(quad))


def subgroup_sizes(group: DiscGroup, c: int):
    """(|D^c|, |D_c|) from the invariant factors."""
    image = 1
    kernel = 1
    for d in group.factors:
        g = gcd(c, d)
        kernel *= g
        image *= d // g
    return image, kernel


def _in_image(group: DiscGroup, coords, c) -> bool:
    return all(x % gcd(c, d) == 0 for x, d in zip(coords, group.factors))


def dcstar_coset(group: DiscGroup, q: QuadForm, c: int) -> CosetResult:
    """Representative of the shifted coset {a : c g^2/2 + a g = 0 for g in D_c}."""
    rows = []
    rhs = []
    torsion_orders = [gcd(c, d) for d in group.factors]
    for i, (d, g) in enumerate(zip(group.factors, torsion_orders)):
        if g == 1:
            continue
        m = d // g  # gamma_i = m * gen_i generates the c-torsion cyclic piece
        gamma = [m * x for x in group.generators[i]]
        gam_a = [sum(q.gram[r][t] * gamma[t] for t in range(4)) for r in range(4)]
        qgamma = sum(gam_a[r] * gamma[r] for r in range(4)) / 2
        row = []
        for j in range(4):
            row.append(sum(gam_a[r] * group.generators[j][r] for r in range(4)))
        rows.append(row)
        rhs.append(_frac_mod1(-c * qgamma))
    if not rows:
        return CosetResult(coords=(0, 0, 0, 0), vector=(Fraction(0),) * 4, equal=True)
    denom = 1
    for row, target in zip(rows, rhs):
        for x in row + [target]:
            denom = denom * x.denominator // gcd(denom, x.denominator)
    int_rows = [[int(x * denom) for x in row] for row in rows]
    int_rhs = [int(t * denom) for t in rhs]
    sol = linalg.solve_congruence(int_rows, int_rhs, denom)
    coords = tuple(x % d for x, d in zip(sol, group.factors))
    vector = tuple(
        _frac_mod1(sum(Fraction(coords[j]) * group.generators[j][r] for j in range(4)))
        for r in range(4)
    )
    return CosetResult(coords=coords, vector=vector,
                       equal=_in_image(group, coords, c))


def gamma0_index(n: int) -> int:
    idx = Fraction(n)
    for p in factorize(n):
        idx *= 1 + Fraction(1, p)
    assert idx.denominator == 1
    return int(idx)


def cusp_width(n: int, c: int) -> int:
    return n // gcd(c * c, n)


def cusps(n: int):
    """Cusp data of level n: denominator, multiplicity, width."""
    if n < 1:
        raise PreconditionViolated("level must be positive")
    out = []
    for c in divisors(n):
        mult = _euler_phi(gcd(c, n // c))
        out.append(CuspDatum(denominator=c, multiplicity=mult,
                             width=cusp_width(n, c)))
    total = sum(d.multiplicity * d.width for d in out)
    assert total == gamma0_index(n)
    return out


def _euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def rescaled_lattice(q: QuadForm, c: int) -> RescaledLattice:
    """The lattice between L and L' spanned by the image and shifted classes,
    with its rescaled integral Gram."""
    n = q.level
    if n % c:
        raise PreconditionViolated("cusp denominator must divide the level")
    w = cusp_width(n, c)
    group = disc_group(q)
    coset = dcstar_coset(group, q, c)
    gens = [tuple(Fraction(1 if r == i else 0) for r in range(4)) for i in range(4)]
    for j in range(4):
        gens.append(tuple(c * x for x in group.generators[j]))
    if not coset.equal:
        gens.append(coset.vector)
    denom = 1
    for v in gens:
        for x in v:
            denom = denom * x.denominator // gcd(denom, x.denominator)
    cols = [[int(x * denom) for x in v] for v in gens]
    basis_int = linalg.hnf_basis(cols)
    basis = [[Fraction(basis_int[r][j], denom) for j in range(4)] for r in range(4)]
    covol = abs(linalg.det(basis))
    index = Fraction(1) / covol
    assert index.denominator == 1
    gram_t = [[sum(basis[r][i] * q.gram[r][t] * basis[t][j]
                   for r in range(4) for t in range(4))
               for j in range(4)] for i in range(4)]
    gram_r = [[4 * w * gram_t[i][j] for j in range(4)] for i in range(4)]
    for i in range(4):
        for j in range(4):
            if gram_r[i][j].denominator != 1:
                raise PreconditionViolated("rescaled Gram failed integrality")
        if int(gram_r[i][i]) % 2:
            raise PreconditionViolated("rescaled Gram diagonal must be even")
    gram_out = tuple(tuple(int(gram_r[i][j]) for j in range(4)) for i in range(4))
    return RescaledLattice(
        basis=tuple(tuple(col) for col in basis),
        gram=gram_out,
        scale=4 * w,
        index=int(index),
        disc=int(linalg.det([list(r) for r in gram_out])),
    )


def cusp_table(q: QuadForm):
    """Per-cusp invariants of the form's level, fully populated."""
    n = q.level
    group = disc_group(q)
    out = []
    for base in cusps(n):
        c = base.denominator
        image, kernel = subgroup_sizes(group, c)
        coset = dcstar_coset(group, q, c)
        resc = rescaled_lattice(q, c)
        out.append(CuspDatum(
            denominator=c, multiplicity=base.multiplicity, width=base.width,
            image_size=image, kernel_size=kernel,
            coset_equal=coset.equal, r_disc=resc.disc,
        ))
    return out


def cusp_sum(q: QuadForm) -> Fraction:
    """(1/index) * sum over cusps of width^2 / |D^c|, exactly."""
    n = q.level
    group = disc_group(q)
    total = Fraction(0)
    for datum in cusps(n):
        image, _ = subgroup_sizes(group, datum.denominator)
        total += Fraction(datum.multiplicity * datum.width ** 2, image)
    return total / gamma0_index(n)


def g_of_c(group: DiscGroup, n: int, c: int) -> Fraction:
    """Multiplicative cusp weight |D_c| phi(gcd(c, n/c)) / (c gcd(c, n/c))^2."""
    _, kernel = subgroup_sizes(group, c)
    g = gcd(c, n // c)
    return Fraction(kernel * _euler_phi(g), c * c * g * g)


def h_of_p(group: DiscGroup, n: int, p: int) -> Fraction:
    """Local cusp-sum factor at an odd prime dividing the level."""
    if p == 2:
        raise PreconditionViolated("local factor is only defined for odd p")
    if n % p:
        raise PreconditionViolated("p must divide the level")
    exps = sorted(_ordp(d, p) for d in group.factors)
    if exps[0] != 0:
        raise PreconditionViolated("odd part of the group has rank at most 3")
    a1, a2, a3 = exps[1], exps[2], exps[3]
    if a3 != _ordp(n, p):
        raise PreconditionViolated("level valuation does not match the group")
    lead = Fraction(p, p + 1) * Fraction(1, p ** (a1 + a2))
    tail = Fraction(p, p - 1) + Fraction(1, p * p - 1)
    if 2 * a1 <= a3:
        bracket = a1 + tail
    else:
        bracket = Fraction(p ** (2 * a1 - a3)) * (1 + Fraction(a1 - 1, p)) + tail
    return lead * (1 + Fraction(p - 1, p) * bracket)


def _ordp(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def petersson_bound(q: QuadForm, eps: float = 0.0) -> float:
    """max{(N^2 D)^(1/4+eps), N^(1+eps)} with implied constant 1."""
    if eps < 0:
        raise PreconditionViolated("epsilon must be nonnegative")
    n, d = q.level, q.disc
    return max((n * n * d) ** (0.25 + eps), n ** (1.0 + eps))
