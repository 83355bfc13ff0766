"""p-adic structure of a form: Jordan splitting, Hilbert symbols, anisotropy.

The anisotropy depth is computed by an exact sweep over (block, valuation)
targets, each decided by representability of the complementary form; no blind
search over residue vectors is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg, localcount
from .errors import PreconditionViolated, PrecisionTooLow
from .forms import QuadForm, kronecker_character

INFINITE = math.inf


@dataclass(frozen=True)
class JordanSplitting:
    prime: int
    precision: int
    blocks: tuple  # ((scale, gram), ...) sorted by scale
    basis: tuple  # rational change-of-basis columns aligned with the blocks

    @property
    def scales(self):
        return tuple(b[0] for b in self.blocks)


@dataclass(frozen=True)
class AnisotropyReport:
    prime: int
    anisotropic: bool
    r_p: object  # int or math.inf
    witness: tuple | None

    def to_dict(self):
        return {
            "p": self.prime,
            "anisotropic": self.anisotropic,
            "r_p": "inf" if self.r_p == INFINITE else int(self.r_p),
            "witness": list(self.witness) if self.witness is not None else None,
        }


def _frac_ord(x: Fraction, p: int) -> int:
    if x == 0:
        return 10 ** 9
    return localcount.ordp(x.numerator, p) - localcount.ordp(x.denominator, p)


def min_precision(q: QuadForm, p: int) -> int:
    return localcount.ordp(2 * q.disc, p) + 3


def _mod_reduce(x: Fraction, p: int, k: int) -> int:
    """Representative of a p-integral rational modulo p^k."""
    mod = p ** k
    den = x.denominator
    assert den % p != 0
    return x.numerator * pow(den, -1, mod) % mod


def jordan_decompose(q: QuadForm, p: int, precision: int | None = None) -> JordanSplitting:
    """Split q over Z_p into scaled unit blocks, reported modulo p^precision."""
    floor_prec = min_precision(q, p)
    if precision is None:
        precision = floor_prec
    if precision < floor_prec:
        raise PrecisionTooLow(f"need precision >= {floor_prec} at p = {p}")
    m = [[Fraction(v) for v in row] for row in q.gram]
    basis = [[Fraction(1) if i == j else Fraction(0) for j in range(4)] for i in range(4)]

    def add_multiple(k, i, c):
        # b_k += c * b_i ; keeps m symmetric
        for l in range(4):
            m[l][k] += c * m[l][i]
        for l in range(4):
            m[k][l] += c * m[i][l]
        for l in range(4):
            basis[l][k] += c * basis[l][i]

    remaining = [0, 1, 2, 3]
    groups = []  # lists of coordinate indices, in extraction order
    while remaining:
        vmin = min(_frac_ord(m[i][j], p) for i in remaining for j in remaining)
        diag = [i for i in remaining if _frac_ord(m[i][i], p) == vmin]
        if diag:
            i = diag[0]
            for k in remaining:
                if k != i and m[i][k] != 0:
                    add_multiple(k, i, -m[i][k] / m[i][i])
            groups.append([i])
            remaining.remove(i)
            continue
        pair = None
        for i in remaining:
            for j in remaining:
                if i < j and _frac_ord(m[i][j], p) == vmin:
                    pair = (i, j)
                    break
            if pair:
                break
        i, j = pair
        if p != 2:
            add_multiple(i, j, Fraction(1))
            continue
        bdet = m[i][i] * m[j][j] - m[i][j] ** 2
        for k in remaining:
            if k in (i, j):
                continue
            alpha = -(m[j][j] * m[i][k] - m[i][j] * m[j][k]) / bdet
            beta = -(m[i][i] * m[j][k] - m[i][j] * m[i][k]) / bdet
            if alpha:
                add_multiple(k, i, alpha)
            if beta:
                add_multiple(k, j, beta)
        groups.append([i, j])
        remaining.remove(i)
        remaining.remove(j)

    blocks = []
    for grp in groups:
        if len(grp) == 1:
            g = m[grp[0]][grp[0]]
            v = _frac_ord(g, p)
            scale = v - 1 if p == 2 else v
            unit = [[g / Fraction(p) ** scale]]
        else:
            i, j = grp
            v = min(_frac_ord(m[a][b], p) for a in grp for b in grp)
            scale = v
            unit = [[m[a][b] / Fraction(p) ** scale for b in grp] for a in grp]
        blocks.append((scale, unit, grp))
    blocks.sort(key=lambda b: b[0])

    out_blocks = []
    order = []
    for scale, unit, grp in blocks:
        rows = []
        for a in range(len(unit)):
            row = []
            for b in range(len(unit)):
                entry = _mod_reduce(unit[a][b], p, precision)
                if p != 2 and a == b and entry % 2:
                    entry += p ** precision  # keep the reported diagonal even
                row.append(entry)
            rows.append(tuple(row))
        out_blocks.append((scale, tuple(rows)))
        order.extend(grp)
    basis_cols = tuple(tuple(basis[r][c] for c in order) for r in range(4))
    return JordanSplitting(prime=p, precision=precision,
                           blocks=tuple(out_blocks), basis=basis_cols)


def jordan_blocks(q: QuadForm, p: int):
    """Blocks only, as consumed by the counting engine."""
    return jordan_decompose(q, p).blocks


# ---------------------------------------------------------------------------
# Hilbert symbols and anisotropy


def hilbert_symbol(a, b, p) -> int:
    """(a, b)_p = 1 iff z^2 = a x^2 + b y^2 has a nontrivial Q_p (or R) solution."""
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 or b == 0:
        raise PreconditionViolated("Hilbert symbol needs nonzero arguments")
    ai = a.numerator * a.denominator  # same square class, integral
    bi = b.numerator * b.denominator
    if p == INFINITE:
        return -1 if ai < 0 and bi < 0 else 1
    alpha = localcount.ordp(ai, p)
    beta = localcount.ordp(bi, p)
    u = ai // p ** alpha
    v = bi // p ** beta
    if p != 2:
        res = 1
        if alpha * beta % 2:
            res *= kronecker_character(-1, p)
        if beta % 2:
            res *= kronecker_character(u, p)
        if alpha % 2:
            res *= kronecker_character(v, p)
        return res
    eps_u = (u - 1) // 2
    eps_v = (v - 1) // 2
    omega_u = (u * u - 1) // 8
    omega_v = (v * v - 1) // 8
    expo = eps_u * eps_v + alpha * omega_v + beta * omega_u
    return -1 if expo % 2 else 1


def rational_diagonal(q: QuadForm):
    """Diagonal coefficients of q over Q (square classes as integers)."""
    f = [[Fraction(q.gram[i][j], 2) for j in range(4)] for i in range(4)]
    d, _ = linalg.ldl(f)
    return tuple(x.numerator * x.denominator for x in d)


def hasse_invariant(q: QuadForm, p) -> int:
    diag = rational_diagonal(q)
    res = 1
    for i in range(4):
        for j in range(i + 1, 4):
            res *= hilbert_symbol(diag[i], diag[j], p)
    return res


def _is_square_qp(x: int, p: int) -> bool:
    v = localcount.ordp(x, p)
    if v % 2:
        return False
    u = x // p ** v
    if p == 2:
        return u % 8 == 1
    return kronecker_character(u, p) == 1


def is_anisotropic(q: QuadForm, p: int) -> bool:
    """True iff Q(x) = 0 has only the trivial Z_p solution."""
    if not _is_square_qp(q.disc, p):
        return False
    return hasse_invariant(q, p) != hilbert_symbol(-1, -1, p)


# ---------------------------------------------------------------------------
# anisotropy depth


def _block_form_coeff(gram):
    return gram[0][0] // 2


def _rest_blocks(blocks, drop):
    return tuple(b for t, b in enumerate(blocks) if t != drop)


def _depth_condition(p, blocks, idx, t):
    """Can a p-adic zero put a p^t-primitive vector into block idx?

    Returns the unit target class c (form value of the block part) on success,
    'isotropic' when the block itself has a primitive zero, else None.
    """
    scale, gram = blocks[idx]
    rest = _rest_blocks(blocks, idx)
    if len(gram) == 1:
        c = _block_form_coeff(gram)
        target = -(p ** (scale + 2 * t)) * c
        if localcount.local_density(p, rest, target) > 0:
            return c
        return None
    detg = (gram[0][0] * gram[1][1] - gram[0][1] ** 2) % 8
    if detg == 7:
        return "isotropic"
    for cls in (1, 3, 5, 7):
        target = -(2 ** (scale + 2 * t)) * cls
        if localcount.local_density(p, rest, target) > 0:
            return cls
    return None


def _lift_block_solution(gram, target, prec):
    """Primitive (x, y) with a x^2 + b x y + c y^2 = target mod 2^prec."""
    a, b, c = gram[0][0] // 2, gram[0][1], gram[1][1] // 2
    blocks = ((0, gram),)
    start = None
    for x in range(8):
        for y in range(8):
            if (x % 2 or y % 2) and (a * x * x + b * x * y + c * y * y - target) % 8 == 0:
                start = [x, y]
                break
        if start:
            break
    assert start is not None
    return localcount._newton_lift(2, blocks, start, target, prec)


def anisotropy_depth(q: QuadForm, p: int) -> AnisotropyReport:
    """How deep every p-adic zero must sit in the scaled block structure."""
    if is_anisotropic(q, p):
        return AnisotropyReport(p, True, INFINITE, None)
    split = jordan_decompose(q, p)
    blocks = split.blocks
    level_ord = localcount.ordp(q.level, p) if q.level % p == 0 else 0
    big = 2 * (level_ord + 3)  # witness precision target

    for s in range(level_ord + 1):
        for idx, (scale, gram) in enumerate(blocks):
            if scale > s:
                continue
            t = s - scale
            got = _depth_condition(p, blocks, idx, t)
            if got is None:
                continue
            witness = _assemble_witness(p, blocks, idx, t, got, big)
            orig = _to_original(split, witness, p, big)
            return AnisotropyReport(p, False, s, tuple(orig))
    raise AssertionError("isotropic form with no depth witness")


def _assemble_witness(p, blocks, idx, t, got, big):
    spans = localcount.block_spans(blocks)
    scale, gram = blocks[idx]
    x = [0] * localcount.total_dim(blocks)
    rest = _rest_blocks(blocks, idx)
    rest_idx = [i for k, span in enumerate(spans) if k != idx for i in span]
    if got == "isotropic":
        pair = _isotropic_pair(gram, big + scale + 2 * t + 2)
        x[spans[idx][0]] = (p ** t) * pair[0]
        x[spans[idx][1]] = (p ** t) * pair[1]
        assert localcount.form_value(blocks, x, p) % p ** big == 0
        return x
    if len(gram) == 1:
        x[spans[idx][0]] = p ** t
        target = -(p ** (scale + 2 * t)) * got
    else:
        pair = _lift_block_solution(gram, got, big + 2)
        x[spans[idx][0]] = (p ** t) * pair[0]
        x[spans[idx][1]] = (p ** t) * pair[1]
        target = -(p ** (scale + 2 * t)) * got
    if target != 0:
        w = localcount.find_representation(p, rest, target, big + 2)
        for i, val in zip(rest_idx, w):
            x[i] = val
    assert localcount.form_value(blocks, x, p) % p ** big == 0
    return x


def _isotropic_pair(gram, prec):
    """Primitive zero of a hyperbolic 2-adic unit block, to 2^prec."""
    a, b, c = gram[0][0] // 2, gram[0][1], gram[1][1] // 2
    # one of a, c is even since the block is hyperbolic
    if a % 2 == 0:
        # solve a + b y + c y^2 = 0 by Newton from y = 0 (derivative b is odd)
        y, mod = 0, 2 ** (prec + 2)
        for _ in range(prec + 4):
            err = a + b * y + c * y * y
            if err % 2 ** prec == 0:
                return [1, y % 2 ** prec]
            deriv = b + 2 * c * y
            y = (y - err * pow(deriv, -1, mod)) % mod
        raise AssertionError("hyperbolic block failed to produce a zero")
    x, mod = 0, 2 ** (prec + 2)
    for _ in range(prec + 4):
        err = c + b * x + a * x * x
        if err % 2 ** prec == 0:
            return [x % 2 ** prec, 1]
        deriv = b + 2 * a * x
        x = (x - err * pow(deriv, -1, mod)) % mod
    raise AssertionError("hyperbolic block failed to produce a zero")


def _to_original(split: JordanSplitting, x, p, big):
    out = []
    for r in range(4):
        acc = Fraction(0)
        for c in range(4):
            acc += split.basis[r][c] * x[c]
        out.append(_mod_reduce(acc, p, big))
    return out
