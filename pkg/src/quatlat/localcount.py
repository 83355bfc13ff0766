"""Blockwise solution counting modulo prime powers and exact local densities.

A p-adically split form is a tuple of blocks (scale, gram): the form is the
orthogonal sum of p^scale * (unit block).  Counting Q(x) = t (mod p^k) is done
per block and combined by cyclic convolution, so the cost is polynomial in p^k
rather than p^(4k).  Densities follow the good/zero/bad classification with
exact reduction maps; every division is exact rational arithmetic.
"""

import itertools
from fractions import Fraction

from .errors import PreconditionViolated, ResourceLimit

_VEC_CACHE: dict = {}
_DENS_CACHE: dict = {}
_GOOD_CACHE: dict = {}


def clear_caches():
    _VEC_CACHE.clear()
    _DENS_CACHE.clear()
    _GOOD_CACHE.clear()


def total_dim(blocks):
    return sum(len(b[1]) for b in blocks)


def block_spans(blocks):
    """Coordinate index ranges of each block, in order."""
    spans = []
    off = 0
    for _, gram in blocks:
        spans.append(range(off, off + len(gram)))
        off += len(gram)
    return spans


def scale_classes(blocks):
    """Coordinate index sets at scale 0, scale 1 and scale >= 2."""
    i0, i1, i2 = set(), set(), set()
    for span, (scale, _) in zip(block_spans(blocks), blocks):
        tgt = i0 if scale == 0 else (i1 if scale == 1 else i2)
        tgt.update(span)
    return frozenset(i0), frozenset(i1), frozenset(i2)


def ordp(n, p):
    if n == 0:
        raise PreconditionViolated("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _block_value(scale, gram, x, p):
    acc = 0
    d = len(gram)
    for i in range(d):
        acc += gram[i][i] * x[i] * x[i]
        for j in range(i + 1, d):
            acc += 2 * gram[i][j] * x[i] * x[j]
    return p ** scale * (acc // 2)


def form_value(blocks, x, p):
    """Value of the split form at an integer vector (block coordinates)."""
    acc = 0
    for span, (scale, gram) in zip(block_spans(blocks), blocks):
        acc += _block_value(scale, gram, [x[i] for i in span], p)
    return acc


def gradient(blocks, x, p):
    out = []
    for span, (scale, gram) in zip(block_spans(blocks), blocks):
        sub = [x[i] for i in span]
        for i in range(len(gram)):
            out.append(p ** scale * sum(gram[i][j] * sub[j] for j in range(len(gram))))
    return out


# ---------------------------------------------------------------------------
# count vectors


def _cyc_mul(u, w, length):
    """Cyclic convolution of nonnegative integer vectors via integer packing."""
    mu = max(u)
    mw = max(w)
    if mu == 0 or mw == 0:
        return [0] * length
    slot_bits = (mu * mw * length).bit_length() + 1
    nbytes = (slot_bits + 7) // 8
    pu = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in u), "little")
    pw = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in w), "little")
    raw = (pu * pw).to_bytes(2 * length * nbytes, "little")
    out = [0] * length
    for t in range(2 * length - 1):
        chunk = int.from_bytes(raw[t * nbytes:(t + 1) * nbytes], "little")
        if chunk:
            out[t % length] += chunk
    return out


def _vec2_hyperbolic(k):
    length = 2 ** k
    vec = [0] * length
    vec[0] = k * 2 ** (k - 1) + length
    for t in range(1, length):
        vec[t] = (ordp(t, 2) + 1) * 2 ** (k - 1)
    return vec


def _vec2_norm(k):
    length = 2 ** k
    vec = [0] * length
    vec[0] = 4 ** (k // 2)
    for t in range(1, length):
        v = ordp(t, 2)
        if v % 2 == 0 and v < k:
            vec[t] = 3 * 2 ** (k - 1)
    return vec


def _block_vector(p, k, scale, gram, zpattern):
    key = (p, k, scale, gram, zpattern)
    cached = _VEC_CACHE.get(key)
    if cached is not None:
        return cached
    length = p ** k
    dim = len(gram)
    vec = [0] * length
    if dim == 1:
        c = gram[0][0] // 2
        mult = pow(p, scale, length) if scale else 1
        step = p if zpattern[0] else 1
        for x in range(0, length, step):
            vec[(mult * c * x * x) % length] += 1
    else:
        if p != 2:
            raise PreconditionViolated("two-dimensional blocks only occur at p = 2")
        if not any(zpattern):
            detg = (gram[0][0] * gram[1][1] - gram[0][1] ** 2) % 8
            if detg == 7:
                base = _vec2_hyperbolic(k)
                unit = 1
            else:
                base = _vec2_norm(k)
                a = gram[0][0] // 2
                c = gram[1][1] // 2
                unit = a if a % 2 else c
            mult = pow(2, scale, length) if scale else 1
            for w, cnt in enumerate(base):
                if cnt:
                    vec[(mult * unit * w) % length] += cnt
        else:
            if k > 9:
                raise ResourceLimit("constrained 2-adic block at too high a level")
            sx = 2 if zpattern[0] else 1
            sy = 2 if zpattern[1] else 1
            a, b, c = gram[0][0] // 2, gram[0][1], gram[1][1] // 2
            mult = 2 ** scale
            for x in range(0, length, sx):
                ax2 = a * x * x
                bx = b * x
                for y in range(0, length, sy):
                    vec[(mult * (ax2 + bx * y + c * y * y)) % length] += 1
    _VEC_CACHE[key] = vec
    return vec


def count_vector(p, k, blocks, zero=frozenset()):
    """Counts of Q(x) = t mod p^k over x mod p^k with the zero-set coords = 0 mod p."""
    length = p ** k
    vec = [0] * length
    vec[0] = 1
    for span, (scale, gram) in zip(block_spans(blocks), blocks):
        zpattern = tuple(i in zero for i in span)
        bv = _block_vector(p, k, scale, gram, zpattern)
        vec = _cyc_mul(vec, bv, length)
    return vec


def class_vectors(p, k, blocks):
    """Solution counts mod p^k split into good / zero / bad-I / bad-II."""
    i0, i1, i2 = scale_classes(blocks)
    every = frozenset(range(total_dim(blocks)))
    tot = count_vector(p, k, blocks)
    c0 = count_vector(p, k, blocks, i0)
    c01 = count_vector(p, k, blocks, i0 | i1)
    call = count_vector(p, k, blocks, every)
    length = p ** k
    return {
        "good": [tot[t] - c0[t] for t in range(length)],
        "bad_i": [c0[t] - c01[t] for t in range(length)],
        "bad_ii": [c01[t] - call[t] for t in range(length)],
        "zero": call,
        "total": tot,
    }


# ---------------------------------------------------------------------------
# densities


def _good_at_level(p, k, blocks, m, zero):
    r = total_dim(blocks)
    i0, _, _ = scale_classes(blocks)
    length = p ** k
    with_z = count_vector(p, k, blocks, zero)[m % length]
    without_unit = count_vector(p, k, blocks, zero | i0)[m % length]
    return Fraction(with_z - without_unit, p ** ((r - 1) * k))


def good_density(p, blocks, m, zero=frozenset()):
    """Density carried by solutions with a unit coordinate in a unit block."""
    gamma = 3 if p == 2 else 1
    key = (p, blocks, m % p ** gamma, tuple(sorted(zero)))
    cached = _GOOD_CACHE.get(key)
    if cached is not None:
        return cached
    val = _good_at_level(p, gamma, blocks, m, zero)
    if p == 2:
        confirm = _good_at_level(p, 4, blocks, m, zero)
        if confirm != val:
            raise ResourceLimit("good-type count failed its confirming level")
    _GOOD_CACHE[key] = val
    return val


def _shift_bad_i(blocks):
    return tuple((scale + 1 if scale == 0 else scale - 1, gram)
                 for scale, gram in blocks)


def _shift_bad_ii(blocks):
    return tuple((scale - 2 if scale >= 2 else scale, gram)
                 for scale, gram in blocks)


def local_density(p, blocks, m, zero=frozenset(), _depth=None):
    """Exact local density of m, p-adically split form, zero-set congruence."""
    if m == 0:
        raise PreconditionViolated("density target must be nonzero")
    if _depth is None:
        _depth = ordp(m, p) + 2
    if _depth < 0:
        raise ResourceLimit("density recursion exceeded its depth budget")
    zkey = tuple(sorted(zero))
    key = (p, blocks, m, zkey)
    cached = _DENS_CACHE.get(key)
    if cached is not None:
        return cached
    r = total_dim(blocks)
    i0, i1, i2 = scale_classes(blocks)
    total = good_density(p, blocks, m, zero)
    if m % p == 0 and i1:
        shifted = _shift_bad_i(blocks)
        total += Fraction(p) ** (1 - len(i0)) * good_density(p, shifted, m // p, zero - i0)
    if m % (p * p) == 0:
        if i2:
            shifted = _shift_bad_ii(blocks)
            z2 = zero & i2
            with_any = local_density(p, shifted, m // (p * p), z2, _depth - 1)
            all_zero = local_density(p, shifted, m // (p * p), i2, _depth - 1)
            total += Fraction(p) ** (len(i2) + 2 - r) * (with_any - all_zero)
        total += Fraction(p) ** (2 - r) * local_density(p, blocks, m // (p * p),
                                                        frozenset(), _depth - 1)
    _DENS_CACHE[key] = total
    return total


def top_components(p, blocks, m):
    """Good / zero / bad-I / bad-II densities at the top recursion level."""
    r = total_dim(blocks)
    i0, i1, i2 = scale_classes(blocks)
    good = good_density(p, blocks, m)
    bad_i = Fraction(0)
    bad_ii = Fraction(0)
    zero_part = Fraction(0)
    if m % p == 0 and i1:
        bad_i = Fraction(p) ** (1 - len(i0)) * good_density(p, _shift_bad_i(blocks), m // p)
    if m % (p * p) == 0:
        if i2:
            shifted = _shift_bad_ii(blocks)
            with_any = local_density(p, shifted, m // (p * p))
            all_zero = local_density(p, shifted, m // (p * p), i2)
            bad_ii = Fraction(p) ** (len(i2) + 2 - r) * (with_any - all_zero)
        zero_part = Fraction(p) ** (2 - r) * local_density(p, blocks, m // (p * p))
    return {"good": good, "bad_i": bad_i, "bad_ii": bad_ii, "zero": zero_part}


def brute_density(p, blocks, m, cap_hint):
    """Stabilized normalized count; independent of the recursive route.

    cap_hint bounds the level sweep: ord_p(m) + 2 ord_p(cap_hint) + 3 levels,
    then one confirming level.
    """
    if m <= 0:
        raise PreconditionViolated("density target must be positive")
    r = total_dim(blocks)
    vm = ordp(m, p) if m % p == 0 else 0
    k_cap = vm + 2 * ordp(2 * cap_hint, p) + 3
    prev = None
    for k in range(1, k_cap + 2):
        cnt = count_vector(p, k, blocks)[m % p ** k]
        val = Fraction(cnt, p ** ((r - 1) * k))
        # equality below the valuation of m can be accidental; insist k-1 > ord_p(m)
        if prev is not None and val == prev and k - 1 > vm:
            return prev
        prev = val
    raise ResourceLimit("density did not stabilize within the level cap")


# ---------------------------------------------------------------------------
# explicit p-adic solutions


def _sqrt_mod_p(a, p):
    """A square root of a mod an odd prime p, or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    c = pow(z, q, p)
    x = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    mexp = s
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (mexp - i - 1), p)
        x = x * b % p
        t = t * b * b % p
        c = b * b % p
        mexp = i
    return x


def _unit_data(blocks):
    """(coordinate index, form coefficient) for every scale-0 one-dим slot plus
    index spans of scale-0 two-dimensional blocks."""
    ones = []
    twos = []
    for span, (scale, gram) in zip(block_spans(blocks), blocks):
        if scale != 0:
            continue
        if len(gram) == 1:
            ones.append((span[0], gram[0][0] // 2))
        else:
            twos.append((span, gram))
    return ones, twos


def _find_good_mod(p, blocks, m):
    """A good-type solution mod p (p odd) or mod 8 (p = 2); None if none exists."""
    r = total_dim(blocks)
    i0, _, _ = scale_classes(blocks)
    if not i0:
        return None
    if p == 2:
        return _search8(blocks, m, r, i0)
    ones, twos = _unit_data(blocks)
    assert not twos
    s = len(ones)
    trailing = ones[2:]
    for pattern in range(2 ** len(trailing)):
        assign = [(pattern >> t) & 1 for t in range(len(trailing))]
        rest = m - sum(c * e * e for (_, c), e in zip(trailing, assign))
        if s == 1:
            c0 = ones[0][1]
            w = rest * pow(c0, -1, p) % p
            root = _sqrt_mod_p(w, p)
            if root is not None and root % p != 0:
                x = [0] * r
                x[ones[0][0]] = root
                return x
            continue
        c0, c1 = ones[0][1], ones[1][1]
        inv0 = pow(c0 % p, -1, p)
        for b in range(p):
            w = (rest - c1 * b * b) * inv0 % p
            root = _sqrt_mod_p(w, p)
            if root is None:
                continue
            if root == 0 and b == 0 and not any(assign):
                continue
            x = [0] * r
            x[ones[0][0]] = root
            x[ones[1][0]] = b
            for (idx, _), e in zip(trailing, assign):
                x[idx] = e
            return x
    return None


def _search8(blocks, m, r, i0):
    # tiny exhaustive search mod 8; r <= 4 keeps this at 4096 points
    target = m % 8
    for tup in itertools.product(range(8), repeat=r):
        if form_value(blocks, list(tup), 2) % 8 != target:
            continue
        if any(tup[i] % 2 for i in i0):
            return list(tup)
    return None


def _newton_lift(p, blocks, x, m, prec):
    """Refine x until Q(x) = m mod p^prec; needs ord(err) > 2 ord(grad)."""
    x = list(x)
    modulus = p ** (prec + 4)
    for _ in range(prec + 8):
        err = m - form_value(blocks, x, p)
        if err % p ** prec == 0:
            return [xi % p ** prec for xi in x]
        grad = gradient(blocks, x, p)
        vg, j = None, None
        for idx, gcomp in enumerate(grad):
            if gcomp == 0:
                continue
            v = ordp(gcomp, p)
            if vg is None or v < vg:
                vg, j = v, idx
        ve = ordp(err, p)
        if vg is None or ve <= 2 * vg:
            raise ResourceLimit("solution is not smooth enough to lift")
        unit = (grad[j] // p ** vg) % modulus
        step = (err // p ** vg) * pow(unit, -1, modulus) % modulus
        x[j] += step
    raise ResourceLimit("lifting did not converge")


def find_representation(p, blocks, m, prec):
    """An integer vector x with Q(x) = m mod p^prec, in block coordinates.

    Requires local_density(p, blocks, m) > 0.
    """
    prec = max(prec, 1)
    if good_density(p, blocks, m) > 0:
        start = _find_good_mod(p, blocks, m)
        assert start is not None
        return _newton_lift(p, blocks, start, m, prec)
    i0, i1, i2 = scale_classes(blocks)
    if m % p == 0 and i1:
        shifted = _shift_bad_i(blocks)
        if good_density(p, shifted, m // p) > 0:
            start = _find_good_mod(p, shifted, m // p)
            assert start is not None
            y = _newton_lift(p, shifted, start, m // p, max(prec - 1, 1))
            return [p * yi if idx in i0 else yi for idx, yi in enumerate(y)]
    if m % (p * p) == 0:
        if i2:
            shifted = _shift_bad_ii(blocks)
            if local_density(p, shifted, m // (p * p)) > 0:
                y = find_representation(p, shifted, m // (p * p), max(prec - 2, 1))
                return [p * yi if idx in (i0 | i1) else yi for idx, yi in enumerate(y)]
        if local_density(p, blocks, m // (p * p)) > 0:
            y = find_representation(p, blocks, m // (p * p), max(prec - 2, 1))
            return [p * yi for yi in y]
    raise PreconditionViolated("target is not locally represented")
