"""Exact linear algebra over Z and Q at the 4x4 scale used everywhere else.

All routines return new objects; nothing here mutates its arguments unless
explicitly documented.  Matrices are lists (or tuples) of rows.
"""

from fractions import Fraction
from math import gcd

from .errors import InconsistentSystem, SingularMatrix


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_vec(a, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def det(a):
    """Determinant by cofactor expansion; exact for int or Fraction entries."""
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = 0
    for j in range(n):
        if a[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * det(minor)
        total += term if j % 2 == 0 else -term
    return total


def adjugate(a):
    """adj(a) with a @ adj(a) = det(a) * I."""
    n = len(a)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i]
            cof[i][j] = ((-1) ** (i + j)) * det(minor)
    return transpose(cof)


def leading_minors(a):
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def is_positive_definite(a):
    return all(m > 0 for m in leading_minors(a))


def ldl(f):
    """Completing-the-square data of a positive-definite rational matrix.

    Returns (d, mu) with Q(x) = sum_i d[i] * (x_i + sum_{j>i} mu[i][j] x_j)^2
    when Q(x) = x^T f x.
    """
    n = len(f)
    w = [[Fraction(f[i][j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = w[i][i]
        if d[i] <= 0:
            raise SingularMatrix("pivot is not positive")
        for j in range(i + 1, n):
            mu[i][j] = w[i][j] / d[i]
        for k in range(i + 1, n):
            for l in range(k, n):
                w[k][l] -= w[i][k] * w[i][l] / d[i]
                w[l][k] = w[k][l]
    return d, mu


def _snf(a):
    """Rectangular Smith form: U @ a @ V = S with nonneg divisibility diagonal."""
    r = len(a)
    c = len(a[0])
    m = [list(map(int, row)) for row in a]
    u = identity(r)
    v = identity(c)

    def row_op(i, j, q):  # row_i -= q * row_j
        m[i] = [x - q * y for x, y in zip(m[i], m[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in m:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    for t in range(min(r, c)):
        while True:
            pi, pj, best = -1, -1, None
            for i in range(t, r):
                for j in range(t, c):
                    if m[i][j] != 0 and (best is None or abs(m[i][j]) < best):
                        pi, pj, best = i, j, abs(m[i][j])
            if best is None:
                break  # remaining block is zero
            if pi != t:
                m[t], m[pi] = m[pi], m[t]
                u[t], u[pi] = u[pi], u[t]
            if pj != t:
                for row in m:
                    row[t], row[pj] = row[pj], row[t]
                for row in v:
                    row[t], row[pj] = row[pj], row[t]
            dirty = False
            for i in range(t + 1, r):
                if m[i][t] != 0:
                    row_op(i, t, m[i][t] // m[t][t])
                    dirty = dirty or m[i][t] != 0
            for j in range(t + 1, c):
                if m[t][j] != 0:
                    col_op(j, t, m[t][j] // m[t][t])
                    dirty = dirty or m[t][j] != 0
            if dirty or any(m[i][t] for i in range(t + 1, r)) \
                    or any(m[t][j] for j in range(t + 1, c)):
                continue
            bad = None
            for i in range(t + 1, r):
                if any(m[i][j] % m[t][t] for j in range(t + 1, c)):
                    bad = i
                    break
            if bad is None:
                break
            row_op(t, bad, -1)  # pull the offending row into the pivot row
        if t < min(r, c) and m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
    return u, m, v


def smith_normal_form(a):
    """U, S, V with U @ a @ V = S diagonal, d1 | d2 | ..., U, V unimodular.

    Requires a square nonsingular integer matrix.
    """
    if det(a) == 0:
        raise SingularMatrix("matrix is singular")
    return _snf(a)


def invariant_factors(a):
    _, s, _ = smith_normal_form(a)
    return tuple(s[i][i] for i in range(len(a)))


def hnf_basis(cols):
    """Lower-triangular basis of the full-rank lattice spanned by cols.

    cols: iterable of integer vectors of length n spanning a rank-n lattice.
    Returns an n x n matrix whose columns are a basis.
    """
    n = len(cols[0])
    work = [list(map(int, c)) for c in cols]
    basis = []
    for i in range(n):
        work = [c for c in work if any(c[i:])]
        pivot = None
        while True:
            nz = [c for c in work if c[i] != 0]
            if not nz:
                raise SingularMatrix("generators do not span full rank")
            nz.sort(key=lambda c: abs(c[i]))
            pivot = nz[0]
            done = True
            for c in work:
                if c is pivot or c[i] == 0:
                    continue
                q = c[i] // pivot[i]
                for t in range(n):
                    c[t] -= q * pivot[t]
                if c[i] != 0:
                    done = False
            if done:
                break
        work = [c for c in work if c is not pivot and any(c)]
        if pivot[i] < 0:
            pivot = [-x for x in pivot]
        assert all(pivot[j] == 0 for j in range(i))
        basis.append(pivot)
    return transpose(basis)


def solve_congruence(b, rhs, modulus):
    """One solution x of b @ x = rhs (mod modulus), or raise InconsistentSystem.

    b is an r x s integer matrix, rhs length r, modulus >= 1.
    """
    s = len(b[0])
    if modulus == 1:
        return [0] * s
    r = len(b)
    # solve B x + modulus * y = rhs over Z
    c = [list(b[i]) + [modulus if j == i else 0 for j in range(r)]
         for i in range(r)]
    u, snf, v = _snf(c)
    target = mat_vec(u, list(rhs))
    w = [0] * (s + r)
    for i in range(r):
        di = snf[i][i] if i < len(snf[i]) else 0
        if di == 0:
            if target[i] != 0:
                raise InconsistentSystem("no solution to congruence system")
        else:
            if target[i] % di != 0:
                raise InconsistentSystem("no solution to congruence system")
            w[i] = target[i] // di
    z = mat_vec(v, w)
    return [z[j] % modulus for j in range(s)]
