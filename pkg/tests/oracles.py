"""Independent brute-force oracles used to freeze expected test values.

Nothing here shares code paths with the engines under test: counting is by
raw box/residue enumeration straight off the Gram matrix.
"""

from itertools import product
from math import isqrt

from quatlat import linalg


def _box_bounds(q, n):
    a = [list(r) for r in q.gram]
    d = linalg.det(a)
    adj = linalg.adjugate(a)
    # |x_i|^2 <= 2n (A^{-1})_{ii} by Cauchy-Schwarz in the A-inner product
    return [isqrt((2 * n * adj[i][i]) // d) + 1 for i in range(4)]


def naive_represent_count(q, n):
    if n < 0:
        return 0
    if n == 0:
        return 1
    b = _box_bounds(q, n)
    count = 0
    for x in product(*(range(-bi, bi + 1) for bi in b)):
        if q.value(x) == n:
            count += 1
    return count


def naive_theta(q, bound):
    counts = [0] * (bound + 1)
    b = _box_bounds(q, bound)
    for x in product(*(range(-bi, bi + 1) for bi in b)):
        v = q.value(x)
        if v <= bound:
            counts[v] += 1
    return counts


def naive_mod_count(q, n, p, k):
    mod = p ** k
    return sum(1 for x in product(range(mod), repeat=4)
               if q.value(x) % mod == n % mod)


def naive_divisor_count(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def naive_euler_phi(n):
    return sum(1 for a in range(1, n + 1) if _gcd(a, n) == 1)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
