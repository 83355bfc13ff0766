"""Search and classification of locally-represented-but-unrepresented integers."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd

from . import density, discgroup, padic
from .errors import NoEscalatorFound, PreconditionViolated
from .forms import QuadForm, divisor_count, factorize, represent_count, theta_coeffs


@dataclass(frozen=True)
class ExceptionRecord:
    n: int
    locally_represented: bool
    coprime_to_disc: bool
    strong: bool
    primitive: bool
    represented: bool
    escalator: tuple | None = None  # (prime, verified k range)

    def to_dict(self):
        return {
            "n": self.n,
            "locally_represented": self.locally_represented,
            "coprime_to_disc": self.coprime_to_disc,
            "strong": self.strong,
            "primitive": self.primitive,
            "represented": self.represented,
            "escalator": {"p": self.escalator[0], "k_verified": list(self.escalator[1])}
            if self.escalator else None,
        }


@dataclass(frozen=True)
class ThresholdSet:
    eps: float
    constant: float
    t1: float
    t2: float
    t3: float
    t4: float

    def to_dict(self):
        return {"eps": self.eps, "constant": self.constant,
                "t1": self.t1, "t2": self.t2, "t3": self.t3, "t4": self.t4}


@dataclass(frozen=True)
class EscalatorDiagnosis:
    prime: int
    verified: tuple  # k values with r_Q(n p^{2k}) = 0

    def to_dict(self):
        return {"p": self.prime, "k_verified": list(self.verified)}


def anisotropic_primes(q: QuadForm):
    return [p for p in sorted(factorize(2 * q.disc)) if padic.is_anisotropic(q, p)]


def classify(q: QuadForm, n: int, represented: bool | None = None) -> ExceptionRecord:
    """All local-condition flags for one integer."""
    if n < 1:
        raise PreconditionViolated("classification target must be positive")
    local = density.is_locally_represented(q, n)
    strong = density.has_strong_local_solubility(q, n) if local else False
    primitive = density.is_primitively_locally_represented(q, n) if local else False
    if represented is None:
        represented = represent_count(q, n) > 0
    return ExceptionRecord(
        n=n,
        locally_represented=local,
        coprime_to_disc=gcd(n, q.disc) == 1,
        strong=strong,
        primitive=primitive,
        represented=represented,
    )


def escalator_check(q: QuadForm, n: int, k_max: int = 1, cap=None) -> EscalatorDiagnosis:
    """Find an anisotropic prime explaining why n and n*p^(2k) stay missed."""
    if k_max < 0:
        raise PreconditionViolated("k_max must be nonnegative")
    if not density.is_locally_represented(q, n):
        raise PreconditionViolated("escalator diagnosis needs a locally represented n")
    if represent_count(q, n, cap=cap) > 0:
        raise PreconditionViolated("escalator diagnosis needs an unrepresented n")
    level = q.level
    candidate = None
    for p in anisotropic_primes(q):
        if n % (p * p):
            continue
        vn = 0
        m = n
        while m % p == 0:
            m //= p
            vn += 1
        vl = 0
        m = level
        while m % p == 0:
            m //= p
            vl += 1
        if vn > vl:
            candidate = p
            break
    if candidate is None:
        raise NoEscalatorFound(f"no anisotropic prime escalates n = {n}")
    verified = []
    for k in range(k_max + 1):
        target = n * candidate ** (2 * k)
        count = represent_count(q, target, cap=cap)
        assert count == 0, "escalator family unexpectedly represented"
        verified.append(k)
    return EscalatorDiagnosis(prime=candidate, verified=tuple(verified))


def _attach_escalator(q, rec, k_max, cap):
    try:
        diag = escalator_check(q, rec.n, k_max, cap=cap)
    except (NoEscalatorFound, PreconditionViolated):
        return rec
    return ExceptionRecord(
        n=rec.n, locally_represented=rec.locally_represented,
        coprime_to_disc=rec.coprime_to_disc, strong=rec.strong,
        primitive=rec.primitive, represented=rec.represented,
        escalator=(diag.prime, diag.verified),
    )


def _scan_chunk(gram, ns, k_max):
    q = QuadForm(gram)
    out = []
    for n in ns:
        if not density.is_locally_represented(q, n):
            continue
        rec = classify(q, n, represented=False)
        out.append(_attach_escalator(q, rec, k_max, None))
    return out


def search_exceptions(q: QuadForm, bound: int, k_max: int = 1, jobs: int = 1,
                      cap=None):
    """Every n <= bound that is locally represented but has r_Q(n) = 0."""
    if bound < 1:
        raise PreconditionViolated("search bound must be positive")
    theta = theta_coeffs(q, bound, cap=cap)
    candidates = [n for n in range(1, bound + 1) if theta[n] == 0]
    if jobs > 1 and len(candidates) > 8:
        chunk = (len(candidates) + jobs - 1) // jobs
        parts = [candidates[i:i + chunk] for i in range(0, len(candidates), chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_scan_chunk, [q.gram] * len(parts), parts,
                               [k_max] * len(parts))
        records = [rec for part in results for rec in part]
    else:
        records = _scan_chunk(q.gram, candidates, k_max)
    return sorted(records, key=lambda r: r.n)


def thresholds(q: QuadForm, eps: float = 0.0, constant: float = 1.0) -> ThresholdSet:
    """The four sufficiency thresholds, weakest local condition last."""
    if eps < 0 or constant <= 0:
        raise PreconditionViolated("eps must be >= 0 and the constant positive")
    n = float(q.level)
    d = float(q.disc)
    t1 = constant * max(n ** (1.5 + eps) * d ** (1.25 + eps),
                        n ** (2.0 + eps) * d ** (1.0 + eps))
    t2 = constant * max(n ** (1.25 + eps) * d ** (1.25 + eps),
                        n ** (3.0 + eps) * d ** (1.0 + eps))
    t3 = constant * max(n ** (2.5 + eps) * d ** (2.25 + eps),
                        n ** (3.0 + eps) * d ** (2.0 + eps))
    t4 = constant * max(n ** (4.5 + eps) * d ** (1.25 + eps),
                        n ** (5.0 + eps) * d ** (1.0 + eps))
    return ThresholdSet(eps=eps, constant=constant, t1=t1, t2=t2, t3=t3, t4=t4)


def explicit_cusp_coeff_bound(q: QuadForm, n: int, cc_bound: float) -> float:
    """Certified ceiling for |a_C(n)| given a Petersson-norm bound.

    A zero cc_bound is meaningful for single-class genera.
    """
    if cc_bound < 0:
        raise PreconditionViolated("the Petersson bound must be nonnegative")
    if n < 1:
        raise PreconditionViolated("coefficient index must be positive")
    level = q.level
    index = discgroup.gamma0_index(level)
    dim_bound = -(-index // 12) + 1
    out = 4 * math.pi * math.exp(4 * math.pi)
    out *= math.sqrt(cc_bound * dim_bound)
    out *= divisor_count(n) * math.sqrt(n) * math.sqrt(level)
    for p in sorted(factorize(level)):
        out *= (1 + 1 / p) ** (1 / 3) / math.sqrt(1 - p ** -4.0)
    return out
