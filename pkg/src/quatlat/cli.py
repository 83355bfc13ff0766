"""Command-line front end.

Exit codes: 0 success, 2 invalid form, 3 precondition violation,
4 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import density, discgroup, eisenstein, exceptional, padic
from .errors import (InconsistentSystem, NoEscalatorFound, NotIntegral,
                     NotPositiveDefinite, PreconditionViolated, PrecisionTooLow,
                     ResourceLimit, SingularMatrix)
from .forms import (QuadForm, format_form, parse_form_string, reduce_form,
                    represent_count, theta_coeffs)

EXIT_OK = 0
EXIT_BAD_FORM = 2
EXIT_PRECONDITION = 3
EXIT_RESOURCE = 4


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _add_common(sub):
    sub.add_argument("--form", required=True, help="c11,c12,c13,c14,c22,c23,c24,c33,c34,c44")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--seed", type=int, default=0,
                     help="reserved for randomized internals; engines are deterministic")
    sub.add_argument("--jobs", type=int, default=1)


def build_parser():
    ap = argparse.ArgumentParser(prog="quatlat",
                                 description="exact analysis of quaternary quadratic forms")
    subs = ap.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("analyze", help="invariants, Jordan data and anisotropy per prime")
    _add_common(sp)

    sp = subs.add_parser("density", help="local density of n at p, all three engines")
    _add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--prime", type=int, required=True)

    sp = subs.add_parser("theta", help="theta coefficients r_Q(0..B)")
    _add_common(sp)
    sp.add_argument("--bound", type=int, required=True)

    sp = subs.add_parser("eisenstein", help="n, a_E(n), r_Q(n), a_C(n) for n <= B")
    _add_common(sp)
    sp.add_argument("--bound", type=int, required=True)

    sp = subs.add_parser("cusps", help="cusp table and the exact cusp sum")
    _add_common(sp)

    sp = subs.add_parser("exceptions", help="locally represented integers with r_Q(n) = 0")
    _add_common(sp)
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--kmax", type=int, default=1)

    sp = subs.add_parser("bounds", help="the four sufficiency thresholds")
    _add_common(sp)
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--const", type=float, default=1.0)

    sp = subs.add_parser("rform", help="reduced form, transform and outer coefficients")
    _add_common(sp)
    return ap


def _cmd_analyze(q: QuadForm, args, out):
    primes = density.ramified_primes(q)
    per_prime = []
    aniso = []
    for p in primes:
        split = padic.jordan_decompose(q, p)
        report = padic.anisotropy_depth(q, p)
        if report.anisotropic:
            aniso.append(p)
        per_prime.append({
            "p": p,
            "jordan": [{"scale": s, "gram": [list(r) for r in g]}
                       for s, g in split.blocks],
            **report.to_dict(),
        })
    doc = {
        "command": "analyze",
        "form": format_form(q),
        "disc": q.disc,
        "level": q.level,
        "char_disc": q.char_disc,
        "anisotropic_primes": aniso,
        "primes": per_prime,
    }
    print(json.dumps(doc), file=out)


def _cmd_density(q: QuadForm, args, out):
    rec = density.density_recursive(q, args.n, args.prime)
    brute = density.density_bruteforce(q, args.n, args.prime)
    assert rec.value == brute.value
    k = 3 if args.prime == 2 else 1
    cen = density.census(q, args.n, args.prime, k)
    doc = {
        "command": "density",
        "p": args.prime,
        "n": args.n,
        "beta": _frac(rec.value),
        "method": rec.method,
        "census": cen.to_dict(),
    }
    print(json.dumps(doc), file=out)


def _cmd_theta(q: QuadForm, args, out):
    coeffs = theta_coeffs(q, args.bound)
    if args.format == "csv":
        print(",".join(str(c) for c in coeffs), file=out)
    else:
        print(json.dumps({"command": "theta", "bound": args.bound,
                          "coeffs": coeffs}), file=out)


def _cmd_eisenstein(q: QuadForm, args, out):
    theta = theta_coeffs(q, args.bound)
    rows = []
    for n in range(1, args.bound + 1):
        coeff = eisenstein.eisenstein_coeff(q, n)
        rows.append((n, coeff.value, theta[n], theta[n] - coeff.value, coeff.error))
    if args.format == "csv":
        print("n,a_e,r_q,a_c,error", file=out)
        for row in rows:
            print(",".join(str(x) for x in row), file=out)
    else:
        for n, ae, rq, ac, err in rows:
            print(json.dumps({"command": "eisenstein", "n": n, "a_e": ae,
                              "r_q": rq, "a_c": ac, "error": err}), file=out)


def _cmd_cusps(q: QuadForm, args, out):
    table = discgroup.cusp_table(q)
    total = discgroup.cusp_sum(q)
    if args.format == "csv":
        print("c,multiplicity,width,image_size,kernel_size,coset_equal,r_disc", file=out)
        for d in table:
            print(f"{d.denominator},{d.multiplicity},{d.width},{d.image_size},"
                  f"{d.kernel_size},{d.coset_equal},{d.r_disc}", file=out)
        print(f"cusp_sum,{_frac(total)}", file=out)
    else:
        doc = {
            "command": "cusps",
            "level": q.level,
            "index": discgroup.gamma0_index(q.level),
            "cusps": [d.to_dict() for d in table],
            "cusp_sum": _frac(total),
        }
        print(json.dumps(doc), file=out)


def _cmd_exceptions(q: QuadForm, args, out):
    records = exceptional.search_exceptions(q, args.bound, k_max=args.kmax,
                                            jobs=args.jobs)
    for rec in records:
        doc = {"command": "exceptions", **rec.to_dict()}
        print(json.dumps(doc), file=out)


def _cmd_bounds(q: QuadForm, args, out):
    ts = exceptional.thresholds(q, eps=args.eps, constant=args.const)
    print(json.dumps({"command": "bounds", **ts.to_dict()}), file=out)


def _cmd_rform(q: QuadForm, args, out):
    red = reduce_form(q)
    doc = {
        "command": "rform",
        "gram": [list(r) for r in red.form.gram],
        "transform": [list(r) for r in red.transform],
        "outer_coeffs": [_frac(x) for x in red.outer_coeffs],
        "offdiag": [[_frac(x) for x in row] for row in red.offdiag],
    }
    print(json.dumps(doc), file=out)


_DISPATCH = {
    "analyze": _cmd_analyze,
    "density": _cmd_density,
    "theta": _cmd_theta,
    "eisenstein": _cmd_eisenstein,
    "cusps": _cmd_cusps,
    "exceptions": _cmd_exceptions,
    "bounds": _cmd_bounds,
    "rform": _cmd_rform,
}


def run(argv, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        form = parse_form_string(args.form)
    except (NotIntegral, NotPositiveDefinite) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FORM
    try:
        _DISPATCH[args.command](form, args, out)
    except (PreconditionViolated, PrecisionTooLow, InconsistentSystem,
            SingularMatrix, NoEscalatorFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
