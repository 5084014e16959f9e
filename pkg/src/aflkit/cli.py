"""Command-line driver: one JSON document (or CSV) per invocation.

Exit codes: 0 success, 2 validation error, 3 precision or box instability.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import green, hermdiff, orbint, orbits, weil
from .errors import AflkitError, BoxUnstable, PrecisionExhausted
from .exact import LaurentPoly, factor_prime_power, laurent_special_values, rat_to_str
from .localfield import FElem, LocalFieldSpec


def poly_json(P: LaurentPoly) -> dict:
    """Coefficients keyed by exponent, highest exponent first."""
    return {str(k): rat_to_str(c) for k, c in sorted(P.items(), reverse=True)}


def dumps(obj) -> str:
    # insertion order is deterministic, so output is byte-stable without sorting
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True)


def _cplx(z):
    return None if z is None else [z.real, z.imag]


@dataclass
class RunReport:
    command: list
    inputs: dict
    outputs: object = None
    status: str = "ok"
    timing: float = 0.0

    def to_json(self):
        return {"command": self.command, "inputs": self.inputs, "outputs": self.outputs, "status": self.status, "timing": self.timing}


# -- input parsing ----------------------------------------------------------


def _spec_from_args(args) -> LocalFieldSpec:
    if getattr(args, "q", None):
        p, f = factor_prime_power(args.q)
    else:
        p, f = args.p, args.f
    if p is None:
        raise ValueError("give --q or --p")
    return LocalFieldSpec(p, f, getattr(args, "d", 0) or 0)


def _load_json(text: str):
    if text == "-":
        return json.load(sys.stdin)
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    return json.loads(text)


def _base(spec: LocalFieldSpec, x):
    if isinstance(x, dict):
        x = x["coeffs"]
    if isinstance(x, list):
        return spec.elem([Fraction(str(c)) for c in x])
    return spec.elem(Fraction(str(x)))


def _felem(spec: LocalFieldSpec, x) -> FElem:
    if isinstance(x, dict) and "re" in x:
        return FElem(_base(spec, x["re"]), _base(spec, x.get("im", 0)))
    return FElem.from_base(_base(spec, x))


def parse_datum(obj, spec: LocalFieldSpec) -> orbits.OrbitDatum:
    gamma = [[_felem(spec, c) for c in row] for row in obj["gamma"]]
    u1 = [_base(spec, c) for c in obj["u1"]]
    u2 = [_base(spec, c) for c in obj["u2"]]
    return orbits.OrbitDatum(gamma, u1, u2)


def _datum_from_args(args, spec):
    if args.datum is not None:
        return parse_datum(_load_json(args.datum), spec)
    rng = random.Random(args.seed)
    return orbits.random_orbit(spec, args.n, rng)


# -- subcommands ------------------------------------------------------------


def _rank1_poly(args) -> LaurentPoly:
    if args.rank1_split:
        return orbint.orb_rank1_split(args.M)
    return orbint.orb_rank1_split_brute(args.vu1, args.vu2, args.vc)


def cmd_orb(args):
    spec = _spec_from_args(args)
    if args.rank1_split or args.rank1_brute:
        P = _rank1_poly(args)
        value, _ = laurent_special_values(P, spec.q)
        return {"poly": poly_json(P), "value0": rat_to_str(value)}
    x = _datum_from_args(args, spec)
    r = orbint.orb_lattice_sum(x, spec, box=args.box, method=args.method)
    return {"poly": poly_json(r.normalized), "value0": rat_to_str(r.value0), "omega": r.omega, "side": r.side}


def cmd_dorb(args):
    spec = _spec_from_args(args)
    if args.rank1_split or args.rank1_brute:
        _, deriv = laurent_special_values(_rank1_poly(args), spec.q)
        return {"deriv0": deriv.to_json()}
    x = _datum_from_args(args, spec)
    r = orbint.orb_lattice_sum(x, spec, box=args.box, method=args.method)
    return {"deriv0": r.deriv0.to_json(), "omega": r.omega, "side": r.side}


def cmd_orb_arch(args):
    res = orbint.orb_arch(args.zeta, args.a, args.b, args.theta)
    out = {"value": _cplx(res.value), "deriv": _cplx(res.deriv)}
    if args.quadrature:
        out["quadrature_value"] = _cplx(orbint.orb_arch_quadrature(args.zeta, args.a, args.b, args.theta))
        out["quadrature_deriv"] = _cplx(orbint.orb_arch_quadrature(args.zeta, args.a, args.b, args.theta, deriv=True))
    return out


def cmd_match(args):
    spec = _spec_from_args(args)
    x = _datum_from_args(args, spec)
    alpha, pairings, disc, rs = orbits.invariants_and_rs(x)
    out = {
        "alpha": [c.to_json() for c in alpha],
        "pairings": [c.to_json() for c in pairings],
        "disc": disc.to_json(),
        "rs": rs,
    }
    if rs:
        out["omega"], out["side"] = orbits.transfer_factor_and_side(x)
    return out


def cmd_weil_check(args):
    spec = _spec_from_args(args)
    base = LocalFieldSpec(spec.p, spec.f)
    if args.phi is not None:
        a1, a2 = (int(t) for t in args.phi.split(","))
        phi = weil.SchwartzFn.indicator(base.with_conductor(args.d + args.e), a1, a2)
    else:
        phi = weil.lemma_test_function(base, args.d, args.e)
    report = weil.invariance_report(phi, args.d)
    return {
        "invariant": all(ok for *_, ok in report),
        "generators": [{"kind": k, "param": prm, "fixed": ok} for k, prm, ok in report],
    }


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t]


def cmd_green(args):
    if args.kind == "ei":
        header, rows = green.ei_table(_floats(args.x))
    elif args.kind == "green":
        header, rows = green.green_table(_floats(args.R), args.a, args.convention)
    else:
        header, rows = green.spherical_table(args.m, _floats(args.s), _floats(args.x))
    if args.csv:
        return green.to_csv(header, rows)
    return {"columns": header, "rows": [list(r) for r in rows]}


def cmd_diff(args):
    if args.family is not None:
        obj = _load_json(args.family)
        places = tuple(hermdiff.Place(str(p["id"]), bool(p["split"]), int(p["eps"])) for p in obj["places"])
        fam = hermdiff.IncoherentFamily(places, {str(k): int(v) for k, v in obj["zeta_signs"].items()})
        d = hermdiff.diff_set(fam)
        return {"diff": sorted(d), "size": len(d)}
    rng = random.Random(args.seed)
    sizes = [len(hermdiff.diff_set(hermdiff.random_incoherent_family(rng))) for _ in range(args.random)]
    return {"samples": len(sizes), "all_odd": all(s % 2 == 1 for s in sizes), "min_size": min(sizes) if sizes else None}


def cmd_cm_check(args):
    qs = [args.q] if args.q else [3, 5, 9, 27]
    vs = [args.v] if args.v is not None else list(range(-7, 12, 2))
    rows = []
    for q in qs:
        for v in vs:
            ok, factor, _ = hermdiff.cm_crosscheck_detail(v, q)
            rows.append({"q": q, "v": v, "ok": ok, "factor": rat_to_str(factor)})
    return {"all_ok": all(r["ok"] for r in rows), "rows": rows}


def cmd_selftest(args):
    checks = []

    def check(name, fn):
        try:
            checks.append((name, bool(fn())))
        except Exception:  # noqa: BLE001
            checks.append((name, False))

    check("rank1 value table", lambda: all(
        orbint.orb_rank1_split(M)(1) == (1 if M >= 0 and M % 2 == 0 else 0) for M in range(-4, 9)))
    check("rank1 brute oracle", lambda: all(
        orbint.orb_rank1_split_brute(a, b, c) == orbint.orb_rank1_split(a + b - c)
        for a in range(-3, 4) for b in range(-3, 4) for c in range(-3, 4)))
    check("cm crosscheck", lambda: all(hermdiff.cm_factor_crosscheck(v, q) for v in range(-7, 12, 2) for q in (3, 5, 9, 27)))
    s3 = LocalFieldSpec(3)
    check("lattice sum rank 1", lambda: all(
        orbint.orb_lattice_sum(orbits.rank1_orbit(s3, a, b)).normalized == orbint.orb_rank1_split(a + b)
        for a in range(0, 3) for b in range(-1, 3)))
    check("weil invariance", lambda: all(
        weil.check_K_invariance(weil.lemma_test_function(s3, d, e), d) for d in (0, 1) for e in (0, 1)))
    check("weil non-invariance", lambda: not weil.check_K_invariance(weil.SchwartzFn.indicator(s3, 0, 1), 0))
    check("arch closed form", lambda: abs(orbint.orb_arch(1, 1).value - math.exp(-2 * math.pi)) < 1e-15)
    check("green laplacian", lambda: green.ei_laplacian_residual(1.0, 2.0, 1.0, 1.0) < 1e-9)
    passed = sum(ok for _, ok in checks)
    return {"passed": passed, "failed": len(checks) - passed, "checks": {n: ok for n, ok in checks}}


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="aflkit", description="orbital integrals and companions")
    sub = ap.add_subparsers(dest="command", required=True)

    def field_opts(sp):
        sp.add_argument("--q", type=int, help="residue cardinality (prime power)")
        sp.add_argument("--p", type=int)
        sp.add_argument("--f", type=int, default=1)
        sp.add_argument("--precision", type=int, default=40)

    def orb_opts(sp):
        field_opts(sp)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--rank1-split", action="store_true")
        g.add_argument("--rank1-brute", action="store_true")
        sp.add_argument("--M", type=int, default=0)
        sp.add_argument("--vu1", type=int, default=0)
        sp.add_argument("--vu2", type=int, default=0)
        sp.add_argument("--vc", type=int, default=0)
        sp.add_argument("--datum", help="orbit datum JSON, @file or - for stdin")
        sp.add_argument("--n", type=int, default=2, help="rank of a random datum when none is given")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--box", type=int)
        sp.add_argument("--method", choices=("pinched", "box"), default="pinched")

    sp = sub.add_parser("orb")
    orb_opts(sp)
    sp.set_defaults(func=cmd_orb)
    sp = sub.add_parser("dorb")
    orb_opts(sp)
    sp.set_defaults(func=cmd_dorb)

    sp = sub.add_parser("orb-arch")
    sp.add_argument("--zeta", type=float, required=True)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=0.0)
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--quadrature", action="store_true")
    sp.set_defaults(func=cmd_orb_arch)

    sp = sub.add_parser("match")
    field_opts(sp)
    sp.add_argument("--datum")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_match)

    sp = sub.add_parser("weil-check")
    field_opts(sp)
    sp.add_argument("--d", type=int, default=0, help="level of the maximal compact")
    sp.add_argument("--e", type=int, default=0, help="-v(c) for the test function 1_{O x cO}")
    sp.add_argument("--phi", help="a1,a2 for the indicator of p^a1 O x p^a2 O")
    sp.set_defaults(func=cmd_weil_check)

    sp = sub.add_parser("green")
    sp.add_argument("--kind", choices=("ei", "green", "spherical"), default="ei")
    sp.add_argument("--x", default="-1,-0.5,-0.1")
    sp.add_argument("--R", default="0.1,1,2")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--s", default="1.5,2,3")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--convention", choices=("2pi", "4pi"), default="2pi")
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_green)

    sp = sub.add_parser("diff")
    sp.add_argument("--family")
    sp.add_argument("--random", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_diff)

    sp = sub.add_parser("cm-check")
    sp.add_argument("--q", type=int)
    sp.add_argument("--v", type=int)
    sp.set_defaults(func=cmd_cm_check)

    sp = sub.add_parser("selftest")
    sp.set_defaults(func=cmd_selftest)

    ap.add_argument("--report", action="store_true", help="wrap output in a run report")
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        out = args.func(args)
        code = 0
    except (PrecisionExhausted, BoxUnstable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, AflkitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.report:
        inputs = {k: v for k, v in vars(args).items() if k not in ("func", "report")}
        out = RunReport(argv, inputs, out, "ok", round(time.perf_counter() - t0, 6)).to_json()
    if isinstance(out, str):
        sys.stdout.write(out)
    else:
        print(dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
