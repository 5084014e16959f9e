"""Acceptance criteria, one check per criterion.

Run under pytest (a summary block is printed at the end) or directly with
``python3 tests/test_acceptance.py``.
"""

import cmath
import math
import random
import time
from fractions import Fraction

import pytest
from scipy import special

from aflkit.exact import LogLinear, laurent_special_values
from aflkit.green import WhittakerArgs, ei_laplacian_residual, exp_integral, spherical_eigen_residual, whittaker
from aflkit.hermdiff import cm_factor_crosscheck, diff_set, random_incoherent_family
from aflkit.localfield import FElem, LocalFieldSpec
from aflkit.orbint import orb_arch, orb_arch_quadrature, orb_lattice_sum, orb_rank1_split, orb_rank1_split_brute
from aflkit.orbits import group_action, random_elem, random_gl, random_orbit, rank1_orbit
from aflkit.weil import SchwartzFn, check_K_invariance, lemma_test_function

CRITERIA = []


def criterion(name, budget):
    def deco(fn):
        CRITERIA.append((name, budget, fn))
        return fn

    return deco


@criterion("rank-1 value table", 1.0)
def rank1_values():
    bad = []
    for M in range(-4, 9):
        want = 1 if M >= 0 and M % 2 == 0 else 0
        for q in (3, 5, 9, 27):
            v, _ = laurent_special_values(orb_rank1_split(M), q)
            if v != want:
                bad.append((M, q, v))
    return not bad, f"13 values, mismatches={bad}"


@criterion("rank-1 derivative table", 1.0)
def rank1_derivs():
    bad = []
    n = 0
    for q in (3, 5, 9, 27):
        for M in range(-7, 12, 2):
            _, d = laurent_special_values(orb_rank1_split(M), q)
            factor = max(Fraction(0), Fraction(1 + M, 2))
            n += 1
            if d != LogLinear.log_of(q, -factor):
                bad.append((q, M, d))
    return not bad, f"{n} cases, mismatches={bad}"


@criterion("brute oracle equivalence", 5.0)
def brute_oracle():
    bad = []
    n = 0
    for a in range(-4, 5):
        for b in range(-4, 5):
            for c in range(-4, 5):
                n += 1
                if orb_rank1_split_brute(a, b, c) != orb_rank1_split(a + b - c):
                    bad.append((a, b, c))
    return not bad, f"{n} splits, mismatches={bad[:5]}"


def _random_rank1(spec, rng):
    num = FElem(random_elem(spec, rng, vmin=0, vmax=1), random_elem(spec, rng, vmin=0, vmax=1))
    if num.is_zero():
        num = FElem.from_base(spec.one())
    gamma = num * num.conj().inverse()
    v1, v2 = rng.randint(-3, 4), rng.randint(-3, 4)
    units = [u for u in range(1, 2 * spec.p) if u % spec.p]
    return rank1_orbit(spec, v1, v2, rng.choice(units) * rng.choice((1, -1)), rng.choice(units), gamma=gamma), v1 + v2


@criterion("lattice sum specialises to rank 1", 30.0)
def lattice_rank1():
    rng = random.Random(20240)
    bad = []
    for i in range(50):
        spec = LocalFieldSpec(3 if i % 2 == 0 else 5)
        x, M = _random_rank1(spec, rng)
        if orb_lattice_sum(x).normalized != orb_rank1_split(M):
            bad.append((spec.q, M))
    return not bad, f"50 inputs, mismatches={bad}"


@criterion("orbit invariance (q=3, n=2)", 120.0)
def orbit_invariance():
    spec = LocalFieldSpec(3)
    rng = random.Random(777)
    # orbits on both sides, with zero and nonzero central value
    seeds = [1, 3, 7, 14, 19]
    bad = []
    sides = []
    for seed in seeds:
        x = random_orbit(spec, 2, random.Random(seed))
        r = orb_lattice_sum(x)
        sides.append((r.side, str(r.value0)))
        for _ in range(20):
            h = random_gl(spec, 2, rng)
            ry = orb_lattice_sum(group_action(h, x))
            if (ry.value0, ry.deriv0) != (r.value0, r.deriv0):
                bad.append(seed)
    return not bad, f"{len(seeds)} orbits x 20 translates, (side, value0)={sides}, failures={bad}"


@criterion("CM degree cross-check", 1.0)
def cm_check():
    bad = [(v, q) for q in (3, 5, 9, 27) for v in range(-7, 12, 2) if not cm_factor_crosscheck(v, q)]
    return not bad, f"40 cases, failures={bad}"


@criterion("archimedean closed form vs quadrature", 10.0)
def arch():
    b, theta = 0.25, 0.5
    worst_v = worst_d = 0.0
    for zeta in (-2, -1, -0.5, 0.5, 1, 2):
        for a in (0.5, 1, 2):
            r = orb_arch(zeta, a, b, theta)
            worst_v = max(worst_v, abs(orb_arch_quadrature(zeta, a, b, theta) - r.value))
            if zeta < 0:
                # reference uses scipy's Ei, independent of the package implementation
                ref = 0.5 * math.sqrt(a) * cmath.exp(1j * theta) * cmath.exp(2j * math.pi * zeta * complex(b, a)) * special.expi(-4 * math.pi * a * abs(zeta))
                dq = orb_arch_quadrature(zeta, a, b, theta, deriv=True)
                worst_d = max(worst_d, abs(r.deriv - ref), abs(dq - ref))
    return worst_v < 1e-8 and worst_d < 1e-8, f"18 points, max value err={worst_v:.2e}, max deriv err={worst_d:.2e}"


@criterion("Weil invariance of lattice indicators", 30.0)
def weil_invariance():
    rows = []
    ok = True
    for p in (3, 5):
        spec = LocalFieldSpec(p)
        for d in (0, 1):
            for e in (0, 1):
                res = check_K_invariance(lemma_test_function(spec, d, e), d)
                rows.append(f"q{p}d{d}e{e}={res}")
                ok &= res
        bad = check_K_invariance(SchwartzFn.indicator(spec, 0, 1), 0)
        rows.append(f"q{p} perturbed={bad}")
        ok &= not bad
    return ok, " ".join(rows)


@criterion("Green ODE suite", 10.0)
def green_ode():
    worst_ei = max(
        ei_laplacian_residual(a, un, 1.0, R) for a in (0.5, 1.0, 2.0) for un in (0.5, 1.0, 2.0) for R in (0.25, 1.0, 3.0)
    )
    worst_sph = max(spherical_eigen_residual(2, s, x) for s in (1.5, 2.0, 3.0) for x in (0.1, 0.25, 0.4))
    return worst_ei < 1e-9 and worst_sph < 1e-6, f"Ei grid 27 pts max rel={worst_ei:.2e}; spherical 9 pts max rel={worst_sph:.2e}"


@criterion("Whittaker and Ei sanity", 1.0)
def whittaker_ei():
    rng = random.Random(5)
    worst = 0.0
    for _ in range(200):
        xi, k, a = rng.uniform(-3, 3), rng.randint(-6, 6), rng.uniform(0.1, 3)
        b, c, th = rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4)
        w = whittaker(WhittakerArgs(xi, k, a, b, th))
        e1 = abs(whittaker(WhittakerArgs(xi, k, a, b + c, th)) - cmath.exp(2j * math.pi * xi * c) * w)
        e2 = abs(whittaker(WhittakerArgs(xi, k, a, b, th + c)) - cmath.exp(1j * k * c) * w)
        worst = max(worst, (e1 + e2) / max(1.0, abs(w)))
    r = 1e-4
    series = 0.5772156649015329 + math.log(r) + math.fsum((-r) ** n / (n * math.factorial(n)) for n in range(1, 12))
    err = abs(exp_integral(-r) - series)
    return worst < 1e-12 and err < 1e-10, f"whittaker max err={worst:.2e}; Ei(-1e-4) series err={err:.2e}"


@criterion("Diff parity", 1.0)
def diff_parity():
    rng = random.Random(11)
    sizes = [len(diff_set(random_incoherent_family(rng))) for _ in range(1000)]
    ok = all(s >= 1 and s % 2 == 1 for s in sizes)
    return ok, f"1000 families, sizes in {sorted(set(sizes))}"


def run_one(name, budget, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    within = dt < budget
    status = "PASS" if ok and within else "FAIL"
    line = f"[{status}] {name}: {detail} ({dt:.2f}s / budget {budget:g}s)"
    return ok and within, line


@pytest.mark.parametrize("name,budget,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, budget, fn, pytestconfig):
    passed, line = run_one(name, budget, fn)
    print(line)
    pytestconfig._acceptance_lines.append(line)
    assert passed, line


if __name__ == "__main__":
    results = [run_one(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    print(f"{sum(ok for ok, _ in results)}/{len(results)} criteria passed")
