"""Orbital integrals: rank-1 closed forms, lattice sums, archimedean integrals.

Non-archimedean orbital integrals are Laurent polynomials in ``X = q^{-s}``.
For the unit test function ``1_{O^n} x 1_{O^n}`` and a regular semisimple
``(gamma, u1, u2)`` the integral is a coset sum over ``O``-lattices
``L = h O^n`` with

* ``gamma (L (x) O_F) <= L (x) O_F``,
* ``u1`` in ``L``,
* ``u2(L) <= O``,

each contributing ``(-1)^{d(L)} X^{d(L)}`` with ``d(L) = v(det h)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy import integrate

from .errors import (
    BoxUnstable,
    DomainError,
    MissingPlaceData,
    NotRegularSemisimple,
    QuadratureNonconvergent,
)
from .exact import LaurentPoly, LogLinear, laurent_special_values
from .green import exp_integral
from .localfield import (
    FElem,
    LocalFieldSpec,
    PadicElem,
    hnf_sublattices,
    lattice_canonicalize,
    mat_inv,
    mat_mul,
    min_valuation,
    upper_triangular_inverse,
)
from .orbits import OrbitDatum, transfer_factor_and_side

# -- rank 1 ------------------------------------------------------------------


def orb_rank1_split(M: int) -> LaurentPoly:
    """``sum_{j=0}^{M} (-1)^j X^{-j}`` (zero for ``M < 0``)."""
    return LaurentPoly({-j: (-1) ** j for j in range(M + 1)})


def orb_rank1_split_brute(v_u1: int, v_u2: int, v_c: int) -> LaurentPoly:
    """Direct coset sum over ``v(t)`` in ``[v_c - v_u2, v_u1]``.

    Each coset ``t O^x`` contributes ``eta(t) |t|^s = (-1)^k X^k``; the
    normalisation ``eta(u1) |u1|^{-s}`` is applied at the end.
    """
    acc = LaurentPoly.zero()
    for k in range(v_c - v_u2, v_u1 + 1):
        acc = acc + LaurentPoly.monomial(k, (-1) ** (k % 2))
    norm = LaurentPoly.monomial(-v_u1, (-1) ** (v_u1 % 2))
    return acc * norm


def orb_rank1_hermitian(v_delta_zeta: int) -> Fraction:
    return Fraction(1) if v_delta_zeta >= 0 and v_delta_zeta % 2 == 0 else Fraction(0)


# -- results -----------------------------------------------------------------


@dataclass(frozen=True)
class OrbResult:
    """Raw lattice-sum polynomial with its transfer data.

    ``poly`` is the raw coset sum.  Special values are read off the
    normalised polynomial ``omega * X^{-shift} * poly`` where ``shift`` is
    the valuation of ``det(u1, gamma u1, ...)``; this is the same
    normalisation ``eta(u1)|u1|^{-s}`` used in rank 1 and makes the special
    values constant on orbits.
    """

    poly: LaurentPoly
    q: int
    omega: int = 1
    shift: int = 0
    side: int | None = None

    @property
    def normalized(self) -> LaurentPoly:
        return self.poly.shift(-self.shift) * self.omega

    @property
    def value0(self) -> Fraction:
        return laurent_special_values(self.normalized, self.q)[0]

    @property
    def deriv0(self) -> LogLinear:
        return laurent_special_values(self.normalized, self.q)[1]

    @property
    def raw_deriv0(self) -> LogLinear:
        return laurent_special_values(self.poly, self.q)[1] * self.omega

    def to_json(self) -> dict:
        return {
            "poly": self.normalized.to_json(),
            "raw_poly": self.poly.to_json(),
            "value0": str(self.value0),
            "deriv0": self.deriv0.to_json(),
            "omega": self.omega,
            "side": self.side,
        }


@dataclass(frozen=True)
class ArchOrbResult:
    value: complex
    deriv: complex | None


# -- general rank: lattice sums ---------------------------------------------


def _realify_cols(vecs: Sequence[Sequence[FElem]], spec: LocalFieldSpec) -> list[list[PadicElem]]:
    """O-generators in ``F0^{2n}`` of the ``O_F``-span of ``vecs``."""
    eps = spec.eps
    cols = []
    for w in vecs:
        cols.append([x.re for x in w] + [x.im for x in w])
        cols.append([eps * x.im for x in w] + [x.re for x in w])
    return cols


def _is_integral_F(m) -> bool:
    return all(x._vlow >= 0 for row in m for x in row)


def _pinch(x: OrbitDatum):
    """``(P, N, vdetP)``: lattices ``Lambda_max = P O^n`` and ``P N O^n = Lambda_lo``."""
    spec, n = x.spec, x.n
    # rows u2 gamma^i, realified into F0 rows; Lambda_max is the dual of their O-span
    g = x.gamma_matrix()
    row = [FElem.from_base(c) for c in x.u2]
    rows = []
    for _ in range(n):
        rows.append(row)
        row = [sum((row[k] * g[k][j] for k in range(n)), FElem.from_base(spec.zero())) for j in range(n)]
    gens = []
    for r in rows:
        gens.append([c.re for c in r])
        gens.append([c.im for c in r])
    H = lattice_canonicalize(gens)
    Hmat = [list(r) for r in H.basis]
    HT = [[Hmat[j][i] for j in range(n)] for i in range(n)]
    P = mat_inv(HT)
    vdetP = -H.index_exp
    # Lambda_lo = O_F-span(gamma^i u1) cap F0^n
    big = lattice_canonicalize(_realify_cols(x.powers_u1[:n], spec))
    lo = [[big.basis[i][j] for j in range(n)] for i in range(n)]
    N = mat_mul(mat_inv(P), lo)
    return P, N, vdetP


def _lift_F(m):
    return [[FElem.from_base(c) if isinstance(c, PadicElem) else c for c in r] for r in m]


def orb_lattice_sum(x: OrbitDatum, spec: LocalFieldSpec | None = None, box: int | None = None, method: str = "pinched") -> OrbResult:
    """Orbital integral of the unit test function as a coset sum over lattices.

    ``method="pinched"`` enumerates lattices between the ``O_F``-span of the
    ``gamma^i u1`` (cut down to ``F0^n``) and the dual of the ``u2 gamma^i``,
    which contain every contributing lattice.  ``method="box"`` literally
    tests all lattices with ``p^N O^n <= L <= p^-N O^n`` at ``N = box`` and
    ``N + 1`` and raises :class:`BoxUnstable` if they disagree.
    """
    spec = spec or x.spec
    if not x.is_rs():
        raise NotRegularSemisimple("disc = 0")
    omega, side = transfer_factor_and_side(x)
    shift = int(x.cyclic_det.valuation())
    if method == "pinched":
        poly = _pinched_sum(x, spec)
    elif method == "box":
        N = default_box(x) if box is None else box
        poly = _box_sum(x, spec, N)
        if _box_sum(x, spec, N + 1) != poly:
            raise BoxUnstable(f"lattice sum changes between box {N} and {N + 1}")
    else:
        raise ValueError(f"unknown method {method!r}")
    return OrbResult(poly, spec.q, omega, shift, side)


def default_box(x: OrbitDatum) -> int:
    entries = [c for r in x.gamma for c in r] + list(x.u1) + list(x.u2)
    minval = min_valuation(entries)
    return int(x.disc.valuation()) + max(0, -int(minval)) + 2


def _pinched_sum(x: OrbitDatum, spec: LocalFieldSpec) -> LaurentPoly:
    n = x.n
    P, N, vdetP = _pinch(x)
    if not all(c.is_integral() for r in N for c in r):
        return LaurentPoly.zero()  # some pairing u2 gamma^i u1 is not integral
    Ninv = mat_inv(N)
    e = max(0, -int(min_valuation([c for r in Ninv for c in r])))
    PF = _lift_F(P)
    gP = mat_mul(mat_mul(_lift_F(mat_inv(P)), x.gamma_matrix()), PF)
    gPinv = mat_inv(gP)
    acc: dict[int, int] = {}
    for M, idx in hnf_sublattices(spec, n, e, require_contains=False):
        Minv = upper_triangular_inverse(M)
        if not all(c.is_integral() for r in mat_mul(Minv, N) for c in r):
            continue
        MF, MinvF = _lift_F(M), _lift_F(Minv)
        if not _is_integral_F(mat_mul(mat_mul(MinvF, gP), MF)):
            continue
        # gamma conj(gamma) = 1 forces stability under gamma^-1 as well
        assert _is_integral_F(mat_mul(mat_mul(MinvF, gPinv), MF)), "gamma-stable lattice not gamma^-1-stable"
        d = vdetP + idx
        acc[d] = acc.get(d, 0) + (-1) ** (d % 2)
    return LaurentPoly(acc)


def _box_sum(x: OrbitDatum, spec: LocalFieldSpec, N: int) -> LaurentPoly:
    n = x.n
    g = x.gamma_matrix()
    u1 = list(x.u1)
    u2 = list(x.u2)
    scale = spec.pi_power(-N)
    acc: dict[int, int] = {}
    for M, idx in hnf_sublattices(spec, n, 2 * N):
        B = [[c * scale for c in r] for r in M]
        Binv = upper_triangular_inverse(B)
        # u1 in L
        if not all(sum((Binv[i][j] * u1[j] for j in range(n)), spec.zero()).is_integral() for i in range(n)):
            continue
        # u2(L) <= O
        if not all(sum((u2[i] * B[i][j] for i in range(n)), spec.zero()).is_integral() for j in range(n)):
            continue
        if not _is_integral_F(mat_mul(mat_mul(_lift_F(Binv), g), _lift_F(B))):
            continue
        d = idx - n * N
        acc[d] = acc.get(d, 0) + (-1) ** (d % 2)
    return LaurentPoly(acc)


# -- archimedean ------------------------------------------------------------


def _check_arch(zeta: float, a: float):
    if a <= 0:
        raise DomainError("a must be positive")
    if zeta == 0:
        raise DomainError("zeta must be nonzero")


def orb_arch(zeta: float, a: float, b: float = 0.0, theta: float = 0.0) -> ArchOrbResult:
    """Closed form of the archimedean orbital integral and, for ``zeta < 0``, its derivative."""
    _check_arch(zeta, a)
    base = cmath.exp(1j * theta) * math.sqrt(a) * cmath.exp(2j * math.pi * zeta * complex(b, a))
    if zeta > 0:
        return ArchOrbResult(base, None)
    return ArchOrbResult(0j, 0.5 * base * exp_integral(-4 * math.pi * a * abs(zeta)))


def _phi_h(x, y, a, b, theta):
    """Weil translate of ``1/2 (x + y) exp(-pi (x^2 + y^2))`` by ``h = n(b) m(sqrt a) k_theta``."""
    ra = math.sqrt(a)
    return (
        cmath.exp(1j * theta)
        * np.exp(2j * math.pi * b * x * y)
        * ra
        * 0.5
        * (ra * x + ra * y)
        * np.exp(-math.pi * a * (x * x + y * y))
    )


def orb_arch_quadrature(zeta: float, a: float, b: float = 0.0, theta: float = 0.0, s: float = 0.0, u1: float = 1.0, deriv: bool = False, wmax: float = 30.0) -> complex:
    """Numerical ``Orb(s)`` (or its ``s``-derivative) on ``R^x``.

    ``Orb(s) = sgn(u1)|u1|^{-s} int phi_h(u1/t, t zeta/u1) |t|^s sgn(t) dt/|t|``,
    integrated in ``w = log|t|`` over ``[-wmax, wmax]`` for both signs of ``t``.
    """
    _check_arch(zeta, a)
    lu = math.log(abs(u1))

    def integrand(w, sgn):
        t = sgn * math.exp(w)
        val = _phi_h(u1 / t, t * zeta / u1, a, b, theta) * math.exp(s * w) * sgn
        if deriv:
            val = val * (w - lu)
        return val

    # the Gaussian factor peaks at |t|^2 = u1^2 / |zeta|; split there so the
    # first Kronrod pass cannot step over the bump
    w0 = lu - 0.5 * math.log(abs(zeta))
    cuts = sorted({-wmax, max(-wmax, w0 - 4), min(wmax, w0 + 4), wmax})
    total = 0j
    for sgn in (1.0, -1.0):
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            val, err = integrate.quad(integrand, lo, hi, args=(sgn,), complex_func=True, epsabs=1e-14, epsrel=1e-12, limit=500)
            if not np.isfinite(val) or abs(err) > 1e-8:
                raise QuadratureNonconvergent(f"quadrature error estimate {err}")
            total += val
    return math.copysign(1.0, u1) * math.exp(-s * lu) * total


# -- assembly of local derivative terms -------------------------------------

PlaceResult = "OrbResult | ArchOrbResult"


def _value(r):
    return r.value0 if isinstance(r, OrbResult) else r.value


def _deriv(r):
    if isinstance(r, OrbResult):
        return r.deriv0
    if r.deriv is None:
        raise ValueError("archimedean derivative not available")
    return r.deriv


def _as_loglinear(d, factor) -> LogLinear:
    """``d * factor`` with ``d`` a LogLinear or complex and ``factor`` rational or complex."""
    if isinstance(d, LogLinear) and isinstance(factor, Fraction):
        return d * factor
    z = complex(float(d) if isinstance(d, LogLinear) else d) * complex(factor)
    if abs(z.imag) > 1e-9 * max(1.0, abs(z)):
        raise ValueError(f"non-real contribution {z}")
    return LogLinear(z.real)


def _places(table) -> list:
    places: list = []
    for _, res in table:
        for w in res:
            if w not in places:
                places.append(w)
    return places


def assemble_partial_dJ(orbit_table: Sequence[tuple[object, Mapping[object, object]]], v) -> LogLinear:
    """``sum over orbits of deriv_v * prod_{w != v} value_w``."""
    if not orbit_table:
        return LogLinear()
    places = _places(orbit_table)
    if v not in places:
        raise MissingPlaceData(f"place {v!r} not in table")
    total = LogLinear()
    for oid, res in orbit_table:
        missing = [w for w in places if w not in res]
        if missing:
            raise MissingPlaceData(f"orbit {oid!r} lacks places {missing!r}")
        factor = Fraction(1)
        for w in places:
            if w != v:
                val = _value(res[w])
                factor = factor * val if isinstance(val, Fraction) and isinstance(factor, Fraction) else complex(factor) * complex(val)
        total = total + _as_loglinear(_deriv(res[v]), factor)
    return total


def total_derivative(orbit_table: Sequence[tuple[object, Mapping[object, object]]]) -> LogLinear:
    """Derivative at ``s = 0`` of ``sum_orbits prod_w Orb_w(s)`` by full expansion.

    Each non-archimedean factor is expanded into its monomials
    ``c_k q_w^{-k s}``; the product is a sum of exponentials whose
    derivatives are read off directly.  Archimedean factors enter as
    first-order jets.
    """
    places = _places(orbit_table)
    total = LogLinear()
    for oid, res in orbit_table:
        if any(w not in res for w in places):
            raise MissingPlaceData(f"orbit {oid!r} incomplete")
        terms: list[tuple[object, LogLinear]] = [(Fraction(1), LogLinear())]
        arch_val, arch_der, has_arch = complex(1), complex(0), False
        for w in places:
            r = res[w]
            if isinstance(r, OrbResult):
                new = []
                for c0, rate in terms:
                    for k, c in r.normalized.items():
                        new.append((c0 * c, rate + LogLinear.log_of(r.q, -k)))
                terms = new
            else:
                d = 0j if r.deriv is None and r.value == 0 else _deriv(r)
                arch_der = arch_der * r.value + arch_val * d
                arch_val = arch_val * r.value
                has_arch = True
        exact_val = sum((c for c, _ in terms), Fraction(0))
        exact_der = LogLinear()
        for c, rate in terms:
            exact_der = exact_der + rate * c
        if has_arch:
            total = total + _as_loglinear(exact_der, arch_val) + _as_loglinear(arch_der, exact_val)
        else:
            total = total + exact_der
    return total
