"""Archimedean special functions: Ei, Whittaker functions, majorants, Green functions.

Conventions: ``<x, y>`` is the bilinear form of a real quadratic space of
signature ``(m, 2)`` and ``q(x) = <x, x> / 2``.  A point ``z`` of the
period domain is a complex vector with ``<z, z> = 0`` and ``<z, conj z> < 0``;
its real and imaginary parts span a negative definite plane.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import special

from .errors import DomainError, OnDivisor, SeriesNonconvergent

EULER_GAMMA = 0.57721566490153286060651209008240243
SERIES_BUDGET = 100_000


# -- exponential integral ---------------------------------------------------


def exp_integral(x: float) -> float:
    """``Ei(x)`` for ``x < 0``: power series for ``|x| <= 1``, continued fraction beyond."""
    if not x < 0:
        raise DomainError("Ei is only implemented for negative arguments")
    r = -x
    if r <= 1.0:
        terms = []
        t = 1.0
        for n in range(1, 200):
            t *= -r / n
            term = t / n
            terms.append(term)
            if abs(term) < 1e-18:
                break
        return EULER_GAMMA + math.log(r) + math.fsum(terms)
    return -_e1_continued_fraction(r)


def _e1_continued_fraction(r: float) -> float:
    # modified Lentz on E1(r) = e^-r / (r + 1 - 1^2/(r + 3 - 2^2/(r + 5 - ...)))
    tiny = 1e-300
    b = r + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * math.exp(-r)
    raise SeriesNonconvergent("E1 continued fraction did not converge")  # pragma: no cover


# -- Whittaker functions ----------------------------------------------------


@dataclass(frozen=True)
class WhittakerArgs:
    xi: float
    k: int
    a: float
    b: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.a <= 0:
            raise DomainError("a must be positive")


def whittaker(args: WhittakerArgs) -> complex:
    """``a^{k/2} e^{2 pi i xi (b + i a)} e^{i k theta}``."""
    return (
        args.a ** (args.k / 2)
        * cmath.exp(2j * math.pi * args.xi * complex(args.b, args.a))
        * cmath.exp(1j * args.k * args.theta)
    )


# -- quadratic space geometry -----------------------------------------------


@dataclass(frozen=True)
class RealQuadPoint:
    """Diagonal Gram matrix of signature ``(m, 2)`` and a point ``z`` of the domain."""

    gram: tuple
    z: tuple

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=float)
        z = np.asarray(self.z, dtype=complex)
        if g.shape != z.shape:
            raise ValueError("gram and z have different lengths")
        if (g < 0).sum() != 2:
            raise ValueError("signature must be (m, 2)")
        scale = max(1.0, float(np.sum(np.abs(g) * np.abs(z) ** 2)))
        if abs(np.sum(g * z * z)) > 1e-12 * scale:
            raise ValueError("<z, z> != 0")
        if not np.sum(g * z * np.conj(z)).real < 0:
            raise ValueError("<z, conj z> must be negative")

    @property
    def m(self) -> int:
        return len(self.gram) - 2

    def pair(self, x, y):
        return np.sum(np.asarray(self.gram, dtype=float) * np.asarray(x) * np.asarray(y))

    def split(self, u) -> tuple[np.ndarray, np.ndarray]:
        """``(u_z, u_{z-perp})``: projections to the plane of ``z`` and its complement."""
        u = np.asarray(u, dtype=float)
        z = np.asarray(self.z, dtype=complex)
        x, y = z.real, z.imag
        uz = self.pair(u, x) / self.pair(x, x) * x + self.pair(u, y) / self.pair(y, y) * y
        return uz, u - uz

    @classmethod
    def standard(cls, m: int, t: float = 0.0) -> "RealQuadPoint":
        """Gram ``diag(1, ..., 1, -1, -1)`` and a point moved off the base point by a boost."""
        gram = (1.0,) * m + (-1.0, -1.0)
        z = np.zeros(m + 2, dtype=complex)
        # boost mixing e_1 and e_{m+1}
        z[0] = math.sinh(t)
        z[m] = math.cosh(t)
        z[m + 1] = 1j
        return cls(gram, tuple(z))


def majorant(u, pt: RealQuadPoint) -> float:
    """``R(u, z) = -<u_z, u_z> = 2 |<u, z>|^2 / |<z, conj z>|``."""
    z = np.asarray(pt.z, dtype=complex)
    uz = pt.pair(np.asarray(u, dtype=float), z)
    zz = pt.pair(z, np.conj(z)).real
    return float(2 * abs(uz) ** 2 / abs(zz))


def kudla_green_value(u, pt: RealQuadPoint, a: float, convention: str = "2pi") -> float:
    """``-Ei(-c a R(u, z))`` with ``c = 2 pi`` (or ``4 pi``); ``-log a`` for ``u = 0``."""
    if a <= 0:
        raise DomainError("a must be positive")
    c = {"2pi": 2 * math.pi, "4pi": 4 * math.pi}.get(convention)
    if c is None:
        raise ValueError(f"unknown convention {convention!r}")
    u = np.asarray(u, dtype=float)
    if not np.any(u):
        return -math.log(abs(a))
    R = majorant(u, pt)
    if R <= 0.0:
        raise OnDivisor("u is orthogonal to z")
    return -exp_integral(-c * a * R)


def gaussian_weights(q_plus: float, q_minus: float, dim_v: int) -> tuple[float, float]:
    """``(Phi_0, Phi_0^+)`` at a vector with ``q(u_+) = q_plus`` and ``q(u_-) = q_minus``."""
    phi0 = math.exp(-2 * math.pi * q_plus + 2 * math.pi * q_minus)
    return phi0, (-4 * math.pi * q_plus + (dim_v / 2 - 1)) * phi0


def gaussian_weights_at(u, pt: RealQuadPoint) -> tuple[float, float]:
    uz, uperp = pt.split(u)
    return gaussian_weights(pt.pair(uperp, uperp) / 2, pt.pair(uz, uz) / 2, pt.m + 2)


# -- hypergeometric function and the secondary spherical function -----------


def _hyp2f1_series(a, b, c, x, budget=SERIES_BUDGET):
    term = 1.0 + 0j
    total = term
    comp = 0j
    small = 0
    for n in range(budget):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        # Kahan summation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise SeriesNonconvergent(f"2F1 series exceeded {budget} terms at x={x}")


def _is_int(z, tol=1e-12) -> bool:
    z = complex(z)
    return abs(z.imag) < tol and abs(z.real - round(z.real)) < tol


def _is_pole(z) -> bool:
    return _is_int(z) and complex(z).real <= 0.5


def hyp2f1(a, b, c, x: float, budget: int = SERIES_BUDGET) -> complex:
    """Gauss ``F(a, b, c; x)`` for ``0 <= x < 1``.

    Direct series for ``x <= 1/2``; the ``x -> 1 - x`` connection formula
    beyond, unless ``c - a - b`` is an integer (or a gamma factor hits a
    pole) in which case the direct series runs under the term budget.
    """
    if not 0 <= x < 1:
        raise DomainError("x must lie in [0, 1)")
    if x <= 0.5:
        return _hyp2f1_series(a, b, c, x, budget)
    d = c - a - b
    if _is_int(d) or any(_is_pole(t) for t in (c - a, c - b, a, b, c)):
        return _hyp2f1_series(a, b, c, x, budget)
    g = special.gamma
    y = 1 - x
    t1 = g(c) * g(d) / (g(c - a) * g(c - b)) * _hyp2f1_series(a, b, 1 - d, y, budget)
    t2 = y**d * g(c) * g(-d) / (g(a) * g(b)) * _hyp2f1_series(c - a, c - b, d + 1, y, budget)
    return complex(t1 + t2)


def _spherical_params(s, m):
    lam = s / 2 + m / 4
    return lam, lam, s / 2 - m / 4 + 1, s + 1


def secondary_spherical(qu: float, qu_perp: float, s: complex, m: int) -> complex:
    """``Gamma(s/2+m/4)/Gamma(s+1) x^{s/2+m/4} F(s/2+m/4, s/2-m/4+1, s+1; x)``, ``x = qu/qu_perp``."""
    if m % 2:
        raise ValueError("m must be even")
    if qu_perp <= 0:
        raise DomainError("q(u_perp) must be positive")
    x = qu / qu_perp
    if not 0 < x <= 1:
        raise DomainError("need 0 < q(u)/q(u_perp) <= 1")
    if x == 1:
        raise SeriesNonconvergent("x = 1 is outside the series budget")
    lam, a, b, c = _spherical_params(s, m)
    pref = special.gamma(lam) / special.gamma(c)
    return complex(pref * x**lam * hyp2f1(a, b, c, x))


def _spherical_x_derivs(x: float, s, m: int):
    """``Phi(x), Phi'(x), Phi''(x)`` for ``Phi = secondary_spherical`` as a function of ``x``."""
    lam, a, b, c = _spherical_params(s, m)
    pref = special.gamma(lam) / special.gamma(c)
    F0 = hyp2f1(a, b, c, x)
    F1 = a * b / c * hyp2f1(a + 1, b + 1, c + 1, x)
    F2 = a * (a + 1) * b * (b + 1) / (c * (c + 1)) * hyp2f1(a + 2, b + 2, c + 2, x)
    xl = x**lam
    p0 = xl * F0
    p1 = lam * x ** (lam - 1) * F0 + xl * F1
    p2 = lam * (lam - 1) * x ** (lam - 2) * F0 + 2 * lam * x ** (lam - 1) * F1 + xl * F2
    return pref * p0, pref * p1, pref * p2


def spherical_R_derivs(alpha: float, R: float, s, m: int):
    """``phi, dphi/dR, d2phi/dR2`` with ``x = alpha / (alpha + R)`` (``alpha = <u, u>``)."""
    x = alpha / (alpha + R)
    f0, f1, f2 = _spherical_x_derivs(x, s, m)
    dx = -alpha / (alpha + R) ** 2
    d2x = 2 * alpha / (alpha + R) ** 3
    return f0, f1 * dx, f2 * dx * dx + f1 * d2x


# -- radial Laplacian -------------------------------------------------------


def radial_laplacian(phi1, phi2, u_norm: float, s0: float, R: float):
    """``D phi = 4R(<u,u> + R) phi'' + 4(<u,u> + (s0 + 1) R) phi'`` from supplied derivatives."""
    if R <= 0:
        raise DomainError("R must be positive")
    return 4 * R * (u_norm + R) * phi2 + 4 * (u_norm + (s0 + 1) * R) * phi1


def radial_laplacian_check(fn: Callable[[float], tuple], u_norm: float, s0: float, R: float):
    """``(D phi)(R)`` where ``fn(R) = (phi, phi', phi'')``."""
    _, d1, d2 = fn(R)
    return radial_laplacian(d1, d2, u_norm, s0, R)


def ei_derivs(a: float) -> Callable[[float], tuple]:
    """``R -> (Ei(-2 pi a R), first, second derivative)``."""
    c = 2 * math.pi * a

    def fn(R):
        r = c * R
        e = math.exp(-r)
        return exp_integral(-r), e / R, -(1 + r) * e / (R * R)

    return fn


def ei_laplacian_expected(a: float, u_norm: float, s0: float, R: float) -> float:
    """``4 (s0 - 4 pi a q(u_{z-perp})) e^{-2 pi a R}`` with ``2 q(u_{z-perp}) = <u,u> + R``."""
    q_perp = (u_norm + R) / 2
    return 4 * (s0 - 4 * math.pi * a * q_perp) * math.exp(-2 * math.pi * a * R)


def ei_laplacian_residual(a: float, u_norm: float, s0: float, R: float) -> float:
    """Relative residual of the Ei identity under the radial Laplacian."""
    got = radial_laplacian_check(ei_derivs(a), u_norm, s0, R)
    want = ei_laplacian_expected(a, u_norm, s0, R)
    return abs(got - want) / max(abs(want), 1e-300)


def spherical_eigen_residual(m: int, s, x: float, alpha: float = 1.0) -> float:
    """Relative residual of ``D phi = (s^2 - s0^2) phi`` with ``s0 = m / 2``."""
    s0 = m / 2
    R = alpha * (1 - x) / x
    phi, d1, d2 = spherical_R_derivs(alpha, R, s, m)
    lhs = radial_laplacian(d1, d2, alpha, s0, R)
    rhs = (s * s - s0 * s0) * phi
    return abs(lhs - rhs) / max(abs(rhs), 1e-300)


def spherical_eigen_residual_fd(m: int, s, x: float, alpha: float = 1.0, h: float = 1e-4) -> float:
    """Same residual with central finite differences in ``R``."""
    s0 = m / 2
    R = alpha * (1 - x) / x

    def phi(r):
        return secondary_spherical(alpha / 2, (alpha + r) / 2, s, m)

    f0, fp, fm = phi(R), phi(R + h), phi(R - h)
    d1 = (fp - fm) / (2 * h)
    d2 = (fp - 2 * f0 + fm) / (h * h)
    lhs = radial_laplacian(d1, d2, alpha, s0, R)
    rhs = (s * s - s0 * s0) * f0
    return abs(lhs - rhs) / abs(rhs)


# -- tables -----------------------------------------------------------------


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _fmt(x):
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, complex):
        if x.imag == 0:
            return repr(x.real)
        return f"{x.real!r}{'+' if x.imag >= 0 else '-'}{abs(x.imag)!r}j"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def ei_table(xs: Iterable[float]) -> tuple[list[str], list[tuple]]:
    return ["x", "Ei"], [(x, exp_integral(x)) for x in xs]


def green_table(Rs: Iterable[float], a: float, convention: str = "2pi") -> tuple[list[str], list[tuple]]:
    c = 2 * math.pi if convention == "2pi" else 4 * math.pi
    return ["R", "a", "green"], [(R, a, -exp_integral(-c * a * R)) for R in Rs]


def spherical_table(m: int, ss: Iterable[float], xs: Iterable[float]) -> tuple[list[str], list[tuple]]:
    xs = list(xs)
    rows = []
    for s in ss:
        for x in xs:
            rows.append((m, s, x, secondary_spherical(x, 1.0, s, m).real))
    return ["m", "s", "x", "phi"], rows
