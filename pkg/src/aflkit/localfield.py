"""Unramified p-adic fields, their unramified quadratic extension, and lattices.

``F0`` is the unramified extension of ``Q_p`` of degree ``f``.  It is
realised as the completion of the number field ``Q(theta)`` where ``theta``
is a root of the first (lexicographically) monic polynomial of degree ``f``
that is irreducible mod ``p``.  Because ``1, theta, ..., theta^(f-1)`` is an
integral basis whose reduction is a basis of the residue field, the
valuation of an element is the minimum ``p``-adic valuation of its rational
coordinates.  Arithmetic on such coordinates is exact.

An element may carry an absolute precision ``prec``: it is then only known
modulo ``p^prec O``.  Operations on such elements either certify their
answer or raise :class:`PrecisionExhausted`.

``F = F0(sqrt(eps))`` with ``eps`` the first non-square unit in a fixed
enumeration of residues.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import PrecisionExhausted, SingularInput
from .exact import as_rat, is_prime, rat_to_str

INF = math.inf
DEFAULT_PRECISION = 40


# -- rational p-adic helpers -------------------------------------------------

def vp(r: Fraction, p: int) -> float:
    """p-adic valuation of a rational (``inf`` for 0)."""
    if r == 0:
        return INF
    r = Fraction(r)
    v = 0
    n, d = r.numerator, r.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def reduce_rat(r: Fraction, p: int, k: int) -> Fraction:
    """Canonical representative of ``r`` modulo ``p^k Z_p``.

    The representative is ``a / p^m`` with ``m = max(0, -v(r))`` and
    ``0 <= a < p^(k+m)``; it is 0 when ``v(r) >= k``.
    """
    v = vp(r, p)
    if v >= k:
        return Fraction(0)
    m = max(0, -int(v))
    x = Fraction(r) * p**m
    mod = p ** (k + m)
    rep = (x.numerator * pow(x.denominator, -1, mod)) % mod
    return Fraction(rep, p**m)


def padic_fractional_part(r: Fraction, p: int) -> Fraction:
    """The element of ``Z[1/p] cap [0, 1)`` congruent to ``r`` mod ``Z_p``."""
    return reduce_rat(r, p, 0)


# -- residue-field polynomials --------------------------------------------

def _polymod_p(a: list[int], g: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(a) - 1 >= dg and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dg:
            break
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dg
        for i, gi in enumerate(g):
            a[i + shift] = (a[i + shift] - c * gi) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _is_irreducible_mod_p(g: list[int], p: int) -> bool:
    deg = len(g) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            h = list(tail) + [1]
            if not _polymod_p(list(g), h, p):
                return False
    return True


def _first_irreducible(p: int, f: int) -> tuple[int, ...]:
    if f == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=f):
        g = list(tail) + [1]
        if g[0] != 0 and _is_irreducible_mod_p(g, p):
            return tuple(g)
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


# -- the field spec -------------------------------------------------------

@dataclass(frozen=True)
class LocalFieldSpec:
    """Unramified ``F0/Q_p`` of residue degree ``f`` with additive-character level.

    ``psi_conductor_exp`` is the integer ``d`` for which the additive
    character ``psi_d(x) = psi_{Q_p}(Tr(p^d x))`` is trivial exactly on
    ``p^{-d} O``.
    """

    p: int
    f: int = 1
    psi_conductor_exp: int = 0

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.f < 1:
            raise ValueError("residue degree f must be >= 1")

    @property
    def q(self) -> int:
        return self.p**self.f

    def with_conductor(self, d: int) -> "LocalFieldSpec":
        return LocalFieldSpec(self.p, self.f, d)

    @cached_property
    def modulus(self) -> tuple[int, ...]:
        """Coefficients (low to high) of the monic minimal polynomial of theta."""
        return _first_irreducible(self.p, self.f)

    @cached_property
    def _reduction_rows(self) -> list[list[int]]:
        # theta^(f+j) expressed in the basis, for j < f - 1
        f, g = self.f, self.modulus
        rows = []
        cur = [-c for c in g[:-1]]  # theta^f
        for _ in range(max(0, f - 1)):
            rows.append(cur)
            nxt = [0] + cur[:-1]
            top = cur[-1]
            nxt = [nxt[i] - top * g[i] for i in range(f)]
            cur = nxt
        rows.append(cur)
        return rows

    @cached_property
    def traces(self) -> tuple[Fraction, ...]:
        """``Tr_{F0/Q_p}(theta^i)`` for ``i < f``."""
        f = self.f
        out = []
        for i in range(f):
            basis = [Fraction(0)] * f
            basis[i] = Fraction(1)
            e = PadicElem(self, tuple(basis))
            tr = Fraction(0)
            for j in range(f):
                unit = [Fraction(0)] * f
                unit[j] = Fraction(1)
                tr += (e * PadicElem(self, tuple(unit))).coords[j]
            out.append(tr)
        return tuple(out)

    # constructors
    def elem(self, x) -> "PadicElem":
        if isinstance(x, PadicElem):
            return x
        if isinstance(x, (int, Fraction, str)):
            c = [Fraction(0)] * self.f
            c[0] = as_rat(x)
            return PadicElem(self, tuple(c))
        coords = tuple(as_rat(c) for c in x)
        if len(coords) != self.f:
            raise ValueError(f"expected {self.f} coordinates, got {len(coords)}")
        return PadicElem(self, coords)

    def zero(self) -> "PadicElem":
        return self.elem(0)

    def one(self) -> "PadicElem":
        return self.elem(1)

    def pi_power(self, k: int) -> "PadicElem":
        return self.elem(Fraction(self.p) ** k)

    def residues(self) -> Iterator["PadicElem"]:
        """Representatives of ``O/pO`` (integer coordinates in ``[0, p)``)."""
        for c in itertools.product(range(self.p), repeat=self.f):
            yield PadicElem(self, tuple(Fraction(x) for x in c))

    def window_reps(self, lo: int, hi: int) -> list["PadicElem"]:
        """Canonical representatives of ``p^lo O / p^hi O`` (``lo <= hi``)."""
        if hi < lo:
            raise ValueError("empty window")
        n = self.p ** (hi - lo)
        scale = Fraction(self.p) ** lo
        return [
            PadicElem(self, tuple(Fraction(a) * scale for a in c))
            for c in itertools.product(range(n), repeat=self.f)
        ]

    @cached_property
    def eps(self) -> "PadicElem":
        """The fixed non-square unit defining ``F = F0(sqrt(eps))``."""
        p, f, q = self.p, self.f, self.q
        g = list(self.modulus)
        for idx in range(1, q):
            digits = []
            n = idx
            for _ in range(f):
                digits.append(n % p)
                n //= p
            # Euler criterion in F_q: x^((q-1)/2) != 1
            acc, base, e = [1], digits[:], (q - 1) // 2
            while e:
                if e & 1:
                    acc = _polymod_p(_polymul(acc, base), g, p) if f > 1 else [acc[0] * base[0] % p]
                base = _polymod_p(_polymul(base, base), g, p) if f > 1 else [base[0] * base[0] % p]
                e >>= 1
            if _trim(acc) != [1]:
                return self.elem([Fraction(x) for x in digits])
        raise RuntimeError("no non-square found")  # pragma: no cover


def _polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _minp(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# -- elements of F0 --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PadicElem:
    """Element of ``F0`` with rational coordinates in the basis ``theta^i``.

    ``prec`` is ``None`` for an exactly known element, otherwise the element
    is known modulo ``p^prec O``.
    """

    spec: LocalFieldSpec
    coords: tuple[Fraction, ...]
    prec: int | None = None

    def _lift(self, other) -> "PadicElem":
        if isinstance(other, PadicElem):
            return other
        if isinstance(other, (int, Fraction)):
            return self.spec.elem(other)
        return NotImplemented

    @property
    def _vlow(self) -> float:
        p = self.spec.p
        return min(vp(c, p) for c in self.coords)

    def valuation(self) -> float:
        v = self._vlow
        if self.prec is not None and v >= self.prec:
            raise PrecisionExhausted(f"valuation >= {self.prec} not determined")
        return v

    def is_zero(self) -> bool:
        """Exactly zero (``False`` for a truncated element that may be nonzero)."""
        if self.prec is not None:
            if self._vlow >= self.prec:
                raise PrecisionExhausted("zero test undetermined at this precision")
            return False
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        return self._vlow >= 0

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return PadicElem(self.spec, tuple(a + b for a, b in zip(self.coords, other.coords)), _minp(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return PadicElem(self.spec, tuple(-a for a in self.coords), self.prec)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        spec = self.spec
        f = spec.f
        if f == 1:
            coords = (self.coords[0] * other.coords[0],)
        else:
            prod = [Fraction(0)] * (2 * f - 1)
            for i, a in enumerate(self.coords):
                if a:
                    for j, b in enumerate(other.coords):
                        prod[i + j] += a * b
            coords_l = prod[:f]
            for j, row in enumerate(spec._reduction_rows):
                c = prod[f + j] if f + j < len(prod) else 0
                if c:
                    for i in range(f):
                        coords_l[i] += c * row[i]
            coords = tuple(coords_l)
        prec = None
        if self.prec is not None:
            prec = self.prec + other._vlow
        if other.prec is not None:
            prec = _minp(prec, other.prec + self._vlow)
        if prec is not None and prec == INF:
            prec = None
        return PadicElem(spec, coords, None if prec is None else int(prec))

    __rmul__ = __mul__

    def inverse(self) -> "PadicElem":
        spec = self.spec
        if self.prec is None and self.is_zero():
            raise ZeroDivisionError("inverse of 0")
        v = self.valuation()
        if spec.f == 1:
            coords = (1 / self.coords[0],)
        else:
            cols = []
            for i in range(spec.f):
                e = [Fraction(0)] * spec.f
                e[i] = Fraction(1)
                cols.append(PadicElem(spec, self.coords) * PadicElem(spec, tuple(e)))
            mat = [[cols[j].coords[i] for j in range(spec.f)] for i in range(spec.f)]
            rhs = [Fraction(1)] + [Fraction(0)] * (spec.f - 1)
            coords = tuple(_solve_rational(mat, rhs))
        prec = None if self.prec is None else int(self.prec - 2 * v)
        return PadicElem(spec, coords, prec)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.spec.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def truncate(self, N: int) -> "PadicElem":
        """Reduce to the canonical representative modulo ``p^N O``."""
        p = self.spec.p
        N = N if self.prec is None else min(N, self.prec)
        return PadicElem(self.spec, tuple(reduce_rat(c, p, N) for c in self.coords), N)

    def reduce_mod(self, k: int) -> "PadicElem":
        """Canonical representative modulo ``p^k O`` as an exact element."""
        p = self.spec.p
        return PadicElem(self.spec, tuple(reduce_rat(c, p, k) for c in self.coords))

    def exact(self) -> "PadicElem":
        return PadicElem(self.spec, self.coords)

    def trace(self) -> Fraction:
        return sum((c * t for c, t in zip(self.coords, self.spec.traces)), Fraction(0))

    def equals_at(self, other, N: int) -> bool:
        return (self - other)._vlow >= N

    def key(self) -> tuple:
        return self.coords

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.spec.elem(other)
        if not isinstance(other, PadicElem):
            return NotImplemented
        return self.spec == other.spec and self.coords == other.coords and self.prec == other.prec

    def __hash__(self):
        return hash((self.coords, self.prec))

    def __repr__(self):
        c = self.coords[0] if self.spec.f == 1 else list(self.coords)
        body = rat_to_str(c) if self.spec.f == 1 else "[" + ", ".join(rat_to_str(x) for x in c) + "]"
        suffix = "" if self.prec is None else f" + O(p^{self.prec})"
        return f"<{body}{suffix}>"

    def to_json(self):
        d = {"coeffs": [rat_to_str(c) for c in self.coords]}
        if self.prec is not None:
            d["precision"] = self.prec
        return d


def _solve_rational(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                c = a[r][col]
                a[r] = [x - c * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


# -- elements of F = F0(sqrt eps) ----------------------------------------

@dataclass(frozen=True, eq=False)
class FElem:
    """``re + im * sqrt(eps)`` in the unramified quadratic extension ``F``."""

    re: PadicElem
    im: PadicElem

    @property
    def spec(self) -> LocalFieldSpec:
        return self.re.spec

    @classmethod
    def from_base(cls, x: PadicElem) -> "FElem":
        return cls(x, x.spec.zero())

    def _lift(self, other):
        if isinstance(other, FElem):
            return other
        if isinstance(other, PadicElem):
            return FElem.from_base(other)
        if isinstance(other, (int, Fraction)):
            return FElem.from_base(self.spec.elem(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return FElem(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return FElem(-self.re, -self.im)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return FElem(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        eps = self.spec.eps
        a, b, c, d = self.re, self.im, other.re, other.im
        return FElem(a * c + eps * (b * d), a * d + b * c)

    __rmul__ = __mul__

    def conj(self) -> "FElem":
        return FElem(self.re, -self.im)

    def norm(self) -> PadicElem:
        return self.re * self.re - self.spec.eps * (self.im * self.im)

    def inverse(self) -> "FElem":
        n_inv = self.norm().inverse()
        return FElem(self.re * n_inv, -(self.im * n_inv))

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = FElem.from_base(self.spec.one())
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    @property
    def _vlow(self) -> float:
        return min(self.re._vlow, self.im._vlow)

    def valuation(self) -> float:
        # 1, sqrt(eps) is an O-basis of O_F since eps is a unit non-square
        v = self._vlow
        prec = _minp(self.re.prec, self.im.prec)
        if prec is not None and v >= prec:
            raise PrecisionExhausted(f"valuation >= {prec} not determined")
        return v

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def is_integral(self) -> bool:
        return self._vlow >= 0

    def in_base(self) -> bool:
        return self.im.is_zero()

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im.prec is None and all(c == 0 for c in self.im.coords):
            return repr(self.re)
        return f"({self.re!r} + {self.im!r}*sqrt(eps))"

    def to_json(self):
        return {"re": self.re.to_json(), "im": self.im.to_json()}


# -- characters -----------------------------------------------------------

def eta(x) -> int:
    """Quadratic character of the unramified extension: ``(-1)^v(x)``."""
    v = x.valuation()
    if v == INF:
        raise ZeroDivisionError("eta(0) is undefined")
    return -1 if int(v) % 2 else 1


def val_and_eta(x) -> tuple[float, int | None]:
    """Valuation and ``eta`` of ``x``; ``(inf, None)`` for an exact zero."""
    if x.prec is None and x.is_zero():
        return INF, None
    v = x.valuation()
    return int(v), (-1 if int(v) % 2 else 1)


def additive_character(x: PadicElem, d: int | None = None) -> Fraction:
    """Phase ``r`` in ``[0, 1)`` with ``psi_d(x) = exp(2 pi i r)``.

    ``psi_d(x) = psi_{Q_p}(Tr_{F0/Q_p}(p^d x))`` which is trivial exactly on
    ``p^{-d} O``.  ``d`` defaults to the conductor exponent of ``x.spec``.
    """
    spec = x.spec
    if d is None:
        d = spec.psi_conductor_exp
    if x.prec is not None and x.prec < -d:
        raise PrecisionExhausted("x not known modulo p^{-d} O")
    return padic_fractional_part(Fraction(spec.p) ** d * x.exact().trace(), spec.p)


# -- generic small-matrix linear algebra ---------------------------------

def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[_dot([a[i][t] for t in range(k)], [b[t][j] for t in range(k)]) for j in range(m)] for i in range(n)]


def _dot(xs, ys):
    acc = xs[0] * ys[0]
    for x, y in zip(xs[1:], ys[1:]):
        acc = acc + x * y
    return acc


def mat_vec(a, v):
    return [_dot(row, v) for row in a]


def vec_mat(v, a):
    return [_dot(v, [a[i][j] for i in range(len(a))]) for j in range(len(a[0]))]


def identity(n, one, zero):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def _pivot_row(col_entries):
    best, best_v = None, INF
    for r, x in col_entries:
        v = x._vlow
        if v < best_v:
            best, best_v = r, v
    return best


def mat_inv(a):
    """Inverse of a square matrix over ``F0`` or ``F`` (Gauss--Jordan)."""
    n = len(a)
    zero = a[0][0] - a[0][0]
    one = _one_like(a[0][0])
    m = [list(row) + identity(n, one, zero)[i] for i, row in enumerate(a)]
    for col in range(n):
        piv = _pivot_row([(r, m[r][col]) for r in range(col, n)])
        if piv is None or m[piv][col]._vlow == INF:
            raise SingularInput("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]._vlow != INF:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def det(a):
    n = len(a)
    m = [list(r) for r in a]
    sign = 1
    acc = _one_like(a[0][0])
    for col in range(n):
        piv = _pivot_row([(r, m[r][col]) for r in range(col, n)])
        if piv is None or m[piv][col]._vlow == INF:
            return a[0][0] - a[0][0]
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        acc = acc * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if m[r][col]._vlow != INF:
                c = m[r][col] * inv
                m[r] = [x - c * y for x, y in zip(m[r], m[col])]
    return acc if sign == 1 else -acc


def _one_like(x):
    if isinstance(x, FElem):
        return FElem.from_base(x.spec.one())
    return x.spec.one()


def min_valuation(entries: Iterable) -> float:
    return min((x._vlow for x in entries), default=INF)


# -- lattices -------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """An ``O``-lattice in ``F0^n`` in column upper-triangular canonical form.

    ``basis[i][j]`` is row ``i`` of basis column ``j``; diagonal entries are
    powers of ``p`` and the entries to the right of the diagonal in row ``i``
    are canonical representatives modulo ``p^{k_i} O``.
    """

    basis: tuple[tuple[PadicElem, ...], ...]
    diag_exps: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def index_exp(self) -> int:
        return sum(self.diag_exps)

    def columns(self) -> list[list[PadicElem]]:
        n = self.n
        return [[self.basis[i][j] for i in range(n)] for j in range(n)]

    def contains(self, v: Sequence[PadicElem]) -> bool:
        y = mat_vec(mat_inv([list(r) for r in self.basis]), list(v))
        return all(c.is_integral() for c in y)

    def key(self) -> tuple:
        return tuple(tuple(x.coords for x in row) for row in self.basis)

    def to_json(self):
        return {
            "basis": [[[rat_to_str(c) for c in x.coords] if x.spec.f > 1 else rat_to_str(x.coords[0]) for x in row] for row in self.basis],
            "index_exp": self.index_exp,
        }


def _hnf_columns(cols: list[list[PadicElem]], dim: int) -> tuple[list[list[PadicElem]], list[int]]:
    """Column upper-triangular echelon form over ``O`` (unreduced off-diagonal)."""
    spec = cols[0][0].spec
    cols = [list(c) for c in cols]
    active = list(range(len(cols)))
    result: list[list[PadicElem] | None] = [None] * dim
    exps = [0] * dim
    for i in reversed(range(dim)):
        best, best_v = None, INF
        for j in active:
            v = cols[j][i]._vlow
            if v < best_v:
                best, best_v = j, v
        if best is None:
            raise SingularInput("columns do not span")
        vpiv = int(cols[best][i].valuation())
        piv = cols[best]
        unit_inv = (piv[i] / spec.pi_power(vpiv)).inverse()
        piv = [x * unit_inv for x in piv]
        piv[i] = spec.pi_power(vpiv) if piv[i].prec is None else piv[i]
        pinv = spec.pi_power(-vpiv)
        for j in active:
            if j != best and cols[j][i]._vlow != INF:
                c = cols[j][i] * pinv
                cols[j] = [x - c * y for x, y in zip(cols[j], piv)]
        active.remove(best)
        result[i] = piv
        exps[i] = vpiv
    return result, exps  # type: ignore[return-value]


def lattice_canonicalize(columns: Sequence[Sequence[PadicElem]]) -> Lattice:
    """Canonical form of the ``O``-span of ``columns`` (at least ``n`` vectors in ``F0^n``)."""
    columns = [list(c) for c in columns]
    if not columns:
        raise SingularInput("no columns")
    dim = len(columns[0])
    if len(columns) < dim:
        raise SingularInput("fewer columns than the dimension")
    spec = columns[0][0].spec
    cols, exps = _hnf_columns(columns, dim)
    for i in reversed(range(dim)):
        for j in range(i + 1, dim):
            entry = cols[j][i]
            rep = entry.reduce_mod(exps[i])
            t = (entry - rep) * spec.pi_power(-exps[i])
            if t._vlow != INF:
                cols[j] = [x - t * y for x, y in zip(cols[j], cols[i])]
            cols[j][i] = rep
    basis = tuple(tuple(cols[j][i] for j in range(dim)) for i in range(dim))
    return Lattice(basis, tuple(exps))


def hnf_sublattices(spec: LocalFieldSpec, n: int, e: int, require_contains: bool = True) -> Iterator[tuple[list[list[PadicElem]], int]]:
    """All canonical bases of lattices ``M`` with ``p^e O^n <= M <= O^n``.

    Yields ``(basis, index_exp)``.  Candidates whose off-diagonal data would
    not contain ``p^e O^n`` are filtered out unless ``require_contains`` is
    false (useful when the caller filters by a finer containment anyway).
    """
    zero = spec.zero()
    reps_cache: dict[int, list[PadicElem]] = {}

    def reps(k):
        if k not in reps_cache:
            reps_cache[k] = spec.window_reps(0, k)
        return reps_cache[k]

    pe = spec.pi_power(e)
    for diag in itertools.product(range(e + 1), repeat=n):
        slots = [(i, j) for j in range(n) for i in range(j)]
        choices = [reps(diag[i]) for i, _ in slots]
        for values in itertools.product(*choices):
            basis = [[zero] * n for _ in range(n)]
            for i in range(n):
                basis[i][i] = spec.pi_power(diag[i])
            for (i, j), val in zip(slots, values):
                basis[i][j] = val
            if require_contains and n > 1 and not _contains_scaled_identity(basis, pe):
                continue
            yield basis, sum(diag)


def _contains_scaled_identity(basis, pe) -> bool:
    inv = upper_triangular_inverse(basis)
    return all((x * pe).is_integral() for row in inv for x in row)


def upper_triangular_inverse(u):
    """Inverse of an invertible upper-triangular matrix by back substitution."""
    n = len(u)
    zero = u[0][0] - u[0][0]
    inv = [[zero] * n for _ in range(n)]
    for i in range(n):
        inv[i][i] = u[i][i].inverse()
    for j in range(n):
        for i in range(j - 1, -1, -1):
            acc = zero
            for k in range(i + 1, j + 1):
                acc = acc + u[i][k] * inv[k][j]
            inv[i][j] = -(acc * inv[i][i])
    return inv
