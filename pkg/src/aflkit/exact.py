"""Exact arithmetic kernels.

Rationals are :class:`fractions.Fraction`.  ``LaurentPoly`` is a Laurent
polynomial in ``X = q^{-s}`` with rational coefficients, and ``LogLinear``
models a real number ``real + sum_l r_l log l`` with exact rational ``r_l``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rat = Fraction
RatLike = Union[int, Fraction, str]

DEFAULT_REAL_TOL = 1e-9


def as_rat(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def rat_to_str(x: Fraction) -> str:
    """Canonical string form: ``"n"`` for integers, ``"n/d"`` otherwise."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s)


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(l, f)`` with ``q == l**f`` and ``l`` prime."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    n = q
    d = 2
    while d * d <= n:
        if n % d == 0:
            break
        d += 1
    else:
        return q, 1
    ell, f = d, 0
    while n % ell == 0:
        n //= ell
        f += 1
    if n != 1:
        raise ValueError(f"{q} is not a prime power")
    return ell, f


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factor_prime_power(n) == (n, 1)


class LaurentPoly:
    """Finitely supported map ``k -> c_k`` read as ``sum c_k X^k``.

    Instances are immutable and never store zero coefficients.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, RatLike] | Iterable[tuple[int, RatLike]] | None = None):
        items = coeffs.items() if isinstance(coeffs, Mapping) else (coeffs or ())
        acc: dict[int, Fraction] = {}
        for k, c in items:
            k = int(k)
            acc[k] = acc.get(k, Fraction(0)) + as_rat(c)
        self._coeffs = {k: c for k, c in sorted(acc.items()) if c != 0}
        self._hash = None

    @classmethod
    def monomial(cls, k: int, c: RatLike = 1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def constant(cls, c: RatLike) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def coeff(self, k: int) -> Fraction:
        return self._coeffs.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(list(self.items()) + list(other.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Fraction] = {}
        for k1, c1 in self.items():
            for k2, c2 in other.items():
                out[k1 + k2] = out.get(k1 + k2, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``X^k``."""
        return LaurentPoly({e + k: c for e, c in self.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._coeffs.items()))
        return self._hash

    def __call__(self, x: RatLike) -> Fraction:
        """Evaluate at a nonzero rational value of ``X``."""
        x = as_rat(x)
        return sum((c * x**k for k, c in self.items()), Fraction(0))

    def at_s(self, s: complex, q: int) -> complex:
        """Numerical value at ``X = q^{-s}``."""
        return sum(float(c) * q ** (-k * s) for k, c in self.items())

    def __repr__(self):
        if not self._coeffs:
            return "LaurentPoly(0)"
        terms = " + ".join(f"{rat_to_str(c)}*X^{k}" for k, c in self.items())
        return f"LaurentPoly({terms})"

    def to_json(self) -> dict[str, str]:
        return {str(k): rat_to_str(c) for k, c in self.items()}

    @classmethod
    def from_json(cls, d: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(k): Fraction(v) for k, v in d.items()})


class LogLinear:
    """Real number ``real + sum_l r_l * log(l)`` over finitely many primes.

    The log coefficients are exact rationals; ``real`` is a float and only
    carries archimedean quantities.
    """

    __slots__ = ("real", "_logs")

    def __init__(self, real: float = 0.0, logs: Mapping[int, RatLike] | None = None):
        self.real = float(real)
        acc: dict[int, Fraction] = {}
        for ell, r in (logs or {}).items():
            ell = int(ell)
            if not is_prime(ell):
                raise ValueError(f"log coefficient keyed by non-prime {ell}")
            acc[ell] = acc.get(ell, Fraction(0)) + as_rat(r)
        self._logs = tuple(sorted((ell, r) for ell, r in acc.items() if r != 0))

    @classmethod
    def log_of(cls, q: int, coeff: RatLike = 1) -> "LogLinear":
        """``coeff * log q`` for a prime power ``q``."""
        ell, f = factor_prime_power(q)
        return cls(0.0, {ell: as_rat(coeff) * f})

    @property
    def logs(self) -> dict[int, Fraction]:
        return dict(self._logs)

    def coeff(self, ell: int) -> Fraction:
        return self.logs.get(ell, Fraction(0))

    def is_exact(self) -> bool:
        return self.real == 0.0

    def __add__(self, other):
        if isinstance(other, (int, float)) and not isinstance(other, bool):
            return LogLinear(self.real + other, self.logs)
        if not isinstance(other, LogLinear):
            return NotImplemented
        logs = self.logs
        for ell, r in other._logs:
            logs[ell] = logs.get(ell, Fraction(0)) + r
        return LogLinear(self.real + other.real, logs)

    __radd__ = __add__

    def __neg__(self):
        return LogLinear(-self.real, {ell: -r for ell, r in self._logs})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction)) or isinstance(c, bool):
            return NotImplemented
        c = Fraction(c)
        return LogLinear(self.real * float(c), {ell: r * c for ell, r in self._logs})

    __rmul__ = __mul__

    def __float__(self):
        return self.real + sum(float(r) * math.log(ell) for ell, r in self._logs)

    def __eq__(self, other):
        if not isinstance(other, LogLinear):
            return NotImplemented
        return self.real == other.real and self._logs == other._logs

    def __hash__(self):
        return hash((self.real, self._logs))

    def __repr__(self):
        parts = [repr(self.real)] + [f"{rat_to_str(r)}*log({ell})" for ell, r in self._logs]
        return "LogLinear(" + " + ".join(parts) + ")"

    def to_json(self) -> dict:
        real: float | int = int(self.real) if self.real.is_integer() else self.real
        return {"real": real, "logs": {str(ell): rat_to_str(r) for ell, r in self._logs}}

    @classmethod
    def from_json(cls, d: Mapping) -> "LogLinear":
        return cls(float(d.get("real", 0.0)), {int(k): Fraction(v) for k, v in d.get("logs", {}).items()})


def laurent_special_values(P: LaurentPoly, q: int) -> tuple[Fraction, LogLinear]:
    """Value and first ``s``-derivative at ``s = 0`` of ``P(q^{-s})``.

    ``d/ds X^k = -k log(q) X^k``, so the derivative is
    ``-(sum k c_k) log q``, expressed in ``log l`` for ``q = l^f``.
    """
    ell, f = factor_prime_power(q)
    value = sum((c for _, c in P.items()), Fraction(0))
    moment = sum((k * c for k, c in P.items()), Fraction(0))
    return value, LogLinear(0.0, {ell: -moment * f})


def loglin_reduce_eq(x: LogLinear, y: LogLinear, S: Iterable[int] = (), tol: float = DEFAULT_REAL_TOL) -> bool:
    """Equality in ``R / sum_{l in S} Q log l``.

    Log coefficients outside ``S`` are compared exactly, the real parts
    within ``tol`` (absolute).
    """
    S = set(S)
    d = x - y
    if any(ell not in S for ell, _ in d._logs):
        return False
    return abs(d.real) <= tol
