"""Points of ``S_n x V'_n``: invariants, the group action, transfer factor and side.

``S_n`` is the set of ``gamma`` in ``GL_n(F)`` with ``gamma * conj(gamma) = 1``
and ``V'_n = F0^n x F0_n`` (column vector ``u1``, row vector ``u2``).
``GL_n(F0)`` acts by ``h.(gamma, u1, u2) = (h^-1 gamma h, h^-1 u1, u2 h)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import NotRegularSemisimple, SingularInput
from .localfield import (
    INF,
    FElem,
    LocalFieldSpec,
    PadicElem,
    det,
    identity,
    mat_inv,
    mat_mul,
    mat_vec,
    vec_mat,
)


def _F(x) -> FElem:
    return x if isinstance(x, FElem) else FElem.from_base(x)


def _mat_conj(m):
    return [[x.conj() for x in row] for row in m]


def _mat_F(m):
    return [[_F(x) for x in row] for row in m]


def _sign(v) -> int:
    return -1 if int(v) % 2 else 1


@dataclass(frozen=True, eq=False)
class OrbitDatum:
    """``(gamma, u1, u2)`` with ``gamma`` over ``F`` and ``u1``, ``u2`` over ``F0``."""

    gamma: tuple
    u1: tuple
    u2: tuple
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(tuple(_F(x) for x in row) for row in self.gamma))
        object.__setattr__(self, "u1", tuple(self.u1))
        object.__setattr__(self, "u2", tuple(self.u2))
        n = len(self.gamma)
        if any(len(r) != n for r in self.gamma) or len(self.u1) != n or len(self.u2) != n:
            raise ValueError("inconsistent dimensions")
        if self.check and not self.is_symmetric():
            raise ValueError("gamma * conj(gamma) != 1")

    @property
    def n(self) -> int:
        return len(self.gamma)

    @property
    def spec(self) -> LocalFieldSpec:
        return self.gamma[0][0].spec

    def gamma_matrix(self):
        return [list(r) for r in self.gamma]

    def is_symmetric(self) -> bool:
        prod = mat_mul(self.gamma_matrix(), _mat_conj(self.gamma_matrix()))
        n = self.n
        for i in range(n):
            for j in range(n):
                d = prod[i][j] - (1 if i == j else 0)
                if d._vlow != INF:
                    return False
        return True

    @cached_property
    def powers_u1(self) -> list[list[FElem]]:
        """``gamma^i u1`` for ``i < 2n``."""
        g = self.gamma_matrix()
        v = [_F(x) for x in self.u1]
        out = [v]
        for _ in range(2 * self.n - 1):
            v = mat_vec(g, v)
            out.append(v)
        return out

    @cached_property
    def pairings(self) -> list[FElem]:
        """``u2 gamma^i u1`` for ``i = 0 .. 2n-2``."""
        u2 = [_F(x) for x in self.u2]
        return [sum((a * b for a, b in zip(u2, w)), _F(self.spec.zero())) for w in self.powers_u1[: 2 * self.n - 1]]

    @cached_property
    def disc(self) -> FElem:
        n = self.n
        pr = self.pairings
        return det([[pr[i + j] for j in range(n)] for i in range(n)])

    @cached_property
    def alpha(self) -> list[FElem]:
        """Characteristic polynomial of ``gamma`` (coefficients low to high, monic)."""
        return charpoly(self.gamma_matrix())

    def is_rs(self) -> bool:
        return self.disc._vlow != INF

    @cached_property
    def cyclic_det(self) -> FElem:
        n = self.n
        cols = self.powers_u1[:n]
        return det([[cols[j][i] for j in range(n)] for i in range(n)])

    def to_json(self):
        return {
            "gamma": [[x.to_json() for x in row] for row in self.gamma],
            "u1": [x.to_json() for x in self.u1],
            "u2": [x.to_json() for x in self.u2],
        }


def charpoly(m) -> list:
    """Faddeev--LeVerrier; returns ``[c_0, ..., c_{n-1}, 1]``."""
    n = len(m)
    one = _F(m[0][0].spec.one()) if isinstance(m[0][0], FElem) else m[0][0].spec.one()
    zero = one - one
    coeffs = [zero] * n + [one]
    Mk = [[zero] * n for _ in range(n)]
    c = one
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = mat_mul(m, Mk)
        Mk = [[AM[i][j] + (c if i == j else zero) for j in range(n)] for i in range(n)]
        AMk = mat_mul(m, Mk)
        tr = AMk[0][0]
        for i in range(1, n):
            tr = tr + AMk[i][i]
        c = tr * Fraction(-1, k)
        coeffs[n - k] = c
    return coeffs


def invariants_and_rs(x: OrbitDatum):
    """``(alpha, pairings, disc, is_rs)``."""
    return x.alpha, x.pairings, x.disc, x.is_rs()


def group_action(h: Sequence[Sequence[PadicElem]], x: OrbitDatum) -> OrbitDatum:
    """``h.(gamma, u1, u2) = (h^-1 gamma h, h^-1 u1, u2 h)`` for ``h`` in ``GL_n(F0)``."""
    h = [list(r) for r in h]
    try:
        hinv = mat_inv(h)
    except SingularInput:
        raise SingularInput("h is not invertible")
    hF, hinvF = _mat_F(h), _mat_F(hinv)
    gamma = mat_mul(mat_mul(hinvF, x.gamma_matrix()), hF)
    u1 = mat_vec(hinv, list(x.u1))
    u2 = vec_mat(list(x.u2), h)
    return OrbitDatum(gamma, u1, u2, check=False)


def transfer_factor_and_side(x: OrbitDatum) -> tuple[int, int]:
    """``omega = eta(det(u1, gamma u1, ..., gamma^{n-1} u1))`` and ``side = eta(disc)``.

    The cyclic determinant lies in ``F``; ``eta`` is evaluated through the
    valuation of ``F`` which restricts to ``v`` on ``F0``.  This makes
    ``omega(h.x) = eta(det h) omega(x)``.
    """
    if not x.is_rs():
        raise NotRegularSemisimple("disc = 0")
    return _sign(x.cyclic_det.valuation()), _sign(x.disc.valuation())


def equal_invariants(x: OrbitDatum, y: OrbitDatum) -> bool:
    return list(x.alpha) == list(y.alpha) and list(x.pairings) == list(y.pairings)


# -- unitary side ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HermOrbitDatum:
    """``(g, u)`` with ``g`` unitary for the hermitian Gram matrix ``J``.

    The hermitian form is ``<x, y> = conj(y)^t J x``.
    """

    g: tuple
    u: tuple
    J: tuple

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(tuple(_F(x) for x in r) for r in self.g))
        object.__setattr__(self, "u", tuple(_F(x) for x in self.u))
        object.__setattr__(self, "J", tuple(tuple(_F(x) for x in r) for r in self.J))
        g, J = [list(r) for r in self.g], [list(r) for r in self.J]
        gt_conj = [[g[j][i].conj() for j in range(len(g))] for i in range(len(g))]
        lhs = mat_mul(mat_mul(gt_conj, J), g)
        if any((lhs[i][j] - J[i][j])._vlow != INF for i in range(len(g)) for j in range(len(g))):
            raise ValueError("g is not unitary for J")

    @property
    def n(self) -> int:
        return len(self.g)

    def herm(self, x, y) -> FElem:
        J = [list(r) for r in self.J]
        Jx = mat_vec(J, list(x))
        acc = _F(self.u[0].spec.zero())
        for a, b in zip(Jx, y):
            acc = acc + b.conj() * a
        return acc

    @cached_property
    def pairings(self) -> list[FElem]:
        """``<g^i u, u>`` for ``i = 0 .. 2n-2``."""
        g = [list(r) for r in self.g]
        v = list(self.u)
        out = []
        for _ in range(2 * self.n - 1):
            out.append(self.herm(v, list(self.u)))
            v = mat_vec(g, v)
        return out

    @cached_property
    def alpha(self) -> list[FElem]:
        return charpoly([list(r) for r in self.g])


def match_rank1(y: HermOrbitDatum) -> OrbitDatum:
    """The split-side point ``(g, 1, <u, u>)`` with the same invariants (``n = 1``)."""
    if y.n != 1:
        raise ValueError("explicit matching only in rank 1")
    zeta = y.pairings[0]
    if not zeta.in_base():
        raise ValueError("<u, u> must lie in F0")
    spec = zeta.spec
    return OrbitDatum(((y.g[0][0],),), (spec.one(),), (zeta.re,))


def hermitian_space_sign(y: HermOrbitDatum) -> int:
    """``eta(det J)``: +1 for the space with even determinant class."""
    d = det([list(r) for r in y.J])
    return _sign(d.valuation())


# -- random data -----------------------------------------------------------

def random_elem(spec: LocalFieldSpec, rng: random.Random, lo: int = -2, hi: int = 2, vmin: int = 0, vmax: int = 1) -> PadicElem:
    coords = [Fraction(rng.randint(lo, hi)) * Fraction(spec.p) ** rng.randint(vmin, vmax) for _ in range(spec.f)]
    return spec.elem(coords)


def random_gl(spec: LocalFieldSpec, n: int, rng: random.Random, vmin: int = -1, vmax: int = 1):
    """Random invertible matrix over ``F0`` with small entries."""
    while True:
        h = [[random_elem(spec, rng, vmin=vmin, vmax=vmax) for _ in range(n)] for _ in range(n)]
        if det(h)._vlow != INF:
            return h


def random_orbit(spec: LocalFieldSpec, n: int, rng: random.Random, integral: bool = True) -> OrbitDatum:
    """A random regular semisimple point with ``gamma = delta conj(delta)^-1``."""
    while True:
        delta = [
            [FElem(random_elem(spec, rng, vmin=0, vmax=0), random_elem(spec, rng, vmin=0, vmax=0)) for _ in range(n)]
            for _ in range(n)
        ]
        if det(delta)._vlow == INF:
            continue
        gamma = mat_mul(delta, mat_inv(_mat_conj(delta)))
        vm = 0 if integral else -1
        u1 = [random_elem(spec, rng, vmin=vm, vmax=1) for _ in range(n)]
        u2 = [random_elem(spec, rng, vmin=vm, vmax=1) for _ in range(n)]
        x = OrbitDatum(gamma, u1, u2)
        if x.is_rs():
            return x


def rank1_orbit(spec: LocalFieldSpec, v_u1: int, v_u2: int, unit_u1: int = 1, unit_u2: int = 1, gamma: FElem | None = None) -> OrbitDatum:
    """Rank-1 datum with prescribed valuations of ``u1``, ``u2``."""
    p = Fraction(spec.p)
    if gamma is None:
        gamma = _F(spec.one())
    return OrbitDatum(((gamma,),), (spec.elem(unit_u1 * p**v_u1),), (spec.elem(unit_u2 * p**v_u2),))


def identity_matrix(spec: LocalFieldSpec, n: int):
    return identity(n, spec.one(), spec.zero())
