"""Finite model of the Weil representation of SL2(F0) on S(F0 x F0).

The quadratic space is ``V' = F0 x F0`` with ``q(x) = x1 x2`` and bilinear
form ``B(x, y) = x1 y2 + x2 y1``.  Schwartz functions are stored on a window
``(p^{-N1} O / p^{M1} O) x (p^{-N2} O / p^{M2} O)``; each cell value is an
exact element of ``Z[zeta_m]`` (``m = p^K``) given by its coefficient
vector in ``1, zeta, ..., zeta^(m-1)``, times a global factor ``q^scale``.

Actions (Schrodinger model, trivial quadratic character, Weil index 1):

* ``m(a) phi(x) = |a| phi(a x)``
* ``n(b) phi(x) = psi(b q(x)) phi(x)``
* ``w phi(x) = int phi(y) psi(B(x, y)) dy`` (self-dual measure)
* ``n^-(b') = w^-1 n(-b') w``

``psi`` is the additive character of conductor exponent ``spec.psi_conductor_exp``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
import numpy as np

from .errors import WindowOverflow
from .localfield import LocalFieldSpec, PadicElem, additive_character, reduce_rat

DEFAULT_CAP = 4_000_000


def _axis_size(spec: LocalFieldSpec, N: int, M: int) -> int:
    return spec.p ** (spec.f * (N + M))


@lru_cache(maxsize=None)
def _axis_reps(spec: LocalFieldSpec, N: int, M: int) -> tuple[PadicElem, ...]:
    """Representatives of ``p^{-N} O / p^M O`` in index order."""
    return tuple(spec.window_reps(-N, M))


def _index_of(x: PadicElem, N: int, M: int) -> int | None:
    """Index of ``x mod p^M O`` in the window, or ``None`` when ``x`` is outside ``p^{-N} O``."""
    spec = x.spec
    p = spec.p
    if x._vlow < -N:
        return None
    P = p ** (N + M)
    idx = 0
    # first coordinate is the most significant digit, as in window_reps
    for c in x.coords:
        r = reduce_rat(c, p, M) * Fraction(p) ** N
        idx = idx * P + int(r)
    return idx


def _valuation(x: PadicElem) -> int:
    return int(x.valuation())


@dataclass(frozen=True, eq=False)
class SchwartzFn:
    """Function on the window ``win = (N1, M1, N2, M2)`` with cyclotomic values."""

    spec: LocalFieldSpec
    win: tuple[int, int, int, int]
    K: int
    vals: np.ndarray
    scale: int = 0
    cap: int = DEFAULT_CAP

    @property
    def m(self) -> int:
        return self.spec.p**self.K

    @property
    def level(self) -> int:
        return self.spec.psi_conductor_exp

    # -- construction ------------------------------------------------------
    @classmethod
    def indicator(cls, spec: LocalFieldSpec, a1: int, a2: int) -> "SchwartzFn":
        """``1_{p^a1 O x p^a2 O}`` on the one-cell window."""
        vals = np.zeros((1, 1, 1), dtype=np.int64)
        vals[0, 0, 0] = 1
        return cls(spec, (-a1, a1, -a2, a2), 0, vals)

    def _check_cap(self, shape):
        if int(np.prod(shape)) > self.cap:
            raise WindowOverflow(f"window of {int(np.prod(shape))} cells exceeds cap {self.cap}")

    # -- window management ---------------------------------------------------
    def with_K(self, K: int) -> "SchwartzFn":
        if K == self.K:
            return self
        if K < self.K:
            raise ValueError("cannot lower cyclotomic level")
        step = self.spec.p ** (K - self.K)
        shape = self.vals.shape[:2] + (self.spec.p**K,)
        self._check_cap(shape)
        new = np.zeros(shape, dtype=np.int64)
        new[:, :, ::step] = self.vals
        return replace(self, K=K, vals=new)

    def refine(self, win: tuple[int, int, int, int]) -> "SchwartzFn":
        """Re-express on a larger window ``(N1', M1', N2', M2')`` (each entry at least the old one)."""
        if win == self.win:
            return self
        N1, M1, N2, M2 = self.win
        n1, m1, n2, m2 = win
        if n1 < N1 or m1 < M1 or n2 < N2 or m2 < M2:
            raise ValueError("refine only enlarges windows")
        spec = self.spec
        shape = (_axis_size(spec, n1, m1), _axis_size(spec, n2, m2), self.m)
        self._check_cap(shape)
        map1 = np.array([_index_of(x, N1, M1) if x._vlow >= -N1 else -1 for x in _axis_reps(spec, n1, m1)])
        map2 = np.array([_index_of(x, N2, M2) if x._vlow >= -N2 else -1 for x in _axis_reps(spec, n2, m2)])
        new = np.zeros(shape, dtype=np.int64)
        ok1, ok2 = map1 >= 0, map2 >= 0
        sub = self.vals[map1[ok1]][:, map2[ok2]]
        new[np.ix_(ok1, ok2)] = sub
        return replace(self, win=win, vals=new)

    # -- comparison ------------------------------------------------------------
    def _canonical(self) -> np.ndarray:
        v = self.vals.copy()
        if self.K == 0:
            return v
        m, p = self.m, self.spec.p
        blk = m // p
        r = v.reshape(v.shape[0], v.shape[1], p, blk)
        r = r - r.min(axis=2, keepdims=True)
        return r.reshape(v.shape)

    def is_zero(self) -> bool:
        return not self._canonical().any()

    def equals(self, other: "SchwartzFn") -> bool:
        """Exact equality as functions (windows and levels are aligned first)."""
        a, b = align(self, other)
        s = min(a.scale, b.scale)
        q = a.spec.q
        va = a.vals * q ** (a.scale - s)
        vb = b.vals * q ** (b.scale - s)
        return replace(a, vals=va - vb, scale=0).is_zero()

    def proportional_to(self, other: "SchwartzFn") -> bool:
        """Equality up to the global power of ``q`` (both nonzero)."""
        return replace(self, scale=0).equals(replace(other, scale=0))

    def to_json(self) -> dict:
        return {"window": list(self.win), "K": self.K, "scale": self.scale, "values": self.vals.tolist()}


def align(a: SchwartzFn, b: SchwartzFn) -> tuple[SchwartzFn, SchwartzFn]:
    win = tuple(max(x, y) for x, y in zip(a.win, b.win))
    K = max(a.K, b.K)
    return a.refine(win).with_K(K), b.refine(win).with_K(K)


# -- phases -----------------------------------------------------------------


def _phase_table(spec: LocalFieldSpec, xs, ys, coef: PadicElem, sign: int = 1) -> list[list[Fraction]]:
    """Phases of ``psi(sign * coef * x * y)`` over the product of two rep lists."""
    d = spec.psi_conductor_exp
    out = []
    for x in xs:
        cx = coef * x
        out.append([additive_character(cx * y * sign, d) for y in ys])
    return out


def _needed_K(p: int, phases) -> int:
    K = 0
    for row in phases:
        for r in row:
            den = r.denominator
            k = 0
            while den > 1:
                den //= p
                k += 1
            K = max(K, k)
    return K


def _exp_indices(phases, m: int) -> np.ndarray:
    return np.array([[int(r * m) % m for r in row] for row in phases], dtype=np.int64)


def _axis0_transform(vals: np.ndarray, kexp: np.ndarray) -> np.ndarray:
    """``out[y] = sum_x vals[x] * zeta^kexp[x, y]`` in ``Z[zeta_m]``."""
    S_in, S_b, m = vals.shape
    S_out = kexp.shape[1]
    out = np.zeros((S_out, S_b, m), dtype=np.int64)
    ar = np.arange(m)
    for y in range(S_out):
        idx = (ar[None, :] - kexp[:, y][:, None]) % m  # (S_in, m)
        gathered = np.take_along_axis(vals, np.broadcast_to(idx[:, None, :], vals.shape), axis=2)
        out[y] = gathered.sum(axis=0)
    return out


# -- generators -------------------------------------------------------------


def act_m(a: PadicElem, phi: SchwartzFn) -> SchwartzFn:
    """``m(a) phi(x) = |a| phi(a x)``."""
    spec = phi.spec
    k = _valuation(a)
    N1, M1, N2, M2 = phi.win
    win = (N1 + k, M1 - k, N2 + k, M2 - k)
    reps1 = _axis_reps(spec, win[0], win[1])
    reps2 = _axis_reps(spec, win[2], win[3])
    i1 = np.array([_index_of(a * x, N1, M1) for x in reps1])
    i2 = np.array([_index_of(a * x, N2, M2) for x in reps2])
    vals = phi.vals[i1][:, i2]
    return replace(phi, win=win, vals=vals, scale=phi.scale - k)


def act_n(b: PadicElem, phi: SchwartzFn) -> SchwartzFn:
    """``n(b) phi(x) = psi(b x1 x2) phi(x)``."""
    spec = phi.spec
    if b.is_zero():
        return phi
    vb = _valuation(b)
    D = spec.psi_conductor_exp
    N1, M1, N2, M2 = phi.win
    # phase must be constant on cells: v(b) + M1 - N2 >= -D and v(b) + M2 - N1 >= -D
    M1n = max(M1, N2 - D - vb)
    M2n = max(M2, N1 - D - vb)
    phi = phi.refine((N1, M1n, N2, M2n))
    reps1 = _axis_reps(spec, N1, M1n)
    reps2 = _axis_reps(spec, N2, M2n)
    phases = _phase_table(spec, reps1, reps2, b)
    phi = phi.with_K(max(phi.K, _needed_K(spec.p, phases)))
    kexp = _exp_indices(phases, phi.m)
    m = phi.m
    ar = np.arange(m)
    idx = (ar[None, None, :] - kexp[:, :, None]) % m
    vals = np.take_along_axis(phi.vals, idx, axis=2)
    return replace(phi, vals=vals)


def act_w(phi: SchwartzFn, inverse: bool = False) -> SchwartzFn:
    """Fourier transform against ``psi(B(x, y))`` (``psi(-B)`` for the inverse)."""
    spec = phi.spec
    D = spec.psi_conductor_exp
    N1, M1, N2, M2 = phi.win
    # y1 pairs with x2, y2 with x1
    win = (M2 + D, N2 - D, M1 + D, N1 - D)
    sgn = -1 if inverse else 1
    reps_x1 = _axis_reps(spec, N1, M1)
    reps_x2 = _axis_reps(spec, N2, M2)
    reps_y1 = _axis_reps(spec, win[0], win[1])
    reps_y2 = _axis_reps(spec, win[2], win[3])
    one = spec.one()
    ph2 = _phase_table(spec, reps_x2, reps_y1, one, sgn)
    ph1 = _phase_table(spec, reps_x1, reps_y2, one, sgn)
    K = max(phi.K, _needed_K(spec.p, ph2), _needed_K(spec.p, ph1))
    phi = phi.with_K(K)
    phi._check_cap((len(reps_y1), len(reps_y2), phi.m))
    m = phi.m
    # transform axis 1 (x2 -> y1)
    T = _axis0_transform(np.transpose(phi.vals, (1, 0, 2)), _exp_indices(ph2, m))  # (y1, x1, m)
    # transform x1 -> y2
    U = _axis0_transform(np.transpose(T, (1, 0, 2)), _exp_indices(ph1, m))  # (y2, y1, m)
    vals = np.ascontiguousarray(np.transpose(U, (1, 0, 2)))
    # cell volume q^{-D-M1-M2} for the self-dual measure
    return replace(phi, win=win, vals=vals, scale=phi.scale - D - M1 - M2)


def act_nbar(b: PadicElem, phi: SchwartzFn) -> SchwartzFn:
    """``n^-(b') = w^-1 n(-b') w``."""
    return act_w(act_n(-b, act_w(phi)), inverse=True)


@dataclass(frozen=True)
class SL2Gen:
    kind: str  # "m", "n", "nbar" or "w"
    param: PadicElem | None = None

    def __post_init__(self):
        if self.kind not in ("m", "n", "nbar", "w"):
            raise ValueError(f"unknown generator {self.kind!r}")
        if self.kind == "m" and (self.param is None or self.param.is_zero()):
            raise ValueError("m(a) needs nonzero a")


def weil_act(g: SL2Gen, phi: SchwartzFn) -> SchwartzFn:
    if g.kind == "m":
        return act_m(g.param, phi)
    if g.kind == "n":
        return act_n(g.param, phi)
    if g.kind == "nbar":
        return act_nbar(g.param, phi)
    return act_w(phi)


# -- invariance ---------------------------------------------------------------


def k_generators(spec: LocalFieldSpec, d: int) -> list[SL2Gen]:
    """Generators of ``m'(c)^-1 SL2(O) m'(c)`` with ``v(c) = d``.

    ``m(a)`` for lifts of the residue units and for ``1 + p theta^i``,
    ``n(p^-d theta^i)`` and ``n^-(p^d theta^i)``.
    """
    gens = []
    for r in spec.residues():
        if not r.is_zero():
            gens.append(SL2Gen("m", r))
    basis = []
    for i in range(spec.f):
        c = [0] * spec.f
        c[i] = 1
        basis.append(spec.elem(c))
    for t in basis:
        gens.append(SL2Gen("m", spec.one() + spec.pi_power(1) * t))
    for t in basis:
        gens.append(SL2Gen("n", spec.pi_power(-d) * t))
    for t in basis:
        gens.append(SL2Gen("nbar", spec.pi_power(d) * t))
    return gens


def invariance_report(phi: SchwartzFn, d: int) -> list[tuple[str, str, bool]]:
    out = []
    for g in k_generators(phi.spec, d):
        out.append((g.kind, repr(g.param), weil_act(g, phi).equals(phi)))
    return out


def check_K_invariance(phi: SchwartzFn, d: int, spec: LocalFieldSpec | None = None) -> bool:
    """Whether ``phi`` is fixed by every generator of the level-``d`` maximal compact."""
    if spec is not None and spec != phi.spec:
        raise ValueError("phi lives on a different field spec")
    return all(weil_act(g, phi).equals(phi) for g in k_generators(phi.spec, d))


def lemma_test_function(spec: LocalFieldSpec, d: int, e: int) -> SchwartzFn:
    """``1_{O x c O}`` with ``v(c) = -e`` on the field whose character has level ``d + e``."""
    lvl = spec.with_conductor(d + e)
    return SchwartzFn.indicator(lvl, 0, -e)
