"""Rank-1 hermitian lattices, Diff sets of incoherent families, CM degree factors.

Only integer data enters: the lattice ``p^k O_E`` with hermitian form
``beta * N_{E/E0}`` is recorded by ``(k, v(beta))``, and places of an
incoherent family carry their local sign tags.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IncoherenceViolated, ParityError
from .exact import LogLinear, laurent_special_values
from .orbint import orb_rank1_split


@dataclass(frozen=True)
class Rank1HermLattice:
    k: int
    v_beta: int

    def dual(self) -> "Rank1HermLattice":
        return Rank1HermLattice(-self.k - self.v_beta, self.v_beta)

    def is_selfdual(self) -> bool:
        return 2 * self.k == -self.v_beta

    def swap_scale(self) -> "Rank1HermLattice":
        """The companion lattice whose scale valuation is shifted by one."""
        return shift_scale(self)


def rank1_dual_and_selfdual(L: Rank1HermLattice) -> tuple[int, int | None]:
    """``(dual_k, selfdual_k)``; a self-dual ``p^j O_E`` exists only for even ``v(beta)``."""
    selfdual = -L.v_beta // 2 if L.v_beta % 2 == 0 else None
    return -L.k - L.v_beta, selfdual


def shift_scale(L: Rank1HermLattice) -> Rank1HermLattice:
    return Rank1HermLattice(L.k, L.v_beta + 1)


@dataclass(frozen=True)
class Place:
    pid: str
    split: bool
    eps: int = 1

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")


@dataclass(frozen=True)
class IncoherentFamily:
    """Places with local space signs, and the local signs ``chi_v(zeta)`` of the target."""

    places: tuple[Place, ...]
    zeta_signs: dict = field(default_factory=dict)

    def nonsplit(self) -> list[Place]:
        return [pl for pl in self.places if not pl.split]

    def parity(self) -> int:
        prod = 1
        for pl in self.nonsplit():
            prod *= pl.eps * self.zeta_signs[pl.pid]
        return prod


def diff_set(fam: IncoherentFamily) -> frozenset:
    """Nonsplit places whose local space does not represent ``zeta``."""
    missing = [pl.pid for pl in fam.nonsplit() if pl.pid not in fam.zeta_signs]
    if missing:
        raise KeyError(f"no zeta sign at {missing}")
    if fam.parity() != -1:
        raise IncoherenceViolated("product of local signs is +1: the family is coherent")
    return frozenset(pl.pid for pl in fam.nonsplit() if pl.eps != fam.zeta_signs[pl.pid])


def random_incoherent_family(rng: random.Random, max_places: int = 12) -> IncoherentFamily:
    n = rng.randint(1, max_places)
    places = [Place(f"v{i}", rng.random() < 0.3, rng.choice((1, -1))) for i in range(n)]
    if all(pl.split for pl in places):
        places[0] = Place(places[0].pid, False, places[0].eps)
    signs = {pl.pid: rng.choice((1, -1)) for pl in places}
    fam = IncoherentFamily(tuple(places), signs)
    if fam.parity() == 1:
        # flip one nonsplit sign to make the family incoherent
        pl = rng.choice(fam.nonsplit())
        signs[pl.pid] = -signs[pl.pid]
        fam = IncoherentFamily(tuple(places), signs)
    return fam


def cm_degree_factor(v_delta_zeta: int) -> Fraction:
    """``max{0, (1 + v) / 2}`` for odd ``v``."""
    if v_delta_zeta % 2 == 0:
        raise ParityError("degree factor is defined for odd valuations")
    return Fraction(max(0, (1 + v_delta_zeta) // 2))


def cm_crosscheck_detail(v_delta_zeta: int, q: int) -> tuple[bool, Fraction, LogLinear]:
    """``(agree, degree factor, derivative)`` for the two independent routes."""
    factor = cm_degree_factor(v_delta_zeta)
    _, deriv = laurent_special_values(orb_rank1_split(v_delta_zeta), q)
    return deriv == LogLinear.log_of(q, -factor), factor, deriv


def cm_factor_crosscheck(v_delta_zeta: int, q: int) -> bool:
    """Degree factor ``max{0, (1+v)/2}`` against ``-dOrb(0) / log q`` of the rank-1 polynomial."""
    return cm_crosscheck_detail(v_delta_zeta, q)[0]
