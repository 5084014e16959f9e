"""Exact computations around orbital integrals and their archimedean companions."""

from .exact import LaurentPoly, LogLinear, laurent_special_values, loglin_reduce_eq
from .localfield import FElem, Lattice, LocalFieldSpec, PadicElem, additive_character, lattice_canonicalize, val_and_eta
from .orbits import OrbitDatum, group_action, invariants_and_rs, transfer_factor_and_side
from .orbint import (
    ArchOrbResult,
    OrbResult,
    assemble_partial_dJ,
    orb_arch,
    orb_arch_quadrature,
    orb_lattice_sum,
    orb_rank1_hermitian,
    orb_rank1_split,
    orb_rank1_split_brute,
)

__all__ = [
    "ArchOrbResult",
    "FElem",
    "LaurentPoly",
    "Lattice",
    "LocalFieldSpec",
    "LogLinear",
    "OrbResult",
    "OrbitDatum",
    "PadicElem",
    "additive_character",
    "assemble_partial_dJ",
    "group_action",
    "invariants_and_rs",
    "lattice_canonicalize",
    "laurent_special_values",
    "loglin_reduce_eq",
    "orb_arch",
    "orb_arch_quadrature",
    "orb_lattice_sum",
    "orb_rank1_hermitian",
    "orb_rank1_split",
    "orb_rank1_split_brute",
    "transfer_factor_and_side",
    "val_and_eta",
]
