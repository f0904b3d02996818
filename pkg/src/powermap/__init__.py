"""Eigenvalue distributions of compact Lie groups under power maps."""

from .classical import Component, Decomposition, decompose, decompose_orthogonal, decompose_unitary
from .congruential import congruential_subgroup, independence_threshold, power_conditions, w_p
from .rootsys import GroupSpec, Lattice, RootDatum, build_root_datum, group_spec

__version__ = "0.1.0"

__all__ = [
    "Component", "Decomposition", "GroupSpec", "Lattice", "RootDatum",
    "build_root_datum", "congruential_subgroup", "decompose", "decompose_orthogonal",
    "decompose_unitary", "group_spec", "independence_threshold", "power_conditions", "w_p",
]
