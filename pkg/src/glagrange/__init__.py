"""Exact search and verification of G-invariant Lagrangians in cover homology."""

from .cover import CoverSpec, build_cover, symplectic_module_of_cover, twisted_homology_dims
from .exactla import QuotientMap, RationalMatrix, Subspace, kernel, rref
from .groups import FiniteGroup, build_group
from .lagfind import (
    SearchConfig,
    SearchExhausted,
    find_invariant_lagrangian,
    isotypic_blocks,
    verify_certificate,
    witt_equivalent,
)
from .repcat import catalog_reps, central_idempotents
from .sympmod import LagrangianCertificate, SymplecticGModule, certify, coisotropic_reduction

__all__ = [
    "CoverSpec",
    "build_cover",
    "symplectic_module_of_cover",
    "twisted_homology_dims",
    "QuotientMap",
    "RationalMatrix",
    "Subspace",
    "kernel",
    "rref",
    "FiniteGroup",
    "build_group",
    "SearchConfig",
    "SearchExhausted",
    "find_invariant_lagrangian",
    "isotypic_blocks",
    "verify_certificate",
    "witt_equivalent",
    "catalog_reps",
    "central_idempotents",
    "LagrangianCertificate",
    "SymplecticGModule",
    "certify",
    "coisotropic_reduction",
]

__version__ = "0.1.0"
