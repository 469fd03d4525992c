"""Faithful, transitive, amenable actions of free products, with budgeted certificates."""
from __future__ import annotations

__version__ = "0.1.0"

from .actions import Action, RegularAction, coset_action, disjoint_union, induced_action, product_action, pullback
from .certify import Certificate, certify_faithful, certify_transitive
from .cosets import kernel_coset_table, schreier_basis, schreier_generators
from .errors import AmenactError
from .folner import FolnerCertificate, FolnerSequence, certify_folner, defect, search_folner, verify_sequence
from .groups import DirectSum, FiniteGroup, Flags, FreeGroup, FreeProduct, Integers, ReducedWord, Wreath

__all__ = [
    "Action",
    "AmenactError",
    "Certificate",
    "DirectSum",
    "FiniteGroup",
    "Flags",
    "FolnerCertificate",
    "FolnerSequence",
    "FreeGroup",
    "FreeProduct",
    "Integers",
    "ReducedWord",
    "RegularAction",
    "Wreath",
    "certify_faithful",
    "certify_folner",
    "certify_transitive",
    "coset_action",
    "defect",
    "disjoint_union",
    "induced_action",
    "kernel_coset_table",
    "product_action",
    "pullback",
    "schreier_basis",
    "schreier_generators",
    "search_folner",
    "verify_sequence",
]
