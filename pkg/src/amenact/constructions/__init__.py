"""Builders of faithful, transitive, amenable actions and their reports."""
from __future__ import annotations

from .beta import BetaAction, BetaLedger, Witness, build_free_product_action
from .classify import IN_A, UNKNOWN, VIRTUALLY_F, classify
from .common import ConstructionReport
from .finite_quotient import finite_quotient_route
from .kazhdan import NonFGCosetAction, component_orbit_exceeds, kazhdan_nonfg_action
from .lamplighter import LamplighterCosetAction, lamplighter_coset_action
from .providers import build_Y, provider_for
from .regular import regular_action
from .thompson import PLMap, standard_commutators, thompson_near_zero
from .upgrade import UpgradedAction, upgrade_to_faithful

__all__ = [
    "BetaAction",
    "BetaLedger",
    "ConstructionReport",
    "IN_A",
    "LamplighterCosetAction",
    "NonFGCosetAction",
    "PLMap",
    "UNKNOWN",
    "UpgradedAction",
    "VIRTUALLY_F",
    "Witness",
    "build_Y",
    "build_free_product_action",
    "classify",
    "component_orbit_exceeds",
    "finite_quotient_route",
    "kazhdan_nonfg_action",
    "lamplighter_coset_action",
    "provider_for",
    "regular_action",
    "standard_commutators",
    "thompson_near_zero",
    "upgrade_to_faithful",
]
