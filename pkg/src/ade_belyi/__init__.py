"""Finite covers of the plane branched in ADE curve germs, and the Belyi pairs beneath them."""

from .belyi import FormPair, Passport, PermTriple, is_belyi, passport_of_forms, passport_of_triple
from .classify import (
    CoverFormula,
    beta_of_cover,
    bel2_catalog,
    contractibility_counts,
    d4_construct,
    fiber_describe,
    type_check,
    verify_normal_form,
)
from .errors import DomainError
from .hjchains import cf_eval, chain_group, contract_chain, supplement_delta
from .monodromy_numeric import TrackerConfig, monodromy_triple
from .pullback import pullback_cyclic
from .resolution import ade_germ, resolve_minimal

__version__ = "0.1.0"

__all__ = [
    "CoverFormula", "DomainError", "FormPair", "Passport", "PermTriple", "TrackerConfig",
    "ade_germ", "beta_of_cover", "bel2_catalog", "cf_eval", "chain_group", "contract_chain",
    "contractibility_counts", "d4_construct", "fiber_describe", "is_belyi", "monodromy_triple",
    "passport_of_forms", "passport_of_triple", "pullback_cyclic", "resolve_minimal",
    "supplement_delta", "type_check", "verify_normal_form",
]
