"""Admissible cuts, the mixed invariant, hat certificates and property checks."""

from khmix.services.mixed.certificates import HatCertificate, certify_nonzero_via_hat, hat_images, source_chain
from khmix.services.mixed.cut import UNIQUE_CROSSCAP, CutSpec, validate_cut
from khmix.services.mixed.invariant import MixedInvariant, MixedResult, canonical_sign, mixed_invariant
from khmix.services.mixed.properties import (
    PROPERTY_KINDS,
    Check,
    PropertyReport,
    PropertySuite,
    closed_scalar,
    expected_closed_scalar,
    induced_sign,
    induced_vanishes,
    property_suite,
    star_square,
)

__all__ = [
    "PROPERTY_KINDS",
    "UNIQUE_CROSSCAP",
    "Check",
    "CutSpec",
    "HatCertificate",
    "MixedInvariant",
    "MixedResult",
    "PropertyReport",
    "PropertySuite",
    "canonical_sign",
    "certify_nonzero_via_hat",
    "closed_scalar",
    "expected_closed_scalar",
    "hat_images",
    "induced_sign",
    "induced_vanishes",
    "mixed_invariant",
    "property_suite",
    "source_chain",
    "star_square",
    "validate_cut",
]
