"""Finite rings, skew polynomial rings R[x; sigma] and their truncations."""
from skewring.kernels import BACKEND
from skewring.properties import PROPERTY_NAMES, all_properties, check_property
from skewring.ring import Endomorphism, FiniteRing, PropertyVerdict, RingError, validate_ring
from skewring.skew import SkewPolynomial, find_idempotents_bounded, sandwich_zero, skew_mul, truncated_skew_ring
from skewring.theorems import list_claims, run_claim, verify_paper
from skewring.zoo import build_endo, build_registry, build_ring, registry_entry

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "PROPERTY_NAMES", "all_properties", "check_property", "Endomorphism", "FiniteRing", "PropertyVerdict", "RingError",
    "validate_ring", "SkewPolynomial", "find_idempotents_bounded", "sandwich_zero", "skew_mul",
    "truncated_skew_ring", "list_claims", "run_claim", "verify_paper", "build_endo", "build_registry",
    "build_ring", "registry_entry",
]
