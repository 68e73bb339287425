"""Structured singular value bounds and exact values for generalized
stochastic matrices."""

from .blockstruct import BlockStructure, parse_structure
from .constructors import CirculantSpec, OmegaCertificate, cone_combo, omega_build
from .errors import (
    ComplexityError,
    DimensionError,
    HypothesisError,
    InputError,
    MukitError,
    NotInClassError,
    NumericalError,
    StructureError,
    UnsupportedStructureError,
)
from .mu import MuOptions, MuReport, compute_mu, mu_bruteforce, mu_lower, mu_upper
from .stochastic import mu_exact_class, mu_exact_equimodular, mu_exact_power, profile

__version__ = "0.1.0"

__all__ = [
    "BlockStructure",
    "CirculantSpec",
    "ComplexityError",
    "DimensionError",
    "HypothesisError",
    "InputError",
    "MuOptions",
    "MuReport",
    "MukitError",
    "NotInClassError",
    "NumericalError",
    "OmegaCertificate",
    "StructureError",
    "UnsupportedStructureError",
    "compute_mu",
    "cone_combo",
    "mu_bruteforce",
    "mu_exact_class",
    "mu_exact_equimodular",
    "mu_exact_power",
    "mu_lower",
    "mu_upper",
    "omega_build",
    "parse_structure",
    "profile",
]
