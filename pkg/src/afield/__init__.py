"""Complex A-field electrodynamics: conversions, jump conditions, retarded-potential solvers and oracles."""

__version__ = "0.1.0"

from .errors import (AFieldError, CausalityBudgetExceeded, ConfigError, InvalidStepError,
                     QuadratureBudgetExceeded, SingularPointError, UnsupportedGeometryError)
from .field import (VACUUM, Density, EHField, FieldSnapshot, Medium, SourceModel, a_from_eh,
                    charge_conservation_residual, complex_charge, cvec, eh_from_a, energy_density,
                    energy_law_residual, poynting)

__all__ = [
    "AFieldError", "CausalityBudgetExceeded", "ConfigError", "InvalidStepError",
    "QuadratureBudgetExceeded", "SingularPointError", "UnsupportedGeometryError",
    "VACUUM", "Density", "EHField", "FieldSnapshot", "Medium", "SourceModel", "a_from_eh",
    "charge_conservation_residual", "complex_charge", "cvec", "eh_from_a", "energy_density",
    "energy_law_residual", "poynting",
]
