"""Adiabatic potentials of atoms in magnetic gradients dressed by rf combs and microwaves."""

from .dressing import (
    AdiabaticPotentialGrid,
    RfComb,
    corrected_eigenvalues,
    dressed_eigenvalues,
    multilevel_potentials,
    potential_map_2d,
    switch_discontinuities,
    unfold_adiabatic,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    DressedLatError,
    ModelValidityWarning,
    NumericError,
    ResolutionError,
    SingularInputError,
)
from .physcore import CONST, LI6, LI7, RB87, Linear1D, Quadrupole2D, get_species

__version__ = "0.1.0"
