"""Rational extensions of the isotonic oscillator built from Darboux-Baecklund chains."""

__version__ = "0.1.0"

from .admissibility import AdmissibilityReport, admissible, charge, origin_exponent
from .chain import (ChainSpec, DegenerateChain, ExtendedEigenstate, ExtendedPotential,
                    eigenstate_determinant, eigenstate_iterated, eigenstate_wronskian,
                    elp_one_step, extended_potential, weight_function)
from .isotonic import ConstraintViolation, IsotonicParams, seed_state
from .numeric import GridSpec, chain_spectrum, grid_spectrum, orthogonality_matrix
from .shape_invariance import SIReport, delta_chain, si_check

__all__ = [
    "__version__", "AdmissibilityReport", "ChainSpec", "ConstraintViolation", "DegenerateChain",
    "ExtendedEigenstate", "ExtendedPotential", "GridSpec", "IsotonicParams", "SIReport",
    "admissible", "chain_spectrum", "charge", "delta_chain", "eigenstate_determinant",
    "eigenstate_iterated", "eigenstate_wronskian", "elp_one_step", "extended_potential",
    "grid_spectrum", "orthogonality_matrix", "origin_exponent", "seed_state", "si_check",
    "weight_function",
]
