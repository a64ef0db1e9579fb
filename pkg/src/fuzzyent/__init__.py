"""Entanglement of identical-particle pairs under ideal and Gaussian ("fuzzy") detection."""
from .boson import BosonScenario, PBSCoefficients, SpectralAmplitude, general_pair_state, hom_negativity, hom_state, phi_weights
from .errors import (DegenerateState, DimensionTooLarge, FuzzyEntError, InvalidSpec, NoBracket,
                     NonConvergence, NotAState, OutOfRange)
from .fermi import (DetectorProfile, FermiScenario, fuzzy_correlations, fuzzy_negativity_closed, fuzzy_pair_state,
                    ideal_f, ideal_pair_state, symmetry_components)
from .qmat import (BellWeights, EntanglementReport, TwoQubitState, bell_weights, eigvals_h4, negativity,
                   partial_transpose, state_metrics, validate_and_normalize)
from .quadrature import QuadratureConfig

__version__ = "0.1.0"
