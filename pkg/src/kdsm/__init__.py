"""Optimization and minimization for k-distant submodular set functions."""

from .core import (GroundSet, OracleFunction, SetFunction, ShiftedFunction,
                   TableFunction, ValueBounds, is_k_distant, lemma_bound,
                   normalize, shift_nonempty, subtract_modular)
from .family import ConstraintFamily, Ordering, build_family, family_size_bound, sort_elements
from .minimizer import MinimizeResult, bruteforce_minimize, membership_zero, minimize
from .optimizer import OptResult, epsilon, maximize_over_Pf, perturb_weights

__version__ = "0.1.0"
