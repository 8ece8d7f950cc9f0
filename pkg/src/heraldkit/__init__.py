"""Heralded non-Gaussian photonic state engineering.

Simulates conditional preparation of non-Gaussian states by photon-number
detection on some modes of a multimode pure Gaussian state, and inverts the
problem: given a target Fock superposition, find circuits that herald it.
"""

__version__ = "0.1.0"

from .gaussian import (CircuitError, CircuitParams, GaussianState, StateError,
                       b_matrix, make_state, mesh_unitary, rotation_unitary)
from .pattern import HeraldPattern
from .moments import (DerivOrder, DerivativeTooLargeError, GaussianForm,
                      gaussian_derivative, loop_hafnian, multiset_loop_hafnian,
                      taylor_oracle)
from .herald import (ConditioningError, HeraldedState, detection_probability,
                     herald, herald_probability)
from .fock import FockVector, heralded_fock
from .targets import (TargetSpec, approximate_gate_form, cat_coefficients,
                      cubic_coefficients, fidelity, gkp_coefficients,
                      noon_state, render_target, w_state)
from .design import (DesignResult, InverseRoot, conjecture_probe,
                     degrees_of_freedom, design_seeds, evaluate_circuit,
                     noon_circuit, optimize_circuit, realize_root,
                     solve_inverse, takagi, w_circuit)
from .wigner import fock_wigner, wigner_eval, wigner_grid

__all__ = [
    "__version__",
    "CircuitError", "CircuitParams", "GaussianState", "StateError",
    "b_matrix", "make_state", "mesh_unitary", "rotation_unitary",
    "HeraldPattern",
    "DerivOrder", "DerivativeTooLargeError", "GaussianForm",
    "gaussian_derivative", "loop_hafnian", "multiset_loop_hafnian",
    "taylor_oracle",
    "ConditioningError", "HeraldedState", "detection_probability",
    "herald", "herald_probability",
    "FockVector", "heralded_fock",
    "TargetSpec", "approximate_gate_form", "cat_coefficients",
    "cubic_coefficients", "fidelity", "gkp_coefficients", "noon_state",
    "render_target", "w_state",
    "DesignResult", "InverseRoot", "conjecture_probe", "degrees_of_freedom",
    "design_seeds", "evaluate_circuit", "noon_circuit", "optimize_circuit",
    "realize_root", "solve_inverse", "takagi", "w_circuit",
    "fock_wigner", "wigner_eval", "wigner_grid",
]
