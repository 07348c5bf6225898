"""Statevector toolkit for identity-block initialisation of parametrised
quantum circuits and the barren-plateau experiments around it."""

__version__ = "0.1.0"

from .ansatz import (
    IdentityBlockPlan,
    build_entangler,
    build_identity_block,
    build_random_ansatz,
    input_sqrt_h,
    mirror_params,
)
from .circuit import CircuitTemplate, GateSpec, Observable
from .gradients import (
    grad_adjoint_all,
    grad_direction_dense,
    grad_finite_diff,
    grad_parameter_shift,
)
from .simulator import apply_gate, circuit_unitary_dense, expectation, run_circuit
