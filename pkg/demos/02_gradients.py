"""Three ways to differentiate a circuit, plus a dense commutator oracle.

Rotations are exp(-i theta V), so the exact shift rule is
E(theta + pi/4) - E(theta - pi/4).
"""

import numpy as np

from idblock.ansatz import build_random_ansatz, random_params
from idblock.circuit import Observable
from idblock.gradients import (
    grad_adjoint_all,
    grad_direction_dense,
    grad_finite_diff,
    grad_parameter_shift,
    slot_generators_dense,
)
from idblock.simulator import circuit_unitary_dense, random_state

rng = np.random.default_rng(3)
n = 4
template = build_random_ansatz(n, depth=6, seed=rng)
params = random_params(template, rng)
obs = Observable([(0.7, {0: "X", 1: "X"}), (-1.2, {2: "Z"}), (0.4, {1: "Y", 3: "Z"})])
psi = random_state(n, rng)

adjoint = grad_adjoint_all(template, params, psi, obs).values
shift = np.array([grad_parameter_shift(template, params, psi, obs, k) for k in range(template.n_params)])
fd = np.array([grad_finite_diff(template, params, psi, obs, k) for k in range(template.n_params)])
U = circuit_unitary_dense(template, params)
dense = np.array([grad_direction_dense(U, M, obs.matrix(n), psi)
                  for M in slot_generators_dense(template, params)])

print("first five partials (adjoint):", np.round(adjoint[:5], 6))
print(f"max |adjoint - shift|  = {np.abs(adjoint - shift).max():.2e}")
print(f"max |adjoint - fd|     = {np.abs(adjoint - fd).max():.2e}")
print(f"max |adjoint - dense|  = {np.abs(adjoint - dense).max():.2e}")
