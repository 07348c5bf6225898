"""VQE on a periodic Heisenberg ring.

The input is B|0> for a fixed shallow entangler B, followed by identity
blocks trained with Adam. A short run is enough to see the energy fall
toward the exact ground energy; the command line runs the full setting:

    idblock vqe --trials 10 --out vqe.csv
"""

import numpy as np

from idblock.experiments import ExperimentConfig, vqe_setup
from idblock.training import (
    TrainConfig,
    VqeProblem,
    exact_ground_energy,
    heisenberg_hamiltonian,
    vqe_train,
)

n = 5
obs = heisenberg_hamiltonian(VqeProblem(n, J=1.0, h=1.0, periodic=True))
e0 = exact_ground_energy(obs, n)

cfg = ExperimentConfig.for_kind("vqe", qubits=[n], block_depth=8, seed=0)
template, params, entangler, _ = vqe_setup(cfg, n, trial=0)
config = TrainConfig(n_iterations=1500, learning_rate=1e-2, snapshot_every=100, tol=None)

for label, p0 in (("identity", params), ("zero", np.zeros_like(params))):
    records = vqe_train(template, p0, obs, config, entangler=entangler)
    e = [r.objective for r in records]
    print(f"{label:8s} start {e[0]:+.4f}  end {np.mean(e[-100:]):+.4f}  exact {e0:+.4f}")
