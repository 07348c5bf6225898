"""Binary classifier on amplitude-encoded data.

The predicted probability of the "even" class is (<Z0 Z1> + 1) / 2, trained
with binary cross-entropy on one random example per step. Synthetic data
stands in for MNIST; pass real IDX files through the command line:

    idblock qnn --input mnist --mnist-images train-images-idx3-ubyte \
        --mnist-labels train-labels-idx1-ubyte --out qnn.csv
"""

import numpy as np

from idblock.ansatz import IdentityBlockPlan, build_identity_block
from idblock.data import synth_dataset
from idblock.training import TrainConfig, qnn_accuracy, qnn_train

n = 6
data = synth_dataset(100, n, seed=0)
template, params = build_identity_block(n, IdentityBlockPlan(2, 6, seed=1))
print(f"accuracy at init: {qnn_accuracy(template, params, data):.2f}")

config = TrainConfig(n_iterations=600, learning_rate=1e-2, eval_every=100, snapshot_every=100,
                     seed=2, tol=None)
for r in qnn_train(template, params, data, config):
    if r.accuracy is not None:
        spread = "-" if r.grad_snapshot is None else f"{np.std(r.grad_snapshot):.3f}"
        print(f"iter {r.iteration:4d}  loss {r.objective:.3f}  acc {r.accuracy:.2f}  "
              f"grad std {spread}")
