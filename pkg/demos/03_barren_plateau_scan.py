"""Gradient variance against qubit count.

Random deep circuits lose gradient variance exponentially in n. The same
number of layers arranged as an identity block keeps it roughly constant.
This is a reduced version of the full scan (fewer trials, shallower random
circuits); the command line runs the full one:

    idblock variance-scan --qubits 2-10:2 --trials 50 --out scan.csv
"""

from idblock.experiments import ExperimentConfig, run_variance_scan, scan_variances

cfg = ExperimentConfig.for_kind("variance-scan", qubits=[2, 4, 6, 8], trials=30, depth=30,
                                block_depth=15, seed=0)
var = scan_variances(run_variance_scan(cfg))
print(" n   random      identity")
for n in cfg.qubits:
    print(f"{n:2d}   {var[(n, 'sqrt-h', 'random')]:.2e}   {var[(n, 'sqrt-h', 'identity')]:.2e}")
