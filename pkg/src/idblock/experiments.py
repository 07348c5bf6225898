"""Experiment drivers behind the command-line subcommands.

Each ``run_*`` takes an :class:`ExperimentConfig` and returns a
:class:`Table` (CSV header, rows, pass flag). Trials draw their randomness
from ``SeedSequence(seed, spawn_key=...)`` so output never depends on the
worker schedule.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ansatz import (
    IdentityBlockPlan,
    build_entangler,
    build_identity_block,
    build_random_ansatz,
    input_sqrt_h,
    random_params,
)
from .circuit import Observable
from .data import load_mnist, mnist_dataset, preprocess_example, synth_dataset
from .gradients import grad_adjoint_all, grad_direction_dense, grad_parameter_shift
from .haar import (
    grad_moments_mc,
    identity_init_gradient,
    second_moment_table,
    variance_closed_form,
)
from .simulator import run_circuit, zero_state
from .training import (
    TrainConfig,
    VqeProblem,
    exact_ground_energy,
    heisenberg_hamiltonian,
    qnn_train,
    vqe_train,
)

KINDS = ("variance-scan", "qnn", "vqe", "verify-appendix")
INITS = ("random", "identity", "zero")
INPUTS = ("zero", "sqrt-h", "mnist", "synthetic")

DEFAULTS = {
    "variance-scan": dict(qubits=[2, 4, 6, 8, 10], depth=40, blocks=1, block_depth=20,
                          trials=50, inits=["random", "identity"], inputs=["sqrt-h"]),
    "qnn": dict(qubits=[8], blocks=2, block_depth=16, trials=50, iterations=2000,
                inits=["identity", "zero"], inputs=["synthetic"], examples=200),
    "vqe": dict(qubits=[7], blocks=2, block_depth=33, trials=50, iterations=5000,
                inits=["identity", "zero"], inputs=["zero"]),
    "verify-appendix": dict(samples=10_000),
}


@dataclass
class ExperimentConfig:
    kind: str
    qubits: list = field(default_factory=lambda: [4])
    depth: int = 40
    blocks: Optional[int] = 1
    block_depth: Optional[int] = 20
    trials: int = 50
    iterations: int = 2000
    seed: int = 0
    inits: list = field(default_factory=lambda: ["identity"])
    inputs: list = field(default_factory=lambda: ["sqrt-h"])
    mnist_images: Optional[str] = None
    mnist_labels: Optional[str] = None
    out: Optional[str] = None
    threads: int = 1
    examples: int = 200
    samples: int = 10_000
    learning_rate: float = 1e-3
    entangler_depth: int = 7
    snapshot_every: int = 10
    tol: float = 1e-6
    wrong_formula: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        for name in ("depth", "trials", "iterations", "threads", "examples", "samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if any(q < 1 for q in self.qubits):
            raise ValueError("qubit counts must be positive")
        for i in self.inits:
            if i not in INITS:
                raise ValueError(f"unknown init strategy {i!r}")
        for i in self.inputs:
            if i not in INPUTS:
                raise ValueError(f"unknown input kind {i!r}")
        if "identity" in self.inits and not (self.blocks and self.block_depth):
            raise ValueError("identity-block init needs --blocks and --block-depth")
        if "mnist" in self.inputs and not (self.mnist_images and self.mnist_labels):
            raise ValueError("mnist input needs --mnist-images and --mnist-labels")

    @classmethod
    def for_kind(cls, kind, **overrides):
        values = dict(DEFAULTS[kind])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(kind=kind, **values)


@dataclass
class Table:
    header: list
    rows: list
    passed: bool = True
    notes: dict = field(default_factory=dict)


def trial_rng(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def _map(fn, items, threads):
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _variance(values):
    return float(np.var(values, ddof=1)) if len(values) > 1 else None


# --- variance scan -----------------------------------------------------------

def _scan_input(kind, n, rng, mnist):
    if kind == "zero":
        return zero_state(n)
    if kind == "sqrt-h":
        return input_sqrt_h(n)
    if kind == "synthetic":
        return synth_dataset(2, n, rng)[int(rng.integers(2))].state
    while True:
        i = int(rng.integers(mnist.count))
        if mnist.pixels[i].any():
            return preprocess_example(mnist.pixels[i], mnist.labels[i], n).state


def scan_gradient(strategy, n, input_state, cfg, rng):
    """First-slot derivative of ``<Z0 Z1>`` for one freshly drawn circuit."""
    obs = Observable.zz(0, 1)
    if strategy == "identity":
        t, p = build_identity_block(n, IdentityBlockPlan(cfg.blocks, cfg.block_depth, rng))
    else:
        t = build_random_ansatz(n, cfg.depth, rng)
        p = random_params(t, rng) if strategy == "random" else np.zeros(t.n_params)
    return grad_parameter_shift(t, p, input_state, obs, 0)


def run_variance_scan(cfg: ExperimentConfig) -> Table:
    mnist = None
    if "mnist" in cfg.inputs:
        mnist = load_mnist(cfg.mnist_images, cfg.mnist_labels)
    jobs = [
        (n, inp, s, tr)
        for n in cfg.qubits
        for inp in cfg.inputs
        for s in cfg.inits
        for tr in range(cfg.trials)
    ]

    def one(job):
        n, inp, s, tr = job
        rng = trial_rng(cfg.seed, n, INPUTS.index(inp), INITS.index(s), tr)
        return scan_gradient(s, n, _scan_input(inp, n, rng, mnist), cfg, rng)

    grads = _map(one, jobs, cfg.threads)
    with_var = cfg.trials > 1
    header = ["row_type", "n_qubits", "input", "strategy", "trial", "grad_value"]
    if with_var:
        header.append("variance")
    rows = []
    groups = {}
    for (n, inp, s, tr), g in zip(jobs, grads):
        rows.append(["trial", n, inp, s, tr, g] + ([None] if with_var else []))
        groups.setdefault((n, inp, s), []).append(g)
    if with_var:
        for (n, inp, s), gs in groups.items():
            rows.append(["summary", n, inp, s, None, None, _variance(gs)])
    return Table(header, rows)


def scan_variances(table: Table):
    """``{(n, input, strategy): variance}`` from a variance-scan table."""
    out = {}
    for r in table.rows:
        if r[0] == "summary":
            out[(r[1], r[2], r[3])] = r[6]
    return out


# --- QNN ---------------------------------------------------------------------

def tracked_slots(template, qubits=(0, 1, 2)):
    return np.array([g.target in qubits for g in template.slot_gates])


def qnn_dataset(cfg, n):
    if "mnist" in cfg.inputs:
        images = load_mnist(cfg.mnist_images, cfg.mnist_labels)
        return mnist_dataset(images, cfg.examples, n, trial_rng(cfg.seed, 0))
    if "synthetic" not in cfg.inputs:
        raise ValueError("qnn needs --input mnist (with file paths) or --input synthetic")
    return synth_dataset(cfg.examples, n, trial_rng(cfg.seed, 0))


def qnn_trial(cfg, n, init, trial, dataset):
    rng = trial_rng(cfg.seed, 1, trial)
    t, p = build_identity_block(n, IdentityBlockPlan(cfg.blocks, cfg.block_depth, rng))
    if init == "zero":
        p = np.zeros_like(p)
    elif init == "random":
        p = random_params(t, rng)
    tc = TrainConfig(
        n_iterations=cfg.iterations,
        learning_rate=cfg.learning_rate,
        snapshot_every=cfg.snapshot_every,
        eval_every=cfg.snapshot_every,
        seed=trial_rng(cfg.seed, 2, trial),
        tol=None,
    )
    return t, qnn_train(t, p, dataset, tc)


def _snapshot_variance(runs, mask):
    """Across-trial variance per snapshot iteration, averaged over ``mask`` slots."""
    by_iter = {}
    for records in runs:
        for r in records:
            if r.grad_snapshot is not None:
                by_iter.setdefault(r.iteration, []).append(r.grad_snapshot[mask])
    out = {}
    for it, snaps in sorted(by_iter.items()):
        if len(snaps) > 1:
            out[it] = float(np.var(np.array(snaps), axis=0, ddof=1).mean())
    return out


def run_qnn(cfg: ExperimentConfig) -> Table:
    header = ["row_type", "init", "trial", "iteration", "loss", "accuracy", "grad_variance"]
    rows = []
    notes = {}
    for n in cfg.qubits:
        dataset = qnn_dataset(cfg, n)
        for init in cfg.inits:
            results = _map(
                lambda tr: qnn_trial(cfg, n, init, tr, dataset), range(cfg.trials), cfg.threads
            )
            runs = [recs for _, recs in results]
            for tr, recs in enumerate(runs):
                for r in recs:
                    rows.append(["train", init, tr, r.iteration, r.objective, r.accuracy, None])
            mask = tracked_slots(results[0][0])
            var = _snapshot_variance(runs, mask)
            for it, v in var.items():
                rows.append(["grad_variance", init, None, it, None, None, v])
            notes[(n, init)] = dict(
                final_accuracy=[next(r.accuracy for r in reversed(recs) if r.accuracy is not None)
                                for recs in runs],
                grad_variance=var,
            )
    return Table(header, rows, notes=notes)


# --- VQE ---------------------------------------------------------------------

def vqe_setup(cfg, n, trial):
    rng = trial_rng(cfg.seed, 3, trial)
    b = build_entangler(n, cfg.entangler_depth, rng)
    t, p = build_identity_block(n, IdentityBlockPlan(cfg.blocks, cfg.block_depth, rng))
    return t, p, b, rng


def vqe_init_params(init, t, p, rng):
    if init == "zero":
        return np.zeros_like(p)
    if init == "random":
        return random_params(t, rng)
    return p


def run_vqe(cfg: ExperimentConfig) -> Table:
    header = ["row_type", "init", "trial", "param_index", "iteration",
              "grad_value", "energy", "grad_variance"]
    rows = []
    notes = {}
    n = cfg.qubits[0]
    obs = heisenberg_hamiltonian(VqeProblem(n, 1.0, 1.0, periodic=True))
    e0 = exact_ground_energy(obs, n)
    tc = TrainConfig(
        n_iterations=cfg.iterations,
        learning_rate=cfg.learning_rate,
        snapshot_every=cfg.snapshot_every,
        tol=cfg.tol,
    )
    for init in cfg.inits:
        def one(tr):
            t, p, b, rng = vqe_setup(cfg, n, tr)
            p = vqe_init_params(init, t, p, rng)
            psi = run_circuit(b[0], b[1], zero_state(n))
            g0 = grad_adjoint_all(t, p, psi, obs).values
            return g0, vqe_train(t, p, obs, tc, entangler=b)

        results = _map(one, range(cfg.trials), cfg.threads)
        for tr, (g0, _) in enumerate(results):
            for k, g in enumerate(g0):
                rows.append(["init_grad", init, tr, k, 0, g, None, None])
        for tr, (_, recs) in enumerate(results):
            for r in recs:
                rows.append(["train", init, tr, None, r.iteration, None, r.objective, None])
        runs = [recs for _, recs in results]
        var = _snapshot_variance(runs, slice(None))
        for it, v in var.items():
            rows.append(["grad_variance", init, None, None, it, None, None, v])
        notes[init] = dict(
            init_grads=np.array([g for g, _ in results]),
            energies=[np.array([r.objective for r in recs]) for recs in runs],
        )
    rows.append(["ground_energy", None, None, None, None, None, e0, None])
    notes["ground_energy"] = e0
    return Table(header, rows, notes=notes)


# --- appendix verification ---------------------------------------------------

def _random_hermitian(N, rng):
    a = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return (a + a.conj().T) / 2


def run_verify_appendix(cfg: ExperimentConfig) -> Table:
    """Monte Carlo checks of the Haar-gradient mean, variance and the
    second-moment formula; ``passed`` is False if any row fails."""
    header = ["check", "N", "case", "measured", "analytic", "std_error",
              "n_samples", "threshold", "passed"]
    rows = []
    ns = cfg.samples
    scale = 2.0 if cfg.wrong_formula else 1.0

    rng = trial_rng(cfg.seed, 10)
    for case in range(5):
        M, H = _random_hermitian(8, rng), _random_hermitian(8, rng)
        est = grad_moments_mc(8, M, H, n_samples=max(100, ns // 2), rng=rng)
        thr = 3 * est.std_error_mean
        rows.append(["mean", 8, case, est.mean, 0.0, est.std_error_mean,
                     est.n_samples, thr, abs(est.mean) < thr])

    for N in (4, 8):
        rng = trial_rng(cfg.seed, 11, N)
        M, H = _random_hermitian(N, rng), _random_hermitian(N, rng)
        est = grad_moments_mc(N, M, H, n_samples=ns, rng=rng)
        closed = scale * variance_closed_form(M, H)
        thr = max(3 * est.std_error_var, 0.05 * abs(closed))
        rows.append(["variance", N, 0, est.variance, closed, est.std_error_var,
                     est.n_samples, thr, abs(est.variance - closed) < thr])

    for N in (2, 4):
        rng = trial_rng(cfg.seed, 12, N)
        tab = second_moment_table(N, 2 * ns, rng)
        for i, t in enumerate(tab.tuples):
            thr = 5 * tab.std_error[i]
            rows.append(["second_moment", N, "".join(map(str, t)), float(tab.empirical[i].real),
                         tab.analytic[i], tab.std_error[i], tab.n_samples, thr,
                         tab.residual[i] < thr])

    rng = trial_rng(cfg.seed, 13)
    for case in range(5):
        M, H = _random_hermitian(4, rng), _random_hermitian(4, rng)
        a = identity_init_gradient(H, M)
        b = grad_direction_dense(np.eye(4), M, H, np.eye(4)[0])
        rows.append(["identity_init", 4, case, a, b, 0.0, 1, 1e-12, abs(a - b) < 1e-12])

    passed = all(r[-1] for r in rows)
    return Table(header, rows, passed=passed)


RUNNERS = {
    "variance-scan": run_variance_scan,
    "qnn": run_qnn,
    "vqe": run_vqe,
    "verify-appendix": run_verify_appendix,
}
