"""Adam, the Heisenberg-chain VQE and the binary QNN classifier."""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .ansatz import as_rng
from .circuit import Observable
from .gradients import energy_and_grad
from .linalg import hermitian_eig
from .simulator import expectation, run_circuit, zero_state

PROB_CLIP = 1e-12
EXACT_MAX_QUBITS = 12


# --- Adam -------------------------------------------------------------------

@dataclass(frozen=True)
class AdamState:
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def zeros(cls, n_params, learning_rate=1e-3, **kw):
        return cls(np.zeros(n_params), np.zeros(n_params), 0, learning_rate, **kw)


def adam_step(state: AdamState, params, grads):
    """One bias-corrected Adam update. Returns ``(new_state, new_params)``."""
    params = np.asarray(params, dtype=float)
    grads = np.asarray(grads, dtype=float)
    if params.shape != grads.shape or grads.shape != state.first_moment.shape:
        raise ValueError(
            f"length mismatch: params {params.shape}, grads {grads.shape}, "
            f"state {state.first_moment.shape}"
        )
    if not np.all(np.isfinite(grads)):
        raise ValueError("non-finite gradient entries")
    t = state.step_count + 1
    m = state.beta1 * state.first_moment + (1 - state.beta1) * grads
    v = state.beta2 * state.second_moment + (1 - state.beta2) * grads * grads
    m_hat = m / (1 - state.beta1**t)
    v_hat = v / (1 - state.beta2**t)
    new_params = params - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return replace(state, first_moment=m, second_moment=v, step_count=t), new_params


# --- records and configs ------------------------------------------------------

@dataclass
class TrainRecord:
    iteration: int
    objective: float
    accuracy: Optional[float] = None
    grad_snapshot: Optional[np.ndarray] = None


@dataclass
class TrainConfig:
    """Optimiser and bookkeeping settings shared by both training loops.

    ``n_iterations`` is a cap. The VQE loop also stops once the mean energy
    of the last ``window`` iterations improves on the previous window by
    less than ``tol``; ``tol=None`` disables that.
    """

    n_iterations: int = 2000
    learning_rate: float = 1e-3
    snapshot_every: int = 10
    eval_every: int = 10
    seed: object = 0
    tol: Optional[float] = 1e-6
    window: int = 100


QNN_DEFAULTS = TrainConfig(n_iterations=2000, tol=None)
VQE_DEFAULTS = TrainConfig(n_iterations=5000, tol=1e-6)


# --- VQE ---------------------------------------------------------------------

@dataclass(frozen=True)
class VqeProblem:
    n_qubits: int
    J: float = 1.0
    h: float = 1.0
    periodic: bool = True

    def __post_init__(self):
        if self.n_qubits < (3 if self.periodic else 2):
            raise ValueError(f"invalid Heisenberg chain size {self.n_qubits}")

    @property
    def edges(self):
        n = self.n_qubits
        last = n if self.periodic else n - 1
        return [(i, (i + 1) % n) for i in range(last)]


def heisenberg_hamiltonian(problem: VqeProblem):
    """``J sum_(i,j) (XX + YY + ZZ) + h sum_i Z_i`` on a (periodic) chain."""
    terms = []
    for i, j in problem.edges:
        for p in "XYZ":
            terms.append((problem.J, {i: p, j: p}))
    for i in range(problem.n_qubits):
        terms.append((problem.h, {i: "Z"}))
    return Observable(terms)


def exact_ground_energy(obs: Observable, n_qubits):
    if n_qubits > EXACT_MAX_QUBITS:
        raise ValueError(f"dense diagonalisation limited to {EXACT_MAX_QUBITS} qubits")
    w, _ = hermitian_eig(obs.matrix(n_qubits))
    return float(w[0])


def _window_stalled(history, window, tol):
    if tol is None or len(history) < 2 * window:
        return False
    prev = np.mean(history[-2 * window : -window])
    last = np.mean(history[-window:])
    return prev - last < tol


def vqe_train(template, params0, obs, config: TrainConfig = VQE_DEFAULTS, entangler=None):
    """Full-gradient Adam descent on ``<psi|U^dag H U|psi>`` with ``psi = B|0>``.

    ``entangler`` is the ``(template, params)`` pair of the fixed circuit ``B``
    and must be marked non-trainable; ``None`` means ``psi = |0>``.
    """
    n = template.n_qubits
    psi = zero_state(n)
    if entangler is not None:
        b_template, b_params = entangler
        if b_template.trainable:
            raise ValueError("entangler B must be marked non-trainable")
        psi = run_circuit(b_template, b_params, psi)
    params = template.check_params(params0).copy()
    adam = AdamState.zeros(template.n_params, config.learning_rate)
    records = []
    energies = []
    for it in range(config.n_iterations):
        e, g = energy_and_grad(template, params, psi, obs)
        if not np.isfinite(e):
            raise FloatingPointError(f"non-finite energy at iteration {it}")
        snap = g.copy() if it % config.snapshot_every == 0 else None
        records.append(TrainRecord(it, e, None, snap))
        energies.append(e)
        if _window_stalled(energies, config.window, config.tol):
            break
        adam, params = adam_step(adam, params, g)
    return records


# --- QNN ---------------------------------------------------------------------

def qnn_predict(template, params, encoded, obs=None):
    """``P(even | psi) = (<psi|U^dag ZZ U|psi> + 1) / 2``."""
    obs = Observable.zz() if obs is None else obs
    e = expectation(run_circuit(template, params, encoded), obs)
    return float(min(1.0, max(0.0, 0.5 * (e + 1.0))))


def cross_entropy(prob_even, label):
    p = min(1.0 - PROB_CLIP, max(PROB_CLIP, float(prob_even)))
    return float(-(label * np.log(p) + (1 - label) * np.log(1 - p)))


def _ce_slope(prob_even, label):
    p = min(1.0 - PROB_CLIP, max(PROB_CLIP, float(prob_even)))
    return -label / p + (1 - label) / (1 - p)


def qnn_accuracy(template, params, dataset, obs=None):
    hits = 0
    for ex in dataset:
        pred = 1 if qnn_predict(template, params, ex.state, obs) >= 0.5 else 0
        hits += pred == ex.label
    return hits / len(dataset)


def qnn_train(template, params0, dataset, config: TrainConfig = QNN_DEFAULTS, obs=None):
    """Single-example stochastic Adam on the binary cross-entropy.

    ``accuracy`` is the training-set accuracy, filled every
    ``config.eval_every`` iterations and on the last one.
    """
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    obs = Observable.zz() if obs is None else obs
    rng = as_rng(config.seed)
    params = template.check_params(params0).copy()
    adam = AdamState.zeros(template.n_params, config.learning_rate)
    records = []
    for it in range(config.n_iterations):
        ex = dataset[rng.integers(len(dataset))]
        e, g_e = energy_and_grad(template, params, ex.state, obs)
        p = 0.5 * (e + 1.0)
        loss = cross_entropy(p, ex.label)
        if not np.isfinite(loss):
            raise FloatingPointError(f"non-finite loss at iteration {it}")
        grad = _ce_slope(p, ex.label) * 0.5 * g_e
        acc = None
        if it % config.eval_every == 0 or it == config.n_iterations - 1:
            acc = qnn_accuracy(template, params, dataset, obs)
        snap = grad.copy() if it % config.snapshot_every == 0 else None
        records.append(TrainRecord(it, loss, acc, snap))
        adam, params = adam_step(adam, params, grad)
    return records
