"""Circuit families: random hardware-efficient layers, identity blocks, the
fixed entangler and the sqrt(H) product input state."""

from dataclasses import dataclass

import numpy as np

from .circuit import AXES, CircuitTemplate, GateSpec
from .linalg import I2
from .simulator import zero_state
from . import _kernels as K

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# principal square root of the Hadamard gate
SQRT_H = 0.5 * ((1 + 1j) * I2 + (1 - 1j) * HADAMARD)


def as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class IdentityBlockPlan:
    M: int
    L: int
    seed: object = 0

    def __post_init__(self):
        if self.M < 1 or self.L < 1:
            raise ValueError(f"identity-block plan needs M >= 1 and L >= 1, got {self}")

    @property
    def n_layers(self):
        return 2 * self.L * self.M


def cz_ladder(n_qubits):
    return [GateSpec.cz(q, q + 1) for q in range(n_qubits - 1)]


def _layer(axes_row, first_slot):
    return [GateSpec.rotation(AXES[a], q, first_slot + q) for q, a in enumerate(axes_row)]


def _layered_gates(axes):
    n = axes.shape[1]
    gates = []
    for l, row in enumerate(axes):
        gates += _layer(row, l * n)
        gates += cz_ladder(n)
    return gates


def _check_sizes(n_qubits, depth, min_qubits=2):
    if n_qubits < min_qubits:
        raise ValueError(f"need at least {min_qubits} qubits, got {n_qubits}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")


def build_random_ansatz(n_qubits, depth, seed):
    """``depth`` layers of random-axis rotations, each followed by a linear
    CZ ladder. Slot ``l*n + q`` is the rotation on qubit ``q`` in layer ``l``.
    """
    _check_sizes(n_qubits, depth)
    axes = as_rng(seed).integers(0, 3, size=(depth, n_qubits))
    return CircuitTemplate(n_qubits, tuple(_layered_gates(axes)), depth * n_qubits)


def random_params(template, seed):
    return as_rng(seed).uniform(0.0, 2 * np.pi, size=template.n_params)


def mirror_params(theta_half, n_blocks=1):
    """Append the reversed, negated copy of each block's first-half angles.

    >>> mirror_params([0.3, -1.2])
    array([ 0.3, -1.2,  1.2, -0.3])
    """
    theta_half = np.asarray(theta_half, dtype=float)
    if theta_half.size == 0:
        return theta_half.copy()
    blocks = theta_half.reshape(n_blocks, -1)
    return np.concatenate([np.concatenate([b, -b[::-1]]) for b in blocks])


def build_identity_block(n_qubits, plan: IdentityBlockPlan):
    """Identity-initialised circuit of ``plan.M`` blocks of ``2 * plan.L`` layers.

    Each block is ``L`` random layers followed by their gate-by-gate mirror.
    The returned parameters set the mirrored rotations to the negated angles
    so the whole circuit evaluates to the identity. After initialisation every
    slot is independent.
    """
    _check_sizes(n_qubits, plan.L)
    rng = as_rng(plan.seed)
    n, L = n_qubits, plan.L
    per_block = 2 * L * n
    gates = []
    block_map = []
    halves = []
    for m in range(plan.M):
        axes = rng.integers(0, 3, size=(L, n))
        theta = rng.uniform(0.0, 2 * np.pi, size=L * n)
        halves.append(theta)
        first = _layered_gates(axes)
        offset = m * per_block
        mirrored = []
        next_slot = L * n
        for g in reversed(first):
            if g.kind == "rot":
                mirrored.append(GateSpec.rotation(g.axis, g.target, next_slot))
                next_slot += 1
            else:
                mirrored.append(g)
        for g in first + mirrored:
            if g.kind == "rot":
                g = GateSpec.rotation(g.axis, g.target, g.slot + offset)
            gates.append(g)
        block_map += [(m + 1, 1, k // n + 1) for k in range(L * n)]
        block_map += [(m + 1, 2, L - k // n) for k in range(L * n)]
    template = CircuitTemplate(n, tuple(gates), plan.M * per_block, block_map=tuple(block_map))
    params = mirror_params(np.concatenate(halves), n_blocks=plan.M)
    return template, params


def block_positions(template):
    """Per-slot ``(block, position)`` with position in ``0 .. 2L-1`` counting
    layers in execution order within the block."""
    if template.block_map is None:
        raise ValueError("template has no block map")
    L = max(l for _, _, l in template.block_map)
    out = np.empty((template.n_params, 2), dtype=int)
    for k, (m, half, l) in enumerate(template.block_map):
        out[k] = (m - 1, l - 1 if half == 1 else 2 * L - l)
    return out


def build_entangler(n_qubits, depth, seed):
    """Fixed, non-trainable random layer stack ``B`` and its angles."""
    _check_sizes(n_qubits, depth)
    rng = as_rng(seed)
    t = build_random_ansatz(n_qubits, depth, rng)
    frozen = CircuitTemplate(t.n_qubits, t.gates, t.n_params, trainable=False)
    return frozen, random_params(frozen, rng)


def input_sqrt_h(n_qubits):
    """``sqrt(H)^{(x) n} |0...0>``."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    psi = zero_state(n_qubits)
    for q in range(n_qubits):
        K.apply_mat(psi, n_qubits, q, SQRT_H)
    return psi
