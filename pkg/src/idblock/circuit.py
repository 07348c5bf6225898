"""Gate, circuit-template and observable types.

A template is an immutable gate list with parameter slots; parameter values
travel separately as a float array so one template can be evaluated at many
points. Rotations follow the full-angle convention ``exp(-i theta V)``.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import _kernels as K
from .linalg import MAX_DIM, PAULI

AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class GateSpec:
    """One gate: a Pauli rotation, a CZ, or a fixed single-qubit unitary."""

    kind: str
    target: int
    axis: Optional[str] = None
    slot: Optional[int] = None
    control: Optional[int] = None
    matrix: Optional[tuple] = None

    @classmethod
    def rotation(cls, axis, target, slot):
        if axis not in AXES:
            raise ValueError(f"rotation axis must be one of {AXES}, got {axis!r}")
        return cls("rot", int(target), axis=axis, slot=int(slot))

    @classmethod
    def cz(cls, control, target):
        if control == target:
            raise ValueError("CZ control and target must differ")
        return cls("cz", int(target), control=int(control))

    @classmethod
    def fixed(cls, matrix, target):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("fixed gate must be a 2x2 matrix")
        if np.max(np.abs(m.conj().T @ m - np.eye(2))) > 1e-10:
            raise ValueError("fixed gate must be unitary")
        return cls("fixed", int(target), matrix=tuple(m.ravel().tolist()))

    def qubits(self):
        if self.kind == "cz":
            return (self.control, self.target)
        return (self.target,)

    def unitary(self, theta=0.0):
        """2x2 (or 4x4 for CZ, control first) matrix of the gate."""
        if self.kind == "rot":
            return np.cos(theta) * PAULI["I"] - 1j * np.sin(theta) * PAULI[self.axis]
        if self.kind == "cz":
            return np.diag([1, 1, 1, -1]).astype(complex)
        return np.array(self.matrix, dtype=complex).reshape(2, 2)


@dataclass(frozen=True)
class CircuitTemplate:
    """Ordered gate list with ``n_params`` parameter slots.

    ``block_map[k]`` is ``(block, half, layer)`` for slot ``k`` (all 1-based)
    when the template was produced by the identity-block builder.
    """

    n_qubits: int
    gates: tuple
    n_params: int
    block_map: Optional[tuple] = None
    trainable: bool = True

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        object.__setattr__(self, "gates", tuple(self.gates))
        seen = np.zeros(self.n_params, dtype=int)
        for g in self.gates:
            for q in g.qubits():
                if not 0 <= q < self.n_qubits:
                    raise IndexError(f"qubit {q} out of range for {self.n_qubits} qubits")
            if g.kind == "rot":
                if not 0 <= g.slot < self.n_params:
                    raise IndexError(f"parameter slot {g.slot} out of range ({self.n_params})")
                seen[g.slot] += 1
        if np.any(seen != 1):
            raise ValueError("every parameter slot must be used by exactly one rotation")
        if self.block_map is not None:
            object.__setattr__(self, "block_map", tuple(tuple(b) for b in self.block_map))
            if len(self.block_map) != self.n_params:
                raise ValueError("block_map must cover every parameter slot")

    @cached_property
    def program(self):
        """Compiled ``(ops, mats)`` arrays for the numba kernels."""
        ops = np.zeros((len(self.gates), 4), dtype=np.int64)
        mats = []
        for i, g in enumerate(self.gates):
            if g.kind == "rot":
                ops[i] = (K.ROT, AXES.index(g.axis), g.target, g.slot)
            elif g.kind == "cz":
                ops[i] = (K.CZ, 0, g.control, g.target)
            else:
                ops[i] = (K.FIXED, len(mats), g.target, 0)
                mats.append(g.unitary())
        if mats:
            mat_arr = np.array(mats, dtype=complex)
        else:
            mat_arr = np.zeros((1, 2, 2), dtype=complex)
        return ops, mat_arr

    @cached_property
    def slot_gates(self):
        """Rotation gate of each slot, indexed by slot."""
        out = [None] * self.n_params
        for g in self.gates:
            if g.kind == "rot":
                out[g.slot] = g
        return tuple(out)

    def check_params(self, params):
        params = np.ascontiguousarray(params, dtype=float)
        if params.ndim != 1 or params.shape[0] != self.n_params:
            raise ValueError(
                f"expected {self.n_params} parameters, got shape {params.shape}"
            )
        return params

    def to_text(self):
        """Serialise to the line format ``QUBITS n PARAMS p`` / ``ROT`` / ``CZ``."""
        lines = [f"QUBITS {self.n_qubits} PARAMS {self.n_params}"]
        for g in self.gates:
            if g.kind == "rot":
                lines.append(f"ROT {g.axis} {g.target} {g.slot}")
            elif g.kind == "cz":
                lines.append(f"CZ {g.control} {g.target}")
            else:
                vals = " ".join(repr(float(v)) for z in g.matrix for v in (z.real, z.imag))
                lines.append(f"FIX {g.target} {vals}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or rows[0][0] != "QUBITS" or rows[0][2] != "PARAMS":
            raise ValueError("missing 'QUBITS n PARAMS p' header")
        n, p = int(rows[0][1]), int(rows[0][3])
        gates = []
        for r in rows[1:]:
            if r[0] == "ROT":
                gates.append(GateSpec.rotation(r[1], int(r[2]), int(r[3])))
            elif r[0] == "CZ":
                gates.append(GateSpec.cz(int(r[1]), int(r[2])))
            elif r[0] == "FIX":
                v = [float(x) for x in r[2:10]]
                m = np.array(v[0::2]) + 1j * np.array(v[1::2])
                gates.append(GateSpec.fixed(m.reshape(2, 2), int(r[1])))
            else:
                raise ValueError(f"unknown gate line: {' '.join(r)}")
        return cls(n, tuple(gates), p)


class Observable:
    """Real-weighted sum of Pauli strings.

    ``terms`` is a sequence of ``(coef, {qubit: 'X'|'Y'|'Z'})``; an empty
    mapping is the identity.
    """

    def __init__(self, terms):
        clean = []
        for coef, paulis in terms:
            if isinstance(coef, complex) or np.iscomplexobj(coef):
                raise TypeError("Observable coefficients must be real")
            items = dict(paulis)
            for q, p in items.items():
                if p not in AXES:
                    raise ValueError(f"unknown Pauli {p!r}")
                if q < 0:
                    raise IndexError("negative qubit index")
            clean.append((float(coef), tuple(sorted(items.items()))))
        self.terms = tuple(clean)
        self._compiled = {}

    @classmethod
    def zz(cls, q1=0, q2=1):
        return cls([(1.0, {q1: "Z", q2: "Z"})])

    @classmethod
    def identity(cls, coef=1.0):
        return cls([(coef, {})])

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        parts = []
        for c, s in self.terms:
            label = "".join(f"{p}{q}" for q, p in s) or "I"
            parts.append(f"{c:+g}*{label}")
        return f"Observable({' '.join(parts)})"

    def __add__(self, other):
        return Observable(
            [(c, dict(s)) for c, s in self.terms] + [(c, dict(s)) for c, s in other.terms]
        )

    def scaled(self, factor):
        return Observable([(factor * c, dict(s)) for c, s in self.terms])

    @property
    def max_qubit(self):
        return max((q for _, s in self.terms for q, _ in s), default=-1)

    def compiled(self, n_qubits):
        if self.max_qubit >= n_qubits:
            raise IndexError(
                f"observable acts on qubit {self.max_qubit} but state has {n_qubits} qubits"
            )
        if n_qubits not in self._compiled:
            m = len(self.terms)
            coefs = np.zeros(m)
            xm = np.zeros(m, dtype=np.int64)
            zm = np.zeros(m, dtype=np.int64)
            ny = np.zeros(m, dtype=np.int64)
            for t, (c, s) in enumerate(self.terms):
                coefs[t] = c
                for q, p in s:
                    bit = 1 << (n_qubits - 1 - q)
                    if p in "XY":
                        xm[t] |= bit
                    if p in "YZ":
                        zm[t] |= bit
                    if p == "Y":
                        ny[t] += 1
            self._compiled[n_qubits] = (coefs, xm, zm, ny)
        return self._compiled[n_qubits]

    def matrix(self, n_qubits):
        """Dense ``2**n x 2**n`` matrix."""
        coefs, xm, zm, ny = self.compiled(n_qubits)
        dim = 2**n_qubits
        if dim > MAX_DIM:
            raise ValueError(f"dense observable limited to dimension {MAX_DIM}")
        out = np.empty((dim, dim), dtype=complex)
        col = np.zeros(dim, dtype=complex)
        buf = np.empty(dim, dtype=complex)
        for j in range(dim):
            col[j] = 1.0
            K.apply_pauli_sum(col, buf, coefs, xm, zm, ny)
            out[:, j] = buf
            col[j] = 0.0
        return out
