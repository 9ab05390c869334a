"""Statevector construction for (weighted) hypergraph, phase and W states."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.stats import unitary_group

from hyperstate import _kernels
from hyperstate.errors import CapacityError, DimensionError, HyperstateError
from hyperstate.hypercore import (
    BooleanFunction,
    Hypergraph,
    PhaseFunction,
    WeightedHypergraph,
    zeta_transform,
)

NORM_TOL = 1e-10
UNITARY_TOL = 1e-12
DEFAULT_MAX_QUBITS = 26
CONVENTION = "q1=MSB"

I = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
for _m in (I, X, Y, Z, H):
    _m.setflags(write=False)

_max_qubits_override: int | None = None


def set_max_qubits(n: int | None) -> None:
    """Override the capacity guard; ``None`` restores env/default."""
    global _max_qubits_override
    _max_qubits_override = n


def max_qubits() -> int:
    if _max_qubits_override is not None:
        return _max_qubits_override
    env = os.environ.get("HYPERSTATE_MAX_QUBITS")
    if env:
        return int(env)
    return DEFAULT_MAX_QUBITS


def check_capacity(n: int) -> None:
    if n < 1:
        raise HyperstateError("need at least one qubit")
    limit = max_qubits()
    if n > limit:
        raise CapacityError(f"{n} qubits exceeds the limit of {limit} (raise --max-qubits)")


def as_local_unitary(m) -> np.ndarray:
    u = np.asarray(m, dtype=np.complex128)
    if u.shape != (2, 2):
        raise DimensionError("a local unitary is a 2x2 matrix")
    if np.abs(u.conj().T @ u - I).max() > UNITARY_TOL:
        raise HyperstateError("matrix is not unitary")
    return u


def haar_unitary(rng=None) -> np.ndarray:
    return unitary_group.rvs(2, random_state=rng)


def phase_factors(values) -> np.ndarray:
    """``exp(i pi v)`` with exact results on multiples of 1/2."""
    v = np.asarray(values)
    if v.dtype.kind in "iu":
        return np.where(v % 2 == 0, 1.0 + 0j, -1.0 + 0j)
    v = np.mod(v.astype(np.float64), 2.0)
    out = np.exp(1j * np.pi * v)
    q = 2.0 * v
    exact = q == np.round(q)
    if exact.any():
        table = np.array([1, 1j, -1, -1j], dtype=np.complex128)
        out[exact] = table[np.round(q[exact]).astype(np.int64) % 4]
    return out


def _phase_scalar(alpha: float) -> complex:
    return complex(phase_factors(np.array([alpha], dtype=np.float64))[0])


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.n:
            raise DimensionError(f"expected {1 << self.n} amplitudes, got {amps.shape[0]}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise HyperstateError(f"state is not normalised (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, amps, n: int | None = None) -> "StateVector":
        a = np.asarray(amps, dtype=np.complex128).reshape(-1)
        if n is None:
            n = a.shape[0].bit_length() - 1
        return cls(n, a / np.linalg.norm(a))

    def _buffer(self) -> np.ndarray:
        return np.array(self.amps)

    def to_dump(self) -> dict:
        return {
            "n": self.n,
            "convention": CONVENTION,
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    @classmethod
    def from_dump(cls, record: dict) -> "StateVector":
        if record.get("convention", CONVENTION) != CONVENTION:
            raise HyperstateError(f"unsupported index convention {record['convention']!r}")
        n = int(record["n"])
        check_capacity(n)
        pairs = np.asarray(record["amps"], dtype=np.float64)
        if pairs.shape != (1 << n, 2):
            raise DimensionError("amps must be a list of 2^n [re, im] pairs")
        return cls(n, pairs[:, 0] + 1j * pairs[:, 1])

    def dumps(self) -> str:
        return json.dumps(self.to_dump())


def states_equal(a: StateVector, b: StateVector, tol: float = 1e-12, up_to_phase: bool = False) -> bool:
    """Amplitude-wise comparison; ``up_to_phase`` divides out the phase of
    the first nonzero amplitude of each state first."""
    if a.n != b.n:
        return False
    x, y = a.amps, b.amps
    if up_to_phase:
        x = _strip_phase(x)
        y = _strip_phase(y)
    return bool(np.abs(x - y).max() <= tol)


def _strip_phase(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if nz.size == 0:
        return v
    p = v[nz[0]]
    return v * (abs(p) / p)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def plus_state(n: int) -> StateVector:
    check_capacity(n)
    return StateVector(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128))


def apply_hyperedge_gate(s: StateVector, e: int) -> StateVector:
    """Flip the sign of every amplitude whose index contains all bits of ``e``."""
    e = int(e)
    if not 0 <= e < (1 << s.n):
        raise HyperstateError(f"edge mask {e} invalid for n={s.n}")
    buf = s._buffer()
    _kernels.negate_mask(buf, e)
    return StateVector(s.n, buf)


def apply_weighted_gate(s: StateVector, e: int, alpha: float) -> StateVector:
    """Multiply by ``exp(i pi alpha)`` wherever all qubits of ``e`` are 1."""
    e = int(e)
    if not 0 <= e < (1 << s.n):
        raise HyperstateError(f"edge mask {e} invalid for n={s.n}")
    buf = s._buffer()
    _kernels.apply_phase_mask(buf, e, _phase_scalar(alpha))
    return StateVector(s.n, buf)


def hypergraph_state(g: Hypergraph) -> StateVector:
    check_capacity(g.n)
    buf = np.full(1 << g.n, 2.0 ** (-g.n / 2), dtype=np.complex128)
    for e in g.sorted_edges():
        _kernels.negate_mask(buf, e)
    return StateVector(g.n, buf)


def phase_state(f: PhaseFunction) -> StateVector:
    check_capacity(f.n)
    return StateVector(f.n, 2.0 ** (-f.n / 2) * phase_factors(f.values))


def weighted_hypergraph_state(g: WeightedHypergraph) -> StateVector:
    check_capacity(g.n)
    return phase_state(zeta_transform(g))


def rew_state(b: BooleanFunction) -> StateVector:
    """Real equally weighted state ``(-1)^b(x) / sqrt(2^n)``."""
    check_capacity(b.n)
    signs = 1.0 - 2.0 * b.table.astype(np.float64)
    return StateVector(b.n, 2.0 ** (-b.n / 2) * signs)


def w_state(n: int) -> StateVector:
    if n < 2:
        raise HyperstateError("the W state needs n >= 2")
    check_capacity(n)
    buf = np.zeros(1 << n, dtype=np.complex128)
    buf[[1 << k for k in range(n)]] = 1.0 / math.sqrt(n)
    return StateVector(n, buf)


def prop2_alpha(n: int) -> float:
    """Principal ``alpha`` (pi units) with ``cos(alpha pi) = 2^-n``."""
    return math.acos(2.0 ** (-n)) / math.pi


def prop2_state(n: int) -> StateVector:
    """Phase state with ``f(0) = alpha`` and ``f = 0`` elsewhere, where
    ``cos(alpha pi) = 2^-n``; its single-qubit determinant is not of the
    form ``1/4 - m^2/4^n`` for any integer ``m``."""
    if n < 2:
        raise HyperstateError("prop2 state needs n >= 2")
    check_capacity(n)
    alpha = prop2_alpha(n)
    values = np.zeros(1 << n, dtype=np.float64)
    values[0] = alpha
    s = phase_state(PhaseFunction(n, values))
    return StateVector(n, s.amps, meta={"alpha": alpha, "branch": "principal"})


def apply_local_unitary(s: StateVector, l: int, u) -> StateVector:
    if not 1 <= l <= s.n:
        raise HyperstateError(f"qubit {l} outside 1..{s.n}")
    u = np.ascontiguousarray(as_local_unitary(u))
    out = _kernels.apply_single(s._buffer(), s.n, l, u)
    return StateVector(s.n, out)


def apply_local_layer(s: StateVector, unitaries) -> StateVector:
    """Apply ``U_1 (x) ... (x) U_n``."""
    if len(unitaries) != s.n:
        raise DimensionError("need one unitary per qubit")
    for l, u in enumerate(unitaries, start=1):
        s = apply_local_unitary(s, l, u)
    return s


def overlap(a: StateVector, b: StateVector) -> complex:
    if a.n != b.n:
        raise DimensionError(f"cannot overlap {a.n}- and {b.n}-qubit states")
    return complex(np.vdot(a.amps, b.amps))
