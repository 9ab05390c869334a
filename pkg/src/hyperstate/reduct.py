"""Single-qubit reduced states and the local-unitary invariants built on them."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from hyperstate import _kernels
from hyperstate.errors import HyperstateError
from hyperstate.hypercore import PhaseFunction
from hyperstate.qstate import I, StateVector, apply_local_layer, phase_factors

HERMITIAN_TOL = 1e-12
FINGERPRINT_TOL = 1e-9
PHASE_FIX_TOL = 1e-8
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    lambda1: float
    lambda2: float

    def __post_init__(self):
        if self.lambda1 < self.lambda2 or self.lambda2 < -1e-12:
            raise HyperstateError(f"bad spectrum ({self.lambda1}, {self.lambda2})")

    def close(self, other: "Spectrum", tol: float = FINGERPRINT_TOL) -> bool:
        return abs(self.lambda1 - other.lambda1) <= tol and abs(self.lambda2 - other.lambda2) <= tol


@dataclass(frozen=True)
class LuFingerprint:
    """Per-qubit spectra plus the same multiset sorted by ``lambda1``."""

    per_qubit: tuple[Spectrum, ...]

    @property
    def multiset(self) -> tuple[Spectrum, ...]:
        return tuple(sorted(self.per_qubit, key=lambda s: (-s.lambda1, s.lambda2)))

    def matches(self, other: "LuFingerprint", tol: float = FINGERPRINT_TOL) -> bool:
        """Necessary condition for LU equivalence with fixed qubit labels."""
        return len(self.per_qubit) == len(other.per_qubit) and all(
            a.close(b, tol) for a, b in zip(self.per_qubit, other.per_qubit)
        )

    def matches_unordered(self, other: "LuFingerprint", tol: float = FINGERPRINT_TOL) -> bool:
        return len(self.per_qubit) == len(other.per_qubit) and all(
            a.close(b, tol) for a, b in zip(self.multiset, other.multiset)
        )

    def digest(self) -> str:
        # 1e-9 grid; values sitting on a rounding boundary may hash apart
        text = ";".join(f"{round(s.lambda1, 9):.9f}" for s in self.per_qubit)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _check_qubit(n: int, l: int) -> None:
    if not 1 <= l <= n:
        raise HyperstateError(f"qubit {l} outside 1..{n}")


def reduced_single(s: StateVector, l: int) -> np.ndarray:
    """``rho_l``: trace out every qubit except ``l``."""
    _check_qubit(s.n, l)
    return _kernels.reduced_single(np.ascontiguousarray(s.amps), s.n, l)


def validate_reduced(rho: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    if np.abs(rho - rho.conj().T).max() > tol:
        raise HyperstateError("reduced state is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise HyperstateError("reduced state does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise HyperstateError("reduced state is not positive semidefinite")


def chi(f: PhaseFunction, l: int = 1):
    """Off-diagonal sum ``sum_x exp(i pi [f(x|l=0) - f(x|l=1)])``.

    For qubit ``l`` the pairs are taken with bit ``l`` in the leading
    position, i.e. after the permutation swapping qubits 1 and ``l``.
    Integer-valued ``f`` returns an exact ``int``.
    """
    _check_qubit(f.n, l)
    n = f.n
    if f.is_integral():
        parity = np.ascontiguousarray(np.mod(f.values, 2).astype(np.uint8))
        return _kernels.chi_bool(parity, n, l)
    v = np.asarray(f.values, dtype=np.float64).reshape(1 << (l - 1), 2, 1 << (n - l))
    return complex(phase_factors(v[:, 0, :] - v[:, 1, :]).sum())


def spectrum(rho: np.ndarray) -> Spectrum:
    w = np.linalg.eigvalsh(rho)
    return Spectrum(float(w[1]), float(max(w[0], 0.0)))


def spectral_decomposition(rho: np.ndarray) -> tuple[np.ndarray, Spectrum]:
    """Return ``(U, D)`` with ``U rho U^dagger = diag(lambda1, lambda2)``.

    Eigenvectors are phase-fixed so their first component of modulus above
    1e-8 is real positive; a degenerate ``rho`` gives ``U = I``.
    """
    w, v = np.linalg.eigh(rho)
    lam1, lam2 = float(w[1]), float(w[0])
    if lam1 - lam2 <= DEGENERACY_TOL:
        return I.copy(), Spectrum(lam1, lam2 if lam2 <= lam1 else lam1)
    vecs = v[:, ::-1].copy()
    for k in range(2):
        col = vecs[:, k]
        j = int(np.flatnonzero(np.abs(col) > PHASE_FIX_TOL)[0])
        vecs[:, k] = col * (abs(col[j]) / col[j])
    u = vecs.conj().T
    return u, Spectrum(lam1, max(lam2, 0.0))


def trace_decomposition(s: StateVector) -> tuple[StateVector, list[np.ndarray]]:
    """Locally rotate ``s`` so every single-qubit reduction is diagonal with
    descending entries.  Returns the rotated state and the unitaries used."""
    locals_ = [spectral_decomposition(reduced_single(s, l))[0] for l in range(1, s.n + 1)]
    return apply_local_layer(s, locals_), locals_


def det_invariant(rho: np.ndarray) -> float:
    return float((rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]).real)


def entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy in bits."""
    out = 0.0
    for lam in np.linalg.eigvalsh(rho):
        if lam > 0:
            out -= lam * math.log2(lam)
    return max(out, 0.0)


def lu_fingerprint(s: StateVector) -> LuFingerprint:
    return LuFingerprint(tuple(spectrum(reduced_single(s, l)) for l in range(1, s.n + 1)))


def phase_state_det(chi_value, n: int) -> float:
    return 0.25 - abs(chi_value) ** 2 / 4.0 ** n


def invariant_report(s: StateVector, f: PhaseFunction | None = None) -> dict:
    """Per-qubit spectra, determinant, entropy and, when ``f`` (or an
    equal-modulus state) is available, the off-diagonal sum."""
    per = []
    for l in range(1, s.n + 1):
        rho = reduced_single(s, l)
        spec = spectrum(rho)
        c = rho[0, 1] * 2 ** s.n
        is_int = False
        if f is not None:
            exact = chi(f, l)
            is_int = isinstance(exact, int)
            c = complex(exact)
        per.append({
            "l": l,
            "lambda1": spec.lambda1,
            "lambda2": spec.lambda2,
            "det": det_invariant(rho),
            "entropy_bits": entropy(rho),
            "chi_re": float(c.real),
            "chi_im": float(c.imag),
            "chi_is_integer": bool(is_int or (abs(c.imag) < 1e-9 and abs(c.real - round(c.real)) < 1e-9)),
        })
    return {"n": s.n, "per_qubit": per, "fingerprint_hash": lu_fingerprint(s).digest()}
