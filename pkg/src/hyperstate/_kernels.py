"""Hot 2^n inner loops.

Each kernel has a pure-numpy implementation and, when numba is importable, a
``@njit`` twin with the same signature.  The active set is chosen at import
time; set ``HYPERSTATE_DISABLE_NUMBA=1`` to force the numpy path.

All in-place kernels operate on a C-contiguous 1-D array of length 2^n.
Index bit ``1 << (n - l)`` belongs to qubit / vertex ``l`` (1-based).
"""

import os

import numpy as np

try:
    import numba as nb
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    nb = None
    HAVE_NUMBA = False

_DISABLE = os.environ.get("HYPERSTATE_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = HAVE_NUMBA and _DISABLE not in ("1", "true", "yes", "on")

njit_kwargs = {
    "nogil": True,
    "cache": True,
}


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _np_zeta(a, n):
    # a[x] <- sum_{e subset of x} a[e]
    for k in range(n):
        step = 1 << k
        v = a.reshape(-1, 2, step)
        v[:, 1, :] += v[:, 0, :]
    return a


def _np_mobius(a, n):
    for k in range(n):
        step = 1 << k
        v = a.reshape(-1, 2, step)
        v[:, 1, :] -= v[:, 0, :]
    return a


def _np_mobius_xor(a, n):
    # GF(2) Moebius inversion; zeta over GF(2) is the same map
    for k in range(n):
        step = 1 << k
        v = a.reshape(-1, 2, step)
        v[:, 1, :] ^= v[:, 0, :]
    return a


def _np_apply_phase_mask(amps, mask, phase):
    idx = np.arange(amps.shape[0])
    hit = (idx & mask) == mask
    amps[hit] *= phase
    return amps


def _np_negate_mask(amps, mask):
    idx = np.arange(amps.shape[0])
    hit = (idx & mask) == mask
    amps[hit] = -amps[hit]
    return amps


def _np_reduced_single(amps, n, l):
    psi = amps.reshape(1 << (l - 1), 2, 1 << (n - l))
    return np.einsum("iaj,ibj->ab", psi, psi.conj())


def _np_apply_single(amps, n, l, u):
    psi = amps.reshape(1 << (l - 1), 2, 1 << (n - l))
    out = np.einsum("ab,ibj->iaj", u, psi)
    return np.ascontiguousarray(out).reshape(-1)


def _np_chi_bool(table, n, l):
    # sum over x with bit l clear of (-1)^(t[x] xor t[x | bit])
    t = table.reshape(1 << (l - 1), 2, 1 << (n - l))
    diff = t[:, 0, :] ^ t[:, 1, :]
    m = diff.size
    return int(m - 2 * int(diff.sum()))


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @nb.njit(**njit_kwargs)
    def _nb_zeta(a, n):
        size = a.shape[0]
        for k in range(n):
            bit = 1 << k
            for base in range(0, size, 2 * bit):
                for j in range(base, base + bit):
                    a[j + bit] += a[j]
        return a

    @nb.njit(**njit_kwargs)
    def _nb_mobius(a, n):
        size = a.shape[0]
        for k in range(n):
            bit = 1 << k
            for base in range(0, size, 2 * bit):
                for j in range(base, base + bit):
                    a[j + bit] -= a[j]
        return a

    @nb.njit(**njit_kwargs)
    def _nb_mobius_xor(a, n):
        size = a.shape[0]
        for k in range(n):
            bit = 1 << k
            for base in range(0, size, 2 * bit):
                for j in range(base, base + bit):
                    a[j + bit] ^= a[j]
        return a

    @nb.njit(**njit_kwargs)
    def _nb_apply_phase_mask(amps, mask, phase):
        for x in range(amps.shape[0]):
            if x & mask == mask:
                amps[x] *= phase
        return amps

    @nb.njit(**njit_kwargs)
    def _nb_negate_mask(amps, mask):
        for x in range(amps.shape[0]):
            if x & mask == mask:
                amps[x] = -amps[x]
        return amps

    @nb.njit(**njit_kwargs)
    def _nb_reduced_single(amps, n, l):
        bit = 1 << (n - l)
        rho = np.zeros((2, 2), dtype=np.complex128)
        r00 = 0.0
        r11 = 0.0
        r01 = 0.0j
        for x in range(amps.shape[0]):
            if x & bit:
                continue
            a0 = amps[x]
            a1 = amps[x | bit]
            r00 += a0.real * a0.real + a0.imag * a0.imag
            r11 += a1.real * a1.real + a1.imag * a1.imag
            r01 += a0 * np.conj(a1)
        rho[0, 0] = r00
        rho[1, 1] = r11
        rho[0, 1] = r01
        rho[1, 0] = np.conj(r01)
        return rho

    @nb.njit(**njit_kwargs)
    def _nb_apply_single(amps, n, l, u):
        bit = 1 << (n - l)
        out = np.empty_like(amps)
        for x in range(amps.shape[0]):
            if x & bit:
                continue
            a0 = amps[x]
            a1 = amps[x | bit]
            out[x] = u[0, 0] * a0 + u[0, 1] * a1
            out[x | bit] = u[1, 0] * a0 + u[1, 1] * a1
        return out

    @nb.njit(**njit_kwargs)
    def _nb_chi_bool(table, n, l):
        bit = 1 << (n - l)
        flips = 0
        for base in range(0, table.shape[0], 2 * bit):
            for j in range(base, base + bit):
                flips += table[j] ^ table[j + bit]
        return (table.shape[0] >> 1) - 2 * flips


NUMPY_KERNELS = {
    "zeta": _np_zeta,
    "mobius": _np_mobius,
    "mobius_xor": _np_mobius_xor,
    "apply_phase_mask": _np_apply_phase_mask,
    "negate_mask": _np_negate_mask,
    "reduced_single": _np_reduced_single,
    "apply_single": _np_apply_single,
    "chi_bool": _np_chi_bool,
}

if HAVE_NUMBA:
    NUMBA_KERNELS = {
        "zeta": _nb_zeta,
        "mobius": _nb_mobius,
        "mobius_xor": _nb_mobius_xor,
        "apply_phase_mask": _nb_apply_phase_mask,
        "negate_mask": _nb_negate_mask,
        "reduced_single": _nb_reduced_single,
        "apply_single": _nb_apply_single,
        "chi_bool": lambda table, n, l: int(_nb_chi_bool(table, n, l)),
    }
else:  # pragma: no cover
    NUMBA_KERNELS = {}

_active = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS
BACKEND = "numba" if USE_NUMBA else "numpy"

zeta_inplace = _active["zeta"]
mobius_inplace = _active["mobius"]
mobius_xor_inplace = _active["mobius_xor"]
apply_phase_mask = _active["apply_phase_mask"]
negate_mask = _active["negate_mask"]
reduced_single = _active["reduced_single"]
apply_single = _active["apply_single"]
chi_bool = _active["chi_bool"]
