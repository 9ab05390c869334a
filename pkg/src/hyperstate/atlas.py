"""Exhaustive enumeration of small hypergraph states.

The atlas is raw: one entry per hypergraph on the nonempty subsets of the
vertex set (the empty hyperedge is a global sign and is skipped), with no
quotienting by symmetry.  Off-diagonal sums are computed on the exact
integer path, and spectra follow from them in closed form
(``lambda = 1/2 +- |chi| / 2^n``).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from hyperstate.errors import CapacityError, HyperstateError
from hyperstate.hypercore import Hypergraph
from hyperstate.lme import certify_phase_state, lme_decide
from hyperstate.qstate import hypergraph_state, prop2_state, w_state
from hyperstate.reduct import (
    FINGERPRINT_TOL,
    LuFingerprint,
    Spectrum,
    det_invariant,
    lu_fingerprint,
    reduced_single,
)

MAX_ATLAS_QUBITS = 4


@dataclass(frozen=True)
class AtlasEntry:
    hypergraph: Hypergraph
    chi_per_qubit: tuple[int, ...]
    fingerprint: LuFingerprint
    lme: str = "LME"

    @property
    def edge_masks(self) -> list[int]:
        return self.hypergraph.sorted_edges()

    def det(self, l: int) -> float:
        return 0.25 - self.chi_per_qubit[l - 1] ** 2 / 4.0 ** self.hypergraph.n


def _guard(n: int, allow_large: bool) -> None:
    if n < 1:
        raise HyperstateError("n must be positive")
    if n > MAX_ATLAS_QUBITS and not allow_large:
        raise CapacityError(f"atlas enumeration refused for n={n} > {MAX_ATLAS_QUBITS}")


def enumerate_hypergraphs(n: int, allow_large: bool = False) -> Iterator[Hypergraph]:
    """All ``2^(2^n - 1)`` hypergraphs without the empty edge.

    Counter bit ``k`` switches on edge mask ``k + 1``.
    """
    _guard(n, allow_large)
    slots = (1 << n) - 1
    for code in range(1 << slots):
        yield Hypergraph(n, frozenset(k + 1 for k in range(slots) if code >> k & 1))


def _truth_tables(n: int) -> np.ndarray:
    """Row ``c`` is the truth table of the hypergraph with counter ``c``."""
    size = 1 << n
    slots = size - 1
    codes = np.arange(1 << slots, dtype=np.int64)
    coeff = ((codes[:, None] >> np.arange(slots)[None, :]) & 1).astype(np.uint8)
    x = np.arange(size)
    masks = np.arange(1, size)
    contains = ((x[None, :] & masks[:, None]) == masks[:, None]).astype(np.uint8)
    return (coeff.astype(np.int64) @ contains.astype(np.int64)) & 1


def _chi_from_tables(tables: np.ndarray, n: int) -> np.ndarray:
    rows = tables.shape[0]
    out = np.empty((rows, n), dtype=np.int64)
    for l in range(1, n + 1):
        t = tables.reshape(rows, 1 << (l - 1), 2, 1 << (n - l))
        diff = t[:, :, 0, :] ^ t[:, :, 1, :]
        out[:, l - 1] = (1 << (n - 1)) - 2 * diff.reshape(rows, -1).sum(axis=1)
    return out


def _spectrum_from_chi(c: int, n: int) -> Spectrum:
    r = abs(c) / 2.0 ** n
    return Spectrum(0.5 + r, 0.5 - r)


def build_atlas(n: int, allow_large: bool = False) -> list[AtlasEntry]:
    _guard(n, allow_large)
    chis = _chi_from_tables(_truth_tables(n), n)
    entries = []
    for g, row in zip(enumerate_hypergraphs(n, allow_large), chis):
        c = tuple(int(v) for v in row)
        fp = LuFingerprint(tuple(_spectrum_from_chi(v, n) for v in c))
        entries.append(AtlasEntry(g, c, fp))
    return entries


def atlas_csv(entries: list[AtlasEntry]) -> str:
    if not entries:
        return ""
    n = entries[0].hypergraph.n
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["edge_mask_list_hex"]
        + [f"lambda1_q{l}" for l in range(1, n + 1)]
        + [f"chi_q{l}" for l in range(1, n + 1)]
        + ["fingerprint_hash"]
    )
    for e in entries:
        w.writerow(
            [";".join(f"{m:x}" for m in e.edge_masks)]
            + [repr(s.lambda1) for s in e.fingerprint.per_qubit]
            + list(e.chi_per_qubit)
            + [e.fingerprint.digest()]
        )
    return buf.getvalue()


def classify(entries: list[AtlasEntry]) -> dict[str, int]:
    """Entry counts grouped by fingerprint digest."""
    out: dict[str, int] = {}
    for e in entries:
        key = e.fingerprint.digest()
        out[key] = out.get(key, 0) + 1
    return out


# ---------------------------------------------------------------------------
# separation reports
# ---------------------------------------------------------------------------

def prop2_value(n: int) -> float:
    """Closed form of ``|chi|^2`` for the prop2 state."""
    return (2 ** (n - 1) - 1) ** 2 + 2 - 1 / 2 ** (n - 1)


def prop2_separation_report(n: int, entries: list[AtlasEntry] | None = None, tol: float = 1e-9) -> dict:
    if not 2 <= n <= MAX_ATLAS_QUBITS:
        raise HyperstateError(f"prop2 report needs 2 <= n <= {MAX_ATLAS_QUBITS}")
    s = prop2_state(n)
    det = det_invariant(reduced_single(s, 1))
    scaled = 4.0 ** n * (0.25 - det)
    expected = prop2_value(n)
    if entries is None:
        entries = build_atlas(n)
    matches = 0
    for e in entries:
        for l in range(1, n + 1):
            if abs(e.det(l) - det) <= tol / 4.0 ** n:
                matches += 1
                break
    return {
        "n": n,
        "alpha": s.meta["alpha"],
        "alpha_branch": s.meta["branch"],
        "det_qubit1": det,
        "scaled_chi_sq": scaled,
        "expected_scaled_chi_sq": expected,
        "formula_error": abs(scaled - expected),
        "formula_ok": abs(scaled - expected) <= tol,
        "distance_to_integer": abs(scaled - round(scaled)),
        "non_integer": abs(scaled - round(scaled)) > tol,
        "atlas_size": len(entries),
        "atlas_matches": matches,
        "separated": matches == 0,
        "tolerance": tol,
    }


def prop4_separation_report(n: int, entries: list[AtlasEntry] | None = None, certify: bool = True) -> dict:
    """Two routes per hypergraph: the LME route (every hypergraph state is
    LME, the W state is not, and LME is preserved by local unitaries) and the
    fingerprint route (single-qubit spectra)."""
    if not 3 <= n <= MAX_ATLAS_QUBITS:
        raise HyperstateError(f"prop4 report needs 3 <= n <= {MAX_ATLAS_QUBITS}")
    if entries is None:
        entries = build_atlas(n)
    w = w_state(n)
    w_verdict = lme_decide(w)
    w_fp = lu_fingerprint(w)
    w_det1 = det_invariant(reduced_single(w, 1))

    lme_ok = 0
    worst_residual = 0.0
    fp_unseparated = 0
    det1_equal = []
    for e in entries:
        if certify:
            v = certify_phase_state(hypergraph_state(e.hypergraph))
            if v.verdict == "LME":
                lme_ok += 1
                worst_residual = max(worst_residual, v.report.residual)
        else:
            lme_ok += 1
        if e.fingerprint.matches(w_fp, FINGERPRINT_TOL):
            fp_unseparated += 1
        if abs(e.det(1) - w_det1) <= 1e-12:
            det1_equal.append(e)

    lme_route = w_verdict.verdict == "NotLME" and lme_ok == len(entries)
    examples = [
        {"edges": [list(vs) for vs in e.hypergraph.vertex_sets()], "chi": list(e.chi_per_qubit),
         "fingerprint_differs": not e.fingerprint.matches(w_fp)}
        for e in det1_equal[:5]
    ]
    return {
        "n": n,
        "atlas_size": len(entries),
        "w_verdict": w_verdict.verdict,
        "w_witness": w_verdict.witness.to_json() if w_verdict.witness else None,
        "lme_certified": lme_ok,
        "worst_gram_residual": worst_residual,
        "lme_route_separates_all": lme_route,
        "lme_route_basis": "LME is invariant under local unitaries",
        "fingerprint_unseparated": fp_unseparated,
        "w_det_qubit1": w_det1,
        "det1_equal_to_w": len(det1_equal),
        "det1_equal_examples": examples,
        "w_fingerprint": [[s.lambda1, s.lambda2] for s in w_fp.per_qubit],
    }


def w_fingerprint_hits(entries: list[AtlasEntry]) -> int:
    if not entries:
        return 0
    w_fp = lu_fingerprint(w_state(entries[0].hypergraph.n))
    return sum(e.fingerprint.matches(w_fp) for e in entries)
