"""Hypergraphs, weighted hypergraphs and their function encodings.

Vertices are 1-based.  A hyperedge is stored as a bitmask in which vertex
``l`` of an ``n``-vertex hypergraph owns bit ``1 << (n - l)``; the same
convention indexes truth tables and state amplitudes, so the binary
expansion of an index ``x`` reads ``x_1 x_2 ... x_n`` left to right.

Weights are real numbers in units of pi.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from hyperstate import _kernels
from hyperstate.errors import HypergraphError, ParseError


def vertices_to_mask(n: int, vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        if not 1 <= v <= n:
            raise HypergraphError(f"vertex {v} outside 1..{n}")
        bit = 1 << (n - v)
        if mask & bit:
            raise HypergraphError(f"vertex {v} repeated in hyperedge")
        mask |= bit
    return mask


def mask_to_vertices(n: int, mask: int) -> tuple[int, ...]:
    return tuple(l for l in range(1, n + 1) if mask & (1 << (n - l)))


def _check_mask(n: int, mask: int) -> int:
    mask = int(mask)
    if not 0 <= mask < (1 << n):
        raise HypergraphError(f"edge mask {mask} invalid for n={n}")
    return mask


@dataclass(frozen=True)
class Hypergraph:
    """``n`` vertices and a set of hyperedge masks."""

    n: int
    edges: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise HypergraphError("a hypergraph needs at least one vertex")
        edges = frozenset(_check_mask(self.n, e) for e in self.edges)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_vertex_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Hypergraph":
        masks = [vertices_to_mask(n, s) for s in sets]
        if len(set(masks)) != len(masks):
            raise HypergraphError("duplicate hyperedge")
        return cls(n, frozenset(masks))

    @property
    def has_empty_edge(self) -> bool:
        """The empty hyperedge only contributes a global factor of -1."""
        return 0 in self.edges

    def sorted_edges(self) -> list[int]:
        return sorted(self.edges)

    def vertex_sets(self) -> list[tuple[int, ...]]:
        return [mask_to_vertices(self.n, e) for e in self.sorted_edges()]

    def to_weighted(self) -> "WeightedHypergraph":
        return WeightedHypergraph(self.n, {e: 1.0 for e in self.edges})


@dataclass(frozen=True)
class WeightedHypergraph:
    """``n`` vertices and a weight (in pi units) per hyperedge mask.

    Missing masks have weight zero.  Equality compares canonical forms.
    """

    n: int
    weights: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise HypergraphError("a hypergraph needs at least one vertex")
        weights = {_check_mask(self.n, e): float(w) for e, w in dict(self.weights).items()}
        object.__setattr__(self, "weights", weights)

    def __eq__(self, other):
        if not isinstance(other, WeightedHypergraph):
            return NotImplemented
        a = canonicalize_weights(self)
        b = canonicalize_weights(other)
        return a.n == b.n and a.weights == b.weights

    def __hash__(self):
        c = canonicalize_weights(self)
        return hash((c.n, tuple(sorted(c.weights.items()))))

    def weight_array(self) -> np.ndarray:
        out = np.zeros(1 << self.n, dtype=np.float64)
        for e, w in self.weights.items():
            out[e] += w
        return out

    def is_integral(self) -> bool:
        return all(float(w).is_integer() for w in self.weights.values())


@dataclass(frozen=True)
class BooleanFunction:
    n: int
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.uint8).copy()
        if table.ndim != 1 or table.shape[0] != 1 << self.n:
            raise HypergraphError(f"truth table must have length 2^{self.n}")
        if np.any(table > 1):
            raise HypergraphError("truth table entries must be 0 or 1")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))


@dataclass(frozen=True)
class PhaseFunction:
    """Real phases ``f(x)`` in pi units over all ``2^n`` inputs."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.dtype.kind not in "iu":
            values = values.astype(np.float64)
        values = values.copy()
        if values.ndim != 1 or values.shape[0] != 1 << self.n:
            raise HypergraphError(f"phase function must have length 2^{self.n}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __eq__(self, other):
        if not isinstance(other, PhaseFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, np.asarray(self.values, dtype=np.float64).tobytes()))

    def is_integral(self) -> bool:
        return self.values.dtype.kind in "iu" or bool(np.all(np.floor(self.values) == self.values))

    def canonical(self) -> "PhaseFunction":
        return PhaseFunction(self.n, np.mod(self.values, 2))


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def boolean_from_hypergraph(g: Hypergraph) -> BooleanFunction:
    """Truth table of the XOR of the edge monomials of ``g``."""
    coeffs = np.zeros(1 << g.n, dtype=np.uint8)
    for e in g.edges:
        coeffs[e] = 1
    _kernels.mobius_xor_inplace(coeffs, g.n)
    return BooleanFunction(g.n, coeffs)


def hypergraph_from_boolean(b: BooleanFunction) -> Hypergraph:
    """Edge set of the algebraic normal form of ``b``."""
    a = np.array(b.table, dtype=np.uint8)
    _kernels.mobius_xor_inplace(a, b.n)
    return Hypergraph(b.n, frozenset(int(e) for e in np.flatnonzero(a)))


def zeta_transform(w: WeightedHypergraph) -> PhaseFunction:
    """``values[x] = sum of weights[e] over edges e contained in x``.

    Integer weights stay on an int64 path, so the hypergraph case is exact.
    """
    if w.is_integral():
        a = np.zeros(1 << w.n, dtype=np.int64)
        for e, v in w.weights.items():
            a[e] += int(v)
    else:
        a = w.weight_array()
    _kernels.zeta_inplace(a, w.n)
    return PhaseFunction(w.n, a)


def mobius_transform(f: PhaseFunction) -> WeightedHypergraph:
    """Inverse of :func:`zeta_transform`; zero weights are dropped."""
    if f.is_integral():
        a = np.array(f.values, dtype=np.int64)
    else:
        a = np.array(f.values, dtype=np.float64)
    _kernels.mobius_inplace(a, f.n)
    nz = np.flatnonzero(a)
    return WeightedHypergraph(f.n, {int(e): float(a[e]) for e in nz})


def canonicalize_weights(w: WeightedHypergraph) -> WeightedHypergraph:
    """Reduce every weight into ``[0, 2)`` and drop the zeros."""
    out = {}
    for e, v in w.weights.items():
        r = math.fmod(v, 2.0)
        if r < 0:
            r += 2.0
        if r >= 2.0:  # fmod of tiny negatives can round up to 2
            r = 0.0
        if r != 0.0:
            out[e] = r
    # bypass __eq__ recursion: build directly
    c = object.__new__(WeightedHypergraph)
    object.__setattr__(c, "n", w.n)
    object.__setattr__(c, "weights", out)
    return c


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

_NUM = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def parse_hypergraph_text(text: str) -> Hypergraph | WeightedHypergraph:
    """Parse the ``n`` / ``edge`` line format.

    Returns a :class:`WeightedHypergraph` if any edge line carries a
    ``: weight`` suffix, otherwise a :class:`Hypergraph`.
    """
    n = None
    entries: list[tuple[int, int, float | None]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "n":
            if n is not None:
                raise ParseError(lineno, "duplicate 'n' line")
            try:
                n = int(rest)
            except ValueError:
                raise ParseError(lineno, f"bad vertex count {rest.strip()!r}") from None
            if n < 1:
                raise ParseError(lineno, "vertex count must be positive")
            continue
        if head != "edge" and not head.startswith("edge:"):
            raise ParseError(lineno, f"unrecognised line {raw.strip()!r}")
        if n is None:
            raise ParseError(lineno, "'edge' before 'n'")
        body = line[len("edge"):]
        vert_part, colon, weight_part = body.partition(":")
        verts = []
        for tok in vert_part.split():
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(lineno, f"bad vertex {tok!r}") from None
            verts.append(v)
        try:
            mask = vertices_to_mask(n, verts)
        except HypergraphError as exc:
            raise ParseError(lineno, str(exc)) from None
        weight = None
        if colon:
            weight_part = weight_part.strip()
            if not _NUM.fullmatch(weight_part):
                raise ParseError(lineno, f"bad weight {weight_part!r}")
            weight = float(weight_part)
        entries.append((lineno, mask, weight))
    if n is None:
        raise ParseError(0, "missing 'n' line")

    seen = set()
    for lineno, mask, _ in entries:
        if mask in seen:
            raise ParseError(lineno, "duplicate hyperedge")
        seen.add(mask)

    if any(w is not None for _, _, w in entries):
        return WeightedHypergraph(n, {m: (1.0 if w is None else w) for _, m, w in entries})
    return Hypergraph(n, frozenset(m for _, m, _ in entries))


def format_hypergraph(g: Hypergraph | WeightedHypergraph) -> str:
    """Canonical serialization: edges sorted by mask, weights canonicalized."""
    lines = [f"n {g.n}"]
    if isinstance(g, Hypergraph):
        for e in g.sorted_edges():
            lines.append(" ".join(["edge", *map(str, mask_to_vertices(g.n, e))]))
    else:
        c = canonicalize_weights(g)
        for e in sorted(c.weights):
            verts = " ".join(["edge", *map(str, mask_to_vertices(g.n, e))])
            lines.append(f"{verts} : {c.weights[e]!r}")
    return "\n".join(lines) + "\n"
