"""Hypergraph states, weighted hypergraph states and local maximal
entangleability checks on small statevectors."""

from hyperstate._kernels import BACKEND
from hyperstate.errors import CapacityError, HyperstateError, ParseError
from hyperstate.hypercore import (
    BooleanFunction,
    Hypergraph,
    PhaseFunction,
    WeightedHypergraph,
    boolean_from_hypergraph,
    canonicalize_weights,
    hypergraph_from_boolean,
    mobius_transform,
    zeta_transform,
)
from hyperstate.qstate import (
    StateVector,
    hypergraph_state,
    phase_state,
    plus_state,
    prop2_state,
    w_state,
    weighted_hypergraph_state,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BooleanFunction",
    "CapacityError",
    "Hypergraph",
    "HyperstateError",
    "ParseError",
    "PhaseFunction",
    "StateVector",
    "WeightedHypergraph",
    "boolean_from_hypergraph",
    "canonicalize_weights",
    "hypergraph_from_boolean",
    "hypergraph_state",
    "mobius_transform",
    "phase_state",
    "plus_state",
    "prop2_state",
    "w_state",
    "weighted_hypergraph_state",
    "zeta_transform",
]
