"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines (they are
printed with capture disabled either way).
"""

import itertools
import math
import time

import numpy as np
import pytest

from conftest import random_hypergraph, random_phase_function, random_weighted
from hyperstate.atlas import build_atlas, prop2_separation_report, prop4_separation_report, prop2_value
from hyperstate.hypercore import (
    BooleanFunction,
    Hypergraph,
    PhaseFunction,
    WeightedHypergraph,
    boolean_from_hypergraph,
    hypergraph_from_boolean,
    mobius_transform,
    zeta_transform,
)
from hyperstate.lme import (
    ControlledGateSpec,
    ancilla_reduction_entropy,
    angle_search,
    certify_phase_state,
    gram_matrix,
    lme_decide,
    pair_overlap_w,
    restricted_unitary,
    w_infeasibility_witness,
)
from hyperstate.qstate import (
    apply_local_layer,
    haar_unitary,
    hypergraph_state,
    phase_state,
    prop2_state,
    w_state,
)
from hyperstate.reduct import chi, det_invariant, lu_fingerprint, reduced_single
from oracles import anf_eval, op_on, subset_sum

# Frozen beforehand by a dense Kronecker-product oracle over a 720 x 720 grid
# of angle differences: true minimum 1/3, Lipschitz-safe lower bound 0.32752.
W3_R0 = 0.3275


@pytest.fixture
def report(capsys):
    def emit(criterion: str, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_hypergraph_states_are_lme(report, rng):
    t0 = time.perf_counter()
    graphs = [Hypergraph(3, frozenset(k + 1 for k in range(7) if c >> k & 1)) for c in range(128)]
    for n in (4, 5, 6):
        graphs += [random_hypergraph(rng, n, p=rng.uniform(0.1, 0.9)) for _ in range(200)]
    worst, failures = 0.0, 0
    for g in graphs:
        v = certify_phase_state(hypergraph_state(g))
        if v.verdict != "LME" or not v.report.residual < 1e-10:
            failures += 1
        else:
            worst = max(worst, v.report.residual)
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 60
    report("1", ok, f"{len(graphs)} states, failures={failures}, worst residual={worst:.2e}, {dt:.1f}s (< 60s)")


def test_criterion_2_closed_forms(report, rng):
    worst_off = worst_det = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 7))
        f = random_phase_function(rng, n)
        s = phase_state(f)
        for l in range(1, n + 1):
            rho = reduced_single(s, l)
            c = chi(f, l)
            worst_off = max(worst_off, abs(rho[0, 1] - c / 2 ** n))
            worst_det = max(worst_det, abs(det_invariant(rho) - (0.25 - abs(c) ** 2 / 4 ** n)))
    ok = worst_off <= 1e-12 and worst_det <= 1e-12
    report("2", ok, f"max off-diagonal error={worst_off:.1e}, max det error={worst_det:.1e} (tol 1e-12)")


def test_criterion_3_prop2_arithmetic(report):
    t0 = time.perf_counter()
    lines, ok = [], True
    for n in (2, 3, 4):
        s = prop2_state(n)
        scaled = 4.0 ** n * (0.25 - det_invariant(reduced_single(s, 1)))
        formula = abs(scaled - prop2_value(n)) <= 1e-9
        r = prop2_separation_report(n)
        ok &= formula and r["formula_ok"] and r["separated"] and r["atlas_matches"] == 0
        ok &= r["atlas_size"] == 2 ** (2 ** n - 1)
        lines.append(f"n={n}: {scaled:.12g} vs {prop2_value(n)}, matches={r['atlas_matches']}/{r['atlas_size']}")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    report("3", ok, "; ".join(lines) + f"; {dt:.1f}s (< 300s)")


def test_criterion_4_w_state_not_lme(report):
    # (a) closed-form pair overlap against dense operators
    grid = np.arange(32) * 2 * math.pi / 32
    worst = 0.0
    for n in (3, 4, 5):
        w = w_state(n).amps
        ops = {}
        for l in range(1, n + 1):
            ops[l] = [op_on(n, l, restricted_unitary(a)) for a in grid]
        for j, k in itertools.combinations(range(1, n + 1), 2):
            for (ia, a), (ib, b) in itertools.product(enumerate(grid), repeat=2):
                dense = np.vdot(w, ops[j][ia] @ (ops[k][ib] @ w))
                worst = max(worst, abs(dense - pair_overlap_w(n, a, b)))
    ok_a = worst <= 1e-12

    # (b) witness triple
    ok_b = True
    for n in (3, 4, 5, 6):
        wit = w_infeasibility_witness(n)
        ok_b &= wit.triple == (1, 2, 3) and wit.forced_overlap == 2 / n and wit.check()

    # (c) search floor
    sr = angle_search(w_state(3), grid_resolution=64, refinements=2)
    ok_c = sr.best_residual >= W3_R0
    ok = ok_a and ok_b and ok_c
    report("4", ok, f"(a) max overlap error={worst:.1e}; (b) witness ok={ok_b}; "
                    f"(c) best residual={sr.best_residual:.6f} >= R0={W3_R0} ({sr.mode})")


def test_criterion_5_prop4(report):
    t0 = time.perf_counter()
    r3 = prop4_separation_report(3)
    r4 = prop4_separation_report(4)
    dt = time.perf_counter() - t0
    entries4 = build_atlas(4)
    det_hits = [e for e in entries4 if abs(e.det(1) - 3 / 16) <= 1e-12]
    # independent recomputation from the statevector for one such entry
    recheck = det_invariant(reduced_single(hypergraph_state(det_hits[0].hypergraph), 1)) if det_hits else None
    ok = (
        r3["lme_route_separates_all"] and r4["lme_route_separates_all"]
        and r3["w_verdict"] == r4["w_verdict"] == "NotLME"
        and r4["det1_equal_to_w"] >= 1 and abs(r4["w_det_qubit1"] - 3 / 16) <= 1e-12
        and recheck is not None and abs(recheck - 3 / 16) <= 1e-12
        and dt < 600
    )
    report("5", ok, f"n=3 certified {r3['lme_certified']}/{r3['atlas_size']}, "
                    f"n=4 certified {r4['lme_certified']}/{r4['atlas_size']}; "
                    f"n=4 entries with det1=3/16: {r4['det1_equal_to_w']}; {dt:.1f}s (< 600s)")


def test_criterion_6_transform_roundtrips(report, rng):
    t0 = time.perf_counter()
    bad = 0
    worst_real = 0.0
    cases = 0
    # exhaustive n <= 3: every 0/1 weighting (with the empty edge) and every truth table
    for n in (1, 2, 3):
        size = 1 << n
        for code in range(1 << size):
            masks = [e for e in range(size) if code >> e & 1]
            w = WeightedHypergraph(n, {e: 1.0 for e in masks})
            f = zeta_transform(w)
            bad += not np.array_equal(f.values, subset_sum(n, {e: 1 for e in masks}))
            bad += mobius_transform(f).weight_array().tolist() != w.weight_array().tolist()
            table = np.array([code >> x & 1 for x in range(size)], dtype=np.uint8)
            b = BooleanFunction(n, table)
            g = hypergraph_from_boolean(b)
            bad += not np.array_equal(boolean_from_hypergraph(g).table, table)
            bad += not np.array_equal(anf_eval(n, g.vertex_sets()), table)
            cases += 1
    # randomized n <= 10
    for _ in range(1000):
        n = int(rng.integers(1, 11))
        size = 1 << n
        kind = rng.integers(3)
        if kind == 0:
            ints = rng.integers(-5, 6, size=size)
            w = WeightedHypergraph(n, {e: float(v) for e, v in enumerate(ints) if v})
            f = zeta_transform(w)
            bad += f.values.dtype.kind != "i"
            bad += mobius_transform(f).weight_array().tolist() != w.weight_array().tolist()
            vals = rng.integers(-5, 6, size=size)
            bad += not np.array_equal(zeta_transform(mobius_transform(PhaseFunction(n, vals))).values, vals)
        elif kind == 1:
            w = random_weighted(rng, n)
            back = mobius_transform(zeta_transform(w)).weight_array()
            worst_real = max(worst_real, float(np.abs(back - w.weight_array()).max()))
            f = random_phase_function(rng, n)
            again = zeta_transform(mobius_transform(f)).values
            worst_real = max(worst_real, float(np.abs(again - f.values).max()))
        else:
            table = rng.integers(0, 2, size=size).astype(np.uint8)
            g = hypergraph_from_boolean(BooleanFunction(n, table))
            bad += not np.array_equal(boolean_from_hypergraph(g).table, table)
        cases += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and worst_real <= 1e-12 and dt < 30
    report("6", ok, f"{cases} cases, exact mismatches={bad}, max real error={worst_real:.1e} (tol 1e-12), "
                    f"{dt:.1f}s (< 30s)")


def _lu_states(rng):
    yield "CZ", hypergraph_state(Hypergraph.from_vertex_sets(2, [(1, 2)]))
    yield "path3", hypergraph_state(Hypergraph.from_vertex_sets(3, [(1, 2), (2, 3)]))
    yield "CCZ+Z", hypergraph_state(Hypergraph.from_vertex_sets(3, [(1, 2, 3), (1,)]))
    yield "{123}@4", hypergraph_state(Hypergraph.from_vertex_sets(4, [(1, 2, 3)]))
    yield "random4", hypergraph_state(random_hypergraph(rng, 4, p=0.5))
    yield "prop2(3)", prop2_state(3)
    yield "W3", w_state(3)
    yield "W4", w_state(4)


def test_criterion_7_lu_invariance(report, rng):
    flips = fp_breaks = 0
    weakened = 0
    tested = 0
    for name, s in _lu_states(rng):
        base_fp = lu_fingerprint(s)
        base = lme_decide(s, resolution=8, refinements=1).verdict
        for _ in range(50):
            d = apply_local_layer(s, [haar_unitary(rng) for _ in range(s.n)])
            fp_breaks += not lu_fingerprint(d).matches(base_fp, 1e-9)
            v = lme_decide(d, resolution=8, refinements=1).verdict
            flips += {v, base} == {"LME", "NotLME"}
            weakened += v != base
            tested += 1
    ok = flips == 0 and fp_breaks == 0
    report("7", ok, f"{tested} dressings, fingerprint breaks={fp_breaks}, LME<->NotLME flips={flips}, "
                    f"weakened to Inconclusive={weakened}")


def test_criterion_8_ancilla_cross_check(report, rng):
    disagreements = 0
    cases = 0
    lme_cases = 0

    def agree(s, spec):
        nonlocal disagreements, cases, lme_cases
        res = gram_matrix(s, spec).residual
        ent = ancilla_reduction_entropy(s, spec)
        gram_yes = res < 1e-10
        ent_yes = abs(ent - s.n) <= 1e-8
        disagreements += gram_yes != ent_yes
        lme_cases += gram_yes
        cases += 1

    for _ in range(20):
        n = int(rng.integers(1, 6))
        s = phase_state(random_phase_function(rng, n))
        agree(s, certify_phase_state(s).spec)
        agree(s, ControlledGateSpec(tuple(haar_unitary(rng) for _ in range(n))))
    w3 = w_state(3)
    for _ in range(10):
        agree(w3, ControlledGateSpec.restricted(rng.uniform(0, 2 * math.pi, size=3)))
    ok = disagreements == 0 and lme_cases == 20
    report("8", ok, f"{cases} (state, spec) pairs, disagreements={disagreements}, maximally mixed={lme_cases}")
