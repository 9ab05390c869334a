import numpy as np
import pytest

from hyperstate.atlas import (
    atlas_csv,
    build_atlas,
    classify,
    enumerate_hypergraphs,
    prop2_separation_report,
    prop4_separation_report,
    w_fingerprint_hits,
)
from hyperstate.atlas import _truth_tables
from hyperstate.errors import CapacityError
from hyperstate.hypercore import boolean_from_hypergraph, zeta_transform
from hyperstate.lme import certify_phase_state
from hyperstate.qstate import hypergraph_state
from hyperstate.reduct import chi, lu_fingerprint, reduced_single


@pytest.fixture(scope="module")
def atlas3():
    return build_atlas(3)


@pytest.mark.parametrize("n, count", [(1, 2), (2, 8), (3, 128)])
def test_enumeration_counts(n, count):
    gs = list(enumerate_hypergraphs(n))
    assert len(gs) == count
    assert len(set(gs)) == count
    assert all(not g.has_empty_edge for g in gs)


def test_enumeration_n4_count():
    assert sum(1 for _ in enumerate_hypergraphs(4)) == 32768


def test_guard():
    with pytest.raises(CapacityError):
        next(enumerate_hypergraphs(5))


def test_n1_members():
    assert [sorted(g.edges) for g in enumerate_hypergraphs(1)] == [[], [1]]


def test_truth_tables_match_anf():
    tables = _truth_tables(3)
    for row, g in zip(tables, enumerate_hypergraphs(3)):
        np.testing.assert_array_equal(row, boolean_from_hypergraph(g).table)


def test_entry_count_matches(atlas3):
    assert len(atlas3) == 128
    assert [e.hypergraph for e in atlas3] == list(enumerate_hypergraphs(3))


def test_chi_parity(atlas3):
    for e in atlas3:
        assert all(isinstance(c, int) and c % 2 == 0 for c in e.chi_per_qubit)
        assert all(c in (-4, -2, 0, 2, 4) for c in e.chi_per_qubit)


def test_cz_entry():
    entries = build_atlas(2)
    (cz,) = [e for e in entries if e.hypergraph.sorted_edges() == [0b11]]
    assert cz.chi_per_qubit == (0, 0)


def test_vectorized_chi_matches_library(atlas3):
    for e in atlas3:
        f = zeta_transform(e.hypergraph.to_weighted())
        assert tuple(chi(f, l) for l in range(1, 4)) == e.chi_per_qubit


def test_eq12_consistency_n3(atlas3):
    for e in atlas3:
        s = hypergraph_state(e.hypergraph)
        for l in range(1, 4):
            rho = reduced_single(s, l)
            assert abs(rho[0, 1] - e.chi_per_qubit[l - 1] / 8) < 1e-15
        assert lu_fingerprint(s).matches(e.fingerprint, 1e-12)


def test_every_entry_certified(atlas3):
    for e in atlas3:
        v = certify_phase_state(hypergraph_state(e.hypergraph))
        assert v.verdict == "LME" and v.report.residual < 1e-12


def test_deterministic_csv(atlas3):
    a = atlas_csv(atlas3)
    b = atlas_csv(build_atlas(3))
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "edge_mask_list_hex,lambda1_q1,lambda1_q2,lambda1_q3,chi_q1,chi_q2,chi_q3,fingerprint_hash"
    assert len(lines) == 129


def test_classify_counts_sum(atlas3):
    assert sum(classify(atlas3).values()) == 128


@pytest.mark.parametrize("n, value", [(2, 2.5), (3, 10.75), (4, 50.875)])
def test_prop2_report(n, value):
    r = prop2_separation_report(n)
    assert r["expected_scaled_chi_sq"] == value
    assert r["formula_ok"] and r["non_integer"] and r["separated"]
    assert abs(r["scaled_chi_sq"] - value) < 1e-9


def test_prop4_n3(atlas3):
    r = prop4_separation_report(3, atlas3)
    assert r["lme_route_separates_all"] and r["lme_certified"] == 128
    assert r["w_verdict"] == "NotLME"
    assert r["fingerprint_unseparated"] == 0
    assert w_fingerprint_hits(atlas3) == 0
