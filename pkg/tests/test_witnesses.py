"""
Tests for the constants chain, R-representation checks and the
twisted-spectrum witness pipeline
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from geomt.constructions import gen_standard
from geomt.cycles import EdgeFunction, EdgeSelection, ShortCycleSet, nice_cycle_vector, select_B, solve_rho
from geomt.errors import DisconnectedGraphError, InputError, StageError
from geomt.graph import Graph
from geomt.witnesses import (
    check_R_representation,
    cycle_density_check,
    derive_constants,
    eulerian_witness,
    partition_A123,
    spectral_witness,
)
from graphs import circulant, cubic_with_girth


def test_constants_for_cubic_graphs():
    """Test the closed forms h = 1/24, c1 = 1/1728 for d = 3, gamma = 1"""
    bundle = derive_constants(3, 1.0)
    assert bundle.exact["h"] == Fraction(1, 24)
    assert bundle.exact["c1"] == Fraction(1, 1728)
    assert all(bundle.verify().values())
    assert bundle.exact["c2"].numerator == 1
    assert 0 < bundle.epsilon < bundle.h
    assert bundle.t <= 6 * bundle.c2


def test_constants_limit_of_c3():
    """Test c3 between half of and its c2 -> 0 value 5/41472"""
    bundle = derive_constants(3, 1.0)
    assert Fraction(5, 82944) <= bundle.exact["c3"] < Fraction(5, 41472)


def test_constants_small_gamma():
    """Test that d = 2, gamma = 0.5 passes every check"""
    bundle = derive_constants(2, 0.5)
    assert all(bundle.verify().values())
    assert bundle.epsilon > 0
    assert set(bundle.to_dict()["checks"]) == {
        "c3_positive",
        "phase_below_gap",
        "taylor_bound",
        "epsilon_vs_c3",
        "epsilon_vs_c1",
        "epsilon_vs_h",
    }


def test_constants_reject_bad_input():
    """Test degree, gap and phase validation"""
    with pytest.raises(InputError, match="at least 2"):
        derive_constants(1, 1.0)
    with pytest.raises(InputError, match="gamma"):
        derive_constants(3, 7.0)
    with pytest.raises(InputError, match="positive"):
        derive_constants(3, 1.0, t=-1.0)
    with pytest.raises(InputError, match="violates"):
        derive_constants(3, 1.0, t=0.5)


def test_constants_accept_smaller_t():
    """Test that a user t below the derived one keeps every check"""
    derived = derive_constants(3, 1.0)
    bundle = derive_constants(3, 1.0, t=derived.t / 2)
    assert bundle.t == derived.t / 2
    assert bundle.epsilon < derived.epsilon


def _petersen_rho(petersen, R, seed=0):
    rng = np.random.default_rng(seed)
    v = EdgeFunction({e: float(x) for e, x in zip(petersen.edges, rng.standard_normal(petersen.edge_count))})
    return solve_rho(petersen, R, v, select_B(petersen, R))


def test_representation_on_petersen(petersen):
    """Test multiplicativity and exact adjoints over 100 operator pairs at R = 9"""
    report = check_R_representation(petersen, _petersen_rho(petersen, 9), 9, trials=100, seed=2)
    assert report.passed
    assert report.trials == 100
    assert report.adjoint_exact
    assert report.max_residual <= 1e-8
    assert report.propagation == 3
    assert report.rejected == 0


def test_representation_is_seeded(petersen):
    """Test determinism for a fixed seed"""
    rho = _petersen_rho(petersen, 9)
    a = check_R_representation(petersen, rho, 9, trials=5, seed=4)
    b = check_R_representation(petersen, rho, 9, trials=5, seed=4)
    assert a.max_residual == b.max_residual


def test_representation_of_diagonal_operators(petersen):
    """Test R < 3: only diagonal operators, so the check is near exact"""
    report = check_R_representation(petersen, _petersen_rho(petersen, 5), 2, trials=10)
    assert report.propagation == 0
    assert report.max_residual <= 1e-12


def test_representation_needs_connected_graph():
    """Test the connectivity precondition"""
    g = Graph(4, [(0, 1), (2, 3)])
    rho = solve_rho(g, 3, EdgeFunction({e: 1.0 for e in g.edges}), _empty_selection())
    with pytest.raises(DisconnectedGraphError):
        check_R_representation(g, rho, 3)


def _empty_selection():
    return EdgeSelection(R=3, B=[], certificates=[], basis=[], cycles=ShortCycleSet(3, []))


def test_partition_is_exhaustive(k4):
    """Test A1, A2, A3 are disjoint and cover the vertices"""
    selection = select_B(k4, 3)
    v = nice_cycle_vector(k4.remove_edges(selection.B))
    a1, a2, a3 = partition_A123(k4, v, selection)
    assert sorted(a1 + a2 + a3) == [0, 1, 2, 3]
    assert len(a3) <= min(4, 2 * len(selection.B))


def test_partition_without_B(square):
    """Test that a full-support vector with B empty puts everything in A1"""
    selection = select_B(square, 3)
    v = nice_cycle_vector(square)
    assert partition_A123(square, v, selection) == ([0, 1, 2, 3], [], [])


def test_cycle_density_check(k4, petersen):
    """Test dim Z_R >= epsilon |V|"""
    assert cycle_density_check(k4, 3, 0.5).passed
    assert not cycle_density_check(petersen, 4, 0.01).passed
    check = cycle_density_check(gen_standard("cycle", 8), 5, 0.1)
    assert not check.passed
    assert check.margin == pytest.approx(-0.8)


def test_petersen_witness_is_asserted(petersen):
    """Test the full pipeline on the Petersen graph with R = 4"""
    bundle = derive_constants(3, 1.0)
    witness = spectral_witness(petersen, 4, bundle)
    assert witness.B == []
    assert witness.asserted
    assert witness.defect_within_bound
    assert witness.window_hit
    assert witness.low_eigenvalue_found is not None
    assert witness.low_eigenvalue_found <= witness.spectrum_window[1]
    assert [s["stage"] for s in witness.stages] == ["select_B", "expansion", "cycle_vector", "solve_rho", "twist"]
    assert not witness.size_threshold_met
    assert set(witness.conditions) == {"short_cycles_sparse", "expansion_hypothesis", "support_count"}


def test_complete_graph_witness_is_not_asserted(k4):
    """Test that dense short cycles leave the regime unasserted"""
    witness = spectral_witness(k4, 3, derive_constants(3, 1.0))
    assert witness.B_size == 3
    assert not witness.conditions["short_cycles_sparse"]
    assert not witness.asserted
    report = witness.to_dict()
    assert report["dim_Z_R"] == 3
    assert report["asserted"] is False


def test_witness_preconditions(petersen):
    """Test connectivity and degree checks before any stage runs"""
    bundle = derive_constants(3, 1.0)
    with pytest.raises(DisconnectedGraphError):
        spectral_witness(Graph(4, [(0, 1), (2, 3)]), 3, bundle)
    with pytest.raises(InputError, match="exceeds the degree bound"):
        spectral_witness(gen_standard("complete", 5), 3, bundle)


def test_witness_stage_failure_names_the_stage(petersen):
    """Test that a cycle budget overrun surfaces as a select_B stage error"""
    bundle = derive_constants(3, 1.0)
    with pytest.raises(StageError, match="select_B") as info:
        spectral_witness(petersen, 9, bundle, cycle_cap=3)
    assert info.value.exit_code == 3


def test_witness_on_random_cubic_graphs_with_large_girth():
    """Test defect <= bound and a low twisted eigenvalue on 20 girth >= 5 cubic graphs"""
    bundle = derive_constants(3, 1.0)
    asserted = 0
    seed = 0
    while asserted < 20 and seed < 3000:
        g = cubic_with_girth(seed, 26 + 2 * (seed % 18), 5)
        seed += 1
        if g is None:
            continue
        try:
            witness = spectral_witness(g, 4, bundle, seed=seed)
        except DisconnectedGraphError:
            continue
        if not witness.asserted:
            continue
        asserted += 1
        assert witness.defect_within_bound
        assert witness.low_eigenvalue_found <= witness.spectrum_window[1] < bundle.gamma
    assert asserted == 20


EVEN_REGULAR = [
    (5, [1]), (16, [1]), (37, [1]), (64, [1]), (100, [1]),
    (9, [1, 2]), (13, [1, 5]), (20, [1, 4]), (31, [1, 7]), (50, [1, 12]), (77, [1, 20]), (100, [1, 33]),
    (20, [1, 4, 7]), (21, [1, 2, 3]), (35, [1, 6, 10]), (48, [1, 5, 17]),
    (64, [1, 8, 27]), (81, [2, 3, 11]), (99, [1, 30, 45]), (100, [1, 9, 49]),
]


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("n, offsets", EVEN_REGULAR)
def test_eulerian_witness(n, offsets, t):
    """Test the constant vector is an eigenvector with eigenvalue d(1 - cos t)"""
    g = circulant(n, offsets)
    report = eulerian_witness(g, t)
    d = 2 * len(offsets)
    assert report.d == d
    assert report.expected == pytest.approx(d * (1 - math.cos(t)))
    assert report.rayleigh == pytest.approx(report.expected, rel=1e-12)
    assert report.eigen_residual <= 1e-9
    assert report.nearest_eigenvalue == pytest.approx(report.expected, abs=1e-9)


def test_eulerian_witness_needs_regular_graph():
    """Test the regularity precondition"""
    with pytest.raises(InputError, match="regular"):
        eulerian_witness(Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]), 0.1)


def test_eulerian_pipeline_on_even_graph():
    """Test the pipeline with an Eulerian cycle vector on a triangle-free 4-regular graph"""
    g = circulant(41, [1, 9])
    witness = spectral_witness(g, 3, derive_constants(4, 1.0), eulerian=True)
    assert witness.vector == "eulerian"
    assert witness.B == []
    expected = 2 * 4 * math.sin(witness.t / 2) ** 2
    assert witness.rayleigh == pytest.approx(expected, rel=1e-9)
