"""Glued graphs, induced maps and their actions on homology."""
from fractions import Fraction as Fr
import math

from hypothesis import given, settings, strategies as st
import pytest

from knead.errors import InconsistentGluing, InputError, UnknownBoundaryPoint
from knead.graph import (Gluing, build_graph, charpoly, functoriality_check,
                         homological_entropy, spectral_radius, validate_induced)
from knead.pm_domain import validate

PHI = (1 + math.sqrt(5)) / 2


def test_circle_has_rank_one_and_no_vertices():
    g = build_graph([(0, 1)], [[0, 1]])
    assert g.h1_rank == 1
    assert g.vertices == []
    assert g.valence == [2]
    assert g.n_components == 1


def test_wedge_of_two_circles():
    g = build_graph([(0, 1), (2, 3)], [[0, 1, 2, 3]])
    assert g.h1_rank == 2
    assert g.valence == [4]
    assert len(g.vertices) == 1


def test_interval_has_two_endpoint_vertices():
    g = build_graph([(0, 1)])
    assert g.h1_rank == 0
    assert g.valence == [1, 1]
    assert len(g.vertices) == 2
    assert g.cycle_basis == []


def test_two_intervals_two_components():
    g = build_graph([(0, 1), (2, 3)])
    assert g.n_components == 2
    assert g.edge_component == [0, 1]


def test_unknown_boundary_point_rejected():
    with pytest.raises(UnknownBoundaryPoint):
        build_graph([(0, 1)], [[0, Fr(1, 2)]])


def test_point_in_two_classes_rejected():
    with pytest.raises(InputError):
        build_graph([(0, 1), (2, 3)], [[0, 1], [1, 2]])


def test_discontinuous_induced_map_rejected():
    # on the interval, F(1/2-) = 1 and F(1/2+) = 0 are different points
    F = validate([(0, 1)], [0, Fr(1, 2), 1], [(2, 0), (1, -Fr(1, 2))])
    with pytest.raises(InconsistentGluing):
        validate_induced(F)


def test_gluing_must_respect_one_sided_images():
    # x -> x/2 on a circle: germs at the glued point map to 0 and 1/2
    F = validate([(0, 1)], [0, 1], [(Fr(1, 2), 0)])
    with pytest.raises(InconsistentGluing):
        validate_induced(F, Gluing(((0, 1),)))


@pytest.mark.parametrize("name, h1", [
    ("circle_doubling", [[2]]),
    ("circle_flip", [[-1]]),
    ("wedge_golden", [[1, 1], [1, 0]]),
    ("tent", []),
    ("interval_swap", []),
])
def test_h1_matrices(induced, name, h1):
    assert induced[name].h1_matrix() == h1


@pytest.mark.parametrize("name, h0", [
    ("interval_swap", [[0, 1], [1, 0]]),
    ("tent", [[1]]),
    ("wedge_golden", [[1]]),
])
def test_h0_matrices(induced, name, h0):
    assert induced[name].h0_matrix() == h0


def test_h0_of_swap_has_traces_zero_and_two(induced):
    A = induced["interval_swap"].h0_matrix()
    A2 = [[sum(A[i][k] * A[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert A[0][0] + A[1][1] == 0
    assert A2[0][0] + A2[1][1] == 2


def test_spectral_radius_of_fibonacci_matrix():
    r = spectral_radius([[0, 1], [1, 1]])
    assert abs(r.value - PHI) < 1e-9
    assert r.residual < 1e-9
    assert charpoly([[0, 1], [1, 1]]) == [1, -1, -1]


def test_spectral_radius_of_empty_matrix_is_zero():
    assert spectral_radius([]).value == 0.0


def test_homological_entropy_examples(induced):
    assert homological_entropy(induced["circle_doubling"]) == pytest.approx(math.log(2), abs=1e-12)
    assert homological_entropy(induced["wedge_golden"]) == pytest.approx(math.log(PHI), abs=1e-12)
    assert homological_entropy(induced["circle_flip"]) == 0.0
    assert homological_entropy(induced["tent"]) == 0.0


def test_cycle_basis_satisfies_flow_condition(induced):
    for f in induced.values():
        g = f.graph
        for lam in g.cycle_basis:
            for row in g.incidence:
                assert sum(r * l for r, l in zip(row, lam)) == 0


def test_rank_is_edges_minus_points_plus_components(induced):
    for f in induced.values():
        g = f.graph
        assert g.h1_rank == len(g.edges) - len(g.classes) + g.n_components
        assert len(g.cycle_basis) == g.h1_rank


@pytest.mark.parametrize("name", ["circle_doubling", "circle_flip", "wedge_golden"])
def test_functoriality_of_h1(induced, name):
    assert functoriality_check(induced[name], 4) == []


def test_critical_points_are_canonical(induced):
    f = induced["circle_doubling"]
    # 0 and 1 are the same point of the circle
    assert f.critical_points == [Fr(0), Fr(1, 2)]
    assert f.image(Fr(1, 2)) == 0
    assert f.orbit(Fr(1, 2), 2) == [Fr(1, 2), 0, 0]


def test_negative_fixed_point_of_the_flip(induced):
    f = induced["circle_flip"]
    # x -> 1 - x on the circle fixes 1/2 and the glued point 0 ~ 1
    assert f.is_negative_fixed(Fr(1, 2), 1)
    assert f.is_negative_fixed(Fr(0), 1)
    assert not f.is_negative_fixed(Fr(0), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 6))
def test_degree_d_circle_maps(d, j):
    """x -> d x + s (mod 1) acts on H_1 as multiplication by d."""
    s = Fr(j, 7)
    cuts = [(k - s) / d for k in range(1, d + 1)]
    crit = sorted({Fr(0), Fr(1), *cuts})
    branches = [(d, s - i) for i in range(len(crit) - 1)]
    F = validate([(0, 1)], crit, branches)
    f = validate_induced(F, Gluing(((0, 1),)))
    assert f.h1_matrix() == [[d]]
