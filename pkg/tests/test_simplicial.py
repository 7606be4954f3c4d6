from itertools import combinations

import pytest

from exceptions import InputError, UniverseMismatchError
from oracles import letters, random_complex
from simplicial import (
    ComponentUniverse,
    LabelledComplex,
    Simplex,
    clique_complete,
    intersection,
    is_subcomplex,
    neighbors,
    skeleton,
    symmetric_difference,
    validate,
)


def test_simplex_requires_sorted_positive_vertices():
    assert Simplex.of([3, 1, 2]).vertices == (1, 2, 3)
    with pytest.raises(InputError):
        Simplex((2, 1))
    with pytest.raises(InputError):
        Simplex(())
    with pytest.raises(InputError):
        Simplex((0,))


def test_universe_rejects_duplicates_and_unknown_labels():
    with pytest.raises(InputError):
        ComponentUniverse(("a", "a"))
    universe = ComponentUniverse(("a", "b"))
    assert universe.ord("b") == 2
    with pytest.raises(InputError):
        universe.ord("z")


def test_validate_closed_edge(abc_universe):
    edge = LabelledComplex.from_labels(abc_universe, [["a"], ["b"], ["a", "b"]])
    assert validate(edge).ok


def test_validate_reports_missing_faces(abc_universe):
    bare = LabelledComplex(abc_universe, frozenset({Simplex((1, 2))}), 1)
    report = validate(bare)
    assert not report.ok
    assert report.missing_faces() == {Simplex((1,)), Simplex((2,))}
    assert len(report.describe()) == 2


def test_validate_full_triangle(full_triangle):
    assert validate(full_triangle).ok


def test_validate_dimension_bound(full_triangle):
    capped = LabelledComplex(full_triangle.universe, full_triangle.simplices, 1)
    kinds = {v.kind for v in validate(capped).violations}
    assert kinds == {"dimension_exceeds_max"}


def test_clique_complete_truncates(abc_universe, hollow_triangle):
    built = clique_complete(abc_universe, [1, 2, 3], [(1, 2), (1, 3), (2, 3)], 1)
    assert built.simplices == hollow_triangle.simplices


def test_clique_complete_rejects_unknown_vertex(abc_universe):
    with pytest.raises(InputError):
        clique_complete(abc_universe, [1, 2], [(1, 3)], 2)
    with pytest.raises(InputError):
        clique_complete(abc_universe, [1, 2], [(1, 2)], 0)


def test_lotka_volterra_three_simplices(lotka_volterra):
    universe = lotka_volterra.universe
    tetrahedra = {
        frozenset(lotka_volterra.labels_of(s)) for s in lotka_volterra.simplices if s.dim == 3
    }
    assert tetrahedra == {
        frozenset({"Prey", "Prey growth", "Predation", "Oscillatory population"}),
        frozenset({"Predator", "Predator growth", "Predation", "Oscillatory population"}),
        frozenset({"Predator", "Predator growth", "Predator death", "Oscillatory population"}),
    }
    assert lotka_volterra.counts_by_dim(4)[4] == 0
    assert len(universe) == 7


def test_lotka_volterra_triangles_match_graph(lotka_volterra):
    edges = {s.vertices for s in lotka_volterra.simplices if s.dim == 1}
    triangles = [
        t for t in combinations(sorted(lotka_volterra.vertices), 3)
        if all(pair in edges for pair in combinations(t, 2))
    ]
    assert lotka_volterra.counts_by_dim()[2] == len(triangles) == 11


def test_clique_complete_is_idempotent(lotka_volterra, tp1):
    for complex_ in (lotka_volterra, tp1):
        edges = [s.vertices for s in complex_.simplices if s.dim == 1]
        again = clique_complete(complex_.universe, complex_.vertices, edges, complex_.max_dim)
        assert again == complex_


def test_skeleton(full_triangle, hollow_triangle, tp1):
    assert skeleton(full_triangle, 1).simplices == hollow_triangle.simplices
    assert skeleton(tp1, tp1.dimension) == tp1
    assert len(skeleton(tp1, 0)) == 13
    with pytest.raises(InputError):
        skeleton(tp1, -1)


def test_symmetric_difference(full_triangle, hollow_triangle):
    assert symmetric_difference(full_triangle, full_triangle) == frozenset()
    assert symmetric_difference(full_triangle, hollow_triangle) == {Simplex((1, 2, 3))}


def test_symmetric_difference_universe_mismatch(full_triangle, lotka_volterra):
    with pytest.raises(UniverseMismatchError):
        symmetric_difference(full_triangle, lotka_volterra)


def test_bisubstrate_named_simplices(ordered_sequential, ping_pong):
    def labelled(complex_):
        return complex_.label_sets()

    for complex_ in (ordered_sequential, ping_pong):
        assert frozenset({"E", "A", "EA"}) in labelled(complex_)
        assert frozenset({"E", "Q", "EQ"}) in labelled(complex_)
    assert frozenset({"EA", "E*P"}) in labelled(ping_pong)
    assert frozenset({"EA", "E*P"}) not in labelled(ordered_sequential)

    difference = symmetric_difference(ordered_sequential, ping_pong)
    universe = ordered_sequential.universe
    assert Simplex.of(universe.indices(["EA", "E*P"])) in difference


def test_neighbors(abc_universe, lotka_volterra):
    isolated = LabelledComplex.from_labels(abc_universe, [["a"]])
    assert neighbors(isolated, 1) == frozenset()

    path = LabelledComplex.from_labels(abc_universe, [["a"], ["b"], ["c"], ["a", "b"], ["b", "c"]])
    assert neighbors(path, 2) == {1, 3}

    universe = lotka_volterra.universe
    around = {universe.label(v) for v in neighbors(lotka_volterra, universe.ord("Predation"))}
    assert around == {"Prey", "Prey growth", "Oscillatory population", "Predator", "Predator growth"}

    with pytest.raises(InputError):
        neighbors(isolated, 3)


def test_is_subcomplex(full_triangle, hollow_triangle):
    assert is_subcomplex(full_triangle, full_triangle)
    assert is_subcomplex(hollow_triangle, full_triangle)
    assert not is_subcomplex(full_triangle, hollow_triangle)


class TestSetProperties:
    def test_symmetric_difference_identities(self, rng):
        universe = letters(6)
        for _ in range(50):
            K = random_complex(rng, universe, 3)
            L = random_complex(rng, universe, 3)
            KL = symmetric_difference(K, L)
            assert KL == symmetric_difference(L, K)
            assert len(KL) == len(K) + len(L) - 2 * len(intersection(K, L))

    def test_mutual_inclusion_is_equality(self, rng):
        universe = letters(5)
        for _ in range(50):
            K = random_complex(rng, universe, 2)
            L = random_complex(rng, universe, 2)
            both = is_subcomplex(K, L) and is_subcomplex(L, K)
            assert both == (K == L)

    def test_random_complexes_are_closed(self, rng):
        universe = letters(7)
        for _ in range(30):
            assert validate(random_complex(rng, universe, 4)).ok
