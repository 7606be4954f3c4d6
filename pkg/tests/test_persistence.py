import pytest

from exceptions import FiltrationError
from filtration import InducedFiltration, ShortlexOrder, induce, permuted_order
from oracles import all_complexes, betti_numbers, letters, random_complex
from persistence import PersistenceInterval, betti, compute_persistence, diagram_of
from simplicial import LabelledComplex, Simplex


def _intervals(diagram, dim):
    return [(i.birth, i.death) for i in diagram.in_dim(dim)]


def test_hollow_triangle_diagram(hollow_triangle, abc_universe):
    diagram = diagram_of(hollow_triangle, ShortlexOrder(abc_universe, 2))
    assert _intervals(diagram, 0) == [(1, None), (2, 4), (3, 5)]
    assert _intervals(diagram, 1) == [(6, None)]
    assert diagram.counts() == {0: (2, 1), 1: (0, 1)}


def test_full_triangle_diagram(full_triangle, abc_universe):
    diagram = diagram_of(full_triangle, ShortlexOrder(abc_universe, 2))
    assert _intervals(diagram, 0) == [(1, None), (2, 4), (3, 5)]
    assert _intervals(diagram, 1) == [(6, 7)]
    assert diagram.betti() == [1, 0]


def test_interval_validation():
    assert repr(PersistenceInterval(1, 6)) == "H1 [6, inf)"
    with pytest.raises(ValueError):
        PersistenceInterval(0, 4, 4)
    with pytest.raises(ValueError):
        PersistenceInterval(0, 0)


def test_missing_face_is_rejected(abc_universe):
    edge_only = LabelledComplex(abc_universe, frozenset({Simplex((1, 2))}), 1)
    filtration = InducedFiltration(edge_only, "manual", ((4, Simplex((1, 2))),))
    with pytest.raises(FiltrationError):
        compute_persistence(filtration)


def test_random_sequential_has_four_components(random_sequential):
    diagram = diagram_of(random_sequential, ShortlexOrder(random_sequential.universe, 2))
    assert len([i for i in diagram.in_dim(0) if not i.is_finite]) == 4


class TestBetti:
    def test_single_vertex(self, abc_universe):
        vertex = LabelledComplex.from_labels(abc_universe, [["b"]], max_dim=2)
        assert betti(vertex, ShortlexOrder(abc_universe, 2)) == [1]

    def test_hollow_triangle(self, hollow_triangle, abc_universe):
        assert betti(hollow_triangle, ShortlexOrder(abc_universe, 2)) == [1, 1]

    def test_independent_of_filtration(self, rng):
        universe = letters(6)
        base = ShortlexOrder(universe, 3)
        for seed in range(10):
            K = random_complex(rng, universe, 3)
            assert betti(K, base) == betti(K, permuted_order(base, seed))

    def test_all_complexes_on_four_vertices(self):
        universe = letters(4)
        orders = [ShortlexOrder(universe, 3), permuted_order(ShortlexOrder(universe, 3), 2)]
        complexes = all_complexes(4)
        assert len(complexes) == 166
        for cells in complexes:
            K = LabelledComplex(universe, frozenset(Simplex(c) for c in cells), 3)
            for order in orders:
                assert betti(K, order) == betti_numbers(K)

    def test_random_larger_complexes(self, rng):
        universe = letters(8)
        order = ShortlexOrder(universe, 4)
        for _ in range(200):
            K = random_complex(rng, universe, 4, generators=6)
            assert betti(K, order) == betti_numbers(K)

    @pytest.mark.slow
    def test_all_complexes_on_five_vertices(self):
        universe = letters(5)
        order = permuted_order(ShortlexOrder(universe, 4), 8)
        complexes = all_complexes(5)
        # M(5) = 7581 conjuntos descendentes, sin el vacío ni el que solo contiene ∅
        assert len(complexes) == 7579
        for cells in complexes:
            K = LabelledComplex(universe, frozenset(Simplex(c) for c in cells), 4)
            assert betti(K, order) == betti_numbers(K)


class TestDiagramInvariants:
    def test_multiplicity_one_and_accounting(self, rng):
        universe = letters(7)
        order = permuted_order(ShortlexOrder(universe, 3), 21)
        for _ in range(50):
            diagram = diagram_of(random_complex(rng, universe, 3), order)
            assert diagram.has_multiplicity_one()
            assert diagram.accounts_for_all_simplices()

    def test_fixture_accounting(self, tp1, pi4):
        order = ShortlexOrder(tp1.universe, 5)
        for complex_ in (tp1, pi4):
            diagram = diagram_of(complex_, order)
            assert diagram.accounts_for_all_simplices()
            assert 2 * len(diagram.finite()) + len(diagram.infinite()) == len(complex_)

    def test_diagram_determines_complex(self, rng):
        universe = letters(5)
        order = permuted_order(ShortlexOrder(universe, 2), 13)
        for _ in range(200):
            K = random_complex(rng, universe, 2)
            L = random_complex(rng, universe, 2)
            same = diagram_of(K, order).intervals == diagram_of(L, order).intervals
            assert same == (K == L)

    def test_counts_independent_of_filtration(self, rng):
        universe = letters(6)
        base = ShortlexOrder(universe, 3)
        orders = [base] + [permuted_order(base, seed) for seed in range(1, 6)]
        for _ in range(50):
            K = random_complex(rng, universe, 3)
            counts = {tuple(sorted(diagram_of(K, order).counts().items())) for order in orders}
            assert len(counts) == 1


class TestSubmodels:
    def test_shared_births(self, rng):
        universe = letters(6)
        order = permuted_order(ShortlexOrder(universe, 3), 5)
        for _ in range(100):
            K = random_complex(rng, universe, 3)
            L = LabelledComplex(universe, K.simplices | random_complex(rng, universe, 3).simplices, 3)
            births = {(i.dim, i.birth) for i in diagram_of(L, order).intervals}
            for interval in diagram_of(K, order).intervals:
                assert (interval.dim, interval.birth) in births

    def test_filtration_prefix_is_contained(self, rng):
        universe = letters(6)
        order = ShortlexOrder(universe, 3)
        for _ in range(100):
            L = random_complex(rng, universe, 3, generators=6)
            K = induce(L, order).prefix(rng.randint(1, len(L)))
            sub, full = diagram_of(K, order), diagram_of(L, order)
            for interval in sub.finite():
                assert interval in full.intervals
            for interval in sub.infinite():
                assert interval in full.intervals or any(
                    other.dim == interval.dim and other.birth == interval.birth
                    for other in full.finite()
                )

    def test_finite_interval_can_shift_in_larger_complex(self):
        # Con v1v3 presente, v2v3 ya no mata a v3 sino a v2
        universe = letters(3)
        order = ShortlexOrder(universe, 1)
        K = LabelledComplex.from_labels(universe, [["v1"], ["v2"], ["v3"], ["v2", "v3"]], 1)
        L = LabelledComplex.from_labels(
            universe, [["v1"], ["v2"], ["v3"], ["v1", "v3"], ["v2", "v3"]], 1
        )
        assert _intervals(diagram_of(K, order), 0) == [(1, None), (2, None), (3, 6)]
        assert _intervals(diagram_of(L, order), 0) == [(1, None), (2, 6), (3, 5)]
