"""
Tests for dual-lattice vector enumeration

Run with: pytest tests/ -v
"""

import itertools
from fractions import Fraction

import pytest

from quarticlines.core.enumeration import (
    DualVector,
    VecQuery,
    compatible_with,
    enumerate_vectors,
    pairing,
    pairing_histogram,
    pairing_table,
    reflect,
    vec_plus,
    vec_std,
    window_norm,
)
from quarticlines.core.lattice import Lattice, discriminant_group, parse_lattice


def _roots(spec):
    lattice = parse_lattice(spec)
    return enumerate_vectors(VecQuery(lattice, discriminant_group(lattice).zero(), -2))


def _brute_force(lattice, cls, q, box=4):
    """Every rep + z with z in a box, filtered by norm."""
    rep = cls.coset_rep
    found = set()
    for z in itertools.product(range(-box, box + 1), repeat=lattice.rank):
        coords = tuple(r + k for r, k in zip(rep, z))
        if lattice.norm(coords) == q:
            found.add(coords)
    return found


class TestRootCounts:
    """Root systems as vec(Σ, 0, -2)"""

    @pytest.mark.parametrize('spec,count', [
        ('A1', 2),
        ('A2', 6),
        ('A3', 12),
        ('D4', 24),
        ('E6', 72),
        ('E7', 126),
        ('E8', 240),
        ('A11', 132),
        ('D1', 0),
    ])
    def test_root_count(self, spec, count):
        assert len(_roots(spec)) == count

    def test_e7_minimal_class(self):
        lattice = parse_lattice('E7')
        gamma = discriminant_group(lattice).class_of((1,))
        assert len(vec_std(lattice, gamma)) == 56


class TestEnumeration:
    """Windows, parity and edge cases"""

    def test_window_norm(self):
        lattice = parse_lattice('A11')
        group = discriminant_group(lattice)
        eta = group.class_of((3,))
        assert eta.q_value == Fraction(7, 4)
        assert window_norm(eta, -4) == Fraction(-9, 4)
        assert window_norm(eta, -2) == Fraction(-1, 4)
        assert window_norm(group.zero(), -4) == -2

    def test_zero_norm(self):
        lattice = parse_lattice('A2')
        group = discriminant_group(lattice)
        assert len(enumerate_vectors(VecQuery(lattice, group.zero(), 0))) == 1
        assert enumerate_vectors(VecQuery(lattice, group.class_of((1,)), 0)) == []

    def test_positive_norm_raises(self):
        lattice = parse_lattice('A2')
        with pytest.raises(ValueError):
            enumerate_vectors(VecQuery(lattice, discriminant_group(lattice).zero(), 2))

    def test_parity_mismatch_is_empty(self):
        lattice = parse_lattice('A2')
        query = VecQuery(lattice, discriminant_group(lattice).zero(), -1)
        assert not query.parity_ok
        assert enumerate_vectors(query) == []

    def test_class_from_another_lattice_raises(self):
        a2, a3 = parse_lattice('A2'), parse_lattice('A3')
        with pytest.raises(ValueError):
            enumerate_vectors(VecQuery(a3, discriminant_group(a2).zero(), -2))

    def test_canonical_order_is_stable(self):
        lattice = parse_lattice('D4')
        cls = discriminant_group(lattice).class_of((1, 0))
        first = vec_plus(lattice, cls)
        assert first == vec_plus(lattice, cls)
        assert first == sorted(first, key=DualVector.sort_key)

    def test_vectors_lie_in_their_class(self):
        lattice = parse_lattice('D9')
        group = discriminant_group(lattice)
        eta = group.class_of((1,))
        for vec in vec_plus(lattice, eta):
            assert group.coordinates(vec.coords) == (1,)
            assert vec.norm == window_norm(eta, -4)


class TestAgainstBruteForce:
    """Enumeration equals a box search on every small lattice"""

    @pytest.mark.parametrize('spec', ['A1', 'A2', 'A3', 'A4', 'D4', 'A1+A1', 'A2+A1', 'D1+A1'])
    def test_every_class(self, spec):
        lattice = parse_lattice(spec)
        group = discriminant_group(lattice)
        for coords in group.elements():
            cls = group.class_of(coords)
            q = window_norm(cls, -2)
            found = {v.coords for v in enumerate_vectors(VecQuery(lattice, cls, q))}
            assert found == _brute_force(lattice, cls, q)


def _permuted(lattice, perm):
    """The same lattice on the basis e'_i = e_{perm[i]}."""
    gram = tuple(tuple(lattice.gram[a][b] for b in perm) for a in perm)
    labels = tuple(lattice.labels[a] for a in perm)
    return Lattice(name=f"{lattice.name}-permuted", gram=gram, labels=labels)


class TestSymmetries:
    """Negation closure and basis independence"""

    @pytest.mark.parametrize('spec,perm', [
        ('A3', (2, 0, 1)),
        ('D4', (3, 1, 0, 2)),
        ('A2+A1', (2, 1, 0)),
    ])
    def test_counts_survive_a_basis_permutation(self, spec, perm):
        lattice = parse_lattice(spec)
        moved = _permuted(lattice, perm)
        group, moved_group = discriminant_group(lattice), discriminant_group(moved)
        assert moved_group.order == group.order
        for coords in group.elements():
            cls = group.class_of(coords)
            image = tuple(cls.coset_rep[a] for a in perm)
            moved_cls = moved_group.class_of(moved_group.coordinates(image))
            assert moved_cls.q_value == cls.q_value
            assert len(vec_std(moved, moved_cls)) == len(vec_std(lattice, cls))
            assert len(vec_plus(moved, moved_cls)) == len(vec_plus(lattice, cls))

    def test_self_negative_classes_are_closed(self):
        lattice = parse_lattice('D4')
        group = discriminant_group(lattice)
        for coords in group.elements():
            assert group.negate(coords) == tuple(coords)
            found = {v.coords for v in vec_std(lattice, group.class_of(coords))}
            assert found
            assert {tuple(-x for x in c) for c in found} == found

    def test_negation_swaps_opposite_classes(self):
        lattice = parse_lattice('A2')
        group = discriminant_group(lattice)
        first = {v.coords for v in vec_std(lattice, group.class_of((1,)))}
        second = {v.coords for v in vec_std(lattice, group.class_of((2,)))}
        assert first and first != second
        assert {tuple(-x for x in c) for c in first} == second


class TestPairings:
    """Pairing tables, reflections and compatibility"""

    def test_root_pairings(self):
        roots = _roots('A2')
        histogram = pairing_histogram(roots)
        assert sum(histogram.values()) == 15
        assert set(histogram) == {Fraction(-1), Fraction(1), Fraction(2)}
        assert histogram[Fraction(2)] == 3

    def test_table_matches_pairing(self):
        roots = _roots('D4')
        table = pairing_table(roots)
        for i, j in ((0, 1), (3, 7), (10, 23)):
            assert table.value(i, j) == pairing(roots[i], roots[j])

    def test_mask_of_unreachable_value_is_empty(self):
        table = pairing_table(_roots('A2'))
        assert not table.mask(Fraction(1, 3)).any()

    def test_reflection_preserves_norm(self):
        roots = _roots('A3')
        image = reflect(roots[0], roots[1])
        assert image.norm == roots[0].norm
        assert image in roots
        assert reflect(roots[0], roots[0]) == -roots[0]

    def test_reflection_needs_a_root(self):
        lattice = parse_lattice('E7')
        gamma = discriminant_group(lattice).class_of((1,))
        vectors = vec_std(lattice, gamma)
        with pytest.raises(ValueError):
            reflect(vectors[0], vectors[1])

    def test_compatible_with(self):
        roots = _roots('A2')
        kept = compatible_with(roots, roots[:1], [0, 1, -1])
        assert roots[0] not in kept
        assert -roots[0] not in kept
        assert len(kept) == 4
