"""
Tests for lattices and discriminant forms

Run with: pytest tests/ -v
"""

from fractions import Fraction

import pytest

from quarticlines.core.lattice import (
    Lattice,
    class_pairing,
    component_square,
    discriminant_group,
    dual_lattice,
    find_class,
    isometric,
    make_root_lattice,
    parse_lattice,
    saturated_complement,
)


class TestRootLattices:
    """Gram conventions of A, D, E and D1"""

    def test_a_n_determinant(self):
        for n in range(1, 6):
            assert abs(make_root_lattice('A', n).det) == n + 1

    def test_negative_definite_diagonal(self):
        lattice = make_root_lattice('E', 8)
        assert all(lattice.gram[i][i] == -2 for i in range(8))
        assert lattice.is_even
        assert lattice.det == 1

    def test_d1_is_minus_four(self):
        lattice = make_root_lattice('D', 1)
        assert lattice.gram == ((Fraction(-4),),)
        assert lattice.name == 'D1'

    def test_frames_reproduce_gram(self):
        lattice = make_root_lattice('D', 5)
        rows = lattice.frame.rows
        for i in range(5):
            for j in range(5):
                assert lattice.gram[i][j] == -sum(a * b for a, b in zip(rows[i], rows[j]))

    def test_unknown_kinds_raise(self):
        with pytest.raises(ValueError):
            make_root_lattice('E', 5)
        with pytest.raises(ValueError):
            make_root_lattice('F', 4)

    def test_indefinite_gram_rejected(self):
        with pytest.raises(ValueError):
            Lattice(name='bad', gram=((2, 0), (0, -2)), labels=('x', 'y'))


class TestParser:
    """Lattice names on the command line"""

    def test_direct_sums(self):
        lattice = parse_lattice('E7+A3')
        assert lattice.rank == 10
        assert lattice.name == 'E7+A3'
        assert lattice.summands == ('E7', 'A3')
        assert parse_lattice('E8⊕A2⊕D1').rank == 11

    def test_rescaled_dual(self):
        lattice = parse_lattice('A2v(4)')
        assert lattice.gram[0][0] == Fraction(-8, 3)
        assert not lattice.is_integral

    def test_dual_lattice_inverts_gram(self):
        dual = dual_lattice(make_root_lattice('A', 2))
        assert dual.gram == ((Fraction(-2, 3), Fraction(-1, 3)),
                             (Fraction(-1, 3), Fraction(-2, 3)))

    def test_malformed_specs_raise(self):
        with pytest.raises(ValueError):
            parse_lattice('')
        with pytest.raises(ValueError):
            parse_lattice('X5')


class TestDiscriminantGroups:
    """Invariant factors, q-values and canonical classes"""

    @pytest.mark.parametrize('spec,factors', [
        ('A11', (12,)),
        ('E8', ()),
        ('E7', (2,)),
        ('D4', (2, 2)),
        ('D8', (2, 2)),
        ('D9', (4,)),
        ('D1', (4,)),
    ])
    def test_invariant_factors(self, spec, factors):
        assert discriminant_group(parse_lattice(spec)).invariant_factors == factors

    def test_order_is_determinant(self):
        lattice = parse_lattice('E8+A2+D1')
        assert discriminant_group(lattice).order == abs(lattice.det) == 12

    def test_e7_class(self):
        group = discriminant_group(parse_lattice('E7'))
        gamma = group.class_of((1,))
        assert gamma.q_value == Fraction(1, 2)
        assert gamma.rep_norm == Fraction(-3, 2)

    def test_d1_classes(self):
        group = discriminant_group(parse_lattice('D1'))
        assert group.class_of((1,)).rep_norm == Fraction(-1, 4)
        assert group.class_of((2,)).q_value == 1
        assert group.class_of((5,)).coords == (1,)

    def test_zero_class(self):
        zero = discriminant_group(parse_lattice('A3')).zero()
        assert zero.is_zero
        assert zero.rep_norm == 0

    def test_coordinates_recover_class(self):
        lattice = parse_lattice('A11')
        group = discriminant_group(lattice)
        for coords in ((1,), (5,), (11,)):
            rep = group.class_of(coords).coset_rep
            assert group.coordinates(rep) == coords

    def test_class_pairing(self):
        lattice = parse_lattice('E7')
        gamma = discriminant_group(lattice).class_of((1,))
        assert class_pairing(lattice, gamma, gamma) == Fraction(1, 2)

    def test_find_class(self):
        lattice = parse_lattice('E7')
        assert find_class(lattice, Fraction(-3, 2)).coords == (1,)
        assert find_class(parse_lattice('A2'), Fraction(-1, 2)) is None

    def test_find_class_rejects_impossible_denominators(self):
        with pytest.raises(ValueError):
            find_class(parse_lattice('E7'), Fraction(1, 3))


class TestComplementsAndIsometry:
    """Saturated complements, component squares and isometry recognition"""

    def test_complement_of_a_root_in_a2(self):
        lattice = parse_lattice('A2')
        complement = saturated_complement(lattice, [(1, 0)])
        assert complement.rank == 1
        assert complement.gram == ((Fraction(-2, 3),),)

    def test_component_square(self):
        assert component_square(-3, Fraction(-1, 3)) == Fraction(-8, 3)
        assert component_square(-2, Fraction(-1, 2)) == -2

    def test_isometric(self):
        assert isometric(parse_lattice('D2'), parse_lattice('A1+A1'))
        assert isometric(parse_lattice('D3'), parse_lattice('A3'))
        assert not isometric(parse_lattice('A2'), parse_lattice('A1+A1'))
        assert not isometric(parse_lattice('A3'), parse_lattice('A2'))
