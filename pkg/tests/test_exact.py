"""
Tests for the exact arithmetic layer

Run with: pytest tests/ -v
"""

from fractions import Fraction

import pytest
import sympy

from quarticlines.core.exact import (
    as_fraction,
    coset_vectors,
    determinant,
    format_rational,
    in_row_space,
    integer_kernel,
    ldl_decomposition,
    mat_mul,
    mod1,
    mod2,
    nullspace_mod_p,
    rational_nullspace,
    rref_rational,
    smith_normal_form,
    span_equal_mod_p,
)


class TestRationals:
    """Coercion, formatting and reduction"""

    def test_as_fraction_accepts_common_inputs(self):
        assert as_fraction(3) == Fraction(3)
        assert as_fraction('-9/4') == Fraction(-9, 4)
        assert as_fraction(Fraction(1, 2)) == Fraction(1, 2)
        assert as_fraction(sympy.Rational(5, 6)) == Fraction(5, 6)

    def test_as_fraction_rejects_floats(self):
        with pytest.raises(TypeError):
            as_fraction(0.5)

    def test_format_rational(self):
        assert format_rational(Fraction(4, 2)) == 2
        assert format_rational(Fraction(-3, 4)) == '-3/4'

    def test_mod2_and_mod1(self):
        assert mod2(Fraction(-3, 2)) == Fraction(1, 2)
        assert mod2(Fraction(-9, 4)) == Fraction(7, 4)
        assert mod1(Fraction(-1, 4)) == Fraction(3, 4)


class TestLinearAlgebra:
    """Determinants, kernels and row spaces"""

    def test_determinant(self):
        assert determinant([[-2, 1], [1, -2]]) == 3
        assert determinant([[0, 1], [1, 0]]) == -1
        assert determinant([[1, 2], [2, 4]]) == 0

    def test_rational_nullspace(self):
        basis = rational_nullspace([[1, 1, 1]])
        assert len(basis) == 2
        for vec in basis:
            assert sum(vec) == 0

    def test_rref_is_canonical(self):
        assert rref_rational([[2, 2], [1, 1]]) == rref_rational([[3, 3]])

    def test_in_row_space(self):
        assert in_row_space([2, 2], [[1, 1]])
        assert not in_row_space([1, 0], [[1, 1]])
        assert in_row_space([0, 0], [])


class TestSmithNormalForm:
    """Smith form with its unimodular witnesses"""

    def test_invariant_factors_divide(self):
        snf = smith_normal_form([[2, 4], [6, 8]])
        assert snf.invariant_factors == [2, 4]
        assert snf.verify()

    def test_coprime_blocks_merge(self):
        snf = smith_normal_form([[3, 0], [0, 4]])
        assert snf.invariant_factors == [1, 12]

    def test_transforms_reproduce_diagonal(self):
        source = [[1, 1, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]]
        snf = smith_normal_form(source)
        assert mat_mul(mat_mul(snf.left, source), snf.right) == snf.diagonal_matrix()
        assert snf.rank == 3

    def test_integer_kernel(self):
        kernel = integer_kernel([[1, 1, 1]])
        assert len(kernel) == 2
        for vec in kernel:
            assert sum(vec) == 0

    def test_empty_matrix_kernel_is_everything(self):
        assert integer_kernel([], ncols=2) == [(1, 0), (0, 1)]


class TestPrimeFields:
    """Elimination over 𝔽_p"""

    def test_nullspace_mod_2(self):
        assert nullspace_mod_p([[1, 1]], 2) == [(1, 1)]

    def test_nullspace_mod_3(self):
        assert nullspace_mod_p([[1, 2]], 3) == [(1, 1)]
        assert nullspace_mod_p([[1, 0], [0, 1]], 3) == []

    def test_span_equal(self):
        assert span_equal_mod_p([[1, 1]], [[2, 2]], 3)
        assert not span_equal_mod_p([[1, 0]], [[0, 1]], 3)


class TestCosetVectors:
    """Fincke–Pohst on shifted lattices"""

    def test_half_integer_shift(self):
        found = sorted(x for x, _ in coset_vectors([[1]], [Fraction(1, 2)], Fraction(1, 4),
                                                    exact=True))
        assert found == [(Fraction(-1, 2),), (Fraction(1, 2),)]

    def test_ball_counts_include_smaller_norms(self):
        found = list(coset_vectors([[1, 0], [0, 1]], [0, 0], 1))
        assert len(found) == 5

    def test_ldl_rejects_indefinite(self):
        with pytest.raises(ValueError):
            ldl_decomposition([[1, 2], [2, 1]])
