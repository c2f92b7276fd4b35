"""
Tests for Ē_max and the line-set filters

Lines are modelled inside A11 by 3-subsets of twelve points: two lines meet
exactly when their subsets are disjoint, and the root e_i − e_j meets the
line of s when i ∈ s and j ∉ s.

Run with: pytest tests/ -v
"""

from fractions import Fraction

import pytest

from quarticlines.configs.validator import (
    CompositeFilter,
    ExceptionalTrialFilter,
    JStarFilter,
    TriangleFilter,
    create_filter,
    emax,
    lattice_roots,
    series_filter_jstar,
    triangle_filter,
    triangles,
)
from quarticlines.core.enumeration import DualVector, pairing
from quarticlines.core.lattice import parse_lattice
from quarticlines.tseries.fixtures import point_coords, subset_coords


@pytest.fixture(scope='module')
def a11():
    return parse_lattice('A11')


@pytest.fixture
def line(a11):
    def make(*points):
        return DualVector.from_coords(a11, subset_coords(frozenset(points)))
    return make


@pytest.fixture
def root(a11):
    def make(i, j):
        coords = [a - b for a, b in zip(point_coords(i), point_coords(j))]
        return DualVector.from_coords(a11, coords)
    return make


@pytest.fixture
def triangle(line):
    return [line(0, 1, 2), line(3, 4, 5), line(6, 7, 8)]


class TestSubsetModel:
    """Sanity of the model the other tests are written in"""

    def test_norms(self, line, root):
        assert line(0, 1, 2).norm == Fraction(-9, 4)
        assert root(0, 9).norm == -2

    def test_meeting_rule(self, line, root):
        assert pairing(line(0, 1, 2), line(3, 4, 5)) == Fraction(3, 4)
        assert pairing(line(0, 1, 2), line(2, 3, 4)) == Fraction(-1, 4)
        assert pairing(root(0, 9), line(0, 1, 2)) == 1
        assert pairing(root(9, 10), line(0, 1, 2)) == 0


class TestEmax:
    """Roots compatible with a line set"""

    def test_empty_set_gives_positive_roots(self, a11):
        result = emax([], a11)
        assert result.roots == []
        assert len(result.free) == 66
        assert len(lattice_roots(a11)) == 132

    def test_every_root_is_nonnegative(self, a11, triangle):
        result = emax(triangle, a11)
        assert result
        for r in result.all_roots:
            assert all(pairing(r, v) >= 0 for v in triangle)

    def test_root_through_a_common_point(self, a11, line, root):
        # lines through point 0 pair to q0 + 2, so e_0 − e_9 may meet both
        lines = [line(0, 1, 2), line(0, 3, 4)]
        kept = emax(lines, a11).roots
        assert root(0, 9) in kept
        assert -root(0, 9) not in kept

    def test_dict(self, a11):
        data = emax([], a11).to_dict()
        assert data['size'] == 66

    def test_output_is_pairwise_consistent(self, a11, line):
        lines = [line(0, 1, 2), line(0, 3, 4), line(5, 6, 7), line(1, 3, 8)]
        q0 = lines[0].norm
        result = emax(lines, a11)
        kept = result.all_roots
        assert kept
        for r in kept:
            assert -r not in kept
            meets = [v for v in lines if pairing(r, v) == 1]
            for a in meets:
                for b in meets:
                    if a is not b:
                        assert pairing(a, b) == q0 + 2

    def test_all_twelve_points_leave_no_root(self, a11, line):
        # e_i − e_j pairs with the (−1)-lines of i and j with opposite signs
        points = [DualVector.from_coords(a11, point_coords(i)) for i in range(12)]
        assert emax([line(0, 1, 2)], a11)
        assert not emax([line(0, 1, 2)], a11, points)
        assert not emax([], a11, points)

    def test_missing_point_frees_its_roots(self, a11, line, root):
        points = [DualVector.from_coords(a11, point_coords(i)) for i in range(11)]
        kept = emax([line(0, 1, 2)], a11, points).all_roots
        assert root(11, 3) in kept
        assert all(pairing(r, p) >= 0 for r in kept for p in points)


class TestTriangleFilter:
    """Triangles need a fourth line or a singular point"""

    def test_finds_the_triangle(self, triangle):
        assert triangles(triangle) == [(0, 1, 2)]

    def test_bare_triangle_fails(self, triangle):
        result = triangle_filter(triangle)
        assert not result.passed
        assert result.witnesses == [(0, 1, 2)]
        assert result.issues

    def test_fourth_line_in_the_set(self, triangle, line):
        assert triangle_filter(triangle + [line(9, 10, 11)]).passed

    def test_fourth_line_from_the_pool(self, triangle, line):
        assert triangle_filter(triangle, witness_pool=[line(9, 10, 11)]).passed

    def test_root_through_a_line(self, triangle, root):
        assert triangle_filter(triangle, roots=[root(0, 9)]).passed
        assert not triangle_filter(triangle, roots=[root(9, 10)]).passed

    def test_triangle_free_sets_pass(self, line):
        assert triangle_filter([line(0, 1, 2), line(3, 4, 5), line(2, 6, 7)]).passed
        assert triangle_filter([]).passed


class TestJStarFilter:
    """Edges with ℓ×, triangles without it"""

    def test_without_ell_cross_no_triangles(self, triangle, line):
        assert not series_filter_jstar(triangle, has_ell_cross=False).passed
        assert series_filter_jstar(triangle[:2], has_ell_cross=False).passed

    def test_lonely_edge_fails_with_ell_cross(self, triangle):
        result = series_filter_jstar(triangle[:2], has_ell_cross=True)
        assert not result.passed
        assert result.witnesses == [(0, 1)]

    def test_edges_on_triangles_pass(self, triangle):
        assert series_filter_jstar(triangle, has_ell_cross=True).passed

    def test_edge_touching_a_root_passes(self, triangle, root):
        assert series_filter_jstar(triangle[:2], True, roots=[root(3, 9)]).passed

    def test_four_triangles(self, line):
        # the affine plane on nine points: four parallel classes, each a triangle
        classes = [
            [(0, 1, 2), (3, 4, 5), (6, 7, 8)],
            [(0, 3, 6), (1, 4, 7), (2, 5, 8)],
            [(0, 4, 8), (1, 5, 6), (2, 3, 7)],
            [(0, 5, 7), (1, 3, 8), (2, 4, 6)],
        ]
        lines = [line(*s) for parallel in classes for s in parallel]
        assert len(triangles(lines)) == 4
        assert series_filter_jstar(lines, has_ell_cross=True).passed
        result = series_filter_jstar(lines, has_ell_cross=False)
        assert not result.passed
        assert len(result.witnesses) == 4


class TestFilterChain:
    """Composite, exceptional-trial and the factory"""

    def test_composite_merges(self, triangle):
        chain = CompositeFilter([TriangleFilter(), JStarFilter(has_ell_cross=True)])
        result = chain.check(triangle)
        assert not result.passed
        assert all(issue.startswith('triangle:') for issue in result.issues)

    def test_exceptional_trial_finds_a_good_choice(self, triangle, root):
        trial = ExceptionalTrialFilter(TriangleFilter(), max_exceptional=1)
        result = trial.check(triangle, [root(9, 10), root(0, 9)])
        assert result.passed
        assert len(trial.trials) == 2

    def test_exceptional_trial_all_fail(self, triangle, root):
        trial = ExceptionalTrialFilter(TriangleFilter(), max_exceptional=1)
        result = trial.check(triangle, [root(9, 10), root(10, 11)])
        assert not result.passed
        assert len(trial.trials) == 2
        assert result.witnesses == [(0, 1, 2)]

    def test_small_root_sets_are_tried_whole(self, root):
        trial = ExceptionalTrialFilter(TriangleFilter(), max_exceptional=3)
        roots = [root(0, 9), root(9, 10)]
        assert trial.subsets(roots) == [tuple(roots)]

    def test_create_filter(self):
        assert isinstance(create_filter('triangle'), TriangleFilter)
        assert create_filter('jstar', has_ell_cross=False).has_ell_cross is False
        inner = create_filter('triangle')
        assert create_filter('exceptional-trial', inner=inner).inner is inner

    def test_unknown_filter_type(self):
        with pytest.raises(ValueError):
            create_filter('quadrangle')
