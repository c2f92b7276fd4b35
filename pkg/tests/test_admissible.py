"""
Tests for search spaces, bnd, the orbit search and line configurations

Run with: pytest tests/ -v
Run the searches: pytest tests/ -m slow
"""

import networkx as nx
import pytest

from quarticlines.bounds import get_profile
from quarticlines.configs.admissible import (
    LineConfiguration,
    OrbitSearch,
    Strategy,
    admissible_sets,
    bnd,
    classify,
    embedding_orbits,
    fixture_configuration,
    max_clique,
    search_space,
    vector_graph,
)
from quarticlines.configs.graphs import pretty_label, rook_graph
from quarticlines.core.enumeration import vec_plus
from quarticlines.core.lattice import discriminant_group, parse_lattice


@pytest.fixture(scope='module')
def a2():
    return parse_lattice('A2')


@pytest.fixture(scope='module')
def a2_space(a2):
    return search_space(a2, discriminant_group(a2).zero())


@pytest.fixture(scope='module')
def v19():
    return fixture_configuration('V19')


def _search(space, strategy):
    return list(OrbitSearch(space, Strategy.parse(strategy)).run())


class TestStrategy:
    """Strategy names and their size arguments"""

    def test_parse_forms(self):
        assert Strategy.parse('size-at-least:16') == Strategy('size-at-least', 16)
        assert Strategy.parse('size-at-least(16)') == Strategy('size-at-least', 16)
        assert Strategy.parse('triangle-free').min_size == 1
        assert Strategy.parse('contains-K4', min_size=5).min_size == 5

    def test_label(self):
        assert Strategy().label == 'exhaustive-maximal'
        assert Strategy('size-at-least', 16).label == 'size-at-least:16'

    def test_rejects_unknown(self):
        with pytest.raises(ValueError):
            Strategy.parse('largest-first')
        with pytest.raises(ValueError):
            Strategy('size-at-least', 0)
        with pytest.raises(ValueError):
            Strategy.parse('size-at-least:')


class TestSearchSpace:
    """Compatibility tables and certificates"""

    def test_roots_of_a2(self, a2_space):
        assert len(a2_space) == 6
        assert a2_space.allowed == (0, 1)
        assert a2_space.to_dict()['vectors'] == 6

    def test_candidates_and_validate(self, a2_space):
        for i in range(len(a2_space)):
            for j in a2_space.candidates([i]):
                assert a2_space.validate([i, j]) == []
        assert a2_space.universal() == []

    def test_certificate_is_orbit_invariant(self, a2_space):
        # the Weyl group acts transitively on the six roots
        certs = {a2_space.certificate([i]) for i in range(len(a2_space))}
        assert len(certs) == 1
        assert len(a2_space.vertex_orbits()) == 1

    def test_subspace(self, a2_space):
        sub = a2_space.subspace([0, 1, 2])
        assert len(sub) == 3
        assert sub.lattice is a2_space.lattice


class TestBound:
    """bnd by branch and bound"""

    @pytest.mark.parametrize('spec,value', [
        ('A1', 1),
        ('A1+A1', 2),
        ('A2', 3),
        ('D1', 0),
    ])
    def test_small_root_systems(self, spec, value):
        lattice = parse_lattice(spec)
        assert bnd(lattice, discriminant_group(lattice).zero()) == value

    def test_witness_is_admissible(self, a2_space):
        result = max_clique(a2_space)
        assert result.value == 3
        assert a2_space.validate(result.witness) == []
        assert result.to_dict()['value'] == 3

    def test_symmetry_does_not_change_the_value(self, a2_space):
        assert max_clique(a2_space, use_symmetry=False).value == max_clique(a2_space).value

    @pytest.mark.slow
    @pytest.mark.parametrize('spec,coords,value', [
        ('E7', (1,), 4),
        ('E8', (), 12),
    ])
    def test_unimodular_and_e7(self, spec, coords, value):
        lattice = parse_lattice(spec)
        group = discriminant_group(lattice)
        cls = group.class_of(coords) if coords else group.zero()
        assert bnd(lattice, cls) == value

    @pytest.mark.slow
    @pytest.mark.parametrize('series,value', [('T', 20), ('J', 16), ('L', 10)])
    def test_series_eta_classes(self, series, value):
        profile = get_profile(series)
        assert bnd(profile.sigma(), profile.eta_class()) == value


class TestOrbitSearch:
    """Strategies over the roots of A2"""

    def test_exhaustive_maximal(self, a2, a2_space):
        found = _search(a2_space, 'exhaustive-maximal')
        assert found
        assert all(s.size == 3 and s.maximal for s in found)
        shapes = classify([a2_space.vectors_of(s.members) for s in found])
        assert [c.shape.name for c in shapes] == [pretty_label('~A2')]

    def test_size_at_least(self, a2_space):
        found = _search(a2_space, 'size-at-least:2')
        assert {s.size for s in found} == {2, 3}
        assert all(s.maximal for s in found if s.size == 3)
        assert not any(s.maximal for s in found if s.size == 2)

    def test_triangle_free(self, a2_space):
        found = _search(a2_space, 'triangle-free')
        assert found
        for s in found:
            graph = vector_graph(a2_space.vectors_of(s.members))
            assert sum(nx.triangles(graph).values()) == 0

    def test_contains_k4_finds_nothing(self, a2_space):
        assert _search(a2_space, 'contains-K4') == []

    def test_admissible_sets_accepts_strings(self, a2):
        found = list(admissible_sets(a2, discriminant_group(a2).zero(), 'exhaustive-maximal'))
        assert all(s.size == 3 for s in found)

    def test_embedding_orbits(self, a2):
        zero = discriminant_group(a2).zero()
        assert embedding_orbits(nx.complete_graph(3), a2, zero) >= 1
        assert embedding_orbits(nx.complete_graph(4), a2, zero) == 0
        assert embedding_orbits(nx.empty_graph(7), a2, zero) == 0

    @pytest.mark.parametrize('spec,coords', [('A11', (3,)), ('D4', (1, 0)), ('A2', ())])
    def test_candidate_orbits_share_certificates(self, spec, coords):
        lattice = parse_lattice(spec)
        group = discriminant_group(lattice)
        space = search_space(lattice, group.class_of(coords) if coords else group.zero())
        members = (0,)
        cands = space.candidates(members)
        groups = space.candidate_orbits(members, cands, space.canonical(members).generators)
        assert sorted(c for g in groups for c in g) == sorted(cands)
        assert [g[0] for g in groups] == sorted(g[0] for g in groups)
        certs = []
        for g in groups:
            found = {space.certificate(tuple(sorted(members + (c,)))) for c in g}
            assert len(found) == 1
            certs.append(found.pop())
        plain = {space.certificate(tuple(sorted(members + (c,)))) for c in cands}
        assert set(certs) == plain

    def test_symmetric_sets_need_few_labellings(self):
        lattice = parse_lattice('A11')
        space = search_space(lattice, discriminant_group(lattice).class_of((3,)))
        cands = space.candidates((0,))
        groups = space.candidate_orbits((0,), cands, space.canonical((0,)).generators)
        assert len(groups) < len(cands)

    def test_single_line_has_one_orbit(self):
        profile = get_profile('T')
        assert embedding_orbits(nx.empty_graph(1), profile.sigma(), profile.eta_class()) == 1

    @pytest.mark.slow
    def test_gq31_in_d9(self):
        profile = get_profile('J')
        assert embedding_orbits(rook_graph(4), profile.sigma(), profile.eta_class()) == 3


class TestLineConfiguration:
    """Built-in fixtures as vectors in A11"""

    def test_fixture_is_valid(self, v19):
        profile = get_profile('T')
        assert v19.size == 19
        assert len(v19.lambda_vectors) == 12
        assert v19.violations(profile.eta_class(), profile.lambda_class()) == []

    def test_attachments_follow_the_rows(self, v19):
        # the first point lies on columns 7, 8, 9 and 16
        assert v19.attachments()[0] == (6, 7, 8, 15)

    def test_fano_graph(self, v19):
        graph = v19.fano_graph()
        assert graph.number_of_nodes() == 31
        assert graph.nodes['m1']['kind'] == 'lambda'
        assert graph.degree('m1') == 4

    def test_heads_of_v19(self):
        assert fixture_configuration('V16').size == 16
        assert fixture_configuration('V17').size == 17

    def test_bad_pairing_is_reported(self, v19):
        broken = LineConfiguration(v19.ambient, v19.eta_vectors[:1] * 2, name='broken')
        issues = broken.violations()
        assert any('not pairwise distinct' in issue for issue in issues)
        assert any('is not in' in issue for issue in issues)

    def test_to_dict(self, v19):
        data = v19.to_dict()
        assert data['ambient'] == 'A11'
        assert data['q0'] == '-9/4'
        assert len(data['eta']) == 19


class TestClassify:
    """Grouping vector sets by adjacency graph"""

    def test_groups_by_shape(self, a2):
        roots = vec_plus(a2, discriminant_group(a2).zero())
        shapes = classify([roots[:1], roots[1:2], []])
        assert [c.count for c in shapes] == [2, 1]

    def test_mixed_lattices_raise(self, a2):
        a1 = parse_lattice('A1')
        one = vec_plus(a1, discriminant_group(a1).zero())
        two = vec_plus(a2, discriminant_group(a2).zero())
        with pytest.raises(ValueError):
            classify([one[:1], two[:1]])
