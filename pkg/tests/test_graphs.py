"""
Tests for canonical labelling, Dynkin shapes and the GQ(3,1) recognizer

Run with: pytest tests/ -v
"""

import random

import networkx as nx
import numpy as np
import pytest

from quarticlines.configs.graphs import (
    NOT_PARABOLIC,
    adjacency_graph,
    attached_graph,
    attachment_orbits,
    canonical_labelling,
    circulant_graph,
    dynkin_shape,
    graph_certificate,
    graph_shape,
    has_gq31_counts,
    independent_partitions,
    is_gq31,
    pretty_label,
    rook_graph,
    shrikhande_graph,
    to_dot,
)


def _star(arms):
    """A tree with one centre and paths of the given lengths."""
    graph = nx.Graph()
    graph.add_node(0)
    nxt = 1
    for length in arms:
        previous = 0
        for _ in range(length):
            graph.add_edge(previous, nxt)
            previous, nxt = nxt, nxt + 1
    return graph


def _shuffled(graph, seed=7):
    nodes = list(graph.nodes)
    image = nodes[:]
    random.Random(seed).shuffle(image)
    return nx.relabel_nodes(graph, dict(zip(nodes, image)))


class TestCanonicalLabelling:
    """Certificates agree exactly on isomorphic inputs"""

    def test_relabelled_graph_same_certificate(self):
        graph = nx.petersen_graph()
        assert graph_certificate(graph) == graph_certificate(_shuffled(graph))

    def test_weighted_matrix_permutation(self):
        weights = np.array([[-2, 1, 0], [1, -2, 3], [0, 3, -4]])
        perm = [2, 0, 1]
        permuted = weights[np.ix_(perm, perm)]
        first = canonical_labelling(weights)
        second = canonical_labelling(permuted)
        assert first.certificate == second.certificate

    def test_colours_distinguish(self):
        weights = np.array([[0, 1], [1, 0]])
        assert (canonical_labelling(weights, [0, 0]).certificate
                != canonical_labelling(weights, [0, 1]).certificate)

    def test_colour_count_mismatch(self):
        with pytest.raises(ValueError):
            canonical_labelling(np.zeros((2, 2)), [0])

    def test_empty_input(self):
        assert canonical_labelling(np.zeros((0, 0))).certificate == b''

    def test_automorphisms_are_found(self):
        form = canonical_labelling(nx.to_numpy_array(nx.cycle_graph(6), dtype=np.int64))
        assert form.generators
        assert len(form.order) == 6

    def test_kinds_enter_the_certificate(self):
        table = np.array([[0, 1], [1, 0]], dtype=bool)
        eta = adjacency_graph(table)
        mixed = adjacency_graph(table, kinds=['eta', 'lambda'])
        assert graph_certificate(eta) != graph_certificate(mixed)


class TestDynkinShapes:
    """Component labels of ADE and affine ADE graphs"""

    @pytest.mark.parametrize('graph,label', [
        (nx.cycle_graph(4), '~A3'),
        (nx.complete_graph(3), '~A2'),
        (nx.star_graph(4), '~D4'),
        (nx.path_graph(5), 'A5'),
        (nx.empty_graph(1), 'A1'),
        (_star([1, 1, 1]), 'D4'),
        (_star([1, 1, 3]), 'D6'),
        (_star([1, 2, 2]), 'E6'),
        (_star([1, 2, 3]), 'E7'),
        (_star([1, 2, 4]), 'E8'),
        (_star([2, 2, 2]), '~E6'),
        (_star([1, 3, 3]), '~E7'),
        (_star([1, 2, 5]), '~E8'),
    ])
    def test_component_label(self, graph, label):
        assert dynkin_shape(graph).label == label

    def test_affine_d(self):
        graph = nx.Graph([(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)])
        assert dynkin_shape(graph).label == '~D5'

    def test_not_parabolic(self):
        shape = dynkin_shape(nx.complete_graph(4))
        assert not shape.parabolic
        assert shape.label == NOT_PARABOLIC
        assert dynkin_shape(_star([2, 2, 3])).label == NOT_PARABOLIC

    def test_multiple_components(self):
        graph = nx.disjoint_union_all([
            nx.complete_graph(3), nx.empty_graph(1), nx.complete_graph(3), nx.empty_graph(1)
        ])
        assert dynkin_shape(graph).label == '2~A2+2A1'

    def test_self_loop_raises(self):
        graph = nx.Graph([(0, 0)])
        with pytest.raises(ValueError):
            dynkin_shape(graph)

    def test_pretty_label(self):
        assert pretty_label('2~A3+2A1') == '2A\u03033⊕2A1'
        assert pretty_label('E8') == 'E8'


class TestGQ31:
    """The rook's graph and its Shrikhande impostor"""

    def test_both_have_the_counts(self):
        assert has_gq31_counts(rook_graph(4))
        assert has_gq31_counts(shrikhande_graph())

    def test_only_the_rook_graph_is_gq31(self):
        assert is_gq31(rook_graph(4))
        assert is_gq31(_shuffled(rook_graph(4), seed=3))
        assert not is_gq31(shrikhande_graph())

    def test_certificates_differ(self):
        assert graph_certificate(rook_graph(4)) != graph_certificate(shrikhande_graph())

    def test_wrong_size_fails_fast(self):
        assert not has_gq31_counts(rook_graph(3))

    def test_six_regular_circulant_is_not_gq31(self):
        graph = circulant_graph(16, [1, 2, 3])
        assert all(d == 6 for _, d in graph.degree())
        assert not has_gq31_counts(graph)
        assert not is_gq31(graph)


class TestAttachmentQuadruples:
    """Partitions of GQ(3,1) into four disjoint independent 4-sets"""

    def test_rook_partitions(self):
        partitions = independent_partitions(rook_graph(4), 4)
        assert len(partitions) == 24
        graph = rook_graph(4)
        for parts in partitions:
            assert sorted(v for part in parts for v in part) == list(range(16))
            assert all(not graph.has_edge(u, v) for part in parts for u in part for v in part)

    def test_two_orbits(self):
        graph = rook_graph(4)
        assert len(attachment_orbits(graph, independent_partitions(graph, 4))) == 2

    def test_orbits_survive_relabelling(self):
        graph = _shuffled(rook_graph(4), seed=11)
        assert len(attachment_orbits(graph, independent_partitions(graph, 4))) == 2

    def test_square_has_one_partition(self):
        assert independent_partitions(nx.cycle_graph(4), 2) == [(frozenset({0, 2}), frozenset({1, 3}))]

    def test_size_must_divide(self):
        assert independent_partitions(rook_graph(4), 3) == []
        assert independent_partitions(nx.Graph(), 2) == []

    def test_attached_graph_colours_lambda(self):
        graph = attached_graph(nx.cycle_graph(4), [(0, 2), (1, 3)])
        assert graph.nodes['m1']['kind'] == 'lambda'
        assert sorted(graph['m2']) == [1, 3]
        assert graph.number_of_edges() == 8


class TestShapesAndDot:
    """Shape names and DOT export"""

    def test_shape_names(self):
        assert graph_shape(rook_graph(4)).name == 'GQ(3,1)'
        assert graph_shape(nx.path_graph(3)).name == 'A3'
        assert graph_shape(nx.complete_graph(4)).name == 'graph(4 vertices, 6 edges)'

    def test_shape_dict(self):
        data = graph_shape(nx.cycle_graph(5)).to_dict()
        assert data['dynkin'] == '~A4'
        assert data['vertices'] == 5
        assert not data['gq31']

    def test_dot_draws_lambda_as_box(self):
        table = np.array([[0, 1], [1, 0]], dtype=bool)
        graph = adjacency_graph(table, labels=['l1', 'p1'], kinds=['eta', 'lambda'])
        dot = to_dot(graph, name='T 22')
        assert dot.startswith('graph T_22 {')
        assert '"p1" [shape=box];' in dot
        assert '"l1" -- "p1";' in dot
