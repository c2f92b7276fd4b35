#!/usr/bin/env python3
"""
Configuration graphs
Canonical labelling of coloured, edge-labelled graphs, adjacency graphs of
line configurations, Dynkin shapes and the GQ(3,1) recognizer.

Canonical forms come from equitable partition refinement with
individualisation and backtracking; automorphisms found at equal leaves prune
branches that lie in one orbit of the current pointwise stabiliser.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

NOT_PARABOLIC = 'not parabolic simple'


# ----------------------------------------------------------------------
# Canonical labelling
# ----------------------------------------------------------------------

@dataclass
class CanonicalForm:
    """A canonical vertex order, its certificate and the automorphisms met on the way."""
    order: Tuple[int, ...]
    certificate: bytes
    generators: List[Tuple[int, ...]] = field(default_factory=list)
    leaves: int = 0


def _refine(weights: np.ndarray, cells: List[List[int]]) -> List[List[int]]:
    n = len(weights)
    cell_of = np.empty(n, dtype=np.int64)
    while True:
        for index, cell in enumerate(cells):
            cell_of[cell] = index
        signatures = np.sort(weights * len(cells) + cell_of[None, :], axis=1)
        refined: List[List[int]] = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups: Dict[bytes, List[int]] = {}
            for v in cell:
                groups.setdefault(signatures[v].tobytes(), []).append(v)
            refined.extend(groups[key] for key in sorted(groups))
        if len(refined) == len(cells):
            return refined
        cells = refined


def _orbit_roots(points: Sequence[int], generators: Sequence[Tuple[int, ...]]) -> Dict[int, int]:
    parent = {p: p for p in points}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in generators:
        for p in points:
            q = g[p]
            if q in parent:
                a, b = find(p), find(q)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    return {p: find(p) for p in points}


def canonical_labelling(weights, colors: Optional[Sequence[int]] = None) -> CanonicalForm:
    """
    Canonical form of a complete graph with integer edge labels ``weights``
    (the diagonal is a vertex label) and vertex ``colors``.

    Two inputs get the same certificate iff some vertex bijection preserves
    colours and labels.
    """
    weights = np.asarray(weights, dtype=np.int64)
    n = len(weights)
    colors = list(colors) if colors is not None else [0] * n
    if len(colors) != n:
        raise ValueError(f"{len(colors)} colours for {n} vertices")
    if n == 0:
        return CanonicalForm((), b'')
    w = weights - weights.min()
    keys = sorted({(colors[v], int(w[v, v])) for v in range(n)})
    cells = [[v for v in range(n) if (colors[v], int(w[v, v])) == key] for key in keys]
    color_bytes = np.array([key[0] for key in keys], dtype=np.int64).tobytes()
    color_counts = np.array([len(c) for c in cells], dtype=np.int64).tobytes()

    best: Dict[str, object] = {'form': None, 'order': None}
    seen: Dict[bytes, Tuple[int, ...]] = {}
    generators: List[Tuple[int, ...]] = []
    leaves = [0]

    def leaf(partition: List[List[int]]):
        leaves[0] += 1
        order = tuple(cell[0] for cell in partition)
        form = w[np.ix_(order, order)].tobytes()
        if form in seen:
            mapping = [0] * n
            for a, b in zip(seen[form], order):
                mapping[a] = b
            generators.append(tuple(mapping))
            return
        seen[form] = order
        if best['form'] is None or form > best['form']:
            best['form'], best['order'] = form, order

    def search(partition: List[List[int]], fixed: List[int]):
        if len(partition) == n:
            leaf(partition)
            return
        sizes = [len(c) for c in partition]
        target = min((s, i) for i, s in enumerate(sizes) if s > 1)[1]
        cell = partition[target]
        explored: List[int] = []
        for v in cell:
            if explored:
                stabiliser = [g for g in generators if all(g[x] == x for x in fixed)]
                roots = _orbit_roots(cell, stabiliser)
                if any(roots[v] == roots[u] for u in explored):
                    continue
            split = partition[:target] + [[v], [u for u in cell if u != v]] + partition[target + 1:]
            search(_refine(w, split), fixed + [v])
            explored.append(v)

    search(_refine(w, cells), [])
    order = best['order']
    certificate = (
        n.to_bytes(4, 'little') + int(weights.min()).to_bytes(8, 'little', signed=True)
        + color_bytes + color_counts + best['form']
    )
    return CanonicalForm(tuple(order), certificate, generators, leaves[0])


# ----------------------------------------------------------------------
# Simple graphs
# ----------------------------------------------------------------------

def adjacency_graph(table: np.ndarray, labels: Optional[Sequence[Hashable]] = None,
                    kinds: Optional[Sequence[str]] = None) -> nx.Graph:
    """Simple graph from a boolean adjacency matrix; the diagonal is ignored."""
    table = np.asarray(table, dtype=bool)
    n = len(table)
    labels = list(labels) if labels is not None else list(range(n))
    graph = nx.Graph()
    for i, label in enumerate(labels):
        graph.add_node(label, kind=kinds[i] if kinds is not None else 'eta')
    rows, cols = np.nonzero(np.triu(table, k=1))
    graph.add_edges_from((labels[i], labels[j]) for i, j in zip(rows, cols))
    return graph


def _kind_codes(graph: nx.Graph, nodes: Sequence[Hashable]) -> List[int]:
    kinds = sorted({graph.nodes[v].get('kind', 'eta') for v in nodes})
    code = {k: i for i, k in enumerate(kinds)}
    return [code[graph.nodes[v].get('kind', 'eta')] for v in nodes]


def graph_canonical(graph: nx.Graph) -> Tuple[List[Hashable], CanonicalForm]:
    nodes = list(graph.nodes)
    matrix = nx.to_numpy_array(graph, nodelist=nodes, dtype=np.int64) if nodes else np.zeros((0, 0))
    return nodes, canonical_labelling(matrix, _kind_codes(graph, nodes))


def graph_certificate(graph: nx.Graph) -> bytes:
    # kind names go into the certificate so η/λ colourings compare by name
    kinds = sorted({graph.nodes[v].get('kind', 'eta') for v in graph.nodes})
    return ','.join(kinds).encode() + b'|' + graph_canonical(graph)[1].certificate


# ----------------------------------------------------------------------
# Dynkin shapes
# ----------------------------------------------------------------------

_BRANCHED = {
    (1, 2, 2): 'E6', (1, 2, 3): 'E7', (1, 2, 4): 'E8',
    (2, 2, 2): '~E6', (1, 3, 3): '~E7', (1, 2, 5): '~E8',
}


def _arm(graph: nx.Graph, centre, start) -> int:
    length, previous, current = 1, centre, start
    while True:
        onward = [u for u in graph[current] if u != previous]
        if not onward:
            return length
        if len(onward) > 1:
            return -1
        previous, current = current, onward[0]
        length += 1


def _component_label(graph: nx.Graph) -> Optional[str]:
    n, m = graph.number_of_nodes(), graph.number_of_edges()
    degree = dict(graph.degree())
    if m == n and n >= 3 and all(d == 2 for d in degree.values()):
        return f"~A{n - 1}"
    if m != n - 1:
        return None
    if n == 1 or max(degree.values()) <= 2:
        return f"A{n}"
    branch = [v for v, d in degree.items() if d >= 3]
    if len(branch) == 1:
        centre = branch[0]
        arms = tuple(sorted(_arm(graph, centre, u) for u in graph[centre]))
        if -1 in arms:
            return None
        if arms == (1, 1, 1, 1):
            return '~D4'
        if len(arms) == 3 and arms[:2] == (1, 1):
            return f"D{n}"
        return _BRANCHED.get(arms)
    if len(branch) == 2 and all(degree[v] == 3 for v in branch):
        leaves = [sum(1 for u in graph[v] if degree[u] == 1) for v in branch]
        if leaves == [2, 2]:
            return f"~D{n - 1}"
    return None


def _label_key(label: str) -> Tuple:
    affine = label.startswith('~')
    letter, rank = label.lstrip('~')[0], int(label.lstrip('~')[1:])
    return (not affine, -rank, letter)


def pretty_label(label: str) -> str:
    """'2~A3+2A1' -> '2Ã3⊕2A1'."""
    out = []
    for part in label.split('+'):
        prefix = ''
        while part and part[0].isdigit():
            prefix, part = prefix + part[0], part[1:]
        if part.startswith('~'):
            part = part[1] + '̃' + part[2:]
        out.append(prefix + part)
    return '⊕'.join(out)


@dataclass(frozen=True)
class DynkinShape:
    components: Tuple[str, ...]
    parabolic: bool

    @property
    def label(self) -> str:
        if not self.parabolic:
            return NOT_PARABOLIC
        counts: Dict[str, int] = {}
        for c in self.components:
            counts[c] = counts.get(c, 0) + 1
        return '+'.join(
            (f"{counts[c]}{c}" if counts[c] > 1 else c)
            for c in sorted(counts, key=_label_key)
        )

    @property
    def pretty(self) -> str:
        return self.label if not self.parabolic else pretty_label(self.label)


def dynkin_shape(graph: nx.Graph) -> DynkinShape:
    """
    Per-component ADE or affine ADE labels, or the ``not parabolic simple``
    verdict. Ã1 never occurs in a simple graph.
    """
    if nx.number_of_selfloops(graph):
        raise ValueError("Dynkin shapes need a loop-free graph")
    labels = []
    for nodes in nx.connected_components(graph):
        label = _component_label(graph.subgraph(nodes))
        if label is None:
            return DynkinShape((), False)
        labels.append(label)
    return DynkinShape(tuple(sorted(labels, key=_label_key)), True)


# ----------------------------------------------------------------------
# GQ(3,1) and friends
# ----------------------------------------------------------------------

def rook_graph(size: int = 4) -> nx.Graph:
    """The size × size rook's graph, the collinearity graph of GQ(size-1, 1)."""
    product = nx.cartesian_product(nx.complete_graph(size), nx.complete_graph(size))
    return nx.convert_node_labels_to_integers(product, ordering='sorted')


def shrikhande_graph() -> nx.Graph:
    """Same parameters as the 4×4 rook's graph, not isomorphic to it."""
    graph = nx.Graph()
    for a in range(4):
        for b in range(4):
            for da, db in ((0, 1), (1, 0), (1, 1)):
                graph.add_edge(4 * a + b, 4 * ((a + da) % 4) + (b + db) % 4)
    return graph


def circulant_graph(n: int, jumps: Sequence[int]) -> nx.Graph:
    return nx.circulant_graph(n, list(jumps))


def edge_triangle_counts(graph: nx.Graph) -> Dict[Tuple, int]:
    return {(u, v): len(set(graph[u]) & set(graph[v])) for u, v in graph.edges}


def has_gq31_counts(graph: nx.Graph) -> bool:
    """16 vertices, 6-regular, each edge on exactly two triangles."""
    if graph.number_of_nodes() != 16:
        return False
    if any(d != 6 for _, d in graph.degree()):
        return False
    return all(count == 2 for count in edge_triangle_counts(graph).values())


_ROOK_CERTIFICATE: Dict[str, bytes] = {}


def is_gq31(graph: nx.Graph) -> bool:
    if not has_gq31_counts(graph):
        return False
    if 'rook' not in _ROOK_CERTIFICATE:
        _ROOK_CERTIFICATE['rook'] = graph_canonical(rook_graph(4))[1].certificate
    return graph_canonical(nx.Graph(graph.edges))[1].certificate == _ROOK_CERTIFICATE['rook']


# ----------------------------------------------------------------------
# Attachment quadruples
# ----------------------------------------------------------------------

def attached_graph(graph: nx.Graph, parts: Sequence[Sequence[Hashable]]) -> nx.Graph:
    """``graph`` plus one λ vertex joined to every vertex of each part."""
    out = graph.copy()
    for p, part in enumerate(parts):
        node = f"m{p + 1}"
        out.add_node(node, kind='lambda')
        out.add_edges_from((node, v) for v in part)
    return out


def independent_partitions(graph: nx.Graph, size: int) -> List[Tuple[FrozenSet, ...]]:
    """Partitions of the vertex set into independent sets of ``size`` vertices."""
    nodes = list(graph.nodes)
    if size <= 0 or not nodes or len(nodes) % size:
        return []
    blocks = []
    for clique in nx.enumerate_all_cliques(nx.complement(graph)):
        if len(clique) > size:
            break
        if len(clique) == size:
            blocks.append(frozenset(clique))
    by_node = {v: [b for b in blocks if v in b] for v in nodes}

    found: List[Tuple[FrozenSet, ...]] = []

    def cover(left: FrozenSet, chosen: List[FrozenSet]):
        if not left:
            found.append(tuple(sorted(chosen, key=_block_key)))
            return
        pivot = min(left, key=lambda v: (len(by_node[v]), str(v)))
        for block in by_node[pivot]:
            if block <= left:
                cover(left - block, chosen + [block])

    cover(frozenset(nodes), [])
    return sorted(found, key=lambda parts: [_block_key(b) for b in parts])


def _block_key(block: FrozenSet) -> List[str]:
    return sorted(str(v) for v in block)


def attachment_orbits(graph: nx.Graph,
                      partitions: Sequence[Sequence[Sequence[Hashable]]]) -> List[Tuple]:
    """
    One partition per Aut(graph)-orbit.

    Two partitions share an orbit exactly when their attached graphs are
    isomorphic with λ vertices kept apart.
    """
    classes: Dict[bytes, Tuple] = {}
    for parts in partitions:
        classes.setdefault(graph_certificate(attached_graph(graph, parts)), tuple(parts))
    return list(classes.values())


@dataclass(frozen=True)
class GraphShape:
    """Isomorphism class of an adjacency graph."""
    certificate: bytes
    n_vertices: int
    n_edges: int
    dynkin: DynkinShape
    gq31: bool

    @property
    def name(self) -> str:
        if self.gq31:
            return 'GQ(3,1)'
        if self.dynkin.parabolic:
            return self.dynkin.pretty
        return f"graph({self.n_vertices} vertices, {self.n_edges} edges)"

    def sort_key(self) -> Tuple:
        return (-self.n_vertices, self.certificate)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'vertices': self.n_vertices,
            'edges': self.n_edges,
            'dynkin': self.dynkin.label,
            'gq31': self.gq31,
            'certificate': self.certificate.hex(),
        }


def graph_shape(graph: nx.Graph) -> GraphShape:
    return GraphShape(
        certificate=graph_certificate(graph),
        n_vertices=graph.number_of_nodes(),
        n_edges=graph.number_of_edges(),
        dynkin=dynkin_shape(graph),
        gq31=is_gq31(graph),
    )


def to_dot(graph: nx.Graph, name: str = 'G') -> str:
    """DOT text; λ vertices are drawn as boxes."""
    safe = ''.join(ch if ch.isalnum() else '_' for ch in name) or 'G'
    lines = [f"graph {safe} {{"]
    for node in graph.nodes:
        shape = 'box' if graph.nodes[node].get('kind') == 'lambda' else 'ellipse'
        lines.append(f'  "{node}" [shape={shape}];')
    for u, v in sorted(graph.edges, key=lambda e: (str(e[0]), str(e[1]))):
        lines.append(f'  "{u}" -- "{v}";')
    lines.append('}')
    return '\n'.join(lines) + '\n'
