#!/usr/bin/env python3
"""
Admissible line sets
Search spaces over Vec⁺(Σ, η), the orbit search that lists admissible sets up
to symmetry, the bound bnd by branch and bound, and line configurations with
their adjacency and Fano graphs.

A set V is admissible when u·v ∈ {q + 2, q + 3} for all u ≠ v in V; the
pair meets (its lines intersect) when u·v = q + 3.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import GraphMatcher

from ..bounds.elkies import ElkiesInput, elkies_bound, normalized_taus
from ..bounds.profiles import SeriesProfile, get_profile
from ..core.enumeration import (
    DualVector,
    VecQuery,
    compatible_with,
    enumerate_vectors,
    pairing,
    pairing_table,
    window_norm,
)
from ..core.exact import as_fraction, format_rational, rational_rank
from ..core.lattice import DiscClass, Lattice, discriminant_group
from ..tseries.fixtures import N_POINTS, builtin_config, point_coords, subset_coords
from .graphs import (
    CanonicalForm,
    GraphShape,
    adjacency_graph,
    canonical_labelling,
    graph_certificate,
    graph_shape,
)

logger = logging.getLogger(__name__)

STRATEGIES = ('exhaustive-maximal', 'size-at-least', 'contains-K4', 'triangle-free')

# context vertex colours in certificates
_ETA, _LAMBDA, _UNIT, _ANCHOR = 0, 1, 2, 3


@dataclass(frozen=True)
class Strategy:
    kind: str = 'exhaustive-maximal'
    min_size: int = 1

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise ValueError(f"Unknown strategy: {self.kind} "
                             f"(expected one of {', '.join(STRATEGIES)})")
        if self.min_size < 1:
            raise ValueError(f"min_size must be positive, got {self.min_size}")

    @classmethod
    def parse(cls, text: str, min_size: Optional[int] = None) -> 'Strategy':
        """Accepts 'triangle-free', 'size-at-least:16' or 'size-at-least(16)'."""
        match = re.match(r'^\s*([A-Za-z0-9-]+)\s*(?:[:(]\s*(\d+)\s*\)?)?\s*$', text or '')
        if not match:
            raise ValueError(f"Cannot parse strategy {text!r}")
        size = int(match.group(2)) if match.group(2) else 1
        if min_size is not None:
            size = min_size
        return cls(match.group(1), size)

    @property
    def label(self) -> str:
        return self.kind if self.min_size <= 1 else f"{self.kind}:{self.min_size}"


def _bits(row) -> int:
    out = 0
    for i in np.nonzero(row)[0]:
        out |= 1 << int(i)
    return out


def _indices(bits: int) -> List[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def _to_integers(values: Sequence[Sequence[Fraction]], den: int) -> np.ndarray:
    return np.array([[int(x * den) for x in row] for row in values], dtype=np.int64).reshape(
        len(values), len(values[0]) if len(values) else 0
    )


# ----------------------------------------------------------------------
# Search spaces
# ----------------------------------------------------------------------

class SearchSpace:
    """
    Candidate vectors with their compatibility and adjacency tables, the
    context used by configuration certificates, and the incidence data of
    the λ-vectors.

    The certificate context is the λ-vectors when there are any, otherwise
    the signed frame vectors ±e_k and ±anchors of the A and D summands.
    """

    def __init__(self, lattice: Lattice, q, vectors: Sequence[DualVector],
                 lambdas: Sequence[DualVector] = (), lambda_meet=None, name: str = ''):
        self.lattice = lattice
        self.q = as_fraction(q)
        self.vectors = list(vectors)
        self.lambdas = list(lambdas)
        self.lambda_meet = as_fraction(lambda_meet) if lambda_meet is not None else None
        self.name = name or lattice.name
        self.allowed = (self.q + 2, self.q + 3)

        n = len(self.vectors)
        table = pairing_table(self.vectors)
        self.table = table
        self.compat = table.isin(self.allowed)
        self.adjacent = table.mask(self.q + 3)
        np.fill_diagonal(self.compat, False)
        np.fill_diagonal(self.adjacent, False)
        self.compat_bits = [_bits(self.compat[i]) for i in range(n)]
        self.adjacent_bits = [_bits(self.adjacent[i]) for i in range(n)]
        self.all_bits = (1 << n) - 1

        self._build_context()
        self._build_incidence()
        self._weyl: Optional[List[List[int]]] = None
        self._caps: Optional[List[int]] = None
        self._elkies: Dict[int, Optional[int]] = {}

    def __len__(self) -> int:
        return len(self.vectors)

    # -- certificates -------------------------------------------------

    def _frame_context(self) -> Tuple[List[Tuple[Fraction, ...]], List[int]]:
        frame = self.lattice.frame
        if frame is None:
            return [], []
        vectors, colors = [], []
        for k in range(frame.width):
            for sign in (1, -1):
                vectors.append(tuple(Fraction(sign if j == k else 0) for j in range(frame.width)))
                colors.append(_UNIT)
        for anchor in frame.anchors:
            for sign in (1, -1):
                vectors.append(tuple(sign * x for x in anchor))
                colors.append(_ANCHOR)
        return vectors, colors

    def _build_context(self):
        n = len(self.vectors)
        if self.lambdas:
            lam = pairing_table(self.vectors, self.lambdas) if n else None
            vc = [[lam.value(i, j) for j in range(len(self.lambdas))] for i in range(n)]
            cc = [[pairing(a, b) for b in self.lambdas] for a in self.lambdas]
            colors = [_LAMBDA] * len(self.lambdas)
        else:
            context, colors = self._frame_context()
            frame = self.lattice.frame
            vc = []
            for v in self.vectors:
                if not context:
                    vc.append([])
                    continue
                image = [sum(v.coords[i] * frame.rows[i][k] for i in range(self.lattice.rank))
                         for k in range(frame.width)]
                vc.append([-sum(a * b for a, b in zip(image, f)) for f in context])
            cc = [[-sum(a * b for a, b in zip(f, g)) for g in context] for f in context]
        values = [x for row in vc for x in row] + [x for row in cc for x in row]
        den = lcm(self.table.denominator, *(x.denominator for x in values))
        self.context_colors = list(colors)
        self.weights = self.table.numerators * (den // self.table.denominator)
        c = len(colors)
        self.context_weights = _to_integers(vc, den) if n and c else np.zeros((n, c), np.int64)
        self.context_gram = _to_integers(cc, den) if c else np.zeros((0, 0), np.int64)

    def canonical(self, members: Sequence[int]) -> CanonicalForm:
        """Canonical form of the set together with the context vectors."""
        idx = list(members)
        k, c = len(idx), len(self.context_colors)
        matrix = np.empty((k + c, k + c), dtype=np.int64)
        matrix[:k, :k] = self.weights[np.ix_(idx, idx)]
        if c:
            matrix[:k, k:] = self.context_weights[idx]
            matrix[k:, :k] = self.context_weights[idx].T
            matrix[k:, k:] = self.context_gram
        return canonical_labelling(matrix, [_ETA] * k + self.context_colors)

    def certificate(self, members: Sequence[int]) -> bytes:
        return self.canonical(members).certificate

    def candidate_orbits(self, members: Sequence[int], cands: Sequence[int],
                         generators: Sequence[Tuple[int, ...]] = ()) -> List[List[int]]:
        """
        ``cands`` grouped so that every candidate of a group extends
        ``members`` to a set with the same certificate.

        ``generators`` permute the members followed by the context, as in
        the CanonicalForm of ``members``; candidates whose pairings with
        members and context map onto each other share a group. Groups are
        ordered by their first candidate.
        """
        cands = list(cands)
        if not cands:
            return []
        idx = list(members)
        rows = np.ascontiguousarray(np.concatenate(
            [self.weights[np.ix_(cands, idx)], self.context_weights[cands]], axis=1))
        parent = list(range(len(cands)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: int, b: int):
            a, b = find(a), find(b)
            if a != b:
                parent[max(a, b)] = min(a, b)

        by_row: Dict[bytes, int] = {}
        for pos in range(len(cands)):
            first = by_row.setdefault(rows[pos].tobytes(), pos)
            union(pos, first)
        for g in generators:
            perm = np.asarray(g, dtype=np.int64)
            image = np.empty_like(rows)
            image[:, perm] = rows
            for pos in range(len(cands)):
                other = by_row.get(image[pos].tobytes())
                if other is not None:
                    union(pos, other)

        groups: Dict[int, List[int]] = {}
        for pos, c in enumerate(cands):
            groups.setdefault(find(pos), []).append(c)
        return list(groups.values())

    # -- incidence with λ-vectors -------------------------------------

    def _build_incidence(self):
        self.meets: Optional[np.ndarray] = None
        self.meet_count = 0
        self.meet_bits: List[int] = []
        if not self.lambdas or self.lambda_meet is None or not self.vectors:
            return
        meets = pairing_table(self.vectors, self.lambdas).mask(self.lambda_meet)
        counts = set(meets.sum(axis=1).tolist())
        if len(counts) != 1 or min(counts) < 1:
            logger.debug(f"{self.name}: λ-incidence counts {sorted(counts)}, no incidence bound")
            return
        self.meets = meets
        self.meet_count = counts.pop()
        self.meet_bits = [_bits(meets[:, p]) for p in range(len(self.lambdas))]

    @property
    def caps(self) -> List[int]:
        """cap_p: the largest admissible set among the vectors meeting λ_p."""
        if self.meets is None:
            return []
        if self._caps is None:
            orbit_of = self._lambda_orbits()
            known: Dict[int, int] = {}
            caps = []
            for p, bits in enumerate(self.meet_bits):
                root = orbit_of[p]
                if root not in known:
                    known[root] = max_clique(self, bits, use_incidence=False,
                                             use_symmetry=False).value
                caps.append(known[root])
            self._caps = caps
            logger.info(f"{self.name}: λ caps {caps}, each vector meets {self.meet_count}")
        return self._caps

    def incidence_bound(self, member_bits: int, candidate_bits: int) -> Optional[int]:
        if self.meets is None:
            return None
        caps = self.caps
        total = 0
        for p, bits in enumerate(self.meet_bits):
            have = (member_bits & bits).bit_count() + (candidate_bits & bits).bit_count()
            total += min(caps[p], have)
        return total // self.meet_count

    # -- symmetry -----------------------------------------------------

    def _reflections(self, vectors: Sequence[DualVector]) -> List[List[int]]:
        gram, rank = self.lattice.gram, self.lattice.rank
        index = {v.coords: i for i, v in enumerate(vectors)}
        perms = []
        for r in range(rank):
            if gram[r][r] != -2:
                continue
            perm = []
            for v in vectors:
                coords = list(v.coords)
                coords[r] += sum(gram[r][j] * v.coords[j] for j in range(rank))
                image = index.get(tuple(coords))
                if image is None:
                    break
                perm.append(image)
            if len(perm) == len(vectors):
                perms.append(perm)
            else:
                logger.debug(f"{self.name}: reflection in basis vector {r} leaves the pool")
        return perms

    @property
    def weyl(self) -> List[List[int]]:
        if self._weyl is None:
            self._weyl = self._reflections(self.vectors)
        return self._weyl

    @staticmethod
    def _orbits(size: int, perms: Sequence[Sequence[int]]) -> List[int]:
        parent = list(range(size))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for perm in perms:
            for i, j in enumerate(perm):
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return [find(i) for i in range(size)]

    def vertex_orbits(self) -> List[List[int]]:
        """Orbits of the Weyl group on the candidates, by smallest index."""
        roots = self._orbits(len(self.vectors), self.weyl)
        orbits: Dict[int, List[int]] = {}
        for i, root in enumerate(roots):
            orbits.setdefault(root, []).append(i)
        return [orbits[k] for k in sorted(orbits)]

    def _lambda_orbits(self) -> List[int]:
        return self._orbits(len(self.lambdas), self._reflections(self.lambdas))

    # -- sets ---------------------------------------------------------

    def candidates(self, members: Sequence[int]) -> List[int]:
        bits = self.all_bits
        for i in members:
            bits &= self.compat_bits[i]
        return _indices(bits)

    def universal(self) -> List[int]:
        """Vectors compatible with every other candidate (ℓ× for J*)."""
        return [i for i, bits in enumerate(self.compat_bits)
                if bits | (1 << i) == self.all_bits]

    def elkies_cap(self, members: Sequence[int]) -> Optional[int]:
        key = _bits_of(members)
        if key not in self._elkies:
            self._elkies[key] = elkies_cap([self.vectors[i] for i in members], self.q,
                                           self.lambdas)
        return self._elkies[key]

    def subspace(self, members: Sequence[int], name: str = '') -> 'SearchSpace':
        return SearchSpace(self.lattice, self.q, [self.vectors[i] for i in members],
                           self.lambdas, self.lambda_meet, name or self.name)

    def vectors_of(self, members: Sequence[int]) -> List[DualVector]:
        return [self.vectors[i] for i in members]

    def validate(self, members: Sequence[int]) -> List[str]:
        """Re-check the admissibility condition by direct pairing."""
        issues = []
        chosen = self.vectors_of(members)
        for a in range(len(chosen)):
            for b in range(a + 1, len(chosen)):
                value = pairing(chosen[a], chosen[b])
                if value not in self.allowed:
                    issues.append(f"{self.name}: pairing {value} between members "
                                  f"{members[a]} and {members[b]}")
        return issues

    def graph_of(self, members: Sequence[int]) -> nx.Graph:
        idx = list(members)
        return adjacency_graph(self.adjacent[np.ix_(idx, idx)],
                               labels=[f"l{k + 1}" for k in range(len(idx))])

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'lattice': self.lattice.name,
            'q': format_rational(self.q),
            'vectors': len(self.vectors),
            'lambdas': len(self.lambdas),
            'context': len(self.context_colors),
        }


def _bits_of(members: Sequence[int]) -> int:
    out = 0
    for i in members:
        out |= 1 << int(i)
    return out


def elkies_cap(vectors: Sequence[DualVector], q, lambdas: Sequence[DualVector] = ()) -> Optional[int]:
    """
    ⌊Elkies⌋ for the span of ``vectors``. When all of them pair alike with a
    λ-vector, project to its complement first; the norm becomes
    q − c²/λ² and the dimension drops.
    """
    if not vectors:
        return 0
    q = as_fraction(q)
    coords = [list(v.coords) for v in vectors]
    for w in lambdas:
        values = {pairing(v, w) for v in vectors}
        if len(values) == 1:
            c = values.pop()
            factor = c / w.norm
            coords = [[x - factor * y for x, y in zip(row, w.coords)] for row in coords]
            q = q - c * c / w.norm
            break
    if q >= 0:
        return None
    n = rational_rank(coords)
    tau1, tau2 = normalized_taus(q)
    try:
        return elkies_bound(ElkiesInput(n, tau1, tau2)).floor
    except ValueError as e:
        logger.debug(f"No Elkies cap: {e}")
        return None


def search_space(lattice: Lattice, cls: DiscClass, q=None, lambdas: Sequence[DualVector] = (),
                 lambda_meet=None, name: str = '') -> SearchSpace:
    """vec(Σ, γ, q) as a search space; q defaults to the Vec⁺ window."""
    q = window_norm(cls, -4) if q is None else as_fraction(q)
    vectors = enumerate_vectors(VecQuery(lattice, cls, q))
    return SearchSpace(lattice, q, vectors, lambdas, lambda_meet, name)


def profile_space(profile: SeriesProfile, drop_universal: bool = False) -> SearchSpace:
    """
    The η-vectors of a series compatible with its λ-vectors. With
    ``drop_universal`` the vectors compatible with everything (ℓ×) are left out.
    """
    vectors = profile.eta_vectors()
    lambdas = profile.lambda_vectors()
    if profile.eta_lambda is not None and lambdas:
        vectors = compatible_with(vectors, lambdas, [profile.eta_lambda, profile.eta_meet])
    space = SearchSpace(profile.sigma(), profile.q0, vectors, lambdas, profile.eta_meet,
                        name=profile.series)
    if drop_universal:
        universal = set(space.universal())
        if universal:
            keep = [i for i in range(len(space)) if i not in universal]
            space = space.subspace(keep)
    logger.info(f"{profile.title}: {len(space)} candidate η-vectors, {len(lambdas)} λ-vectors")
    return space


# ----------------------------------------------------------------------
# Branch and bound
# ----------------------------------------------------------------------

@dataclass
class BoundResult:
    value: int
    witness: Tuple[int, ...] = ()
    upper: Optional[int] = None
    universal: int = 0
    nodes: int = 0

    @property
    def reached_upper(self) -> bool:
        return self.upper is not None and self.value >= self.upper

    def to_dict(self) -> dict:
        return {
            'value': self.value,
            'witness': list(self.witness),
            'upper': self.upper,
            'universal': self.universal,
            'nodes': self.nodes,
        }


class _Reached(Exception):
    pass


def _colour_sort(pool: int, adj: Sequence[int]) -> Tuple[List[int], List[int]]:
    # greedy colouring of the compatibility graph: colour classes hold no compatible pair
    order, bounds = [], []
    uncoloured, colour = pool, 0
    while uncoloured:
        colour += 1
        free = uncoloured
        while free:
            low = free & -free
            v = low.bit_length() - 1
            order.append(v)
            bounds.append(colour)
            uncoloured ^= low
            free &= ~(adj[v] | low)
    return order, bounds


def colour_bound(space: SearchSpace, pool: int) -> int:
    bounds = _colour_sort(pool, space.compat_bits)[1]
    return bounds[-1] if bounds else 0


def max_clique(space: SearchSpace, pool: Optional[int] = None, use_incidence: bool = True,
               use_symmetry: bool = True) -> BoundResult:
    """
    The largest admissible subset of ``pool`` (a bitmask, default all).

    Vectors compatible with everything are taken first. The rest is searched
    with greedy-colouring bounds, the incidence bound and the Elkies cap; the
    search stops as soon as the cap is attained. With ``use_symmetry`` only
    Weyl-orbit representatives are tried as first vertex, which needs an
    invariant pool.
    """
    pool = space.all_bits if pool is None else pool
    members = _indices(pool)
    if not members:
        return BoundResult(0, (), 0)
    universal = [i for i in members if (space.compat_bits[i] | (1 << i)) & pool == pool]
    rest_bits = pool & ~_bits_of(universal)
    rest = _indices(rest_bits)
    adj = space.compat_bits

    upper = space.elkies_cap(rest) if rest else 0
    limit = len(rest) if upper is None else min(len(rest), upper)
    incidence = use_incidence and space.meets is not None and not universal
    if incidence:
        root = space.incidence_bound(0, rest_bits)
        limit = min(limit, root)
        upper = root if upper is None else min(upper, root)

    best: List = [0, ()]
    nodes = [0]

    def record(clique: List[int]):
        if len(clique) > best[0]:
            best[0], best[1] = len(clique), tuple(sorted(clique))
            logger.debug(f"{space.name}: clique of size {best[0]}")
            if best[0] >= limit:
                raise _Reached

    def expand(clique: List[int], clique_bits: int, candidates: int):
        nodes[0] += 1
        if incidence and space.incidence_bound(clique_bits, candidates) <= best[0]:
            return
        order, bounds = _colour_sort(candidates, adj)
        for k in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[k] <= best[0]:
                return
            v = order[k]
            bit = 1 << v
            clique.append(v)
            narrowed = candidates & adj[v]
            if narrowed:
                expand(clique, clique_bits | bit, narrowed)
            else:
                record(clique)
            clique.pop()
            candidates &= ~bit

    try:
        if limit > 0:
            if use_symmetry and space.weyl:
                removed = 0
                for orbit in space.vertex_orbits():
                    orbit = [i for i in orbit if rest_bits >> i & 1]
                    if not orbit:
                        continue
                    first = orbit[0]
                    candidates = adj[first] & rest_bits & ~removed
                    if candidates:
                        expand([first], 1 << first, candidates)
                    else:
                        record([first])
                    removed |= _bits_of(orbit)
            else:
                expand([], 0, rest_bits)
    except _Reached:
        pass

    value = len(universal) + best[0]
    logger.info(f"{space.name}: bnd = {value} ({len(universal)} universal, cap {upper}, "
                f"{nodes[0]} nodes)")
    return BoundResult(value, tuple(sorted(universal + list(best[1]))),
                       None if upper is None else upper + len(universal),
                       len(universal), nodes[0])


def bound_search(lattice: Lattice, cls: DiscClass, q=None, lambdas: Sequence[DualVector] = (),
                 lambda_meet=None) -> BoundResult:
    return max_clique(search_space(lattice, cls, q, lambdas, lambda_meet))


def bnd(lattice: Lattice, cls: DiscClass, q=None, lambdas: Sequence[DualVector] = (),
        lambda_meet=None) -> int:
    """Maximal size of an admissible subset of vec(Σ, γ, q); 0 when that set is empty."""
    return bound_search(lattice, cls, q, lambdas, lambda_meet).value


def profile_bnd(profile: SeriesProfile) -> int:
    """bnd over the λ-compatible η-vectors of a series (ℓ× included)."""
    return max_clique(profile_space(profile)).value


# ----------------------------------------------------------------------
# Orbit search
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibleSet:
    members: Tuple[int, ...]
    certificate: bytes
    maximal: bool

    @property
    def size(self) -> int:
        return len(self.members)

    def sort_key(self) -> Tuple:
        return (-self.size, self.certificate)

    def to_dict(self) -> dict:
        return {
            'members': list(self.members),
            'size': self.size,
            'maximal': self.maximal,
            'certificate': self.certificate.hex(),
        }


Level = Dict[bytes, Tuple[int, ...]]


class OrbitSearch:
    """
    Level-wise generation of admissible sets, one representative per
    certificate. Level k + 1 is every one-vector extension of a level-k
    representative, deduplicated by certificate.
    """

    def __init__(self, space: SearchSpace, strategy: Strategy):
        self.space = space
        self.strategy = strategy
        self._cap = space.elkies_cap(list(range(len(space)))) if len(space) else 0

    def seeds(self) -> Level:
        level: Level = {}
        for i in range(len(self.space)):
            level.setdefault(self.space.certificate([i]), (i,))
        if not level:
            logger.warning(f"{self.space.name}: no candidate vectors, nothing to search")
        return level

    def _candidates(self, members: Tuple[int, ...]) -> List[int]:
        space, kind = self.space, self.strategy.kind
        cands = space.candidates(members)
        if kind == 'contains-K4' and len(members) < 4:
            cands = [c for c in cands if all(space.adjacent[c, m] for m in members)]
        elif kind == 'triangle-free' and len(members) > 1 and cands:
            idx = list(members)
            inner = space.adjacent[np.ix_(idx, idx)].astype(np.int64)
            touch = space.adjacent[np.ix_(cands, idx)].astype(np.int64)
            closes = ((touch @ inner) * touch).sum(axis=1) > 0
            cands = [c for c, bad in zip(cands, closes) if not bad]
        return cands

    def upper_bound(self, members: Tuple[int, ...], cands: Sequence[int]) -> int:
        space = self.space
        pool = _bits_of(cands)
        extra = min(len(cands), colour_bound(space, pool))
        total = len(members) + extra
        incidence = space.incidence_bound(_bits_of(members), pool)
        if incidence is not None:
            total = min(total, incidence)
        if self._cap is not None:
            total = min(total, self._cap)
        return total

    def expand(self, members: Tuple[int, ...]) -> Tuple[Optional[AdmissibleSet], Level]:
        """The set itself if the strategy emits it, and its deduplicated children."""
        kind, min_size = self.strategy.kind, self.strategy.min_size
        size = len(members)
        cands = self._candidates(members)
        maximal = not cands and not (kind == 'contains-K4' and size < 4)
        grow = bool(cands) and self.upper_bound(members, cands) >= max(min_size, size + 1)
        emit = size >= min_size and (kind == 'size-at-least' or maximal)
        if not grow and not emit:
            return None, {}
        form = self.space.canonical(members)
        emitted = AdmissibleSet(members, form.certificate, maximal) if emit else None

        children: Level = {}
        if grow:
            # one labelling per orbit of candidates under the set's automorphisms
            for group in self.space.candidate_orbits(members, cands, form.generators):
                child = tuple(sorted(members + (group[0],)))
                children.setdefault(self.space.certificate(child), child)
        return emitted, children

    def step(self, level: Level) -> Tuple[List[AdmissibleSet], Level]:
        emitted: List[AdmissibleSet] = []
        nxt: Level = {}
        for members in level.values():
            found, children = self.expand(members)
            if found is not None:
                emitted.append(found)
            for cert, child in children.items():
                nxt.setdefault(cert, child)
        return emitted, nxt

    def check(self, found: AdmissibleSet):
        issues = self.space.validate(found.members)
        if issues:
            raise RuntimeError(f"Search emitted a non-admissible set: {issues[0]}")

    def run(self) -> Iterator[AdmissibleSet]:
        level = self.seeds()
        depth = 1
        total = 0
        while level:
            emitted, level = self.step(level)
            for found in sorted(emitted, key=AdmissibleSet.sort_key):
                self.check(found)
                total += 1
                yield found
            logger.info(f"{self.space.name} [{self.strategy.label}] level {depth}: "
                        f"{len(emitted)} emitted, {len(level)} orbits next")
            depth += 1
        if total == 0 and self.strategy.kind == 'contains-K4':
            logger.warning(f"{self.space.name}: no admissible set contains a K4")


def admissible_sets(lattice: Lattice, eta_class: DiscClass, strategy='exhaustive-maximal',
                    lambdas: Sequence[DualVector] = (), lambda_meet=None) -> Iterator[AdmissibleSet]:
    """Admissible subsets of Vec⁺(Σ, η) matching ``strategy``, one per orbit."""
    if not isinstance(strategy, Strategy):
        strategy = Strategy.parse(strategy)
    space = search_space(lattice, eta_class, None, lambdas, lambda_meet)
    return OrbitSearch(space, strategy).run()


def count_embeddings(space: SearchSpace, target: nx.Graph) -> int:
    """Orbits of admissible sets in ``space`` whose adjacency graph is ``target``."""
    size = target.number_of_nodes()
    if size == 0 or size > len(space):
        return 0
    shape = nx.Graph()
    shape.add_nodes_from(target.nodes, kind='eta')
    shape.add_edges_from(target.edges)
    wanted = graph_certificate(shape)
    max_degree = max((d for _, d in shape.degree()), default=0)

    level: Level = OrbitSearch(space, Strategy()).seeds()
    for _ in range(size - 1):
        nxt: Level = {}
        rejected = set()
        for members in level.values():
            generators = space.canonical(members).generators
            for group in space.candidate_orbits(members, space.candidates(members), generators):
                child = tuple(sorted(members + (group[0],)))
                cert = space.certificate(child)
                if cert in nxt or cert in rejected:
                    continue
                graph = space.graph_of(child)
                if max((d for _, d in graph.degree()), default=0) > max_degree or \
                        not GraphMatcher(shape, graph).subgraph_is_isomorphic():
                    rejected.add(cert)
                    continue
                nxt[cert] = child
        level = nxt
        if not level:
            return 0
    count = sum(1 for members in level.values()
                if graph_certificate(space.graph_of(members)) == wanted)
    logger.info(f"{space.name}: {count} orbits of embeddings of a {size}-vertex graph")
    return count


def embedding_orbits(shape: nx.Graph, lattice: Lattice, cls: DiscClass,
                     lambdas: Sequence[DualVector] = (), lambda_meet=None) -> int:
    return count_embeddings(search_space(lattice, cls, None, lambdas, lambda_meet), shape)


# ----------------------------------------------------------------------
# Configurations and shapes
# ----------------------------------------------------------------------

@dataclass
class LineConfiguration:
    """Images of the (−2)-lines (η) and (−1)-lines (λ) in Σ∨."""
    ambient: Lattice
    eta_vectors: List[DualVector]
    lambda_vectors: List[DualVector] = field(default_factory=list)
    q0: Fraction = Fraction(-9, 4)
    q1: Optional[Fraction] = None
    eta_meet: Fraction = Fraction(3, 4)
    name: str = ''

    def violations(self, eta_class: Optional[DiscClass] = None,
                   lambda_class: Optional[DiscClass] = None) -> List[str]:
        issues = []
        group = discriminant_group(self.ambient)
        for kind, vectors, norm, cls in (('η', self.eta_vectors, self.q0, eta_class),
                                         ('λ', self.lambda_vectors, self.q1, lambda_class)):
            if len(set(v.coords for v in vectors)) != len(vectors):
                issues.append(f"{kind}-vectors are not pairwise distinct")
            for i, v in enumerate(vectors):
                if v.lattice_name != self.ambient.name:
                    issues.append(f"{kind}{i + 1} lives in {v.lattice_name}")
                    continue
                if norm is not None and v.norm != norm:
                    issues.append(f"{kind}{i + 1} has norm {v.norm}, expected {norm}")
                if cls is not None and group.coordinates(v.coords) != cls.coords:
                    issues.append(f"{kind}{i + 1} is outside the {kind} class")
        allowed = (self.q0 + 2, self.q0 + 3)
        for a in range(len(self.eta_vectors)):
            for b in range(a + 1, len(self.eta_vectors)):
                value = pairing(self.eta_vectors[a], self.eta_vectors[b])
                if value not in allowed:
                    issues.append(f"η{a + 1}·η{b + 1} = {value} is not in {{q0+2, q0+3}}")
        return issues

    @property
    def size(self) -> int:
        return len(self.eta_vectors)

    def adjacency_graph(self) -> nx.Graph:
        return vector_graph(self.eta_vectors)

    def attachments(self) -> List[Tuple[int, ...]]:
        """For each λ-vector, the η-vectors it meets."""
        if not self.lambda_vectors or not self.eta_vectors:
            return [() for _ in self.lambda_vectors]
        meets = pairing_table(self.lambda_vectors, self.eta_vectors).mask(self.eta_meet)
        return [tuple(int(j) for j in np.nonzero(row)[0]) for row in meets]

    def fano_graph(self) -> nx.Graph:
        """(−2)- and (−1)-lines with an edge for every pair of intersecting lines."""
        graph = self.adjacency_graph()
        for p, attached in enumerate(self.attachments()):
            node = f"m{p + 1}"
            graph.add_node(node, kind='lambda')
            graph.add_edges_from((node, f"l{j + 1}") for j in attached)
        return graph

    def attachment_invariant(self, count: int = 4) -> bool:
        """Every λ-vector meets exactly ``count`` pairwise disjoint (−2)-lines."""
        adjacent = self.adjacency_graph()
        for attached in self.attachments():
            if len(attached) != count:
                return False
            if any(adjacent.has_edge(f"l{a + 1}", f"l{b + 1}")
                   for i, a in enumerate(attached) for b in attached[i + 1:]):
                return False
        return True

    def attachment_class(self) -> bytes:
        """Certificate of the line graph with λ vertices coloured apart: its Aut-orbit class."""
        return graph_certificate(self.fano_graph())

    def shape(self) -> GraphShape:
        return graph_shape(self.adjacency_graph())

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'ambient': self.ambient.name,
            'q0': format_rational(self.q0),
            'q1': format_rational(self.q1) if self.q1 is not None else None,
            'eta': [v.to_dict() for v in self.eta_vectors],
            'lambda': [v.to_dict() for v in self.lambda_vectors],
            'shape': self.shape().to_dict(),
        }

    @classmethod
    def from_space(cls, space: SearchSpace, members: Sequence[int],
                   profile: Optional[SeriesProfile] = None, name: str = '') -> 'LineConfiguration':
        return cls(
            ambient=space.lattice,
            eta_vectors=space.vectors_of(members),
            lambda_vectors=list(space.lambdas),
            q0=space.q,
            q1=profile.q1 if profile is not None else None,
            eta_meet=profile.eta_meet if profile is not None else space.q + 3,
            name=name,
        )


def vector_graph(vectors: Sequence[DualVector]) -> nx.Graph:
    vectors = list(vectors)
    if not vectors:
        return nx.Graph()
    adjacent = pairing_table(vectors).mask(vectors[0].norm + 3)
    return adjacency_graph(adjacent, labels=[f"l{k + 1}" for k in range(len(vectors))])


@dataclass
class ShapeClass:
    shape: GraphShape
    representatives: List[Tuple[DualVector, ...]] = field(default_factory=list)
    count: int = 0

    def to_dict(self) -> dict:
        return {
            'shape': self.shape.to_dict(),
            'count': self.count,
            'sizes': sorted({len(r) for r in self.representatives}, reverse=True),
        }


def classify(sets: Sequence[Sequence[DualVector]]) -> List[ShapeClass]:
    """Group vector sets by the isomorphism type of their adjacency graphs."""
    groups: Dict[bytes, ShapeClass] = {}
    ambient = None
    for vectors in sets:
        vectors = list(getattr(vectors, 'eta_vectors', vectors))
        if vectors:
            if ambient is not None and vectors[0].lattice_name != ambient:
                raise ValueError(f"Sets over different lattices: {ambient} vs "
                                 f"{vectors[0].lattice_name}")
            ambient = vectors[0].lattice_name
        graph = vector_graph(vectors)
        cert = graph_certificate(graph)
        if cert not in groups:
            groups[cert] = ShapeClass(graph_shape(graph))
        groups[cert].representatives.append(tuple(vectors))
        groups[cert].count += 1
    return sorted(groups.values(), key=lambda g: g.shape.sort_key())


# ----------------------------------------------------------------------
# T-series fixtures as configurations
# ----------------------------------------------------------------------

def fixture_configuration(name: str) -> LineConfiguration:
    """A built-in T-series incidence matrix as η- and λ-vectors in A11."""
    profile = get_profile('T')
    sigma = profile.sigma()
    matrix = builtin_config(name)
    eta = [DualVector.from_coords(sigma, subset_coords(col)) for col in matrix.columns]
    lam = [DualVector.from_coords(sigma, point_coords(i)) for i in range(N_POINTS)]
    group = discriminant_group(sigma)
    if group.coordinates(lam[0].coords) != profile.lambda_class().coords:
        eta, lam = [-v for v in eta], [-v for v in lam]
    if group.coordinates(eta[0].coords) != profile.eta_class().coords:
        raise RuntimeError(f"{matrix.name}: subset vectors miss the η class of {sigma.name}")
    return LineConfiguration(sigma, eta, lam, profile.q0, profile.q1, profile.eta_meet,
                             name=matrix.name)
