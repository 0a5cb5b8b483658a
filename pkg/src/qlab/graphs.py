"""Commuting graphs of bounded p-elements and Kneser graphs.

Vertices are kept in a canonical sorted order so that every index derived
from a graph (simplices, matrix rows, homology generators) is reproducible.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Optional, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .perm import GroundSet, Permutation, cycle_decomposition, support

UNBOUNDED = None

COMMUTING = "commuting"
KNESER = "kneser"


@dataclass(frozen=True)
class VertexKind:
    """``commuting``: bounded p-elements (``a`` resolved, ``unbounded`` flags a = n//p).
    ``kneser``: size-p subsets, ``a`` unused."""

    name: str
    p: int
    a: int = 0
    unbounded: bool = False


Vertex = Union[Permutation, tuple]


@dataclass(eq=False)
class LabeledGraph:
    ground: GroundSet
    kind: VertexKind
    vertices: list
    edges: np.ndarray  # shape (E, 2), rows (i, j) with i < j, sorted
    _index: dict = field(default=None, repr=False)
    _masks: list = field(default=None, repr=False)
    _supports: list = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def p(self) -> int:
        return self.kind.p

    @property
    def a(self) -> int:
        return self.kind.a

    def __len__(self):
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def index_of(self, v: Vertex) -> int:
        if self._index is None:
            self._index = {key: i for i, key in enumerate(self.vertex_keys())}
        return self._index[_key(v)]

    def has_vertex(self, v: Vertex) -> bool:
        try:
            self.index_of(v)
        except KeyError:
            return False
        return True

    def vertex_keys(self) -> list:
        return [_key(v) for v in self.vertices]

    def neighbor_masks(self) -> list[int]:
        """Adjacency as Python-int bitsets, one per vertex."""
        if self._masks is None:
            nbrs: list[list[int]] = [[] for _ in self.vertices]
            for i, j in self.edges.tolist():
                nbrs[i].append(j)
                nbrs[j].append(i)
            self._masks = [sum(1 << j for j in js) for js in nbrs]
        return self._masks

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.neighbor_masks()[i] >> j & 1)

    def is_clique(self, idx: Sequence[int]) -> bool:
        masks = self.neighbor_masks()
        return all(masks[i] >> j & 1 for i, j in itertools.combinations(idx, 2))

    def support_masks(self) -> list[int]:
        """Labels touched by each vertex, as bitsets over ground positions."""
        if self._supports is None:
            pos = self.ground._index
            if self.kind.name == KNESER:
                self._supports = [sum(1 << pos[x] for x in v) for v in self.vertices]
            else:
                self._supports = [
                    sum(1 << i for i, y in enumerate(v.image) if pos[y] != i) for v in self.vertices
                ]
        return self._supports

    def vertex_support(self, i: int) -> frozenset:
        v = self.vertices[i]
        if self.kind.name == KNESER:
            return frozenset(v)
        return frozenset(support(v).labels)

    def n_components(self) -> int:
        if not self.vertices:
            return 0
        m = len(self.vertices)
        e = self.edges
        adj = coo_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(m, m))
        return int(connected_components(adj, directed=False)[0])

    def vertex_label(self, i: int):
        v = self.vertices[i]
        return str(v) if isinstance(v, Permutation) else list(v)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "a": None if self.kind.unbounded else (self.a if self.kind.name == COMMUTING else None),
            "kind": self.kind.name,
            "vertices": [self.vertex_label(i) for i in range(len(self.vertices))],
            "edges": self.edges.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _key(v: Vertex):
    return v.image if isinstance(v, Permutation) else tuple(v)


def count_bounded_p_elements(n: int, p: int, a: int) -> int:
    """Closed form: sum over c of n! / (p^c c! (n-cp)!)."""
    return sum(
        factorial(n) // (p**c * factorial(c) * factorial(n - c * p))
        for c in range(1, min(a, n // p) + 1)
    )


def _p_block_partitions(labels: tuple, c: int, p: int):
    """Unordered partitions of ``c*p`` labels into ``c`` blocks of size ``p``."""
    if c == 0:
        yield ()
        return
    first, rest = labels[0], labels[1:]
    for others in itertools.combinations(rest, p - 1):
        block = (first,) + others
        remaining = tuple(x for x in rest if x not in others)
        for tail in _p_block_partitions(remaining, c - 1, p):
            yield (block,) + tail


def bounded_p_elements(ground: GroundSet, p: int, a: int) -> list[Permutation]:
    """All products of 1..a disjoint p-cycles on ``ground``, sorted by image tuple."""
    out = []
    labels = ground.labels
    for c in range(1, min(a, len(labels) // p) + 1):
        for supp in itertools.combinations(labels, c * p):
            for blocks in _p_block_partitions(supp, c, p):
                # each block's cycle starts at its minimum; arrange the rest freely
                arrangements = [
                    [(b[0],) + rest for rest in itertools.permutations(b[1:])] for b in blocks
                ]
                for cycles in itertools.product(*arrangements):
                    out.append(Permutation.from_cycles(ground, cycles))
    out.sort(key=lambda f: f.image)
    return out


def _pair_edges(rows: range, test, workers: int) -> np.ndarray:
    """Collect ``(i, j)``, ``i < j``, where ``test(i)`` flags partners ``j > i``."""

    def chunk(block):
        parts = []
        for i in block:
            js = test(i)
            if len(js):
                parts.append(np.column_stack([np.full(len(js), i, dtype=np.int64), js]))
        return np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)

    idx = list(rows)
    if workers <= 1 or len(idx) < 64:
        result = [chunk(idx)]
    else:
        size = max(1, len(idx) // (workers * 8))
        blocks = [idx[s : s + size] for s in range(0, len(idx), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            result = list(pool.map(chunk, blocks))  # map keeps submission order
    edges = np.concatenate(result) if result else np.empty((0, 2), dtype=np.int64)
    return edges.reshape(-1, 2)


def build_commuting_graph(
    ground: GroundSet, p: int, a: Optional[int] = UNBOUNDED, workers: int = 1
) -> LabeledGraph:
    """The commuting graph on products of at most ``a`` disjoint ``p``-cycles of Sym(ground)."""
    n = len(ground)
    unbounded = a is UNBOUNDED
    if unbounded:
        a = n // p
    if a < 1 and not unbounded:
        raise ValueError("a must be positive")
    verts = bounded_p_elements(ground, p, a)
    kind = VertexKind(COMMUTING, p, a, unbounded)
    if not verts:
        return LabeledGraph(ground, kind, [], np.empty((0, 2), dtype=np.int64))

    pos = ground._index
    P = np.array([[pos[y] for y in f.image] for f in verts], dtype=np.int64)

    # vectorised over all later vertices; disjoint supports pass the same test
    def partners(i):
        rest = P[i + 1 :]
        fg = P[i][rest]  # f_i(f_j(x))
        gf = rest[:, P[i]]  # f_j(f_i(x))
        return np.nonzero((fg == gf).all(axis=1))[0] + i + 1

    edges = _pair_edges(range(len(verts)), partners, workers)
    return LabeledGraph(ground, kind, verts, edges)


def build_kneser_graph(ground: GroundSet, p: int, workers: int = 1) -> LabeledGraph:
    """Size-``p`` subsets of ``ground``, adjacent when disjoint."""
    if p < 1:
        raise ValueError("p must be positive")
    verts = list(itertools.combinations(ground.labels, p))
    kind = VertexKind(KNESER, p)
    if not verts:
        return LabeledGraph(ground, kind, [], np.empty((0, 2), dtype=np.int64))
    pos = ground._index
    if len(ground) <= 63:
        masks = np.array([sum(1 << pos[x] for x in v) for v in verts], dtype=np.uint64)

        def partners(i):
            return np.nonzero((masks[i + 1 :] & masks[i]) == 0)[0] + i + 1

    else:
        sets = [frozenset(v) for v in verts]

        def partners(i):
            return np.array(
                [j for j in range(i + 1, len(sets)) if sets[i].isdisjoint(sets[j])], dtype=np.int64
            )

    edges = _pair_edges(range(len(verts)), partners, workers)
    return LabeledGraph(ground, kind, verts, edges)


def max_clique_size(g: LabeledGraph) -> int:
    """Exact maximum clique size by branch and bound over bitsets."""
    masks = g.neighbor_masks()
    m = len(masks)
    if m == 0:
        return 0
    # only neighbours later in the order, so each clique is searched once from its first vertex
    higher = [masks[i] >> (i + 1) << (i + 1) for i in range(m)]
    best = 1

    def expand(size, cand):
        nonlocal best
        if cand == 0:
            if size > best:
                best = size
            return
        if size + cand.bit_count() <= best:
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            expand(size + 1, cand & higher[v])

    for v in range(m):
        if 1 + higher[v].bit_count() > best:
            expand(1, higher[v])
    return best


def matching_count(n: int, k: int) -> int:
    """Number of k-edge matchings of the complete graph K_n."""
    if 2 * k > n:
        return 0
    return factorial(n) // (2**k * factorial(k) * factorial(n - 2 * k))


def kneser_vertex_count(n: int, p: int) -> int:
    return comb(n, p)


def describe_vertex(v: Vertex) -> str:
    if isinstance(v, Permutation):
        return str(v)
    return "{" + " ".join(map(str, v)) + "}"


def cycle_count(v: Permutation) -> int:
    return len(cycle_decomposition(v))
