"""Clique complexes K(graph) up to a dimension cap, with signed boundary matrices.

A k-simplex is a (k+1)-clique, stored as its strictly increasing tuple of
vertex indices; that order fixes the orientation.  Each dimension's simplex
list is sorted lexicographically, so simplex indices are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExceeded, ParameterError
from .graphs import COMMUTING, LabeledGraph
from .perm import GroundSet
from .sparse import SparseIntMatrix

DEFAULT_MAX_SIMPLICES = 5_000_000

Simplex = tuple


@dataclass(eq=False)
class CliqueComplex:
    graph: LabeledGraph
    max_dim: int
    skeleton: list  # skeleton[k] = sorted k-simplices, k = 0 .. max_dim + 1
    _lookup: dict = field(default_factory=dict, repr=False)

    def simplices(self, k: int) -> list:
        if 0 <= k < len(self.skeleton):
            return self.skeleton[k]
        return []

    def n_simplices(self, k: int) -> int:
        if k == -1:
            return 1
        return len(self.simplices(k))

    def index(self, k: int, s: Simplex) -> int:
        table = self._lookup.get(k)
        if table is None:
            table = self._lookup[k] = {t: i for i, t in enumerate(self.simplices(k))}
        return table[s]

    def contains(self, s: Simplex) -> bool:
        k = len(s) - 1
        try:
            self.index(k, tuple(s))
        except KeyError:
            return False
        return True

    @property
    def stored_top(self) -> int:
        return len(self.skeleton) - 1

    def dimension(self) -> Optional[int]:
        """Largest k with a stored k-simplex, or None for the empty complex."""
        dims = [k for k, s in enumerate(self.skeleton) if s]
        return dims[-1] if dims else None

    def is_truncated(self) -> bool:
        """True when cliques larger than the stored range may exist."""
        return bool(self.skeleton[-1]) if self.skeleton else False

    def header(self) -> str:
        kind = self.graph.kind
        a = "kneser" if kind.name != COMMUTING else ("unbounded" if kind.unbounded else kind.a)
        return "qlab-complex v1 %d %d %s %d" % (self.graph.n, kind.p, a, self.max_dim)

    def dumps(self) -> str:
        lines = [self.header()]
        for k, simplices in enumerate(self.skeleton):
            lines += ["%d: %s" % (k, " ".join(map(str, s))) for s in simplices]
        return "\n".join(lines) + "\n"


def _enumerate_cliques(graph: LabeledGraph, max_size: int, budget: int) -> list[list]:
    masks = graph.neighbor_masks()
    m = len(masks)
    higher = [masks[i] >> (i + 1) << (i + 1) for i in range(m)]
    out: list[list] = [[] for _ in range(max_size)]
    count = 0

    # depth-first in ascending vertex order visits each dimension lexicographically
    def extend(clique, cand):
        nonlocal count
        out[len(clique) - 1].append(tuple(clique))
        count += 1
        if count > budget:
            raise BudgetExceeded(
                "simplex ceiling %d" % budget,
                counts_per_dim=[len(x) for x in out],
            )
        if len(clique) == max_size:
            return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            clique.append(v)
            extend(clique, cand & higher[v])
            clique.pop()

    for v in range(m):
        extend([v], higher[v])
    return out


def clique_complex(
    graph: LabeledGraph, max_dim: int, max_simplices: int = DEFAULT_MAX_SIMPLICES
) -> CliqueComplex:
    """All cliques of size 1 .. max_dim + 2 (the extra layer feeds the top boundary map)."""
    if max_dim < 0:
        raise ParameterError("max_dim must be nonnegative")
    skeleton = _enumerate_cliques(graph, max_dim + 2, max_simplices)
    return CliqueComplex(graph, max_dim, skeleton)


def boundary_matrix(cx: CliqueComplex, k: int, reduced: bool = True) -> SparseIntMatrix:
    """Matrix of d_k : C_k -> C_{k-1}; for k = 0 and ``reduced``, the augmentation row."""
    if not 0 <= k <= cx.stored_top:
        raise ParameterError("boundary degree %d outside stored range 0..%d" % (k, cx.stored_top))
    simplices = cx.simplices(k)
    if k == 0:
        n_rows = 1 if reduced else 0
        cols = [{0: 1} if reduced else {} for _ in simplices]
        return SparseIntMatrix(n_rows, len(simplices), cols)
    faces = cx.simplices(k - 1)
    lookup = {s: i for i, s in enumerate(faces)}
    cols = []
    for s in simplices:
        col = {}
        for i in range(len(s)):
            col[lookup[s[:i] + s[i + 1 :]]] = -1 if i % 2 else 1
        cols.append(col)
    return SparseIntMatrix(len(faces), len(simplices), cols)


def simplex_support(cx: CliqueComplex, s: Simplex) -> GroundSet:
    """Labels moved by the simplex's permutations (for Kneser complexes: union of the subsets)."""
    labels = set()
    for v in s:
        labels |= cx.graph.vertex_support(v)
    return GroundSet.of(labels)


@dataclass
class ChainData:
    ranks: dict  # k -> dim C_k, including k = -1 when reduced
    boundaries: dict  # k -> SparseIntMatrix d_k

    def check_squares(self) -> None:
        for k in sorted(self.boundaries):
            if k + 1 in self.boundaries:
                prod = self.boundaries[k] @ self.boundaries[k + 1]
                if not prod.is_zero():
                    raise AssertionError("d_%d d_%d != 0" % (k, k + 1))


def chain_data(cx: CliqueComplex, reduced: bool = True) -> ChainData:
    ranks = {k: len(s) for k, s in enumerate(cx.skeleton)}
    if reduced:
        ranks[-1] = 1
    boundaries = {k: boundary_matrix(cx, k, reduced) for k in range(cx.stored_top + 1)}
    return ChainData(ranks, boundaries)


def parse_complex(text: str, graph: LabeledGraph) -> CliqueComplex:
    """Inverse of :meth:`CliqueComplex.dumps` against an already-built graph."""
    lines = text.strip("\n").split("\n")
    head = lines[0].split()
    if head[:2] != ["qlab-complex", "v1"] or len(head) != 6:
        raise ValueError("not a qlab-complex v1 file")
    max_dim = int(head[5])
    skeleton: list[list] = [[] for _ in range(max_dim + 2)]
    for ln in lines[1:]:
        k, _, body = ln.partition(":")
        s = tuple(int(x) for x in body.split())
        if len(s) != int(k) + 1:
            raise ValueError("malformed simplex line %r" % ln)
        skeleton[int(k)].append(s)
    cx = CliqueComplex(graph, max_dim, skeleton)
    if cx.header() != lines[0].strip():
        raise ValueError("complex header does not match graph parameters")
    return cx
