"""Maps induced by injections of label sets, and the cone null-homotopy certificate.

An injection ``j: S -> T`` relabels every vertex of a complex on ``S`` into
the complex of the same kind on ``T``; that vertex map is simplicial and so
induces chain maps and maps on homology.  If ``|T| - |S| >= p`` there is a
p-cycle on unused labels commuting with everything in the image, so the
image lies in a cone and the induced map on reduced homology vanishes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError
from .graphs import COMMUTING, KNESER, LabeledGraph, build_commuting_graph
from .homology import complex_homology_basis
from .perm import GroundSet, Injection, Permutation, relabel
from .simplicial import CliqueComplex, boundary_matrix
from .snf import smith_normal_form, solve_in_image
from .sparse import SparseIntMatrix

__all__ = [
    "Injection",
    "ChainMap",
    "ConeCertificate",
    "induced_vertex_map",
    "induced_simplicial_map",
    "induced_homology_map",
    "cone_certificate",
    "generator_degree_check",
    "DegreeCheck",
    "HomologyMap",
    "standard_inclusion",
]


def _push_vertex(v, j: Injection):
    if isinstance(v, Permutation):
        return relabel(v, j)
    return tuple(sorted(j(x) for x in v))


def induced_vertex_map(
    j: Injection, source: LabeledGraph, target: LabeledGraph, filtration: bool = False
) -> list[int]:
    """Target index of each relabelled source vertex.

    ``filtration`` permits a target with a larger cycle bound, as for the
    inclusions of the filtration by ``a``.
    """
    if source.kind.name != target.kind.name or source.p != target.p:
        raise ParameterError("source and target complexes are of different kinds")
    if source.kind.name == COMMUTING:
        s, t = source.kind, target.kind
        # unbounded means a = n//p on each side, so only the flag has to agree
        same = s.unbounded == t.unbounded and (s.unbounded or s.a == t.a)
        wider = filtration and (t.unbounded or (not s.unbounded and t.a >= s.a))
        if not (same or wider):
            raise ParameterError("cycle bounds differ: a=%d vs a=%d" % (s.a, t.a))
    if source.ground != j.domain or target.ground != j.codomain:
        raise ParameterError("injection does not match the complexes' label sets")
    return [target.index_of(_push_vertex(v, j)) for v in source.vertices]


def _sort_sign(seq: list[int]) -> tuple[tuple, int]:
    """Sorted tuple and the sign of the sorting permutation."""
    order = sorted(range(len(seq)), key=seq.__getitem__)
    sign = 1
    seen = [False] * len(seq)
    for i in range(len(seq)):
        if seen[i]:
            continue
        length = 0
        x = i
        while not seen[x]:
            seen[x] = True
            x = order[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return tuple(seq[i] for i in order), sign


@dataclass
class ChainMap:
    matrices: dict  # k -> SparseIntMatrix C_k(source) -> C_k(target); k = -1 when reduced

    def __getitem__(self, k: int) -> SparseIntMatrix:
        return self.matrices[k]

    def degrees(self) -> list[int]:
        return sorted(self.matrices)

    def compose(self, first: ChainMap) -> ChainMap:
        """``self ∘ first`` degree-wise."""
        return ChainMap({k: self.matrices[k] @ first.matrices[k] for k in self.degrees() if k in first.matrices})

    def __eq__(self, other):
        return isinstance(other, ChainMap) and self.matrices == other.matrices

    def check_squares(self, source: CliqueComplex, target: CliqueComplex, reduced: bool = True) -> None:
        for k in self.degrees():
            if k < 0 or (k == 0 and not reduced) or k - 1 not in self.matrices:
                continue
            left = boundary_matrix(target, k, reduced) @ self.matrices[k]
            right = self.matrices[k - 1] @ boundary_matrix(source, k, reduced)
            if left != right:
                raise AssertionError("chain map does not commute with d_%d" % k)


def induced_simplicial_map(
    j: Injection, source: CliqueComplex, target: CliqueComplex, reduced: bool = True, filtration: bool = False
) -> ChainMap:
    """Chain maps in every degree stored by the source (and -1 when ``reduced``)."""
    vmap = induced_vertex_map(j, source.graph, target.graph, filtration)
    if target.stored_top < source.stored_top:
        raise ParameterError("target stores fewer dimensions than the source")
    mats = {}
    if reduced:
        mats[-1] = SparseIntMatrix.identity(1)
    for k in range(source.stored_top + 1):
        cols = []
        for s in source.simplices(k):
            image, sign = _sort_sign([vmap[v] for v in s])
            try:
                cols.append({target.index(k, image): sign})
            except KeyError:
                raise AssertionError("image of %r is not a simplex of the target" % (s,)) from None
        mats[k] = SparseIntMatrix(target.n_simplices(k), source.n_simplices(k), cols)
    cm = ChainMap(mats)
    cm.check_squares(source, target, reduced)
    return cm


@dataclass
class HomologyMap:
    matrix: list  # rows: target generators, columns: source generators
    is_zero: bool
    source_generators: int
    target_generators: int


def induced_homology_map(
    j: Injection,
    source: CliqueComplex,
    target: CliqueComplex,
    k: int,
    reduced: bool = True,
    *,
    with_matrix: bool = True,
    target_snf=None,
) -> HomologyMap:
    """Push source generators of H_k forward and test each image against the target boundaries.

    ``with_matrix=False`` skips the target homology basis and only decides
    whether the map is zero.  ``target_snf`` may carry a precomputed Smith
    form (with transforms) of the target's d_{k+1}.
    """
    if k + 1 > target.stored_top or k > source.max_dim:
        raise ParameterError("degree %d needs target boundaries up to %d" % (k, k + 1))
    cm = induced_simplicial_map(j, source, target, reduced)
    src_basis = complex_homology_basis(source, k, reduced)
    tgt_basis = complex_homology_basis(target, k, reduced) if with_matrix else None
    d_next = boundary_matrix(target, k + 1, reduced)
    if len(src_basis) and target_snf is None:
        target_snf = smith_normal_form(d_next, with_transforms=True)
    columns = []
    zero = True
    for z in src_basis.generators():
        image = cm[k].matvec(z)
        bounded, _ = solve_in_image(d_next, image, target_snf)
        zero = zero and bounded
        if tgt_basis is not None:
            coords = tgt_basis.coordinates(image)
            if bounded != (not any(coords)):
                raise AssertionError("boundary test and homology coordinates disagree")
            columns.append(coords)
    n_t = len(tgt_basis) if tgt_basis is not None else None
    matrix = [[col[r] for col in columns] for r in range(n_t)] if n_t is not None else None
    return HomologyMap(matrix, zero, len(src_basis), n_t)


@dataclass
class ConeCertificate:
    p: int
    a: int
    S: tuple
    T: tuple
    B: tuple
    sigma: str
    simplices_checked: int
    ok: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "a": self.a,
            "S": list(self.S),
            "T": list(self.T),
            "B": list(self.B),
            "sigma": self.sigma,
            "simplices_checked": self.simplices_checked,
            "ok": self.ok,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def cone_certificate(
    j: Injection, source: CliqueComplex, p: int, a: Optional[int], target: Optional[LabeledGraph] = None
) -> ConeCertificate:
    """Check that adding one p-cycle on unused labels to any image simplex gives a target simplex."""
    gap = len(j.codomain) - len(j.domain)
    if gap < p:
        raise ParameterError("gap smaller than p: |T| - |S| = %d < %d" % (gap, p))
    g = source.graph
    if g.kind.name != COMMUTING or g.p != p or (a is not None and g.a != a and not g.kind.unbounded):
        raise ParameterError("source complex parameters do not match p=%s, a=%s" % (p, a))
    if target is None:
        target = build_commuting_graph(j.codomain, p, None if g.kind.unbounded else g.a)
    used = set(j.images)
    B = tuple(x for x in j.codomain if x not in used)[:p]
    sigma = Permutation.from_cycles(j.codomain, [B])
    vmap = induced_vertex_map(j, g, target)
    ok = target.has_vertex(sigma)
    checked = 0
    if ok:
        s_idx = target.index_of(sigma)
        s_mask = target.neighbor_masks()[s_idx]
        for k in range(source.stored_top + 1):
            for s in source.simplices(k):
                image = [vmap[v] for v in s]
                checked += 1
                if s_idx in image or not all(s_mask >> v & 1 for v in image) or not target.is_clique(image):
                    ok = False
                    break
            if not ok:
                break
    return ConeCertificate(
        p, g.a, j.domain.labels, j.codomain.labels, B, str(sigma), checked, ok
    )


@dataclass
class DegreeCheck:
    ok: bool
    max_support: Optional[int]
    bound: int
    simplices: int

    @property
    def vacuous(self) -> bool:
        return self.simplices == 0


def generator_degree_check(cx: CliqueComplex, k: int, p: int, a: int) -> DegreeCheck:
    """Every k-simplex should move at most (k+1)ap labels."""
    bound = (k + 1) * a * p
    simplices = cx.simplices(k) if k <= cx.stored_top else []
    masks = cx.graph.support_masks()
    top = None
    for s in simplices:
        m = 0
        for v in s:
            m |= masks[v]
        size = m.bit_count()
        if top is None or size > top:
            top = size
    return DegreeCheck(top is None or top <= bound, top, bound, len(simplices))


def kneser_kind(g: LabeledGraph) -> bool:
    return g.kind.name == KNESER


def standard_inclusion(m: int, n: int) -> Injection:
    return Injection.inclusion(GroundSet.range(m), GroundSet.range(n))
