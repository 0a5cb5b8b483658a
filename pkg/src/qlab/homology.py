"""Integral (reduced) homology of chain segments C_{k+1} -> C_k -> C_{k-1}."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import ParameterError
from .simplicial import CliqueComplex, boundary_matrix
from .snf import DEFAULT_BUDGET, Budget, rank, smith_normal_form, unit_reduce
from .sparse import SparseIntMatrix


@dataclass(frozen=True, order=True)
class HomologyGroup:
    """Z^betti + Z/d_1 + ... + Z/d_m with d_1 | d_2 | ... and every d_i >= 2."""

    betti: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(self.torsion)
        if self.betti < 0 or any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError("not in invariant-factor form: %r" % (t,))
        object.__setattr__(self, "torsion", t)

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"betti": self.betti, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else "Z^%d" % self.betti)
        parts += ["Z/%d" % d for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _check_segment(d_k: SparseIntMatrix, d_k1: SparseIntMatrix) -> None:
    if d_k.n_cols != d_k1.n_rows:
        raise ParameterError("boundary shapes do not compose: %s, %s" % (d_k.shape, d_k1.shape))
    if not (d_k @ d_k1).is_zero():
        raise ParameterError("boundary maps do not compose to zero")


def homology(
    d_k: SparseIntMatrix,
    d_k1: SparseIntMatrix,
    *,
    coreduce: bool = False,
    budget: Budget = DEFAULT_BUDGET,
) -> HomologyGroup:
    """ker(d_k) / im(d_k1); torsion from the Smith form of ``d_k1``.

    With ``coreduce``, unit pivots are first cancelled in both maps (each
    cancelled pair also deletes a row or column of the other map), and the
    homology is read off the smaller residual segment.
    """
    _check_segment(d_k, d_k1)
    if coreduce:
        d_k, d_k1 = coreduce_segment(d_k, d_k1, budget)
    dim = d_k.n_cols
    r_k = rank(d_k, budget)
    snf = smith_normal_form(d_k1, budget=budget)
    return HomologyGroup(dim - r_k - snf.rank, snf.torsion)


def coreduce_segment(d_k: SparseIntMatrix, d_k1: SparseIntMatrix, budget: Budget = DEFAULT_BUDGET):
    """Cancel unit pairs across C_{k+1}/C_k and C_k/C_{k-1}; homology in degree k is unchanged."""
    _, upper, upper_rows, _ = unit_reduce(d_k1, budget)
    d_k = d_k.select_cols(upper_rows)  # cells of C_k paired upward disappear from d_k
    _, lower, _, lower_cols = unit_reduce(d_k, budget)
    upper = upper.select_rows(lower_cols)  # and those paired downward leave d_{k+1}
    return lower, upper


@dataclass
class HomologyBasis:
    """Cycle representatives in C_k: free generators, and torsion generators with orders."""

    free: list = field(default_factory=list)
    torsion: list = field(default_factory=list)  # (vector, order)
    _project: Optional[SparseIntMatrix] = field(default=None, repr=False)
    _smith_U: Optional[SparseIntMatrix] = field(default=None, repr=False)
    _factors: tuple = field(default=(), repr=False)

    def __len__(self):
        return len(self.free) + len(self.torsion)

    def generators(self) -> list:
        return [v for v, _ in self.torsion] + list(self.free)

    def group(self) -> HomologyGroup:
        return HomologyGroup(len(self.free), tuple(d for _, d in self.torsion))

    def coordinates(self, z) -> list[int]:
        """Class of the cycle ``z`` in the order of :meth:`generators` (torsion entries reduced mod order)."""
        if self._project is None:
            return []
        c = self._smith_U.matvec(self._project.matvec(list(z)))
        r = len(self._factors)
        coords = [c[t] % d for t, d in enumerate(self._factors) if d > 1]
        return coords + c[r:]


def homology_basis(
    d_k: SparseIntMatrix, d_k1: SparseIntMatrix, budget: Budget = DEFAULT_BUDGET
) -> HomologyBasis:
    """Explicit generators of ker(d_k)/im(d_k1).

    The last columns of the right transform of d_k form a Z-basis K of the
    cycles.  Writing the boundaries in that basis gives a matrix B with
    d_k1 = K B; the Smith form of B then splits the quotient, and the columns
    of K times the inverse left transform of B are the generators.
    """
    _check_segment(d_k, d_k1)
    s_k = smith_normal_form(d_k, with_transforms=True, budget=budget)
    r = s_k.rank
    n = d_k.n_cols
    kernel_idx = list(range(r, n))
    coords = (s_k.V_inv @ d_k1).select_rows(kernel_idx)  # B
    s_b = smith_normal_form(coords, with_transforms=True, budget=budget)
    K = s_k.V.select_cols(kernel_idx)
    gens = K @ s_b.U_inv  # column t is the cycle for the t-th Smith coordinate
    basis = HomologyBasis(_project=s_k.V_inv.select_rows(kernel_idx), _smith_U=s_b.U, _factors=s_b.invariant_factors)
    for t in range(len(kernel_idx)):
        vec = [0] * n
        for i, v in gens.column(t).items():
            vec[i] = v
        if t < s_b.rank:
            d = s_b.invariant_factors[t]
            if d > 1:
                basis.torsion.append((vec, d))
        else:
            basis.free.append(vec)
    for vec in basis.generators():
        if any(d_k.matvec(vec)):
            raise AssertionError("homology generator is not a cycle")
    return basis


def complex_homology(
    cx: CliqueComplex,
    k: int,
    reduced: bool = True,
    *,
    coreduce: bool = False,
    budget: Budget = DEFAULT_BUDGET,
) -> HomologyGroup:
    """H_k (reduced by default) of a clique complex; needs k <= cx.max_dim."""
    if not 0 <= k <= cx.max_dim:
        raise ParameterError("degree %d outside 0..max_dim=%d" % (k, cx.max_dim))
    if not cx.simplices(0):
        return HomologyGroup(0)
    return homology(
        boundary_matrix(cx, k, reduced), boundary_matrix(cx, k + 1, reduced), coreduce=coreduce, budget=budget
    )


def complex_homology_basis(cx: CliqueComplex, k: int, reduced: bool = True, budget=DEFAULT_BUDGET):
    if not 0 <= k <= cx.max_dim:
        raise ParameterError("degree %d outside 0..max_dim=%d" % (k, cx.max_dim))
    if not cx.simplices(0):
        return HomologyBasis()
    return homology_basis(boundary_matrix(cx, k, reduced), boundary_matrix(cx, k + 1, reduced), budget)


def reduced_h0_from_components(n_components: int) -> HomologyGroup:
    """Reduced H_0 is free of rank (components - 1); zero for the empty complex."""
    return HomologyGroup(max(n_components - 1, 0))


def euler_defect(cx: CliqueComplex, groups: dict, reduced: bool = True) -> int:
    """Sum over stored k <= max_dim of (-1)^k (dim C_k - betti_k) minus the truncation term.

    For a chain complex cut after C_{d+1}, the alternating sum of chain ranks
    minus Betti numbers equals (-1)^d rank(d_{d+1}); a consistent set of
    groups gives zero.
    """
    d = cx.max_dim
    if not cx.simplices(0):
        return 0
    total = -1 if reduced else 0  # C_{-1} = Z, whose reduced homology is zero
    for k in range(d + 1):
        total += (-1) ** k * (cx.n_simplices(k) - groups[k].betti)
    top = rank(boundary_matrix(cx, d + 1, reduced))
    return total - (-1) ** d * top
