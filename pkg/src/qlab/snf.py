"""Smith normal form and integer solvability for sparse integer matrices.

Elimination runs in two phases.  First every available unit pivot is
eliminated, choosing among units by a Markowitz-style cost (fewest entries
in the pivot column, then in the pivot row) to keep fill-in low.  Whatever
survives is reduced by the classical smallest-absolute-value pivot rule
with remainder steps, which also enforces the divisibility chain.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

from .errors import BudgetExceeded
from .sparse import SparseIntMatrix


@dataclass(frozen=True)
class Budget:
    max_entries: int = 6_000_000
    max_bits: int = 4096


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with ``D`` diagonal, entries ``invariant_factors`` then zeros."""

    invariant_factors: tuple[int, ...]
    rank: int
    shape: tuple[int, int]
    U: Optional[SparseIntMatrix] = field(default=None, repr=False)
    V: Optional[SparseIntMatrix] = field(default=None, repr=False)
    U_inv: Optional[SparseIntMatrix] = field(default=None, repr=False)
    V_inv: Optional[SparseIntMatrix] = field(default=None, repr=False)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)

    def diagonal(self) -> SparseIntMatrix:
        n_rows, n_cols = self.shape
        cols = [{} for _ in range(n_cols)]
        for t, d in enumerate(self.invariant_factors):
            cols[t][t] = d
        return SparseIntMatrix(n_rows, n_cols, cols)


def _axpy(dst: dict, src: dict, m: int) -> None:
    """``dst += m * src`` on sparse dict vectors."""
    for k, v in src.items():
        w = dst.get(k, 0) + m * v
        if w:
            dst[k] = w
        else:
            del dst[k]


class _Elimination:
    """Mutable working copy of a matrix plus (optionally) the four transform matrices."""

    def __init__(self, A: SparseIntMatrix, transforms: bool, budget: Budget):
        self.n_rows, self.n_cols = A.shape
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for j, col in enumerate(A.columns()):
            if col:
                self.cols[j] = set(col)
                for i, v in col.items():
                    self.rows.setdefault(i, {})[j] = v
        self.nnz = A.nnz
        self.budget = budget
        self._limit = 1 << budget.max_bits
        self.pivots: list[tuple[int, int, int]] = []
        self.pivot_rows: set[int] = set()
        self.pivot_cols: set[int] = set()
        self.transforms = transforms
        if transforms:
            # U and V_inv are acted on by row operations, U_inv and V by column operations
            self.U = [{i: 1} for i in range(self.n_rows)]  # rows of U
            self.U_inv = [{i: 1} for i in range(self.n_rows)]  # columns of U^-1
            self.V = [{j: 1} for j in range(self.n_cols)]  # columns of V
            self.V_inv = [{j: 1} for j in range(self.n_cols)]  # rows of V^-1

    # -- elementary operations -------------------------------------------

    def _check_budget(self):
        if self.nnz > self.budget.max_entries:
            raise BudgetExceeded(
                "entry ceiling %d" % self.budget.max_entries,
                shape="%dx%d" % (self.n_rows, self.n_cols),
                pivots_done=len(self.pivots),
                entries=self.nnz,
            )

    def _too_big(self, w):
        raise BudgetExceeded(
            "bit-size ceiling %d" % self.budget.max_bits,
            shape="%dx%d" % (self.n_rows, self.n_cols),
            pivots_done=len(self.pivots),
            bits=abs(w).bit_length(),
        )

    def add_row(self, dst: int, src: int, m: int) -> None:
        """row[dst] += m * row[src]"""
        if not m:
            return
        rd = self.rows.get(dst)
        if rd is None:
            rd = self.rows[dst] = {}
        cols = self.cols
        lim = self._limit
        for c, v in self.rows[src].items():
            w = rd.get(c, 0) + m * v
            if w:
                if c not in rd:
                    cols[c].add(dst)
                    self.nnz += 1
                if w >= lim or w <= -lim:
                    self._too_big(w)
                rd[c] = w
            else:
                del rd[c]
                cols[c].discard(dst)
                self.nnz -= 1
        if not rd:
            del self.rows[dst]
        if self.transforms:
            _axpy(self.U[dst], self.U[src], m)
            _axpy(self.U_inv[src], self.U_inv[dst], -m)

    def add_col(self, dst: int, src: int, m: int) -> None:
        """col[dst] += m * col[src]"""
        if not m:
            return
        lim = self._limit
        cd = self.cols.get(dst)
        if cd is None:
            cd = self.cols[dst] = set()
        for r in list(self.cols.get(src, ())):
            row = self.rows[r]
            w = row.get(dst, 0) + m * row[src]
            if w:
                if dst not in row:
                    cd.add(r)
                    self.nnz += 1
                if w >= lim or w <= -lim:
                    self._too_big(w)
                row[dst] = w
            else:
                del row[dst]
                cd.discard(r)
                self.nnz -= 1
        if not cd:
            del self.cols[dst]
        if self.transforms:
            _axpy(self.V[dst], self.V[src], m)
            _axpy(self.V_inv[src], self.V_inv[dst], -m)

    def _retire(self, i: int, j: int, d: int) -> None:
        """Column ``j`` holds only the pivot; clear row ``i`` by column operations and drop both."""
        row = self.rows.pop(i)
        for c, v in row.items():
            s = self.cols[c]
            s.discard(i)
            if not s:
                del self.cols[c]
            if c != j and self.transforms:
                q = v // d
                _axpy(self.V[c], self.V[j], -q)
                _axpy(self.V_inv[j], self.V_inv[c], q)
        self.nnz -= len(row)
        self.pivots.append((i, j, d))
        self.pivot_rows.add(i)
        self.pivot_cols.add(j)

    def eliminate_unit(self, i: int, j: int) -> None:
        d = self.rows[i][j]
        for r in list(self.cols[j]):
            if r != i:
                self.add_row(r, i, -self.rows[r][j] * d)  # d is its own inverse
        self._retire(i, j, d)
        self._check_budget()

    # -- phase 1 ----------------------------------------------------------

    def unit_phase(self) -> None:
        rows, cols = self.rows, self.cols
        pending = [(len(s), j) for j, s in cols.items()]
        heapq.heapify(pending)
        while pending:
            stalled = []
            progress = False
            while pending:
                size, j = heapq.heappop(pending)
                s = cols.get(j)
                if not s:
                    continue
                if len(s) != size:
                    heapq.heappush(pending, (len(s), j))
                    continue
                best = None
                for r in s:
                    v = rows[r][j]
                    if v == 1 or v == -1:
                        key = (len(rows[r]), r)
                        if best is None or key < best:
                            best = key
                if best is None:
                    stalled.append(j)
                    continue
                self.eliminate_unit(best[1], j)
                progress = True
            if not progress:
                break
            pending = [(len(cols[j]), j) for j in stalled if j in cols]
            heapq.heapify(pending)

    # -- phase 2 ----------------------------------------------------------

    def _min_entry(self):
        best = None
        for i, row in self.rows.items():
            for j, v in row.items():
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
        return best[1], best[2]

    def general_phase(self) -> None:
        while self.rows:
            i, j = self._min_entry()
            while True:
                d = self.rows[i][j]
                for r in list(self.cols[j]):
                    if r != i:
                        self.add_row(r, i, -(self.rows[r][j] // d))
                if len(self.cols[j]) > 1:
                    break  # a remainder survived; it is smaller than |d|
                for c in [c for c in self.rows[i] if c != j]:
                    self.add_col(c, j, -(self.rows[i][c] // d))
                if len(self.rows[i]) > 1:
                    break
                bad = self._non_multiple(d)
                if bad is None:
                    self._retire(i, j, d)
                    self._check_budget()
                    break
                # bring an entry not divisible by d into the pivot row, then reduce again
                self.add_row(i, bad, 1)
                self._check_budget()

    def _non_multiple(self, d: int):
        for r, row in self.rows.items():
            for v in row.values():
                if v % d:
                    return r
        return None

    # -- results ----------------------------------------------------------

    def residual(self) -> tuple[SparseIntMatrix, list[int], list[int]]:
        """The not-yet-pivoted block with its original row and column labels."""
        keep_r = [i for i in range(self.n_rows) if i not in self.pivot_rows]
        keep_c = [j for j in range(self.n_cols) if j not in self.pivot_cols]
        rpos = {r: t for t, r in enumerate(keep_r)}
        cols = []
        for j in keep_c:
            cols.append({rpos[r]: self.rows[r][j] for r in self.cols.get(j, ())})
        return SparseIntMatrix(len(keep_r), len(keep_c), cols), keep_r, keep_c

    def result(self) -> SNFResult:
        # phase 1 pivots are units, phase 2 pivots come out in divisibility order
        factors = tuple(abs(d) for _, _, d in self.pivots)
        shape = (self.n_rows, self.n_cols)
        if not self.transforms:
            return SNFResult(factors, len(factors), shape)
        for i, _, d in self.pivots:
            if d < 0:
                self.U[i] = {k: -v for k, v in self.U[i].items()}
                self.U_inv[i] = {k: -v for k, v in self.U_inv[i].items()}
        row_order = [i for i, _, _ in self.pivots] + [i for i in range(self.n_rows) if i not in self.pivot_rows]
        col_order = [j for _, j, _ in self.pivots] + [j for j in range(self.n_cols) if j not in self.pivot_cols]
        U = SparseIntMatrix(self.n_rows, self.n_rows, _transpose([self.U[i] for i in row_order], self.n_rows))
        U_inv = SparseIntMatrix(self.n_rows, self.n_rows, [self.U_inv[i] for i in row_order])
        V = SparseIntMatrix(self.n_cols, self.n_cols, [self.V[j] for j in col_order])
        V_inv = SparseIntMatrix(self.n_cols, self.n_cols, _transpose([self.V_inv[j] for j in col_order], self.n_cols))
        return SNFResult(factors, len(factors), shape, U, V, U_inv, V_inv)


def _transpose(rows: Sequence[dict], n_cols: int) -> list[dict]:
    cols = [{} for _ in range(n_cols)]
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols[j][i] = v
    return cols


def smith_normal_form(
    A: SparseIntMatrix, with_transforms: bool = False, budget: Budget = DEFAULT_BUDGET
) -> SNFResult:
    """Smith normal form of ``A``; with transforms, ``U @ A @ V`` is the diagonal."""
    if A.nnz > budget.max_entries:
        raise BudgetExceeded("entry ceiling %d" % budget.max_entries, shape="%dx%d" % A.shape, entries=A.nnz)
    if A.max_bits() > budget.max_bits:
        raise BudgetExceeded("bit-size ceiling %d" % budget.max_bits, bits=A.max_bits())
    work = _Elimination(A, with_transforms, budget)
    work.unit_phase()
    work.general_phase()
    return work.result()


def unit_reduce(A: SparseIntMatrix, budget: Budget = DEFAULT_BUDGET):
    """Eliminate all unit pivots; return ``(count, residual, kept_rows, kept_cols)``."""
    work = _Elimination(A, False, budget)
    work.unit_phase()
    residual, keep_r, keep_c = work.residual()
    return len(work.pivots), residual, keep_r, keep_c


def rank(A: SparseIntMatrix, budget: Budget = DEFAULT_BUDGET) -> int:
    """Rank over Q by unit elimination followed by fraction-free elimination."""
    count, residual, _, _ = unit_reduce(A, budget)
    rows = [r for r in residual.rows() if r]
    lim = 1 << budget.max_bits
    while rows:
        rows.sort(key=len)
        piv = rows.pop(0)
        j = min(piv)
        d = piv[j]
        count += 1
        nxt = []
        for row in rows:
            c = row.get(j, 0)
            if c:
                new = {k: d * v for k, v in row.items()}
                _axpy(new, piv, -c)
                if new:
                    g = 0
                    for v in new.values():
                        g = gcd(g, v)
                    new = {k: v // g for k, v in new.items()}
                    if any(v >= lim or v <= -lim for v in new.values()):
                        raise BudgetExceeded("bit-size ceiling %d" % budget.max_bits)
                    nxt.append(new)
            else:
                nxt.append(row)
        rows = nxt
    return count


def solve_in_image(
    A: SparseIntMatrix, z: Sequence[int], snf: Optional[SNFResult] = None
) -> tuple[bool, Optional[list[int]]]:
    """Decide whether ``A x = z`` has an integer solution; return a verified witness if so."""
    if len(z) != A.n_rows:
        raise ValueError("dimension mismatch: %d rows, vector of length %d" % (A.n_rows, len(z)))
    if not any(z):
        return True, [0] * A.n_cols
    if snf is None or snf.U is None:
        snf = smith_normal_form(A, with_transforms=True)
    w = snf.U.matvec(list(z))
    y = [0] * A.n_cols
    for t, d in enumerate(snf.invariant_factors):
        if w[t] % d:
            return False, None
        y[t] = w[t] // d
    if any(w[snf.rank :]):
        return False, None
    x = snf.V.matvec(y)
    if A.matvec(x) != list(z):
        raise AssertionError("integer solve produced an invalid witness")
    return True, x


def determinantal_divisors_factors(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors from gcds of all i x i minors (small dense matrices only)."""
    from itertools import combinations

    m = len(rows)
    n = len(rows[0]) if m else 0
    factors = []
    prev = 1
    for size in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), size):
            for cs in combinations(range(n), size):
                g = gcd(g, _det([[rows[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return tuple(factors)


def _det(M: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    M = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]
