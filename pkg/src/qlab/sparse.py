"""Exact sparse integer matrices, stored column-wise."""

from __future__ import annotations

from typing import Iterable, Sequence


class SparseIntMatrix:
    """Immutable sparse matrix over Z.

    Columns are dicts ``row -> value`` holding only nonzero Python ints, so
    entries never overflow.
    """

    __slots__ = ("n_rows", "n_cols", "_cols")

    def __init__(self, n_rows: int, n_cols: int, cols: Sequence[dict] | None = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("negative shape")
        self.n_rows = n_rows
        self.n_cols = n_cols
        if cols is None:
            cols = [{} for _ in range(n_cols)]
        if len(cols) != n_cols:
            raise ValueError("column count mismatch")
        clean = []
        for col in cols:
            c = {int(r): int(v) for r, v in col.items() if v}
            if c and (min(c) < 0 or max(c) >= n_rows):
                raise ValueError("row index out of range")
            clean.append(c)
        self._cols = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_entries(cls, n_rows: int, n_cols: int, entries: Iterable[tuple[int, int, int]]):
        cols = [{} for _ in range(n_cols)]
        for r, c, v in entries:
            if not 0 <= c < n_cols:
                raise ValueError("column index out of range")
            if r in cols[c]:
                raise ValueError("duplicate entry (%d, %d)" % (r, c))
            cols[c][r] = v
        return cls(n_rows, n_cols, cols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], n_cols: int | None = None):
        n_rows = len(rows)
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(n_cols)]
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = v
        return cls(n_rows, n_cols, cols)

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int):
        return cls(n_rows, n_cols)

    @classmethod
    def from_columns(cls, n_rows: int, columns: Sequence[Sequence[int]]):
        """Build from dense column vectors."""
        return cls(n_rows, len(columns), [{i: v for i, v in enumerate(col) if v} for col in columns])

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def column(self, j: int) -> dict:
        return dict(self._cols[j])

    def columns(self) -> list[dict]:
        return [dict(c) for c in self._cols]

    def rows(self) -> list[dict]:
        rows = [{} for _ in range(self.n_rows)]
        for j, col in enumerate(self._cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def __getitem__(self, ij):
        i, j = ij
        return self._cols[j].get(i, 0)

    def entries(self) -> list[tuple[int, int, int]]:
        """Nonzero ``(row, col, value)`` triplets sorted by ``(col, row)``."""
        return [(i, j, col[i]) for j, col in enumerate(self._cols) for i in sorted(col)]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for j, col in enumerate(self._cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not any(self._cols)

    def max_bits(self) -> int:
        return max((abs(v).bit_length() for c in self._cols for v in c.values()), default=0)

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> SparseIntMatrix:
        return SparseIntMatrix(self.n_cols, self.n_rows, self.rows())

    def matvec(self, x: Sequence[int]) -> list[int]:
        if len(x) != self.n_cols:
            raise ValueError("dimension mismatch")
        out = [0] * self.n_rows
        for j, col in enumerate(self._cols):
            xj = x[j]
            if xj:
                for i, v in col.items():
                    out[i] += v * xj
        return out

    def __matmul__(self, other: SparseIntMatrix) -> SparseIntMatrix:
        if self.n_cols != other.n_rows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        mine = self._cols
        cols = []
        for col in other._cols:
            acc: dict[int, int] = {}
            for k, w in col.items():
                for i, v in mine[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            cols.append({i: v for i, v in acc.items() if v})
        return SparseIntMatrix(self.n_rows, other.n_cols, cols)

    def __neg__(self):
        return SparseIntMatrix(self.n_rows, self.n_cols, [{i: -v for i, v in c.items()} for c in self._cols])

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        return hash((self.shape, tuple(self.entries())))

    def permute(self, row_perm: Sequence[int] | None = None, col_perm: Sequence[int] | None = None):
        """Row ``i`` moves to ``row_perm[i]``; column ``j`` moves to ``col_perm[j]``."""
        cols = [None] * self.n_cols
        for j, col in enumerate(self._cols):
            jj = col_perm[j] if col_perm is not None else j
            cols[jj] = {row_perm[i]: v for i, v in col.items()} if row_perm is not None else dict(col)
        return SparseIntMatrix(self.n_rows, self.n_cols, cols)

    def select_rows(self, keep: Sequence[int]) -> SparseIntMatrix:
        pos = {r: i for i, r in enumerate(keep)}
        return SparseIntMatrix(
            len(keep), self.n_cols, [{pos[i]: v for i, v in c.items() if i in pos} for c in self._cols]
        )

    def select_cols(self, keep: Sequence[int]) -> SparseIntMatrix:
        return SparseIntMatrix(self.n_rows, len(keep), [dict(self._cols[j]) for j in keep])

    def __repr__(self):
        return "SparseIntMatrix(%d x %d, nnz=%d)" % (self.n_rows, self.n_cols, self.nnz)

    # -- text format ------------------------------------------------------

    def dumps(self) -> str:
        entries = self.entries()
        lines = ["qlab-matrix v1 %d %d %d" % (self.n_rows, self.n_cols, len(entries))]
        lines += ["%d %d %d" % e for e in entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> SparseIntMatrix:
        lines = text.strip("\n").split("\n")
        head = lines[0].split()
        if len(head) != 5 or head[:2] != ["qlab-matrix", "v1"]:
            raise ValueError("not a qlab-matrix v1 file")
        n_rows, n_cols, n_entries = map(int, head[2:])
        body = [ln for ln in lines[1:] if ln.strip()]
        if len(body) != n_entries:
            raise ValueError("entry count mismatch: header %d, found %d" % (n_entries, len(body)))
        entries = []
        for ln in body:
            r, c, v = ln.split()
            entries.append((int(r), int(c), int(v)))
        if any(v == 0 for _, _, v in entries):
            raise ValueError("zero entry stored")
        return cls.from_entries(n_rows, n_cols, entries)
