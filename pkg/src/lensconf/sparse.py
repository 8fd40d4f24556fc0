"""Sparse matrices with exact entries.

Entries live in a dict keyed by (row, col); zeros are never stored.
Column access is the common pattern (boundary of simplex j sits in
column j), so a column-index cache is kept alongside.
"""

from __future__ import annotations

from .rings import ZZ, ring_from_token


class SparseMatrix:
    def __init__(self, rows, cols, ring=ZZ, entries=None):
        self.rows = rows
        self.cols = cols
        self.ring = ring
        self.data = {}
        if entries:
            for (i, j), v in entries.items():
                self[i, j] = v

    def __getitem__(self, key):
        return self.data.get(key, self.ring.zero())

    def __setitem__(self, key, value):
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry {key} outside {self.rows}x{self.cols}")
        value = self.ring.normalize(value)
        if self.ring.iszero(value):
            self.data.pop(key, None)
        else:
            self.data[key] = value

    @property
    def nnz(self):
        return len(self.data)

    def copy(self):
        m = SparseMatrix(self.rows, self.cols, self.ring)
        m.data = dict(self.data)
        return m

    @classmethod
    def identity(cls, n, ring=ZZ):
        m = cls(n, n, ring)
        one = ring.one()
        for i in range(n):
            m.data[(i, i)] = one
        return m

    @classmethod
    def from_columns(cls, rows, columns, ring=ZZ):
        """columns: iterable of dicts row -> value."""
        columns = list(columns)
        m = cls(rows, len(columns), ring)
        for j, col in enumerate(columns):
            for i, v in col.items():
                m[i, j] = v
        return m

    @classmethod
    def from_dense(cls, array, ring=ZZ):
        rows = len(array)
        cols = len(array[0]) if rows else 0
        m = cls(rows, cols, ring)
        for i, row in enumerate(array):
            for j, v in enumerate(row):
                m[i, j] = v
        return m

    def column(self, j):
        return {i: v for (i, jj), v in self.data.items() if jj == j}

    def columns(self):
        cols = [dict() for _ in range(self.cols)]
        for (i, j), v in self.data.items():
            cols[j][i] = v
        return cols

    def row_lists(self):
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.data.items():
            rows[i][j] = v
        return rows

    def transpose(self):
        m = SparseMatrix(self.cols, self.rows, self.ring)
        m.data = {(j, i): v for (i, j), v in self.data.items()}
        return m

    def matmul(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matmul")
        if self.ring != other.ring:
            raise ValueError("ring mismatch in matmul")
        ring = self.ring
        out = SparseMatrix(self.rows, other.cols, ring)
        cols = self.columns()
        acc = {}
        for (k, j), v in other.data.items():
            for i, u in cols[k].items():
                key = (i, j)
                acc[key] = ring.add(acc.get(key, ring.zero()), ring.mul(u, v))
        for key, v in acc.items():
            if not ring.iszero(v):
                out.data[key] = v
        return out

    def apply(self, vec, _cols_cache=None):
        """Matrix times a sparse column vector (dict row -> value)."""
        ring = self.ring
        cols = _cols_cache if _cols_cache is not None else self.columns()
        out = {}
        for j, v in vec.items():
            for i, u in cols[j].items():
                out[i] = ring.add(out.get(i, ring.zero()), ring.mul(u, v))
        return {i: x for i, x in out.items() if not ring.iszero(x)}

    def to_dense(self):
        zero = self.ring.zero()
        out = [[zero] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.data.items():
            out[i][j] = v
        return out

    def is_diagonal(self):
        return all(i == j for (i, j) in self.data)

    def diagonal(self):
        n = min(self.rows, self.cols)
        return [self[i, i] for i in range(n)]

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.ring == other.ring
            and self.data == other.data
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols} over {self.ring}, nnz={self.nnz})"

    # file format: header "rows cols ring", then "row col value" per entry
    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    def dumps(self):
        lines = [f"{self.rows} {self.cols} {self.ring.token}"]
        for (i, j) in sorted(self.data):
            lines.append(f"{i} {j} {self.ring.format(self.data[(i, j)])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def read(cls, path):
        with open(path) as fh:
            return cls.loads(fh.read())

    @classmethod
    def loads(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty sparse matrix file")
        head = lines[0].split()
        if len(head) != 3:
            raise ValueError(f"bad header {lines[0]!r}")
        rows, cols = int(head[0]), int(head[1])
        ring = ring_from_token(head[2])
        m = cls(rows, cols, ring)
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise ValueError(f"bad entry line {ln!r}")
            m[int(parts[0]), int(parts[1])] = ring.parse(parts[2])
        return m
