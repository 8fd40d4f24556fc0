"""Incremental column echelon forms over a field.

The same structure backs ranks, kernels, linear solves and membership
tests.  Columns are sparse dicts (row -> value).  With track=True every
stored column remembers its expression in the originally inserted
columns, which is what turns a reduction into a solve.
"""

from __future__ import annotations


class Echelon:
    def __init__(self, ring, track=False):
        if not ring.is_field:
            raise ValueError("Echelon requires field coefficients")
        self.ring = ring
        self.track = track
        self.pivots = {}   # pivot row -> index into self.cols
        self.cols = []     # stored columns, normalized to 1 at pivot row
        self.combos = []   # parallel: dict tag -> coeff over inserted tags
        self.tags = []
        self._counter = 0

    @property
    def rank(self):
        return len(self.cols)

    def _axpy(self, col, c, other):
        """col -= c * other, in place; returns rows that changed."""
        ring = self.ring
        for r, v in other.items():
            nv = ring.sub(col.get(r, ring.zero()), ring.mul(c, v))
            if ring.iszero(nv):
                col.pop(r, None)
            else:
                col[r] = nv

    def reduce(self, col):
        """Reduce a column against the stored ones.

        Returns (residual, used) where used maps tags of inserted
        columns to coefficients such that
        original = residual + sum used[tag] * inserted_column[tag].
        """
        ring = self.ring
        col = {r: ring.normalize(v) for r, v in col.items() if not ring.iszero(ring.normalize(v))}
        used = {} if self.track else None
        work = sorted((r for r in col if r in self.pivots), reverse=True)
        work_set = set(work)
        while work:
            r = work.pop()
            work_set.discard(r)
            if r not in col:
                continue
            c = col[r]
            k = self.pivots[r]
            self._axpy(col, c, self.cols[k])
            if self.track:
                tag = self.tags[k]
                for t, v in self.combos[k].items():
                    nv = ring.add(used.get(t, ring.zero()), ring.mul(c, v))
                    if ring.iszero(nv):
                        used.pop(t, None)
                    else:
                        used[t] = nv
            for rr in self.cols[k]:
                if rr in self.pivots and rr in col and rr not in work_set:
                    work.append(rr)
                    work_set.add(rr)
            work.sort(reverse=True)
        return col, used

    def insert(self, col, tag=None):
        """Insert a column; returns None if dependent, else its pivot row.

        When tracking and the column is dependent, self.last_combo holds
        its expression in the previously inserted columns.
        """
        ring = self.ring
        if tag is None:
            tag = self._counter
        self._counter += 1
        residual, used = self.reduce(col)
        if not residual:
            self.last_combo = used
            return None
        prow = max(residual)
        lead = residual[prow]
        inv = ring.inv(lead)
        norm = {r: ring.mul(inv, v) for r, v in residual.items()}
        self.pivots[prow] = len(self.cols)
        self.cols.append(norm)
        if self.track:
            combo = {tag: inv}
            for t, v in used.items():
                combo[t] = ring.neg(ring.mul(inv, v))
            self.combos.append(combo)
        self.tags.append(tag)
        self.last_combo = None
        return prow

    def solve(self, b):
        """Coefficients expressing b in the inserted columns, or None."""
        if not self.track:
            raise ValueError("solve requires track=True")
        residual, used = self.reduce(b)
        if residual:
            return None
        return used

    def contains(self, b):
        residual, _ = self.reduce(b)
        return not residual


def matrix_rank(matrix):
    ech = Echelon(matrix.ring)
    for col in matrix.columns():
        ech.insert(col)
    return ech.rank


def kernel_basis(matrix):
    """Sparse basis vectors (dicts col-index -> value) of ker(matrix)."""
    ring = matrix.ring
    ech = Echelon(ring, track=True)
    kernel = []
    for j, col in enumerate(matrix.columns()):
        if ech.insert(col, tag=j) is None:
            vec = {j: ring.one()}
            for t, v in ech.last_combo.items():
                vec[t] = ring.neg(v)
            kernel.append(vec)
    return kernel


def solve_field(matrix, b):
    """One solution of matrix * x = b over a field, or None."""
    ring = matrix.ring
    ech = Echelon(ring, track=True)
    for j, col in enumerate(matrix.columns()):
        ech.insert(col, tag=j)
    sol = ech.solve(b)
    if sol is None:
        return None
    return {j: v for j, v in sol.items() if not ring.iszero(v)}
