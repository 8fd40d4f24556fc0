"""Smith normal form over the integers, with unimodular transforms.

Also the integer/field linear solves and submodule membership built on
top of it.  Pivoting prefers entries of minimal absolute value with a
low fill-in count; only the diagonal is canonical, the transforms are
whatever the pivot order produced.
"""

from __future__ import annotations

from .rings import ZZ, QQ
from .sparse import SparseMatrix
from .linalg import solve_field


class _Work:
    """Row-major + column-index view of a matrix under row/col ops."""

    def __init__(self, M):
        self.nrows = M.rows
        self.ncols = M.cols
        self.rows = {}
        self.colidx = {}
        self.unit_queue = []
        for (i, j), v in M.data.items():
            self.rows.setdefault(i, {})[j] = v
            self.colidx.setdefault(j, set()).add(i)

    def get(self, i, j):
        return self.rows.get(i, {}).get(j, 0)

    def set(self, i, j, v):
        if v == 0:
            row = self.rows.get(i)
            if row and j in row:
                del row[j]
                self.colidx[j].discard(i)
        else:
            self.rows.setdefault(i, {})[j] = v
            self.colidx.setdefault(j, set()).add(i)

    def add_row(self, dst, src, c):
        """R_dst += c * R_src"""
        for j, v in list(self.rows.get(src, {}).items()):
            self.set(dst, j, self.get(dst, j) + c * v)

    def add_col(self, dst, src, c):
        """C_dst += c * C_src"""
        for i in list(self.colidx.get(src, set())):
            self.set(i, dst, self.get(i, dst) + c * self.get(i, src))

    def swap_rows(self, a, b):
        if a == b:
            return
        ra = self.rows.pop(a, {})
        rb = self.rows.pop(b, {})
        if rb:
            self.rows[a] = rb
        if ra:
            self.rows[b] = ra
        for j in set(ra) | set(rb):
            s = self.colidx[j]
            ina, inb = a in s, b in s
            if ina != inb:
                if ina:
                    s.discard(a)
                    s.add(b)
                else:
                    s.discard(b)
                    s.add(a)

    def swap_cols(self, a, b):
        if a == b:
            return
        ca = self.colidx.pop(a, set())
        cb = self.colidx.pop(b, set())
        if cb:
            self.colidx[a] = cb
        if ca:
            self.colidx[b] = ca
        for i in ca | cb:
            row = self.rows[i]
            va, vb = row.pop(a, None), row.pop(b, None)
            if vb is not None:
                row[a] = vb
            if va is not None:
                row[b] = va

    def negate_row(self, i):
        row = self.rows.get(i, {})
        for j in row:
            row[j] = -row[j]

    def find_pivot(self, t):
        """A unit entry if one is queued, else the smallest |value|.

        Unit pivots need no Euclidean steps and no divisibility fixup,
        so they are tried first; the queue is refilled by a full scan
        only when it runs dry.
        """
        while self.unit_queue:
            i, j = self.unit_queue.pop()
            if i >= t and j >= t and abs(self.rows.get(i, {}).get(j, 0)) == 1:
                return i, j
        best = None
        for i, row in self.rows.items():
            if i < t:
                continue
            for j, v in row.items():
                if j < t:
                    continue
                a = abs(v)
                if a == 1:
                    self.unit_queue.append((i, j))
                    continue
                fill = len(row) + len(self.colidx[j])
                key = (a, fill, i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        while self.unit_queue:
            i, j = self.unit_queue.pop()
            if i >= t and j >= t and abs(self.rows.get(i, {}).get(j, 0)) == 1:
                return i, j
        if best is None:
            return None
        return best[1], best[2]


def _snf(M, track):
    if M.ring != ZZ:
        raise ValueError("smith_normal_form requires integer entries")
    w = _Work(M)
    U = SparseMatrix.identity(M.rows, ZZ) if track else None
    V = SparseMatrix.identity(M.cols, ZZ) if track else None
    uw = _Work(U) if track else None
    vw = _Work(V) if track else None
    n = min(M.rows, M.cols)
    diag = []
    t = 0
    while t < n:
        piv = w.find_pivot(t)
        if piv is None:
            break
        i, j = piv
        w.swap_rows(i, t)
        w.swap_cols(j, t)
        if track:
            uw.swap_rows(i, t)
            vw.swap_cols(j, t)
        while True:
            # clear column t
            changed = False
            for i2 in list(w.colidx.get(t, set())):
                if i2 <= t:
                    continue
                a = w.get(t, t)
                v = w.get(i2, t)
                q = v // a
                if q:
                    w.add_row(i2, t, -q)
                    if track:
                        uw.add_row(i2, t, -q)
                if w.get(i2, t):
                    # remainder smaller than pivot: promote it
                    w.swap_rows(i2, t)
                    if track:
                        uw.swap_rows(i2, t)
                    changed = True
                    break
            if changed:
                continue
            # clear row t
            for j2 in list(w.rows.get(t, {}).keys()):
                if j2 <= t:
                    continue
                a = w.get(t, t)
                v = w.get(t, j2)
                q = v // a
                if q:
                    w.add_col(j2, t, -q)
                    if track:
                        vw.add_col(j2, t, -q)
                if w.get(t, j2):
                    w.swap_cols(j2, t)
                    if track:
                        vw.swap_cols(j2, t)
                    changed = True
                    break
            if changed:
                continue
            # both cleared; enforce divisibility of the remaining block
            a = w.get(t, t)
            offender = None
            if abs(a) != 1:
                for i2, row in w.rows.items():
                    if i2 <= t:
                        continue
                    for j2, v in row.items():
                        if j2 > t and v % a != 0:
                            offender = i2
                            break
                    if offender is not None:
                        break
            if offender is None:
                break
            w.add_row(t, offender, 1)
            if track:
                uw.add_row(t, offender, 1)
        a = w.get(t, t)
        if a < 0:
            w.negate_row(t)
            if track:
                uw.negate_row(t)
            a = -a
        diag.append(a)
        t += 1
    return diag, w, uw, vw


def snf_diagonal(M):
    """Just the nonzero diagonal of the Smith form (d1 | d2 | ...)."""
    diag, _, _, _ = _snf(M, track=False)
    return diag


def smith_normal_form(M):
    """S, U, V with U*M*V = S diagonal, d1 | d2 | ..., det U, det V = +-1."""
    diag, w, uw, vw = _snf(M, track=True)
    S = SparseMatrix(M.rows, M.cols, ZZ)
    for k, d in enumerate(diag):
        S[k, k] = d
    U = SparseMatrix(M.rows, M.rows, ZZ)
    for i, row in uw.rows.items():
        for j, v in row.items():
            U[i, j] = v
    V = SparseMatrix(M.cols, M.cols, ZZ)
    for i, row in vw.rows.items():
        for j, v in row.items():
            V[i, j] = v
    return S, U, V


def rank_Z(M):
    return len([d for d in snf_diagonal(M) if d != 0])


def solve_linear(M, b):
    """Solve M x = b over M's ring; returns a sparse dict or None.

    b is a dict row -> value.  Over Z the solution is an honest integer
    solution (via the Smith form), not merely a rational one.
    """
    b = {i: M.ring.normalize(v) for i, v in b.items()}
    for i in b:
        if not 0 <= i < M.rows:
            raise ValueError(f"rhs index {i} outside {M.rows} rows")
    b = {i: v for i, v in b.items() if not M.ring.iszero(v)}
    if M.ring.is_field:
        return solve_field(M, b)
    if M.ring != ZZ:
        raise ValueError(f"unsupported ring {M.ring}")
    S, U, V = smith_normal_form(M)
    ub = U.apply(b)
    diag = S.diagonal()
    y = {}
    for i, v in ub.items():
        d = S[i, i] if i < len(diag) else 0
        if d == 0:
            return None
        q, r = divmod(v, d)
        if r:
            return None
        y[i] = q
    x = V.apply(y)
    return x


def submodule_membership(generators, v, rows, ring=ZZ):
    """Decide whether v lies in the span of the generators over the ring.

    generators: list of sparse columns; v: sparse column; rows: ambient
    dimension.  Returns (True, coefficients) or (False, None).
    """
    M = SparseMatrix.from_columns(rows, generators, ring)
    x = solve_linear(M, v)
    if x is None:
        return False, None
    coeffs = [x.get(j, ring.zero()) for j in range(len(generators))]
    return True, coeffs
