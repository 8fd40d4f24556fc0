"""Certified rank bounds for frames of trigonometric vectors.

A frame vector's entries are finite sums of rational multiples of
cos(2*pi*theta/m) and sin(2*pi*theta/m) where theta is an affine
rational form in boxed parameters.  Rank >= expected is certified by a
square minor whose determinant interval excludes zero over the whole
box, subdividing adaptively; rank < expected is certified exactly when
the vectors are dependent as symbolic expressions over Q.
"""

from __future__ import annotations

from fractions import Fraction

from .phases import AffineForm, PhaseExponent
from .intervals import Interval, cos2pi_fraction, sin2pi_fraction, cos2pi_range, sin2pi_range, det_interval
from .linalg import Echelon
from .rings import QQ

CONST, COS, SIN = "const", "cos", "sin"


class Term:
    __slots__ = ("coeff", "kind", "expo")

    def __init__(self, coeff, kind, expo=None):
        self.coeff = Fraction(coeff)
        self.kind = kind
        if kind == CONST:
            self.expo = None
        else:
            if not isinstance(expo, PhaseExponent):
                raise ValueError("cos/sin terms need a PhaseExponent")
            self.expo = expo

    def symbol(self, position):
        if self.kind == CONST:
            return (position, CONST, None)
        f = self.expo.form
        key = (f.const, tuple(sorted(f.coeffs.items())), self.expo.modulus)
        return (position, self.kind, key)

    def eval_interval(self, box):
        """box: parameter -> (Fraction lo, Fraction hi)."""
        if self.kind == CONST:
            return Interval.exact(self.coeff)
        m = self.expo.modulus
        lo, hi = self.expo.form.interval_over(box)
        a, b = Fraction(lo, m), Fraction(hi, m)
        rng = cos2pi_range(a, b) if self.kind == COS else sin2pi_range(a, b)
        return Interval.exact(self.coeff) * rng

    def eval_point(self, point):
        if self.kind == CONST:
            return Interval.exact(self.coeff)
        m = self.expo.modulus
        u = Fraction(self.expo.form.evaluate(point), m)
        v = cos2pi_fraction(u) if self.kind == COS else sin2pi_fraction(u)
        return Interval.exact(self.coeff) * v


def const(c):
    return Term(c, CONST)


def costerm(c, expo):
    return Term(c, COS, expo)


def sinterm(c, expo):
    return Term(c, SIN, expo)


class TangentFrame:
    """vectors: list of vectors; each vector is a list of entries; each
    entry a list of Terms.  All vectors share the ambient dimension."""

    def __init__(self, vectors, box):
        self.vectors = [list(v) for v in vectors]
        dims = {len(v) for v in self.vectors}
        if len(dims) > 1:
            raise ValueError(f"mixed ambient dimensions {dims}")
        self.ambient = dims.pop() if dims else 0
        self.box = {p: (Fraction(a), Fraction(b)) for p, (a, b) in box.items()}

    def entry_interval(self, i, j, box):
        acc = Interval(0.0, 0.0)
        for t in self.vectors[i][j]:
            acc = acc + t.eval_interval(box)
        return acc

    def entry_point(self, i, j, point):
        acc = Interval(0.0, 0.0)
        for t in self.vectors[i][j]:
            acc = acc + t.eval_point(point)
        return acc

    def symbol_matrix(self):
        """Exact coefficient matrix of the vectors over the symbols
        (position, trig kind, exponent); a Q-dependence here implies a
        pointwise dependence for every parameter value."""
        symbols = {}
        rows = []
        for v in self.vectors:
            row = {}
            for j, entry in enumerate(v):
                for t in entry:
                    s = t.symbol(j)
                    k = symbols.setdefault(s, len(symbols))
                    row[k] = row.get(k, Fraction(0)) + t.coeff
            rows.append({k: c for k, c in row.items() if c})
        return rows, symbols


class TangentVerdict:
    def __init__(self, status, expected, frame=None, rows=None, cols=None,
                 margin=None, leaves=None, detail=""):
        self.status = status          # CERTIFIED | FAIL | INCONCLUSIVE
        self.expected = expected
        self.frame = frame
        self.rows = rows
        self.cols = cols
        self.margin = margin
        self.leaves = leaves or []
        self.detail = detail

    @property
    def certified(self):
        return self.status == "CERTIFIED"

    def recheck(self):
        """Re-verify the certificate: every stored leaf box must keep
        the minor determinant away from zero."""
        if self.status != "CERTIFIED":
            return False
        margin = None
        for box in self.leaves:
            det = _minor_det(self.frame, self.rows, self.cols, box)
            if det.contains_zero():
                return False
            m = det.zero_margin()
            margin = m if margin is None else min(margin, m)
        return margin is not None and margin > 0

    def __repr__(self):
        extra = f", margin={self.margin:.3g}" if self.margin is not None else ""
        return f"TangentVerdict({self.status}, expected={self.expected}{extra})"


def _minor_det(frame, rows, cols, box):
    mat = [[frame.entry_interval(i, j, box) for j in cols] for i in rows]
    return det_interval(mat)


def _greedy_minor(frame, k, point):
    """Pick k rows and k columns by float Gaussian elimination with
    full pivoting at a sample point."""
    n = len(frame.vectors)
    amb = frame.ambient
    work = [[(frame.entry_point(i, j, point).lo + frame.entry_point(i, j, point).hi) / 2
             for j in range(amb)] for i in range(n)]
    rows_left = list(range(n))
    cols_left = list(range(amb))
    rows, cols = [], []
    for _ in range(k):
        best = None
        for i in rows_left:
            for j in cols_left:
                a = abs(work[i][j])
                if best is None or a > best[0]:
                    best = (a, i, j)
        if best is None or best[0] == 0.0:
            return None
        _, pi, pj = best
        rows.append(pi)
        cols.append(pj)
        rows_left.remove(pi)
        cols_left.remove(pj)
        piv = work[pi][pj]
        for i in rows_left:
            f = work[i][pj] / piv
            for j in cols_left:
                work[i][j] -= f * work[pi][j]
    return sorted(rows), sorted(cols)


def _box_midpoint(box):
    return {p: (a + b) / 2 for p, (a, b) in box.items()}


def tangent_rank(frame, expected, budget=2**14):
    """Certify rank(frame) >= expected over the whole box, or prove
    rank < expected symbolically, or give up with INCONCLUSIVE."""
    n = len(frame.vectors)
    if expected > min(n, frame.ambient):
        return TangentVerdict("FAIL", expected,
                              detail="expected rank exceeds matrix size")
    rows_sym, _ = frame.symbol_matrix()
    ech = Echelon(QQ)
    for r in rows_sym:
        # rows as columns: rank is symmetric
        ech.insert({k: QQ.normalize(v) for k, v in r.items()})
    if ech.rank < expected:
        return TangentVerdict(
            "FAIL", expected,
            detail=f"symbolic rank bound {ech.rank} < {expected}")
    box = frame.box
    sample_points = [_box_midpoint(box)]
    for p, (a, b) in box.items():
        sample_points.append({**_box_midpoint(box), p: a + (b - a) / 4})
    tried = set()
    for point in sample_points:
        minor = _greedy_minor(frame, expected, point)
        if minor is None or tuple(minor[0] + minor[1]) in tried:
            continue
        tried.add(tuple(minor[0] + minor[1]))
        rows, cols = minor
        verdict = _certify_minor(frame, rows, cols, budget)
        if verdict is not None:
            return verdict
    return TangentVerdict("INCONCLUSIVE", expected,
                          detail=f"budget {budget} exhausted on every candidate minor")


def _certify_minor(frame, rows, cols, budget):
    """Adaptive bisection; returns a CERTIFIED verdict or None."""
    stack = [frame.box]
    leaves = []
    margin = None
    evals = 0
    while stack:
        box = stack.pop()
        evals += 1
        if evals > budget:
            return None
        det = _minor_det(frame, rows, cols, box)
        if not det.contains_zero():
            leaves.append(box)
            m = det.zero_margin()
            margin = m if margin is None else min(margin, m)
            continue
        # split the widest parameter
        widest = max(box, key=lambda p: box[p][1] - box[p][0])
        a, b = box[widest]
        if b - a == 0:
            return None
        mid = (a + b) / 2
        stack.append({**box, widest: (a, mid)})
        stack.append({**box, widest: (mid, b)})
    return TangentVerdict("CERTIFIED", len(rows), frame, rows, cols,
                          margin, leaves,
                          detail=f"{len(leaves)} leaf boxes, {evals} evaluations")
