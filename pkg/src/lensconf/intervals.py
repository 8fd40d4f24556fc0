"""Certified floating-point interval arithmetic.

Endpoints are doubles; every arithmetic result is widened outward by
one ulp via math.nextafter, which covers the rounding error of the
IEEE-correctly-rounded +, -, *, /.  Trigonometric values cos(2*pi*u)
and sin(2*pi*u) take exact rational u, reduce modulo 1 exactly, and
use a Taylor polynomial with an explicit remainder bound, so the
returned interval is a mathematical enclosure.
"""

from __future__ import annotations

import math
from fractions import Fraction

_INF = math.inf


def _down(x):
    return math.nextafter(x, -_INF)


def _up(x):
    return math.nextafter(x, _INF)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        if lo > hi:
            raise ValueError(f"inverted interval [{lo}, {hi}]")
        self.lo = float(lo)
        self.hi = float(hi)

    @classmethod
    def exact(cls, x):
        """An interval around a rational (or float) with outward
        rounding only when the value is not representable."""
        if isinstance(x, float):
            return cls(x, x)
        f = Fraction(x)
        v = float(f)
        lo = hi = v
        if Fraction(v) > f:
            lo = _down(v)
        elif Fraction(v) < f:
            hi = _up(v)
        return cls(lo, hi)

    @classmethod
    def hull(cls, a, b):
        return cls(min(a.lo, b.lo), max(a.hi, b.hi))

    def __add__(self, other):
        other = _coerce(other)
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    def __sub__(self, other):
        other = _coerce(other)
        return Interval(_down(self.lo - other.hi), _up(self.hi - other.lo))

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other):
        other = _coerce(other)
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(_down(min(cands)), _up(max(cands)))

    def __truediv__(self, other):
        other = _coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("division by an interval containing zero")
        cands = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return Interval(_down(min(cands)), _up(max(cands)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return _coerce(other) - self

    def contains_zero(self):
        return self.lo <= 0 <= self.hi

    def zero_margin(self):
        """Distance from the interval to zero (0 when it contains 0)."""
        if self.contains_zero():
            return 0.0
        return self.lo if self.lo > 0 else -self.hi

    @property
    def width(self):
        return self.hi - self.lo

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


def _coerce(x):
    if isinstance(x, Interval):
        return x
    return Interval.exact(x)


ZERO_I = Interval(0.0, 0.0)
ONE_I = Interval(1.0, 1.0)

# math.pi is the double nearest to pi, so pi lies within one ulp
PI_I = Interval(_down(math.pi), _up(math.pi))
TWO_PI_I = Interval(2.0, 2.0) * PI_I

_COS_TERMS = 14


def _cos_taylor(x):
    """Enclosure of cos on an interval with |x| <= pi + 1ulp.

    Maclaurin polynomial of degree 2*(_COS_TERMS - 1) plus an interval
    remainder term of magnitude max|x|^(2N)/(2N)!.
    """
    xx = x * x
    # Horner in xx from the highest term down
    acc = ZERO_I
    for k in range(_COS_TERMS - 1, 0, -1):
        acc = (acc + Interval.exact(Fraction((-1) ** k, math.factorial(2 * k)))) * xx
    acc = acc + ONE_I
    xmax = max(abs(x.lo), abs(x.hi))
    n2 = 2 * _COS_TERMS
    rem = _up(xmax**n2 / math.factorial(n2))
    out = Interval(_down(acc.lo - rem), _up(acc.hi + rem))
    return Interval(max(out.lo, -1.0), min(out.hi, 1.0))


def cos2pi_fraction(u):
    """Enclosure of cos(2*pi*u) for exact rational u."""
    u = Fraction(u)
    # reduce to [-1/2, 1/2] exactly
    r = u - round(u)
    x = TWO_PI_I * Interval.exact(r)
    return _cos_taylor(x)


def sin2pi_fraction(u):
    return cos2pi_fraction(Fraction(u) - Fraction(1, 4))


def _cos2pi_monotone(a, b):
    """cos(2*pi*u) on [a, b] assumed to contain no interior extremum;
    hull of the endpoint enclosures."""
    return Interval.hull(cos2pi_fraction(a), cos2pi_fraction(b))


def cos2pi_range(a, b):
    """Enclosure of {cos(2*pi*u) : u in [a, b]} for rational a <= b."""
    a, b = Fraction(a), Fraction(b)
    if b - a >= 1:
        return Interval(-1.0, 1.0)
    # extrema of cos(2*pi*u): maxima at integers, minima at half-integers
    lo, hi = None, None
    k = math.ceil(a)
    if k <= b:
        hi = 1.0
    h = math.ceil(a - Fraction(1, 2)) + Fraction(1, 2)
    if h <= b:
        lo = -1.0
    # split at interior extrema so each piece is monotone
    crit = []
    if k <= b:
        crit.append(Fraction(k))
    if h <= b:
        crit.append(h)
    pieces = sorted({a, b, *[c for c in crit if a <= c <= b]})
    out = None
    for p, q in zip(pieces, pieces[1:]):
        seg = _cos2pi_monotone(p, q)
        out = seg if out is None else Interval.hull(out, seg)
    if out is None:
        out = cos2pi_fraction(a)
    if lo is not None:
        out = Interval(-1.0, out.hi)
    if hi is not None:
        out = Interval(out.lo, 1.0)
    return out


def sin2pi_range(a, b):
    return cos2pi_range(Fraction(a) - Fraction(1, 4), Fraction(b) - Fraction(1, 4))


def det_interval(rows):
    """Determinant enclosure of a small square interval matrix by the
    permutation expansion; fine up to 6x6 (720 terms)."""
    import itertools

    n = len(rows)
    acc = ZERO_I
    for perm in itertools.permutations(range(n)):
        inv = 0
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    inv += 1
        term = ONE_I
        for i in range(n):
            term = term * rows[i][perm[i]]
        acc = acc + (term if inv % 2 == 0 else -term)
    return acc
