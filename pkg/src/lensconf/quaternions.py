"""Exact rational quaternion arithmetic and the two-point splitting
identity for unit quaternions.

The splitting map (x, y) -> (x y^-1, y) turns the condition "x avoids
the orbit points c_k y" into "x y^-1 avoids the c_k"; the test below
checks that equivalence on random rational points of the unit 3-sphere
(Cayley-style parametrization) with rational unit-circle stand-ins for
the phase points, since the actual roots of unity are irrational.
"""

from __future__ import annotations

import random
from fractions import Fraction


class Quaternion:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b=0, c=0, d=0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)
        self.d = Fraction(d)

    def __add__(self, o):
        return Quaternion(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        return Quaternion(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __mul__(self, o):
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def conjugate(self):
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self):
        return self.a**2 + self.b**2 + self.c**2 + self.d**2

    def inverse(self):
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("zero quaternion")
        conj = self.conjugate()
        return Quaternion(conj.a / n, conj.b / n, conj.c / n, conj.d / n)

    def is_unit(self):
        return self.norm2() == 1

    def __eq__(self, o):
        return (
            isinstance(o, Quaternion)
            and (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"Quaternion({self.a}, {self.b}, {self.c}, {self.d})"


ONE = Quaternion(1)


def cayley_unit(b, c, d):
    """Rational point of S^3 from a rational 3-vector: the Cayley-style
    image (1 - p)^-1 (1 + p) of the pure quaternion p = bi + cj + dk."""
    p = Quaternion(0, b, c, d)
    return (ONE - p).inverse() * (ONE + p)


def circle_point(t):
    """Rational point of the unit circle inside the quaternions:
    ((1 - t^2) + 2t i) / (1 + t^2)."""
    t = Fraction(t)
    den = 1 + t * t
    return Quaternion((1 - t * t) / den, 2 * t / den)


def _random_fraction(rng, span=10):
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def random_unit_quaternion(rng, span=10):
    q = cayley_unit(
        _random_fraction(rng, span), _random_fraction(rng, span), _random_fraction(rng, span)
    )
    assert q.is_unit()
    return q


def random_circle_points(rng, m, span=50):
    """m distinct rational unit-circle points, the first one equal 1."""
    points = [Quaternion(1)]
    seen = {points[0]}
    while len(points) < m:
        p = circle_point(_random_fraction(rng, span))
        if p not in seen:
            seen.add(p)
            points.append(p)
    return points


def split_condition_direct(x, y, phases):
    """x != c * y for every phase point c."""
    return all(x != c * y for c in phases)


def split_condition_mapped(x, y, phases):
    """(x y^-1) != c for every phase point c."""
    xy = x * y.inverse()
    return all(xy != c for c in phases)


def split_condition_wrong(x, y, phases):
    """Deliberately wrong pairing (x, y) -> (x y, y); kept as an
    adversarial fixture that the equivalence test must reject."""
    xy = x * y
    return all(xy != c for c in phases)


def quaternion_split_test(m, samples=10_000, seed=0, span=10):
    """Check split_condition_direct == split_condition_mapped on random
    rational unit quaternion pairs, including forced on-orbit pairs."""
    if m < 2:
        raise ValueError("need m >= 2")
    rng = random.Random(seed)
    phases = random_circle_points(rng, m)
    failures = []
    for i in range(samples):
        x = random_unit_quaternion(rng, span)
        y = random_unit_quaternion(rng, span)
        if i % 4 == 0:
            # force an on-orbit pair so both sides must say False
            x = phases[rng.randrange(m)] * y
        lhs = split_condition_direct(x, y, phases)
        rhs = split_condition_mapped(x, y, phases)
        if lhs != rhs:
            failures.append((x, y))
    return {
        "m": m,
        "samples": samples,
        "seed": seed,
        "failures": len(failures),
        "passed": not failures,
        "witnesses": failures[:3],
    }


def wrong_map_counterexample(m, seed=0, attempts=10_000):
    """A sample where the adversarial pairing disagrees with the direct
    condition; None if not found (it should always be found)."""
    rng = random.Random(seed)
    phases = random_circle_points(rng, m)
    for i in range(attempts):
        y = random_unit_quaternion(rng)
        x = phases[rng.randrange(m)] * y
        if split_condition_direct(x, y, phases) != split_condition_wrong(x, y, phases):
            return x, y
    return None
