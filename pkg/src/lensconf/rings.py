"""Exact coefficient rings: the integers, the rationals, and prime fields.

Elements are plain Python objects (int or Fraction); a Ring instance
supplies the arithmetic so that matrix code can stay ring-generic.
"""

from __future__ import annotations

from fractions import Fraction


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Ring:
    """Base class; concrete rings are ZZ, QQ and GF(p)."""

    kind = None
    is_field = False
    char = 0

    def zero(self):
        return self.normalize(0)

    def one(self):
        return self.normalize(1)

    def normalize(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def iszero(self, a):
        return a == 0

    def inv(self, a):
        raise NotImplementedError

    def divides(self, a, b):
        """Whether a | b in this ring (a nonzero)."""
        raise NotImplementedError

    def exact_div(self, b, a):
        """b / a, assuming divisibility."""
        raise NotImplementedError

    def parse(self, token):
        raise NotImplementedError

    def format(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.token == other.token

    def __hash__(self):
        return hash(self.token)

    def __repr__(self):
        return self.token


class IntegerRing(Ring):
    kind = "INTEGERS"
    token = "Z"

    def normalize(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return int(x)
        return int(x)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a in (1, -1):
            return a
        raise ZeroDivisionError(f"{a} is not a unit in Z")

    def divides(self, a, b):
        return b % a == 0

    def exact_div(self, b, a):
        q, r = divmod(b, a)
        if r:
            raise ValueError(f"{a} does not divide {b}")
        return q

    def parse(self, token):
        return int(token)


class RationalRing(Ring):
    kind = "RATIONALS"
    token = "Q"
    is_field = True

    def normalize(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / Fraction(a)

    def divides(self, a, b):
        return True

    def exact_div(self, b, a):
        return Fraction(b) / Fraction(a)

    def parse(self, token):
        return Fraction(token)


class PrimeField(Ring):
    kind = "PRIME_FIELD"
    is_field = True

    def __init__(self, p):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.token = f"F{p}"

    def normalize(self, x):
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return (x.numerator % self.p) * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def divides(self, a, b):
        return True

    def exact_div(self, b, a):
        return b * pow(a, -1, self.p) % self.p

    def parse(self, token):
        return int(token) % self.p


ZZ = IntegerRing()
QQ = RationalRing()

_gf_cache = {}


def GF(p):
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def ring_from_token(token):
    """Inverse of Ring.token, for file headers and CLI flags."""
    token = token.strip()
    if token == "Z":
        return ZZ
    if token == "Q":
        return QQ
    if token.startswith("Fp:"):
        return GF(int(token[3:]))
    if token.startswith("F"):
        return GF(int(token[1:]))
    raise ValueError(f"unknown ring token {token!r}")
