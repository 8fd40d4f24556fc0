"""Simplicial cochains, coboundaries and cup products.

The cup product uses the front-face/back-face formula with respect to
the global vertex order:
    (phi cup psi)(v_0..v_{p+q}) = phi(v_0..v_p) * psi(v_p..v_{p+q}).
"""

from __future__ import annotations


class Cochain:
    def __init__(self, degree, ring, data=None):
        self.degree = degree
        self.ring = ring
        self.data = {}
        if data:
            for cell, v in data.items():
                cell = tuple(cell)
                if len(cell) != degree + 1:
                    raise ValueError(f"cell {cell} is not of degree {degree}")
                v = ring.normalize(v)
                if not ring.iszero(v):
                    self.data[cell] = v

    def __call__(self, cell):
        return self.data.get(tuple(cell), self.ring.zero())

    def add(self, other):
        if other.degree != self.degree or other.ring != self.ring:
            raise ValueError("cochain mismatch")
        ring = self.ring
        data = dict(self.data)
        for c, v in other.data.items():
            nv = ring.add(data.get(c, ring.zero()), v)
            if ring.iszero(nv):
                data.pop(c, None)
            else:
                data[c] = nv
        out = Cochain(self.degree, ring)
        out.data = data
        return out

    def scale(self, c):
        ring = self.ring
        c = ring.normalize(c)
        out = Cochain(self.degree, ring)
        if not ring.iszero(c):
            out.data = {cell: ring.mul(c, v) for cell, v in self.data.items()}
        return out

    def neg(self):
        ring = self.ring
        out = Cochain(self.degree, ring)
        out.data = {cell: ring.neg(v) for cell, v in self.data.items()}
        return out

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.degree == other.degree
            and self.ring == other.ring
            and self.data == other.data
        )


def unit_cochain(K, ring):
    """The constant degree-0 cochain with value 1."""
    one = ring.one()
    return Cochain(0, ring, {(v,): one for v in range(K.n)})


def coboundary(K, phi):
    """delta(phi)(c) = sum_i (-1)^i phi(c minus vertex i)."""
    ring = phi.ring
    out = {}
    for c in K.cells(phi.degree + 1):
        acc = ring.zero()
        for i in range(len(c)):
            face = c[:i] + c[i + 1:]
            v = phi.data.get(face)
            if v is not None:
                acc = ring.add(acc, v if i % 2 == 0 else ring.neg(v))
        if not ring.iszero(acc):
            out[c] = acc
    return Cochain(phi.degree + 1, ring, out)


def cup(phi, psi, K):
    """Front/back cup product of cochains on K."""
    if phi.ring != psi.ring:
        raise ValueError("ring mismatch in cup product")
    ring = phi.ring
    p, q = phi.degree, psi.degree
    d = p + q
    if d > K.dim:
        return Cochain(d, ring)
    out = {}
    for c in K.cells(d):
        front = c[: p + 1]
        back = c[p:]
        a = phi.data.get(front)
        if a is None:
            continue
        b = psi.data.get(back)
        if b is None:
            continue
        v = ring.mul(a, b)
        if not ring.iszero(v):
            out[c] = v
    return Cochain(d, ring, out)
