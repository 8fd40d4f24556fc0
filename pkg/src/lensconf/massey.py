"""Cohomology rings of finite DGAs and triple Massey products.

All computations are exact over the DGA's coefficient field; integer
inputs are handled by the callers via the rationals.  Echelon data per
degree is cached because product sweeps query the same degrees over and
over.
"""

from __future__ import annotations

import itertools

from .linalg import Echelon
from .dga import DGAError, MasseyUndefined, vec_add, vec_scale


class CohomologyClass:
    def __init__(self, ring_obj, degree, coords, rep):
        self.parent = ring_obj
        self.degree = degree
        self.coords = dict(coords)
        self.rep = dict(rep)

    def is_zero(self):
        return not self.coords

    def label(self):
        parts = []
        names = self.parent.dga.names
        for k in sorted(self.coords):
            c = self.coords[k]
            basis_label = self.parent.class_name(self.degree, k)
            parts.append(f"{self.parent.field.format(c)}*{basis_label}")
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        return (
            isinstance(other, CohomologyClass)
            and self.parent is other.parent
            and self.degree == other.degree
            and self.coords == other.coords
        )

    def __repr__(self):
        return f"[{self.label()}] (deg {self.degree})"


class _DegreeData:
    __slots__ = ("solve_ech", "kernel", "image_ech", "hrep_ech", "reps")

    def __init__(self):
        self.solve_ech = None
        self.kernel = []
        self.image_ech = None
        self.hrep_ech = None
        self.reps = []


class CohomologyRing:
    """Cohomology of a DGA over a field, with representatives and a
    coordinate system per degree."""

    def __init__(self, dga):
        if not dga.ring.is_field:
            raise DGAError("cohomology ring requires field coefficients")
        self.dga = dga
        self.field = dga.ring
        self._deg = {}

    def _data(self, d):
        if d in self._deg:
            return self._deg[d]
        A = self.dga
        F = self.field
        data = _DegreeData()
        # differential out of degree d: echelon with dependency tracking
        # gives both solvability of d(Z) = target and a kernel basis
        ech = Echelon(F, track=True)
        kernel = []
        for i in A.degree_indices(d):
            col = dict(A.diff[i])
            if ech.insert(col, tag=i) is None:
                combo = ech.last_combo
                kvec = {i: F.one()}
                for t, c in combo.items():
                    kvec[t] = F.neg(c)
                kernel.append({k: v for k, v in kvec.items() if not F.iszero(v)})
        data.solve_ech = ech
        data.kernel = kernel
        # image of the differential into degree d
        img = Echelon(F)
        for i in A.degree_indices(d - 1):
            if A.diff[i]:
                img.insert(dict(A.diff[i]))
        data.image_ech = img
        # cohomology basis: reduce kernel vectors modulo the image
        hrep = Echelon(F, track=True)
        reps = []
        for kv in kernel:
            r, _ = img.reduce(dict(kv))
            if r and hrep.insert(dict(r), tag=len(reps)) is not None:
                reps.append(r)
        data.hrep_ech = hrep
        data.reps = reps
        self._deg[d] = data
        return data

    def betti(self, d):
        return len(self._data(d).reps)

    def class_name(self, d, k):
        """A readable name for the k-th basis class in degree d: the
        leading basis element of its representative."""
        rep = self._data(d).reps[k]
        lead = min(rep, key=lambda i: (len(self.dga.names[i]), self.dga.names[i]))
        return f"h{d}_{k}<{self.dga.names[lead]}>"

    def basis_classes(self, d):
        data = self._data(d)
        out = []
        for k, rep in enumerate(data.reps):
            out.append(CohomologyClass(self, d, {k: self.field.one()}, rep))
        return out

    def from_coords(self, d, coords):
        data = self._data(d)
        F = self.field
        rep = {}
        cl = {}
        for k, c in coords.items():
            c = F.normalize(c)
            if F.iszero(c):
                continue
            cl[k] = c
            rep = vec_add(F, rep, vec_scale(F, c, data.reps[k]))
        return CohomologyClass(self, d, cl, rep)

    def coords_of(self, vec, d):
        """Coordinates of a cocycle of degree d; raises if not a cocycle."""
        F = self.field
        if self.dga.d_vec(vec):
            raise DGAError("vector is not a cocycle")
        data = self._data(d)
        r, _ = data.image_ech.reduce(dict(vec))
        if not r:
            return {}
        coords = data.hrep_ech.solve(r)
        if coords is None:
            raise DGAError("cocycle outside the computed cohomology basis")
        return {k: v for k, v in coords.items() if not F.iszero(v)}

    def class_of(self, vec, d):
        return self.from_coords(d, self.coords_of(vec, d))

    def cup(self, x, y):
        prod = self.dga.mul_vec(x.rep, y.rep)
        return self.class_of(prod, x.degree + y.degree)

    def solve_dZ(self, target, d):
        """A vector Z of degree d with d(Z) = target, or None."""
        F = self.field
        data = self._data(d)
        coeffs = data.solve_ech.solve(dict(target))
        if coeffs is None:
            return None
        return {i: c for i, c in coeffs.items() if not F.iszero(c)}

    def kernel_basis(self, d):
        return [dict(v) for v in self._data(d).kernel]

    def product_table(self, p, q):
        """Coordinates of all products of degree-p and degree-q basis
        classes, as a nested list."""
        xs = self.basis_classes(p)
        ys = self.basis_classes(q)
        return [[self.cup(x, y).coords for y in ys] for x in xs]


class MasseyOutcome:
    """Result of one triple Massey product computation."""

    def __init__(self, x, y, z, value, indeterminacy, verdict, certificate):
        self.x = x
        self.y = y
        self.z = z
        self.value = value
        self.indeterminacy = list(indeterminacy)
        self.verdict = verdict
        self.certificate = dict(certificate)

    @property
    def nontrivial(self):
        return self.verdict == "NONTRIVIAL"

    def __repr__(self):
        return f"MasseyOutcome({self.verdict}, value={self.value.coords})"


def _indeterminacy_echelon(H, x, z, degree):
    """Echelon of coordinate vectors spanning x*H^{b} + H^{a}*z where
    the degrees make the products land in the given degree."""
    F = H.field
    gens = []
    for h in H.basis_classes(degree - x.degree):
        gens.append(H.cup(x, h).coords)
    for h in H.basis_classes(degree - z.degree):
        gens.append(H.cup(h, z).coords)
    ech = Echelon(F)
    kept = []
    for g in gens:
        if g and ech.insert(dict(g)) is not None:
            kept.append(g)
    return ech, kept


def triple_massey(H, x, y, z, rng=None):
    """The triple Massey product <x, y, z> with its indeterminacy.

    Preconditions x*y = 0 and y*z = 0 in cohomology must hold; otherwise
    MasseyUndefined is raised.  The representative is Z*z - (-1)^|x| x*X
    where d(Z) = xbar*ybar and d(X) = ybar*zbar.  With rng given, the
    lifts Z and X are perturbed by random kernel elements; the verdict
    must not depend on the choice.
    """
    A = H.dga
    F = H.field
    xy = A.mul_vec(x.rep, y.rep)
    cxy = H.coords_of(xy, x.degree + y.degree)
    if cxy:
        raise MasseyUndefined("x*y", cxy)
    yz = A.mul_vec(y.rep, z.rep)
    cyz = H.coords_of(yz, y.degree + z.degree)
    if cyz:
        raise MasseyUndefined("y*z", cyz)
    Z = H.solve_dZ(xy, x.degree + y.degree - 1)
    X = H.solve_dZ(yz, y.degree + z.degree - 1)
    if Z is None or X is None:
        raise DGAError("cochain-level lift missing for an exact cocycle")
    if rng is not None:
        for kv in H.kernel_basis(x.degree + y.degree - 1):
            c = rng.randrange(F.char) if F.char else rng.randint(-3, 3)
            Z = vec_add(F, Z, vec_scale(F, F.normalize(c), kv))
        for kv in H.kernel_basis(y.degree + z.degree - 1):
            c = rng.randrange(F.char) if F.char else rng.randint(-3, 3)
            X = vec_add(F, X, vec_scale(F, F.normalize(c), kv))
    sign = F.normalize(-1 if x.degree % 2 == 0 else 1)
    w = vec_add(
        F,
        A.mul_vec(Z, z.rep),
        vec_scale(F, sign, A.mul_vec(x.rep, X)),
    )
    out_degree = x.degree + y.degree + z.degree - 1
    value = H.class_of(w, out_degree)
    ind_ech, ind_gens = _indeterminacy_echelon(H, x, z, out_degree)
    inside = value.is_zero() or ind_ech.contains(dict(value.coords))
    verdict = "TRIVIAL" if inside else "NONTRIVIAL"
    certificate = {
        "value_coords": dict(value.coords),
        "indeterminacy_generators": [dict(g) for g in ind_gens],
        "indeterminacy_rank": ind_ech.rank,
        "target_betti": H.betti(out_degree),
    }
    indeterminacy = [H.from_coords(out_degree, g) for g in ind_gens]
    return MasseyOutcome(x, y, z, value, indeterminacy, verdict, certificate)


class SweepReport:
    def __init__(self, entries, incomplete, triples_seen):
        self.entries = list(entries)
        self.incomplete = incomplete
        self.triples_seen = triples_seen

    @property
    def nontrivial(self):
        return [e for e in self.entries if e["verdict"] == "NONTRIVIAL"]

    def all_trivial(self):
        return not self.incomplete and not self.nontrivial

    def __repr__(self):
        n = len(self.nontrivial)
        tag = " (incomplete)" if self.incomplete else ""
        return f"SweepReport({self.triples_seen} triples, {n} nontrivial{tag})"


def massey_sweep(H, degree_triples, budget=None, rng=None, extra_triples=()):
    """Run triple Massey products over all basis-class triples for the
    given (p, q, r) degree patterns, plus any explicit class triples.

    Triples whose cup-product preconditions fail are recorded as
    INADMISSIBLE, not as failures.  A budget caps the number of triples
    and marks the report incomplete when exceeded.
    """
    entries = []
    seen = 0
    incomplete = False

    def run(x, y, z):
        nonlocal seen
        seen += 1
        label = (x.label(), y.label(), z.label())
        try:
            out = triple_massey(H, x, y, z, rng=rng)
        except MasseyUndefined as exc:
            entries.append(
                {"triple": label, "verdict": "INADMISSIBLE", "reason": str(exc)}
            )
            return
        entries.append(
            {
                "triple": label,
                "verdict": out.verdict,
                "value": dict(out.value.coords),
                "indeterminacy_rank": out.certificate["indeterminacy_rank"],
            }
        )

    stream = []
    for (p, q, r) in degree_triples:
        xs = H.basis_classes(p)
        ys = H.basis_classes(q)
        zs = H.basis_classes(r)
        stream.extend(itertools.product(xs, ys, zs))
    stream.extend(extra_triples)
    for (x, y, z) in stream:
        if budget is not None and seen >= budget:
            incomplete = True
            break
        run(x, y, z)
    return SweepReport(entries, incomplete, seen)
