"""Parametrized patches in S^3 x S^3 with phase coordinates.

A patch has four complex coordinate slots (two points of S^3 in C^2);
each slot is zero, the constant 1, or a variable times a power of
zeta = e^(2*pi*i/m) with an affine exponent in the patch parameters.
Sphere pairs tie the magnitudes of two variables (|a|^2 + |b|^2 = 1);
variables outside every sphere pair have magnitude 1.

Equating two patches produces a CongruenceSystem whose exact solution
is the intersection; containment of a patch in a diagonal is an
identity of affine exponent forms, not a numeric check.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .phases import (
    AffineForm,
    PhaseExponent,
    CongruenceSystem,
    ZERO,
    NONZERO,
    FREE,
)

SLOT_ZERO, SLOT_CONST, SLOT_VAR = "zero", "const", "var"


class Slot:
    """One complex coordinate: zero, 1 * zeta^expo, or var * zeta^expo."""

    __slots__ = ("mode", "var", "expo")

    def __init__(self, mode, var=None, expo=None):
        self.mode = mode
        self.var = var
        self.expo = expo if expo is not None else AffineForm(0)
        if mode == SLOT_VAR and not var:
            raise ValueError("variable slot needs a variable name")

    @classmethod
    def zero(cls):
        return cls(SLOT_ZERO)

    @classmethod
    def const(cls, expo=None):
        return cls(SLOT_CONST, expo=expo)

    @classmethod
    def of(cls, var, expo=None):
        return cls(SLOT_VAR, var, expo)

    def system_var(self):
        if self.mode == SLOT_ZERO:
            return "0"
        if self.mode == SLOT_CONST:
            return "1"
        return self.var

    def substituted(self, assignment):
        return Slot(self.mode, self.var, self.expo.substitute(assignment))

    def scaled_expo(self, u):
        return Slot(self.mode, self.var, self.expo.scale(u))

    def __repr__(self):
        if self.mode == SLOT_ZERO:
            return "0"
        base = "1" if self.mode == SLOT_CONST else self.var
        if self.expo.is_constant() and self.expo.const == 0:
            return base
        return f"zeta({self.expo})*{base}"


class ParamPatch:
    def __init__(self, modulus, box, slots, sphere_pairs=(), real_vars=(), name="",
                 phase_scale=1):
        if len(slots) != 4:
            raise ValueError("a patch has exactly four coordinate slots")
        self.modulus = int(modulus)
        # a slot expo theta denotes the phase zeta^(phase_scale * theta);
        # relabeling zeta -> zeta^u divides exponents by u and sets the
        # scale to u, leaving the underlying point set unchanged
        self.phase_scale = int(phase_scale)
        self.box = {p: (Fraction(a), Fraction(b)) for p, (a, b) in box.items()}
        self.slots = list(slots)
        self.sphere_pairs = [tuple(p) for p in sphere_pairs]
        self.real_vars = set(real_vars)
        self.name = name
        sphere_vars = {v for pair in self.sphere_pairs for v in pair}
        self.variables = sorted(
            {s.var for s in self.slots if s.mode == SLOT_VAR} | sphere_vars
        )
        for pair in self.sphere_pairs:
            for v in pair:
                if v not in self.variables:
                    raise ValueError(f"sphere pair uses unknown variable {v}")

    # ---------- dimension bookkeeping ----------

    @property
    def dimension(self):
        """Parameters + one circle per non-real variable + one magnitude
        per sphere pair (matching the solver's dimension convention)."""
        dim = sum(1 for p, (a, b) in self.box.items() if b > a)
        dim += sum(1 for v in self.variables if v not in self.real_vars)
        dim += len(self.sphere_pairs)
        return dim

    # ---------- faces ----------

    def face(self, param, value):
        """Restrict a parameter to a constant value."""
        value = Fraction(value)
        lo, hi = self.box[param]
        if not lo <= value <= hi:
            raise ValueError(f"{param}={value} outside [{lo},{hi}]")
        sub = {param: AffineForm(value)}
        box = {p: b for p, b in self.box.items() if p != param}
        slots = [s.substituted(sub) for s in self.slots]
        return ParamPatch(
            self.modulus, box, slots, self.sphere_pairs, self.real_vars,
            name=f"{self.name}|{param}={value}", phase_scale=self.phase_scale,
        )

    def radial_face(self, var):
        """Degenerate a sphere-pair variable to zero; its partner then
        has magnitude 1 and leaves the sphere pair."""
        pair = next((p for p in self.sphere_pairs if var in p), None)
        if pair is None:
            raise ValueError(f"{var} is not in a sphere pair")
        partner = pair[0] if pair[1] == var else pair[1]
        slots = []
        for s in self.slots:
            if s.mode == SLOT_VAR and s.var == var:
                slots.append(Slot.zero())
            else:
                slots.append(s)
        pairs = [p for p in self.sphere_pairs if p != pair]
        reals = self.real_vars - {var}
        return ParamPatch(
            self.modulus, dict(self.box), slots, pairs, reals,
            name=f"{self.name}|{var}=0", phase_scale=self.phase_scale,
        )

    def boundary_faces(self):
        """All box facets plus radial degenerations of real sphere
        variables."""
        faces = []
        for p, (lo, hi) in self.box.items():
            if hi > lo:
                faces.append((f"{p}={lo}", self.face(p, lo)))
                faces.append((f"{p}={hi}", self.face(p, hi)))
        for pair in self.sphere_pairs:
            for v in pair:
                if v in self.real_vars:
                    faces.append((f"{v}=0", self.radial_face(v)))
        return faces

    def relabeled(self, u):
        """Express the same point set with zeta^u as the phase
        generator: exponents divide by u, congruences later rescale by
        u, so the underlying subsets are untouched."""
        if self.phase_scale != 1:
            raise ValueError("patch is already relabeled")
        if math.gcd(u, self.modulus) != 1:
            raise ValueError("relabeling exponent must be coprime to the modulus")
        slots = [s.scaled_expo(Fraction(1, u)) for s in self.slots]
        return ParamPatch(
            self.modulus, dict(self.box), slots, self.sphere_pairs,
            self.real_vars, name=f"{self.name}^({u})", phase_scale=u,
        )

    def __repr__(self):
        p1 = f"({self.slots[0]}, {self.slots[1]})"
        p2 = f"({self.slots[2]}, {self.slots[3]})"
        return f"ParamPatch[{self.name}]({p1}, {p2})"


def diagonal_patch(k, m, q, prefix="d"):
    """Delta_k = {(x, zeta^k x)} for the (m, q) action on S^3."""
    if not 0 <= k < m:
        raise ValueError(f"residue {k} outside 0..{m - 1}")
    x1, x2 = f"{prefix}1", f"{prefix}2"
    slots = [
        Slot.of(x1),
        Slot.of(x2),
        Slot.of(x1, AffineForm(k)),
        Slot.of(x2, AffineForm(q * k)),
    ]
    return ParamPatch(m, {}, slots, [(x1, x2)], name=f"Delta_{k}")


class DiagonalSphere:
    def __init__(self, k, m, q):
        if math.gcd(q, m) != 1:
            raise ValueError("q must be coprime to m")
        self.k = k % m
        self.m = m
        self.q = q
        self.patch = diagonal_patch(self.k, m, q)

    def __repr__(self):
        return f"DiagonalSphere(k={self.k}, m={self.m}, q={self.q})"


def membrane_patch(k, m, q, tparam="t", prefix="x"):
    """The isotopy track A_k: ((x1,x2), (zeta^(k-1+t) x1,
    zeta^(q(k-1+t)) x2)) for t in [0,1]."""
    base = AffineForm(k - 1, {tparam: 1})
    x1, x2 = f"{prefix}1", f"{prefix}2"
    slots = [
        Slot.of(x1),
        Slot.of(x2),
        Slot.of(x1, base),
        Slot.of(x2, base.scale(q)),
    ]
    return ParamPatch(
        m, {tparam: (0, 1)}, slots, [(x1, x2)], name=f"A_{k % m}",
    )


def contained_in_diagonal(patch, k, m, q):
    """Exact check that every point of the patch lies in Delta_k: the
    second point must be zeta^k (acting with twist q) times the first,
    as an identity of slots and exponent forms modulo m."""
    checks = [(0, 2, k), (1, 3, q * k)]
    for (i, j, shift) in checks:
        a, b = patch.slots[i], patch.slots[j]
        if a.mode != b.mode:
            return False
        if a.mode == SLOT_ZERO:
            continue
        if a.mode == SLOT_VAR and a.var != b.var:
            return False
        diff = b.expo.sub(a.expo).scale(patch.phase_scale)
        if not diff.is_constant():
            return False
        if (diff.const - shift) % m != 0:
            return False
    return True


def find_containing_diagonal(patch, m, q):
    """The unique k with patch inside Delta_k, or None."""
    hits = [k for k in range(m) if contained_in_diagonal(patch, k, m, q)]
    if len(hits) > 1:
        raise AssertionError(f"patch inside several diagonals: {hits}")
    return hits[0] if hits else None


class Membrane:
    """A_k with machine-verified t-boundary containments."""

    def __init__(self, k, m, q):
        if math.gcd(q, m) != 1:
            raise ValueError("q must be coprime to m")
        self.k = k % m
        self.m = m
        self.q = q
        self.patch = membrane_patch(k, m, q)
        t0 = self.patch.face("t", 0)
        t1 = self.patch.face("t", 1)
        if not contained_in_diagonal(t0, (k - 1) % m, m, q):
            raise AssertionError(f"A_{k}: t=0 face escapes Delta_{(k - 1) % m}")
        if not contained_in_diagonal(t1, self.k, m, q):
            raise AssertionError(f"A_{k}: t=1 face escapes Delta_{self.k}")

    def __repr__(self):
        return f"Membrane(k={self.k}, m={self.m}, q={self.q})"


def membrane(k, m, q):
    return Membrane(k, m, q)


def _rename(patch, suffix):
    """Disjoint copies for equating: parameters and variables suffixed."""
    pmap = {p: AffineForm.var(p + suffix) for p in patch.box}
    box = {p + suffix: b for p, b in patch.box.items()}
    slots = []
    for s in patch.slots:
        var = s.var + suffix if s.mode == SLOT_VAR else s.var
        slots.append(Slot(s.mode, var, s.expo.substitute(pmap)))
    pairs = [(a + suffix, b + suffix) for (a, b) in patch.sphere_pairs]
    reals = {v + suffix for v in patch.real_vars}
    return ParamPatch(patch.modulus, box, slots, pairs, reals, name=patch.name,
                      phase_scale=patch.phase_scale)


def equate_patches(*patches):
    """A CongruenceSystem whose solutions are the points shared by all
    the patches (each patch's coordinates renamed apart)."""
    if len(patches) < 2:
        raise ValueError("need at least two patches")
    m = patches[0].modulus
    if any(p.modulus != m for p in patches):
        raise ValueError("modulus mismatch between patches")
    scale = patches[0].phase_scale
    if any(p.phase_scale != scale for p in patches):
        raise ValueError("phase scale mismatch between patches")
    renamed = [_rename(p, f"_{chr(ord('a') + i)}") for i, p in enumerate(patches)]
    box = {}
    for p in renamed:
        box.update(p.box)
    system = CongruenceSystem(m, box)
    system.declare("0", ZERO)
    for p in renamed:
        for v in p.variables:
            system.declare(v, FREE, real=(v in p.real_vars))
        system.sphere_pairs.extend(p.sphere_pairs)
    first = renamed[0]
    # zeta_u^theta = e^(2 pi i * scale * theta / m): equality of phases
    # is a congruence of the rescaled exponents modulo m
    for other in renamed[1:]:
        for i in range(4):
            a, b = first.slots[i], other.slots[i]
            system.equate(
                a.expo.scale(scale), a.system_var(),
                b.expo.scale(scale), b.system_var(),
            )
    return system


def interior_branches(solset, time_box):
    """Drop solution branches pinned to an endpoint of a membrane time
    parameter: there the membrane degenerates into a diagonal, which is
    excised from the ambient space, so such intersections are boundary
    artifacts, not relative-chain intersections.

    time_box: time parameter -> (lo, hi) of its range."""
    kept = []
    for br in solset:
        boundary = False
        for p, (lo, hi) in time_box.items():
            if p in br.pinned:
                a, b = br.pinned[p].interval_over(br.param_bounds)
            elif p in br.param_bounds:
                a, b = br.param_bounds[p]
            else:
                continue
            if a == b and a in (lo, hi):
                boundary = True
        if not boundary:
            kept.append(br)
    from .phases import SolutionSet

    return SolutionSet(kept)
