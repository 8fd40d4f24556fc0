"""Exact solver for systems of unit-phase equations zeta^theta * u ==
zeta^theta' * v, where zeta = e^(2*pi*i/m) and the exponents are affine
rational forms in named parameters constrained to rational boxes.

Variables are complex scalars of magnitude at most 1; a variable is
unit-magnitude unless it appears in a sphere constraint pairing it with
a partner (|a|^2 + |b|^2 = 1).  Variables flagged real are constrained
to the nonnegative reals.  The reserved variable "1" is the constant 1.

Solving branches over the ZERO/NONZERO lattice of the FREE variables,
turns same-class phase equations into congruences of affine forms
modulo m, enumerates the finitely many feasible integer offsets, and
solves each resulting affine system exactly over the rationals.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction


class AffineForm:
    """constant + sum of coeff * parameter, all rational."""

    __slots__ = ("const", "coeffs")

    def __init__(self, const=0, coeffs=None):
        self.const = Fraction(const)
        self.coeffs = {}
        if coeffs:
            for p, c in coeffs.items():
                c = Fraction(c)
                if c:
                    self.coeffs[p] = c

    @classmethod
    def var(cls, name, coeff=1):
        return cls(0, {name: coeff})

    def add(self, other):
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            nc = out.get(p, Fraction(0)) + c
            if nc:
                out[p] = nc
            else:
                out.pop(p, None)
        return AffineForm(self.const + other.const, out)

    def sub(self, other):
        return self.add(other.scale(-1))

    def scale(self, c):
        c = Fraction(c)
        return AffineForm(self.const * c, {p: v * c for p, v in self.coeffs.items()})

    def shift(self, c):
        return AffineForm(self.const + Fraction(c), self.coeffs)

    def evaluate(self, point):
        acc = self.const
        for p, c in self.coeffs.items():
            acc += c * Fraction(point[p])
        return acc

    def substitute(self, assignment):
        """Replace parameters by affine forms where given."""
        out = AffineForm(self.const)
        for p, c in self.coeffs.items():
            form = assignment.get(p)
            if form is None:
                out = out.add(AffineForm.var(p, c))
            else:
                out = out.add(form.scale(c))
        return out

    def is_constant(self):
        return not self.coeffs

    def interval_over(self, box):
        """Exact [min, max] over the box (affine forms attain both)."""
        lo = hi = self.const
        for p, c in self.coeffs.items():
            a, b = box[p]
            if c >= 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def __eq__(self, other):
        return (
            isinstance(other, AffineForm)
            and self.const == other.const
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        parts = [] if not self.const else [str(self.const)]
        for p in sorted(self.coeffs):
            parts.append(f"{self.coeffs[p]}*{p}")
        return " + ".join(parts) if parts else "0"


class PhaseExponent:
    """An exponent of zeta, taken modulo the modulus m."""

    def __init__(self, form, modulus):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.form = form if isinstance(form, AffineForm) else AffineForm(form)
        self.modulus = int(modulus)

    def __repr__(self):
        return f"zeta^({self.form}) mod {self.modulus}"


ZERO, NONZERO, FREE = "ZERO", "NONZERO", "FREE"


class Equation:
    """lhs_expo * lhs_var == rhs_expo * rhs_var (vars by name)."""

    def __init__(self, lhs_expo, lhs_var, rhs_expo, rhs_var):
        self.lhs_expo = lhs_expo
        self.lhs_var = lhs_var
        self.rhs_expo = rhs_expo
        self.rhs_var = rhs_var

    def __repr__(self):
        return (
            f"zeta({self.lhs_expo.form})*{self.lhs_var} == "
            f"zeta({self.rhs_expo.form})*{self.rhs_var}"
        )


class CongruenceSystem:
    def __init__(self, modulus, box, variables=None, real_vars=(), sphere_pairs=()):
        """
        box: parameter -> (lo, hi) rational closed interval;
        variables: name -> ZERO | NONZERO | FREE;
        real_vars: names constrained to the nonnegative reals;
        sphere_pairs: (a, b) pairs with |a|^2 + |b|^2 = 1.
        """
        self.modulus = int(modulus)
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.box = {p: (Fraction(a), Fraction(b)) for p, (a, b) in box.items()}
        for p, (a, b) in self.box.items():
            if a > b:
                raise ValueError(f"empty box for parameter {p}")
        self.variables = dict(variables or {})
        self.variables.setdefault("1", NONZERO)
        self.real_vars = set(real_vars) | {"1"}
        self.sphere_pairs = [tuple(p) for p in sphere_pairs]
        self.equations = []

    def declare(self, name, kind=FREE, real=False):
        if kind not in (ZERO, NONZERO, FREE):
            raise ValueError(f"bad magnitude kind {kind!r}")
        self.variables[name] = kind
        if real:
            self.real_vars.add(name)
        return self

    def expo(self, form):
        return PhaseExponent(form, self.modulus)

    def equate(self, lhs_expo, lhs_var, rhs_expo, rhs_var):
        lhs_expo = self._coerce(lhs_expo)
        rhs_expo = self._coerce(rhs_expo)
        for v in (lhs_var, rhs_var):
            if v not in self.variables:
                raise ValueError(f"undeclared variable {v!r}")
        for e in (lhs_expo, rhs_expo):
            if e.modulus != self.modulus:
                raise ValueError("modulus mismatch in equation")
            for p in e.form.coeffs:
                if p not in self.box:
                    raise ValueError(f"unboxed parameter {p!r}")
        self.equations.append(Equation(lhs_expo, lhs_var, rhs_expo, rhs_var))
        return self

    def _coerce(self, e):
        if isinstance(e, PhaseExponent):
            return e
        return PhaseExponent(e, self.modulus)

    # ---------- file format ----------

    _EQ_RE = re.compile(
        r"zeta\((?P<le>[^)]*)\)\s*\*\s*(?P<lv>\S+)\s*==\s*"
        r"zeta\((?P<re>[^)]*)\)\s*\*\s*(?P<rv>\S+)"
    )

    @classmethod
    def loads(cls, text):
        modulus = None
        box = {}
        variables = {}
        real_vars = []
        sphere_pairs = []
        eq_lines = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("modulus"):
                modulus = int(line.split()[1])
            elif " in [" in line:
                name, rng = line.split(" in ")
                a, b = rng.strip()[1:-1].split(",")
                box[name.strip()] = (Fraction(a.strip()), Fraction(b.strip()))
            elif " in {" in line:
                name, kind = line.split(" in ")
                variables[name.strip()] = kind.strip()[1:-1].strip()
            elif line.startswith("real "):
                real_vars.append(line.split()[1])
            elif line.startswith("sphere "):
                _, a, b = line.split()
                sphere_pairs.append((a, b))
            elif "==" in line:
                eq_lines.append(line)
            else:
                raise ValueError(f"unrecognized line {line!r}")
        if modulus is None:
            raise ValueError("missing modulus line")
        sys = cls(modulus, box, variables, real_vars, sphere_pairs)
        for line in eq_lines:
            m = cls._EQ_RE.fullmatch(line)
            if not m:
                raise ValueError(f"bad equation line {line!r}")
            sys.equate(
                parse_affine(m.group("le")),
                m.group("lv"),
                parse_affine(m.group("re")),
                m.group("rv"),
            )
        return sys

    def dumps(self):
        lines = [f"modulus {self.modulus}"]
        for p in sorted(self.box):
            a, b = self.box[p]
            lines.append(f"{p} in [{a},{b}]")
        for v in sorted(self.variables):
            if v != "1":
                lines.append(f"{v} in {{{self.variables[v]}}}")
        for v in sorted(self.real_vars):
            if v != "1":
                lines.append(f"real {v}")
        for a, b in self.sphere_pairs:
            lines.append(f"sphere {a} {b}")
        for eq in self.equations:
            lines.append(repr(eq))
        return "\n".join(lines) + "\n"

    @classmethod
    def read(cls, path):
        with open(path) as fh:
            return cls.loads(fh.read())

    def solve(self):
        return solve_congruences(self)


def parse_affine(text):
    """Parse sums of rational terms like '4*t', '1+s', '-t/2 + 3/7'."""
    text = text.replace("-", "+-").replace(" ", "")
    out = AffineForm(0)
    for term in text.split("+"):
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        m = re.fullmatch(
            r"(?:(?P<c>[0-9]+(?:/[0-9]+)?)\*)?(?P<v>[A-Za-z_][A-Za-z_0-9]*)?"
            r"(?:/(?P<d>[0-9]+))?(?(v)|(?P<k>[0-9]+(?:/[0-9]+)?)?)",
            term,
        )
        if m is None or (m.group("v") is None and m.group("c") is None and m.group("k") is None):
            raise ValueError(f"bad affine term {term!r}")
        coeff = Fraction(m.group("c")) if m.group("c") else Fraction(1)
        if m.group("d"):
            coeff /= int(m.group("d"))
        if m.group("v"):
            form = AffineForm.var(m.group("v"), coeff)
        else:
            const = Fraction(m.group("k")) if m.group("k") else coeff
            form = AffineForm(const)
        out = out.add(form.scale(-1) if neg else form)
    return out


def residue_range(theta1, theta2, box):
    """All integers k such that theta1 - theta2 = k*m has a solution in
    the box.  Affine forms attain every value between their extremes,
    so this is exact, not just an interval bound."""
    if theta1.modulus != theta2.modulus:
        raise ValueError("modulus mismatch")
    m = theta1.modulus
    delta = theta1.form.sub(theta2.form)
    lo, hi = delta.interval_over(box)
    import math

    ks = []
    k = math.ceil(Fraction(lo) / m)
    while k * m <= hi:
        ks.append(int(k))
        k += 1
    return ks


class Branch:
    """One solution slice: a zero pattern, chosen congruence offsets,
    an affine parametrization, and the phase relations between the
    nonzero variables."""

    def __init__(
        self,
        zero_pattern,
        offsets,
        congruences,
        pinned,
        free_params,
        param_bounds,
        phase_classes,
        dimension,
    ):
        self.zero_pattern = dict(zero_pattern)
        self.offsets = list(offsets)
        self.congruences = list(congruences)
        self.pinned = dict(pinned)            # param -> AffineForm in free params
        self.free_params = list(free_params)
        self.param_bounds = dict(param_bounds)  # free param -> (lo, hi) projection
        self.phase_classes = phase_classes    # var -> (root, offset AffineForm)
        self.dimension = dimension

    def substitution(self):
        sub = dict(self.pinned)
        for p in self.free_params:
            sub[p] = AffineForm.var(p)
        return sub

    def verify(self, system):
        """Each congruence must become the constant offset*m identically."""
        sub = self.substitution()
        for (delta, k) in zip(self.congruences, self.offsets):
            val = delta.substitute(sub)
            if not val.is_constant() or val.const != k * system.modulus:
                return False
        for p, (lo, hi) in self.param_bounds.items():
            blo, bhi = system.box[p]
            if lo < blo or hi > bhi:
                return False
        return True

    def contains_params(self, point):
        """Whether a full parameter point lies on this affine slice
        (box membership of the free part included)."""
        for p, form in self.pinned.items():
            if Fraction(point[p]) != form.evaluate(point):
                return False
        for p, (lo, hi) in self.param_bounds.items():
            if not lo <= Fraction(point[p]) <= hi:
                return False
        return True

    def __repr__(self):
        zeros = sorted(v for v, z in self.zero_pattern.items() if z)
        return (
            f"Branch(dim={self.dimension}, zeros={zeros}, "
            f"pinned={ {p: str(f) for p, f in self.pinned.items()} })"
        )


class SolutionSet:
    def __init__(self, branches):
        self.branches = list(branches)

    @property
    def empty(self):
        return not self.branches

    @property
    def dimension(self):
        """Largest branch dimension, or -1 when empty."""
        return max((b.dimension for b in self.branches), default=-1)

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    def __repr__(self):
        return f"SolutionSet({len(self.branches)} branches, dim={self.dimension})"


class _UnionFind:
    """Union-find over variables with zeta-power offsets:
    var = root * zeta^offset."""

    def __init__(self):
        self.parent = {}

    def add(self, v):
        if v not in self.parent:
            self.parent[v] = (v, AffineForm(0))

    def find(self, v):
        self.add(v)
        p, off = self.parent[v]
        if p == v:
            return v, off
        root, poff = self.find(p)
        total = off.add(poff)
        self.parent[v] = (root, total)
        return root, total

    def union(self, u, v, delta):
        """Impose u = v * zeta^delta; returns a congruence AffineForm
        (== 0 mod m required) if they were already related, else None."""
        ru, ou = self.find(u)
        rv, ov = self.find(v)
        if ru == rv:
            # u = r*z^ou and u = v*z^delta = r*z^{ov+delta}
            return ou.sub(ov.add(delta))
        self.parent[ru] = (rv, ov.add(delta).sub(ou))
        return None


def _eliminate_fm(ineqs, params):
    """Fourier-Motzkin: ineqs are AffineForms required >= 0.  Returns
    None if infeasible, else per-parameter projected (lo, hi) bounds."""
    bounds = {}
    for target in params:
        work = [f for f in ineqs]
        for other in params:
            if other == target:
                continue
            lowers, uppers, rest = [], [], []
            for f in work:
                c = f.coeffs.get(other, Fraction(0))
                if c > 0:
                    lowers.append(f.scale(Fraction(1, c)))
                elif c < 0:
                    uppers.append(f.scale(Fraction(-1, c)))
                else:
                    rest.append(f)
            new = rest
            for flo in lowers:
                for fup in uppers:
                    # flo = x + l >= 0 and fup = -x + h >= 0 combine to
                    # l + h >= 0 with x eliminated
                    new.append(flo.add(fup))
            work = new
        # work now involves only the target parameter (or constants)
        lo, hi = None, None
        feasible = True
        for f in work:
            c = f.coeffs.get(target, Fraction(0))
            extra = [p for p in f.coeffs if p != target]
            if extra:
                raise AssertionError("elimination left a stray parameter")
            if c == 0:
                if f.const < 0:
                    feasible = False
                    break
            elif c > 0:
                v = -f.const / c
                lo = v if lo is None else max(lo, v)
            else:
                v = -f.const / c
                hi = v if hi is None else min(hi, v)
        if not feasible or (lo is not None and hi is not None and lo > hi):
            return None
        bounds[target] = (lo, hi)
    if not params:
        for f in ineqs:
            if f.coeffs:
                raise AssertionError("constant check got a nonconstant form")
            if f.const < 0:
                return None
    return bounds


def solve_congruences(system):
    """Complete solution set of the system over its box.  See the
    module docstring for the branching scheme."""
    free_vars = sorted(v for v, k in system.variables.items() if k == FREE)
    branches = []
    for bits in itertools.product((False, True), repeat=len(free_vars)):
        zero = {v: (system.variables[v] == ZERO) for v in system.variables}
        for v, z in zip(free_vars, bits):
            zero[v] = z
        br = _solve_pattern(system, zero)
        branches.extend(br)
    sols = SolutionSet(branches)
    for b in sols:
        if not b.verify(system):
            raise AssertionError(f"unsound branch produced: {b}")
    return sols


def _solve_pattern(system, zero):
    m = system.modulus
    # zero propagation through equations and sphere constraints
    congruence_forms = []
    uf = _UnionFind()
    for eq in system.equations:
        zl, zr = zero[eq.lhs_var], zero[eq.rhs_var]
        if zl != zr:
            return []
        if zl:
            continue
        delta = eq.rhs_expo.form.sub(eq.lhs_expo.form)
        if eq.lhs_var == eq.rhs_var:
            congruence_forms.append(eq.lhs_expo.form.sub(eq.rhs_expo.form))
        else:
            c = uf.union(eq.lhs_var, eq.rhs_var, delta)
            if c is not None:
                congruence_forms.append(c)
    unit_pinned = set()
    for (a, b) in system.sphere_pairs:
        if zero[a] and zero[b]:
            return []
        if zero[a]:
            unit_pinned.add(b)
        elif zero[b]:
            unit_pinned.add(a)
    # a real variable of magnitude 1 is the constant 1
    for v in unit_pinned:
        if v in system.real_vars:
            c = uf.union(v, "1", AffineForm(0))
            if c is not None:
                congruence_forms.append(c)
    # real variables sharing a class must have matching phases
    classes = {}
    for v in system.variables:
        if zero[v]:
            continue
        root, off = uf.find(v)
        classes.setdefault(root, []).append((v, off))
    for root, members in classes.items():
        reals = [(v, off) for v, off in members if v in system.real_vars]
        for (v, off) in reals[1:]:
            congruence_forms.append(off.sub(reals[0][1]))
    # any member of the class of 1 has magnitude exactly 1, so its
    # sphere partner must vanish: both nonzero is a contradiction
    one_root, _ = uf.find("1")
    for (a, b) in system.sphere_pairs:
        if zero[a] or zero[b]:
            continue
        if uf.find(a)[0] == one_root or uf.find(b)[0] == one_root:
            return []
    # drop identically-zero congruences, keep the rest
    congruence_forms = [f for f in congruence_forms if f.coeffs or f.const]
    constant_ok = []
    effective = []
    for f in congruence_forms:
        if f.is_constant():
            if f.const % m != 0:
                return []
            constant_ok.append(f)
        else:
            effective.append(f)
    # squared magnitudes: one unknown u in (0, 1] per class of nonzero
    # variables; classes containing "1" or any variable outside every
    # sphere pair are pinned to u = 1; sphere pairs give linear rows
    sphere_vars = {v for pair in system.sphere_pairs for v in pair}
    pinned_u = {}
    unknown_u = []
    for root, members in classes.items():
        if any(v == "1" or v not in sphere_vars for v, _ in members):
            pinned_u[root] = Fraction(1)
        else:
            unknown_u.append(root)
    rows = []
    for (a, b) in system.sphere_pairs:
        terms = {}
        rhs = Fraction(1)
        for v in (a, b):
            if zero[v]:
                continue
            r = uf.find(v)[0]
            if r in pinned_u:
                rhs -= pinned_u[r]
            else:
                terms[r] = terms.get(r, Fraction(0)) + 1
        rows.append((terms, rhs))
    mag_rank = 0
    exprs = {}
    for v in sorted(unknown_u):
        piv = next((i for i, (t, _) in enumerate(rows) if t.get(v)), None)
        if piv is None:
            continue
        t, r = rows.pop(piv)
        mag_rank += 1
        c = t.pop(v)
        exprs[v] = ({q: -cv / c for q, cv in t.items()}, r / c)
        newrows = []
        for (t2, r2) in rows:
            cv = t2.pop(v, Fraction(0))
            if cv:
                r2 = r2 - cv * exprs[v][1]
                for q, cq in exprs[v][0].items():
                    t2[q] = t2.get(q, Fraction(0)) + cv * cq
                t2 = {q: cq for q, cq in t2.items() if cq}
            newrows.append((t2, r2))
        rows = newrows
    for (t, r) in rows:
        if not t and r != 0:
            return []
    for v, (t, r) in exprs.items():
        if not t and not 0 < r <= 1:
            # a nonzero variable forced to a nonpositive (or > 1)
            # squared magnitude
            return []
    mags = len(unknown_u) - mag_rank
    circle = sum(
        1
        for root, members in classes.items()
        if not any(v in system.real_vars for v, _ in members)
    )
    offset_lists = []
    zero_exp = PhaseExponent(AffineForm(0), m)
    for f in effective:
        ks = residue_range(PhaseExponent(f, m), zero_exp, system.box)
        if not ks:
            return []
        offset_lists.append(ks)
    out = []
    params = sorted(system.box)
    for combo in itertools.product(*offset_lists):
        slice_ = _solve_affine_slice(system, effective, combo, params)
        if slice_ is None:
            continue
        pinned, free_params, bounds, dim_affine = slice_
        all_forms = effective + constant_ok
        all_offsets = list(combo) + [int(f.const / m) for f in constant_ok]
        out.append(
            Branch(
                zero,
                all_offsets,
                all_forms,
                pinned,
                free_params,
                bounds,
                {v: uf.find(v) for v in system.variables if not zero[v]},
                dim_affine + circle + mags,
            )
        )
    return out


def _solve_affine_slice(system, forms, offsets, params):
    """Solve forms[i] = offsets[i]*m exactly; returns the pinned-param
    map, the free params, their projected box bounds, and the affine
    dimension, or None when infeasible."""
    m = system.modulus
    rows = []
    for f, k in zip(forms, offsets):
        rows.append(({p: c for p, c in f.coeffs.items()}, k * m - f.const))
    pinned = {}
    # Gaussian elimination over the parameters
    work = rows
    order = list(params)
    for p in order:
        pivot = None
        for idx, (coeffs, rhs) in enumerate(work):
            if coeffs.get(p):
                pivot = idx
                break
        if pivot is None:
            continue
        coeffs, rhs = work.pop(pivot)
        c = coeffs.pop(p)
        expr = AffineForm(rhs / c, {q: -v / c for q, v in coeffs.items()})
        # substitute into remaining rows and earlier pins
        newwork = []
        for (co, r) in work:
            cv = co.pop(p, Fraction(0))
            if cv:
                r = r - cv * expr.const
                for q, v in expr.coeffs.items():
                    co[q] = co.get(q, Fraction(0)) + cv * v
                co = {q: v for q, v in co.items() if v}
            newwork.append((co, r))
        work = newwork
        for pp in list(pinned):
            pinned[pp] = pinned[pp].substitute({p: expr})
        pinned[p] = expr
    for (co, r) in work:
        if co:
            raise AssertionError("elimination left coefficients behind")
        if r != 0:
            return None
    free_params = [p for p in params if p not in pinned]
    # resolve chained pins down to free parameters only
    changed = True
    while changed:
        changed = False
        for p, expr in pinned.items():
            if any(q in pinned for q in expr.coeffs):
                pinned[p] = expr.substitute(pinned)
                changed = True
    # box constraints as inequalities over the free parameters
    ineqs = []
    for p in params:
        lo, hi = system.box[p]
        expr = pinned.get(p, AffineForm.var(p))
        ineqs.append(expr.shift(-lo))            # expr - lo >= 0
        ineqs.append(expr.scale(-1).shift(hi))   # hi - expr >= 0
    bounds = _eliminate_fm(ineqs, free_params)
    if bounds is None:
        return None
    clipped = {}
    dim = 0
    for p in free_params:
        lo, hi = bounds[p]
        blo, bhi = system.box[p]
        lo = blo if lo is None else max(lo, blo)
        hi = bhi if hi is None else min(hi, bhi)
        if lo > hi:
            return None
        clipped[p] = (lo, hi)
        if hi > lo:
            dim += 1
    if not free_params:
        # purely constant slice: the constant feasibility was already
        # checked row by row and via the box inequalities
        ok = _eliminate_fm(ineqs, [])
        if ok is None:
            return None
    return pinned, free_params, clipped, dim
