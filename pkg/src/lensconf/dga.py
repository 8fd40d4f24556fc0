"""Finite cochain-level algebras, their cohomology rings, and triple
Massey products with exact indeterminacy handling.

A DGA holds a graded basis, a differential, and a multiplication that
may be tabulated or computed lazily (the simplicial and tensor models
would need quadratically many table entries otherwise).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .rings import ZZ, QQ
from .linalg import Echelon
from .cochains import cup as cochain_cup


class DGAError(ValueError):
    pass


class MasseyUndefined(ValueError):
    """Raised when a cup-product precondition fails; carries the class."""

    def __init__(self, which, coords):
        self.which = which
        self.coords = coords
        super().__init__(f"cup product {which} is nonzero in cohomology: {coords}")


def vec_add(ring, u, v):
    out = dict(u)
    for k, x in v.items():
        nx = ring.add(out.get(k, ring.zero()), x)
        if ring.iszero(nx):
            out.pop(k, None)
        else:
            out[k] = nx
    return out


def vec_scale(ring, c, u):
    if ring.iszero(c):
        return {}
    return {k: ring.mul(c, x) for k, x in u.items()}


def vec_neg(ring, u):
    return {k: ring.neg(x) for k, x in u.items()}


class DGA:
    def __init__(self, names, degrees, ring, diff, mul, unit_vec):
        """
        names: list of basis names; degrees: parallel list of degrees;
        diff: list of sparse vectors (index -> coeff), one per basis
        element, or a dict index -> vector;
        mul: callable (i, j) -> sparse vector;
        unit_vec: sparse vector representing 1.
        """
        self.names = list(names)
        self.degrees = list(degrees)
        if len(set(self.names)) != len(self.names):
            raise DGAError("duplicate basis names")
        self.ring = ring
        self.index = {n: i for i, n in enumerate(self.names)}
        if isinstance(diff, dict):
            self.diff = [diff.get(i, {}) for i in range(len(self.names))]
        else:
            self.diff = list(diff)
        self._mul = mul
        self.unit_vec = dict(unit_vec)
        self._by_degree = {}
        for i, d in enumerate(self.degrees):
            self._by_degree.setdefault(d, []).append(i)

    @property
    def size(self):
        return len(self.names)

    @property
    def top_degree(self):
        return max(self.degrees, default=0)

    def degree_indices(self, d):
        return self._by_degree.get(d, [])

    def mul_basis(self, i, j):
        return self._mul(i, j)

    def d_vec(self, u):
        ring = self.ring
        out = {}
        for i, c in u.items():
            for k, v in self.diff[i].items():
                nv = ring.add(out.get(k, ring.zero()), ring.mul(c, v))
                if ring.iszero(nv):
                    out.pop(k, None)
                else:
                    out[k] = nv
        return {k: v for k, v in out.items() if not ring.iszero(v)}

    def mul_vec(self, u, v):
        ring = self.ring
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                ab = ring.mul(a, b)
                if ring.iszero(ab):
                    continue
                for k, c in self.mul_basis(i, j).items():
                    nv = ring.add(out.get(k, ring.zero()), ring.mul(ab, c))
                    if ring.iszero(nv):
                        out.pop(k, None)
                    else:
                        out[k] = nv
        return {k: v for k, v in out.items() if not ring.iszero(v)}

    def vec_degree(self, u):
        degs = {self.degrees[i] for i in u}
        if len(degs) > 1:
            raise DGAError(f"inhomogeneous vector across degrees {degs}")
        return degs.pop() if degs else None

    # ---------- validation ----------

    def validate(self, full=None, rng=None, samples=200):
        """d*d = 0 always; Leibniz/associativity in full below a size
        threshold, on random samples above it."""
        n = self.size
        if full is None:
            full = n <= 40
        for i in range(n):
            if self.d_vec(self.diff[i]):
                raise DGAError(f"d(d({self.names[i]})) != 0")
            for k in self.diff[i]:
                if self.degrees[k] != self.degrees[i] + 1:
                    raise DGAError(f"differential of {self.names[i]} not of degree +1")
        one = self.unit_vec
        ring = self.ring
        ei = lambda i: {i: ring.one()}
        if full:
            pairs = [(i, j) for i in range(n) for j in range(n)]
            triples = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
        else:
            import random

            r = rng or random.Random(0)
            pairs = [(r.randrange(n), r.randrange(n)) for _ in range(samples)]
            triples = [
                (r.randrange(n), r.randrange(n), r.randrange(n)) for _ in range(samples)
            ]
        for i, j in pairs:
            a, b = ei(i), ei(j)
            lhs = self.d_vec(self.mul_basis(i, j))
            sgn = -1 if self.degrees[i] % 2 else 1
            rhs = vec_add(
                ring,
                self.mul_vec(self.diff[i], b),
                vec_scale(ring, ring.normalize(sgn), self.mul_vec(a, self.diff[j])),
            )
            if lhs != rhs:
                raise DGAError(f"Leibniz fails on ({self.names[i]}, {self.names[j]})")
        for i, j, k in triples:
            a, b, c = ei(i), ei(j), ei(k)
            if self.mul_vec(self.mul_vec(a, b), c) != self.mul_vec(a, self.mul_vec(b, c)):
                raise DGAError(
                    f"associativity fails on ({self.names[i]}, {self.names[j]}, {self.names[k]})"
                )
        for i in range(n):
            if self.mul_vec(one, ei(i)) != ei(i) or self.mul_vec(ei(i), one) != ei(i):
                raise DGAError(f"unit fails on {self.names[i]}")
        return True

    # ---------- file format ----------

    def dumps(self):
        ring = self.ring
        lines = ["BASIS"]
        for n, d in zip(self.names, self.degrees):
            lines.append(f"{n} {d}")
        lines.append("DIFFERENTIAL")
        for i, n in enumerate(self.names):
            if self.diff[i]:
                lines.append(f"{n} = {self._fmt(self.diff[i])}")
        lines.append("PRODUCT")
        for i in range(self.size):
            for j in range(self.size):
                p = self.mul_basis(i, j)
                if p:
                    lines.append(f"{self.names[i]} {self.names[j]} = {self._fmt(p)}")
        return "\n".join(lines) + "\n"

    def _fmt(self, vec):
        parts = []
        for k in sorted(vec):
            parts.append(f"{self.ring.format(vec[k])}*{self.names[k]}")
        return " + ".join(parts) if parts else "0"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text, ring=QQ):
        section = None
        names, degrees = [], []
        diff_lines, prod_lines = [], []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line in ("BASIS", "DIFFERENTIAL", "PRODUCT"):
                section = line
                continue
            if section == "BASIS":
                parts = line.split()
                if len(parts) != 2:
                    raise DGAError(f"bad basis line {line!r}")
                names.append(parts[0])
                degrees.append(int(parts[1]))
            elif section == "DIFFERENTIAL":
                diff_lines.append(line)
            elif section == "PRODUCT":
                prod_lines.append(line)
            else:
                raise DGAError(f"line outside any section: {line!r}")
        index = {n: i for i, n in enumerate(names)}

        def parse_comb(expr):
            expr = expr.strip()
            if expr == "0":
                return {}
            out = {}
            for term in expr.split("+"):
                term = term.strip()
                m = re.fullmatch(r"(-?[0-9]+(?:/[0-9]+)?)\*([A-Za-z0-9_]+)", term)
                if not m:
                    raise DGAError(f"bad term {term!r}")
                coeff = ring.normalize(Fraction(m.group(1)))
                name = m.group(2)
                if name not in index:
                    raise DGAError(f"unknown basis name {name!r}")
                out[index[name]] = ring.add(out.get(index[name], ring.zero()), coeff)
            return {k: v for k, v in out.items() if not ring.iszero(v)}

        diff = {}
        for line in diff_lines:
            lhs, rhs = line.split("=", 1)
            diff[index[lhs.strip()]] = parse_comb(rhs)
        table = {}
        for line in prod_lines:
            lhs, rhs = line.split("=", 1)
            a, b = lhs.split()
            table[(index[a], index[b])] = parse_comb(rhs)
        unit_candidates = [i for i, d in enumerate(degrees) if d == 0]
        # the unit is the sum of the degree-0 idempotents that act as 1;
        # for tabulated algebras we require a basis element named "1" or
        # "e" acting as the unit, else the sum of all degree-0 elements
        unit_vec = {}
        for i in unit_candidates:
            unit_vec[i] = ring.one()
        dga = cls(names, degrees, ring, diff, lambda i, j: table.get((i, j), {}), unit_vec)
        dga.validate()
        return dga

    @classmethod
    def read(cls, path, ring=QQ):
        with open(path) as fh:
            return cls.loads(fh.read(), ring)


# ---------- constructors ----------


def simplicial_dga(K, ring):
    """The simplicial cochain algebra of K with the front/back cup."""
    names = []
    degrees = []
    cells = []
    for d in range(K.dim + 1):
        for c in K.cells(d):
            names.append("c" + "_".join(str(v) for v in c))
            degrees.append(d)
            cells.append(c)
    index = {c: i for i, c in enumerate(cells)}
    one = ring.one()
    diff = [dict() for _ in cells]
    for d in range(1, K.dim + 1):
        for c in K.cells(d):
            j = index[c]
            for i in range(len(c)):
                face = c[:i] + c[i + 1:]
                coeff = one if i % 2 == 0 else ring.neg(one)
                diff[index[face]][j] = coeff

    cell_set = index

    def mul(i, j):
        a, b = cells[i], cells[j]
        if a[-1] != b[0]:
            return {}
        joined = a + b[1:]
        if any(x >= y for x, y in zip(joined, joined[1:])):
            return {}
        k = cell_set.get(joined)
        if k is None:
            return {}
        return {k: one}

    unit_vec = {index[(v,)]: one for v in range(K.n)}
    return DGA(names, degrees, ring, diff, mul, unit_vec)


def tensor_dga(A, B):
    """Tensor product of DGAs with Koszul signs."""
    if A.ring != B.ring:
        raise DGAError("ring mismatch in tensor product")
    ring = A.ring
    names = []
    degrees = []
    pairs = []
    for i in range(A.size):
        for j in range(B.size):
            names.append(f"{A.names[i]}(x){B.names[j]}")
            degrees.append(A.degrees[i] + B.degrees[j])
            pairs.append((i, j))
    index = {p: k for k, p in enumerate(pairs)}

    diff = []
    for (i, j) in pairs:
        out = {}
        for k, v in A.diff[i].items():
            out[index[(k, j)]] = v
        sgn = ring.normalize(-1 if A.degrees[i] % 2 else 1)
        for k, v in B.diff[j].items():
            key = index[(i, k)]
            nv = ring.add(out.get(key, ring.zero()), ring.mul(sgn, v))
            if ring.iszero(nv):
                out.pop(key, None)
            else:
                out[key] = nv
        diff.append(out)

    def mul(p, q):
        i, j = pairs[p]
        k, l = pairs[q]
        sgn = ring.normalize(-1 if (B.degrees[j] * A.degrees[k]) % 2 else 1)
        out = {}
        for a, ca in A.mul_basis(i, k).items():
            for b, cb in B.mul_basis(j, l).items():
                c = ring.mul(sgn, ring.mul(ca, cb))
                if not ring.iszero(c):
                    key = index[(a, b)]
                    nv = ring.add(out.get(key, ring.zero()), c)
                    if ring.iszero(nv):
                        out.pop(key, None)
                    else:
                        out[key] = nv
        return out

    unit_vec = {}
    for i, ci in A.unit_vec.items():
        for j, cj in B.unit_vec.items():
            unit_vec[index[(i, j)]] = ring.mul(ci, cj)
    return DGA(names, degrees, ring, diff, mul, unit_vec)


def monomial_dga(generators, diff_of_gens, ring, top_degree):
    """Free graded-commutative algebra on named generators, truncated
    above top_degree, with differential extended by the Leibniz rule.

    generators: list of (name, degree); odd-degree generators square to
    zero.  diff_of_gens: name -> {monomial exponent tuple: coeff}.
    """
    gen_names = [g for g, _ in generators]
    gen_degs = [d for _, d in generators]
    ngen = len(generators)

    def mono_degree(exp):
        return sum(e * d for e, d in zip(exp, gen_degs))

    # enumerate admissible monomials up to top_degree
    monos = []

    def extend(prefix, k, deg):
        if k == ngen:
            monos.append(tuple(prefix))
            return
        dmax = (top_degree - deg) // gen_degs[k] if gen_degs[k] > 0 else 0
        if gen_degs[k] % 2 == 1:
            dmax = min(dmax, 1)
        for e in range(dmax + 1):
            extend(prefix + [e], k + 1, deg + e * gen_degs[k])

    extend([], 0, 0)
    monos.sort(key=lambda m: (mono_degree(m), m))
    index = {m: i for i, m in enumerate(monos)}

    def mono_name(m):
        if not any(m):
            return "1"
        parts = []
        for g, e in zip(gen_names, m):
            if e == 1:
                parts.append(g)
            elif e > 1:
                parts.append(f"{g}{e}")
        return "".join(parts)

    names = [mono_name(m) for m in monos]
    degrees = [mono_degree(m) for m in monos]

    def mono_mul(m1, m2):
        """(sign, combined) or None if zero."""
        comb = tuple(a + b for a, b in zip(m1, m2))
        for k, e in enumerate(comb):
            if gen_degs[k] % 2 == 1 and e > 1:
                return None
        if mono_degree(comb) > top_degree:
            return None
        # Koszul sign: count odd-generator transpositions moving m2's
        # factors left past m1's higher-index factors
        sign = 1
        for k2 in range(ngen):
            if m2[k2] == 0 or gen_degs[k2] % 2 == 0:
                continue
            crossings = sum(m1[k1] * gen_degs[k1] for k1 in range(k2 + 1, ngen))
            if (crossings * m2[k2]) % 2:
                sign = -sign
        return sign, comb

    one = ring.one()

    def mul(i, j):
        r = mono_mul(monos[i], monos[j])
        if r is None:
            return {}
        sign, comb = r
        return {index[comb]: ring.normalize(sign)}

    def vmul(u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in mul(i, j).items():
                    nv = ring.add(out.get(k, ring.zero()), ring.mul(ring.mul(a, b), c))
                    if ring.iszero(nv):
                        out.pop(k, None)
                    else:
                        out[k] = nv
        return out

    dgen = {}
    for gname, image in diff_of_gens.items():
        k = gen_names.index(gname)
        dgen[k] = {index[m]: ring.normalize(c) for m, c in image.items()}

    diff_memo = {}

    def d_mono(i):
        if i in diff_memo:
            return diff_memo[i]
        m = monos[i]
        if not any(m):
            out = {}
        else:
            k = next(g for g in range(ngen) if m[g])
            rest = list(m)
            rest[k] -= 1
            irest = index[tuple(rest)]
            gvec = {index[tuple(1 if g == k else 0 for g in range(ngen))]: one}
            out = vmul(dgen.get(k, {}), {irest: one})
            sgn = ring.normalize(-1 if gen_degs[k] % 2 else 1)
            rest_d = d_mono(irest)
            out = vec_add(ring, out, vec_scale(ring, sgn, vmul(gvec, rest_d)))
        diff_memo[i] = out
        return out

    diff = [d_mono(i) for i in range(len(monos))]
    unit_vec = {index[tuple(0 for _ in range(ngen))]: one}
    dga = DGA(names, degrees, ring, diff, mul, unit_vec)
    dga.monomials = monos
    dga.generator_index = {g: i for i, g in enumerate(gen_names)}
    return dga


def heisenberg_dga(ring=QQ):
    """Three degree-1 generators a, b, c with da = db = 0, dc = ab."""
    gens = [("a", 1), ("b", 1), ("c", 1)]
    e = lambda *exps: tuple(exps)
    return monomial_dga(gens, {"c": {e(1, 1, 0): 1}}, ring, top_degree=3)


def random_sullivan_dga(rng, ring, max_gens=4, max_basis=12):
    """A random triangular (Sullivan-style) DGA: each generator's
    differential is a random cocycle in the subalgebra of the earlier
    generators, so d*d = 0 by construction."""
    for _attempt in range(50):
        ngen = rng.randint(2, max_gens)
        degs = [rng.randint(1, 3) for _ in range(ngen)]
        top = rng.randint(3, 5)
        gens = [(f"g{i}", degs[i]) for i in range(ngen)]
        # build with zero differential first to get the monomial basis
        probe = monomial_dga(gens, {}, ring, top_degree=top)
        if probe.size > max_basis or probe.size < 4:
            continue
        diff_of_gens = {}
        for i in range(ngen):
            target_deg = degs[i] + 1
            # monomials of earlier generators only, of the target degree
            sub = monomial_dga(gens, diff_of_gens, ring, top_degree=top)
            candidates = []
            for k in sub.degree_indices(target_deg):
                mono = sub.monomials[k]
                if any(mono[g] for g in range(i, ngen)):
                    continue
                if not sub.diff[k]:
                    candidates.append(k)
            image = {}
            for k in candidates:
                if rng.random() < 0.5:
                    c = rng.randrange(1, ring.char) if ring.char else rng.randint(1, 3)
                    image[sub.monomials[k]] = c
            if image:
                diff_of_gens[f"g{i}"] = image
        dga = monomial_dga(gens, diff_of_gens, ring, top_degree=top)
        try:
            dga.validate(full=True)
        except DGAError:
            continue
        return dga
    raise RuntimeError("could not generate a random DGA")
