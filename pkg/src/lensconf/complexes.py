"""Finite simplicial complexes and their constructors.

Vertices are indices 0..n-1; the index order IS the global vertex
order used for orientations, cup products and staircase triangulations.
Labels are carried along for debugging and for constructors that
combine complexes.

Conventions:
  - a simplex is a strictly increasing tuple of vertex indices;
  - orientation is the increasing order, boundary signs alternate
    from position 0;
  - staircase products order the product vertex set lexicographically.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .rings import ZZ
from .sparse import SparseMatrix
from .chain import ChainComplex


class SimplicialComplex:
    def __init__(self, n_vertices, maximal, labels=None):
        self.n = n_vertices
        self.labels = tuple(labels) if labels is not None else tuple(range(n_vertices))
        if len(self.labels) != self.n:
            raise ValueError("label count mismatch")
        cleaned = set()
        for s in maximal:
            t = tuple(s)
            if list(t) != sorted(set(t)):
                raise ValueError(f"simplex {t} is not strictly increasing")
            if t and not (0 <= t[0] and t[-1] < self.n):
                raise ValueError(f"simplex {t} has out-of-range vertices")
            cleaned.add(t)
        # drop maximal simplices contained in others; pure complexes
        # (the common case) skip the containment scan entirely
        lengths = {len(t) for t in cleaned}
        if len(lengths) <= 1:
            self.maximal = frozenset(cleaned)
        else:
            by_vertex = {}
            kept = []
            for t in sorted(cleaned, key=len, reverse=True):
                ts = set(t)
                bucket = min(
                    (by_vertex.get(v, ()) for v in t), key=len, default=()
                )
                if any(ts <= k for k in bucket):
                    continue
                kept.append(t)
                for v in t:
                    by_vertex.setdefault(v, []).append(ts)
            self.maximal = frozenset(kept)
        self._cells = {}
        self._cell_index = {}

    # ---------- basic queries ----------

    @property
    def dim(self):
        return max((len(t) - 1 for t in self.maximal), default=-1)

    def cells(self, d):
        """Sorted list of all d-simplices (downward closure)."""
        if d not in self._cells:
            out = set()
            if d >= 0:
                for t in self.maximal:
                    if len(t) >= d + 1:
                        out.update(combinations(t, d + 1))
            self._cells[d] = sorted(out)
        return self._cells[d]

    def cell_index(self, d):
        if d not in self._cell_index:
            self._cell_index[d] = {c: i for i, c in enumerate(self.cells(d))}
        return self._cell_index[d]

    def has_cell(self, t):
        t = tuple(t)
        return t in self.cell_index(len(t) - 1)

    def all_cells(self):
        for d in range(self.dim + 1):
            yield from self.cells(d)

    def f_vector(self):
        return [len(self.cells(d)) for d in range(self.dim + 1)]

    def euler_characteristic(self):
        return sum((-1) ** d * f for d, f in enumerate(self.f_vector()))

    def validate(self):
        """Downward closure and strict ordering (both hold by construction)."""
        for t in self.maximal:
            if list(t) != sorted(set(t)):
                raise ValueError(f"simplex {t} not strictly increasing")
        return True

    # ---------- algebraic topology ----------

    def boundary_matrix(self, d, ring=ZZ):
        rows = self.cells(d - 1) if d >= 1 else []
        cols = self.cells(d)
        idx = {c: i for i, c in enumerate(rows)}
        M = SparseMatrix(len(rows), len(cols), ring)
        if d >= 1:
            neg_one = ring.normalize(-1)
            one = ring.one()
            for j, c in enumerate(cols):
                for i in range(len(c)):
                    face = c[:i] + c[i + 1:]
                    M[idx[face], j] = one if i % 2 == 0 else neg_one
        return M

    def chain_complex(self, ring=ZZ):
        dims = {d: len(self.cells(d)) for d in range(self.dim + 1)}
        boundaries = {d: self.boundary_matrix(d, ring) for d in range(1, self.dim + 1)}
        return ChainComplex(dims, boundaries, ring)

    def homology(self, ring=ZZ):
        return self.chain_complex(ring).homology()

    def betti(self, ring=ZZ):
        return self.homology(ring).betti_vector(self.dim)

    # ---------- file format ----------

    def dumps(self):
        lines = [f"{self.dim} {self.n}"]
        for t in sorted(self.maximal):
            lines.append(" ".join(str(v) for v in t))
        return "\n".join(lines) + "\n"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty complex file")
        head = lines[0].split()
        if len(head) != 2:
            raise ValueError(f"bad header {lines[0]!r}")
        n = int(head[1])
        maximal = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
        return cls(n, maximal)

    @classmethod
    def read(cls, path):
        with open(path) as fh:
            return cls.loads(fh.read())

    def __repr__(self):
        return f"SimplicialComplex(n={self.n}, dim={self.dim}, maximal={len(self.maximal)})"

    # ---------- derived complexes ----------

    def full_subcomplex(self, vertices):
        """Full subcomplex spanned by the given vertex indices, reindexed."""
        keep = sorted(set(vertices))
        old_to_new = {v: i for i, v in enumerate(keep)}
        keep_set = set(keep)
        maximal = set()
        for t in self.maximal:
            s = tuple(old_to_new[v] for v in t if v in keep_set)
            if s:
                maximal.add(s)
        labels = [self.labels[v] for v in keep]
        return SimplicialComplex(len(keep), maximal, labels)

    def stellar_subdivide(self, cell):
        """Star the given cell at a fresh barycenter vertex (appended last)."""
        cell = tuple(cell)
        if not self.has_cell(cell):
            raise ValueError(f"{cell} is not a simplex of the complex")
        b = self.n
        cset = set(cell)
        maximal = set()
        for t in self.maximal:
            if cset <= set(t):
                rest = tuple(v for v in t if v not in cset)
                for drop in range(len(cell)):
                    kept = cell[:drop] + cell[drop + 1:]
                    maximal.add(tuple(sorted(kept + rest)) + (b,))
            else:
                maximal.add(t)
        labels = list(self.labels) + [("bary", tuple(self.labels[v] for v in cell))]
        return SimplicialComplex(self.n + 1, maximal, labels)


class SimplicialMap:
    def __init__(self, source, target, vertex_map, check=True):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        if check:
            for v in range(source.n):
                if v not in self.vertex_map:
                    raise ValueError(f"vertex {v} has no image")
                if not 0 <= self.vertex_map[v] < target.n:
                    raise ValueError(f"image of vertex {v} out of range")
            for t in source.maximal:
                img = self.apply_cell(t)
                if not target.has_cell(img):
                    raise ValueError(f"image {img} of simplex {t} is not a simplex")

    def apply_cell(self, t):
        return tuple(sorted(set(self.vertex_map[v] for v in t)))

    def order_preserving_witness(self):
        """A simplex on which the map is not strictly increasing, or None."""
        for t in self.source.maximal:
            imgs = [self.vertex_map[v] for v in t]
            if any(b <= a for a, b in zip(imgs, imgs[1:])):
                return t
        return None

    def is_order_preserving(self):
        return self.order_preserving_witness() is None

    def compose(self, other):
        """self after other."""
        if other.target is not self.source:
            raise ValueError("composition mismatch")
        vm = {v: self.vertex_map[w] for v, w in other.vertex_map.items()}
        return SimplicialMap(other.source, self.target, vm, check=False)

    def power(self, k):
        if self.source is not self.target:
            raise ValueError("power of a non-endomorphism")
        out = SimplicialMap.identity(self.source)
        for _ in range(k):
            out = self.compose(out)
        return out

    @classmethod
    def identity(cls, K):
        return cls(K, K, {v: v for v in range(K.n)}, check=False)

    def is_identity(self):
        return all(self.vertex_map[v] == v for v in range(self.source.n))


class GroupAction:
    """A cyclic group acting simplicially; freeness is verified."""

    def __init__(self, complex_, generator, order, check_free=True):
        if generator.source is not complex_ or generator.target is not complex_:
            raise ValueError("generator must be an endomorphism of the complex")
        self.complex = complex_
        self.generator = generator
        self.order = order
        powers = [SimplicialMap.identity(complex_)]
        for _ in range(order):
            powers.append(generator.compose(powers[-1]))
        if not powers[order].is_identity():
            raise ValueError(f"generator does not have order {order}")
        self.powers = powers[:order]
        if check_free:
            self._check_free()

    def _check_free(self):
        m = self.order
        for v in range(self.complex.n):
            orbit = {self.powers[a].vertex_map[v] for a in range(m)}
            if len(orbit) != m:
                raise ValueError(f"vertex {v} has orbit of size {len(orbit)} < {m}")
        for d in range(self.complex.dim + 1):
            for c in self.complex.cells(d):
                for a in range(1, m):
                    if self.powers[a].apply_cell(c) == c:
                        raise ValueError(f"simplex {c} fixed by power {a}")

    def vertex_orbit_rep(self, v):
        return min(p.vertex_map[v] for p in self.powers)

    def cell_orbit_rep(self, c):
        return min(p.apply_cell(c) for p in self.powers)


# ---------- constructors ----------


def simplex_complex(n):
    """The full n-simplex."""
    return SimplicialComplex(n + 1, [tuple(range(n + 1))])


def point():
    return simplex_complex(0)


def boundary_sphere(n):
    """Boundary of the (n+1)-simplex: a triangulated S^n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    verts = range(n + 2)
    maximal = list(combinations(verts, n + 1))
    return SimplicialComplex(n + 2, maximal)


def polygon(m):
    """The circle with m vertices and m edges."""
    if m < 3:
        raise ValueError("polygon needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(m - 1)] + [(0, m - 1)]
    return SimplicialComplex(m, edges)


def disjoint_union(complexes):
    offset = 0
    maximal = []
    labels = []
    for idx, K in enumerate(complexes):
        for t in K.maximal:
            maximal.append(tuple(v + offset for v in t))
        labels.extend((idx, lab) for lab in K.labels)
        offset += K.n
    return SimplicialComplex(offset, maximal, labels)


def wedge(pointed):
    """Wedge of pointed complexes [(K, basepoint_index), ...].

    The common basepoint becomes vertex 0 of the result.
    """
    maximal = []
    labels = [("wedge", "base")]
    offset = 1
    for idx, (K, base) in enumerate(pointed):
        remap = {}
        j = offset
        for v in range(K.n):
            if v == base:
                remap[v] = 0
            else:
                remap[v] = j
                j += 1
        for t in K.maximal:
            maximal.append(tuple(sorted(remap[v] for v in t)))
        labels.extend((idx, K.labels[v]) for v in range(K.n) if v != base)
        offset = j
    return SimplicialComplex(offset, maximal, labels)


def join(K, L):
    """Simplicial join; K-vertices come before L-vertices in the order."""
    nK = K.n
    maximal = []
    for s in K.maximal:
        for t in L.maximal:
            maximal.append(s + tuple(v + nK for v in t))
    labels = [("A", lab) for lab in K.labels] + [("B", lab) for lab in L.labels]
    return SimplicialComplex(nK + L.n, maximal, labels)


def product_vertex(iK, iL, nL):
    return iK * nL + iL


def staircase_product(K, L):
    """Ordered (Eilenberg-Zilber) triangulation of |K| x |L|.

    The vertex set is the product set in lexicographic order; the top
    simplices over a p-cell x q-cell are the binomial(p+q, p) monotone
    staircase paths.
    """
    nL = L.n
    maximal = set()
    for s in K.maximal:
        p = len(s) - 1
        for t in L.maximal:
            q = len(t) - 1
            for k_positions in combinations(range(p + q), p):
                kp = set(k_positions)
                a = b = 0
                path = [product_vertex(s[0], t[0], nL)]
                for step in range(p + q):
                    if step in kp:
                        a += 1
                    else:
                        b += 1
                    path.append(product_vertex(s[a], t[b], nL))
                maximal.add(tuple(path))
    labels = [(K.labels[i], L.labels[j]) for i in range(K.n) for j in range(nL)]
    return SimplicialComplex(K.n * nL, maximal, labels)


def is_product_cell(cells_K, cells_L, pairs, nL):
    """Whether a set of product vertices is a staircase simplex.

    pairs must be sorted by product index; it is a simplex iff both
    projections are weakly monotone and span simplices of the factors.
    """
    ks = [p // nL for p in pairs]
    ls = [p % nL for p in pairs]
    for a, b in zip(pairs, pairs[1:]):
        if b // nL < a // nL or b % nL < a % nL:
            return False
    return tuple(sorted(set(ks))) in cells_K and tuple(sorted(set(ls))) in cells_L


# ---------- barycentric subdivision ----------


def barycentric_subdivision(K, action=None):
    """Barycentric subdivision with a dimension-major vertex order.

    Returns (sdK, vertex_of_cell).  The order key is (dimension of the
    barycenter, orbit index, power) when an action is given, so that
    every power of the subdivided automorphism is strictly
    order-preserving on each simplex of sd(K); without an action the
    tie-break is the cell tuple itself.
    """
    cells = [c for d in range(K.dim + 1) for c in K.cells(d)]
    if action is not None:
        if action.complex is not K:
            raise ValueError("action does not act on the complex being subdivided")
        key = {}
        orbit_reps = {}
        for c in cells:
            rep = action.cell_orbit_rep(c)
            orbit_reps.setdefault((len(c) - 1, rep), []).append(c)
        ranked = sorted(orbit_reps)
        orbit_rank = {k: i for i, k in enumerate(ranked)}
        for c in cells:
            rep = action.cell_orbit_rep(c)
            power = next(
                a for a in range(action.order) if action.powers[a].apply_cell(rep) == c
            )
            key[c] = (len(c) - 1, orbit_rank[(len(c) - 1, rep)], power)
        ordered = sorted(cells, key=lambda c: key[c])
    else:
        ordered = sorted(cells, key=lambda c: (len(c), c))
    vertex_of_cell = {c: i for i, c in enumerate(ordered)}
    maximal = set()
    for s in K.maximal:
        for perm in permutations(s):
            chain = []
            for k in range(1, len(perm) + 1):
                chain.append(vertex_of_cell[tuple(sorted(perm[:k]))])
            maximal.add(tuple(sorted(chain)))
    labels = [tuple(K.labels[v] for v in c) for c in ordered]
    sdK = SimplicialComplex(len(ordered), maximal, labels)
    return sdK, vertex_of_cell


def subdivided_map(K, sdK, vertex_of_cell, f):
    """Transport a simplicial automorphism of K to sd(K)."""
    vm = {vertex_of_cell[c]: vertex_of_cell[f.apply_cell(c)] for c in vertex_of_cell}
    return SimplicialMap(sdK, sdK, vm, check=False)


def subdivided_action(K, action):
    """sd(K) with the subdivided free action; errors if not free."""
    sdK, voc = barycentric_subdivision(K, action=action)
    gen = subdivided_map(K, sdK, voc, action.generator)
    witness = gen.order_preserving_witness()
    if witness is not None:
        raise ValueError(f"subdivided generator not order-preserving on {witness}")
    # freeness is inherited: a chain fixed setwise would have each of its
    # (distinct-dimension) entries fixed, contradicting freeness on K
    return GroupAction(sdK, gen, action.order, check_free=False), sdK


# ---------- graphs of maps ----------


def graph_subcomplex(f, ambient=None):
    """The graph of f: K -> L inside staircase_product(K, L).

    f must be strictly order-preserving on every simplex of K; a
    violating simplex is reported otherwise.
    """
    K, L = f.source, f.target
    witness = f.order_preserving_witness()
    if witness is not None:
        raise ValueError(
            f"map is not order-compatible: simplex {witness} maps to "
            f"{[f.vertex_map[v] for v in witness]}"
        )
    nL = L.n
    maximal = set()
    for s in K.maximal:
        maximal.add(tuple(product_vertex(v, f.vertex_map[v], nL) for v in s))
    labels = [(K.labels[i], L.labels[j]) for i in range(K.n) for j in range(nL)]
    G = SimplicialComplex(K.n * nL, maximal, labels)
    if ambient is not None:
        cells_K = set(c for d in range(K.dim + 1) for c in K.cells(d))
        cells_L = set(c for d in range(L.dim + 1) for c in L.cells(d))
        for t in G.maximal:
            if not is_product_cell(cells_K, cells_L, t, nL):
                raise AssertionError(f"graph simplex {t} missing from the product")
    return G


def graph_is_isomorphic_to_source(f, G):
    """Dimension-preserving simplex bijection between K and graph(f)."""
    K = f.source
    nL = f.target.n
    for d in range(K.dim + 1):
        src = K.cells(d)
        img = {tuple(sorted(product_vertex(v, f.vertex_map[v], nL) for v in c)) for c in src}
        if img != set(G.cells(d)):
            return False
    return True


# ---------- quotients ----------


def _quotient_once(action):
    K = action.complex
    m = action.order
    rep = {v: action.vertex_orbit_rep(v) for v in range(K.n)}
    reps = sorted(set(rep.values()))
    rep_index = {r: i for i, r in enumerate(reps)}
    if len(reps) * m != K.n:
        return None
    maximal = set()
    for t in K.maximal:
        orbits = [rep_index[rep[v]] for v in t]
        if len(set(orbits)) != len(orbits):
            return None
        maximal.add(tuple(sorted(orbits)))
    Q = SimplicialComplex(len(reps), maximal, [K.labels[r] for r in reps])
    for d in range(K.dim + 1):
        if len(K.cells(d)) != m * len(Q.cells(d)):
            return None
    return Q


def quotient(action, max_subdivisions=2):
    """Quotient complex of a free cyclic action.

    Subdivides (barycentrically, transporting the action) until orbit
    translates are sufficiently separated, at most max_subdivisions
    times.
    """
    current = action
    for _ in range(max_subdivisions + 1):
        Q = _quotient_once(current)
        if Q is not None:
            return Q
        current, _sd = subdivided_action(current.complex, current)
    raise ValueError("quotient not simplicial after maximum subdivisions")


# ---------- complements ----------


def complement_model(K, removed, max_rounds=3):
    """Deformation-retract model of |K| minus the listed subcomplexes.

    Each removed piece is given by its cell set inside K (a set of
    simplices of K).  Pieces must be pairwise vertex-disjoint.  The
    complex is locally (stellarly) subdivided until the union of the
    removed pieces is a full subcomplex, then the full subcomplex
    spanned by the surviving vertices is returned.
    """
    removed_cells = set()
    vertex_sets = []
    for piece in removed:
        if isinstance(piece, SimplicialComplex):
            piece = piece.maximal
        cells = set()
        for t in piece:
            t = tuple(t)
            if not K.has_cell(t):
                raise ValueError(f"removed simplex {t} is not in the complex")
            for d in range(len(t)):
                cells.update(combinations(t, d + 1))
        vs = {v for c in cells for v in c}
        for other in vertex_sets:
            if vs & other:
                raise ValueError("removed subcomplexes overlap")
        vertex_sets.append(vs)
        removed_cells |= cells
    removed_vertices = set().union(*vertex_sets) if vertex_sets else set()

    for _ in range(max_rounds):
        offending = []
        for d in range(1, K.dim + 1):
            for c in K.cells(d):
                if all(v in removed_vertices for v in c) and c not in removed_cells:
                    offending.append(c)
        if not offending:
            break
        offending.sort(key=len, reverse=True)
        for c in offending:
            if K.has_cell(c):
                K = K.stellar_subdivide(c)
    else:
        raise ValueError("could not make removed subcomplexes full")

    kept = [v for v in range(K.n) if v not in removed_vertices]
    return K.full_subcomplex(kept)
