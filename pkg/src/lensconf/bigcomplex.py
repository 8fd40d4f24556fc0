"""Vectorized engine for staircase products too large for the
dictionary-based SimplicialComplex class.

Simplices are rows of int32 numpy arrays (strictly increasing vertex
ids); row-level set operations go through a void (byte-string) view so
numpy's unique/searchsorted machinery applies.  The pipeline here:

  1. enumerate the top cells of K x K as staircase paths,
  2. mark the graph vertices of the m powers of a free automorphism,
  3. stellar-subdivide the simplices whose vertices sit on two
     different graphs (so the full subcomplex on graph vertices is
     exactly the union of the graphs),
  4. take the full subcomplex on the remaining vertices: a model of
     the complement of the union of the graphs,
  5. shrink it by chain-level free-pair removals (collapse and
     coreduction),
  6. finish with exact field coefficients on what is left.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .linalg import Echelon
from .rings import GF


def _rows(a):
    """Byte view usable as a 1-d key array for unique/searchsorted."""
    a = np.ascontiguousarray(a)
    return a.view([("", a.dtype)] * a.shape[1]).ravel()


def unique_rows(a):
    if len(a) == 0:
        return a
    return np.unique(a, axis=0) if a.shape[1] == 0 else a[np.unique(_rows(a), return_index=True)[1]]


def staircase_top_cells(top, n_vertices):
    """Top cells of the staircase product K x K as an (N, 2d+1) array.

    top: (T, d+1) array of the top simplices of K (rows increasing).
    Product vertex (u, v) gets id u * n_vertices + v, matching the
    lexicographic order of the small-complex constructor.
    """
    top = np.asarray(top, dtype=np.int64)
    d = top.shape[1] - 1
    steps = d + d
    pieces = []
    for a_positions in combinations(range(steps), d):
        pa, pb = [0], [0]
        for s in range(steps):
            if s in a_positions:
                pa.append(pa[-1] + 1)
                pb.append(pb[-1])
            else:
                pa.append(pa[-1])
                pb.append(pb[-1] + 1)
        A = top[:, pa]  # (T, steps+1)
        B = top[:, pb]
        cells = (A[:, None, :] * n_vertices + B[None, :, :]).reshape(-1, steps + 1)
        pieces.append(cells)
    out = np.concatenate(pieces).astype(np.int32)
    return out


def graph_vertex_tables(perm, order):
    """is_graph (bool) and which_power (int32, -1 off-graph) over the
    product vertex set, for the graphs v -> perm^k(v)."""
    n = len(perm)
    which = np.full(n * n, -1, dtype=np.int32)
    image = np.arange(n)
    for k in range(order):
        ids = np.arange(n) * n + image
        if (which[ids] != -1).any():
            raise ValueError("action is not free: graphs intersect")
        which[ids] = k
        image = perm[image]
    return which != -1, which


def offending_simplices(cells, which_power):
    """All simplices with every vertex on a graph but on >= 2 different
    graphs; returned as a list of vertex tuples."""
    kcell = which_power[cells]
    on = kcell != -1
    lo = np.where(on, kcell, np.iinfo(np.int32).max).min(axis=1)
    hi = kcell.max(axis=1)
    mixed = np.flatnonzero((lo != np.iinfo(np.int32).max) & (hi > lo))
    bad = set()
    for i in mixed:
        verts = cells[i][on[i]]
        ks = kcell[i][on[i]]
        for size in range(2, len(verts) + 1):
            for pick in combinations(range(len(verts)), size):
                if len({ks[p] for p in pick}) >= 2:
                    bad.add(tuple(int(verts[p]) for p in pick))
    return sorted(bad, key=lambda s: (-len(s), s))


def stellar_subdivide(cells, simplex, new_vertex):
    """Replace every cell containing simplex by the cells of its
    stellar subdivision at new_vertex."""
    mask = np.ones(len(cells), dtype=bool)
    for v in simplex:
        mask &= (cells == v).any(axis=1)
    hit = cells[mask]
    if len(hit) == 0:
        return cells
    repl = []
    for v in simplex:
        r = hit.copy()
        r[r == v] = new_vertex
        repl.append(np.sort(r, axis=1))
    return np.concatenate([cells[~mask]] + repl)


def resolve_mixed_simplices(cells, which_power, max_rounds=5):
    """Stellar-subdivide until no simplex mixes two graphs.

    Returns (cells, extended which_power, number of subdivisions).
    The added barycenters are off every graph, so each subdivision
    strictly shrinks the set of mixed simplices it can support.
    """
    next_vertex = len(which_power)
    added = 0
    for _ in range(max_rounds):
        bad = offending_simplices(cells, which_power)
        if not bad:
            return cells, which_power, added
        for simplex in bad:
            cells = stellar_subdivide(cells, simplex, next_vertex)
            next_vertex += 1
            added += 1
        which_power = np.concatenate(
            [which_power, np.full(next_vertex - len(which_power), -1, dtype=np.int32)]
        )
    raise RuntimeError("mixed graph simplices survived the subdivision rounds")


def complement_facets(cells, is_graph):
    """Per-cell restriction to off-graph vertices, bucketed by size.

    Returns {size: unique (N, size) array}; together these generate the
    full subcomplex on the off-graph vertices.
    """
    keep = ~is_graph[cells]
    counts = keep.sum(axis=1)
    buckets = {}
    for size in range(1, cells.shape[1] + 1):
        rows = np.flatnonzero(counts == size)
        if len(rows) == 0:
            continue
        sub = cells[rows][keep[rows]].reshape(len(rows), size)
        buckets[size] = unique_rows(sub)
    return buckets


def all_faces(buckets, top_dim):
    """Unique simplices per dimension of the complex generated by the
    bucketed facets."""
    out = {}
    for d in range(top_dim + 1):
        pieces = []
        for size, F in buckets.items():
            if size < d + 1:
                continue
            for cols in combinations(range(size), d + 1):
                pieces.append(F[:, cols])
        if pieces:
            merged = unique_rows(np.concatenate(pieces))
            if len(merged):
                out[d] = merged
    return out


def _face_index_tables(simplices):
    """For each dimension d >= 1, an (N_d, d+1) array of indices into
    the (d-1)-row array, column i = face dropping position i."""
    tables = {}
    for d in sorted(simplices):
        if d == 0 or d - 1 not in simplices:
            continue
        S, F = simplices[d], simplices[d - 1]
        vF = _rows(F)
        cols = []
        for drop in range(d + 1):
            faces = np.delete(S, drop, axis=1)
            idx = np.searchsorted(vF, _rows(faces))
            cols.append(idx)
        tables[d] = np.stack(cols, axis=1).astype(np.int64)
    return tables


def reduce_chain_complex(simplices, max_rounds=200):
    """Chain-level reduction by free-face pairs in both directions.

    A pair (cell, face) may be removed whenever the face occurs in the
    boundary of exactly one remaining cell (reduction / collapse), or
    the cell has exactly one remaining face in its boundary
    (coreduction); both preserve homology since the boundary
    coefficients are units.  Coreduction needs a seed: one vertex per
    connected component is removed first, which only affects reduced
    degree-0 homology -- betti_0 must be computed separately.

    Returns (alive flags per dim, face index tables, n_components).
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    tables = _face_index_tables(simplices)
    alive = {d: np.ones(len(a), dtype=bool) for d, a in simplices.items()}
    n0 = len(simplices.get(0, ()))
    if 1 in tables and n0:
        e = tables[1]
        g = coo_matrix(
            (np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n0, n0)
        )
        n_comp, labels = connected_components(g, directed=False)
        _, seeds = np.unique(labels, return_index=True)
        alive[0][seeds] = False
    else:
        n_comp = n0
        alive[0][:] = False
    dims = sorted(tables)
    for _ in range(max_rounds):
        removed = 0
        # coreduction sweep, bottom-up
        for d in dims:
            while True:
                live = np.flatnonzero(alive[d])
                if len(live) == 0:
                    break
                facestat = alive[d - 1][tables[d][live]]
                counts = facestat.sum(axis=1)
                cand = counts == 1
                if not cand.any():
                    break
                rows = live[cand]
                tau = tables[d][rows, np.argmax(facestat[cand], axis=1)]
                _, first = np.unique(tau, return_index=True)
                alive[d][rows[first]] = False
                alive[d - 1][tau[first]] = False
                removed += 2 * len(first)
        # reduction sweep, top-down
        for d in reversed(dims):
            while True:
                live = np.flatnonzero(alive[d])
                if len(live) == 0:
                    break
                counts = np.bincount(
                    tables[d][live].ravel(), minlength=len(alive[d - 1])
                )
                free_flags = np.zeros(len(alive[d - 1]), dtype=bool)
                free_flags[alive[d - 1] & (counts == 1)] = True
                hitmask = free_flags[tables[d][live]]
                sigma_rows = np.flatnonzero(hitmask.any(axis=1))
                if len(sigma_rows) == 0:
                    break
                sigma = live[sigma_rows]
                # each free face has a unique coface, and each cell is
                # paired with its first free face
                tau = tables[d][sigma, np.argmax(hitmask[sigma_rows], axis=1)]
                alive[d][sigma] = False
                alive[d - 1][tau] = False
                removed += 2 * len(sigma)
        if removed == 0:
            break
    return alive, tables, n_comp


def betti_numbers(simplices, top_dim, field=None):
    """Betti numbers of the complex over a prime field (default GF(5)).

    The complex is first shrunk by chain-level free-pair removals; exact
    field elimination runs only on the (small) remainder.  betti_0 comes
    from the connected-component count, since the coreduction seeding
    consumes one vertex per component.
    """
    F = field if field is not None else GF(5)
    alive, tables, n_comp = reduce_chain_complex(simplices)
    ranks = {}
    for d in sorted(tables):
        live = np.flatnonzero(alive[d])
        if len(live) == 0:
            ranks[d] = 0
            continue
        ech = Echelon(F)
        one, neg_one = F.one(), F.normalize(-1)
        for row in tables[d][live]:
            col = {}
            for pos, fi in enumerate(row):
                if alive[d - 1][fi]:
                    col[int(fi)] = one if pos % 2 == 0 else neg_one
            ech.insert(col)
        ranks[d] = ech.rank
    betti = [n_comp]
    for d in range(1, top_dim + 1):
        n_d = int(alive[d].sum()) if d in alive else 0
        betti.append(n_d - ranks.get(d, 0) - ranks.get(d + 1, 0))
    return betti, {d: int(a.sum()) for d, a in alive.items()}
