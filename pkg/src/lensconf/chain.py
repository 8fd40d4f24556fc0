"""Chain complexes of free modules and their (co)homology.

A complex stores one boundary matrix per degree d (mapping C_d to
C_{d-1}); well-formedness means adjacent boundaries compose to zero.
"""

from __future__ import annotations

from .rings import ZZ
from .linalg import Echelon
from .snf import snf_diagonal


class HomologySummary:
    """Per-degree betti numbers and torsion elementary divisors."""

    def __init__(self, betti, torsion):
        self.betti = dict(betti)
        self.torsion = {d: list(t) for d, t in torsion.items() if t}

    def betti_vector(self, dmax=None):
        if not self.betti:
            return []
        top = dmax if dmax is not None else max(self.betti)
        return [self.betti.get(d, 0) for d in range(top + 1)]

    def __getitem__(self, d):
        return self.betti.get(d, 0), self.torsion.get(d, [])

    def __eq__(self, other):
        return (
            isinstance(other, HomologySummary)
            and self.betti == other.betti
            and self.torsion == other.torsion
        )

    def __repr__(self):
        parts = []
        for d in sorted(set(self.betti) | set(self.torsion)):
            b = self.betti.get(d, 0)
            t = self.torsion.get(d, [])
            s = f"H{d}=Z^{b}"
            if t:
                s += "+" + "+".join(f"Z/{x}" for x in t)
            parts.append(s)
        return "HomologySummary(" + ", ".join(parts) + ")"


class ChainComplex:
    def __init__(self, dims, boundaries, ring=ZZ):
        """dims: dict degree -> rank of C_d; boundaries: degree -> SparseMatrix."""
        self.dims = {d: n for d, n in dims.items() if n}
        self.boundaries = dict(boundaries)
        self.ring = ring
        self.d_min = min(self.dims) if self.dims else 0
        self.d_max = max(self.dims) if self.dims else 0
        self._check_shapes()

    def _check_shapes(self):
        for d, M in self.boundaries.items():
            if M.cols != self.dims.get(d, 0):
                raise ValueError(f"boundary {d}: {M.cols} cols vs dim {self.dims.get(d, 0)}")
            if M.rows != self.dims.get(d - 1, 0):
                raise ValueError(
                    f"boundary {d}: {M.rows} rows vs dim {self.dims.get(d - 1, 0)}"
                )
            if M.ring != self.ring:
                raise ValueError("boundary ring mismatch")

    def validate(self):
        """Check that adjacent boundaries compose to zero, entrywise."""
        for d in self.dims:
            A = self.boundaries.get(d)
            B = self.boundaries.get(d + 1)
            if A is not None and B is not None and A.data and B.data:
                if A.matmul(B).data:
                    raise ValueError(f"boundary composition nonzero at degree {d + 1}")
        return True

    def chain_rank(self, d):
        return self.dims.get(d, 0)

    def euler_characteristic(self):
        return sum((-1) ** d * n for d, n in self.dims.items())

    def _boundary_rank(self, d):
        M = self.boundaries.get(d)
        if M is None or not M.data:
            return 0
        if self.ring.is_field:
            ech = Echelon(self.ring)
            for col in M.columns():
                ech.insert(col)
            return ech.rank
        # free rank agrees with the rank over Q, which is much cheaper
        from .rings import QQ

        ech = Echelon(QQ)
        for col in M.columns():
            ech.insert({i: QQ.normalize(v) for i, v in col.items()})
        return ech.rank

    def homology(self):
        """Betti numbers (and torsion over Z) of the complex."""
        self.validate()
        betti = {}
        torsion = {}
        ranks = {d: self._boundary_rank(d) for d in self.boundaries}
        for d, n in self.dims.items():
            betti[d] = n - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if self.ring == ZZ:
            for d in self.dims:
                M = self.boundaries.get(d + 1)
                if M is not None and M.data:
                    divisors = [x for x in snf_diagonal(M) if x > 1]
                    if divisors:
                        torsion[d] = divisors
        return HomologySummary(betti, torsion)

    def cochain_complex(self):
        """The dual complex: delta_d = transpose of boundary_{d+1}."""
        co = {}
        for d, M in self.boundaries.items():
            co[d - 1] = M.transpose()
        # reindex so that the matrix in degree d maps C^d -> C^{d+1}
        return co
