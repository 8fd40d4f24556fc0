"""Closed-form invariants of n-point orbit configuration spaces of the
free phase actions on S^3.

The universal cover of the n-point configuration space fibers over S^3
with fibers that collapse, additively, to wedges of (mk - 1) copies of
S^2 for k = 1 .. n-1; the Poincare polynomial below is that product
formula.  Fundamental groups come from covering-space bookkeeping, not
from a presentation computation.
"""

from __future__ import annotations

import math


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poincare_polynomial(m, n):
    """Coefficient list of (1 + q^3) * prod_{k=1..n-1} (1 + (mk-1) q^2)."""
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    poly = [1, 0, 0, 1]
    for k in range(1, n):
        poly = _poly_mul(poly, [1, 0, m * k - 1])
    return poly


def poincare_polynomial_string(m, n):
    coeffs = poincare_polynomial(m, n)
    parts = []
    for d, c in enumerate(coeffs):
        if not c:
            continue
        if d == 0:
            parts.append(str(c))
        elif c == 1:
            parts.append(f"q^{d}")
        else:
            parts.append(f"{c}q^{d}")
    return " + ".join(parts)


def h2_rank(m, n):
    """Rank of H^2 of the universal cover: sum_{k=1..n-1} (mk - 1)."""
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    return sum(m * k - 1 for k in range(1, n))


def h2_rank_closed_form_7(n):
    """For m = 7 the sum telescopes to (n - 1)(7n - 2) / 2."""
    return (n - 1) * (7 * n - 2) // 2


def fundamental_group_summary(m, n, ordered=True):
    """Family and order of pi_1 of the (un)ordered configuration space
    of n points in the lens quotient."""
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    if ordered:
        family = f"Z_{m}" if n == 1 else f"(Z_{m})^{n}"
        order = m**n
    else:
        family = f"S_{n} wr Z_{m}"
        order = math.factorial(n) * m**n
    return {"family": family, "order": order, "ordered": ordered}
