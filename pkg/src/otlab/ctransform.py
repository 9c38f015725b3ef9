"""The c-transform calculus on finite spaces.

For a potential phi on X, its c-transform is the tightest partner keeping
the pair dual-feasible:

    phi^c(y)  = min_x { c(x, y) - phi(x) }          (vector over Y)
    psi^cbar(x) = min_y { c(x, y) - psi(y) }        (vector over X)

The double transform phi^{c cbar} dominates phi pointwise; a potential
fixed by it is c-concave. Both transform images are 1-Lipschitz for the
pseudometrics induced by the cost (worst-case cost variation across one
coordinate), and the normalized pair

    ( phi^{c cbar} + min phi^c ,  phi^c - min phi^c )

lands in the boxes [-3 ||c||, ||c||] x [0, 2 ||c||] — which is what makes
dual solutions of this canonical shape possible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import (
    RATIONAL,
    CostMatrix,
    DualPotentials,
    Number,
    is_inf,
    zero,
)
from .errors import DimensionMismatch, MetricViolation, UnboundedTransform

OVER_X = "over-X"
OVER_Y = "over-Y"


@dataclass(frozen=True, eq=False)
class PseudometricMatrix:
    """A symmetric, zero-diagonal, triangle-inequality matrix tagged with
    the axis it measures (over-X or over-Y)."""

    entries: np.ndarray
    axis: str

    def __post_init__(self):
        if self.axis not in (OVER_X, OVER_Y):
            raise ValueError(f"axis must be {OVER_X!r} or {OVER_Y!r}")
        d = self.entries
        k = d.shape[0]
        if d.shape != (k, k):
            raise DimensionMismatch("pseudometric must be square")
        for i in range(k):
            if d[i, i] != 0:
                raise MetricViolation(f"nonzero diagonal at {i}")
            for j in range(k):
                if d[i, j] < 0 or d[i, j] != d[j, i]:
                    raise MetricViolation(f"not a pseudometric at ({i}, {j})")
        for i in range(k):
            for j in range(k):
                for l in range(k):
                    if d[i, j] > d[i, l] + d[l, j]:
                        raise MetricViolation(
                            f"triangle inequality fails on ({i}, {l}, {j})"
                        )


def _check_vector(v: np.ndarray, length: int, name: str):
    if v.ndim != 1 or v.shape[0] != length:
        raise DimensionMismatch(f"{name} has shape {v.shape}, expected ({length},)")
    for x in v:
        if is_inf(x) or (isinstance(x, float) and x != x):
            raise UnboundedTransform(f"{name} must have finite entries")


def c_transform(phi, cost: CostMatrix, with_witness: bool = False):
    """phi^c over Y. Columns that are entirely +inf admit no finite value
    and raise UnboundedTransform. With ``with_witness`` the smallest-index
    minimizing x is returned alongside (deterministic tie-break)."""
    phi = np.asarray(phi)
    m, n = cost.shape
    _check_vector(phi, m, "phi")
    out = np.empty(n, dtype=cost.entries.dtype)
    witness = np.empty(n, dtype=np.int64)
    for j in range(n):
        best = None
        arg = -1
        for i in range(m):
            c = cost.entries[i, j]
            if is_inf(c):
                continue
            v = c - phi[i]
            if best is None or v < best:
                best, arg = v, i
        if best is None:
            raise UnboundedTransform(f"column {j} of the cost is entirely +inf")
        out[j] = best
        witness[j] = arg
    out.setflags(write=False)
    return (out, witness) if with_witness else out


def cbar_transform(psi, cost: CostMatrix, with_witness: bool = False):
    """psi^cbar over X; the mirror of :func:`c_transform`."""
    psi = np.asarray(psi)
    m, n = cost.shape
    _check_vector(psi, n, "psi")
    out = np.empty(m, dtype=cost.entries.dtype)
    witness = np.empty(m, dtype=np.int64)
    for i in range(m):
        best = None
        arg = -1
        for j in range(n):
            c = cost.entries[i, j]
            if is_inf(c):
                continue
            v = c - psi[j]
            if best is None or v < best:
                best, arg = v, j
        if best is None:
            raise UnboundedTransform(f"row {i} of the cost is entirely +inf")
        out[i] = best
        witness[i] = arg
    out.setflags(write=False)
    return (out, witness) if with_witness else out


def normalize_pair(phi, cost: CostMatrix) -> DualPotentials:
    """The canonical feasible pair (phi^{c cbar} + m, phi^c - m) with
    m = min_j phi^c[j].

    Dominates (phi, phi^c) in the oplus order and lands inside the
    [-3||c||, ||c||] x [0, 2||c||] boxes. Requires a bounded cost."""
    if not cost.is_bounded:
        raise UnboundedTransform("normalize_pair requires a bounded cost")
    psi = c_transform(phi, cost)
    phi_cc = cbar_transform(psi, cost)
    shift = min(psi)
    phi_out = np.array([v + shift for v in phi_cc], dtype=cost.entries.dtype)
    psi_out = np.array([v - shift for v in psi], dtype=cost.entries.dtype)
    phi_out.setflags(write=False)
    psi_out.setflags(write=False)
    return DualPotentials(phi=phi_out, psi=psi_out)


def induced_pseudometric(cost: CostMatrix, axis: str) -> PseudometricMatrix:
    """Worst-case cost variation across the other coordinate:

    over-X entry (i, i') = max_j |c[i][j] - c[i'][j]|
    over-Y entry (j, j') = max_i |c[i][j] - c[i][j']|
    """
    if not cost.is_bounded:
        raise UnboundedTransform("induced pseudometrics require a bounded cost")
    c = cost.entries
    m, n = cost.shape
    if axis == OVER_X:
        d = np.empty((m, m), dtype=c.dtype)
        for i in range(m):
            d[i, i] = zero(cost.mode)
            for k in range(i + 1, m):
                v = max(abs(c[i, j] - c[k, j]) for j in range(n))
                d[i, k] = v
                d[k, i] = v
    elif axis == OVER_Y:
        d = np.empty((n, n), dtype=c.dtype)
        for j in range(n):
            d[j, j] = zero(cost.mode)
            for l in range(j + 1, n):
                v = max(abs(c[i, j] - c[i, l]) for i in range(m))
                d[j, l] = v
                d[l, j] = v
    else:
        raise ValueError(f"axis must be {OVER_X!r} or {OVER_Y!r}")
    d.setflags(write=False)
    return PseudometricMatrix(entries=d, axis=axis)


def default_concavity_tol(cost: CostMatrix) -> Number:
    """0 in rational mode; scale-aware 1e-9 * (1 + ||c||) in float mode,
    since transforms are differences of cost entries."""
    if cost.mode == RATIONAL:
        return Fraction(0)
    return 1e-9 * (1 + float(cost.sup_norm()))


def is_c_concave(phi, cost: CostMatrix, tol: Optional[Number] = None) -> bool:
    """Whether phi is fixed by the double transform: ||phi^{c cbar} - phi||
    within tol. The double transform never falls below phi, so this is a
    one-sided check in exact arithmetic."""
    if tol is None:
        tol = default_concavity_tol(cost)
    phi = np.asarray(phi)
    phi_cc = cbar_transform(c_transform(phi, cost), cost)
    return max(abs(phi_cc[i] - phi[i]) for i in range(len(phi))) <= tol
