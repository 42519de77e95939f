"""Exhaustive ground truth at desk scale.

``best_prefix_error`` finds the exact best length-L assignment at a fixed
``tau`` by enumeration or meet-in-the-middle; ``net_coverage`` measures how
much of a disk a finite point set covers at tolerance eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .core import CoefficientSet, SparseAssignment
from .errors import BudgetExceeded

ENUMERATION_CAP = 1 << 26
DIRECT_MAX_LENGTH = 16
GRID_RESOLUTION = 100


@dataclass(frozen=True)
class OracleResult:
    best_error: float
    best_assignment: SparseAssignment
    evaluated_count: int
    method: str

    def to_json(self) -> dict:
        return {
            "best_error": self.best_error,
            "best_assignment": self.best_assignment.to_json(),
            "evaluated_count": self.evaluated_count,
            "method": self.method,
        }


def _block_sums(vals: np.ndarray, tau: complex, start: int, length: int) -> np.ndarray:
    """All sums ``sum_{j<length} vals[d_j] * tau**(start+j)`` in lexicographic
    order of the digit string ``d_0 d_1 ...`` (``d_0`` most significant)."""
    sums = np.zeros(1, dtype=complex)
    for j in range(length):
        sums = (sums[:, None] + vals[None, :] * tau ** (start + j)).ravel()
    return sums


def _digits(index: int, base: int, length: int) -> list[int]:
    out = [0] * length
    for j in range(length - 1, -1, -1):
        index, out[j] = divmod(index, base)
    return out


def best_prefix_error(
    lam: CoefficientSet, tau: complex, w: complex, L: int, method: str = "auto", start: int = 0
) -> OracleResult:
    """Exact ``min |sum_{start<=n<start+L} lam_n tau**n - w|`` over all
    ``|Lambda|**L`` choices.

    ``method`` is "direct", "mitm" (meet in the middle: half sums of the first
    and last L/2 indices matched with a k-d tree) or "auto" (direct up to
    length 16). Ties resolve to the lexicographically first assignment.
    """
    tau, w = complex(tau), complex(w)
    if not abs(tau) < 1:
        raise ValueError("|tau| must be < 1")
    if L < 0:
        raise ValueError("L must be >= 0")
    vals = lam.array
    k = vals.size
    if method == "auto":
        method = "direct" if L <= DIRECT_MAX_LENGTH else "mitm"
    total = k**L
    if method == "direct":
        if total > ENUMERATION_CAP:
            raise BudgetExceeded(f"{k}**{L} assignments exceed the enumeration cap")
        sums = _block_sums(vals, tau, start, L)
        err = np.abs(sums - w)
        i = int(np.argmin(err))
        digits = _digits(i, k, L)
        best = float(err[i])
    elif method == "mitm":
        h = L // 2
        if k ** (L - h) > ENUMERATION_CAP:
            raise BudgetExceeded(f"half enumeration {k}**{L - h} exceeds the cap")
        A = _block_sums(vals, tau, start, h)
        B = _block_sums(vals, tau, start + h, L - h)
        tree = cKDTree(np.column_stack([A.real, A.imag]))
        q = w - B
        _, ia = tree.query(np.column_stack([q.real, q.imag]))
        err = np.abs(A[ia] + B - w)
        j = int(np.argmin(err))
        best = float(err[j])
        # settle near-ties exactly in lexicographic order
        cand = np.flatnonzero(err <= best + 1e-15)
        keys = sorted((int(ia[c]), int(c)) for c in cand)
        a_ix, b_ix = keys[0]
        best = float(abs(A[a_ix] + B[b_ix] - w))
        digits = _digits(a_ix, k, h) + _digits(b_ix, k, L - h)
    else:
        raise ValueError(f"unknown method {method!r}")
    assignment = SparseAssignment.dense((vals[d] for d in digits), start)
    return OracleResult(best, assignment, total, method)


def coverage_grid(region, resolution: int = GRID_RESOLUTION) -> np.ndarray:
    """Cell centres of a ``resolution x resolution`` grid over the region's
    bounding box, restricted to the region."""
    x0, x1, y0, y1 = region.bbox()
    xs = x0 + (np.arange(resolution) + 0.5) * (x1 - x0) / resolution
    ys = y0 + (np.arange(resolution) + 0.5) * (y1 - y0) / resolution
    g = (xs[None, :] + 1j * ys[:, None]).ravel()
    return g[region.contains_array(g)]


def covered_cells(points, eps: float, cells: np.ndarray) -> np.ndarray:
    """Boolean mask of cells within distance ``< eps`` of some point."""
    pts = np.asarray(list(points) if not isinstance(points, np.ndarray) else points, dtype=complex)
    if pts.size == 0 or cells.size == 0:
        return np.zeros(cells.size, dtype=bool)
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    d, _ = tree.query(np.column_stack([cells.real, cells.imag]), distance_upper_bound=eps)
    return d < eps


def net_coverage(points, eps: float, region, resolution: int = GRID_RESOLUTION) -> float:
    """Fraction of grid cells of the region within ``eps`` of some point."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    cells = coverage_grid(region, resolution)
    if cells.size == 0:
        return 0.0
    return float(covered_cells(points, eps, cells).mean())
