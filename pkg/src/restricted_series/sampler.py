"""Image clouds of random restricted series on a region.

Each trial draws a uniform coefficient prefix and a point of the region and
records ``f(z)`` with its rigorous tail bound; coverage of a target disk is
then measured at a few tolerances.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .core import BOUND_INFLATION, CoefficientSet
from .oracle import GRID_RESOLUTION, coverage_grid, covered_cells
from .region import Disk, RegionSpec

EPS_LEVELS = (1.0, 0.3, 0.1)
TAIL_TARGET = 0.01
_CHUNK = 1024


def max_radius(sup: float, prefix_len: int, tail: float = TAIL_TARGET) -> float:
    """Largest ``r`` with ``sup * r**L / (1 - r) <= tail`` (bisection)."""
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if sup * mid**prefix_len / (1.0 - mid) * BOUND_INFLATION <= tail:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class ImageCloud:
    z: np.ndarray
    f: np.ndarray
    tail: np.ndarray
    cells: np.ndarray
    hits: dict[float, np.ndarray]
    prefix_len: int
    seed: int
    r_max: float
    grid: Disk = field(default_factory=lambda: Disk(0j, 2.0))

    @property
    def coverage(self) -> dict[float, float]:
        return {e: (float(h.mean()) if h.size and self.z.size else 0.0) for e, h in self.hits.items()}

    def __len__(self) -> int:
        return self.z.size

    def summary(self) -> dict:
        return {
            "trials": len(self),
            "prefix_len": self.prefix_len,
            "seed": self.seed,
            "r_max": self.r_max,
            "max_tail": float(self.tail.max()) if self.tail.size else 0.0,
            "grid": self.grid.to_json(),
            "cells": int(self.cells.size),
            "coverage": {str(e): c for e, c in self.coverage.items()},
        }

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["z_re", "z_im", "f_re", "f_im", "tail"])
            for z, f, t in zip(self.z, self.f, self.tail):
                out.writerow([repr(z.real), repr(z.imag), repr(f.real), repr(f.imag), repr(float(t))])

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2)


def sample_image(
    lam: CoefficientSet,
    region: RegionSpec,
    prefix_len: int = 512,
    trials: int = 10_000,
    grid: Disk = Disk(0j, 2.0),
    resolution: int = GRID_RESOLUTION,
    seed: int = 0,
    eps_levels=EPS_LEVELS,
    r_max: float | None = None,
) -> ImageCloud:
    """Random ``f(z) = sum_{n<L} lam_n z**n`` with uniform ``lam_n`` and ``z`` in U.

    Points are restricted to ``|z| <= r_max`` (by default the largest radius
    at which the tail bound is at most 0.01). Coefficients and points use
    separate streams spawned from ``seed`` and are drawn in fixed blocks, so
    the first k samples do not depend on ``trials``.
    """
    sup = lam.sup_modulus
    limit = max_radius(sup, prefix_len)
    if r_max is None:
        r_max = limit
    elif r_max > limit:
        raise ValueError(f"r_max {r_max} leaves a tail above {TAIL_TARGET}; at most {limit:.6f} allowed")
    coef_ss, z_ss = np.random.SeedSequence(seed).spawn(2)
    coef_rng, z_rng = np.random.default_rng(coef_ss), np.random.default_rng(z_ss)
    vals = lam.array
    z = region.sample(z_rng, trials, r_max) if trials else np.zeros(0, dtype=complex)
    f = np.empty(trials, dtype=complex)
    for s in range(0, trials, _CHUNK):
        ix = coef_rng.integers(vals.size, size=(_CHUNK, prefix_len))
        c = min(_CHUNK, trials - s)
        zz = z[s:s + c]
        acc = np.zeros(c, dtype=complex)
        for n in range(prefix_len - 1, -1, -1):
            acc = acc * zz + vals[ix[:c, n]]
        f[s:s + c] = acc
    r = np.abs(z)
    tail = sup * r**prefix_len / (1.0 - r) * BOUND_INFLATION
    cells = coverage_grid(grid, resolution)
    hits = {float(e): covered_cells(f, e, cells) for e in eps_levels}
    return ImageCloud(z, f, tail, cells, hits, prefix_len, seed, r_max, grid)
