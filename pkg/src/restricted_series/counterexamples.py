"""Wedge regions on which restricted series cannot be dense, and sampled
checks of the half-plane bounds they force.

For real coefficients a thin wedge pinched at 0 and opening towards -1 keeps
``Im f`` below ``3 sup|lambda|``; for coefficients in a half-plane the mirror
wedge towards +1 keeps ``Re f`` above ``-3 sup|lambda|`` (after rotating the
half-plane to ``Re >= 0``). The checks evaluate random coefficient prefixes
exactly and charge the remainder to the rigorous tail bound.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import BOUND_INFLATION, CoefficientSet, SparseAssignment
from .errors import NotSpanning
from .region import RegionSpec, Wedge

AT_MINUS_ONE = "AtMinusOne"
AT_PLUS_ONE = "AtPlusOne"
SIDES = (AT_MINUS_ONE, AT_PLUS_ONE)
BOUND_FACTOR = 3.0


def _r_hat(k: int, alpha: float) -> float:
    """Largest modulus on the closed wedge: ``((k-1)/k) / cos(alpha)``."""
    return (k - 1) / k / math.cos(alpha)


def _minimal_N(r_hat: float) -> int | None:
    """Smallest ``N >= 1`` with ``r_hat**(2N) / (1 - r_hat) < 1``."""
    if not r_hat < 1:
        return None
    N = max(1, math.ceil(math.log(1.0 - r_hat) / (2.0 * math.log(r_hat)))) if r_hat > 0 else 1
    while N > 1 and r_hat ** (2 * (N - 1)) / (1.0 - r_hat) < 1:
        N -= 1
    while not r_hat ** (2 * N) / (1.0 - r_hat) < 1:
        N += 1
    return N


@dataclass(frozen=True)
class WedgeRegion:
    """``{-(k-1)/k < Re z < 0, |arg z - pi| < alpha}`` or its mirror at +1."""

    k: int
    re_lo: float
    re_hi: float
    alpha_k: float
    N: int
    side: str

    @property
    def arg_center(self) -> float:
        return math.pi if self.side == AT_MINUS_ONE else 0.0

    @property
    def r_hat(self) -> float:
        return _r_hat(self.k, self.alpha_k)

    def tail_sum_bound(self) -> float:
        """Bound on ``|sum_{n >= 2N} z**n|`` over the wedge."""
        r = self.r_hat
        return r ** (2 * self.N) / (1.0 - r)

    def invariants(self) -> dict[str, bool]:
        lim = (self.k - 1) / self.k
        if self.side == AT_MINUS_ONE:
            shape = math.isclose(self.re_lo, -lim) and self.re_hi == 0.0
        else:
            shape = self.re_lo == 0.0 and math.isclose(self.re_hi, lim)
        return {
            "shape": shape,
            "closure_in_disk": self.r_hat < 1.0,
            "tail_below_one": self.tail_sum_bound() < 1.0,
            "angle_condition": 2 * self.N * self.alpha_k < math.asin(1.0 / self.N),
        }

    def is_consistent(self) -> bool:
        return all(self.invariants().values())

    def contains(self, z: complex) -> bool:
        return self.as_piece().contains(complex(z))

    def as_piece(self) -> Wedge:
        return Wedge(self.re_lo, self.re_hi, self.arg_center, self.alpha_k)

    def as_region(self) -> RegionSpec:
        """The wedge as a region with accumulation point -1 or +1.

        A single wedge does not reach the circle; only the family over k does.
        """
        return RegionSpec((self.as_piece(),), 0.5 if self.side == AT_MINUS_ONE else 0)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Points of the wedge: uniform real part and uniform argument offset."""
        lo, hi = self.re_lo, self.re_hi
        x = lo + (hi - lo) * rng.random(count)
        th = self.alpha_k * (2.0 * rng.random(count) - 1.0)
        z = x * (1.0 + 1j * np.tan(th))
        return z[z != 0] if np.any(z == 0) else z

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "side": self.side,
            "re_lo": self.re_lo,
            "re_hi": self.re_hi,
            "alpha_k": self.alpha_k,
            "N": self.N,
            "r_hat": self.r_hat,
            "invariants": self.invariants(),
        }


def wedge_diagnostics(k: int, alpha: float, N: int | None = None) -> dict:
    """Evaluate the wedge conditions for a forced ``alpha`` (no search).

    With ``N`` omitted the minimal admissible N for ``r_hat`` is used, or 1 if
    none exists.
    """
    r = _r_hat(k, alpha)
    if N is None:
        N = _minimal_N(r) or 1
    tail = r ** (2 * N) / (1.0 - r) if r < 1 else math.inf
    angle_ok = 2 * N * alpha < math.asin(1.0 / N)
    return {
        "k": k,
        "alpha": alpha,
        "N": N,
        "r_hat": r,
        "tail": tail,
        "angle_ok": angle_ok,
        "consistent": r < 1 and tail < 1 and angle_ok,
    }


def build_wedge(k: int, side: str = AT_MINUS_ONE) -> WedgeRegion:
    """First consistent ``(N, alpha_k)`` found by halving alpha from pi/64."""
    if int(k) != k or k < 2:
        raise ValueError("k must be an integer >= 2")
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    k = int(k)
    alpha = math.pi / 64
    while True:
        r = _r_hat(k, alpha)
        N = _minimal_N(r)
        if N is not None and 2 * N * alpha < math.asin(1.0 / N):
            break
        alpha /= 2.0
    lim = (k - 1) / k
    lo, hi = (-lim, 0.0) if side == AT_MINUS_ONE else (0.0, lim)
    return WedgeRegion(k, lo, hi, alpha, N, side)


# --------------------------------------------------------------------------
# Sampled evasion checks
# --------------------------------------------------------------------------


@dataclass
class EvasionReport:
    quantity: str  # "max_imag" or "min_real"
    value: float
    bound: float
    trials: int
    z_samples: int
    prefix_len: int
    seed: int
    passed: bool
    worst_case: float  # over all sequences, at the sampled points
    points: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, complex))
    per_point: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    def to_json(self) -> dict:
        return {
            self.quantity: self.value,
            "bound": self.bound,
            "worst_case": self.worst_case,
            "trials": self.trials,
            "z_samples": self.z_samples,
            "prefix_len": self.prefix_len,
            "seed": self.seed,
            "pass": self.passed,
        }

    def write_csv(self, path) -> None:
        """Per-point sampled extrema: ``z_re, z_im, <quantity>``."""
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["z_re", "z_im", self.quantity])
            for z, v in zip(self.points, self.per_point):
                out.writerow([repr(z.real), repr(z.imag), repr(float(v))])


def _elements(lam: CoefficientSet | Sequence[complex]) -> np.ndarray:
    """Distinct elements; unlike CoefficientSet this accepts a single value."""
    if isinstance(lam, CoefficientSet):
        return lam.array.copy()
    vals: list[complex] = []
    for x in lam:
        x = complex(x) if not isinstance(x, (list, tuple)) else complex(x[0], x[1])
        if x not in vals:
            vals.append(x)
    if not vals:
        raise ValueError("coefficient set is empty")
    return np.array(vals, dtype=complex)


def _check_prefix_len(prefix_len: int, wedge: WedgeRegion) -> None:
    if prefix_len < 2 * wedge.N:
        raise ValueError(f"prefix_len must be >= 2N = {2 * wedge.N}")
    r = wedge.r_hat
    if r ** prefix_len / (1.0 - r) * BOUND_INFLATION >= 0.01:
        raise ValueError("prefix_len too short: tail bound at r_hat must be < 0.01 sup|lambda|")


def _sampled_extreme(
    parts: list[tuple[np.ndarray, np.ndarray]],
    sizes: int,
    trials: int,
    prefix_len: int,
    rng: np.random.Generator,
    sign: float,
) -> np.ndarray:
    """Per-point max of ``sign * sum_n g(lambda_n, z**n)`` over random sequences.

    ``parts`` pairs per-element weights with real power matrices; the target
    quantity is ``sum_k weight_k[lambda_n] * P_k[n, z]``.
    """
    best = np.full(parts[0][1].shape[1], -np.inf)
    chunk = 2000
    done = 0
    while done < trials:
        c = min(chunk, trials - done)
        ix = rng.integers(sizes, size=(c, prefix_len))
        acc = np.zeros((c, best.size))
        for weights, P in parts:
            acc += weights[ix] @ P
        best = np.maximum(best, (sign * acc).max(axis=0))
        done += c
    return best


def imag_bound_check(
    lam: CoefficientSet | Sequence[complex],
    wedge: WedgeRegion,
    trials: int = 10_000,
    z_samples: int = 100,
    prefix_len: int = 512,
    seed: int = 0,
) -> EvasionReport:
    """Sampled ``max Im(prefix) + tail`` against ``3 sup|lambda|`` on a wedge at -1."""
    vals = _elements(lam)
    if np.any(np.abs(vals.imag) > 1e-12):
        raise ValueError("imag_bound_check needs a real coefficient set")
    if wedge.side != AT_MINUS_ONE:
        raise ValueError("imag_bound_check needs a wedge at -1")
    _check_prefix_len(prefix_len, wedge)
    vals = vals.real
    sup = float(np.abs(vals).max())
    coef_rng, z_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    z = wedge.sample(z_rng, z_samples)
    P = np.power.outer(z, np.arange(prefix_len)).T  # (prefix_len, points)
    r = np.abs(z)
    tail = sup * r**prefix_len / (1.0 - r) * BOUND_INFLATION
    if trials:
        sampled = _sampled_extreme([(vals, P.imag)], vals.size, trials, prefix_len, coef_rng, 1.0) + tail
        value = float(sampled.max())
    else:
        sampled, value = np.zeros(z.size), 0.0
    worst = np.maximum(vals.max() * P.imag, vals.min() * P.imag).sum(axis=0) + tail
    bound = BOUND_FACTOR * sup
    return EvasionReport(
        "max_imag", value, bound, trials, z.size, prefix_len, seed,
        value <= bound + 1e-9, float(worst.max()), z, sampled,
    )


def half_plane_rotation(vals: np.ndarray) -> complex:
    """Unit factor turning a half-plane-contained set into ``Re >= 0``.

    The arc of element directions is centred on the positive real axis.
    Raises NotSpanning when no closed half-plane through 0 holds the set.
    """
    args = np.unique(np.round(np.angle(vals[vals != 0]) % (2 * np.pi), 13))
    if args.size == 0:
        return 1.0 + 0j
    gaps = np.diff(np.append(args, args[0] + 2 * np.pi))
    i = int(np.argmax(gaps))
    if gaps[i] < math.pi - 1e-12:
        raise NotSpanning("coefficient set is not contained in a closed half-plane")
    start = args[(i + 1) % args.size]
    centre = start + (2 * math.pi - gaps[i]) / 2.0
    return complex(np.exp(-1j * centre))


def real_bound_check(
    lam: CoefficientSet | Sequence[complex],
    wedge: WedgeRegion,
    trials: int = 10_000,
    z_samples: int = 100,
    prefix_len: int = 512,
    seed: int = 0,
) -> EvasionReport:
    """Sampled ``min Re(prefix) - tail`` against ``-3 sup|lambda|`` on a wedge at +1.

    The set is first rotated so that it lies in ``Re >= 0``. The constant 3
    follows the same split as the imaginary-part bound: the first 2N terms
    have arguments within ``arcsin(1/N)`` of the rotated directions, and the
    rest is below ``sup|lambda|``.
    """
    vals = _elements(lam)
    if wedge.side != AT_PLUS_ONE:
        raise ValueError("real_bound_check needs a wedge at +1")
    _check_prefix_len(prefix_len, wedge)
    vals = vals * half_plane_rotation(vals)
    sup = float(np.abs(vals).max())
    coef_rng, z_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    z = wedge.sample(z_rng, z_samples)
    P = np.power.outer(z, np.arange(prefix_len)).T
    r = np.abs(z)
    tail = sup * r**prefix_len / (1.0 - r) * BOUND_INFLATION
    parts = [(vals.real, P.real), (-vals.imag, P.imag)]
    if trials:
        sampled = -_sampled_extreme(parts, vals.size, trials, prefix_len, coef_rng, -1.0) - tail
        value = float(sampled.min())
    else:
        sampled, value = np.zeros(z.size), 0.0
    terms = vals.real[:, None, None] * P.real[None] - vals.imag[:, None, None] * P.imag[None]
    worst = terms.min(axis=0).sum(axis=0) - tail
    bound = -BOUND_FACTOR * sup
    return EvasionReport(
        "min_real", value, bound, trials, z.size, prefix_len, seed,
        value >= bound - 1e-9, float(worst.min()), z, sampled,
    )


# --------------------------------------------------------------------------
# Closed forms for the odd-indicator series
# --------------------------------------------------------------------------


def remark_closed_forms(z: complex) -> tuple[complex, complex]:
    """``sum z**(2k+1) = z/(1-z**2)`` and, after subtracting 1/2 from every
    coefficient, ``-1/(2(1+z))``."""
    z = complex(z)
    if not abs(z) < 1:
        raise ValueError("|z| must be < 1")
    return z / (1.0 - z * z), -1.0 / (2.0 * (1.0 + z))


def odd_indicator(length: int, shift: float = 0.0) -> SparseAssignment:
    """Coefficients ``[n odd] - shift`` for ``0 <= n < length``."""
    return SparseAssignment.dense([(n % 2) - shift for n in range(length)])
