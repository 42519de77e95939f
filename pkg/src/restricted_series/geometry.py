"""Geometry of a coefficient set: line / half-plane / spanning classification,
the four-element "get around" quadruple, the descent radius and the
bounded-partial-sum scheduler.

Arguments are taken in [0, 2*pi) throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import CoefficientSet, SparseAssignment, complex_to_json
from .errors import NotSpanning, VerificationFailed

TWO_PI = 2.0 * math.pi
ARG_TOL = 1e-12


def arg0(z: complex) -> float:
    """Argument in [0, 2*pi), with values within ARG_TOL of 2*pi snapped to 0."""
    a = cmath.phase(z) % TWO_PI
    return 0.0 if a > TWO_PI - ARG_TOL else a


def arg_ratio(num: complex, den: complex) -> float:
    return arg0(num / den)


@dataclass(frozen=True)
class LambdaClass:
    kind: str  # "line", "half_plane" or "spanning"
    in_half_plane: bool
    alpha: float | None = None  # half-plane {alpha <= arg z <= alpha + pi}
    direction: complex | None = None
    offset: complex | None = None
    witness: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "in_half_plane": self.in_half_plane}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.direction is not None:
            out["direction"] = complex_to_json(self.direction)
            out["offset"] = complex_to_json(self.offset)
        return out


@dataclass(frozen=True)
class DeltaQuadruple:
    deltas: tuple[complex, complex, complex, complex]
    alpha0: float

    def gaps(self) -> list[float]:
        d = self.deltas
        return [arg_ratio(d[(j + 1) % 4], d[j]) for j in range(4)]

    def check(self) -> bool:
        g = self.gaps()
        return all(0.0 <= x < math.pi for x in g) and abs(max(g) - self.alpha0) <= 1e-12

    def to_json(self) -> dict:
        return {"deltas": [complex_to_json(z) for z in self.deltas], "alpha0": self.alpha0}


def _line_fit(elems: Sequence[complex]) -> tuple[complex, complex] | None:
    p0 = elems[0]
    far = max(elems, key=lambda z: abs(z - p0))
    span = abs(far - p0)
    d = (far - p0) / span
    scale = 1.0 + max(abs(z) for z in elems)
    for z in elems:
        if abs(((z - p0) * d.conjugate()).imag) > ARG_TOL * scale:
            return None
    if not 0.0 <= arg0(d) < math.pi:
        d = -d
    offset = p0 - ((p0 * d.conjugate()).real) * d
    return d, offset


def _direction_gaps(elems: Sequence[complex]) -> tuple[np.ndarray, np.ndarray]:
    """Sorted distinct arguments of nonzero elements and the circular gaps
    following each of them."""
    args = sorted({round(arg0(z), 13) for z in elems if z != 0})
    a = np.array(args)
    gaps = np.diff(np.append(a, a[0] + TWO_PI))
    return a, gaps


def classify_lambda(lam: CoefficientSet | Sequence[complex]) -> LambdaClass:
    elems = [complex(z) for z in lam]
    args, gaps = _direction_gaps(elems)
    i = int(np.argmax(gaps))
    in_half = bool(gaps[i] >= math.pi - ARG_TOL)
    alpha = float(args[(i + 1) % len(args)]) if in_half else None
    line = _line_fit(elems)
    if line is not None:
        return LambdaClass("line", True, alpha, line[0], line[1], {"largest_gap": float(gaps[i])})
    if in_half:
        return LambdaClass("half_plane", True, alpha, witness={"largest_gap": float(gaps[i])})
    return LambdaClass("spanning", False, witness={"args": args.tolist(), "gaps": gaps.tolist()})


def find_delta_quadruple(lam: CoefficientSet) -> DeltaQuadruple:
    """Four elements whose consecutive argument ratios lie in [0, pi).

    The set is first divided by its element of largest modulus so that 1
    belongs to it; the remaining choices follow the existence argument with
    every supremum a maximum. Among the admissible choices for the third
    and fourth elements the one with the smallest maximal gap is kept.
    """
    if classify_lambda(lam).kind != "spanning":
        raise NotSpanning("coefficient set lies in a closed half-plane through 0")
    elems = list(lam)
    iu = max(range(len(elems)), key=lambda k: (abs(elems[k]), -k))
    u = elems[iu]
    args = [arg0(z / u) if z != 0 else None for z in elems]
    upper = [k for k, a in enumerate(args) if a is not None and ARG_TOL < a < math.pi - ARG_TOL]
    beta = max(args[k] for k in upper)
    i1 = next(k for k in upper if args[k] == beta)
    cands2 = [k for k, a in enumerate(args) if a is not None and math.pi - ARG_TOL <= a < beta + math.pi - ARG_TOL]
    lower = [k for k, a in enumerate(args) if a is not None and math.pi + ARG_TOL < a]
    best: DeltaQuadruple | None = None
    for i2 in cands2:
        choices3 = [i2] if args[i2] > math.pi + ARG_TOL else lower
        for i3 in choices3:
            d = (elems[iu], elems[i1], elems[i2], elems[i3])
            q = DeltaQuadruple(d, 0.0)
            a0 = max(q.gaps())
            if a0 < math.pi and (best is None or a0 < best.alpha0):
                best = DeltaQuadruple(d, a0)
    if best is None or not best.check():
        raise VerificationFailed("could not assemble a valid delta quadruple")
    return best


def _quadruple_radius(q: DeltaQuadruple) -> float:
    return max(abs(d) for d in q.deltas) / (2.0 * math.cos(q.alpha0 / 2.0))


def _arc_radius(elems: Sequence[complex]) -> float:
    """Radius from the angular arcs between all element directions.

    A direction inside an arc of width g is within g/2 of an endpoint, and an
    element at angle theta from ``-z`` shrinks ``|z|`` once
    ``|z| > |lambda| / (2 cos theta)``.
    """
    best_mod: dict[float, float] = {}
    for z in elems:
        if z == 0:
            continue
        key = round(arg0(z), 13)
        best_mod[key] = min(best_mod.get(key, math.inf), abs(z))
    keys = sorted(best_mod)
    R = 0.0
    for k, a in enumerate(keys):
        b = keys[(k + 1) % len(keys)]
        g = (b - a) % TWO_PI or TWO_PI
        if g >= math.pi:
            return math.inf
        R = max(R, max(best_mod[a], best_mod[b]) / (2.0 * math.cos(g / 2.0)))
    return R


def descent_check(lam: CoefficientSet, R: float, directions: int = 10_000) -> bool:
    """Sampled check: on ``|z| = R`` some element strictly shrinks ``|z|``."""
    z = R * np.exp(2j * np.pi * (np.arange(directions) + 0.5) / directions)
    moved = np.abs(z[:, None] + lam.array[None, :]).min(axis=1)
    return bool(np.all(moved < np.abs(z)))


def descent_radius(lam: CoefficientSet) -> float:
    """R such that every ``|z| > R`` admits ``lambda`` with ``|z + lambda| < |z|``.

    Uses the smaller of the quadruple bound ``max|Delta_j| / (2 cos(alpha0/2))``
    and the all-elements arc bound, inflated by 1%, then verifies by sampling.
    """
    q = find_delta_quadruple(lam)
    R = 1.01 * min(_quadruple_radius(q), _arc_radius(list(lam)))
    if not descent_check(lam, R):
        raise VerificationFailed(f"descent radius {R!r} failed the sampled check")
    return R


def _min_modulus_element(lam: CoefficientSet) -> complex:
    return min(lam, key=lambda z: (abs(z), z.real, z.imag))


@dataclass
class ScheduleTrace:
    partial_sum: complex
    max_partial: float
    R: float
    R_star: float


def schedule_with_trace(
    lam: CoefficientSet, z: complex, indices: Sequence[int], R: float | None = None
) -> tuple[SparseAssignment, ScheduleTrace]:
    if R is None:
        R = descent_radius(lam)
    R_star = R + lam.sup_modulus
    z = complex(z)
    if not abs(z) < 1.0:
        raise ValueError("|z| must be < 1")
    elems = list(lam)
    free = _min_modulus_element(lam)
    s = 0j
    peak = 0.0
    out: list[tuple[int, complex]] = []
    prev = None
    p = 0j
    for n in indices:
        if prev is not None and n == prev + 1:
            p *= z
        else:
            p = z**n
        prev = n
        if abs(s) <= R:
            v = free
        else:
            v = min(elems, key=lambda lm: abs(s + lm * p))
        s += v * p
        peak = max(peak, abs(s))
        out.append((n, v))
    return SparseAssignment(out), ScheduleTrace(s, peak, R, R_star)


def bounded_tail_schedule(
    lam: CoefficientSet, z: complex, indices: Sequence[int]
) -> tuple[SparseAssignment, float]:
    """Assign coefficients on ``indices`` keeping every partial sum within R*.

    Whenever the running sum exceeds the descent radius R, the element that
    shrinks it most (for the rotated, shrunk set ``z**n * Lambda``) is used;
    otherwise the element of smallest modulus. Returns ``R* = R + sup|lambda|``.
    """
    if classify_lambda(lam).kind != "spanning":
        raise NotSpanning()
    assignment, trace = schedule_with_trace(lam, z, indices)
    return assignment, trace.R_star


# --------------------------------------------------------------------------
# Convex polygon helpers
# --------------------------------------------------------------------------


def convex_hull(points: Sequence[complex]) -> list[complex]:
    """Counter-clockwise hull vertices (monotone chain)."""
    pts = sorted({(p.real, p.imag) for p in map(complex, points)})
    if len(pts) <= 2:
        return [complex(*p) for p in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [complex(*p) for p in lower[:-1] + upper[:-1]]


def origin_inradius(points: Sequence[complex]) -> float:
    """Largest r with the disk D_r inside conv(points); 0 if 0 is not interior."""
    hull = convex_hull(points)
    if len(hull) < 3:
        return 0.0
    r = math.inf
    for a, b in zip(hull, hull[1:] + hull[:1]):
        e = b - a
        # signed distance of 0 to the edge line, positive on the inner side
        dist = ((-a) * e.conjugate()).imag / abs(e)
        r = min(r, dist)
    return max(r, 0.0)


def diameter(points: Sequence[complex]) -> float:
    pts = list(map(complex, points))
    return max(abs(p - q) for p in pts for q in pts)


def convex_weights(x: complex, vertices: Sequence[complex]) -> np.ndarray:
    """Nonnegative weights summing to 1 with ``sum w_j v_j = x``.

    Searches the triangles spanned by the vertices; raises if ``x`` is outside
    their convex hull.
    """
    v = list(map(complex, vertices))
    n = len(v)
    best = None
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                A = np.array([[v[i].real, v[j].real, v[k].real], [v[i].imag, v[j].imag, v[k].imag], [1, 1, 1]])
                if abs(np.linalg.det(A)) < 1e-14:
                    continue
                lam = np.linalg.solve(A, [x.real, x.imag, 1.0])
                worst = lam.min()
                if best is None or worst > best[0]:
                    wts = np.zeros(n)
                    wts[[i, j, k]] = lam
                    best = (worst, wts)
    if best is None or best[0] < -1e-9:
        raise ValueError("point lies outside the convex hull")
    w = np.clip(best[1], 0.0, None)
    return w / w.sum()
