"""Approximating complex targets by sums of distinct powers of a unimodular zeta.

Two routes:

* generic ``zeta`` (irrational angle, or a root of unity of degree > 2):
  greedy phase matching followed by an exhaustive one/two-term closure;
* ``zeta`` in {+-i, +-w, +-w^2}: round to the Gaussian/Eisenstein lattice
  and expand the lattice point exactly into non-negative power sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Angle
from .errors import HorizonExhausted, InvalidZeta

COVERING_RADIUS = {4: math.sqrt(2.0) / 2.0, 3: 1.0 / math.sqrt(3.0), 6: 1.0 / math.sqrt(3.0)}


# --------------------------------------------------------------------------
# Exact arithmetic in Z[zeta] for the six lattice roots
# --------------------------------------------------------------------------


def _lattice_trace(zeta: Angle) -> int:
    """``zeta + 1/zeta`` (an integer in {-1, 0, 1}) for a lattice root."""
    if not zeta.is_lattice_root:
        raise InvalidZeta(f"{zeta} is not one of +-i, +-w, +-w^2")
    return round(2.0 * math.cos(zeta.radians))


@dataclass(frozen=True)
class RingElement:
    """``a + b*zeta`` with integers a, b; ``zeta**2 = trace*zeta - 1``."""

    a: int
    b: int
    trace: int

    def __add__(self, other: RingElement) -> RingElement:
        return RingElement(self.a + other.a, self.b + other.b, self.trace)

    def times_zeta(self) -> RingElement:
        return RingElement(-self.b, self.a + self.b * self.trace, self.trace)


def ring_power(zeta: Angle, n: int) -> RingElement:
    t = _lattice_trace(zeta)
    x = RingElement(1, 0, t)
    for _ in range(n % zeta.denominator):
        x = x.times_zeta()
    return x


def ring_sum(zeta: Angle, exponents: Sequence[int]) -> tuple[int, int]:
    """Exact ``sum(zeta**n)`` as the integer pair ``(a, b)``."""
    _lattice_trace(zeta)
    q = zeta.denominator
    table = [ring_power(zeta, r) for r in range(q)]
    a = b = 0
    for n in exponents:
        e = table[n % q]
        a += e.a
        b += e.b
    return a, b


# --------------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentSum:
    """``sum(zeta**n for n in exponents)`` with distinct exponents ``>= min_index``."""

    zeta: Angle
    exponents: tuple[int, ...]
    min_index: int

    def __post_init__(self):
        exps = tuple(sorted(int(n) for n in self.exponents))
        if len(set(exps)) != len(exps):
            raise ValueError("exponents must be pairwise distinct")
        if exps and exps[0] < self.min_index:
            raise ValueError("exponents must be >= min_index")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "zeta", Angle.of(self.zeta))

    def value(self) -> complex:
        if not self.exponents:
            return 0j
        return complex(self.zeta_powers().sum())

    def zeta_powers(self) -> np.ndarray:
        return np.array([self.zeta.power(n) for n in self.exponents], dtype=complex)

    def exact_value(self) -> tuple[int, int]:
        return ring_sum(self.zeta, self.exponents)

    def to_json(self) -> dict:
        return {"zeta": self.zeta.to_json(), "min_index": self.min_index, "exponents": list(self.exponents)}

    @classmethod
    def from_json(cls, obj: dict) -> ExponentSum:
        return cls(Angle.from_json(obj["zeta"]), tuple(obj["exponents"]), int(obj["min_index"]))


@dataclass(frozen=True)
class LatticePoint:
    a: int
    b: int
    zeta: Angle

    def __post_init__(self):
        object.__setattr__(self, "zeta", Angle.of(self.zeta))
        _lattice_trace(self.zeta)

    def value(self) -> complex:
        return self.a + self.b * self.zeta.value

    def ring(self) -> RingElement:
        return RingElement(self.a, self.b, _lattice_trace(self.zeta))


# --------------------------------------------------------------------------
# Generic branch: greedy phase matching
# --------------------------------------------------------------------------


@dataclass
class GreedyStep:
    exponent: int
    residual_before: float
    residual_after: float
    angle: float  # between zeta**exponent and the residual direction


def _best_pair(r: complex, vals: np.ndarray, idx: np.ndarray) -> tuple[float, int, int]:
    """Exhaustive best ``|r - v_i - v_j|`` over distinct pool entries i != j.

    Pool values lie on the unit circle, so the nearest partner of a target
    is found by angular order.
    """
    n = vals.size
    if n < 2:
        return math.inf, -1, -1
    ang = np.angle(vals)
    order = np.argsort(ang, kind="stable")
    sorted_ang = ang[order]
    q = r - vals
    pos = np.searchsorted(sorted_ang, np.angle(q))
    best = (math.inf, -1, -1)
    rows = np.arange(n)
    for off in (-2, -1, 0, 1):
        cand = order[(pos + off) % n]
        d = np.abs(q - vals[cand])
        d[cand == rows] = np.inf
        i = int(np.argmin(d))
        if d[i] < best[0]:
            best = (float(d[i]), i, int(cand[i]))
    _, i, j = best
    return best[0], int(idx[i]), int(idx[j])


def unimodular_sum_approx(
    w: complex,
    zeta: Angle | float,
    N: int,
    eps: float,
    horizon: int = 1 << 16,
    record: list[GreedyStep] | None = None,
    best_effort: bool = False,
) -> ExponentSum:
    """Distinct exponents ``n >= N`` with ``|sum zeta**n - w| < eps``.

    While the residual has modulus > 1, append the unused exponent whose
    power is closest to the residual direction. Then close the gap with
    the best of zero, one or two further terms; the two-term search is
    exhaustive over the pool, so it includes the pair at angles
    ``arg r +- arccos(|r|/2)``. The pool ``N <= n < N + H`` doubles up to
    ``horizon`` whenever a step cannot make progress. With ``best_effort``
    the best sum found inside the horizon is returned instead of raising.
    """
    zeta = Angle.of(zeta)
    if zeta.is_real_point or zeta.is_lattice_root:
        raise InvalidZeta(f"zeta = e({zeta.turns}) needs the lattice branch")
    if not eps > 0:
        raise ValueError("eps must be positive")
    w = complex(w)
    H = min(horizon, max(64, 2 * int(math.ceil(abs(w))) + 16))
    pool = zeta.powers(N, H)
    used = np.zeros(H, dtype=bool)
    chosen: list[int] = []
    r = w

    def grow() -> bool:
        nonlocal H, pool, used
        if H >= horizon:
            return False
        H2 = min(horizon, 2 * H)
        pool = np.concatenate([pool, zeta.powers(N + H, H2 - H)])
        used = np.concatenate([used, np.zeros(H2 - H, dtype=bool)])
        H = H2
        return True

    while abs(r) > 1.0:
        u = r / abs(r)
        d = np.abs(pool - u)
        d[used] = np.inf
        j = int(np.argmin(d))
        after = abs(r - pool[j])
        if not math.isfinite(d[j]) or after >= abs(r):
            if grow():
                continue
            if best_effort:
                break
            raise HorizonExhausted(f"no exponent below {N + H} reduces |residual| = {abs(r):.3g}")
        if record is not None:
            phi = 2.0 * math.asin(min(1.0, d[j] / 2.0))
            record.append(GreedyStep(N + j, abs(r), after, phi))
        used[j] = True
        chosen.append(N + j)
        r -= pool[j]

    while True:
        free = np.flatnonzero(~used)
        vals = pool[free]
        best_err, extra = abs(r), []
        if free.size:
            d1 = np.abs(r - vals)
            i = int(np.argmin(d1))
            if d1[i] < best_err:
                best_err, extra = float(d1[i]), [int(free[i])]
        e2, i2, j2 = _best_pair(r, vals, free)
        if e2 < best_err:
            best_err, extra = e2, [i2, j2]
        if best_err < eps or (best_effort and H >= horizon):
            chosen.extend(N + k for k in extra)
            return ExponentSum(zeta, tuple(chosen), N)
        if not grow():
            raise HorizonExhausted(
                f"closure error {best_err:.3g} >= eps = {eps:.3g} with exponents below {N + H}"
            )


# --------------------------------------------------------------------------
# Lattice branch
# --------------------------------------------------------------------------


def lattice_round(w: complex, zeta: Angle | float) -> LatticePoint:
    """Nearest point ``a + b*zeta`` of Z[zeta].

    Ties go to smaller ``|a|+|b|``, then smaller ``a``, then smaller ``b``.
    """
    zeta = Angle.of(zeta)
    _lattice_trace(zeta)
    w = complex(w)
    z = zeta.value
    t = w.imag / z.imag
    s = w.real - t * z.real
    s0, t0 = round(s), round(t)
    best_key = None
    best = (0, 0)
    for a in range(s0 - 2, s0 + 3):
        for b in range(t0 - 2, t0 + 3):
            d = abs(w - (a + b * z))
            key = (round(d, 12), abs(a) + abs(b), a, b)
            if best_key is None or key < best_key:
                best_key, best = key, (a, b)
    return LatticePoint(best[0], best[1], zeta)


def expand_nonneg(p: LatticePoint, N: int, compact: bool = False) -> ExponentSum:
    """Distinct exponents ``>= N`` whose power sum is exactly ``a + b*zeta``.

    Negative coefficients use ``-1 = sum_{j=1}^{11} zeta**j`` and
    ``-zeta = sum_{j=2}^{12} zeta**j``; repeated powers are moved to
    ``n + 12k``. With ``compact=True`` full cycles (which sum to zero) are
    cancelled and repeats are spaced by the order of ``zeta`` instead of 12,
    giving far fewer and smaller exponents.
    """
    zeta = p.zeta
    counts = [0] * 12
    a, b = p.a, p.b
    if a >= 0:
        counts[0] += a
    else:
        for j in range(1, 12):
            counts[j] += -a
    if b >= 0:
        counts[1] += b
    else:
        for j in range(2, 13):
            counts[j % 12] += -b
    period = 12
    if compact:
        period = zeta.denominator
        folded = [sum(counts[r::period]) for r in range(period)]
        m = min(folded)
        counts = [c - m for c in folded]
    exps: list[int] = []
    for r, c in enumerate(counts):
        if c:
            first = N + ((r - N) % period)
            exps.extend(range(first, first + period * c, period))
    return ExponentSum(zeta, tuple(exps), N)


def one_net_sum(
    w: complex,
    zeta: Angle | float,
    N: int,
    horizon: int = 1 << 16,
    compact: bool = False,
) -> ExponentSum:
    """Exponents ``>= N`` with ``|sum zeta**n - w| < 1`` for any ``zeta != +-1``."""
    zeta = Angle.of(zeta)
    if zeta.is_real_point:
        raise InvalidZeta("powers of +-1 lie on a line; no net exists")
    if zeta.is_lattice_root:
        return expand_nonneg(lattice_round(w, zeta), N, compact=compact)
    return unimodular_sum_approx(w, zeta, N, 0.99, horizon)
