"""Certificate builders for approximating a target by ``f(tau)``, ``tau`` in U.

Each engine takes a fixed coefficient prefix ``lam_0..lam_N`` and produces
finitely many further coefficients plus an evaluation point ``tau`` in the
region, packaged as a :class:`~restricted_series.core.Certificate`. The
certificate bounds everything after its last index with ``sup|lambda|``, so
it holds for every continuation of the coefficient sequence.

* :func:`approx_theorem1` -- ``zeta`` on the circle, not +-1;
* :func:`approx_theorem2` -- ``zeta = -1``, coefficients not on a line;
* :func:`approx_theorem3` -- ``zeta = 1``, coefficients in no half-plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    Angle,
    Certificate,
    CoefficientSet,
    SparseAssignment,
    eval_prefix,
    normalize_affine,
    tail_bound,
)
from .errors import HorizonExhausted, InvalidZeta, NotApplicable, RegionTooThin
from .geometry import (
    classify_lambda,
    convex_weights,
    descent_radius,
    diameter,
    find_delta_quadruple,
    origin_inradius,
    schedule_with_trace,
)
from .nets import one_net_sum, unimodular_sum_approx
from .region import RegionSpec


@dataclass(frozen=True)
class PrefixConstraint:
    """Coefficients ``lam_0..lam_N`` that every certificate must reproduce."""

    values: tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def validate(self, lam: CoefficientSet) -> None:
        for v in self.values:
            if v not in lam:
                raise ValueError(f"prefix value {v!r} is not in the coefficient set")

    def evaluate(self, z: complex) -> complex:
        """Prefix polynomial at any ``z`` (including ``|z| = 1``)."""
        acc = 0j
        for v in reversed(self.values):
            acc = acc * z + v
        return acc

    def abs_sum(self) -> float:
        return sum(abs(v) for v in self.values)


@dataclass(frozen=True)
class EngineParams:
    delta_cap: float = 0.4
    horizon_cap: int = 1 << 16
    epsilon0: float | None = None
    seed: int = 0
    max_terms: int = 2_000_000
    max_refinements: int = 60

    def __post_init__(self):
        if not 0 < self.delta_cap <= 0.4:
            raise ValueError("delta_cap must lie in (0, 2/5]")
        if self.epsilon0 is not None and not 0 < self.epsilon0 < 1:
            raise ValueError("epsilon0 must lie in (0, 1)")


# --------------------------------------------------------------------------
# Choosing tau
# --------------------------------------------------------------------------


def annulus_power(r: float, lo: float, hi: float) -> int | None:
    """Smallest ``M >= 1`` with ``r**M < hi``, or None if it is not ``> lo``."""
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    M = max(1, math.floor(math.log(hi) / math.log(r)))
    while r**M >= hi:
        M += 1
    while M > 1 and r ** (M - 1) < hi:
        M -= 1
    return M if r**M > lo else None


def select_tau(
    region: RegionSpec,
    delta: float,
    modulus_target: float | None = None,
    *,
    interval: tuple[float, float] | None = None,
    min_power: int = 1,
) -> tuple[complex, int | None]:
    """A point ``tau`` of the region with ``|tau - zeta| < delta``.

    With ``modulus_target`` the smallest ``M >= min_power`` is found for which
    ``rho = modulus_target**(1/M)`` admits such a point on ``|tau| = rho``,
    so that ``|tau|**M`` equals the target. With ``interval = (lo, hi)``
    the point is fixed first and ``M`` is chosen with ``lo < |tau|**M < hi``.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    if modulus_target is None:
        tau = region.point_near(delta)
        if tau is None:
            raise RegionTooThin(f"no region point within {delta:.3g} of zeta")
        if interval is None:
            return tau, None
        M = annulus_power(abs(tau), *interval)
        if M is None:
            raise RegionTooThin("no power of |tau| falls in the requested annulus")
        return tau, M
    if not 0 < modulus_target < 1:
        raise ValueError("modulus_target must lie in (0, 1)")
    L = math.log(modulus_target)
    M = min_power
    if delta < 1:
        M = max(M, math.floor(L / math.log1p(-delta)) + 1)
    for _ in range(40):
        for _ in range(64):
            rho = math.exp(L / M)
            tau = region.point_on_circle_near(rho, delta)
            if tau is not None:
                return tau, M
            M += 1
        M = int(M * 1.5)
    raise RegionTooThin(f"no admissible tau within {delta:.3g} of zeta")


# --------------------------------------------------------------------------
# Shared assembly
# --------------------------------------------------------------------------


def _tail_start(sup: float, r: float, budget: float) -> int:
    """Smallest ``s`` with ``tail_bound(sup, r, s) <= budget``."""
    if r == 0:
        return 0
    s = max(0, math.ceil(math.log(budget * (1.0 - r) / (sup * 1.000001)) / math.log(r)))
    while tail_bound(sup, r, s) > budget:
        s += 1
    return s


def _assemble(
    lam: CoefficientSet,
    tau: complex,
    fixed: dict[int, complex],
    filler: complex,
    tail_budget: float,
    max_terms: int,
) -> SparseAssignment:
    """Pad ``fixed`` to an index K whose tail bound is within budget.

    With ``filler == 0`` unspecified indices stay implicit and a single
    explicit zero marks K; otherwise every index up to K is listed.
    """
    K = _tail_start(lam.sup_modulus, abs(tau), tail_budget) - 1
    K = max(K, max(fixed, default=-1))
    if filler == 0:
        terms = sorted(fixed.items())
        if not terms or terms[-1][0] < K:
            terms.append((K, 0j))
        return SparseAssignment(terms)
    if K + 1 > max_terms:
        raise HorizonExhausted(f"certificate would need {K + 1} explicit terms (cap {max_terms})")
    return SparseAssignment((n, fixed.get(n, filler)) for n in range(K + 1))


def _certify(
    lam: CoefficientSet, tau: complex, assignment: SparseAssignment, w: complex, eps: float, info: dict
) -> Certificate:
    err = abs(eval_prefix(assignment, tau) - w)
    tail = tail_bound(lam.sup_modulus, abs(tau), assignment.max_index + 1)
    return Certificate(complex(tau), assignment, complex(w), float(eps), err, tail, info)


def _normalizing_pair(lam: CoefficientSet) -> tuple[complex, complex]:
    """Elements sent to 0 and 1. Prefer 0 itself so padding stays implicit."""
    if lam.zero_index is not None:
        b = max(lam, key=lambda z: abs(z))
        return 0j, b
    best = None
    for i, x in enumerate(lam):
        for y in lam.elements[i + 1:]:
            if best is None or abs(y - x) > best[0]:
                best = (abs(y - x), x, y)
    _, x, y = best  # type: ignore[misc]
    return (x, y) if abs(x) <= abs(y) else (y, x)


def _prefix(lam: CoefficientSet, prefix: PrefixConstraint | Sequence[complex] | None) -> PrefixConstraint:
    if prefix is None:
        prefix = PrefixConstraint()
    elif not isinstance(prefix, PrefixConstraint):
        prefix = PrefixConstraint(tuple(prefix))
    prefix.validate(lam)
    # snap to the exact stored elements
    return PrefixConstraint(tuple(lam[lam.index(v)] for v in prefix.values))


def _check_region(region: RegionSpec) -> None:
    if not region.has_accumulation():
        raise RegionTooThin("region does not accumulate at its accumulation point")


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    return eps


# --------------------------------------------------------------------------
# zeta on the circle, away from +-1
# --------------------------------------------------------------------------


def approx_theorem1(
    lam: CoefficientSet,
    region: RegionSpec,
    prefix: PrefixConstraint | Sequence[complex] | None,
    w: complex,
    eps: float,
    params: EngineParams = EngineParams(),
) -> Certificate:
    """Certificate at a boundary point ``zeta`` with nonzero imaginary part.

    Coefficients beyond the prefix use two elements ``a, b`` mapped to 0 and
    1. For a generic ``zeta`` the shifted target is approximated by distinct
    powers of ``zeta`` to within eps/2 and ``tau`` is then moved towards
    ``zeta`` until the total error fits. For ``zeta`` in {+-i, +-w, +-w^2}
    (and as a fallback when the generic search runs out of horizon) the
    exponents of a 1-net expansion are shifted by ``M`` with
    ``eps/5 < |tau**M| < eps/3``, which scales the unit error down.
    """
    zeta = region.accumulation_point
    if zeta.is_real_point:
        raise NotApplicable("zeta-real", "this construction needs zeta != +-1")
    eps = _check_eps(eps)
    _check_region(region)
    pre = _prefix(lam, prefix)
    w = complex(w)
    N = pre.N
    a, b = _normalizing_pair(lam)
    _, T = normalize_affine(lam, a, b)
    if not zeta.is_lattice_root:
        zv = zeta.value
        target = (w - pre.evaluate(zv) - a * zv ** (N + 1) / (1.0 - zv)) / T.scale
        try:
            es = unimodular_sum_approx(target, zeta, N + 1, eps / (2.0 * abs(T.scale)), params.horizon_cap)
        except HorizonExhausted:
            return _theorem1_annulus(lam, region, pre, w, eps, params, a, b, T.scale, "annulus-fallback")
        fixed = dict(enumerate(pre.values))
        fixed.update((n, b) for n in es.exponents)
        info = {"engine": "theorem1", "branch": "generic", "exponents": list(es.exponents), "a": a, "b": b}
        return _refine(lam, region, fixed, a, w, eps, params, info)
    return _theorem1_annulus(lam, region, pre, w, eps, params, a, b, T.scale, "lattice")


def theorem1_budgeted(
    lam: CoefficientSet,
    zeta: Angle,
    tau: complex,
    prefix: PrefixConstraint | Sequence[complex] | None,
    w: complex,
    budget: int,
) -> tuple[SparseAssignment, float]:
    """The generic construction restricted to indices below ``budget``.

    Runs the same normalization and phase matching as :func:`approx_theorem1`
    but with the exponent pool capped, returning the best-effort assignment
    (all indices ``< budget``) and its error ``|f(tau) - w|`` at the given
    ``tau``. Used to compare the construction against exhaustive search.
    """
    zeta = Angle.of(zeta)
    if zeta.is_real_point or zeta.is_lattice_root:
        raise InvalidZeta("budgeted comparison needs a generic zeta")
    pre = _prefix(lam, prefix)
    N = pre.N
    if budget <= N + 1:
        raise ValueError("budget must exceed the prefix length")
    a, b = _normalizing_pair(lam)
    _, T = normalize_affine(lam, a, b)
    zv = zeta.value
    target = (w - pre.evaluate(zv) - a * (zv ** (N + 1) - zv**budget) / (1.0 - zv)) / T.scale
    es = unimodular_sum_approx(target, zeta, N + 1, 1e-300, budget - (N + 1), best_effort=True)
    chosen = set(es.exponents)
    values = list(pre.values) + [b if n in chosen else a for n in range(N + 1, budget)]
    A = SparseAssignment.dense(values)
    return A, abs(eval_prefix(A, tau) - complex(w))


def _refine(
    lam: CoefficientSet,
    region: RegionSpec,
    fixed: dict[int, complex],
    filler: complex,
    w: complex,
    eps: float,
    params: EngineParams,
    info: dict,
) -> Certificate:
    """Move tau towards zeta until the certificate closes."""
    delta = params.delta_cap
    found = False
    last = None
    for _ in range(params.max_refinements):
        tau = region.point_near(delta)
        delta /= 2.0
        if tau is None:
            continue
        found = True
        A = _assemble(lam, tau, fixed, filler, eps / 10.0, params.max_terms)
        cert = _certify(lam, tau, A, w, eps, dict(info, delta=2.0 * delta))
        if cert.margin > 0:
            return cert
        last = cert
    if not found:
        raise RegionTooThin("no region point near zeta")
    raise HorizonExhausted(f"no certificate after {params.max_refinements} refinements (margin {last.margin:.3g})")


def _theorem1_annulus(
    lam: CoefficientSet,
    region: RegionSpec,
    pre: PrefixConstraint,
    w: complex,
    eps: float,
    params: EngineParams,
    a: complex,
    b: complex,
    scale: complex,
    branch: str,
) -> Certificate:
    zeta = region.accumulation_point
    N = pre.N
    eps_n = eps / abs(scale)
    modulus = eps_n / 4.0
    prefix_assignment = SparseAssignment.dense(pre.values)
    delta = params.delta_cap
    last = None
    for _ in range(params.max_refinements):
        try:
            tau, M = select_tau(region, delta, modulus)
        except RegionTooThin:
            delta /= 2.0
            continue
        delta /= 2.0
        wn = (w - eval_prefix(prefix_assignment, tau) - a * tau ** (N + 1) / (1.0 - tau)) / scale
        t = wn / tau**M
        es = one_net_sum(t, zeta, N + 1, params.horizon_cap, compact=True)
        fixed = dict(enumerate(pre.values))
        fixed.update((n + M, b) for n in es.exponents)
        A = _assemble(lam, tau, fixed, a, eps / 10.0, params.max_terms)
        info = {
            "engine": "theorem1",
            "branch": branch,
            "M": M,
            "annulus": [eps_n / 5.0, eps_n / 3.0],
            "net_radius": 10.0 * abs(w) / eps,
            "net_point": t,
            "exponents": list(es.exponents),
            "a": a,
            "b": b,
        }
        cert = _certify(lam, tau, A, w, eps, info)
        if cert.margin > 0:
            return cert
        last = cert
    if last is None:
        raise RegionTooThin("no admissible tau with a power in the annulus")
    raise HorizonExhausted(f"annulus branch did not close (margin {last.margin:.3g})")


# --------------------------------------------------------------------------
# zeta = -1, coefficients off a line
# --------------------------------------------------------------------------


def _nearest_lattice(t: complex, lval: complex) -> tuple[int, int]:
    """Nearest ``p + q*lval`` to ``t`` (basis rounding plus a 5x5 scan)."""
    q0 = round(t.imag / lval.imag)
    p0 = round(t.real - q0 * lval.real)
    best = None
    for p in range(p0 - 2, p0 + 3):
        for q in range(q0 - 2, q0 + 3):
            d = abs(t - (p + q * lval))
            key = (d, abs(p) + abs(q), p, q)
            if best is None or key < best:
                best = key
    return best[2], best[3]  # type: ignore[index]


def _parity_exponents(N: int, p: int, q: int) -> tuple[list[int], list[int]]:
    """Distinct exponents > N: |p| with parity sign(p), |q| with parity sign(q)."""
    want = [(abs(p), 0 if p >= 0 else 1), (abs(q), 0 if q >= 0 else 1)]
    nxt = {0: N + 1 + ((N + 1) % 2), 1: N + 1 + ((N + 2) % 2)}
    out: list[list[int]] = []
    for count, parity in want:
        start = nxt[parity]
        out.append(list(range(start, start + 2 * count, 2)))
        nxt[parity] = start + 2 * count
    return out[0], out[1]


def approx_theorem2(
    lam: CoefficientSet,
    region: RegionSpec,
    prefix: PrefixConstraint | Sequence[complex] | None,
    w: complex,
    eps: float,
    params: EngineParams = EngineParams(),
) -> Certificate:
    """Certificate at ``zeta = -1`` for coefficients not on a real line.

    After normalizing to ``0, 1 in Lambda`` an element ``lam`` off the real
    axis spans the lattice ``{p + q*lam}``. Near -1 the powers ``tau**n``
    alternate in sign, so a lattice point is realized by putting 1 (resp.
    ``lam``) on |p| (resp. |q|) exponents of matching parity, and the block
    is scaled by ``tau**M`` with ``|tau|**M = eps0``.
    """
    cls = classify_lambda(lam)
    if cls.kind == "line":
        raise NotApplicable("line-contained", "coefficients lie on a real line")
    zeta = region.accumulation_point
    if not (zeta.is_real_point and zeta.turns == 0.5):
        raise NotApplicable("zeta-not-minus-one", "this construction needs zeta = -1")
    eps = _check_eps(eps)
    _check_region(region)
    pre = _prefix(lam, prefix)
    w = complex(w)
    N = pre.N
    a, b = _normalizing_pair(lam)
    lam_n, T = normalize_affine(lam, a, b)
    k = max(range(len(lam_n)), key=lambda i: (abs(lam_n[i].imag), -i))
    lval, lorig = lam_n[k], lam[k]
    cover = (1.0 + abs(lval)) / 2.0  # basis-rounding radius of the lattice
    eps0 = params.epsilon0 or eps / (4.0 * cover * abs(T.scale))
    prefix_assignment = SparseAssignment.dense(pre.values)
    delta = params.delta_cap
    last = None
    for _ in range(params.max_refinements):
        try:
            tau, M = select_tau(region, delta, eps0)
        except RegionTooThin:
            delta /= 2.0
            continue
        delta /= 2.0
        wn = (w - eval_prefix(prefix_assignment, tau) - a * tau ** (N + 1) / (1.0 - tau)) / T.scale
        t = wn / tau**M
        p, q = _nearest_lattice(t, lval)
        ones, lams = _parity_exponents(N, p, q)
        fixed = dict(enumerate(pre.values))
        fixed.update((n + M, b) for n in ones)
        fixed.update((n + M, lorig) for n in lams)
        A = _assemble(lam, tau, fixed, a, eps / 10.0, params.max_terms)
        info = {"engine": "theorem2", "M": M, "epsilon0": eps0, "lattice_point": [p, q], "lattice_generator": lval}
        cert = _certify(lam, tau, A, w, eps, info)
        if cert.margin > 0:
            return cert
        last = cert
    if last is None:
        raise RegionTooThin("no admissible tau near -1")
    raise HorizonExhausted(f"theorem-2 construction did not close (margin {last.margin:.3g})")


# --------------------------------------------------------------------------
# zeta = 1, coefficients in no half-plane
# --------------------------------------------------------------------------


def _round_counts(weights: np.ndarray, m: int) -> np.ndarray:
    raw = weights * m
    counts = np.floor(raw).astype(int)
    short = m - counts.sum()
    order = np.argsort(-(raw - counts), kind="stable")
    counts[order[:short]] += 1
    return counts


def _fit_block(u: complex, c: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Vertex index per reserved slot so that ``sum c_n V[j_n]`` is near ``u``.

    Starts from rounded convex weights of ``u / sum(c)`` and then applies
    single-slot changes while they reduce the error.
    """
    m = c.size
    x = u / c.sum()
    try:
        weights = convex_weights(x, V)
    except ValueError:
        weights = np.zeros(V.size)
        weights[int(np.argmax((x * V.conj()).real))] = 1.0
    counts = _round_counts(weights, m)
    assign = np.repeat(np.arange(V.size), counts)
    e = u - (c * V[assign]).sum()
    for _ in range(20 * m):
        step = c[:, None] * (V[None, :] - V[assign][:, None])
        cand = np.abs(e - step)
        n, j = np.unravel_index(int(np.argmin(cand)), cand.shape)
        if cand[n, j] >= abs(e) * (1.0 - 1e-15):
            break
        e -= step[n, j]
        assign[n] = j
    return assign


def approx_theorem3(
    lam: CoefficientSet,
    region: RegionSpec,
    prefix: PrefixConstraint | Sequence[complex] | None,
    w: complex,
    eps: float,
    params: EngineParams = EngineParams(),
) -> Certificate:
    """Certificate at ``zeta = 1`` for coefficients in no closed half-plane.

    A block of m reserved indices ``N+M+1..N+M+m`` carries elements of the
    quadruple V; every other index is filled by the bounded-partial-sum
    scheduler, whose total ``w1`` stays within R*. The reserved block, scaled
    by ``|tau|**M = eps0``, then reaches ``w - prefix - w1`` because the
    m-fold Minkowski sum of V is a diam(conv V)-net of ``m * conv V``, which
    contains a disk of radius ``m*r``.
    """
    cls = classify_lambda(lam)
    if cls.kind != "spanning":
        raise NotApplicable("half-plane-contained", "coefficients lie in a closed half-plane through 0")
    zeta = region.accumulation_point
    if not (zeta.is_real_point and zeta.turns == 0):
        raise NotApplicable("zeta-not-one", "this construction needs zeta = 1")
    eps = _check_eps(eps)
    _check_region(region)
    pre = _prefix(lam, prefix)
    w = complex(w)
    N = pre.N
    quad = find_delta_quadruple(lam)
    verts = list(dict.fromkeys(quad.deltas))
    V = np.array(verts, dtype=complex)
    r = origin_inradius(verts)
    spread = diameter(verts)
    R = descent_radius(lam)
    R_star = R + lam.sup_modulus
    eps0 = params.epsilon0 or eps / (4.0 * spread)
    m = math.ceil(1.25 * (abs(w) + pre.abs_sum() + R_star) / (eps0 * r)) + 1
    # keep |tau|**(N+m+1) >= 0.8 so the reserved weights stay comparable
    min_power = math.ceil((N + m + 1) * math.log(1.0 / eps0) / math.log(1.25))
    prefix_assignment = SparseAssignment.dense(pre.values)
    delta = params.delta_cap
    last = None
    for _ in range(params.max_refinements):
        try:
            tau, M = select_tau(region, delta, eps0, min_power=min_power)
        except RegionTooThin:
            delta /= 2.0
            continue
        delta /= 2.0
        K = max(_tail_start(lam.sup_modulus, abs(tau), eps / 10.0) - 1, N + M + m)
        if K + 1 > params.max_terms:
            raise HorizonExhausted(f"certificate would need {K + 1} terms (cap {params.max_terms})")
        reserved = range(N + M + 1, N + M + m + 1)
        others = list(range(N + 1, N + M + 1)) + list(range(N + M + m + 1, K + 1))
        sched, trace = schedule_with_trace(lam, tau, others, R)
        u = w - eval_prefix(prefix_assignment, tau) - trace.partial_sum
        c = tau ** (N + M + 1) * tau ** np.arange(m)
        slots = _fit_block(u, c, V)
        terms = dict(enumerate(pre.values))
        terms.update(sched.terms)
        terms.update(zip(reserved, (verts[j] for j in slots)))
        A = SparseAssignment(sorted(terms.items()))
        info = {
            "engine": "theorem3",
            "M": M,
            "m": m,
            "N": N,
            "epsilon0": eps0,
            "R": R,
            "R_star": R_star,
            "inradius": r,
            "diameter": spread,
            "max_partial": trace.max_partial,
            "w1": trace.partial_sum,
            "quadruple": list(quad.deltas),
        }
        cert = _certify(lam, tau, A, w, eps, info)
        if cert.margin > 0:
            return cert
        last = cert
    if last is None:
        raise RegionTooThin("no admissible tau near 1")
    raise HorizonExhausted(f"theorem-3 construction did not close (margin {last.margin:.3g})")


# --------------------------------------------------------------------------
# Dispatch and verification
# --------------------------------------------------------------------------


def approximate(
    lam: CoefficientSet,
    region: RegionSpec,
    prefix: PrefixConstraint | Sequence[complex] | None,
    w: complex,
    eps: float,
    params: EngineParams = EngineParams(),
    theorem: str | int = "auto",
) -> Certificate:
    """Run the engine matching ``zeta`` (or the one forced by ``theorem``)."""
    zeta = region.accumulation_point
    if theorem == "auto":
        if not zeta.is_real_point:
            theorem = 1
        elif zeta.turns == 0.5:
            theorem = 2
        else:
            theorem = 3
    engine = {1: approx_theorem1, 2: approx_theorem2, 3: approx_theorem3}[int(theorem)]
    return engine(lam, region, prefix, w, eps, params)


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    margin: float
    tau_in_region: bool | None
    achieved_error: float
    tail_bound: float
    problems: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "margin": self.margin,
            "tau_in_region": self.tau_in_region,
            "achieved_error": self.achieved_error,
            "tail_bound": self.tail_bound,
            "problems": list(self.problems),
        }


def verify_certificate(
    lam: CoefficientSet, cert: Certificate, region: RegionSpec | None = None
) -> VerificationReport:
    """Recompute everything a certificate claims; never raises."""
    problems: list[str] = []
    tau = complex(cert.tau)
    if not abs(tau) < 1.0:
        return VerificationReport(False, -math.inf, False, math.nan, math.inf, ("|tau| >= 1",))
    in_region = region.contains(tau) if region is not None else None
    if in_region is False:
        problems.append("tau outside region")
    for n, v in cert.assignment:
        if v not in lam:
            problems.append(f"coefficient at index {n} not in the coefficient set")
            break
    if lam.zero_index is None and not cert.assignment.is_contiguous():
        problems.append("index gaps require 0 in the coefficient set")
    if not cert.epsilon > 0:
        problems.append("epsilon must be positive")
    try:
        err = abs(eval_prefix(cert.assignment, tau) - cert.target)
    except (OverflowError, ValueError):
        err = math.inf
    tail = tail_bound(lam.sup_modulus, abs(tau), cert.assignment.max_index + 1)
    if not abs(err - cert.achieved_error) <= 1e-12 * (1.0 + abs(cert.target)):
        problems.append("recorded achieved_error does not match")
    if not cert.tail_bound >= tail * (1.0 - 1e-12):
        problems.append("recorded tail_bound understates the tail")
    margin = cert.epsilon - (err + tail)
    if not margin > 0:
        problems.append("error plus tail is not below epsilon")
    return VerificationReport(not problems, margin, in_region, err, tail, tuple(problems))
