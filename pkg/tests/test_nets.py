import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import cKDTree

from restricted_series.core import Angle
from restricted_series.errors import HorizonExhausted, InvalidZeta
from restricted_series.nets import (
    COVERING_RADIUS,
    ExponentSum,
    GreedyStep,
    LatticePoint,
    expand_nonneg,
    lattice_round,
    one_net_sum,
    ring_sum,
    unimodular_sum_approx,
)

GENERIC = Angle(math.sqrt(2) / 10)
I = Angle(Fraction(1, 4))
OMEGA = Angle(Fraction(1, 3))
LATTICE_ROOTS = [Angle(Fraction(p, q)) for p, q in ((1, 4), (3, 4), (1, 3), (2, 3), (1, 6), (5, 6))]


def subset_best(zeta: Angle, w: complex, n: int) -> float:
    """Best |sum_{j in S} zeta**j - w| over all subsets S of {0..n-1}."""
    p = zeta.powers(0, n)
    h = n // 2

    def sums(block):
        s = np.zeros(1, dtype=complex)
        for v in block:
            s = np.concatenate([s, s + v])
        return s

    A, B = sums(p[:h]), sums(p[h:])
    tree = cKDTree(np.column_stack([A.real, A.imag]))
    q = w - B
    d, _ = tree.query(np.column_stack([q.real, q.imag]))
    return float(d.min())


# --- generic branch ----------------------------------------------------------


def test_target_already_in_set():
    N = 4
    w = GENERIC.power(N + 3) + GENERIC.power(N + 7)
    es = unimodular_sum_approx(w, GENERIC, N, 1e-6)
    assert abs(es.value() - w) < 1e-6


def test_zero_target_is_empty():
    es = unimodular_sum_approx(0, GENERIC, 0, 1e-3)
    assert es.exponents == () and es.value() == 0


def test_generic_example_against_subset_oracle():
    es = unimodular_sum_approx(3 + 3j, GENERIC, 0, 0.01)
    assert abs(es.value() - (3 + 3j)) < 0.01
    assert subset_best(GENERIC, 3 + 3j, 25) < 0.01


def test_fifth_root_against_subset_oracle():
    zeta = Angle(Fraction(1, 5))
    es = one_net_sum(2, zeta, 0)
    err = abs(es.value() - 2)
    assert err < 1
    assert subset_best(zeta, 2, 40) <= err + 1e-12


def test_greedy_steps_strictly_decrease():
    steps: list[GreedyStep] = []
    unimodular_sum_approx(12 - 5j, GENERIC, 3, 0.05, record=steps)
    assert steps
    for s in steps:
        assert s.residual_after < s.residual_before
        # one unit step at angle phi shrinks |r| by at least cos(phi) - 1/(2|r|)
        assert s.residual_before - s.residual_after >= math.cos(s.angle) - 1 / (2 * s.residual_before) - 1e-12


def test_generic_net_property():
    rng = np.random.default_rng(11)
    for _ in range(100):
        w = 10 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        N = int(rng.integers(0, 50))
        es = unimodular_sum_approx(w, GENERIC, N, 0.1, horizon=100_000)
        assert abs(es.value() - w) < 0.1
        assert min(es.exponents, default=N) >= N


@pytest.mark.parametrize("q", [5, 7, 8, 12])
def test_rational_nonlattice_roots_use_greedy(q):
    zeta = Angle(Fraction(1, q))
    es = unimodular_sum_approx(1.5 - 0.7j, zeta, 2, 0.5)
    assert abs(es.value() - (1.5 - 0.7j)) < 0.5


def test_horizon_exhaustion_and_best_effort():
    with pytest.raises(HorizonExhausted):
        unimodular_sum_approx(40, GENERIC, 0, 1e-9, horizon=16)
    es = unimodular_sum_approx(40, GENERIC, 0, 1e-9, horizon=16, best_effort=True)
    assert max(es.exponents) < 16


def test_generic_rejects_lattice_roots():
    with pytest.raises(InvalidZeta):
        unimodular_sum_approx(1, I, 0, 0.1)
    with pytest.raises(InvalidZeta):
        one_net_sum(1, Angle(0.5), 0)


# --- lattice branch ------------------------------------------------------------------


def test_lattice_round_examples():
    p = lattice_round(2.3 + 0.4j, I)
    assert (p.a, p.b) == (2, 0) and abs(p.value() - (2.3 + 0.4j)) == pytest.approx(0.5)
    for z in LATTICE_ROOTS:
        q = lattice_round(0, z)
        assert (q.a, q.b) == (0, 0)
    w = 5.1 - 2.2j
    p = lattice_round(w, OMEGA)
    grid = min(abs(w - (a + b * OMEGA.value)) for a in range(-16, 17) for b in range(-16, 17))
    assert abs(p.value() - w) == pytest.approx(grid, abs=1e-12)
    assert abs(p.value() - w) < 1 / math.sqrt(3) + 1e-12


@given(st.floats(-30, 30), st.floats(-30, 30), st.sampled_from(LATTICE_ROOTS))
def test_lattice_round_within_covering_radius(x, y, zeta):
    p = lattice_round(complex(x, y), zeta)
    assert abs(p.value() - complex(x, y)) <= COVERING_RADIUS[zeta.denominator] + 1e-12


def test_expand_nonneg_examples():
    assert expand_nonneg(LatticePoint(1, 0, I), 0).exponents == (0,)
    es = expand_nonneg(LatticePoint(-1, 0, I), 1)
    assert es.exponents == tuple(range(1, 12))
    assert es.exact_value() == (-1, 0)
    es = expand_nonneg(LatticePoint(2, -1, OMEGA), 5)
    assert es.exact_value() == (2, -1)
    assert min(es.exponents) >= 5


def test_eleven_term_identity_for_all_roots():
    for z in LATTICE_ROOTS:
        assert ring_sum(z, range(1, 12)) == (-1, 0)
        assert ring_sum(z, range(2, 13)) == (0, -1)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(0, 60), st.sampled_from(LATTICE_ROOTS), st.booleans())
def test_expand_nonneg_exact_and_distinct(a, b, N, zeta, compact):
    es = expand_nonneg(LatticePoint(a, b, zeta), N, compact=compact)
    assert es.exact_value() == (a, b)
    assert len(set(es.exponents)) == len(es.exponents)
    assert all(n >= N for n in es.exponents)
    assert abs(es.value() - (a + b * zeta.value)) < 1e-9 * (1 + len(es.exponents))


def test_compact_expansion_is_shorter():
    full = expand_nonneg(LatticePoint(-7, -9, I), 0)
    small = expand_nonneg(LatticePoint(-7, -9, I), 0, compact=True)
    assert len(small.exponents) < len(full.exponents)
    assert max(small.exponents) < max(full.exponents)


def test_one_net_examples():
    assert one_net_sum(0, I, 0).exponents == ()
    es = one_net_sum(7 - 3j, I, 0)
    assert es.exact_value() == (7, -3)
    assert abs(es.value() - (7 - 3j)) < 1


def test_lattice_net_property():
    rng = np.random.default_rng(3)
    for k in range(1000):
        zeta = LATTICE_ROOTS[k % 6]
        w = 20 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        es = one_net_sum(w, zeta, int(rng.integers(0, 30)), compact=bool(k % 2))
        assert abs(es.value() - w) < 1


def test_exponent_sum_validation_and_json():
    with pytest.raises(ValueError):
        ExponentSum(I, (3, 3), 0)
    with pytest.raises(ValueError):
        ExponentSum(I, (1, 4), 2)
    es = ExponentSum(OMEGA, (9, 2, 5), 2)
    assert es.exponents == (2, 5, 9)
    assert ExponentSum.from_json(es.to_json()) == es
