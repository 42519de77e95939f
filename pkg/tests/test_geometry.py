import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from restricted_series.core import CoefficientSet, eval_prefix
from restricted_series.errors import NotSpanning
from restricted_series.geometry import (
    arg0,
    bounded_tail_schedule,
    classify_lambda,
    convex_hull,
    convex_weights,
    descent_check,
    descent_radius,
    diameter,
    find_delta_quadruple,
    origin_inradius,
    schedule_with_trace,
)

SQUARE = CoefficientSet([1, 1j, -1, -1j])
SIXTH = CoefficientSet(cmath.exp(2j * math.pi * k / 6) for k in range(6))


def partial_sums(assignment, z):
    s, out = 0j, []
    for n, v in assignment:
        s += v * z**n
        out.append(abs(s))
    return out


spanning_sets = st.lists(
    st.builds(cmath.rect, st.floats(0.1, 3), st.floats(0, 2 * math.pi)), min_size=3, max_size=8, unique=True
).map(CoefficientSet).filter(lambda lam: classify_lambda(lam).kind == "spanning")


# --- classification --------------------------------------------------------


def test_classify_examples():
    c = classify_lambda(CoefficientSet([0, 1]))
    assert c.kind == "line" and c.in_half_plane and c.alpha == 0
    assert c.direction == 1 and c.offset == 0
    c = classify_lambda(CoefficientSet([0, 1, 1j]))
    assert c.kind == "half_plane" and c.alpha == 0
    assert classify_lambda(SQUARE).kind == "spanning"
    assert classify_lambda(CoefficientSet([1 + 1j, 2 + 1j, -3 + 1j])).kind == "line"
    assert classify_lambda(CoefficientSet([-1, 1])).kind == "line"


@given(st.lists(st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)), min_size=2, max_size=7))
def test_half_plane_witness(elems):
    assume(len(set(elems)) >= 2)
    lam = CoefficientSet(elems)
    c = classify_lambda(lam)
    if c.kind == "spanning":
        # no element direction gives a supporting half-plane
        for z in lam:
            if z == 0:
                continue
            for a in (arg0(z), (arg0(z) - math.pi) % (2 * math.pi)):
                inside = [((arg0(u) - a) % (2 * math.pi)) <= math.pi + 1e-12 for u in lam if u != 0]
                assert not all(inside)
    elif c.alpha is not None:
        for z in lam:
            if abs(z) > 1e-9:
                d = (arg0(z) - c.alpha) % (2 * math.pi)
                assert d <= math.pi + 1e-9 or d >= 2 * math.pi - 1e-9


# --- delta quadruple ---------------------------------------------------------------


def test_quadruple_square():
    q = find_delta_quadruple(SQUARE)
    assert q.deltas == (1, 1j, -1, -1j)
    assert q.alpha0 == pytest.approx(math.pi / 2)
    assert q.check()


def test_quadruple_cube_roots():
    lam = CoefficientSet(cmath.exp(2j * math.pi * k / 3) for k in range(3))
    assert find_delta_quadruple(lam).check()


def test_quadruple_rejects_half_plane():
    with pytest.raises(NotSpanning):
        find_delta_quadruple(CoefficientSet([0, 1, 1j]))


@given(spanning_sets)
def test_quadruple_invariant_random(lam):
    q = find_delta_quadruple(lam)
    assert q.check()
    assert all(d in lam for d in q.deltas)


# --- descent radius --------------------------------------------------------------------


def test_descent_radius_square():
    R = descent_radius(SQUARE)
    assert 1 / math.sqrt(2) <= R <= 1.02 / math.sqrt(2)
    assert descent_check(SQUARE, R)
    # the four quadruple elements alone already descend at 1.01 R
    z = 1.01 * R * np.exp(2j * np.pi * np.arange(10_000) / 10_000)
    q = np.array(find_delta_quadruple(SQUARE).deltas)
    assert np.all(np.abs(z[:, None] + q[None, :]).min(axis=1) < np.abs(z))


def test_descent_radius_scaling():
    assert descent_radius(SQUARE.scaled(2)) == pytest.approx(2 * descent_radius(SQUARE), rel=1e-12)


def test_descent_radius_sixth_roots():
    R = descent_radius(SIXTH)
    assert R <= 1.02 / (2 * math.cos(math.pi / 6))
    assert descent_check(SIXTH, R)


@given(spanning_sets, st.builds(cmath.rect, st.floats(0.2, 5), st.floats(0, 2 * math.pi)))
def test_descent_scaling_law(lam, c):
    assert descent_radius(lam.scaled(c)) <= abs(c) * descent_radius(lam) * (1 + 1e-9)


@given(spanning_sets)
def test_descent_check_random(lam):
    assert descent_check(lam, descent_radius(lam))


# --- scheduler ------------------------------------------------------------------------


def test_schedule_at_zero():
    a, R_star = bounded_tail_schedule(SQUARE, 0, list(range(10)))
    assert all(abs(s - abs(a.values[0])) < 1e-15 for s in partial_sums(a, 0))


def test_schedule_examples():
    a, R_star = bounded_tail_schedule(SQUARE, 0.9, list(range(200)))
    assert R_star == pytest.approx(descent_radius(SQUARE) + 1)
    assert max(partial_sums(a, 0.9)) <= R_star + 1e-12
    z = 0.99 * cmath.exp(2j * math.pi * 0.123)
    a, R_star = bounded_tail_schedule(SQUARE, z, list(range(1, 400, 2)))
    assert max(partial_sums(a, z)) <= R_star + 1e-12
    assert abs(eval_prefix(a, z)) <= R_star + 1e-12


@given(
    spanning_sets,
    st.builds(cmath.rect, st.floats(0, 0.999), st.floats(0, 2 * math.pi)),
    st.lists(st.integers(0, 3000), min_size=1, max_size=300, unique=True).map(sorted),
)
def test_schedule_bound_random(lam, z, idx):
    a, trace = schedule_with_trace(lam, z, idx)
    sums = partial_sums(a, z)
    assert max(sums) <= trace.R_star * (1 + 1e-12)
    assert abs(trace.partial_sum) <= trace.R_star * (1 + 1e-12)
    assert trace.max_partial == pytest.approx(max(sums), rel=1e-9, abs=1e-12)


def test_schedule_rejects_half_plane():
    with pytest.raises(NotSpanning):
        bounded_tail_schedule(CoefficientSet([0, 1, 1j]), 0.5, [0, 1])


# --- polygon helpers ----------------------------------------------------------------


def test_polygon_helpers():
    hull = convex_hull([1, 1j, -1, -1j, 0, 0.2])
    assert len(hull) == 4
    assert origin_inradius([1, 1j, -1, -1j]) == pytest.approx(1 / math.sqrt(2))
    assert origin_inradius([1, 2, 1j]) == 0.0
    assert diameter([1, 1j, -1, -1j]) == pytest.approx(2)
    w = convex_weights(0.25 + 0.25j, [1, 1j, -1, -1j])
    assert w.sum() == pytest.approx(1) and (w >= 0).all()
    assert abs(w @ np.array([1, 1j, -1, -1j]) - (0.25 + 0.25j)) < 1e-12
    with pytest.raises(ValueError):
        convex_weights(2, [1, 1j, -1, -1j])
