import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from restricted_series.core import Angle, Certificate, CoefficientSet, SparseAssignment
from restricted_series.engines import (
    EngineParams,
    PrefixConstraint,
    annulus_power,
    approx_theorem1,
    approx_theorem2,
    approx_theorem3,
    approximate,
    select_tau,
    theorem1_budgeted,
    verify_certificate,
)
from restricted_series.errors import NotApplicable, RegionTooThin
from restricted_series.oracle import best_prefix_error
from restricted_series.region import Disk, RegionSpec

GENERIC = Angle(math.sqrt(2) / 10)
I = Angle(Fraction(1, 4))
OMEGA = Angle(Fraction(1, 3))
MINUS_ONE = Angle(Fraction(1, 2))
ONE = Angle(Fraction(0))
BITS = CoefficientSet([0, 1])
TRIANGLE = CoefficientSet([0, 1, 1j])
SQUARE = CoefficientSet([1, 1j, -1, -1j])

targets = st.builds(cmath.rect, st.floats(0, 5), st.floats(0, 2 * math.pi))


def check(lam, region, cert, prefix=()):
    report = verify_certificate(lam, cert, region)
    assert report.valid, report.problems
    assert report.margin > 0 and report.tau_in_region
    got = cert.assignment.as_dict()
    for n, v in enumerate(prefix):
        assert got[n] == v
    return report


# --- select_tau ---------------------------------------------------------------


def test_select_tau_feasibility():
    zeta = Angle(Fraction(1, 8))
    region = RegionSpec((Disk(0.9 * zeta.value, 0.2),), zeta)
    tau, M = select_tau(region, 0.2)
    assert M is None and region.contains(tau) and abs(tau - zeta.value) < 0.2


def test_select_tau_minus_one_example():
    region = RegionSpec.default_disk(MINUS_ONE)
    tau, M = select_tau(region, 0.1, 0.5)
    assert M == 7
    assert tau == pytest.approx(-(0.5 ** (1 / 7)))
    assert abs(tau) ** M == pytest.approx(0.5, rel=1e-12)


def test_annulus_power_example():
    # 0.99**110 = 0.331 is the first power below 1/3
    M = annulus_power(0.99, 0.2, 1 / 3)
    assert M == 110
    assert 0.2 < 0.99**M < 1 / 3 and not 0.99 ** (M - 1) < 1 / 3


def test_select_tau_interval():
    region = RegionSpec.default_disk(I)
    tau, M = select_tau(region, 0.1, interval=(0.2, 1 / 3))
    assert 0.2 < abs(tau) ** M < 1 / 3


@given(st.floats(1e-6, 0.9), st.floats(1e-3, 0.4))
def test_select_tau_hits_modulus(eps0, delta):
    region = RegionSpec.default_disk(MINUS_ONE)
    tau, M = select_tau(region, delta, eps0)
    assert abs(tau - (-1)) < delta and region.contains(tau)
    assert abs(abs(tau) ** M / eps0 - 1) < 1e-9


def test_select_tau_thin_region():
    region = RegionSpec((Disk(0.3, 0.1),), ONE)
    with pytest.raises(RegionTooThin):
        select_tau(region, 0.05)
    with pytest.raises(RegionTooThin):
        select_tau(region, 0.05, 0.1)


# --- approx_theorem1 ------------------------------------------------------------


def test_theorem1_zero_target():
    region = RegionSpec.default_disk(GENERIC)
    cert = approx_theorem1(BITS, region, [], 0, 0.1)
    check(BITS, region, cert)
    assert all(v == 0 for v in cert.assignment.values)
    assert cert.achieved_error == 0


def test_theorem1_generic_example():
    region = RegionSpec.default_disk(GENERIC)
    cert = approx_theorem1(BITS, region, [], 2 + 1j, 0.05)
    check(BITS, region, cert)
    assert cert.info["branch"] == "generic"


@pytest.mark.parametrize("zeta", [I, OMEGA, Angle(Fraction(5, 6)), Angle(Fraction(3, 4))])
def test_theorem1_lattice_example(zeta):
    region = RegionSpec.default_disk(zeta)
    cert = approx_theorem1(BITS, region, [1, 0, 1], 4, 0.3)
    check(BITS, region, cert, [1, 0, 1])
    M = cert.info["M"]
    assert 0.3 / 5 < abs(cert.tau) ** M < 0.3 / 3


def test_theorem1_without_zero_is_dense():
    lam = CoefficientSet([1, 2])
    region = RegionSpec.default_disk(GENERIC)
    cert = approx_theorem1(lam, region, [2], 30 - 5j, 0.5)
    check(lam, region, cert, [2])
    assert cert.assignment.is_contiguous()


def test_theorem1_complex_pair():
    lam = CoefficientSet([1j, 2 - 1j, 0.5])
    region = RegionSpec.default_disk(Angle(Fraction(2, 7)))
    cert = approx_theorem1(lam, region, [0.5], 3 + 3j, 0.3)
    check(lam, region, cert, [0.5])


def test_theorem1_rejects_real_zeta():
    with pytest.raises(NotApplicable):
        approx_theorem1(BITS, RegionSpec.default_disk(MINUS_ONE), [], 1, 0.1)


@given(targets, st.lists(st.sampled_from([0.0, 1.0]), max_size=8), st.sampled_from([0.3, 0.1, 0.03]))
def test_theorem1_branch_consistency(w, prefix, eps):
    region = RegionSpec.default_disk(GENERIC)
    cert = approx_theorem1(BITS, region, prefix, w, eps)
    check(BITS, region, cert, prefix)
    assert {v for n, v in cert.assignment if n >= len(prefix)} <= {0, 1}


def test_theorem1_budgeted_never_beats_oracle():
    rng = np.random.default_rng(2)
    region = RegionSpec.default_disk(GENERIC)
    for _ in range(5):
        tau = region.point_near(0.1 * rng.random() + 0.02)
        w = 3 * rng.random() * cmath.exp(2j * math.pi * rng.random())
        A, err = theorem1_budgeted(BITS, GENERIC, tau, [1], w, 16)
        assert A.max_index == 15
        assert err >= best_prefix_error(BITS, tau, w, 16).best_error - 1e-12


# --- approx_theorem2 ------------------------------------------------------------


def test_theorem2_examples():
    region = RegionSpec.default_disk(MINUS_ONE)
    check(TRIANGLE, region, approx_theorem2(TRIANGLE, region, [], 0, 0.1))
    region = RegionSpec((Disk(-0.95, 0.1),), MINUS_ONE)
    cert = approx_theorem2(TRIANGLE, region, [], 3 - 2j, 0.1)
    check(TRIANGLE, region, cert)
    assert abs(abs(cert.tau) ** cert.info["M"] / cert.info["epsilon0"] - 1) < 1e-9


def test_theorem2_line_contained():
    with pytest.raises(NotApplicable) as exc:
        approx_theorem2(BITS, RegionSpec.default_disk(MINUS_ONE), [], 1, 0.1)
    assert exc.value.reason == "line-contained"


def test_theorem2_without_zero():
    lam = CoefficientSet([1, 2, 1 + 1j])
    region = RegionSpec.default_disk(MINUS_ONE)
    cert = approx_theorem2(lam, region, [2, 1 + 1j], -4 + 1j, 0.3)
    check(lam, region, cert, [2, 1 + 1j])
    assert cert.assignment.is_contiguous()


@given(targets, st.lists(st.sampled_from([0, 1, 1j]), max_size=6))
def test_theorem2_random(w, prefix):
    region = RegionSpec.default_disk(MINUS_ONE)
    check(TRIANGLE, region, approx_theorem2(TRIANGLE, region, prefix, w, 0.2), prefix)


# --- approx_theorem3 ------------------------------------------------------------


def test_theorem3_examples():
    region = RegionSpec.default_disk(ONE)
    check(SQUARE, region, approx_theorem3(SQUARE, region, [], 0, 0.5))
    cert = approx_theorem3(SQUARE, region, [], -5 + 2j, 0.2)
    check(SQUARE, region, cert)
    assert cert.assignment.is_contiguous()
    assert cert.info["max_partial"] <= cert.info["R_star"]


def test_theorem3_half_plane():
    with pytest.raises(NotApplicable) as exc:
        approx_theorem3(TRIANGLE, RegionSpec.default_disk(ONE), [], 1, 0.1)
    assert exc.value.reason == "half-plane-contained"


def test_theorem3_with_zero_and_prefix():
    lam = CoefficientSet([0, 2, -1 + 1j, -1 - 1j])
    region = RegionSpec.default_disk(ONE)
    cert = approx_theorem3(lam, region, [2, 0, 0], 1 + 3j, 0.3)
    check(lam, region, cert, [2, 0, 0])


@given(targets, st.lists(st.sampled_from([1, 1j, -1, -1j]), max_size=5))
def test_theorem3_random(w, prefix):
    region = RegionSpec.default_disk(ONE)
    check(SQUARE, region, approx_theorem3(SQUARE, region, prefix, w, 0.3), prefix)


# --- dispatch, determinism, monotonicity ----------------------------------------------


def test_auto_dispatch():
    assert approximate(BITS, RegionSpec.default_disk(I), [], 1, 0.3).info["engine"] == "theorem1"
    assert approximate(TRIANGLE, RegionSpec.default_disk(MINUS_ONE), [], 1, 0.3).info["engine"] == "theorem2"
    assert approximate(SQUARE, RegionSpec.default_disk(ONE), [], 1, 0.3).info["engine"] == "theorem3"


@pytest.mark.parametrize(
    "lam, zeta", [(BITS, GENERIC), (BITS, OMEGA), (TRIANGLE, MINUS_ONE), (SQUARE, ONE)]
)
def test_determinism_and_eps_ladder(lam, zeta):
    region = RegionSpec.default_disk(zeta)
    params = EngineParams(seed=7)
    a = approximate(lam, region, [], 2 - 1j, 0.2, params)
    b = approximate(lam, region, [], 2 - 1j, 0.2, params)
    assert a == b
    ok = []
    for eps in (0.05, 0.1, 0.2, 0.4, 0.8):
        try:
            check(lam, region, approximate(lam, region, [], 2 - 1j, eps, params))
            ok.append(True)
        except Exception:
            ok.append(False)
    first = ok.index(True)
    assert all(ok[first:])


def test_params_validation():
    with pytest.raises(ValueError):
        EngineParams(delta_cap=0.5)
    assert EngineParams(delta_cap=0.4).delta_cap == 0.4
    with pytest.raises(ValueError):
        PrefixConstraint((2,)).validate(BITS)


# --- verification ------------------------------------------------------------------------


def test_verify_mutations():
    region = RegionSpec.default_disk(GENERIC)
    cert = approx_theorem1(BITS, region, [1], 2 + 1j, 0.05)
    assert verify_certificate(BITS, cert, region).valid

    terms = list(cert.assignment.terms)
    terms[0] = (terms[0][0], 0.5)
    bad = Certificate(cert.tau, SparseAssignment(terms), cert.target, cert.epsilon, cert.achieved_error, cert.tail_bound)
    assert not verify_certificate(BITS, bad, region).valid

    low = Certificate(cert.tau, cert.assignment, cert.target, cert.achieved_error / 2, cert.achieved_error, cert.tail_bound)
    rep = verify_certificate(BITS, low, region)
    assert not rep.valid and rep.margin < 0

    moved = Certificate(0.1, cert.assignment, cert.target, cert.epsilon, cert.achieved_error, cert.tail_bound)
    rep = verify_certificate(BITS, moved, region)
    assert not rep.valid and rep.tau_in_region is False

    outside = Certificate(1.0, cert.assignment, cert.target, cert.epsilon, cert.achieved_error, cert.tail_bound)
    assert not verify_certificate(BITS, outside, region).valid


def test_verify_gap_rule():
    lam = CoefficientSet([1, 2])
    cert = Certificate(0.1, SparseAssignment([(0, 1), (2, 1)]), 1.01, 1.0, 0.0, 0.0)
    rep = verify_certificate(lam, cert)
    assert not rep.valid
    assert any("gaps" in p for p in rep.problems)
