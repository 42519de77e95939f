import math

import numpy as np
import pytest

from restricted_series.core import Angle, CoefficientSet
from restricted_series.counterexamples import build_wedge, imag_bound_check
from restricted_series.region import Disk, RegionSpec
from restricted_series.sampler import max_radius, sample_image

BITS = CoefficientSet([0, 1])
REGION = RegionSpec.default_disk(Angle(math.sqrt(2) / 10))


def test_empty_cloud():
    cloud = sample_image(BITS, REGION, trials=0)
    assert len(cloud) == 0
    assert all(c == 0 for c in cloud.coverage.values())


def test_tail_recorded_and_bounded():
    cloud = sample_image(BITS, REGION, 512, 500, seed=3)
    assert np.all(cloud.tail <= 0.01)
    assert np.all(np.abs(cloud.z) <= cloud.r_max)
    assert cloud.r_max == pytest.approx(max_radius(1, 512))


def test_coverage_monotone_and_reproducible():
    small = sample_image(BITS, REGION, 256, 500, Disk(0, 2), seed=9)
    big = sample_image(BITS, REGION, 256, 5000, Disk(0, 2), seed=9)
    assert np.array_equal(small.f, big.f[:500])
    cov = big.coverage
    assert cov[1.0] >= cov[0.3] >= cov[0.1]
    for e in cov:
        assert big.coverage[e] >= small.coverage[e]
        assert not np.any(small.hits[e] & ~big.hits[e])


def test_wedge_cloud_respects_imag_bound():
    wedge = build_wedge(2)
    cloud = sample_image(BITS, wedge.as_region(), 512, 5000, Disk(0, 5), seed=1)
    bound = imag_bound_check([0, 1], wedge, trials=10).bound
    assert np.all(cloud.f.imag + cloud.tail <= bound)
    assert not cloud.hits[1.0][cloud.cells.imag > 3].any()


def test_outputs(tmp_path):
    cloud = sample_image(BITS, REGION, 128, 50, seed=2)
    cloud.write_csv(tmp_path / "c.csv")
    cloud.write_json(tmp_path / "c.json")
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert rows[0] == "z_re,z_im,f_re,f_im,tail" and len(rows) == 51
    assert '"coverage"' in (tmp_path / "c.json").read_text()
    with pytest.raises(ValueError):
        sample_image(BITS, REGION, 16, 10, r_max=0.99)
