import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from batchgreedy import (
    GroundSet,
    PartitionMatroid,
    Subset,
    TaskAssignment,
    UniformMatroid,
    batch_curvature,
    bound_report,
    certify_monotone_submodular,
    exponential_bound,
    exponential_limit_bound,
    harmonic_bound,
    nemhauser_batch_bound,
)
from batchgreedy.bounds import CurvatureRangeWarning

ALPHAS = np.round(np.arange(0, 101) / 100, 2)


def test_harmonic_examples():
    assert harmonic_bound(0) == 1
    assert harmonic_bound(1) == 0.5
    assert harmonic_bound(0.8) == pytest.approx(1 / 1.8, abs=1e-15)
    assert round(harmonic_bound(0.8), 4) == 0.5556


def test_harmonic_warns_outside_range():
    with pytest.warns(CurvatureRangeWarning):
        harmonic_bound(1.5)


def test_exponential_examples():
    for t in (1, 2, 5, 50):
        assert exponential_bound(1, t) == pytest.approx(1 - (1 - 1 / t) ** t, abs=1e-15)
        assert exponential_bound(0, t) == 1
    assert exponential_bound(0.9, 2) == pytest.approx((1 - 0.55**2) / 0.9, abs=1e-15)
    assert exponential_bound(0.9, 2) == pytest.approx(0.775, abs=1e-12)


def test_exponential_small_alpha_continuous():
    assert exponential_bound(1e-12, 3) == pytest.approx(1.0, abs=1e-9)
    assert exponential_limit_bound(1e-12) == pytest.approx(1.0, abs=1e-9)


def test_exponential_limit_examples():
    assert exponential_limit_bound(1) == pytest.approx(1 - math.exp(-1), abs=1e-15)
    assert exponential_limit_bound(0) == 1
    assert round(exponential_limit_bound(0.5), 5) == 0.78694


def test_nemhauser_examples():
    assert nemhauser_batch_bound(3, 3) == 1
    assert nemhauser_batch_bound(2, 3) == pytest.approx(0.625, abs=1e-15)
    for k, K in [(1, 4), (2, 4), (3, 9), (2, 10)]:
        assert nemhauser_batch_bound(k, K) == pytest.approx(exponential_bound(1, K // k), abs=1e-12)


@given(st.integers(1, 12), st.integers(1, 40))
def test_nemhauser_divisible_consistency(k, s):
    assert nemhauser_batch_bound(k, k * s) == pytest.approx(exponential_bound(1, s), abs=1e-12)


def test_grid_monotonicity_and_ordering():
    h = [harmonic_bound(a) for a in ALPHAS]
    assert all(b <= a for a, b in zip(h, h[1:]))
    lim = [exponential_limit_bound(a) for a in ALPHAS]
    assert all(b <= a + 1e-15 for a, b in zip(lim, lim[1:]))
    for t in range(1, 51):
        e = [exponential_bound(a, t) for a in ALPHAS]
        assert all(b <= a + 1e-15 for a, b in zip(e, e[1:]))
        for a, ev, lv, hv in zip(ALPHAS, e, lim, h):
            assert ev >= lv - 1e-15 >= hv - 2e-15
    for a in ALPHAS:
        col = [exponential_bound(a, t) for t in range(1, 51)]
        assert all(b <= x + 1e-15 for x, b in zip(col, col[1:]))


class TestBoundReport:
    def _report(self, f, m, k):
        cert = certify_monotone_submodular(f)
        return {b.bound_kind: b for b in bound_report(f, m, k, batch_curvature(f, k), cert)}

    def test_desk_k2(self, desk, desk_uniform):
        r = self._report(desk, desk_uniform, 2)
        assert round(r["harmonic"].value, 4) == 0.5556
        assert r["exponential_finite_t"].t == 1
        assert r["exponential_finite_t"].value == pytest.approx(1.0, abs=1e-12)
        assert r["nemhauser_batch"].value == 1.0
        assert all(b.applicable for b in r.values())

    def test_partition_exponential_not_applicable(self):
        f = TaskAssignment([0.3, 0.4, 0.5, 0.6])
        m = PartitionMatroid(f.ground, [Subset.of(0, 1), Subset.of(2, 3)], [1, 1])
        r = self._report(f, m, 1)
        assert r["harmonic"].applicable
        assert not r["exponential_finite_t"].applicable
        assert not r["exponential_limit"].applicable
        assert "nemhauser_batch" not in r

    def test_nondivisor_not_applicable(self):
        f = TaskAssignment([0.3, 0.4, 0.5, 0.6])
        r = self._report(f, UniformMatroid(f.ground, 4), 3)
        assert not r["exponential_finite_t"].applicable
        assert not r["harmonic"].applicable
        assert "does not divide" in r["exponential_finite_t"].note

    def test_uncertified_suppressed(self):
        from batchgreedy import Table

        f = Table([0, 0, 0, 1])
        m = UniformMatroid(GroundSet(2), 2)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            r = self._report(f, m, 1)
        assert not any(b.applicable for b in r.values())
        assert not r["harmonic"].certificate_ok
