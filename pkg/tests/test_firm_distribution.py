import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from firmcycles.distributions import ParetoEntrantDist
from firmcycles.errors import EmptyDistribution, NegativeMass
from firmcycles.firm_distribution import Cohort, FirmDistribution

D = ParetoEntrantDist(1.0, 3.0)


def quad_aggregates(fd, sigma):
    """Integrate the implied density piecewise between cohort cutoffs."""
    def m(z):
        return sum(w * D.density(z) for w, c in zip(fd.weights, fd.cutoffs) if z >= c)
    pts = sorted(set(fd.cutoffs.tolist()))
    M = Z = 0.0
    for lo, hi in zip(pts, pts[1:] + [np.inf]):
        M += integrate.quad(m, lo, hi, epsrel=1e-12)[0]
        Z += integrate.quad(lambda z: z ** (sigma - 1) * m(z), lo, hi, epsrel=1e-12)[0]
    return M, Z


def test_empty():
    fd = FirmDistribution.empty(D)
    assert fd.mass() == 0.0 and fd.market_intensity(2.0) == 0.0
    with pytest.raises(EmptyDistribution):
        fd.avg_productivity(2.0)


def test_single_cohort_examples():
    fd = FirmDistribution.from_cohorts(D, [Cohort(8 / 3, 2.0)])
    assert fd.mass() == pytest.approx(1 / 3, rel=1e-14)
    assert fd.market_intensity(2.0) == pytest.approx(1.0, rel=1e-14)
    assert fd.avg_productivity(2.0) == pytest.approx(3.0, rel=1e-14)


def test_phase3_pair():
    fd = FirmDistribution.from_cohorts(D, [Cohort(8 / 3, 16 ** (1 / 3)), Cohort(0.98677, 2.0)])
    assert fd.mass() == pytest.approx(0.29, abs=1e-4)
    assert fd.market_intensity(2.0) == pytest.approx(1.0, abs=1e-4)
    assert fd.avg_productivity(2.0) == pytest.approx(3.4483, abs=1e-3)
    M, Z = quad_aggregates(fd, 2.0)
    assert fd.mass() == pytest.approx(M, rel=1e-8)
    assert fd.market_intensity(2.0) == pytest.approx(Z, rel=1e-8)


def test_truncate_examples():
    fd = FirmDistribution.from_cohorts(D, [Cohort(8 / 3, 2.0)])
    assert fd.truncate(1.5) is fd
    assert fd.truncate(16 ** (1 / 3)).mass() == pytest.approx(1 / 6, rel=1e-14)
    a, b = 2.7, 2.2
    assert fd.truncate(a).truncate(b).mass() == fd.truncate(a).mass()


def test_decay_examples():
    fd = FirmDistribution.from_cohorts(D, [Cohort(8 / 3, 2.0)])
    assert fd.decay(0.0) is fd
    assert fd.decay(0.1).mass() == pytest.approx(0.3, rel=1e-14)
    x = fd.decay(0.1).truncate(2.5)
    y = fd.truncate(2.5).decay(0.1)
    assert x.mass() == pytest.approx(y.mass(), rel=1e-15)
    with pytest.raises(ValueError):
        fd.decay(1.0)


def test_merge():
    fd = FirmDistribution.from_cohorts(D, [Cohort(1.0, 2.0)])
    assert fd.merge(Cohort(0.0, 1.5)) is fd
    with pytest.raises(NegativeMass):
        fd.merge(Cohort(-1.0, 1.5))
    rng = np.random.default_rng(3)
    for _ in range(3):
        c1 = Cohort(rng.uniform(0, 3), rng.uniform(1, 4), rng.uniform(0.2, 1))
        c2 = Cohort(rng.uniform(0, 3), rng.uniform(1, 4), rng.uniform(0.2, 1))
        a = FirmDistribution.empty(D).merge(c1).merge(c2)
        b = FirmDistribution.empty(D).merge(c2).merge(c1)
        single = [FirmDistribution.from_cohorts(D, [c]) for c in (c1, c2)]
        assert a.mass() == pytest.approx(sum(s.mass() for s in single), rel=1e-14)
        assert a.market_intensity(2.0) == pytest.approx(b.market_intensity(2.0), rel=1e-14)
        M, Z = quad_aggregates(a, 2.0)
        assert a.mass() == pytest.approx(M, rel=1e-8)
        assert a.market_intensity(2.0) == pytest.approx(Z, rel=1e-8)


def test_coalesce_keeps_aggregates():
    fd = FirmDistribution.from_cohorts(D, [Cohort(1.0, 2.0, 0.5), Cohort(2.0, 2.1, 0.9), Cohort(1.0, 3.0)])
    t = fd.truncate(2.5)
    # the first two cohorts now share cutoff 2.5 and fold into one
    assert len(t) == 2
    assert t.cohorts[0] == Cohort(0.5 + 1.8, 2.5, 1.0)
    expected = 2.3 * D.survival_prob(2.5) + D.survival_prob(3.0)
    assert t.mass() == pytest.approx(expected, rel=1e-14)


def test_json_round_trip():
    fd = FirmDistribution.from_cohorts(D, [Cohort(1.0, 2.0, 0.5), Cohort(2.0, 3.0, 0.9)])
    rows = json.loads(json.dumps(fd.to_json_list()))
    back = FirmDistribution.from_cohorts(D, [Cohort.from_dict(r) for r in rows])
    assert back.cohorts == fd.cohorts


cohort = st.builds(Cohort, st.floats(0.0, 5.0), st.floats(1.0, 10.0), st.floats(0.01, 1.0))


@settings(max_examples=150, deadline=None)
@given(st.lists(cohort, min_size=1, max_size=6), st.floats(0.5, 15.0), st.floats(1.2, 2.9))
def test_truncate_properties(cohorts, cut, sigma):
    fd = FirmDistribution.from_cohorts(D, cohorts)
    t = fd.truncate(cut)
    assert t.mass() <= fd.mass() * (1 + 1e-12) + 1e-300
    assert t.market_intensity(sigma) <= fd.market_intensity(sigma) * (1 + 1e-12) + 1e-300
    assert t.truncate(cut).mass() == pytest.approx(t.mass(), rel=1e-12)
    if t.mass() > 0:
        assert t.avg_productivity(sigma) >= max(cut, 1.0) * (1 - 1e-12)


@settings(max_examples=150, deadline=None)
@given(st.lists(cohort, min_size=1, max_size=6), st.floats(0.0, 0.99))
def test_decay_scales_exactly(cohorts, delta):
    fd = FirmDistribution.from_cohorts(D, cohorts)
    d = fd.decay(delta)
    assert d.mass() == pytest.approx((1 - delta) * fd.mass(), rel=1e-13, abs=1e-300)
    assert d.market_intensity(2.0) == pytest.approx((1 - delta) * fd.market_intensity(2.0), rel=1e-13, abs=1e-300)
