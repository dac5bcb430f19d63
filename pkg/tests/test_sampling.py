import numpy as np
import pytest

from lipop.classify import (
    BOUNDED,
    DECAYS,
    INCONCLUSIVE,
    PERSISTS,
    UNBOUNDED,
    ClassifierParams,
    decay,
    finiteness,
)
from lipop.errors import EvaluationError
from lipop.sampling import DiskSampler, sup_over_disk


def test_radii_schedule():
    s = DiskSampler(J=5)
    assert s.radii[0] == 0
    assert np.allclose(s.radii[1:], 1 - 2.0 ** -np.arange(1, 6))
    assert s.grid().shape == (6, s.angles)


def test_peak_at_origin():
    res = sup_over_disk(lambda z: 1 - np.abs(z) ** 2, DiskSampler())
    assert res.value == pytest.approx(1)
    assert res.witness == 0


def test_unattained_sup():
    s = DiskSampler()
    res = sup_over_disk(np.abs, s)
    assert res.value == pytest.approx(s.r_max)
    assert np.all(np.diff(res.profile) > 0)


def test_interior_peak_against_dense_grid():
    g = lambda z: 2 * np.abs(z) * np.sqrt(1 - np.abs(z) ** 2)
    res = sup_over_disk(g, DiskSampler())
    # oracle: a million-point radial grid
    t = np.linspace(0, 1, 1_000_001)
    assert res.value == pytest.approx(g(t).max(), abs=1e-9)
    assert abs(res.witness) == pytest.approx(2**-0.5, abs=1e-4)


def test_nan_is_reported_with_point():
    with pytest.raises(EvaluationError) as err:
        sup_over_disk(lambda z: np.where(np.abs(z) > 0.9, np.nan, 1.0), DiskSampler(J=6))
    assert abs(err.value.point) > 0.9


def test_extra_points_count():
    res = sup_over_disk(lambda z: np.where(z == 0.123, 5.0, 0.0), DiskSampler(J=6), extra_points=[0.123])
    assert res.value == 5.0
    assert res.witness == 0.123


def test_threading_does_not_change_results(monkeypatch):
    g = lambda z: np.abs(np.sin(3 * z)) * (1 - np.abs(z) ** 2)
    s = DiskSampler(J=10, angles=64)
    monkeypatch.setenv("LIPOP_THREADS", "1")
    a = sup_over_disk(g, s)
    monkeypatch.setenv("LIPOP_THREADS", "8")
    b = sup_over_disk(g, s)
    assert a.value == b.value and a.witness == b.witness
    assert np.array_equal(a.profile, b.profile)


def test_sampler_round_trip():
    s = DiskSampler(J=9, angles=32, refine=3)
    assert DiskSampler.from_spec(s.to_spec()) == s


def profile_of(fn, J=20):
    r = np.concatenate([[0.0], 1 - 2.0 ** -np.arange(1, J + 1)])
    return np.maximum.accumulate(fn(r))


def test_finiteness_plateau_and_growth():
    assert finiteness(profile_of(lambda r: np.ones_like(r))).verdict == BOUNDED
    assert finiteness(profile_of(lambda r: (1 - r * r) ** -0.5)).verdict == UNBOUNDED
    # logarithmic growth is too slow to call either way
    assert finiteness(profile_of(lambda r: np.log(2 / (1 - r)))).verdict == INCONCLUSIVE
    assert finiteness([0, 1, np.inf]).verdict == UNBOUNDED


def test_decay_classifier():
    r = np.concatenate([[0.0], 1 - 2.0 ** -np.arange(1, 21)])
    assert decay((1 - r * r) ** 0.5).verdict == DECAYS
    assert decay(np.ones_like(r)).verdict == PERSISTS
    assert decay(np.zeros_like(r)).verdict == DECAYS
    slow = 1 / np.log(4 / (1 - r))
    assert decay(slow).verdict == INCONCLUSIVE


def test_classifier_params_round_trip():
    p = ClassifierParams(rel_tol=0.1, deltas=(0.5, 0.9))
    assert ClassifierParams.from_spec(p.to_spec()) == p
