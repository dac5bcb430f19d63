import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipop import fnkernel as fk
from lipop.errors import DimensionMismatchError
from lipop.normedspace import NormedSpace, NormKind, Vector
from lipop.sampling import DiskSampler
from lipop.vspaces import (
    MEMBER,
    VectorFunction,
    WeightSpec,
    hinf_nu_norm,
    lambda1_norm,
    lambda_norm,
    lipschitz_seminorm_estimate,
    little_space_profile,
    space_norm,
)

Z = VectorFunction.scalar(fk.IDENTITY)
Z2 = VectorFunction.scalar(fk.Poly([0, 0, 1]))


def test_lambda_norm_of_z():
    assert lambda_norm(Z, 0.5).value == pytest.approx(1.0, abs=1e-12)


def test_lambda_norm_of_z_squared_against_radial_grid():
    t = np.linspace(0, 1, 2_000_001)
    oracle = (2 * t * np.sqrt(1 - t * t)).max()
    assert lambda_norm(Z2, 0.5).value == pytest.approx(oracle, abs=1e-6)
    assert lambda_norm(Z2, 0.5).value == pytest.approx(1.0, abs=1e-6)


def test_norm_of_elementary_tensor():
    x = Vector(NormedSpace(2), np.array([0, 2]))
    assert lambda_norm(VectorFunction.tensor(fk.IDENTITY, x), 0.5).value == pytest.approx(2.0)


def test_lambda_norm_rejects_exponent_one():
    with pytest.raises(ValueError):
        lambda_norm(Z, 1.0)


def test_lambda1_examples():
    c = VectorFunction.constant(Vector(NormedSpace(2, NormKind.L1), np.array([1, -2j])))
    assert lambda1_norm(c).value == pytest.approx(3.0)
    assert lambda1_norm(Z).value == pytest.approx(2.0)
    assert lambda1_norm(Z2).value == pytest.approx(3.0)
    assert space_norm(Z, 1.0).value == lambda1_norm(Z).value


def test_hinf_examples():
    one = VectorFunction.scalar(fk.constant(1))
    assert hinf_nu_norm(one, WeightSpec(0.5)).value == pytest.approx(1.0)
    assert hinf_nu_norm(one, WeightSpec(0.5)).witness == 0
    # sup over the grid approaches the boundary value 2 from below
    res = hinf_nu_norm(VectorFunction.scalar(fk.Power(1, 0.5, -1)), WeightSpec(0))
    assert res.value == pytest.approx(2.0, abs=1e-5)
    assert hinf_nu_norm(Z, WeightSpec(1)).value == pytest.approx(2 / (3 * np.sqrt(3)), abs=1e-9)


def test_lipschitz_estimates():
    assert lipschitz_seminorm_estimate(VectorFunction.scalar(fk.constant(2)), 0.5) == 0
    assert lipschitz_seminorm_estimate(Z, 1.0) == pytest.approx(1.0)
    # oracle: all pairs of 256 boundary points
    w = np.exp(2j * np.pi * np.arange(256) / 256)
    d = np.abs(w[:, None] - w[None, :])
    oracle = (d[d > 0] ** 0.5).max()
    est = lipschitz_seminorm_estimate(Z, 0.5)
    assert est >= 1.41
    assert est == pytest.approx(oracle, abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000), alpha=st.sampled_from([0.25, 0.5, 0.75]))
def test_two_point_estimate_bounded_by_bloch_form(seed, alpha):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=4) + 1j * rng.normal(size=4)
    f = VectorFunction.scalar(fk.Poly(c))
    s = DiskSampler(J=12, angles=64, refine=10)
    lip = lipschitz_seminorm_estimate(f, alpha, pair_budget=512, seed=seed, sampler=s)
    bloch = lambda_norm(f, alpha, s).seminorm
    assert lip <= 10 * bloch + 1e-12
    assert bloch <= 10 * lip + 1e-12


def test_little_space_members(coarse):
    assert little_space_profile(Z2, 0.5).verdict == MEMBER
    assert little_space_profile(VectorFunction.scalar(fk.Power(1, 0.9, 0.5)), 0.5).verdict == MEMBER
    near = little_space_profile(VectorFunction.scalar(fk.TestFn(0.999, 0.5)), 0.5)
    assert near.verdict == MEMBER
    # plateau around the radius of the centre before the decay sets in
    assert near.values[10] == pytest.approx(1.0, abs=1e-2)


def test_norm_is_homogeneous_and_subadditive(coarse):
    f = VectorFunction.scalar(fk.Poly([1, 2j, -1]))
    g = VectorFunction.scalar(fk.Power(1, 0.5, 0.5))
    nf, ng = lambda_norm(f, 0.5, coarse).value, lambda_norm(g, 0.5, coarse).value
    assert lambda_norm(f.scaled(-3j), 0.5, coarse).value == pytest.approx(3 * nf)
    assert lambda_norm(f + g, 0.5, coarse).value <= nf + ng + 1e-12


def test_function_json_and_dims():
    f = VectorFunction(NormedSpace(2), (fk.Poly([1]), fk.Blaschke(0.2)))
    g = VectorFunction.from_spec(f.to_spec())
    assert g.to_spec() == f.to_spec()
    with pytest.raises(DimensionMismatchError):
        VectorFunction(NormedSpace(3), (fk.Poly([1]),))
    with pytest.raises(DimensionMismatchError):
        f + VectorFunction.scalar(fk.Poly([1]))
