import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipop import fnkernel as fk
from lipop.errors import DegenerateParameterError, DomainError, NotASelfMapError, SpecError


def fd(f, z, h=1e-6):
    return (f.value(z + h) - f.value(z - h)) / (2 * h)


def test_poly_value():
    assert fk.Poly([1, 1]).value(0.5) == pytest.approx(1.5)


def test_power_with_zero_centre_is_one():
    for z in (0, 0.3 + 0.4j, -0.9):
        assert fk.Power(1, 0, 0.5).value(z) == pytest.approx(1)


def test_testfn_vanishes_at_centre():
    assert abs(fk.TestFn(0.5, 0.5).value(0.5)) < 1e-12


def test_poly_derivative():
    assert fk.Poly([0, 0, 1]).deriv(0.3) == pytest.approx(0.6)


def test_testfn_derivative_at_centre():
    f = fk.TestFn(0.5, 0.5)
    assert f.deriv(0.5) == pytest.approx(0.75**-0.5, abs=1e-9)
    assert fd(f, 0.5) == pytest.approx(1.154700538, abs=1e-6)


def test_blaschke_at_zero():
    assert fk.Blaschke(0).deriv(0) == pytest.approx(-1)
    assert fk.Blaschke(0).value(0.3) == pytest.approx(-0.3)


@pytest.mark.parametrize(
    "f, k, want",
    [(fk.Poly([2, 0, 5]), 2, 5), (fk.Power(1, 0.5, 1), 1, -0.5), (fk.Blaschke(0.5), 0, 0.5)],
)
def test_taylor_coeff(f, k, want):
    assert f.taylor_coeff(k) == pytest.approx(want)


def test_make_self_map():
    m = fk.make_self_map(fk.Affine(0.5, 0.5))
    assert m.sup_modulus_certificate == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(NotASelfMapError):
        fk.make_self_map(fk.Affine(1, 0.5))
    m = fk.make_self_map(fk.Affine(0.5, 0))
    assert m.sup_modulus_certificate == pytest.approx(0.5)
    assert not m.is_constant
    assert fk.make_self_map(fk.constant(0.2)).is_constant


def test_outside_disk_rejected():
    with pytest.raises(DomainError):
        fk.Poly([1]).value(1.5)


def test_testfn_degenerate_centre():
    with pytest.raises(DegenerateParameterError):
        fk.TestFn(0, 0.5)
    with pytest.raises(DegenerateParameterError):
        fk.TestFn(1.0, 0.5)


SAMPLES = [
    fk.Poly([1, -2j, 0.5]),
    fk.Power(2 - 1j, 0.6j, 0.3),
    fk.TestFn(-0.7 + 0.2j, 0.4),
    fk.Blaschke(0.3 - 0.4j),
    fk.Affine(0.5j, 0.2),
    fk.Sum((fk.Poly([0, 1]), fk.Power(1, 0.5, -1))),
    fk.Scale(3j, fk.Blaschke(0.2)),
    fk.Product((fk.Poly([1, 1]), fk.Power(1, -0.4, 0.5), fk.Blaschke(0.1j))),
]


@pytest.mark.parametrize("f", SAMPLES, ids=lambda f: type(f).__name__)
def test_derivative_matches_finite_difference(f):
    z = np.array([0, 0.3 + 0.2j, -0.5j, 0.8])
    assert np.allclose(f.deriv(z), fd(f, z), atol=1e-7, rtol=1e-7)


@pytest.mark.parametrize("f", SAMPLES, ids=lambda f: type(f).__name__)
def test_derivative_object_agrees(f):
    z = np.array([0.1, -0.4 + 0.3j])
    assert np.allclose(f.derivative().value(z), f.deriv(z), atol=1e-12)


@pytest.mark.parametrize("f", SAMPLES, ids=lambda f: type(f).__name__)
def test_taylor_series_reproduces_values(f):
    c = f.taylor_coeffs(80)
    z = 0.25 - 0.1j
    assert np.polyval(c[::-1], z) == pytest.approx(f.value(z), abs=1e-10)


@pytest.mark.parametrize("f", SAMPLES, ids=lambda f: type(f).__name__)
def test_dilation(f):
    z = np.array([0.5, -0.9j])
    assert np.allclose(f.dilate(0.7).value(z), f.value(0.7 * z), atol=1e-12)


@pytest.mark.parametrize("f", SAMPLES, ids=lambda f: type(f).__name__)
def test_json_round_trip(f):
    g = fk.from_spec(f.to_spec())
    assert g.to_spec() == f.to_spec()
    z = 0.3 - 0.3j
    assert g.value(z) == pytest.approx(f.value(z))


def test_from_spec_errors():
    with pytest.raises(SpecError):
        fk.from_spec({"kind": "nope"})
    with pytest.raises(SpecError):
        fk.from_spec({"kind": "poly"})
    with pytest.raises(SpecError):
        fk.from_spec({"kind": "testfn", "a": 0, "alpha": 0.5})


@settings(max_examples=50, deadline=None)
@given(
    r=st.floats(0.05, 0.95),
    t=st.floats(0, 2 * np.pi),
    alpha=st.floats(0.05, 1.0),
)
def test_testfn_identities(r, t, alpha):
    a = r * np.exp(1j * t)
    f = fk.TestFn(a, alpha)
    assert abs(f.value(a)) < 1e-12
    assert f.deriv(a) * (1 - r * r) ** (1 - alpha) == pytest.approx(1, abs=1e-9)
    assert f.value(0) == pytest.approx(-a, abs=1e-12)


def test_testfn_expansion_matches():
    f = fk.TestFn(0.4 + 0.5j, 0.3)
    z = np.array([0, 0.2, -0.6 + 0.1j])
    assert np.allclose(f.expansion().value(z), f.value(z), atol=1e-13)
