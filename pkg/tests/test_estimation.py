import numpy as np
import pytest

from lipop import fnkernel as fk
from lipop.corpus import generate_builtin_corpus, make_op, scalar_op
from lipop.errors import PreconditionError
from lipop.estimation import (
    ExtremalFamily,
    constants_contribution,
    default_families,
    equivalence_sweep,
    lower_bound_opnorm,
    noncompact_witness,
    source_norm,
    t_psi_norm,
    test_fn_properties,
    unit_directions,
    witness_profile,
)
from lipop.normedspace import NormedSpace, NormKind, Vector
from lipop.sampling import DiskSampler
from lipop.vspaces import VectorFunction, lambda_norm

ONE = fk.constant(1)
S1 = NormedSpace(1)


def test_lower_bound_identity():
    lb = lower_bound_opnorm(scalar_op(fk.IDENTITY, ONE, 0.5, 0.5))
    assert lb.value >= 1 - 1e-6
    assert lb.best["family"] == "constants"


def test_lower_bound_half_dilation_constants():
    W = scalar_op(fk.Affine(0.5, 0), ONE, 0.5, 0.5)
    lb = lower_bound_opnorm(W, families=[ExtremalFamily.constants()])
    assert lb.value >= 1 - 1e-12


def test_lower_bound_diagonal_symbol():
    S = NormedSpace(2)
    psi = [[fk.constant(2), fk.constant(0)], [fk.constant(0), ONE]]
    W = make_op(fk.IDENTITY, psi, 0.5, 0.5, S, S)
    lb = lower_bound_opnorm(W)
    # oracle: the image of 1_{e1} is the constant 2 e1
    direct = lambda_norm(VectorFunction.constant(Vector(S, np.array([2, 0]))), 0.5).value
    assert lb.value >= direct - 1e-12 and direct == pytest.approx(2)


def test_members_normalize(coarse):
    W = scalar_op(fk.Affine(0.5, 0.5), fk.Poly([1, -1]), 0.5, 0.5)
    for fam in default_families(W, coarse):
        for m in fam.members[:10]:
            n = source_norm(m.profile, 0.5, coarse)
            f = VectorFunction.scalar(fk.Scale(1 / n, m.profile))
            assert lambda_norm(f, 0.5, coarse).value == pytest.approx(1, abs=1e-6)


def test_unit_directions_are_unit():
    for kind in NormKind:
        sp = NormedSpace(3, kind)
        X = unit_directions(sp)
        assert X.shape == (3, 67)
        v = [Vector(sp, X[:, j]).norm() for j in range(X.shape[1])]
        assert np.allclose(v, 1)
    assert unit_directions(S1).shape == (1, 1)


def test_test_fn_properties():
    x = Vector(NormedSpace(2), np.array([1, -2j]))
    v, d = test_fn_properties(0.5, x, 0.5)
    assert np.allclose(v.entries, 0, atol=1e-12)
    assert np.allclose(d.entries, x.entries * 0.75**-0.5)
    # oracle: central finite difference of the tensor
    f = VectorFunction.tensor(fk.TestFn(0.5, 0.5), x)
    h = 1e-6
    fd = (f.values(np.array([0.5 + h])) - f.values(np.array([0.5 - h])))[0] / (2 * h)
    assert np.allclose(d.entries, fd, atol=1e-6)
    v, _ = test_fn_properties(0.9j, Vector(NormedSpace(2), np.array([1, 0])), 0.25)
    assert np.abs(v.entries).max() <= 1e-12


def test_test_fn_norm_at_most_three(rng, coarse):
    worst = 0.0
    for _ in range(100):
        a = rng.uniform(0.01, 0.999) * np.exp(2j * np.pi * rng.random())
        alpha = rng.uniform(0.02, 0.98)
        worst = max(worst, lambda_norm(VectorFunction.scalar(fk.TestFn(a, alpha)), alpha, coarse).value)
    assert worst <= 3 + 1e-6


def test_witness_profile_identities():
    b, alpha = 0.8 - 0.3j, 0.4
    f = witness_profile(b, alpha)
    assert abs(f.value(b)) < 1e-12
    assert f.deriv(b) == pytest.approx((1 - abs(b) ** 2) ** (alpha - 1))


def test_noncompact_witness_identity():
    W = scalar_op(fk.IDENTITY, ONE, 0.5, 0.5)
    rows = noncompact_witness(W, [1 - 2.0**-n for n in range(2, 11)], ns=range(2, 11))
    for r in rows:
        assert r.q_at_z == pytest.approx(1)
        assert r.norm >= r.n / (r.n + 1) - 1e-3
        assert r.holds


def test_noncompact_witness_precondition():
    W = scalar_op(fk.Affine(0.5, 0), ONE, 0.5, 0.5)
    with pytest.raises(PreconditionError):
        noncompact_witness(W, [0.9, 0.99])


def test_noncompact_witness_zero_symbol():
    W = scalar_op(fk.IDENTITY, fk.constant(0), 0.5, 0.5)
    rows = noncompact_witness(W, [0.75, 0.875])
    assert all(r.norm == 0 and r.holds for r in rows)


def test_t_psi_equals_constants_contribution(rng):
    S = NormedSpace(2, NormKind.L1)
    psi = [[fk.Poly([1, 0.5j]), fk.Blaschke(0.3)], [fk.Power(1, 0.4, 0.5), fk.constant(-1)]]
    W = make_op(fk.Affine(0.5, 0.2j), psi, 0.5, 0.5, S, NormedSpace(2, NormKind.L2))
    for _ in range(5):
        x = Vector(S, rng.normal(size=2) + 1j * rng.normal(size=2))
        assert constants_contribution(W, x) == pytest.approx(t_psi_norm(W, x), rel=1e-12)


def test_sweep_small():
    corpus = generate_builtin_corpus()[:4]
    rows, summary = equivalence_sweep(corpus, DiskSampler(J=12, angles=64, refine=8))
    assert rows[0].C == pytest.approx(1) and rows[0].ratio == pytest.approx(1, abs=0.01)
    for r in rows[1:]:
        assert r.C == pytest.approx(1) and r.L >= 1 - 1e-6
    assert summary["count"] == 4
