"""Built-in scenarios: the closed-form anchors and seeded random polynomial operators."""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from . import fnkernel as fk
from .classify import ClassifierParams
from .normedspace import NormedSpace, NormKind
from .sampling import DiskSampler
from .scenario import Scenario, parse_corpus
from .vspaces import SpaceSpec, VectorFunction
from .wcop import OperatorSymbol, WeightedCompositionOp

CORPUS_SEED = 7
CORPUS_SIZE = 30
NORM_KINDS = (NormKind.L1, NormKind.L2, NormKind.LINF)


def make_op(phi, psi_grid, alpha, beta, X=NormedSpace(1), Y=NormedSpace(1)) -> WeightedCompositionOp:
    psi = OperatorSymbol(X, Y, psi_grid)
    return WeightedCompositionOp(psi, fk.make_self_map(phi), SpaceSpec(alpha, X), SpaceSpec(beta, Y))


def scalar_op(phi, psi, alpha, beta) -> WeightedCompositionOp:
    return make_op(phi, [[psi]], alpha, beta)


def _cround(c, digits=3):
    return complex(round(c.real, digits), round(c.imag, digits))


def random_poly(rng, degree: int, scale: float = 1.0) -> fk.Poly:
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return fk.Poly([_cround(v) for v in scale * c / (degree + 1)])


def random_self_map(rng, boundary_touching: bool = False) -> fk.AnalyticScalar:
    """Polynomial with sum |c_k| <= 0.95, or an affine map touching the circle once."""
    if boundary_touching:
        s = round(float(rng.uniform(0.3, 0.8)), 3)
        u = (1, 1j, -1, -1j)[int(rng.integers(0, 4))]
        return fk.Affine(s * u, (1.0 - s) * u)
    deg = int(rng.integers(1, 4))
    c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    c = c / np.sum(np.abs(c)) * float(rng.uniform(0.3, 0.95))
    # rounding toward zero keeps the coefficient mass below 0.95
    c = np.trunc(c.real * 1000) / 1000 + 1j * np.trunc(c.imag * 1000) / 1000
    return fk.Poly(list(c))


def random_space(rng, kind: NormKind | None = None) -> NormedSpace:
    if kind is None:
        kind = NORM_KINDS[int(rng.integers(0, 3))]
    return NormedSpace(int(rng.integers(1, 4)), kind)


def random_space_pair(rng):
    """(X, Y) with a supported induced norm: l1 -> anything, otherwise matching norms."""
    X = random_space(rng)
    return X, random_space(rng, None if X.norm_kind == NormKind.L1 else X.norm_kind)


def random_poly_op(rng, exponents=(0.25, 0.5, 0.75, 1.0), boundary_touching: bool = False) -> WeightedCompositionOp:
    """A bounded random operator: alpha >= beta whenever phi touches the circle."""
    X, Y = random_space_pair(rng)
    grid = [[random_poly(rng, int(rng.integers(0, 3))) for _ in range(X.dim)] for _ in range(Y.dim)]
    a, b = sorted(rng.choice(exponents, size=2), reverse=True) if boundary_touching else rng.choice(exponents, size=2)
    return make_op(random_self_map(rng, boundary_touching), grid, float(a), float(b), X, Y)


def random_function(rng, space: NormedSpace, degree: int = 4) -> VectorFunction:
    return VectorFunction(space, [random_poly(rng, degree) for _ in range(space.dim)])


CORPUS_SAMPLER = DiskSampler(J=16, angles=128, refine=16)


def generate_builtin_corpus(seed: int = CORPUS_SEED, size: int = CORPUS_SIZE) -> list:
    """Identity, the dilations r z for r in {0.3, 0.6, 0.9}, then random polynomial operators."""
    one = fk.constant(1.0)
    params = ClassifierParams()
    out = [Scenario("identity", scalar_op(fk.IDENTITY, one, 0.5, 0.5), CORPUS_SAMPLER, params)]
    for r in (0.3, 0.6, 0.9):
        out.append(Scenario(f"dilation-{r}", scalar_op(fk.Affine(r, 0.0), one, 0.5, 0.5), CORPUS_SAMPLER, params))
    rng = np.random.default_rng(seed)
    k = 0
    while len(out) < size:
        touching = k % 4 == 3
        out.append(Scenario(f"random-{k:02d}", random_poly_op(rng, boundary_touching=touching), CORPUS_SAMPLER, params))
        k += 1
    return out


def builtin_corpus_spec() -> dict:
    return json.loads((resources.files("lipop") / "data" / "builtin_corpus.json").read_text())


def builtin_corpus() -> list:
    return parse_corpus(builtin_corpus_spec())


def golden_envelope() -> dict:
    return json.loads((resources.files("lipop") / "data" / "envelope.json").read_text())
