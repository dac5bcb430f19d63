"""Weighted composition operators and the auxiliary operators built around them.

``W f (z) = psi_z f(phi(z))`` with an operator-valued symbol ``psi`` and a
self map ``phi``.  Compositions are never expanded into coefficients; images
are lazy objects that evaluate values and derivatives pointwise, which keeps
power-type components usable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fnkernel as fk
from .errors import DimensionMismatchError, PreconditionError, SpecError
from .normedspace import NormedSpace, OperatorMatrix, Vector, op_norms, vec_norms
from .vspaces import SpaceSpec, VectorFunction


@dataclass(frozen=True)
class OperatorSymbol:
    """psi: D -> L(X, Y) given entrywise by analytic scalars (m rows, n columns)."""

    domain: NormedSpace
    codomain: NormedSpace
    entries: tuple

    def __init__(self, domain: NormedSpace, codomain: NormedSpace, entries):
        rows = tuple(tuple(row) for row in entries)
        if len(rows) != codomain.dim or any(len(r) != domain.dim for r in rows):
            raise DimensionMismatchError(
                f"symbol grid must be {codomain.dim}x{domain.dim}, got {[len(r) for r in rows]}"
            )
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "entries", rows)

    @classmethod
    def constant(cls, domain, codomain, matrix) -> "OperatorSymbol":
        m = np.asarray(matrix, dtype=complex)
        return cls(domain, codomain, [[fk.constant(c) for c in row] for row in m])

    @classmethod
    def identity(cls, space: NormedSpace) -> "OperatorSymbol":
        return cls.constant(space, space, np.eye(space.dim))

    @classmethod
    def scalar(cls, f: fk.AnalyticScalar, space: NormedSpace | None = None) -> "OperatorSymbol":
        """z -> f(z) I on ``space`` (scalars by default)."""
        space = space or NormedSpace(1)
        n = space.dim
        zero = fk.constant(0.0)
        return cls(space, space, [[f if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (self.codomain.dim, self.domain.dim)

    def _stack(self, z, attr):
        rows = [np.stack([getattr(e, attr)(z) for e in row], axis=-1) for row in self.entries]
        return np.stack(rows, axis=-2)

    def values(self, z) -> np.ndarray:
        return self._stack(fk._as_points(z), "_value")

    def derivs(self, z) -> np.ndarray:
        return self._stack(fk._as_points(z), "_deriv")

    def at(self, z) -> OperatorMatrix:
        return OperatorMatrix(self.domain, self.codomain, self.values(np.asarray(z, dtype=complex)))

    def deriv_at(self, z) -> OperatorMatrix:
        return OperatorMatrix(self.domain, self.codomain, self.derivs(np.asarray(z, dtype=complex)))

    def norms(self, z) -> np.ndarray:
        return op_norms(self.values(z), self.domain.norm_kind, self.codomain.norm_kind)

    def deriv_norms(self, z) -> np.ndarray:
        return op_norms(self.derivs(z), self.domain.norm_kind, self.codomain.norm_kind)

    def derivative(self) -> "OperatorSymbol":
        return OperatorSymbol(self.domain, self.codomain, [[e.derivative() for e in row] for row in self.entries])

    def times(self, g: fk.AnalyticScalar) -> "OperatorSymbol":
        """The symbol z -> g(z) psi_z."""
        return OperatorSymbol(self.domain, self.codomain, [[fk.Product((g, e)) for e in row] for row in self.entries])

    def scaled(self, c: complex) -> "OperatorSymbol":
        return OperatorSymbol(self.domain, self.codomain, [[fk.Scale(c, e) for e in row] for row in self.entries])

    def to_spec(self) -> dict:
        return {"entries": [[e.to_spec() for e in row] for row in self.entries]}

    @classmethod
    def from_spec(cls, spec: dict, domain: NormedSpace, codomain: NormedSpace) -> "OperatorSymbol":
        try:
            grid = [[fk.from_spec(e) for e in row] for row in spec["entries"]]
            return cls(domain, codomain, grid)
        except (KeyError, TypeError, DimensionMismatchError) as exc:
            raise SpecError(f"bad psi spec: {exc}") from exc


@dataclass(frozen=True)
class WeightedCompositionOp:
    psi: OperatorSymbol
    phi: fk.SelfMap
    source: SpaceSpec
    target: SpaceSpec

    def __post_init__(self):
        if self.psi.domain != self.source.space or self.psi.codomain != self.target.space:
            raise DimensionMismatchError("psi must map the source space into the target space")

    @property
    def alpha(self) -> float:
        return self.source.alpha

    @property
    def beta(self) -> float:
        return self.target.alpha

    def _check(self, f: VectorFunction):
        if f.codomain != self.source.space:
            raise DimensionMismatchError("function does not take values in the source space")

    def image(self, f: VectorFunction) -> "Image":
        self._check(f)
        return Image(self, f)

    def apply(self, f: VectorFunction, z) -> Vector:
        return Vector(self.target.space, self.image(f).values(np.asarray(z, dtype=complex)))

    def apply_deriv(self, f: VectorFunction, z) -> Vector:
        return Vector(self.target.space, self.image(f).derivs(np.asarray(z, dtype=complex)))

    def with_symbol(self, psi: OperatorSymbol) -> "WeightedCompositionOp":
        return WeightedCompositionOp(psi, self.phi, self.source, self.target)

    def to_spec(self) -> dict:
        return {
            "psi": self.psi.to_spec(),
            "phi": self.phi.inner.to_spec(),
            "alpha": self.alpha,
            "beta": self.beta,
            "X": self.source.space.to_spec(),
            "Y": self.target.space.to_spec(),
        }


class Image:
    """Lazy view of W f; duck-types VectorFunction for the norm routines."""

    def __init__(self, W: WeightedCompositionOp, f: VectorFunction):
        self.W, self.f = W, f
        self.codomain = W.target.space

    def values(self, z) -> np.ndarray:
        z = fk._as_points(z)
        w = self.W.phi._value(z)
        return np.einsum("...ij,...j->...i", self.W.psi.values(z), self.f.values(w))

    def derivs(self, z) -> np.ndarray:
        # (W f)'(z) = phi'(z) psi_z f'(phi(z)) + psi'_z f(phi(z))
        z = fk._as_points(z)
        w = self.W.phi._value(z)
        dphi = self.W.phi._deriv(z)
        t1 = np.einsum("...ij,...j->...i", self.W.psi.values(z), self.f.derivs(w)) * dphi[..., None]
        t2 = np.einsum("...ij,...j->...i", self.W.psi.derivs(z), self.f.values(w))
        return t1 + t2

    def norms(self, z) -> np.ndarray:
        return vec_norms(self.values(z), self.codomain.norm_kind)

    def deriv_norms(self, z) -> np.ndarray:
        return vec_norms(self.derivs(z), self.codomain.norm_kind)


def apply(W: WeightedCompositionOp, f: VectorFunction, z) -> Vector:
    return W.apply(f, z)


def apply_deriv(W: WeightedCompositionOp, f: VectorFunction, z) -> Vector:
    return W.apply_deriv(f, z)


def decomposition(W: WeightedCompositionOp):
    """The two operators of D W = W_{phi' psi, phi} D + W_{psi', phi}."""
    return W.with_symbol(W.psi.times(W.phi.inner.derivative())), W.with_symbol(W.psi.derivative())


def deriv_via_decomposition(W: WeightedCompositionOp, f: VectorFunction, z) -> np.ndarray:
    w1, w2 = decomposition(W)
    z = np.asarray(z, dtype=complex)
    return w1.image(f.derivative()).values(z) + w2.image(f).values(z)


def dilate(f: VectorFunction, r: float) -> VectorFunction:
    """K_r f (z) = f(r z)."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"dilation needs 0 < r < 1, got {r}")
    return f.dilate(r)


def truncate(f: VectorFunction, n: int) -> VectorFunction:
    """Degree-n Taylor polynomial L_n f."""
    if n < 0:
        raise ValueError("truncation degree must be >= 0")
    return VectorFunction(f.codomain, (fk.Poly(c.taylor_coeffs(n)) for c in f.components))


def coefficient(f: VectorFunction, k: int) -> Vector:
    """q_k f = f^(k)(0) / k!."""
    return Vector(f.codomain, f.taylor_coeff(k))


def t_psi(psi: OperatorSymbol, x: Vector) -> VectorFunction:
    """T_psi x : z -> psi_z x."""
    if x.space != psi.domain:
        raise DimensionMismatchError("vector is not in the symbol's domain")
    comps = []
    for row in psi.entries:
        comps.append(fk.Sum(fk.Scale(c, e) for c, e in zip(x.entries, row)))
    return VectorFunction(psi.codomain, comps)


def _poly_of(f: fk.AnalyticScalar):
    if isinstance(f, fk.Poly):
        return np.array(f.coeffs)
    if isinstance(f, fk.Affine):
        return np.array([f.c, f.s])
    return None


def multiply_phik(phi: fk.SelfMap, k: int, f: VectorFunction) -> VectorFunction:
    """M_{phi^k} f = phi^k f; polynomial inputs stay polynomials."""
    if k < 1:
        raise ValueError("power must be >= 1")
    base = _poly_of(phi.inner)
    comps = []
    for c in f.components:
        pc = _poly_of(c)
        if base is not None and pc is not None:
            out = pc
            for _ in range(k):
                out = np.convolve(out, base)
            comps.append(fk.Poly(out))
        else:
            comps.append(fk.Product([phi.inner] * k + [c]))
    return VectorFunction(f.codomain, comps)


RADIAL_STEPS = tuple(range(10, 21))


def _extrapolate(h: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Neville extrapolation of vals(h) to h = 0 (vals has shape (len(h), ...))."""
    p = [v.copy() for v in vals]
    n = len(h)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i])
    return p[0]


def restrict_extend_check(W: WeightedCompositionOp, f: VectorFunction, boundary_points, use_last: int = 4) -> float:
    """Max distance between the closed-disk operator at boundary points and the
    extension of W f along radial sequences (1 - 2**-j) w, j = 10..20.

    The radial limit is estimated by polynomial extrapolation in 2**-j over
    the last ``use_last`` terms of the sequence.
    """
    w = np.atleast_1d(np.asarray(boundary_points, dtype=complex))
    if np.any(np.abs(np.abs(w) - 1.0) > 1e-12):
        raise PreconditionError("boundary points must have modulus 1")
    img = W.image(f)
    direct = img.values(w)
    steps = np.array(RADIAL_STEPS[-use_last:], dtype=float)
    h = 2.0**-steps
    seq = np.stack([img.values((1.0 - hj) * w) for hj in h])
    limit = _extrapolate(h, seq)
    return float(np.max(vec_norms(direct - limit, W.target.space.norm_kind)))
