"""Finite-dimensional complex normed spaces and induced operator norms.

``C^n`` with the l1, l2 or l-infinity norm stands in for the Banach spaces
X and Y.  Induced norms are offered only for pairs that can be computed
exactly or by power iteration:

    l1 -> any     maximum over columns of the codomain norm
    l2 -> l2      largest singular value (power iteration on A^H A)
    linf -> linf  maximum absolute row sum

The batched helpers (``vec_norms``, ``op_norms``) take stacks of vectors /
matrices in the trailing axes and are what the supremum engine uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatchError, SpecError, UnsupportedNormPairError

POWER_ITER_TOL = 1e-12
POWER_ITER_MAX = 500


class NormKind(str, Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"


@dataclass(frozen=True)
class NormedSpace:
    dim: int
    norm_kind: NormKind = NormKind.L2

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError("dim must be >= 1")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "norm_kind", NormKind(self.norm_kind))

    def vector(self, entries) -> "Vector":
        return Vector(self, entries)

    def basis(self, j: int) -> "Vector":
        e = np.zeros(self.dim, dtype=complex)
        e[j] = 1.0
        return Vector(self, e)

    def to_spec(self) -> dict:
        return {"dim": self.dim, "norm": self.norm_kind.value}

    @classmethod
    def from_spec(cls, spec: dict) -> "NormedSpace":
        try:
            return cls(int(spec["dim"]), NormKind(spec.get("norm", "l2")))
        except (KeyError, ValueError, TypeError) as exc:
            raise SpecError(f"bad space spec {spec!r}: {exc}") from exc


SCALARS = NormedSpace(1, NormKind.L2)


@dataclass(frozen=True, eq=False)
class Vector:
    space: NormedSpace
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex).reshape(-1)
        if e.shape[0] != self.space.dim:
            raise DimensionMismatchError(f"{e.shape[0]} entries for a {self.space.dim}-dimensional space")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def norm(self) -> float:
        return vec_norm(self)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    domain: NormedSpace
    codomain: NormedSpace
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatchError(
                f"matrix shape {e.shape} does not match {self.codomain.dim}x{self.domain.dim}"
            )
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def __matmul__(self, other):
        if isinstance(other, Vector):
            if other.space != self.domain:
                raise DimensionMismatchError("vector is not in the operator's domain")
            return Vector(self.codomain, self.entries @ other.entries)
        if isinstance(other, OperatorMatrix):
            if other.codomain != self.domain:
                raise DimensionMismatchError("incompatible composition")
            return OperatorMatrix(other.domain, self.codomain, self.entries @ other.entries)
        return NotImplemented

    def norm(self) -> float:
        return op_norm(self)


def vec_norms(v: np.ndarray, kind: NormKind) -> np.ndarray:
    """Norms of a stack of vectors along the last axis."""
    a = np.abs(v)
    kind = NormKind(kind)
    if kind is NormKind.L1:
        return a.sum(axis=-1)
    if kind is NormKind.L2:
        return np.sqrt((a * a).sum(axis=-1))
    return a.max(axis=-1)


def vec_norm(v: Vector) -> float:
    return float(vec_norms(v.entries, v.space.norm_kind))


def _check_pair(dom: NormKind, cod: NormKind):
    if dom is NormKind.L1:
        return
    if dom is cod:
        return
    raise UnsupportedNormPairError(f"induced norm {dom.value} -> {cod.value} is not supported")


def _spectral_norms(a: np.ndarray):
    """Largest singular values of a stack of matrices by power iteration.

    Start vector is all-ones; rows where it lies in the null space of A^H A
    restart from the largest column of A^H A.  Returns (norms, right vectors).
    """
    n = a.shape[-1]
    g = np.einsum("...ki,...kj->...ij", a.conj(), a)
    v = np.ones(a.shape[:-2] + (n,), dtype=complex)
    w = np.einsum("...ij,...j->...i", g, v)
    dead = np.linalg.norm(w, axis=-1) <= 1e-300
    if np.any(dead):
        col = np.argmax(np.linalg.norm(g, axis=-2), axis=-1)
        v = np.where(dead[..., None], np.take_along_axis(g, col[..., None, None], axis=-1)[..., 0], v)
        v = np.where(dead[..., None] & (np.linalg.norm(v, axis=-1, keepdims=True) == 0), 1.0, v)
    nv = np.linalg.norm(v, axis=-1, keepdims=True)
    v = v / np.where(nv == 0, 1.0, nv)
    lam = np.zeros(a.shape[:-2])
    active = np.ones(a.shape[:-2], dtype=bool)
    for _ in range(POWER_ITER_MAX):
        w = np.einsum("...ij,...j->...i", g, v)
        new = np.real(np.einsum("...i,...i->...", v.conj(), w))
        nw = np.linalg.norm(w, axis=-1, keepdims=True)
        upd = active[..., None] & (nw > 0)
        v = np.where(upd, w / np.where(nw == 0, 1.0, nw), v)
        change = np.abs(new - lam) <= POWER_ITER_TOL * np.abs(new)
        lam = np.where(active, new, lam)
        active &= ~change & (nw[..., 0] > 0)
        if not np.any(active):
            break
    # Rayleigh quotient on the final iterate
    w = np.einsum("...ij,...j->...i", g, v)
    lam = np.maximum(lam, np.real(np.einsum("...i,...i->...", v.conj(), w)))
    return np.sqrt(np.maximum(lam, 0.0)), v


def op_norms(a: np.ndarray, dom: NormKind, cod: NormKind) -> np.ndarray:
    """Induced norms of a stack of (m, n) matrices in the trailing axes."""
    dom, cod = NormKind(dom), NormKind(cod)
    _check_pair(dom, cod)
    a = np.asarray(a, dtype=complex)
    m, n = a.shape[-2:]
    if m == 1 and n == 1:
        return np.abs(a[..., 0, 0])
    if dom is NormKind.L1:
        # extreme points of the l1 ball are unimodular multiples of e_j
        return vec_norms(np.swapaxes(a, -1, -2), cod).max(axis=-1)
    if dom is NormKind.LINF:
        return np.abs(a).sum(axis=-1).max(axis=-1)
    return _spectral_norms(a)[0]


def op_norm(A: OperatorMatrix) -> float:
    return float(op_norms(A.entries, A.domain.norm_kind, A.codomain.norm_kind))


def norming_vector(A: OperatorMatrix) -> Vector:
    """A unit vector x of the domain with ||A x|| equal (or close) to ||A||."""
    dom, cod = A.domain.norm_kind, A.codomain.norm_kind
    _check_pair(dom, cod)
    a = A.entries
    n = A.domain.dim
    if dom is NormKind.L1:
        j = int(np.argmax(vec_norms(a.T, cod)))
        return A.domain.basis(j)
    if dom is NormKind.LINF:
        i = int(np.argmax(np.abs(a).sum(axis=1)))
        row = a[i]
        x = np.where(row == 0, 1.0, np.conj(row) / np.where(row == 0, 1.0, np.abs(row)))
        return Vector(A.domain, x)
    if n == 1:
        return A.domain.basis(0)
    _, v = _spectral_norms(a[None])
    return Vector(A.domain, v[0] / np.linalg.norm(v[0]))
