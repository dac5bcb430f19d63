"""Vector-valued analytic functions and their function-space norms.

For 0 < alpha < 1 the working norm on the analytic Lipschitz space is the
Bloch form

    ||f(0)|| + sup_z (1 - |z|^2)^(1 - alpha) ||f'(z)||

and for alpha = 1 it is ``sup ||f|| + sup ||f'||``.  The two-point Lipschitz
seminorm is only ever estimated from below and serves as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fnkernel as fk
from .classify import DECAYS, PERSISTS, ClassifierParams, decay
from .errors import DimensionMismatchError, SpecError
from .normedspace import SCALARS, NormedSpace, Vector, vec_norms
from .sampling import DiskSampler, SupResult, sup_over_disk


def one_minus_sq(z) -> np.ndarray:
    """1 - |z|^2, factored to keep relative accuracy near the circle."""
    r = np.abs(z)
    return (1.0 - r) * (1.0 + r)


def weight(z, exponent: float) -> np.ndarray:
    """Standard weight (1 - |z|^2)^exponent."""
    if exponent == 0:
        return np.ones(np.shape(z))
    return one_minus_sq(z) ** exponent


@dataclass(frozen=True)
class VectorFunction:
    codomain: NormedSpace
    components: tuple

    def __init__(self, codomain: NormedSpace, components):
        comps = tuple(components)
        if len(comps) != codomain.dim:
            raise DimensionMismatchError(f"{len(comps)} components for a {codomain.dim}-dimensional space")
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "components", comps)

    @classmethod
    def scalar(cls, f: fk.AnalyticScalar) -> "VectorFunction":
        return cls(SCALARS, (f,))

    @classmethod
    def tensor(cls, f: fk.AnalyticScalar, x: Vector) -> "VectorFunction":
        """The elementary tensor z -> f(z) x."""
        return cls(x.space, tuple(fk.Scale(c, f) for c in x.entries))

    @classmethod
    def constant(cls, x: Vector) -> "VectorFunction":
        return cls(x.space, tuple(fk.constant(c) for c in x.entries))

    @property
    def dim(self) -> int:
        return self.codomain.dim

    def values(self, z) -> np.ndarray:
        z = fk._as_points(z)
        return np.stack([c._value(z) for c in self.components], axis=-1)

    def derivs(self, z) -> np.ndarray:
        z = fk._as_points(z)
        return np.stack([c._deriv(z) for c in self.components], axis=-1)

    def value(self, z) -> Vector:
        return Vector(self.codomain, self.values(np.asarray(z, dtype=complex)))

    def deriv(self, z) -> Vector:
        return Vector(self.codomain, self.derivs(np.asarray(z, dtype=complex)))

    def norms(self, z) -> np.ndarray:
        return vec_norms(self.values(z), self.codomain.norm_kind)

    def deriv_norms(self, z) -> np.ndarray:
        return vec_norms(self.derivs(z), self.codomain.norm_kind)

    def derivative(self) -> "VectorFunction":
        return VectorFunction(self.codomain, (c.derivative() for c in self.components))

    def dilate(self, r: float) -> "VectorFunction":
        return VectorFunction(self.codomain, (c.dilate(r) for c in self.components))

    def taylor_coeff(self, k: int) -> np.ndarray:
        return np.array([c.taylor_coeff(k) for c in self.components])

    def __add__(self, other: "VectorFunction") -> "VectorFunction":
        if other.codomain != self.codomain:
            raise DimensionMismatchError("sum of functions with different codomains")
        return VectorFunction(self.codomain, (a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorFunction") -> "VectorFunction":
        if other.codomain != self.codomain:
            raise DimensionMismatchError("difference of functions with different codomains")
        return VectorFunction(self.codomain, (a - b for a, b in zip(self.components, other.components)))

    def scaled(self, c: complex) -> "VectorFunction":
        return VectorFunction(self.codomain, (fk.Scale(c, f) for f in self.components))

    def to_spec(self) -> dict:
        return {"space": self.codomain.to_spec(), "components": [c.to_spec() for c in self.components]}

    @classmethod
    def from_spec(cls, spec: dict) -> "VectorFunction":
        """Either ``{"space": ..., "components": [...]}`` or a bare scalar fnspec."""
        if not isinstance(spec, dict):
            raise SpecError("function file must hold a JSON object")
        if "components" in spec:
            space = NormedSpace.from_spec(spec.get("space", {"dim": len(spec["components"])}))
            comps = [fk.from_spec(c) for c in spec["components"]]
            try:
                return cls(space, comps)
            except DimensionMismatchError as exc:
                raise SpecError(str(exc)) from exc
        return cls.scalar(fk.from_spec(spec))


class Flavor(str, Enum):
    BIG = "big"
    LITTLE = "little"


@dataclass(frozen=True)
class SpaceSpec:
    alpha: float
    space: NormedSpace
    flavor: Flavor = Flavor.BIG

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class WeightSpec:
    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("weight exponent must be >= 0")

    def __call__(self, z):
        return weight(z, self.gamma)


@dataclass
class NormResult:
    value: float
    witness: complex
    sup: SupResult
    at_zero: float = 0.0

    def __float__(self):
        return self.value

    @property
    def seminorm(self) -> float:
        return self.value - self.at_zero


def _norm_at_zero(f: VectorFunction) -> float:
    return float(f.norms(np.zeros(1, dtype=complex))[0])


def lambda_norm(f: VectorFunction, alpha: float, sampler: DiskSampler = DiskSampler(), extra_points=None) -> NormResult:
    """||f(0)|| + sup (1-|z|^2)^(1-alpha) ||f'(z)||, for 0 < alpha < 1."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"lambda_norm needs 0 < alpha < 1 (got {alpha}); use lambda1_norm for alpha = 1")
    f0 = _norm_at_zero(f)
    sup = sup_over_disk(lambda z: weight(z, 1.0 - alpha) * f.deriv_norms(z), sampler, extra_points)
    return NormResult(f0 + sup.value, sup.witness, sup, f0)


@dataclass
class Lambda1Result(NormResult):
    sup_f: SupResult | None = None

    @property
    def seminorm(self) -> float:
        return self.sup.value


def lambda1_norm(f: VectorFunction, sampler: DiskSampler = DiskSampler(), extra_points=None) -> Lambda1Result:
    """sup ||f|| + sup ||f'||, the working norm for alpha = 1.

    Both functions extend continuously to the closed disk, so the unit circle
    is probed as well.
    """
    extra = np.exp(1j * sampler.thetas)
    if extra_points is not None:
        extra = np.concatenate([extra, np.atleast_1d(np.asarray(extra_points, dtype=complex))])
    s_f = sup_over_disk(f.norms, sampler, extra)
    s_d = sup_over_disk(f.deriv_norms, sampler, extra)
    return Lambda1Result(s_f.value + s_d.value, s_d.witness, s_d, s_f.value, sup_f=s_f)


def space_norm(f: VectorFunction, alpha: float, sampler: DiskSampler = DiskSampler(), extra_points=None) -> NormResult:
    if alpha >= 1.0:
        return lambda1_norm(f, sampler, extra_points)
    return lambda_norm(f, alpha, sampler, extra_points)


def hinf_nu_norm(f: VectorFunction, w: WeightSpec, sampler: DiskSampler = DiskSampler()) -> NormResult:
    """sup nu(z) ||f(z)|| for the standard weight nu(z) = (1-|z|^2)^gamma."""
    sup = sup_over_disk(lambda z: w(z) * f.norms(z), sampler)
    return NormResult(sup.value, sup.witness, sup)


def lipschitz_seminorm_estimate(
    f: VectorFunction,
    alpha: float,
    pair_budget: int = 4096,
    seed: int = 0,
    sampler: DiskSampler = DiskSampler(),
) -> float:
    """Lower bound for sup ||f(z1) - f(z2)|| / |z1 - z2|^alpha over the closed disk.

    Pairs: seeded random pairs in the disk and on its boundary, near-diagonal
    pairs at random scales, antipodal boundary pairs, and near-diagonal pairs
    around the witness of the Bloch-form norm.
    """
    if pair_budget < 1:
        raise ValueError("pair_budget must be >= 1")
    rng = np.random.default_rng(seed)

    def disk(n):
        return np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))

    def circle(n):
        return np.exp(2j * np.pi * rng.random(n))

    n1 = max(pair_budget // 2, 1)
    n2 = pair_budget // 4
    n3 = pair_budget - n1 - n2
    z1 = [disk(n1), circle(n2)]
    z2 = [disk(n1), circle(n2)]
    base = disk(n3)
    rho = (1.0 - np.abs(base) + 1e-3) * 10.0 ** rng.uniform(-3.0, 0.0, n3)
    z1.append(base)
    z2.append(base + rho * np.exp(2j * np.pi * rng.random(n3)))

    th = 2.0 * np.pi * np.arange(64) / 64
    z1.append(np.exp(1j * th))
    z2.append(-np.exp(1j * th))

    if alpha < 1.0:
        wit = lambda_norm(f, alpha, sampler).witness
    else:
        wit = lambda1_norm(f, sampler).witness
    gap = max(1.0 - abs(wit), 1e-9)
    scales = np.array([0.01, 0.1, 0.5, 1.0])
    dirs = np.exp(2j * np.pi * np.arange(8) / 8)
    near = (wit + gap * scales[:, None] * dirs[None, :]).ravel()
    z1.append(np.full(near.shape, wit))
    z2.append(near)

    a = np.concatenate(z1)
    b = np.concatenate(z2)
    # pull stray points back into the closed disk
    mod = np.abs(b)
    b = np.where(mod > 1.0, b / np.where(mod > 0, mod, 1.0), b)
    d = np.abs(a - b)
    keep = d > 1e-12
    a, b, d = a[keep], b[keep], d[keep]
    diff = vec_norms(f.values(a) - f.values(b), f.codomain.norm_kind)
    return float(np.max(diff / d**alpha)) if d.size else 0.0


@dataclass
class LittleProfile:
    radii: np.ndarray
    values: np.ndarray  # sup over |z| = r_j of (1-|z|^2)^(1-alpha) ||f'(z)||
    verdict: str  # member / not_member / inconclusive
    norm: float
    ratio: float

    def pairs(self):
        return [(float(r), float(v)) for r, v in zip(self.radii, self.values)]


MEMBER, NOT_MEMBER = "member", "not_member"


def verdict_from_decay(d: str) -> str:
    return {DECAYS: MEMBER, PERSISTS: NOT_MEMBER}.get(d, "inconclusive")


def little_space_profile(
    f: VectorFunction,
    alpha: float,
    sampler: DiskSampler = DiskSampler(),
    params: ClassifierParams = ClassifierParams(),
) -> LittleProfile:
    """Per-circle weighted derivative and the membership verdict for the little space."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("little-space membership is defined here for 0 < alpha < 1")
    nr = lambda_norm(f, alpha, sampler)
    circle = nr.sup.circle_max
    d = decay(circle, params, scale=nr.value)
    return LittleProfile(sampler.radii, circle, verdict_from_decay(d.verdict), nr.value, d.ratio)
