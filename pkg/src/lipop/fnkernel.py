"""Scalar analytic functions on the closed unit disk.

Every function is a member of a closed union of variants (polynomials,
principal-branch powers ``c (1 - conj(a) z)**g``, the extremal test profile,
affine maps, Blaschke factors, and sums / scalings / products of these), so
values, derivatives and Taylor coefficients are all exact closed forms.

All evaluators accept scalars or numpy arrays of complex points and work
elementwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateParameterError, DomainError, NotASelfMapError, SpecError

logger = logging.getLogger(__name__)

# slack for points produced by exp(1j*theta) and similar rounding
DOMAIN_SLACK = 1e-12
TESTFN_MIN_MODULUS = 1e-6
SELF_MAP_TOL = 1e-12
BOUNDARY_SAMPLES = 4096


def _as_points(z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + DOMAIN_SLACK):
        bad = z.ravel()[np.argmax(np.abs(z).ravel())]
        raise DomainError(f"point {bad} lies outside the closed unit disk")
    return z


def _scalar_out(z_in, out):
    if np.ndim(z_in) == 0:
        return complex(out)
    return out


class AnalyticScalar:
    """Base class of the variant union. Subclasses are frozen dataclasses."""

    def value(self, z):
        z_arr = _as_points(z)
        return _scalar_out(z, self._value(z_arr))

    def deriv(self, z):
        z_arr = _as_points(z)
        return _scalar_out(z, self._deriv(z_arr))

    def taylor_coeff(self, k: int) -> complex:
        if k < 0:
            raise ValueError("Taylor index must be nonnegative")
        return complex(self.taylor_coeffs(k)[k])

    def taylor_coeffs(self, n: int) -> np.ndarray:
        """Coefficients c_0..c_n of the expansion at the origin."""
        raise NotImplementedError

    def derivative(self) -> "AnalyticScalar":
        """The derivative as another member of the union."""
        raise NotImplementedError

    def dilate(self, r: float) -> "AnalyticScalar":
        """The function z -> f(r z), exactly represented."""
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError

    def _value(self, z):
        raise NotImplementedError

    def _deriv(self, z):
        raise NotImplementedError

    def __call__(self, z):
        return self.value(z)

    def __add__(self, other):
        return Sum((self, other))

    def __mul__(self, other):
        if isinstance(other, AnalyticScalar):
            return Product((self, other))
        return Scale(complex(other), self)

    __rmul__ = __mul__

    def __neg__(self):
        return Scale(-1.0 + 0j, self)

    def __sub__(self, other):
        return Sum((self, Scale(-1.0 + 0j, other)))


@dataclass(frozen=True)
class Poly(AnalyticScalar):
    coeffs: tuple

    def __init__(self, coeffs: Sequence[complex]):
        c = tuple(complex(x) for x in coeffs) or (0j,)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nz = [k for k, c in enumerate(self.coeffs) if c != 0]
        return nz[-1] if nz else 0

    def _value(self, z):
        out = np.zeros_like(z)
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def _deriv(self, z):
        return self.derivative()._value(z)

    def taylor_coeffs(self, n):
        out = np.zeros(n + 1, dtype=complex)
        m = min(n + 1, len(self.coeffs))
        out[:m] = self.coeffs[:m]
        return out

    def derivative(self):
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def dilate(self, r):
        return Poly([c * r**k for k, c in enumerate(self.coeffs)])

    def to_spec(self):
        return {"kind": "poly", "coeffs": [_cpair(c) for c in self.coeffs]}


@dataclass(frozen=True)
class Power(AnalyticScalar):
    """c * (1 - conj(a) z) ** gamma on the principal branch, |a| < 1."""

    c: complex
    a: complex
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "gamma", float(self.gamma))
        if not abs(self.a) < 1.0:
            raise DegenerateParameterError(f"Power needs |a| < 1, got {self.a}")

    def _base(self, z):
        w = 1.0 - np.conj(self.a) * z
        # |a| < 1 and |z| <= 1 keep w in the right half plane
        if not np.all(w.real > 0.0):
            raise DomainError("principal branch of (1 - conj(a) z) ** gamma left the right half plane")
        return w

    def _value(self, z):
        if self.a == 0:
            return np.full_like(z, self.c)
        return self.c * self._base(z) ** self.gamma

    def _deriv(self, z):
        if self.a == 0 or self.gamma == 0:
            return np.zeros_like(z)
        w = self._base(z)
        return -self.gamma * np.conj(self.a) * self.c * w ** (self.gamma - 1.0)

    def taylor_coeffs(self, n):
        out = np.zeros(n + 1, dtype=complex)
        t = self.c
        ab = -np.conj(self.a)
        for k in range(n + 1):
            out[k] = t
            t = t * (self.gamma - k) / (k + 1) * ab
        return out

    def derivative(self):
        if self.a == 0 or self.gamma == 0:
            return Poly([0])
        return Power(-self.gamma * np.conj(self.a) * self.c, self.a, self.gamma - 1.0)

    def dilate(self, r):
        return Power(self.c, r * self.a, self.gamma)

    def to_spec(self):
        return {"kind": "power", "c": _cpair(self.c), "a": _cpair(self.a), "gamma": self.gamma}


@dataclass(frozen=True)
class TestFn(AnalyticScalar):
    """Scalar profile of the extremal family

        (1/conj(a)) * ((1-|a|^2) (1-conj(a) z)^(alpha-1) - (1-conj(a) z)^alpha)

    which vanishes at z = a and has derivative (1-|a|^2)^(alpha-1) there.
    """

    __test__ = False  # not a pytest class

    a: complex
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "alpha", float(self.alpha))
        if abs(self.a) < TESTFN_MIN_MODULUS:
            raise DegenerateParameterError(f"TestFn needs |a| >= {TESTFN_MIN_MODULUS}, got {self.a}")
        if not abs(self.a) < 1.0:
            raise DegenerateParameterError(f"TestFn needs |a| < 1, got {self.a}")
        if not 0.0 < self.alpha <= 1.0:
            raise DegenerateParameterError(f"TestFn needs alpha in (0, 1], got {self.alpha}")

    def expansion(self) -> "Sum":
        ab = np.conj(self.a)
        s = 1.0 - abs(self.a) ** 2
        return Sum((
            Power(s / ab, self.a, self.alpha - 1.0),
            Power(-1.0 / ab, self.a, self.alpha),
        ))

    def _value(self, z):
        ab = np.conj(self.a)
        s = 1.0 - abs(self.a) ** 2
        w = 1.0 - ab * z
        return (s * w ** (self.alpha - 1.0) - w**self.alpha) / ab

    def _deriv(self, z):
        # term-wise: (1-|a|^2)(1-alpha) w^(alpha-2) + alpha w^(alpha-1)
        s = 1.0 - abs(self.a) ** 2
        w = 1.0 - np.conj(self.a) * z
        return s * (1.0 - self.alpha) * w ** (self.alpha - 2.0) + self.alpha * w ** (self.alpha - 1.0)

    def taylor_coeffs(self, n):
        return self.expansion().taylor_coeffs(n)

    def derivative(self):
        s = 1.0 - abs(self.a) ** 2
        return Sum((
            Power(s * (1.0 - self.alpha), self.a, self.alpha - 2.0),
            Power(self.alpha, self.a, self.alpha - 1.0),
        ))

    def dilate(self, r):
        return self.expansion().dilate(r)

    def to_spec(self):
        return {"kind": "testfn", "a": _cpair(self.a), "alpha": self.alpha}


@dataclass(frozen=True)
class Affine(AnalyticScalar):
    """s z + c."""

    s: complex
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "c", complex(self.c))

    def _value(self, z):
        return self.s * z + self.c

    def _deriv(self, z):
        return np.full_like(z, self.s)

    def taylor_coeffs(self, n):
        out = np.zeros(n + 1, dtype=complex)
        out[0] = self.c
        if n >= 1:
            out[1] = self.s
        return out

    def derivative(self):
        return Poly([self.s])

    def dilate(self, r):
        return Affine(r * self.s, self.c)

    def to_spec(self):
        return {"kind": "affine", "s": _cpair(self.s), "c": _cpair(self.c)}


@dataclass(frozen=True)
class Blaschke(AnalyticScalar):
    """(a - z) / (1 - conj(a) z), |a| < 1."""

    a: complex

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if not abs(self.a) < 1.0:
            raise DegenerateParameterError(f"Blaschke needs |a| < 1, got {self.a}")

    def _value(self, z):
        return (self.a - z) / (1.0 - np.conj(self.a) * z)

    def _deriv(self, z):
        return (abs(self.a) ** 2 - 1.0) / (1.0 - np.conj(self.a) * z) ** 2

    def taylor_coeffs(self, n):
        ab = np.conj(self.a)
        out = np.zeros(n + 1, dtype=complex)
        out[0] = self.a
        p = 1.0 + 0j
        for k in range(1, n + 1):
            out[k] = p * (abs(self.a) ** 2 - 1.0)
            p *= ab
        return out

    def derivative(self):
        return Power(abs(self.a) ** 2 - 1.0, self.a, -2.0)

    def dilate(self, r):
        return Product((Affine(-r, self.a), Power(1.0, r * self.a, -1.0)))

    def to_spec(self):
        return {"kind": "blaschke", "a": _cpair(self.a)}


@dataclass(frozen=True)
class Sum(AnalyticScalar):
    terms: tuple

    def __init__(self, terms):
        object.__setattr__(self, "terms", tuple(terms))

    def _value(self, z):
        out = np.zeros_like(z)
        for t in self.terms:
            out = out + t._value(z)
        return out

    def _deriv(self, z):
        out = np.zeros_like(z)
        for t in self.terms:
            out = out + t._deriv(z)
        return out

    def taylor_coeffs(self, n):
        out = np.zeros(n + 1, dtype=complex)
        for t in self.terms:
            out += t.taylor_coeffs(n)
        return out

    def derivative(self):
        return Sum(t.derivative() for t in self.terms)

    def dilate(self, r):
        return Sum(t.dilate(r) for t in self.terms)

    def to_spec(self):
        return {"kind": "sum", "terms": [t.to_spec() for t in self.terms]}


@dataclass(frozen=True)
class Scale(AnalyticScalar):
    c: complex
    inner: AnalyticScalar

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))

    def _value(self, z):
        return self.c * self.inner._value(z)

    def _deriv(self, z):
        return self.c * self.inner._deriv(z)

    def taylor_coeffs(self, n):
        return self.c * self.inner.taylor_coeffs(n)

    def derivative(self):
        return Scale(self.c, self.inner.derivative())

    def dilate(self, r):
        return Scale(self.c, self.inner.dilate(r))

    def to_spec(self):
        return {"kind": "scale", "c": _cpair(self.c), "inner": self.inner.to_spec()}


@dataclass(frozen=True)
class Product(AnalyticScalar):
    """Pointwise product; derivative by the Leibniz rule."""

    factors: tuple

    def __init__(self, factors):
        object.__setattr__(self, "factors", tuple(factors))

    def _value(self, z):
        out = np.ones_like(z)
        for f in self.factors:
            out = out * f._value(z)
        return out

    def _deriv(self, z):
        vals = [f._value(z) for f in self.factors]
        out = np.zeros_like(z)
        for i, f in enumerate(self.factors):
            term = f._deriv(z)
            for j, v in enumerate(vals):
                if j != i:
                    term = term * v
            out = out + term
        return out

    def taylor_coeffs(self, n):
        out = np.zeros(n + 1, dtype=complex)
        out[0] = 1.0
        for f in self.factors:
            out = np.convolve(out, f.taylor_coeffs(n))[: n + 1]
        return out

    def derivative(self):
        terms = []
        for i, f in enumerate(self.factors):
            rest = [g for j, g in enumerate(self.factors) if j != i]
            terms.append(Product([f.derivative(), *rest]))
        return Sum(terms)

    def dilate(self, r):
        return Product(f.dilate(r) for f in self.factors)

    def to_spec(self):
        return {"kind": "product", "factors": [f.to_spec() for f in self.factors]}


def constant(c) -> Poly:
    return Poly([c])


IDENTITY = Affine(1.0, 0.0)


# ---------------------------------------------------------------------------
# self maps


@dataclass(frozen=True)
class SelfMap:
    """An analytic self-map of the disk with its boundary certificate."""

    inner: AnalyticScalar
    sup_modulus_certificate: float
    is_constant: bool

    def value(self, z):
        return self.inner.value(z)

    def deriv(self, z):
        return self.inner.deriv(z)

    def _value(self, z):
        return self.inner._value(z)

    def _deriv(self, z):
        return self.inner._deriv(z)


def boundary_sup(f: AnalyticScalar, samples: int = BOUNDARY_SAMPLES, refine: int = 24):
    """Max of |f| on the unit circle: equispaced grid plus angular trisection."""
    theta = 2 * np.pi * np.arange(samples) / samples
    mod = np.abs(f._value(np.exp(1j * theta)))
    k = int(np.argmax(mod))
    best, best_t = float(mod[k]), theta[k]
    lo, hi = best_t - 2 * np.pi / samples, best_t + 2 * np.pi / samples
    for _ in range(refine):
        t1 = lo + (hi - lo) / 3
        t2 = hi - (hi - lo) / 3
        m1, m2 = np.abs(f._value(np.exp(1j * np.array([t1, t2]))))
        if m1 > best:
            best, best_t = float(m1), t1
        if m2 > best:
            best, best_t = float(m2), t2
        if m1 >= m2:
            hi = t2
        else:
            lo = t1
    return best, best_t


def make_self_map(f: AnalyticScalar) -> SelfMap:
    """Validate that ``f`` maps the closed disk into itself (maximum modulus)."""
    sup, theta = boundary_sup(f)
    if sup > 1.0 + SELF_MAP_TOL:
        raise NotASelfMapError(f"|phi| reaches {sup!r} at angle {theta!r} on the unit circle")
    ring = np.exp(2j * np.pi * np.arange(BOUNDARY_SAMPLES) / BOUNDARY_SAMPLES)
    f0 = f._value(np.zeros(1, dtype=complex))[0]
    is_const = bool(np.max(np.abs(f._value(ring) - f0)) <= 1e-14 * (1.0 + abs(f0)))
    if is_const:
        logger.warning("constant self map accepted; criteria degenerate to zero")
    return SelfMap(f, sup, is_const)


# ---------------------------------------------------------------------------
# JSON fragments


def _cpair(c) -> list:
    c = complex(c)
    return [c.real, c.imag]


def parse_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise SpecError(f"expected [re, im] pair, got {v!r}")


def from_spec(spec: dict) -> AnalyticScalar:
    try:
        kind = spec["kind"]
        if kind == "poly":
            return Poly([parse_complex(c) for c in spec["coeffs"]])
        if kind == "power":
            return Power(parse_complex(spec["c"]), parse_complex(spec["a"]), float(spec["gamma"]))
        if kind == "testfn":
            return TestFn(parse_complex(spec["a"]), float(spec["alpha"]))
        if kind == "affine":
            return Affine(parse_complex(spec["s"]), parse_complex(spec["c"]))
        if kind == "blaschke":
            return Blaschke(parse_complex(spec["a"]))
        if kind == "sum":
            return Sum(from_spec(t) for t in spec["terms"])
        if kind == "scale":
            return Scale(parse_complex(spec["c"]), from_spec(spec["inner"]))
        if kind == "product":
            return Product(from_spec(t) for t in spec["factors"])
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed function spec {spec!r}: {exc}") from exc
    except DegenerateParameterError as exc:
        raise SpecError(str(exc)) from exc
    raise SpecError(f"unknown function kind {spec.get('kind')!r}")
