"""Deterministic radial-angular supremum engine for functions on the disk.

Points are laid out on circles of radius ``r_j = 1 - 2**-j`` (j = 1..J) plus
the origin, each circle carrying ``angles`` equispaced points.  After the grid
pass the best cell is polished by alternating a golden-section step in the
radius with an angular trisection step.  Ties are broken by smallest radius,
then smallest angle index, which is what ``np.argmax`` on the radius-major
grid gives.

Grid rows can be evaluated on a thread pool (``LIPOP_THREADS``); each point
is computed independently and the reduction happens afterwards, so results do
not depend on the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import EvaluationError, SpecError

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class DiskSampler:
    J: int = 20
    angles: int = 256
    refine: int = 24

    def __post_init__(self):
        if self.J < 2 or self.angles < 1 or self.refine < 0:
            raise ValueError("sampler needs J >= 2, angles >= 1, refine >= 0")

    @property
    def radii(self) -> np.ndarray:
        """Origin followed by the schedule radii 1 - 2**-j."""
        return np.concatenate([[0.0], 1.0 - 2.0 ** -np.arange(1, self.J + 1)])

    @property
    def r_max(self) -> float:
        return 1.0 - 2.0**-self.J

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angles) / self.angles

    def grid(self) -> np.ndarray:
        return self.radii[:, None] * np.exp(1j * self.thetas)[None, :]

    def enlarged(self, dJ: int = 4, angles: int = 512) -> "DiskSampler":
        return DiskSampler(self.J + dJ, angles, self.refine)

    def to_spec(self) -> dict:
        return {"J": self.J, "angles": self.angles, "refine": self.refine}

    @classmethod
    def from_spec(cls, spec: dict | None) -> "DiskSampler":
        spec = spec or {}
        try:
            return cls(int(spec.get("J", 20)), int(spec.get("angles", 256)), int(spec.get("refine", 24)))
        except (TypeError, ValueError) as exc:
            raise SpecError(f"bad sampler spec {spec!r}: {exc}") from exc


@dataclass
class SupResult:
    value: float
    witness: complex
    radii: np.ndarray
    circle_max: np.ndarray  # max over each sampled circle
    profile: np.ndarray  # running max over |z| <= r_j, refined points included
    extras: dict = field(default_factory=dict)

    @property
    def profile_pairs(self):
        return [(float(r), float(s)) for r, s in zip(self.radii, self.profile)]


def thread_count() -> int:
    raw = os.environ.get("LIPOP_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _check_nan(vals, pts):
    bad = np.isnan(vals)
    if np.any(bad):
        z = complex(np.asarray(pts)[bad].ravel()[0])
        raise EvaluationError(f"evaluator returned NaN at z={z!r}", point=z)


def evaluate(g: Callable, pts: np.ndarray) -> np.ndarray:
    vals = np.asarray(g(pts), dtype=float)
    _check_nan(vals, pts)
    return vals


def evaluate_grid(g: Callable, sampler: DiskSampler) -> tuple[np.ndarray, np.ndarray]:
    """Return (points, values) on the sampler grid, shape (J+1, angles)."""
    pts = sampler.grid()
    workers = min(thread_count(), pts.shape[0])
    if workers <= 1:
        vals = np.asarray(g(pts), dtype=float)
    else:
        chunks = np.array_split(np.arange(pts.shape[0]), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda idx: np.asarray(g(pts[idx]), dtype=float), chunks))
        vals = np.concatenate(parts, axis=0)
    _check_nan(vals, pts)
    return pts, vals


def _pair_values(g, z) -> tuple[float, float]:
    v = evaluate(g, np.asarray(z, dtype=complex))
    return float(v[0]), float(v[1])


def _better(v: float, best: float) -> bool:
    # ignore last-bit noise so ties keep the grid witness
    return v > best + 4 * np.finfo(float).eps * abs(best)


def refine_max(g: Callable, sampler: DiskSampler, i: int, k: int, best: float):
    """Polish the grid maximum at (radius index i, angle index k)."""
    radii, thetas = sampler.radii, sampler.thetas
    r_lo = radii[max(i - 1, 0)]
    r_hi = radii[min(i + 1, sampler.J)]
    dth = 2.0 * np.pi / sampler.angles
    t_lo, t_hi = thetas[k] - dth, thetas[k] + dth
    r_best, t_best = radii[i], thetas[k]
    for _ in range(sampler.refine):
        width = r_hi - r_lo
        c, d = r_hi - GOLDEN * width, r_lo + GOLDEN * width
        fc, fd = _pair_values(g, np.array([c, d]) * np.exp(1j * t_best))
        if _better(fc, best):
            best, r_best = fc, c
        if _better(fd, best):
            best, r_best = fd, d
        if fc >= fd:
            r_hi = d
        else:
            r_lo = c
        if r_best == 0.0:
            continue
        t1, t2 = t_lo + (t_hi - t_lo) / 3.0, t_hi - (t_hi - t_lo) / 3.0
        f1, f2 = _pair_values(g, r_best * np.exp(1j * np.array([t1, t2])))
        if _better(f1, best):
            best, t_best = f1, t1
        if _better(f2, best):
            best, t_best = f2, t2
        if f1 >= f2:
            t_hi = t2
        else:
            t_lo = t1
    return best, complex(r_best * np.exp(1j * t_best))


def sup_over_disk(g: Callable, sampler: DiskSampler, extra_points=None) -> SupResult:
    """Sampled supremum of a nonnegative evaluator ``g`` over the disk.

    ``g`` maps an array of complex points to an array of values of the same
    shape.  ``extra_points`` are probed in addition to the grid (e.g. a known
    point of interest); they count toward the value and the running profile.
    """
    pts, vals = evaluate_grid(g, sampler)
    flat = int(np.argmax(vals))
    i, k = divmod(flat, sampler.angles)
    best = float(vals[i, k])
    witness = complex(pts[i, k])
    if np.isfinite(best) and sampler.refine > 0:
        rbest, rw = refine_max(g, sampler, i, k, best)
        if rbest > best:
            best, witness = rbest, rw
    radii = sampler.radii
    circle = vals.max(axis=1)
    profile = np.maximum.accumulate(circle)
    if extra_points is not None:
        ep = np.atleast_1d(np.asarray(extra_points, dtype=complex))
        ev = evaluate(g, ep)
        for z, v in zip(ep, ev):
            if v > best:
                best, witness = float(v), complex(z)
            profile = np.where(radii >= abs(z), np.maximum(profile, v), profile)
    if abs(witness) <= radii[-1]:
        profile = np.where(radii >= abs(witness), np.maximum(profile, best), profile)
    return SupResult(best, witness, radii, circle, profile)
