"""Three-valued classifiers that read asymptotic behaviour off sampled profiles.

No finite sample proves that a supremum is finite or that a quantity tends
to zero, so each test returns a positive, a negative or an inconclusive
answer.  Profiles are indexed like ``DiskSampler.radii`` (origin first, then
``r_j = 1 - 2**-j``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SpecError

BOUNDED, UNBOUNDED, INCONCLUSIVE = "bounded", "unbounded", "inconclusive"
DECAYS, PERSISTS = "decays", "persists"

DEFAULT_DELTAS = (0.5, 0.9, 0.99, 0.999, 0.9999)


@dataclass(frozen=True)
class ClassifierParams:
    rel_tol: float = 0.05
    growth_factor: float = 2.0
    abs_tol: float = 1e-3
    deltas: tuple = DEFAULT_DELTAS
    window: int = 5  # schedule steps used by the growth / decay tests
    floor: float = 1e-6  # below floor * (1 + scale) a profile counts as zero

    def to_spec(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "growth_factor": self.growth_factor,
            "abs_tol": self.abs_tol,
            "deltas": list(self.deltas),
        }

    @classmethod
    def from_spec(cls, spec: dict | None) -> "ClassifierParams":
        spec = dict(spec or {})
        try:
            if "deltas" in spec:
                spec["deltas"] = tuple(float(d) for d in spec["deltas"])
            return cls(**spec)
        except TypeError as exc:
            raise SpecError(f"bad classifier spec: {exc}") from exc


@dataclass
class Finiteness:
    verdict: str
    s_max: float
    s_mid: float
    growth: float
    notes: list = field(default_factory=list)


def finiteness(profile, params: ClassifierParams = ClassifierParams()) -> Finiteness:
    """Plateau vs geometric growth of a running-max profile."""
    p = np.asarray(profile, dtype=float)
    J = len(p) - 1
    s_max, s_mid = float(p[-1]), float(p[J // 2])
    back = float(p[max(J - params.window, 0)])
    growth = s_max / back if back > 0 else (np.inf if s_max > 0 else 1.0)
    if not np.isfinite(s_max):
        return Finiteness(UNBOUNDED, s_max, s_mid, np.inf, ["profile diverges at a sampled point"])
    if s_max <= (1.0 + params.rel_tol) * s_mid:
        return Finiteness(BOUNDED, s_max, s_mid, growth)
    if growth >= params.growth_factor:
        return Finiteness(UNBOUNDED, s_max, s_mid, growth)
    return Finiteness(INCONCLUSIVE, s_max, s_mid, growth)


@dataclass
class Decay:
    verdict: str
    last: float
    ratio: float


def decay(profile, params: ClassifierParams = ClassifierParams(), scale: float = 0.0) -> Decay:
    """Does a per-radius profile tend to zero as r -> 1?

    Zero below the absolute floor, or geometric decay by ``growth_factor``
    across the last ``window`` schedule steps, counts as decaying; a tail that
    has not dropped by more than ``rel_tol`` counts as persisting.
    """
    p = np.asarray(profile, dtype=float)
    J = len(p) - 1
    last = float(p[-1])
    prev = float(p[max(J - params.window, 0)])
    ratio = last / prev if prev > 0 else (0.0 if last == 0 else np.inf)
    if last <= params.floor * (1.0 + scale):
        return Decay(DECAYS, last, ratio)
    if not np.isfinite(last):
        return Decay(PERSISTS, last, ratio)
    if ratio <= 1.0 / params.growth_factor:
        return Decay(DECAYS, last, ratio)
    if ratio >= 1.0 - params.rel_tol:
        return Decay(PERSISTS, last, ratio)
    return Decay(INCONCLUSIVE, last, ratio)
