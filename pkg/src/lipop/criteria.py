"""Boundedness and compactness criteria for weighted composition operators.

Everything here reduces to sampled suprema of one pointwise quantity,

    q(z) = (1-|z|^2)^(1-beta) (1-|phi(z)|^2)^(alpha-1) |phi'(z)| ||psi_z||,

plus the Lipschitz-space norm of the symbol psi.  Suprema come from the disk
sampler; finiteness and vanishing at the boundary are decided by the
profile classifiers, which may answer "inconclusive".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classify import (
    BOUNDED,
    DECAYS,
    INCONCLUSIVE,
    PERSISTS,
    UNBOUNDED,
    ClassifierParams,
    decay,
    finiteness,
)
from .fnkernel import SelfMap
from .sampling import DiskSampler, SupResult, evaluate_grid, sup_over_disk
from .vspaces import lambda_norm, one_minus_sq, weight
from .wcop import OperatorSymbol, WeightedCompositionOp

COMPACT, NOT_COMPACT = "compact", "not_compact"
MET, NOT_MET = "sufficient_conditions_met", "sufficient_conditions_not_met"
RELATIVELY_COMPACT, NOT_RELATIVELY_COMPACT = "relatively_compact", "not_relatively_compact"
T_PSI_AUTOMATIC = "automatic (finite dim)"

# below this, 1 - |phi(z)|^2 is treated as zero
BOUNDARY_EPS = 1e-14


def q_quantity(W: WeightedCompositionOp, z) -> np.ndarray:
    """Pointwise q(z); +inf where phi touches the circle with nonzero numerator."""
    w = W.phi._value(z)
    num = weight(z, 1.0 - W.beta) * np.abs(W.phi._deriv(z)) * W.psi.norms(z)
    if W.alpha >= 1.0:
        return num
    gap = one_minus_sq(w)
    safe = np.where(gap < BOUNDARY_EPS, 1.0, gap)
    out = num / safe ** (1.0 - W.alpha)
    return np.where(gap < BOUNDARY_EPS, np.where(num == 0, 0.0, np.inf), out)


@dataclass
class QResult:
    value: float
    witness: complex
    sup: SupResult
    divergent: bool

    @property
    def profile(self):
        return self.sup.profile


def q_criterion(W: WeightedCompositionOp, sampler: DiskSampler = DiskSampler(), extra_points=None) -> QResult:
    sup = sup_over_disk(lambda z: q_quantity(W, z), sampler, extra_points)
    return QResult(sup.value, sup.witness, sup, not np.isfinite(sup.value))


@dataclass
class PsiNorm:
    value: float
    profile: np.ndarray  # running norm estimate over |z| <= r_j
    little: np.ndarray  # per-circle (1-|z|^2)^(1-beta) ||psi'_z||
    witness: complex


def psi_lambda_norm(psi: OperatorSymbol, beta: float, sampler: DiskSampler = DiskSampler()) -> PsiNorm:
    """Lipschitz-space norm of the symbol, with its radial profile."""
    sd = sup_over_disk(lambda z: weight(z, 1.0 - beta) * psi.deriv_norms(z), sampler)
    if beta < 1.0:
        at0 = float(psi.norms(np.zeros(1, dtype=complex))[0])
        return PsiNorm(at0 + sd.value, at0 + sd.profile, sd.circle_max, sd.witness)
    sf = sup_over_disk(psi.norms, sampler)
    return PsiNorm(sf.value + sd.value, sf.profile + sd.profile, sd.circle_max, sd.witness)


def hinf_criterion(psi: OperatorSymbol, phi: SelfMap, alpha_w: float, beta_w: float, sampler: DiskSampler = DiskSampler()) -> SupResult:
    """sup (1-|z|^2)^beta_w (1-|phi(z)|^2)^(-alpha_w) ||psi_z||."""

    def g(z):
        gap = one_minus_sq(phi._value(z))
        num = weight(z, beta_w) * psi.norms(z)
        safe = np.where(gap < BOUNDARY_EPS, 1.0, gap)
        return np.where(gap < BOUNDARY_EPS, np.where(num == 0, 0.0, np.inf), num / safe**alpha_w)

    return sup_over_disk(g, sampler)


@dataclass
class CriterionReport:
    q_value: float = float("nan")
    q_witness: complex = 0j
    q_profile: list = field(default_factory=list)
    psi_lambda_value: float = float("nan")
    psi_profile: list = field(default_factory=list)
    psi_little_profile: list = field(default_factory=list)
    bounded_verdict: str = INCONCLUSIVE
    compact_verdict: str = INCONCLUSIVE
    annulus_profile: list = field(default_factory=list)
    little_bounded_verdict: str = INCONCLUSIVE
    little_compact_verdict: str = INCONCLUSIVE
    t_psi_compact: str = T_PSI_AUTOMATIC
    divergent: bool = False
    notes: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)


def _pairs(radii, values):
    return [(float(r), float(v)) for r, v in zip(radii, values)]


def boundedness_verdict(
    W: WeightedCompositionOp,
    sampler: DiskSampler = DiskSampler(),
    params: ClassifierParams = ClassifierParams(),
    report: CriterionReport | None = None,
) -> CriterionReport:
    """Bounded iff psi lies in the target Lipschitz space and q is finite."""
    rep = report or CriterionReport()
    q = q_criterion(W, sampler)
    pn = psi_lambda_norm(W.psi, W.beta, sampler)
    fq = finiteness(q.profile, params)
    fp = finiteness(pn.profile, params)
    rep.q_value, rep.q_witness = q.value, q.witness
    rep.q_profile = _pairs(sampler.radii, q.profile)
    rep.psi_lambda_value = pn.value
    rep.psi_profile = _pairs(sampler.radii, pn.profile)
    rep.psi_little_profile = _pairs(sampler.radii, pn.little)
    rep.divergent = q.divergent
    if q.divergent:
        rep.notes.append("q diverges: |phi(z)| = 1 at a sampled point with phi'(z) psi_z != 0")
    if fq.verdict == BOUNDED and fp.verdict == BOUNDED:
        rep.bounded_verdict = BOUNDED
    elif UNBOUNDED in (fq.verdict, fp.verdict):
        rep.bounded_verdict = UNBOUNDED
    else:
        rep.bounded_verdict = INCONCLUSIVE
    rep.extras["q_growth"] = fq.growth
    rep.extras["psi_growth"] = fp.growth
    if W.alpha >= 1.0:
        rep.notes.append("alpha = 1: q reduces to the weighted sup norm of phi' psi")
    return rep


def annulus_profile(W: WeightedCompositionOp, sampler: DiskSampler, deltas) -> list:
    """T(delta) = max of q over sampled z with |phi(z)| > delta (0 when empty)."""
    pts, vals = evaluate_grid(lambda z: q_quantity(W, z), sampler)
    mod = np.abs(W.phi._value(pts))
    out = []
    for d in deltas:
        mask = mod > d
        out.append((float(d), float(vals[mask].max()) if np.any(mask) else 0.0, int(mask.sum())))
    return out


def compactness_verdict(
    W: WeightedCompositionOp,
    sampler: DiskSampler = DiskSampler(),
    params: ClassifierParams = ClassifierParams(),
    report: CriterionReport | None = None,
) -> CriterionReport:
    rep = report or boundedness_verdict(W, sampler, params)
    rep.t_psi_compact = T_PSI_AUTOMATIC
    if rep.bounded_verdict != BOUNDED:
        rep.compact_verdict = INCONCLUSIVE
        rep.notes.append("compactness refused: the operator is not verified bounded")
        return rep
    if W.alpha >= 1.0:
        rep.compact_verdict = INCONCLUSIVE
        rep.notes.append("compactness criterion needs alpha < 1")
        return rep
    ann = annulus_profile(W, sampler, params.deltas)
    rep.annulus_profile = [(d, t) for d, t, _ in ann]
    tvals = np.array([t for _, t, _ in ann])
    counts = np.array([c for _, _, c in ann])
    tol = params.abs_tol * (1.0 + rep.q_value)
    tail = tvals[-3:]
    geometric = tail[0] > 0 and np.all(tail[1:] * params.growth_factor <= tail[:-1])
    if np.all(counts == 0) or tvals[-1] <= tol:
        rep.compact_verdict = COMPACT
    elif geometric:
        # shrinks by growth_factor at each of the last delta steps
        rep.compact_verdict = COMPACT
        rep.notes.append("compactness from geometric decay of the annulus profile")
    elif tvals[0] > 0 and np.all(tvals >= 0.5 * tvals[0]):
        rep.compact_verdict = NOT_COMPACT
    else:
        rep.compact_verdict = INCONCLUSIVE
    return rep


def little_boundedness_verdict(
    W: WeightedCompositionOp,
    sampler: DiskSampler = DiskSampler(),
    params: ClassifierParams = ClassifierParams(),
    report: CriterionReport | None = None,
) -> CriterionReport:
    """Sufficient conditions only: bounded on the big spaces, psi in the little
    space, and (1-|z|^2)^(1-beta) phi'(z) psi_z -> 0 at the boundary."""
    rep = report or boundedness_verdict(W, sampler, params)
    psi_little = np.array([v for _, v in rep.psi_little_profile])
    d_psi = decay(psi_little, params, scale=rep.psi_lambda_value)
    edge = sup_over_disk(lambda z: weight(z, 1.0 - W.beta) * np.abs(W.phi._deriv(z)) * W.psi.norms(z), sampler)
    d_edge = decay(edge.circle_max, params, scale=edge.value)
    checks = {
        "big_space_bounded": rep.bounded_verdict,
        "psi_little_decay": d_psi.verdict,
        "phi_prime_psi_decay": d_edge.verdict,
    }
    rep.extras["little_bounded_checks"] = checks
    rep.extras["phi_prime_psi_profile"] = _pairs(sampler.radii, edge.circle_max)
    if rep.bounded_verdict == BOUNDED and d_psi.verdict == DECAYS and d_edge.verdict == DECAYS:
        rep.little_bounded_verdict = MET
    elif rep.bounded_verdict == UNBOUNDED or PERSISTS in (d_psi.verdict, d_edge.verdict):
        rep.little_bounded_verdict = NOT_MET
    else:
        rep.little_bounded_verdict = INCONCLUSIVE
    rep.notes.append("little-space boundedness: conditions are sufficient, not necessary")
    return rep


def little_compactness_verdict(
    W: WeightedCompositionOp,
    sampler: DiskSampler = DiskSampler(),
    params: ClassifierParams = ClassifierParams(),
    report: CriterionReport | None = None,
) -> CriterionReport:
    """Radial decay of q as |z| -> 1 (necessary), plus psi in the little space
    (needed for sufficiency).  The two parts are kept apart."""
    rep = report or boundedness_verdict(W, sampler, params)
    if rep.bounded_verdict != BOUNDED or W.alpha >= 1.0:
        rep.little_compact_verdict = INCONCLUSIVE
        rep.notes.append("little-space compactness refused: needs a bounded operator and alpha < 1")
        return rep
    q = q_criterion(W, sampler)
    d_q = decay(q.sup.circle_max, params, scale=q.value)
    psi_little = np.array([v for _, v in rep.psi_little_profile])
    d_psi = decay(psi_little, params, scale=rep.psi_lambda_value)
    rep.extras["radial_q_profile"] = _pairs(sampler.radii, q.sup.circle_max)
    rep.extras["little_compact_parts"] = {
        "radial_q_decay (necessary)": d_q.verdict,
        "psi_little_membership (sufficient with decay)": d_psi.verdict,
    }
    if d_q.verdict == PERSISTS:
        rep.little_compact_verdict = NOT_COMPACT
    elif d_q.verdict == DECAYS and d_psi.verdict == DECAYS:
        rep.little_compact_verdict = COMPACT
    else:
        rep.little_compact_verdict = INCONCLUSIVE
        if d_q.verdict == DECAYS:
            rep.notes.append("radial q decays but psi little-space membership is not confirmed")
    return rep


@dataclass
class SetCompactness:
    verdict: str
    bounded: str  # the family is norm bounded
    pointwise: str  # point evaluations relatively compact
    uniform_decay: str  # weighted derivatives vanish uniformly at the boundary
    max_norm: float
    family_profile: list


def set_compactness_check(
    K: list,
    alpha: float,
    sampler: DiskSampler = DiskSampler(),
    params: ClassifierParams = ClassifierParams(),
) -> SetCompactness:
    """Relative compactness of a finite family via the three conditions:
    boundedness, pointwise relative compactness, and uniform vanishing of the
    weighted derivative at the boundary."""
    if not K:
        raise ValueError("family must be nonempty")
    results = [lambda_norm(f, alpha, sampler) for f in K]
    fins = [finiteness(r.at_zero + r.sup.profile, params).verdict for r in results]
    if all(v == BOUNDED for v in fins):
        cond_bounded = BOUNDED
    elif UNBOUNDED in fins:
        cond_bounded = UNBOUNDED
    else:
        cond_bounded = INCONCLUSIVE
    family = np.max(np.stack([r.sup.circle_max for r in results]), axis=0)
    max_norm = max(r.value for r in results)
    cond_decay = decay(family, params, scale=max_norm).verdict
    if cond_bounded == BOUNDED and cond_decay == DECAYS:
        verdict = RELATIVELY_COMPACT
    elif cond_bounded == UNBOUNDED or cond_decay == PERSISTS:
        verdict = NOT_RELATIVELY_COMPACT
    else:
        verdict = INCONCLUSIVE
    return SetCompactness(verdict, cond_bounded, "automatic (finite dim)", cond_decay, max_norm, _pairs(sampler.radii, family))


def full_report(W: WeightedCompositionOp, sampler: DiskSampler = DiskSampler(), params: ClassifierParams = ClassifierParams()) -> CriterionReport:
    rep = boundedness_verdict(W, sampler, params)
    compactness_verdict(W, sampler, params, rep)
    if W.alpha < 1.0 and W.beta < 1.0:
        little_boundedness_verdict(W, sampler, params, rep)
        little_compactness_verdict(W, sampler, params, rep)
    else:
        rep.notes.append("little-space checks skipped: they need alpha, beta < 1")
    return rep
