"""Lower bounds for ||W|| from normalized extremal families, and the
non-compactness witness sequence.

Members are elementary tensors ``f x`` of a scalar profile ``f`` and a unit
vector ``x``.  Because ``(W f_x)'(z) = M_f(z) x`` with the matrix

    M_f(z) = phi'(z) f'(phi(z)) psi_z + f(phi(z)) psi'_z,

one grid evaluation of ``M_f`` serves every direction ``x`` at once.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import fnkernel as fk
from .classify import BOUNDED
from .criteria import COMPACT, q_quantity
from .errors import PreconditionError
from .normedspace import Vector, norming_vector, vec_norms
from .sampling import DiskSampler, thread_count
from .vspaces import VectorFunction, space_norm, weight
from .wcop import WeightedCompositionOp, t_psi

logger = logging.getLogger(__name__)

N_RANDOM_DIRECTIONS = 64
DIRECTION_SEED = 20240601
MONOMIAL_DEGREE = 4


class FamilyKind(str, Enum):
    CONSTANTS = "constants"
    MONOMIALS = "monomials"
    TESTFNS = "testfns"
    LINEAR = "linear"
    WITNESS = "witness"


@dataclass
class Member:
    kind: FamilyKind
    index: int
    profile: fk.AnalyticScalar
    param: object = None


@dataclass
class ExtremalFamily:
    kind: FamilyKind
    members: list = field(default_factory=list)

    @classmethod
    def constants(cls):
        return cls(FamilyKind.CONSTANTS, [Member(FamilyKind.CONSTANTS, 0, fk.constant(1.0))])

    @classmethod
    def monomials(cls, K: int = MONOMIAL_DEGREE):
        ms = [Member(FamilyKind.MONOMIALS, k - 1, fk.Poly([0] * k + [1]), k) for k in range(1, K + 1)]
        return cls(FamilyKind.MONOMIALS, ms)

    @classmethod
    def testfns(cls, points, alpha: float):
        ms = []
        for a in points:
            if fk.TESTFN_MIN_MODULUS <= abs(a) < 1.0:
                ms.append(Member(FamilyKind.TESTFNS, len(ms), fk.TestFn(a, alpha), complex(a)))
        return cls(FamilyKind.TESTFNS, ms)

    @classmethod
    def linear(cls, points):
        """(z - a) x, the test functions for alpha = 1."""
        ms = [Member(FamilyKind.LINEAR, i, fk.Affine(1.0, -a), complex(a)) for i, a in enumerate(points)]
        return cls(FamilyKind.LINEAR, ms)

    @classmethod
    def witness(cls, points, alpha: float):
        ms = [Member(FamilyKind.WITNESS, i, witness_profile(b, alpha), complex(b)) for i, b in enumerate(points)]
        return cls(FamilyKind.WITNESS, ms)


def witness_profile(b: complex, alpha: float) -> fk.AnalyticScalar:
    """(1/conj(b)) ((1-|b|^2)^2 (1-conj(b) z)^(alpha-2) - (1-|b|^2)(1-conj(b) z)^(alpha-1)).

    Vanishes at b with derivative (1-|b|^2)^(alpha-1) there.
    """
    b = complex(b)
    s = 1.0 - abs(b) ** 2
    bb = np.conj(b)
    return fk.Sum((fk.Power(s * s / bb, b, alpha - 2.0), fk.Power(-s / bb, b, alpha - 1.0)))


def unit_directions(space, n_random: int = N_RANDOM_DIRECTIONS, seed: int = DIRECTION_SEED) -> np.ndarray:
    """Basis vectors plus seeded random directions, unit in the space norm; shape (n, K)."""
    n = space.dim
    rng = np.random.default_rng(seed)
    rand = rng.normal(size=(n_random, n)) + 1j * rng.normal(size=(n_random, n))
    dirs = np.concatenate([np.eye(n, dtype=complex), rand])
    dirs = dirs / vec_norms(dirs, space.norm_kind)[:, None]
    if n == 1:
        dirs = dirs[:1]
    return dirs.T


def default_families(W: WeightedCompositionOp, sampler: DiskSampler, q_witness: complex | None = None):
    """Constants, monomials and the test functions at phi of a coarse subgrid
    (and at phi of the q witness, where the criterion is extremal)."""
    grid = sampler.grid()[1::2, :: max(sampler.angles // 8, 1)].ravel()
    pts = list(grid)
    if q_witness is not None:
        pts = [q_witness] + pts
    a = W.phi._value(np.asarray(pts, dtype=complex))
    fams = [ExtremalFamily.constants(), ExtremalFamily.monomials()]
    if W.alpha < 1.0:
        fams.append(ExtremalFamily.testfns(a, W.alpha))
    else:
        fams.append(ExtremalFamily.linear(a))
    return fams


@dataclass
class LowerBound:
    value: float
    best: dict
    per_family: dict


class _Frozen:
    """Grid quantities of W that do not depend on the member."""

    def __init__(self, W: WeightedCompositionOp, sampler: DiskSampler):
        self.W = W
        z = sampler.grid().ravel()
        self.z = z
        self.w = W.phi._value(z)
        self.dphi = W.phi._deriv(z)
        self.psi = W.psi.values(z)
        self.dpsi = W.psi.derivs(z)
        self.wt = weight(z, 1.0 - W.beta)
        z0 = np.zeros(1, dtype=complex)
        self.w0 = W.phi._value(z0)[0]
        self.psi0 = W.psi.values(z0)[0]

    def target_norms(self, f: fk.AnalyticScalar, X: np.ndarray) -> np.ndarray:
        """||W (f x)|| in the target space for each column x of X (grid only)."""
        kind = self.W.target.space.norm_kind
        fv = f._value(self.w)
        fd = f._deriv(self.w)
        M = (self.dphi * fd)[:, None, None] * self.psi + fv[:, None, None] * self.dpsi
        dvals = vec_norms(np.swapaxes(M @ X, -1, -2), kind)  # (grid, K)
        if self.W.beta < 1.0:
            v0 = f._value(np.array([self.w0]))[0] * (self.psi0 @ X)
            return vec_norms(v0.T, kind) + (self.wt[:, None] * dvals).max(axis=0)
        vals = vec_norms(np.swapaxes((fv[:, None, None] * self.psi) @ X, -1, -2), kind)
        return vals.max(axis=0) + dvals.max(axis=0)


def source_norm(f: fk.AnalyticScalar, alpha: float, sampler: DiskSampler) -> float:
    return space_norm(VectorFunction.scalar(f), alpha, sampler).value


def lower_bound_opnorm(
    W: WeightedCompositionOp,
    families=None,
    sampler: DiskSampler = DiskSampler(),
    q_witness: complex | None = None,
) -> LowerBound:
    """max over normalized members m of ||W m|| / ||m||, a lower bound for ||W||."""
    if families is None:
        families = default_families(W, sampler, q_witness)
    X = unit_directions(W.source.space)
    frozen = _Frozen(W, sampler)

    def score(m):
        sn = source_norm(m.profile, W.alpha, sampler)
        if sn <= 0:
            return sn, None
        return sn, frozen.target_norms(m.profile, X) / sn

    members = [(fam, m) for fam in families for m in fam.members]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        scored = list(pool.map(lambda fm: score(fm[1]), members))

    # deterministic reduction: first maximum in (family, index) order
    best_ratio, best = -1.0, None
    per_family = {fam.kind.value: 0.0 for fam in families}
    for (fam, m), (sn, ratios) in zip(members, scored):
        if ratios is None:
            continue
        j = int(np.argmax(ratios))
        r = float(ratios[j])
        per_family[fam.kind.value] = max(per_family[fam.kind.value], r)
        if r > best_ratio:
            best_ratio = r
            best = {"family": fam.kind.value, "index": m.index, "param": _jsonable(m.param), "x_index": j,
                    "member": m, "x": X[:, j], "source_norm": sn}
    if best is None:
        return LowerBound(0.0, {}, per_family)
    # polish the winning member with the refined sampler
    x = Vector(W.source.space, best["x"])
    img = W.image(VectorFunction.tensor(best["member"].profile, x))
    refined = space_norm(img, W.beta, sampler).value / best["source_norm"]
    value = max(best_ratio, refined)
    desc = {k: v for k, v in best.items() if k not in ("member", "x", "source_norm")}
    desc["ratio"] = value
    logger.debug("lower bound %.6g from %s member %d", value, desc["family"], desc["index"])
    return LowerBound(value, desc, per_family)


def _jsonable(p):
    if isinstance(p, complex):
        return [p.real, p.imag]
    return p


def constants_contribution(W: WeightedCompositionOp, x: Vector, sampler: DiskSampler = DiskSampler()) -> float:
    """||W 1_x|| in the target space, i.e. the constants family at direction x."""
    return space_norm(W.image(VectorFunction.constant(x)), W.beta, sampler).value


def t_psi_norm(W: WeightedCompositionOp, x: Vector, sampler: DiskSampler = DiskSampler()) -> float:
    return space_norm(t_psi(W.psi, x), W.beta, sampler).value


def test_fn_properties(a: complex, x: Vector, alpha: float):
    """(f_{a,x}(a), f'_{a,x}(a)) for the extremal test function."""
    f = VectorFunction.tensor(fk.TestFn(a, alpha), x)
    return f.value(a), f.deriv(a)


test_fn_properties.__test__ = False


@dataclass
class WitnessRow:
    n: int
    z: complex
    phi_z: complex
    norm: float
    q_at_z: float
    bound: float
    holds: bool


def noncompact_witness(
    W: WeightedCompositionOp,
    z_seq,
    ns=None,
    sampler: DiskSampler = DiskSampler(),
    tol: float = 1e-3,
) -> list:
    """||W f_n|| in the target space against q(z_n) n/(n+1) for the witness sequence."""
    z_seq = [complex(z) for z in z_seq]
    ns = list(ns) if ns is not None else list(range(1, len(z_seq) + 1))
    b = W.phi._value(np.asarray(z_seq))
    if np.any(np.abs(b) <= 0.5):
        raise PreconditionError("witness sequence needs |phi(z_n)| > 1/2")
    rows = []
    for n, z, bn in zip(ns, z_seq, b):
        A = W.psi.at(z)
        x = norming_vector(A)
        f = VectorFunction.tensor(witness_profile(bn, W.alpha), x)
        nrm = space_norm(W.image(f), W.beta, sampler, extra_points=[z]).value
        qz = float(q_quantity(W, np.array([z]))[0])
        bound = qz * n / (n + 1)
        rows.append(WitnessRow(n, z, complex(bn), nrm, qz, bound, nrm >= bound - tol))
    return rows


@dataclass
class SweepRow:
    scenario_id: str
    alpha: float
    beta: float
    q: float
    psi_norm: float
    C: float
    L: float | None
    ratio: float | None
    bounded_verdict: str
    compact_verdict: str


def equivalence_sweep(corpus, sampler: DiskSampler | None = None):
    """Per scenario: criterion C = max(q, ||psi||), lower bound L, and L / C.

    ``corpus`` holds objects with ``id``, ``op``, ``sampler`` and ``classifier``
    attributes (see ``lipop.scenario.Scenario``).  Unbounded or inconclusive
    scenarios get no L or ratio.
    """
    from .criteria import boundedness_verdict, compactness_verdict

    rows = []
    for sc in corpus:
        smp = sampler or sc.sampler
        rep = boundedness_verdict(sc.op, smp, sc.classifier)
        compactness_verdict(sc.op, smp, sc.classifier, rep)
        C = max(rep.q_value, rep.psi_lambda_value)
        L = ratio = None
        if rep.bounded_verdict == BOUNDED:
            L = lower_bound_opnorm(sc.op, sampler=smp, q_witness=rep.q_witness).value
            ratio = L / C if C > 0 else None
        rows.append(SweepRow(sc.id, sc.op.alpha, sc.op.beta, rep.q_value, rep.psi_lambda_value, C, L, ratio,
                             rep.bounded_verdict, rep.compact_verdict))
    ratios = [r.ratio for r in rows if r.ratio is not None]
    summary = {
        "count": len(rows),
        "with_ratio": len(ratios),
        "min_ratio": min(ratios) if ratios else None,
        "max_ratio": max(ratios) if ratios else None,
        "compact": sum(r.compact_verdict == COMPACT for r in rows),
    }
    return rows, summary
