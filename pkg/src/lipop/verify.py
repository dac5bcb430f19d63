"""Property suites run by ``lipop verify``.

Every tolerance is multiplied by ``LIPOP_TOL_SCALE`` (default 1), so setting
it to 0 demonstrates that the suites can fail.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import fnkernel as fk
from .classify import BOUNDED, DEFAULT_DELTAS, UNBOUNDED
from .corpus import builtin_corpus, golden_envelope, random_function, random_poly_op, scalar_op
from .criteria import COMPACT, NOT_COMPACT, annulus_profile, compactness_verdict, full_report, q_criterion
from .estimation import equivalence_sweep, noncompact_witness
from .normedspace import SCALARS, NormedSpace, Vector
from .sampling import DiskSampler
from .vspaces import VectorFunction, lambda1_norm, lambda_norm, lipschitz_seminorm_estimate
from .wcop import deriv_via_decomposition, dilate, truncate

SUITES = ("identities", "norms", "criteria", "equivalence")
SEED = 11


def tol_scale() -> float:
    return float(os.environ.get("LIPOP_TOL_SCALE", "1"))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def disk_points(rng, n: int, rmax: float = 0.95) -> np.ndarray:
    return rmax * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def identities(n_ops: int = 100, n_points: int = 20) -> list:
    s = tol_scale()
    rng = np.random.default_rng(SEED)
    out = []
    worst_fd = worst_dec = 0.0
    fd_case = dec_case = ""
    h = 1e-6
    for i in range(n_ops):
        W = random_poly_op(rng)
        f = random_function(rng, W.source.space)
        z = disk_points(rng, n_points)
        img = W.image(f)
        exact = img.derivs(z)
        fd = (img.values(z + h) - img.values(z - h)) / (2 * h)
        scale = np.maximum(np.linalg.norm(exact, axis=-1), 1.0)
        err = float(np.max(np.linalg.norm(fd - exact, axis=-1) / scale))
        if err > worst_fd:
            worst_fd, fd_case = err, f"op {i}"
        dec = deriv_via_decomposition(W, f, z)
        err = float(np.max(np.linalg.norm(dec - exact, axis=-1) / scale))
        if err > worst_dec:
            worst_dec, dec_case = err, f"op {i}"
    out.append(Check("derivative vs finite difference", worst_fd <= 1e-6 * s, f"worst {worst_fd:.3g} at {fd_case}"))
    out.append(Check("decomposition identity", worst_dec <= 1e-10 * s, f"worst {worst_dec:.3g} at {dec_case}"))

    worst_v = worst_d = worst_n = 0.0
    smp = DiskSampler(J=12, angles=64, refine=12)
    for _ in range(50):
        a = complex(*rng.uniform(-1, 1, 2))
        a = a / abs(a) * rng.uniform(0.05, 0.99)
        alpha = float(rng.uniform(0.05, 0.95))
        x = Vector(NormedSpace(2), rng.normal(size=2) + 1j * rng.normal(size=2))
        f = VectorFunction.tensor(fk.TestFn(a, alpha), x)
        worst_v = max(worst_v, float(np.linalg.norm(f.values(np.array([a]))[0])))
        scaled = (1 - abs(a) ** 2) ** (1 - alpha) * f.derivs(np.array([a]))[0]
        worst_d = max(worst_d, float(np.linalg.norm(scaled - x.entries)))
        worst_n = max(worst_n, lambda_norm(f, alpha, smp).value - 3 * x.norm())
    out.append(Check("test function vanishes at a", worst_v <= 1e-12 * s, f"worst {worst_v:.3g}"))
    out.append(Check("test function derivative at a", worst_d <= 1e-9 * s, f"worst {worst_d:.3g}"))
    out.append(Check("test function norm <= 3 |x|", worst_n <= 1e-6 * s, f"worst excess {worst_n:.3g}"))

    worst_t = 0.0
    for _ in range(20):
        sp = NormedSpace(int(rng.integers(1, 4)))
        n = int(rng.integers(0, 6))
        f = random_function(rng, sp, degree=n)
        g = truncate(f, n)
        z = disk_points(rng, 10)
        worst_t = max(worst_t, float(np.max(np.abs(g.values(z) - f.values(z)))))
    out.append(Check("truncation exact on polynomials", worst_t <= 1e-12 * s, f"worst {worst_t:.3g}"))
    return out


def norms() -> list:
    s = tol_scale()
    out = []
    z = VectorFunction.scalar(fk.IDENTITY)
    z2 = VectorFunction.scalar(fk.Poly([0, 0, 1]))
    c03 = VectorFunction(NormedSpace(2), (fk.constant(0), fk.constant(3)))
    for name, got, want in (
        ("|z| in the 1/2 space", lambda_norm(z, 0.5).value, 1.0),
        ("|z^2| in the 1/2 space", lambda_norm(z2, 0.5).value, 1.0),
        ("|(0, 3)| in the 1/2 space", lambda_norm(c03, 0.5).value, 3.0),
        ("|z| with alpha = 1", lambda1_norm(z).value, 2.0),
    ):
        out.append(Check(name, abs(got - want) <= 1e-9 * s, f"got {got!r}, want {want}"))

    rng = np.random.default_rng(SEED + 1)
    smp = DiskSampler(J=14, angles=128, refine=12)
    worst = 1.0
    for _ in range(20):
        f = random_function(rng, SCALARS, degree=int(rng.integers(1, 7)))
        for alpha in (0.25, 0.5, 0.75):
            bloch = lambda_norm(f, alpha, smp).seminorm
            lip = lipschitz_seminorm_estimate(f, alpha, pair_budget=2048, sampler=smp)
            if bloch > 0 and lip > 0:
                worst = max(worst, bloch / lip, lip / bloch)
    out.append(Check("two-point vs Bloch seminorm within factor 10", worst <= 10.0 * s,
                     f"worst factor {worst:.3g}"))

    errs = [lambda_norm(dilate(z, r) - z, 0.5).value for r in (0.9, 0.99, 0.999)]
    ok = errs[0] > errs[1] > errs[2] and errs[2] < 1e-2 * s
    out.append(Check("dilations converge in the 1/2 space", ok, f"errors {errs}"))
    return out


def criteria() -> list:
    s = tol_scale()
    out = []
    one = fk.constant(1.0)
    q = q_criterion(scalar_op(fk.IDENTITY, one, 0.5, 0.5)).value
    out.append(Check("q(identity) = 1", abs(q - 1) <= 1e-9 * s, f"q = {q!r}"))
    for r in (0.3, 0.6, 0.9):
        q = q_criterion(scalar_op(fk.Affine(r, 0), one, 0.5, 0.5)).value
        out.append(Check(f"q(r z) = r for r = {r}", abs(q - r) <= 1e-6 * s, f"q = {q!r}"))

    grid = (0.25, 0.5, 0.75)
    bad = []
    for a in grid:
        for b in grid:
            v = full_report(scalar_op(fk.IDENTITY, one, a, b)).bounded_verdict
            want = BOUNDED if a >= b else UNBOUNDED
            if v != want:
                bad.append(f"alpha={a}, beta={b}: {v}")
    out.append(Check("identity bounded iff alpha >= beta", not bad, "; ".join(bad)))

    rep = compactness_verdict(scalar_op(fk.Affine(0.5, 0), one, 0.5, 0.5))
    out.append(Check("z/2 compact", rep.compact_verdict == COMPACT, rep.compact_verdict))
    W = scalar_op(fk.IDENTITY, one, 0.5, 0.5)
    rep = compactness_verdict(W)
    ann = [t for _, t, _ in annulus_profile(W, DiskSampler(), DEFAULT_DELTAS)]
    dev = max(abs(t - 1) for t in ann)
    out.append(Check("identity not compact with annulus profile 1",
                     rep.compact_verdict == NOT_COMPACT and dev <= 1e-9 * s, f"{rep.compact_verdict}, dev {dev:.3g}"))

    rows = noncompact_witness(W, [1 - 2.0**-n for n in range(2, 11)], ns=range(2, 11), tol=1e-3 * s)
    first = next((r for r in rows if not r.holds), None)
    out.append(Check("witness norms exceed q n/(n+1)", first is None,
                     "" if first is None else f"n={first.n}: {first.norm} < {first.bound}"))
    return out


def equivalence() -> list:
    s = tol_scale()
    env = golden_envelope()
    lo, hi = env["bounds"]
    rows, summary = equivalence_sweep(builtin_corpus())
    out = []
    outside = [r for r in rows if r.ratio is not None and not lo <= r.ratio <= hi]
    missing = [r for r in rows if r.ratio is None]
    out.append(Check(f"ratios within [{lo:g}, {hi:g}]", not outside and not missing,
                     ", ".join(f"{r.scenario_id}: {r.ratio}" for r in outside + missing)))
    ident = next(r for r in rows if r.scenario_id == "identity")
    out.append(Check("identity ratio near 1", abs(ident.ratio - 1) <= 0.01 * s, f"ratio {ident.ratio!r}"))
    rec_lo, rec_hi = env["min_ratio"], env["max_ratio"]
    drift = max(abs(summary["min_ratio"] - rec_lo), abs(summary["max_ratio"] - rec_hi))
    out.append(Check("envelope matches the recorded one", drift <= 1e-6 * s,
                     f"observed [{summary['min_ratio']:.6g}, {summary['max_ratio']:.6g}], "
                     f"recorded [{rec_lo:.6g}, {rec_hi:.6g}]"))
    return out


def run_suite(name: str) -> list:
    return {"identities": identities, "norms": norms, "criteria": criteria, "equivalence": equivalence}[name]()
