"""Command line entry point.

Exit codes: 0 computed (whatever the verdict), 1 verification failure,
2 input error, 3 evaluation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from . import __version__
from .corpus import builtin_corpus
from .criteria import full_report
from .errors import EvaluationError, LipopError, SpecError
from .estimation import equivalence_sweep, lower_bound_opnorm
from .scenario import load_corpus, load_function, load_scenario
from .verify import SUITES, run_suite
from .vspaces import WeightSpec, hinf_nu_norm, lambda1_norm, space_norm

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_EVAL = 0, 1, 2, 3
SWEEP_COLUMNS = ("scenario_id", "alpha", "beta", "q", "psi_norm", "C", "L", "ratio", "bounded_verdict", "compact_verdict")

logger = logging.getLogger("lipop")


def to_json(obj):
    """Plain JSON types: complex as [re, im], non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_json(obj.real), to_json(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def report_dict(sc) -> dict:
    rep = full_report(sc.op, sc.sampler, sc.classifier)
    out = {"id": sc.id, "alpha": sc.op.alpha, "beta": sc.op.beta}
    out.update(vars(rep))
    if rep.bounded_verdict == "bounded":
        lb = lower_bound_opnorm(sc.op, sampler=sc.sampler, q_witness=rep.q_witness)
        out["lower_bound"] = {"value": lb.value, "best": lb.best, "per_family": lb.per_family}
    else:
        out["lower_bound"] = None
    return to_json(out)


def cmd_analyze(args) -> int:
    rep = report_dict(load_scenario(args.file))
    if args.json:
        print(json.dumps(rep, indent=2, sort_keys=True))
        return EXIT_OK
    lines = [
        f"scenario        {rep['id']}",
        f"alpha, beta     {rep['alpha']}, {rep['beta']}",
        f"q               {rep['q_value']}  at {rep['q_witness']}",
        f"psi norm        {rep['psi_lambda_value']}",
        f"bounded         {rep['bounded_verdict']}",
        f"compact         {rep['compact_verdict']}",
        f"little bounded  {rep['little_bounded_verdict']}",
        f"little compact  {rep['little_compact_verdict']}",
    ]
    if rep["lower_bound"] is not None:
        lines.append(f"lower bound     {rep['lower_bound']['value']}  ({rep['lower_bound']['best']['family']})")
    lines += [f"note: {n}" for n in rep["notes"]]
    print("\n".join(lines))
    return EXIT_OK


def cmd_norm(args) -> int:
    f = load_function(args.file)
    if args.lip1:
        res = lambda1_norm(f)
    elif args.nu is not None:
        res = hinf_nu_norm(f, WeightSpec(args.nu))
    else:
        if not 0.0 < args.alpha <= 1.0:
            raise SpecError(f"--alpha must lie in (0, 1], got {args.alpha}")
        res = space_norm(f, args.alpha)
    w = res.witness
    print(f"norm {res.value:.12g}")
    print(f"witness {w.real:.12g} {w.imag:.12g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_suite(args.suite)
    failed = [c for c in checks if not c.passed]
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  {c.detail}")
    print(f"{args.suite}: {len(checks) - len(failed)}/{len(checks)} passed")
    if failed:
        print(f"first counterexample: {failed[0].name}: {failed[0].detail}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    corpus = builtin_corpus() if args.corpus == "builtin" else load_corpus(args.corpus)
    rows, summary = equivalence_sweep(corpus)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_csv(rows))
    if summary["with_ratio"]:
        print(f"{summary['count']} scenarios, ratio envelope [{summary['min_ratio']:.6g}, {summary['max_ratio']:.6g}]")
    else:
        print(f"{summary['count']} scenarios, no ratios")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lipop", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="criteria report for one scenario file")
    a.add_argument("file")
    a.add_argument("--json", action="store_true", help="emit the full report as JSON")
    a.set_defaults(func=cmd_analyze)

    n = sub.add_parser("norm", help="norm of a function file")
    n.add_argument("file")
    g = n.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", type=float, help="Lipschitz-space norm with exponent A")
    g.add_argument("--nu", type=float, help="weighted sup norm with weight (1-|z|^2)^G")
    g.add_argument("--lip1", action="store_true", help="norm for exponent 1")
    n.set_defaults(func=cmd_norm)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="ratio sweep over a corpus, written as CSV")
    s.add_argument("corpus", help="corpus JSON file, or 'builtin'")
    s.add_argument("out")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except EvaluationError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except (LipopError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
