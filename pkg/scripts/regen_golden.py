"""Regenerate the pinned data files shipped with the package.

    python3 scripts/regen_golden.py

Writes the built-in corpus, the sweep CSV it produces and the recorded
ratio envelope, then copies the JSON schemas into docs/.
"""

import json
import shutil
from pathlib import Path

from lipop.cli import sweep_csv
from lipop.corpus import generate_builtin_corpus
from lipop.estimation import equivalence_sweep
from lipop.scenario import corpus_to_spec

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "lipop" / "data"
ENVELOPE_BOUNDS = [0.05, 20.0]


def main():
    corpus = generate_builtin_corpus()
    (DATA / "builtin_corpus.json").write_text(json.dumps(corpus_to_spec(corpus), indent=1) + "\n")
    rows, summary = equivalence_sweep(corpus)
    (DATA / "golden_sweep.csv").write_text(sweep_csv(rows))
    env = {"bounds": ENVELOPE_BOUNDS, "min_ratio": summary["min_ratio"], "max_ratio": summary["max_ratio"],
           "count": summary["count"]}
    (DATA / "envelope.json").write_text(json.dumps(env, indent=1) + "\n")
    docs = ROOT / "docs"
    docs.mkdir(exist_ok=True)
    for src in (ROOT / "src" / "lipop" / "schemas").glob("*.json"):
        shutil.copy(src, docs / src.name)
    print(json.dumps(env))


if __name__ == "__main__":
    main()
