"""Scenario files: schema validation, parsing into operators, canonical JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from . import fnkernel as fk
from .classify import ClassifierParams
from .errors import DimensionMismatchError, SpecError
from .normedspace import NormedSpace
from .sampling import DiskSampler
from .vspaces import SpaceSpec, VectorFunction
from .wcop import OperatorSymbol, WeightedCompositionOp

SCHEMA_FILES = ("fnspec.schema.json", "scenario.schema.json", "corpus.schema.json")


@lru_cache(maxsize=None)
def _schemas():
    root = resources.files("lipop") / "schemas"
    docs = {name: json.loads((root / name).read_text()) for name in SCHEMA_FILES}
    registry = Registry().with_resources((name, Resource.from_contents(doc)) for name, doc in docs.items())
    return docs, registry


def validate(doc, schema_name: str) -> None:
    """Raise SpecError unless ``doc`` matches the named schema."""
    docs, registry = _schemas()
    validator = jsonschema.Draft202012Validator(docs[schema_name], registry=registry)
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise SpecError(f"{schema_name}: {where}: {err.message}")


@dataclass(frozen=True)
class Scenario:
    id: str
    op: WeightedCompositionOp
    sampler: DiskSampler
    classifier: ClassifierParams

    @classmethod
    def from_spec(cls, spec: dict) -> "Scenario":
        validate(spec, "scenario.schema.json")
        X = NormedSpace.from_spec(spec["X"])
        Y = NormedSpace.from_spec(spec["Y"])
        phi = fk.make_self_map(fk.from_spec(spec["phi"]))
        try:
            psi = OperatorSymbol.from_spec({"entries": spec["psi"]}, X, Y)
            op = WeightedCompositionOp(psi, phi, SpaceSpec(float(spec["alpha"]), X), SpaceSpec(float(spec["beta"]), Y))
        except (DimensionMismatchError, ValueError) as exc:
            raise SpecError(str(exc)) from exc
        return cls(
            spec["id"],
            op,
            DiskSampler.from_spec(spec.get("sampler")),
            ClassifierParams.from_spec(spec.get("classifier")),
        )

    def to_spec(self) -> dict:
        W = self.op
        return {
            "id": self.id,
            "alpha": W.alpha,
            "beta": W.beta,
            "X": W.source.space.to_spec(),
            "Y": W.target.space.to_spec(),
            "phi": W.phi.inner.to_spec(),
            "psi": W.psi.to_spec()["entries"],
            "sampler": self.sampler.to_spec(),
            "classifier": self.classifier.to_spec(),
        }


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from exc
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from exc


def load_scenario(path) -> Scenario:
    return Scenario.from_spec(_read_json(path))


def parse_corpus(doc) -> list:
    validate(doc, "corpus.schema.json")
    scenarios = [Scenario.from_spec(s) for s in doc["scenarios"]]
    ids = [s.id for s in scenarios]
    if len(set(ids)) != len(ids):
        raise SpecError("scenario ids must be unique within a corpus")
    return scenarios


def load_corpus(path) -> list:
    return parse_corpus(_read_json(path))


def corpus_to_spec(scenarios) -> dict:
    return {"scenarios": [s.to_spec() for s in scenarios]}


def load_function(path) -> VectorFunction:
    doc = _read_json(path)
    validate(doc, "fnspec.schema.json")
    return VectorFunction.from_spec(doc)
