"""Model persistence: one JSON file per model with a header recording the
type, hyperparameters and seed."""

from __future__ import annotations

import json

from .classics import LLDAModel, NBModel, WinnowModel
from .errors import DataError
from .semcla import SemClaModel


def save_model(model, path):
    if isinstance(model, NBModel):
        payload = {
            "type": "bayes",
            "priors": model.priors,
            "likelihoods": model.likelihoods,
            "floors": model.floors,
            "vocabulary": sorted(model.vocabulary),
        }
    elif isinstance(model, WinnowModel):
        payload = {
            "type": "winnow",
            "theta": model.theta,
            "alpha": model.alpha,
            "beta": model.beta,
            "weights": {
                lab: {f: list(pair) for f, pair in w.items()}
                for lab, w in model.weights.items()
            },
            "features": sorted(model.features),
        }
    elif isinstance(model, LLDAModel):
        payload = {
            "type": "llda",
            "topics": model.topics,
            "phi": model.phi,
            "a_doc": model.a_doc,
            "a_word": model.a_word,
            "iterations": model.iterations,
            "seed": model.seed,
            "vocabulary": sorted(model.vocabulary),
        }
    elif isinstance(model, SemClaModel):
        payload = {
            "type": "semcla",
            "alpha": model.alpha,
            "mode": model.mode,
            "classes": model.classes,
            "centroids": model.centroids,
        }
    else:
        raise DataError("cannot persist model of type %s" % type(model).__name__)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    kind = payload.get("type")
    if kind == "bayes":
        return NBModel(
            priors=payload["priors"],
            likelihoods=payload["likelihoods"],
            floors=payload["floors"],
            vocabulary=frozenset(payload["vocabulary"]),
        )
    if kind == "winnow":
        return WinnowModel(
            theta=payload["theta"],
            alpha=payload["alpha"],
            beta=payload["beta"],
            weights={
                lab: {f: tuple(pair) for f, pair in w.items()}
                for lab, w in payload["weights"].items()
            },
            features=frozenset(payload["features"]),
        )
    if kind == "llda":
        return LLDAModel(
            topics=payload["topics"],
            phi=payload["phi"],
            a_doc=payload["a_doc"],
            a_word=payload["a_word"],
            iterations=payload["iterations"],
            seed=payload["seed"],
            vocabulary=frozenset(payload["vocabulary"]),
        )
    if kind == "semcla":
        return SemClaModel(
            classes=payload["classes"],
            alpha=payload["alpha"],
            mode=payload["mode"],
            centroids=payload.get("centroids"),
        )
    raise DataError("unknown model type %r in %s" % (kind, path))
