"""Model files: JSON documents carrying ``format_version`` and ``kind``."""
from __future__ import annotations

import json

from . import linear_sorter, mixture_sorter
from .errors import VersionError

FORMAT_VERSION = 1


def model_to_dict(model) -> dict:
    if isinstance(model, linear_sorter.LinearSorterModel):
        body = linear_sorter.model_to_dict(model)
    elif isinstance(model, mixture_sorter.MixtureSorterModel):
        body = mixture_sorter.model_to_dict(model)
    else:
        raise TypeError(f"not a model: {type(model).__name__}")
    return {"format_version": FORMAT_VERSION, **body}


def model_from_dict(d: dict):
    if d.get("format_version") != FORMAT_VERSION:
        raise VersionError(f"model format_version {d.get('format_version')!r}, expected {FORMAT_VERSION}")
    kind = d.get("kind")
    if kind == "linear":
        return linear_sorter.model_from_dict(d)
    if kind == "mixture":
        return mixture_sorter.model_from_dict(d)
    raise VersionError(f"unknown model kind {kind!r}")


def save_model(model, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, separators=(",", ":"))
        fh.write("\n")


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
